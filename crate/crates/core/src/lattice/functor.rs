//! A second, deliberately naive model of lattice paths used to cross-check
//! the word arithmetic in [`super::path`].
//!
//! The interval `[[n+1]]` is modelled as the poset of monotone maps
//! `[n] -> [1]`, stored as explicit 0/1 vectors. A path is the chain of
//! points it visits in the product of such posets, together with the index
//! of the point reached by each source object. Actions are computed by
//! literally precomposing those vectors with ordinal maps.

use super::ordinal::OrdinalMap;
use super::path::LatticePath;
use crate::error::{Error, Result};

type Point = Vec<Vec<u8>>;

/// Objects of `[[n+1]]` in increasing order.
pub fn interval_objects(n: usize) -> Vec<Vec<u8>> {
    let mut all: Vec<Vec<u8>> = OrdinalMap::all(n, 1)
        .into_iter()
        .map(|f| f.values().iter().map(|&v| v as u8).collect())
        .collect();
    all.sort_by_key(|v| v.iter().filter(|&&b| b == 1).count());
    all
}

fn precompose(v: &[u8], map: &OrdinalMap) -> Vec<u8> {
    map.values().iter().map(|&y| v[y]).collect()
}

fn ones(v: &[u8]) -> usize {
    v.iter().filter(|&&b| b == 1).count()
}

/// A lattice path stored as the chain of visited points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctorPath {
    in_degrees: Vec<usize>,
    out_degree: usize,
    points: Vec<Point>,
    /// Index in `points` of the image of each source object, endpoints included.
    marked: Vec<usize>,
}

impl FunctorPath {
    pub fn from_path(p: &LatticePath) -> Self {
        let objects: Vec<Vec<Vec<u8>>> = p
            .in_degrees()
            .iter()
            .map(|&n| interval_objects(n))
            .collect();
        let mut state = vec![0usize; p.arity()];
        let point = |state: &[usize]| -> Point {
            state
                .iter()
                .enumerate()
                .map(|(a, &s)| objects[a][s].clone())
                .collect()
        };
        let mut points = vec![point(&state)];
        for &a in p.word() {
            state[a] += 1;
            points.push(point(&state));
        }
        FunctorPath {
            in_degrees: p.in_degrees().to_vec(),
            out_degree: p.out_degree(),
            points,
            marked: p.boundaries(),
        }
    }

    pub fn to_path(&self) -> Result<LatticePath> {
        let mut word = Vec::new();
        for w in self.points.windows(2) {
            let moved: Vec<usize> = (0..w[0].len()).filter(|&a| w[0][a] != w[1][a]).collect();
            match moved.as_slice() {
                [a] if ones(&w[1][*a]) == ones(&w[0][*a]) + 1 => word.push(*a),
                _ => {
                    return Err(Error::InvalidPath(
                        "consecutive points are not one step apart".into(),
                    ))
                }
            }
        }
        let cuts = self.marked[1..self.marked.len() - 1].to_vec();
        LatticePath::new(self.in_degrees.clone(), self.out_degree, word, cuts)
    }

    /// Precomposes with the functor `[[n'+1]] -> [[n+1]]`, `g ↦ g ∘ map`.
    pub fn act_output(&self, map: &OrdinalMap) -> Result<FunctorPath> {
        if map.source() != self.out_degree {
            return Err(Error::InvalidMap(format!(
                "{map} does not start at the output"
            )));
        }
        let source_objects = interval_objects(self.out_degree);
        let marked = interval_objects(map.target())
            .iter()
            .map(|g| {
                let pulled = precompose(g, map);
                let idx = source_objects
                    .iter()
                    .position(|o| *o == pulled)
                    .expect("g ∘ map is an object");
                self.marked[idx]
            })
            .collect();
        Ok(FunctorPath {
            in_degrees: self.in_degrees.clone(),
            out_degree: map.target(),
            points: self.points.clone(),
            marked,
        })
    }

    /// Postcomposes coordinate `axis` with `v ↦ v ∘ map`, then refines the
    /// resulting jumps into unit steps and drops repeated points.
    pub fn act_argument(&self, axis: usize, map: &OrdinalMap) -> Result<FunctorPath> {
        if self.in_degrees.get(axis) != Some(&map.target()) {
            return Err(Error::InvalidMap(format!(
                "{map} does not land in argument {}",
                axis + 1
            )));
        }
        let objects = interval_objects(map.source());
        let image: Vec<Point> = self
            .points
            .iter()
            .map(|p| {
                let mut q = p.clone();
                q[axis] = precompose(&p[axis], map);
                q
            })
            .collect();
        let mut points = vec![image[0].clone()];
        let mut index_of = vec![0];
        for q in &image[1..] {
            let last = points.last().expect("nonempty").clone();
            let (from, to) = (ones(&last[axis]), ones(&q[axis]));
            for object in objects.iter().take(to).skip(from + 1) {
                let mut mid = last.clone();
                mid[axis] = object.clone();
                points.push(mid);
            }
            if *q != last {
                points.push(q.clone());
            }
            index_of.push(points.len() - 1);
        }
        let mut in_degrees = self.in_degrees.clone();
        in_degrees[axis] = map.source();
        Ok(FunctorPath {
            in_degrees,
            out_degree: self.out_degree,
            points,
            marked: self.marked.iter().map(|&m| index_of[m]).collect(),
        })
    }

    /// Composite `(inner_1 □ ... □ inner_k) ∘ outer`, walking the outer chain
    /// and following each inner functor along the moved coordinate.
    pub fn compose(
        outer: &FunctorPath,
        inners: &[FunctorPath],
        relabel: &[Vec<usize>],
        in_degrees: &[usize],
    ) -> Result<FunctorPath> {
        if inners.len() != outer.in_degrees.len() {
            return Err(Error::ColorMismatch("one inner path per argument".into()));
        }
        let objects: Vec<Vec<Vec<u8>>> = in_degrees.iter().map(|&n| interval_objects(n)).collect();
        let mut state: Vec<Vec<u8>> = objects.iter().map(|o| o[0].clone()).collect();
        let mut points = vec![state.clone()];
        let mut index_of = vec![0];
        for w in outer.points.windows(2) {
            let s = (0..w[0].len())
                .find(|&a| w[0][a] != w[1][a])
                .expect("outer steps move");
            let (from, to) = (ones(&w[0][s]), ones(&w[1][s]));
            let inner = &inners[s];
            for t in inner.marked[from]..inner.marked[to] {
                for (r, &g) in relabel[s].iter().enumerate() {
                    state[g] = inner.points[t + 1][r].clone();
                }
                points.push(state.clone());
            }
            index_of.push(points.len() - 1);
        }
        Ok(FunctorPath {
            in_degrees: in_degrees.to_vec(),
            out_degree: outer.out_degree,
            points,
            marked: outer.marked.iter().map(|&m| index_of[m]).collect(),
        })
    }
}

/// Every path obtained by walking the product grid one step at a time and
/// choosing a monotone image for the internal source objects.
pub fn enumerate_by_walking(in_degrees: &[usize], out_degree: usize) -> Vec<LatticePath> {
    fn walk(pos: &mut Vec<usize>, top: &[usize], word: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if pos.iter().zip(top).all(|(p, t)| p == t) {
            out.push(word.clone());
            return;
        }
        for a in 0..pos.len() {
            if pos[a] < top[a] {
                pos[a] += 1;
                word.push(a);
                walk(pos, top, word, out);
                word.pop();
                pos[a] -= 1;
            }
        }
    }
    let top: Vec<usize> = in_degrees.iter().map(|n| n + 1).collect();
    let mut words = Vec::new();
    walk(&mut vec![0; top.len()], &top, &mut Vec::new(), &mut words);
    let mut out = Vec::new();
    for word in words {
        let len = word.len();
        let placements: Vec<Vec<usize>> = if out_degree == 0 {
            vec![Vec::new()]
        } else {
            OrdinalMap::all(out_degree - 1, len)
                .into_iter()
                .map(|m| m.values().to_vec())
                .collect()
        };
        for cuts in placements {
            out.push(
                LatticePath::new(in_degrees.to_vec(), out_degree, word.clone(), cuts)
                    .expect("walks are paths"),
            );
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::path::{compose_paths, enumerate_paths, substitute};

    #[test]
    fn round_trip() {
        for p in enumerate_paths(&[1, 0], 2) {
            assert_eq!(FunctorPath::from_path(&p).to_path().unwrap(), p);
        }
    }

    #[test]
    fn actions_agree_with_word_arithmetic() {
        for p in enumerate_paths(&[1, 1], 1) {
            let f = FunctorPath::from_path(&p);
            for m in 0..3 {
                for map in OrdinalMap::all(m, 1) {
                    for axis in 0..2 {
                        let direct = p.act_argument(axis, &map).unwrap();
                        let oracle = f.act_argument(axis, &map).unwrap().to_path().unwrap();
                        assert_eq!(direct, oracle, "{p} axis {axis} {map}");
                    }
                }
                for map in OrdinalMap::all(1, m) {
                    assert_eq!(
                        p.act_output(&map).unwrap(),
                        f.act_output(&map).unwrap().to_path().unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn face_on_word_121() {
        let p = LatticePath::new(vec![1, 0], 0, vec![0, 1, 0], vec![]).unwrap();
        for j in 0..2 {
            let map = OrdinalMap::coface(1, j).unwrap();
            let direct = p.act_argument(0, &map).unwrap();
            let oracle = FunctorPath::from_path(&p)
                .act_argument(0, &map)
                .unwrap()
                .to_path()
                .unwrap();
            assert_eq!(direct, oracle);
            assert_eq!(direct.in_degrees(), &[0, 0]);
        }
    }

    #[test]
    fn composition_agrees() {
        let outer = LatticePath::new(vec![1, 0], 1, vec![0, 1, 0], vec![2]).unwrap();
        for inner in enumerate_paths(&[0, 0], 1) {
            let direct = compose_paths(&outer, 0, &inner).unwrap();
            let relabel = vec![vec![0, 1], vec![2]];
            let inners = vec![inner.clone(), LatticePath::identity(0)];
            let via_substitute = substitute(&outer, &inners, &relabel, vec![0, 0, 0]).unwrap();
            assert_eq!(direct, via_substitute);
            let fs: Vec<FunctorPath> = inners.iter().map(FunctorPath::from_path).collect();
            let oracle =
                FunctorPath::compose(&FunctorPath::from_path(&outer), &fs, &relabel, &[0, 0, 0])
                    .unwrap();
            assert_eq!(direct, oracle.to_path().unwrap());
        }
    }

    #[test]
    fn walking_enumeration_matches() {
        for degrees in [vec![0, 0], vec![1, 0], vec![1, 1], vec![0, 0, 0]] {
            for out in 0..3 {
                let mut a = enumerate_by_walking(&degrees, out);
                let mut b = enumerate_paths(&degrees, out);
                a.sort();
                b.sort();
                assert_eq!(a, b);
            }
        }
    }
}
