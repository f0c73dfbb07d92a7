//! Classical lattice paths: a staircase word over the axes plus a multiset of
//! cut positions marking the images of the internal source objects.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::ordinal::OrdinalMap;
use crate::error::{Error, Result};
use crate::signatures::{berger_leq, BergerElement, Factor};

/// A lattice path `[[out+1]] -> [[n_1+1]] □ ... □ [[n_k+1]]`.
///
/// Axes are 0-based internally and 1-based in the serialized form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "PathRecord", into = "PathRecord")]
pub struct LatticePath {
    in_degrees: Vec<usize>,
    out_degree: usize,
    word: Vec<usize>,
    cuts: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct Degrees {
    #[serde(rename = "in")]
    inputs: Vec<usize>,
    out: usize,
}

#[derive(Serialize, Deserialize)]
struct PathRecord {
    word: Vec<usize>,
    cuts: Vec<usize>,
    degrees: Degrees,
}

impl TryFrom<PathRecord> for LatticePath {
    type Error = Error;

    fn try_from(r: PathRecord) -> Result<Self> {
        if r.word.contains(&0) {
            return Err(Error::InvalidPath("axes are numbered from 1".into()));
        }
        let word = r.word.iter().map(|a| a - 1).collect();
        LatticePath::new(r.degrees.inputs, r.degrees.out, word, r.cuts)
    }
}

impl From<LatticePath> for PathRecord {
    fn from(p: LatticePath) -> Self {
        PathRecord {
            word: p.word.iter().map(|a| a + 1).collect(),
            cuts: p.cuts,
            degrees: Degrees {
                inputs: p.in_degrees,
                out: p.out_degree,
            },
        }
    }
}

impl LatticePath {
    pub fn new(
        in_degrees: Vec<usize>,
        out_degree: usize,
        word: Vec<usize>,
        cuts: Vec<usize>,
    ) -> Result<Self> {
        let mut counts = vec![0usize; in_degrees.len()];
        for &a in &word {
            match counts.get_mut(a) {
                Some(c) => *c += 1,
                None => return Err(Error::InvalidPath(format!("axis {} out of range", a + 1))),
            }
        }
        for (i, (&c, &n)) in counts.iter().zip(&in_degrees).enumerate() {
            if c != n + 1 {
                return Err(Error::InvalidPath(format!(
                    "axis {} appears {c} times, expected {}",
                    i + 1,
                    n + 1
                )));
            }
        }
        if cuts.len() != out_degree {
            return Err(Error::InvalidPath(format!(
                "{} cuts for output degree {out_degree}",
                cuts.len()
            )));
        }
        if cuts.windows(2).any(|w| w[0] > w[1]) || cuts.last().is_some_and(|&c| c > word.len()) {
            return Err(Error::InvalidPath(format!(
                "cuts {cuts:?} are not sorted within 0..={}",
                word.len()
            )));
        }
        Ok(LatticePath {
            in_degrees,
            out_degree,
            word,
            cuts,
        })
    }

    /// The identity functor on `[[n+1]]`.
    pub fn identity(n: usize) -> Self {
        LatticePath {
            in_degrees: vec![n],
            out_degree: n,
            word: vec![0; n + 1],
            cuts: (1..=n).collect(),
        }
    }

    pub fn arity(&self) -> usize {
        self.in_degrees.len()
    }

    pub fn in_degrees(&self) -> &[usize] {
        &self.in_degrees
    }

    pub fn out_degree(&self) -> usize {
        self.out_degree
    }

    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn cuts(&self) -> &[usize] {
        &self.cuts
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    /// Positions of all source objects, endpoints included.
    pub fn boundaries(&self) -> Vec<usize> {
        let mut b = Vec::with_capacity(self.out_degree + 2);
        b.push(0);
        b.extend_from_slice(&self.cuts);
        b.push(self.word.len());
        b
    }

    /// The letters between source objects `r - 1` and `r`, for `r` in `1..=out+1`.
    pub fn segment(&self, r: usize) -> &[usize] {
        let b = self.boundaries();
        &self.word[b[r - 1]..b[r]]
    }

    /// Coordinates reached after the first `position` letters.
    pub fn coordinates(&self, position: usize) -> Vec<usize> {
        let mut c = vec![0; self.arity()];
        for &a in &self.word[..position] {
            c[a] += 1;
        }
        c
    }

    /// Coordinates of the image of source object `s`.
    pub fn object_coordinates(&self, s: usize) -> Vec<usize> {
        self.coordinates(self.boundaries()[s])
    }

    /// Restriction to the given axes, renumbered in the order listed.
    pub fn projection(&self, axes: &[usize]) -> Result<LatticePath> {
        let mut local = BTreeMap::new();
        for (r, &a) in axes.iter().enumerate() {
            if a >= self.arity() || local.insert(a, r).is_some() {
                return Err(Error::InvalidPath(format!("bad axis list {axes:?}")));
            }
        }
        let mut word = Vec::new();
        let mut prefix = vec![0];
        for &a in &self.word {
            if let Some(&r) = local.get(&a) {
                word.push(r);
            }
            prefix.push(word.len());
        }
        let cuts = self.cuts.iter().map(|&c| prefix[c]).collect();
        LatticePath::new(
            axes.iter().map(|&a| self.in_degrees[a]).collect(),
            self.out_degree,
            word,
            cuts,
        )
    }

    /// The `K(2)` parameters of the projection to axes `i < j`.
    pub fn pair_factor(&self, i: usize, j: usize) -> Factor {
        pair_factor_of(&self.word, i, j)
    }

    pub fn params(&self) -> BergerElement {
        BergerElement::from_pairs(self.arity(), |i, j| self.pair_factor(i, j))
            .expect("pairwise leads of a single word come from one permutation")
    }

    /// The largest number of direction changes over all pairs.
    pub fn complexity(&self) -> usize {
        let k = self.arity();
        (0..k)
            .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
            .map(|(i, j)| self.pair_factor(i, j).len() - 1)
            .max()
            .unwrap_or(0)
    }

    pub fn in_block(&self, bound: &BergerElement) -> Result<bool> {
        berger_leq(&self.params(), bound)
    }

    /// The first `j` such that this path is the `j`-th degeneracy of another
    /// path along `axis`: two consecutive steps of that axis with no cut between.
    pub fn degeneracy_along(&self, axis: usize) -> Option<usize> {
        let mut cut_at = vec![false; self.word.len() + 1];
        for &c in &self.cuts {
            cut_at[c] = true;
        }
        let mut occurrence = 0;
        for p in 0..self.word.len() {
            if self.word[p] == axis {
                if p + 1 < self.word.len() && self.word[p + 1] == axis && !cut_at[p + 1] {
                    return Some(occurrence);
                }
                occurrence += 1;
            }
        }
        None
    }

    pub fn is_nondegenerate(&self) -> bool {
        (0..self.arity()).all(|a| self.degeneracy_along(a).is_none())
    }

    /// The contravariant action of `map: [m] -> [n_axis]` on one argument.
    pub fn act_argument(&self, axis: usize, map: &OrdinalMap) -> Result<LatticePath> {
        if axis >= self.arity() || map.target() != self.in_degrees[axis] {
            return Err(Error::InvalidMap(format!(
                "{map} does not land in argument {} of degrees {:?}",
                axis + 1,
                self.in_degrees
            )));
        }
        let dual = map.joyal_dual();
        let mut word = Vec::with_capacity(self.word.len() + map.source());
        let mut prefix = vec![0];
        let mut seen = 0;
        for &a in &self.word {
            if a == axis {
                seen += 1;
                let copies = dual[seen] - dual[seen - 1];
                word.extend(std::iter::repeat_n(axis, copies));
            } else {
                word.push(a);
            }
            prefix.push(word.len());
        }
        let mut in_degrees = self.in_degrees.clone();
        in_degrees[axis] = map.source();
        let cuts = self.cuts.iter().map(|&c| prefix[c]).collect();
        LatticePath::new(in_degrees, self.out_degree, word, cuts)
    }

    /// The covariant action of `map: [out] -> [n']` on the output.
    pub fn act_output(&self, map: &OrdinalMap) -> Result<LatticePath> {
        if map.source() != self.out_degree {
            return Err(Error::InvalidMap(format!(
                "{map} does not start at output degree {}",
                self.out_degree
            )));
        }
        let dual = map.joyal_dual();
        let b = self.boundaries();
        let cuts = (1..=map.target()).map(|s| b[dual[s]]).collect();
        LatticePath::new(
            self.in_degrees.clone(),
            map.target(),
            self.word.clone(),
            cuts,
        )
    }

    /// Drops every cut, keeping the geometric staircase.
    pub fn geometric(&self) -> LatticePath {
        LatticePath {
            in_degrees: self.in_degrees.clone(),
            out_degree: 0,
            word: self.word.clone(),
            cuts: Vec::new(),
        }
    }
}

impl fmt::Display for LatticePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut cut = self.cuts.iter().peekable();
        for p in 0..=self.word.len() {
            while cut.next_if(|&&c| c == p).is_some() {
                write!(f, "|")?;
            }
            if let Some(a) = self.word.get(p) {
                write!(f, "{}", a + 1)?;
            }
        }
        Ok(())
    }
}

/// Direction changes and first mover of the `(i, j)` projection of a word.
pub(crate) fn pair_factor_of(word: &[usize], i: usize, j: usize) -> Factor {
    let mut runs = 0;
    let mut last = None;
    let mut lead = 1;
    for &a in word.iter().filter(|&&a| a == i || a == j) {
        if last.is_none() {
            lead = if a == i { 1 } else { 2 };
        }
        if last != Some(a) {
            runs += 1;
            last = Some(a);
        }
    }
    Factor::new(runs.max(2), lead).expect("run count is at least two")
}

pub fn path_params(path: &LatticePath) -> BergerElement {
    path.params()
}

/// Replaces every step of outer argument `s` by the matching segment of
/// `inners[s]`, whose axes are renamed by `relabel[s]` into the composite.
pub fn substitute(
    outer: &LatticePath,
    inners: &[LatticePath],
    relabel: &[Vec<usize>],
    in_degrees: Vec<usize>,
) -> Result<LatticePath> {
    if inners.len() != outer.arity() || relabel.len() != outer.arity() {
        return Err(Error::ColorMismatch(format!(
            "{} inner paths for an outer path of arity {}",
            inners.len(),
            outer.arity()
        )));
    }
    for (s, inner) in inners.iter().enumerate() {
        if inner.out_degree != outer.in_degrees[s] {
            return Err(Error::ColorMismatch(format!(
                "argument {} has degree {} but the inner path outputs degree {}",
                s + 1,
                outer.in_degrees[s],
                inner.out_degree
            )));
        }
        if relabel[s].len() != inner.arity() {
            return Err(Error::ColorMismatch(format!(
                "relabelling of argument {} has the wrong length",
                s + 1
            )));
        }
        for (r, &g) in relabel[s].iter().enumerate() {
            if in_degrees.get(g) != Some(&inner.in_degrees[r]) {
                return Err(Error::ColorMismatch(format!(
                    "inner axis {} of argument {} does not match composite axis {}",
                    r + 1,
                    s + 1,
                    g + 1
                )));
            }
        }
    }
    let bounds: Vec<Vec<usize>> = inners.iter().map(LatticePath::boundaries).collect();
    let mut seen = vec![0usize; inners.len()];
    let mut word = Vec::new();
    let mut prefix = vec![0];
    for &s in &outer.word {
        seen[s] += 1;
        let r = seen[s];
        let piece = &inners[s].word[bounds[s][r - 1]..bounds[s][r]];
        word.extend(piece.iter().map(|&a| relabel[s][a]));
        prefix.push(word.len());
    }
    let cuts = outer.cuts.iter().map(|&c| prefix[c]).collect();
    LatticePath::new(in_degrees, outer.out_degree, word, cuts)
}

/// Partial composition `outer ∘_slot inner`: the inner axes take the place
/// of argument `slot`.
pub fn compose_paths(outer: &LatticePath, slot: usize, inner: &LatticePath) -> Result<LatticePath> {
    if slot >= outer.arity() {
        return Err(Error::ColorMismatch(format!(
            "slot {} beyond arity {}",
            slot + 1,
            outer.arity()
        )));
    }
    let k = inner.arity();
    let mut inners = Vec::with_capacity(outer.arity());
    let mut relabel = Vec::with_capacity(outer.arity());
    let mut in_degrees = Vec::new();
    for (s, &n) in outer.in_degrees.iter().enumerate() {
        if s == slot {
            inners.push(inner.clone());
            relabel.push((slot..slot + k).collect());
            in_degrees.extend_from_slice(&inner.in_degrees);
        } else {
            inners.push(LatticePath::identity(n));
            relabel.push(vec![if s < slot { s } else { s + k - 1 }]);
            in_degrees.push(n);
        }
    }
    substitute(outer, &inners, &relabel, in_degrees)
}

/// All shuffles containing axis `i` exactly `degrees[i] + 1` times, in
/// lexicographic order.
pub fn shuffle_words(degrees: &[usize]) -> Vec<Vec<usize>> {
    fn rec(left: &mut [usize], current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left.iter().all(|&c| c == 0) {
            out.push(current.clone());
            return;
        }
        for a in 0..left.len() {
            if left[a] > 0 {
                left[a] -= 1;
                current.push(a);
                rec(left, current, out);
                current.pop();
                left[a] += 1;
            }
        }
    }
    let mut left: Vec<usize> = degrees.iter().map(|n| n + 1).collect();
    let mut out = Vec::new();
    rec(&mut left, &mut Vec::new(), &mut out);
    out
}

/// All sorted multisets of `count` positions in `0..=max`.
pub(crate) fn cut_multisets(count: usize, max: usize) -> Vec<Vec<usize>> {
    if count == 0 {
        return vec![Vec::new()];
    }
    OrdinalMap::all(count - 1, max)
        .into_iter()
        .map(|m| m.values().to_vec())
        .collect()
}

pub fn enumerate_paths(in_degrees: &[usize], out_degree: usize) -> Vec<LatticePath> {
    let mut out = Vec::new();
    for word in shuffle_words(in_degrees) {
        for cuts in cut_multisets(out_degree, word.len()) {
            out.push(LatticePath {
                in_degrees: in_degrees.to_vec(),
                out_degree,
                word: word.clone(),
                cuts,
            });
        }
    }
    out
}

/// Closed-form size of [`enumerate_paths`]: shuffles times cut placements.
pub fn count_paths(in_degrees: &[usize], out_degree: usize) -> u128 {
    let total: usize = in_degrees.iter().map(|n| n + 1).sum();
    let mut shuffles = 1u128;
    let mut placed = 0;
    for n in in_degrees {
        for t in 1..=n + 1 {
            placed += 1;
            shuffles = shuffles * placed as u128 / t as u128;
        }
    }
    shuffles * binomial((total + out_degree) as u128, out_degree as u128)
}

fn binomial(n: u128, k: u128) -> u128 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(word: &[usize], in_degrees: &[usize], cuts: &[usize]) -> LatticePath {
        LatticePath::new(
            in_degrees.to_vec(),
            cuts.len(),
            word.iter().map(|a| a - 1).collect(),
            cuts.to_vec(),
        )
        .unwrap()
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_paths(&[0, 0], 0).len(), 2);
        assert_eq!(enumerate_paths(&[0], 0).len(), 1);
        let words: Vec<String> = enumerate_paths(&[1, 0], 0)
            .iter()
            .map(|p| p.to_string())
            .collect();
        assert_eq!(words, ["112", "121", "211"]);
        for degrees in [vec![1, 2], vec![0, 0, 1], vec![2]] {
            for out in 0..3 {
                assert_eq!(
                    enumerate_paths(&degrees, out).len() as u128,
                    count_paths(&degrees, out)
                );
            }
        }
    }

    #[test]
    fn params_of_small_words() {
        let f = |w: &[usize]| {
            path(
                w,
                &[
                    w.iter().filter(|&&a| a == 1).count() - 1,
                    w.iter().filter(|&&a| a == 2).count() - 1,
                ],
                &[],
            )
            .pair_factor(0, 1)
            .to_string()
        };
        assert_eq!(f(&[1, 2, 1]), "(121)");
        assert_eq!(f(&[1, 2]), "(12)");
        assert_eq!(f(&[2, 1, 1, 2]), "(212)");
    }

    #[test]
    fn membership_in_a_block() {
        let p = path(&[1, 2, 1], &[1, 0], &[]);
        assert!(p
            .in_block(&BergerElement::from_factor(Factor::parse("121").unwrap()))
            .unwrap());
        assert!(!p
            .in_block(&BergerElement::from_factor(Factor::parse("12").unwrap()))
            .unwrap());
        assert!(p.in_block(&p.params()).unwrap());
    }

    #[test]
    fn codegeneracy_removes_a_cut() {
        let p = path(&[1, 2, 1], &[1, 0], &[2]);
        let q = p
            .act_output(&OrdinalMap::codegeneracy(0, 0).unwrap())
            .unwrap();
        assert_eq!(q.cuts(), &[] as &[usize]);
        assert_eq!(q.word(), p.word());
        assert_eq!(p.act_output(&OrdinalMap::identity(1)).unwrap(), p);
        assert_eq!(p.act_argument(0, &OrdinalMap::identity(1)).unwrap(), p);
    }

    #[test]
    fn argument_face_and_degeneracy() {
        let p = path(&[1, 2, 1], &[1, 0], &[1]);
        let face = p
            .act_argument(0, &OrdinalMap::coface(1, 0).unwrap())
            .unwrap();
        assert_eq!(face.in_degrees(), &[0, 0]);
        let degenerate = p
            .act_argument(1, &OrdinalMap::codegeneracy(0, 0).unwrap())
            .unwrap();
        assert_eq!(degenerate.to_string(), "1|221");
        assert_eq!(degenerate.degeneracy_along(1), Some(0));
        assert!(p.is_nondegenerate());
    }

    #[test]
    fn identity_is_a_unit() {
        let p = path(&[1, 2, 1, 2], &[1, 1], &[1, 3]);
        let left = substitute(
            &LatticePath::identity(2),
            std::slice::from_ref(&p),
            &[vec![0, 1]],
            vec![1, 1],
        )
        .unwrap();
        assert_eq!(left, p);
        for slot in 0..2 {
            let right = compose_paths(&p, slot, &LatticePath::identity(1)).unwrap();
            assert_eq!(right, p);
        }
    }

    #[test]
    fn composition_checks_colors() {
        let p = path(&[1, 2], &[0, 0], &[]);
        assert!(compose_paths(&p, 0, &LatticePath::identity(1)).is_err());
        assert!(compose_paths(&p, 2, &LatticePath::identity(0)).is_err());
    }

    #[test]
    fn serde_round_trip() {
        let p = path(&[1, 2, 1], &[1, 0], &[0, 2]);
        let text = serde_json::to_string(&p).unwrap();
        assert_eq!(
            text,
            r#"{"word":[1,2,1],"cuts":[0,2],"degrees":{"in":[1,0],"out":2}}"#
        );
        let back: LatticePath = serde_json::from_str(&text).unwrap();
        assert_eq!(back, p);
        assert!(serde_json::from_str::<LatticePath>(
            r#"{"word":[1,1],"cuts":[],"degrees":{"in":[0],"out":0}}"#
        )
        .is_err());
    }
}
