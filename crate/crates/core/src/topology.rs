//! Order complexes of finite posets and their integer homology.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::poset::FinitePoset;
use crate::snf::{invariant_factors, SparseMatrix};
use crate::trees::{quasi_bijection_exists, Numbering, TwoLeafTree};

/// A finite free chain complex `C_top -> ... -> C_0`.
#[derive(Debug, Clone)]
pub struct ChainComplex {
    dims: Vec<usize>,
    /// `boundaries[q - 1]` maps `C_q` to `C_{q-1}`, stored as a
    /// `dim C_{q-1} x dim C_q` matrix.
    boundaries: Vec<SparseMatrix>,
}

impl ChainComplex {
    /// Checks shapes and that consecutive boundaries compose to zero.
    pub fn new(dims: Vec<usize>, boundaries: Vec<SparseMatrix>) -> Result<Self> {
        if boundaries.len() + 1 != dims.len().max(1) {
            return Err(Error::InvalidPoset(format!(
                "{} boundary maps for {} chain groups",
                boundaries.len(),
                dims.len()
            )));
        }
        for (i, b) in boundaries.iter().enumerate() {
            if b.rows() != dims[i] || b.cols() != dims[i + 1] {
                return Err(Error::InvalidPoset(format!(
                    "boundary {} has the wrong shape",
                    i + 1
                )));
            }
        }
        for w in boundaries.windows(2) {
            let square = w[0].mul(&w[1]).expect("shapes checked");
            if !square.is_zero() {
                return Err(Error::InvalidPoset(
                    "boundary squares to a nonzero map".into(),
                ));
            }
        }
        Ok(ChainComplex { dims, boundaries })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn boundary(&self, q: usize) -> Option<&SparseMatrix> {
        q.checked_sub(1).and_then(|i| self.boundaries.get(i))
    }

    pub fn euler_characteristic(&self) -> i64 {
        alternating_sum(self.dims.iter().map(|&d| d as i64))
    }
}

fn alternating_sum(values: impl Iterator<Item = i64>) -> i64 {
    values
        .enumerate()
        .map(|(q, v)| if q % 2 == 0 { v } else { -v })
        .sum()
}

/// The order complex of a poset: simplices are strict chains.
#[derive(Debug, Clone)]
pub struct SimplicialComplexZ {
    /// `simplices[q]` lists the `q`-simplices as increasing chains of indices.
    pub simplices: Vec<Vec<Vec<usize>>>,
    pub chains: ChainComplex,
}

/// Number of nonempty strict chains, i.e. simplices of the order complex,
/// saturating at `u128::MAX`.
pub fn chain_count<T>(p: &FinitePoset<T>) -> u128 {
    let mut starting_at: Vec<Option<u128>> = vec![None; p.len()];
    fn visit<T>(p: &FinitePoset<T>, i: usize, memo: &mut [Option<u128>]) -> u128 {
        if let Some(n) = memo[i] {
            return n;
        }
        let above: Vec<usize> = p.upset(i).filter(|&j| j != i).collect();
        let n = above
            .into_iter()
            .fold(1u128, |acc, j| acc.saturating_add(visit(p, j, memo)));
        memo[i] = Some(n);
        n
    }
    (0..p.len()).fold(0u128, |acc, i| {
        acc.saturating_add(visit(p, i, &mut starting_at))
    })
}

/// Order complex with a cap on the number of simplices.
pub fn order_complex_capped<T>(p: &FinitePoset<T>, cap: u128) -> Result<SimplicialComplexZ> {
    let size = chain_count(p);
    if size > cap {
        return Err(Error::SizeCap { size, cap });
    }
    Ok(order_complex(p))
}

pub fn order_complex<T>(p: &FinitePoset<T>) -> SimplicialComplexZ {
    let mut simplices: Vec<Vec<Vec<usize>>> = Vec::new();
    let mut stack: Vec<Vec<usize>> = (0..p.len()).rev().map(|i| vec![i]).collect();
    while let Some(chain) = stack.pop() {
        let q = chain.len() - 1;
        if simplices.len() <= q {
            simplices.resize(q + 1, Vec::new());
        }
        let top = *chain.last().expect("nonempty");
        let mut next: Vec<usize> = p.upset(top).filter(|&j| j != top).collect();
        next.reverse();
        for j in next {
            let mut c = chain.clone();
            c.push(j);
            stack.push(c);
        }
        simplices[q].push(chain);
    }
    for level in &mut simplices {
        level.sort();
    }
    let dims: Vec<usize> = simplices.iter().map(Vec::len).collect();
    let boundaries = (1..simplices.len())
        .map(|q| {
            let index: HashMap<&[usize], usize> = simplices[q - 1]
                .iter()
                .enumerate()
                .map(|(i, s)| (s.as_slice(), i))
                .collect();
            let mut m = SparseMatrix::zeros(dims[q - 1], dims[q]);
            for (c, s) in simplices[q].iter().enumerate() {
                for t in 0..s.len() {
                    let mut face = s.clone();
                    face.remove(t);
                    let sign = if t % 2 == 0 {
                        BigInt::one()
                    } else {
                        -BigInt::one()
                    };
                    m.add(index[face.as_slice()], c, &sign);
                }
            }
            m
        })
        .collect();
    let chains = ChainComplex::new(dims, boundaries).expect("order complexes satisfy d^2 = 0");
    SimplicialComplexZ { simplices, chains }
}

fn serialize_bigints<S: Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|b| b.to_string()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeHomology {
    pub degree: usize,
    pub betti: usize,
    #[serde(serialize_with = "serialize_bigints")]
    pub torsion: Vec<BigInt>,
}

/// Unreduced integer homology, one entry per chain degree.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomologyReport {
    pub degrees: Vec<DegreeHomology>,
    pub generators: Vec<usize>,
}

impl HomologyReport {
    pub fn betti(&self) -> Vec<usize> {
        self.degrees.iter().map(|d| d.betti).collect()
    }

    /// Betti numbers of reduced homology.
    pub fn reduced_betti(&self) -> Vec<usize> {
        let mut b = self.betti();
        if let Some(b0) = b.first_mut() {
            *b0 = b0.saturating_sub(1);
        }
        b
    }

    pub fn has_torsion(&self) -> bool {
        self.degrees.iter().any(|d| !d.torsion.is_empty())
    }

    /// Reduced homology vanishes, i.e. the homology of a point.
    pub fn is_acyclic(&self) -> bool {
        !self.generators.is_empty()
            && self.generators[0] > 0
            && !self.has_torsion()
            && self.reduced_betti().iter().all(|&b| b == 0)
    }

    /// Homology of the sphere of the given dimension.
    pub fn is_sphere(&self, dim: usize) -> bool {
        let mut expected = vec![0; self.degrees.len().max(dim + 1)];
        expected[dim] = 1;
        let mut reduced = self.reduced_betti();
        reduced.resize(expected.len(), 0);
        !self.has_torsion() && reduced == expected
    }

    pub fn euler_from_generators(&self) -> i64 {
        alternating_sum(self.generators.iter().map(|&d| d as i64))
    }

    pub fn euler_from_betti(&self) -> i64 {
        alternating_sum(self.degrees.iter().map(|d| d.betti as i64))
    }

    /// `degree,betti,torsion` rows; torsion coefficients are `;`-separated.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("degree,betti,torsion\n");
        for d in &self.degrees {
            let torsion: Vec<String> = d.torsion.iter().map(|t| t.to_string()).collect();
            writeln!(out, "{},{},{}", d.degree, d.betti, torsion.join(";")).unwrap();
        }
        out
    }
}

pub fn homology(c: &ChainComplex) -> HomologyReport {
    let factors: Vec<Vec<BigInt>> = c.boundaries.par_iter().map(invariant_factors).collect();
    let rank = |q: usize| {
        q.checked_sub(1)
            .and_then(|i| factors.get(i))
            .map_or(0, Vec::len)
    };
    let degrees = (0..c.dims.len())
        .map(|q| DegreeHomology {
            degree: q,
            betti: c.dims[q] - rank(q) - rank(q + 1),
            torsion: factors
                .get(q)
                .map(|f| f.iter().filter(|x| !x.is_one()).cloned().collect())
                .unwrap_or_default(),
        })
        .collect();
    HomologyReport {
        degrees,
        generators: c.dims.clone(),
    }
}

pub fn poset_homology<T>(p: &FinitePoset<T>) -> HomologyReport {
    homology(&order_complex(p).chains)
}

pub fn poset_homology_capped<T>(p: &FinitePoset<T>, cap: u128) -> Result<HomologyReport> {
    Ok(homology(&order_complex_capped(p, cap)?.chains))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BeatKind {
    /// The strict upset has a minimum.
    Up,
    /// The strict downset has a maximum.
    Down,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BeatStep {
    pub removed: usize,
    pub kind: BeatKind,
    pub dominated_by: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "lowercase")]
pub enum Dismantling {
    Certificate {
        steps: Vec<BeatStep>,
        point: usize,
    },
    Failure {
        steps: Vec<BeatStep>,
        core: Vec<usize>,
    },
}

impl Dismantling {
    pub fn is_certificate(&self) -> bool {
        matches!(self, Dismantling::Certificate { .. })
    }
}

/// Removes beat points, lowest index first, until none remain.
pub fn dismantle<T>(p: &FinitePoset<T>) -> Dismantling {
    let mut alive = vec![true; p.len()];
    let mut steps = Vec::new();
    loop {
        let remaining: Vec<usize> = (0..p.len()).filter(|&i| alive[i]).collect();
        if remaining.len() == 1 {
            return Dismantling::Certificate {
                steps,
                point: remaining[0],
            };
        }
        let step = remaining.iter().find_map(|&x| beat(p, &alive, x));
        match step {
            Some(s) => {
                alive[s.removed] = false;
                steps.push(s);
            }
            None => {
                return Dismantling::Failure {
                    steps,
                    core: remaining,
                }
            }
        }
    }
}

fn beat<T>(p: &FinitePoset<T>, alive: &[bool], x: usize) -> Option<BeatStep> {
    let above: Vec<usize> = p.upset(x).filter(|&y| y != x && alive[y]).collect();
    if let Some(&m) = above.iter().find(|&&m| above.iter().all(|&y| p.le(m, y))) {
        return Some(BeatStep {
            removed: x,
            kind: BeatKind::Up,
            dominated_by: m,
        });
    }
    let below: Vec<usize> = p.downset(x).filter(|&y| y != x && alive[y]).collect();
    below
        .iter()
        .find(|&&m| below.iter().all(|&y| p.le(y, m)))
        .map(|&m| BeatStep {
            removed: x,
            kind: BeatKind::Down,
            dominated_by: m,
        })
}

/// The poset of two-leaf pruned `n`-trees under quasi-bijections.
pub fn milgram_poset(n: usize) -> Result<FinitePoset<TwoLeafTree>> {
    if n == 0 {
        return Err(Error::LevelOutOfRange { level: 0, depth: 0 });
    }
    let elements: Vec<TwoLeafTree> = (0..n)
        .flat_map(|a| [Numbering::Id, Numbering::Swap].map(|e| TwoLeafTree { n, a, numbering: e }))
        .collect();
    FinitePoset::from_relation(elements, |x, y| {
        quasi_bijection_exists(n, x.a, x.numbering, y.a, y.numbering).expect("levels in range")
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(n: usize) -> FinitePoset<usize> {
        FinitePoset::from_relation((0..n).collect(), |a, b| a <= b).unwrap()
    }

    #[test]
    fn chain_complex() {
        let c = order_complex(&chain(2));
        assert_eq!(c.chains.dims(), &[2, 1]);
        let h = homology(&c.chains);
        assert!(h.is_acyclic());
        assert_eq!(h.euler_from_betti(), h.euler_from_generators());
    }

    #[test]
    fn chain_count_matches_simplices() {
        for n in 0..6 {
            assert_eq!(chain_count(&chain(n)), (1u128 << n) - 1);
        }
        let m = milgram_poset(3).unwrap();
        let total: usize = order_complex(&m).chains.dims().iter().sum();
        assert_eq!(chain_count(&m), total as u128);
        assert!(matches!(
            order_complex_capped(&m, 3),
            Err(Error::SizeCap { .. })
        ));
    }

    #[test]
    fn point_and_empty() {
        assert!(poset_homology(&chain(1)).is_acyclic());
        let empty = poset_homology(&chain(0));
        assert!(!empty.is_acyclic());
        assert_eq!(empty.to_csv(), "degree,betti,torsion\n");
    }

    #[test]
    fn milgram_small() {
        let m1 = milgram_poset(1).unwrap();
        assert_eq!(poset_homology(&m1).betti(), vec![2]);
        let m2 = milgram_poset(2).unwrap();
        assert!(poset_homology(&m2).is_sphere(1));
        match dismantle(&m2) {
            Dismantling::Failure { core, steps } => {
                assert_eq!(core.len(), 4);
                assert!(steps.is_empty());
            }
            other => panic!("crown should not dismantle: {other:?}"),
        }
    }

    #[test]
    fn dismantle_with_maximum() {
        let p = FinitePoset::from_relation(vec![0u8, 1, 2], |a, b| a == b || *b == 2).unwrap();
        assert!(dismantle(&p).is_certificate());
    }

    #[test]
    fn csv_rows() {
        let h = poset_homology(&milgram_poset(2).unwrap());
        assert_eq!(h.to_csv(), "degree,betti,torsion\n0,1,\n1,1,\n");
    }

    #[test]
    fn torsion_is_detected() {
        // Z --2--> Z has cokernel Z/2 in degree 0.
        let c = ChainComplex::new(vec![1, 1], vec![SparseMatrix::from_dense(&[vec![2]])]).unwrap();
        let h = homology(&c);
        assert_eq!(h.betti(), vec![0, 0]);
        assert_eq!(h.degrees[0].torsion, vec![BigInt::from(2)]);
    }
}
