//! Sparse integer matrices and their Smith normal form.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// A row-major sparse matrix over the integers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BTreeMap<usize, BigInt>>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix {
            rows,
            cols,
            data: vec![BTreeMap::new(); rows],
        }
    }

    pub fn from_dense(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = SparseMatrix::zeros(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                m.add(r, c, &BigInt::from(v));
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(BTreeMap::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.nnz() == 0
    }

    pub fn get(&self, r: usize, c: usize) -> BigInt {
        self.data[r].get(&c).cloned().unwrap_or_default()
    }

    pub fn add(&mut self, r: usize, c: usize, v: &BigInt) {
        assert!(
            r < self.rows && c < self.cols,
            "entry ({r}, {c}) out of bounds"
        );
        let entry = self.data[r].entry(c).or_default();
        *entry += v;
        if entry.is_zero() {
            self.data[r].remove(&c);
        }
    }

    pub fn row(&self, r: usize) -> &BTreeMap<usize, BigInt> {
        &self.data[r]
    }

    /// `self * other`, or `None` on a shape mismatch.
    pub fn mul(&self, other: &SparseMatrix) -> Option<SparseMatrix> {
        if self.cols != other.rows {
            return None;
        }
        let mut out = SparseMatrix::zeros(self.rows, other.cols);
        for (r, row) in self.data.iter().enumerate() {
            for (&k, a) in row {
                for (&c, b) in &other.data[k] {
                    out.add(r, c, &(a * b));
                }
            }
        }
        Some(out)
    }
}

/// The nonzero invariant factors of `m`, each dividing the next.
pub fn invariant_factors(m: &SparseMatrix) -> Vec<BigInt> {
    let mut work = Elimination::new(m);
    let mut diagonal = Vec::new();
    while let Some((r, c)) = work.smallest_entry() {
        diagonal.push(work.reduce_pivot(r, c));
    }
    normalize_chain(diagonal)
}

pub fn rank(m: &SparseMatrix) -> usize {
    invariant_factors(m).len()
}

/// Turns a diagonal into a divisibility chain with the same cokernel.
fn normalize_chain(mut d: Vec<BigInt>) -> Vec<BigInt> {
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            let g = d[i].gcd(&d[j]);
            let l = d[i].lcm(&d[j]);
            d[i] = g;
            d[j] = l;
        }
    }
    d
}

struct Elimination {
    rows: Vec<BTreeMap<usize, BigInt>>,
    cols: Vec<BTreeSet<usize>>,
}

impl Elimination {
    fn new(m: &SparseMatrix) -> Self {
        let mut cols = vec![BTreeSet::new(); m.cols];
        for (r, row) in m.data.iter().enumerate() {
            for &c in row.keys() {
                cols[c].insert(r);
            }
        }
        Elimination {
            rows: m.data.clone(),
            cols,
        }
    }

    fn smallest_entry(&self) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, BigInt)> = None;
        for (r, row) in self.rows.iter().enumerate() {
            for (&c, v) in row {
                let a = v.abs();
                if best.as_ref().is_none_or(|(_, _, b)| a < *b) {
                    let unit = a.is_one();
                    best = Some((r, c, a));
                    if unit {
                        return best.map(|(r, c, _)| (r, c));
                    }
                }
            }
        }
        best.map(|(r, c, _)| (r, c))
    }

    fn set(&mut self, r: usize, c: usize, v: BigInt) {
        if v.is_zero() {
            self.rows[r].remove(&c);
            self.cols[c].remove(&r);
        } else {
            self.rows[r].insert(c, v);
            self.cols[c].insert(r);
        }
    }

    /// `row[target] -= q * row[source]`.
    fn subtract_row(&mut self, target: usize, source: usize, q: &BigInt) {
        let pivot_row: Vec<(usize, BigInt)> = self.rows[source]
            .iter()
            .map(|(c, v)| (*c, v.clone()))
            .collect();
        for (c, v) in pivot_row {
            let current = self.rows[target].get(&c).cloned().unwrap_or_default();
            self.set(target, c, current - q * v);
        }
    }

    /// Clears the row and column of the pivot, moving it to smaller entries
    /// as remainders appear, and returns the absolute value of the final pivot.
    fn reduce_pivot(&mut self, mut pr: usize, mut pc: usize) -> BigInt {
        loop {
            let p = self.rows[pr][&pc].clone();
            let others: Vec<usize> = self.cols[pc].iter().copied().filter(|&r| r != pr).collect();
            let mut smaller = None;
            for r in others {
                let q = self.rows[r][&pc].div_floor(&p);
                self.subtract_row(r, pr, &q);
                if self.rows[r].contains_key(&pc) {
                    smaller = Some(r);
                }
            }
            if let Some(r) = smaller {
                pr = r;
                continue;
            }
            let others: Vec<usize> = self.rows[pr].keys().copied().filter(|&c| c != pc).collect();
            let mut smaller = None;
            for c in others {
                let a = self.rows[pr][&c].clone();
                let rem = &a - a.div_floor(&p) * &p;
                if !rem.is_zero() {
                    smaller = Some(c);
                }
                self.set(pr, c, rem);
            }
            if let Some(c) = smaller {
                pc = c;
                continue;
            }
            self.set(pr, pc, BigInt::zero());
            return p.abs();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn factors(rows: &[Vec<i64>]) -> Vec<i64> {
        invariant_factors(&SparseMatrix::from_dense(rows))
            .into_iter()
            .map(|b| i64::try_from(b).unwrap())
            .collect()
    }

    #[test]
    fn diagonal_is_normalized() {
        assert_eq!(factors(&[vec![2, 0], vec![0, 3]]), vec![1, 6]);
        assert_eq!(factors(&[vec![4, 0], vec![0, 6]]), vec![2, 12]);
    }

    #[test]
    fn classic_example() {
        let m = vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]];
        assert_eq!(factors(&m), vec![2, 6, 12]);
    }

    #[test]
    fn rank_deficient() {
        assert_eq!(factors(&[vec![1, 2], vec![2, 4]]), vec![1]);
        assert_eq!(factors(&[vec![0, 0], vec![0, 0]]), Vec::<i64>::new());
        assert_eq!(rank(&SparseMatrix::zeros(0, 3)), 0);
    }

    #[test]
    fn product_shapes() {
        let a = SparseMatrix::from_dense(&[vec![1, 1]]);
        let b = SparseMatrix::from_dense(&[vec![1], vec![-1]]);
        assert!(a.mul(&b).unwrap().is_zero());
        assert!(a.mul(&a).is_none());
    }
}
