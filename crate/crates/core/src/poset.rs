//! Finite posets stored as bitset relation matrices, with lazy products.

use std::fmt;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub(crate) struct BitRow(Vec<u64>);

impl BitRow {
    fn new(n: usize) -> Self {
        BitRow(vec![0; n.div_ceil(64)])
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    fn is_subset(&self, other: &BitRow) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }

    fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(w, &bits)| {
            let mut b = bits;
            std::iter::from_fn(move || {
                if b == 0 {
                    None
                } else {
                    let t = b.trailing_zeros() as usize;
                    b &= b - 1;
                    Some(w * 64 + t)
                }
            })
        })
    }
}

/// A finite poset on an ordered list of elements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinitePoset<T> {
    elements: Vec<T>,
    up: Vec<BitRow>,
    down: Vec<BitRow>,
}

impl<T> FinitePoset<T> {
    /// Builds the poset and checks reflexivity, antisymmetry and transitivity.
    pub fn from_relation(elements: Vec<T>, le: impl Fn(&T, &T) -> bool) -> Result<Self> {
        let p = Self::from_relation_unchecked(elements, le);
        p.validate()?;
        Ok(p)
    }

    pub(crate) fn from_relation_unchecked(elements: Vec<T>, le: impl Fn(&T, &T) -> bool) -> Self {
        let n = elements.len();
        let mut up = vec![BitRow::new(n); n];
        let mut down = vec![BitRow::new(n); n];
        for i in 0..n {
            for j in 0..n {
                if le(&elements[i], &elements[j]) {
                    up[i].set(j);
                    down[j].set(i);
                }
            }
        }
        FinitePoset { elements, up, down }
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.len();
        for i in 0..n {
            if !self.le(i, i) {
                return Err(Error::InvalidPoset(format!(
                    "element {i} is not below itself"
                )));
            }
            for j in self.up[i].ones() {
                if j != i && self.le(j, i) {
                    return Err(Error::InvalidPoset(format!(
                        "elements {i} and {j} are mutually below"
                    )));
                }
                if !self.up[j].is_subset(&self.up[i]) {
                    return Err(Error::InvalidPoset(format!(
                        "transitivity fails through {i} <= {j}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[T] {
        &self.elements
    }

    pub fn le(&self, i: usize, j: usize) -> bool {
        self.up[i].get(j)
    }

    pub fn lt(&self, i: usize, j: usize) -> bool {
        i != j && self.le(i, j)
    }

    /// Indices above `i`, including `i`.
    pub fn upset(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.up[i].ones()
    }

    /// Indices below `i`, including `i`.
    pub fn downset(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.down[i].ones()
    }

    pub fn index_of(&self, x: &T) -> Option<usize>
    where
        T: PartialEq,
    {
        self.elements.iter().position(|e| e == x)
    }

    pub fn maximum(&self) -> Option<usize> {
        (0..self.len()).find(|&i| self.down[i].ones().count() == self.len())
    }

    pub fn minimum(&self) -> Option<usize> {
        (0..self.len()).find(|&i| self.up[i].ones().count() == self.len())
    }

    pub fn maximal(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| self.up[i].ones().count() == 1)
            .collect()
    }

    pub fn minimal(&self) -> Vec<usize> {
        (0..self.len())
            .filter(|&i| self.down[i].ones().count() == 1)
            .collect()
    }

    /// Covering pairs `(i, j)`: `i < j` with nothing strictly between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.len() {
            for j in self.up[i].ones() {
                if j == i {
                    continue;
                }
                let between = self.up[i].ones().any(|k| k != i && k != j && self.le(k, j));
                if !between {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn opposite(&self) -> FinitePoset<T>
    where
        T: Clone,
    {
        FinitePoset {
            elements: self.elements.clone(),
            up: self.down.clone(),
            down: self.up.clone(),
        }
    }

    /// The induced subposet on the given indices, in the given order.
    pub fn subposet(&self, indices: &[usize]) -> FinitePoset<T>
    where
        T: Clone,
    {
        let elements = indices.iter().map(|&i| self.elements[i].clone()).collect();
        let pos: Vec<usize> = indices.to_vec();
        let mut p =
            FinitePoset::from_relation_unchecked((0..pos.len()).collect::<Vec<_>>(), |&a, &b| {
                self.le(pos[a], pos[b])
            });
        FinitePoset {
            elements,
            up: std::mem::take(&mut p.up),
            down: std::mem::take(&mut p.down),
        }
    }

    pub fn map<U>(&self, f: impl Fn(&T) -> U) -> FinitePoset<U> {
        FinitePoset {
            elements: self.elements.iter().map(f).collect(),
            up: self.up.clone(),
            down: self.down.clone(),
        }
    }

    /// Hasse diagram in DOT with minimal elements at the bottom.
    pub fn to_dot(&self, name: &str) -> String
    where
        T: fmt::Display,
    {
        let mut out = String::new();
        writeln!(out, "digraph {name} {{").unwrap();
        writeln!(out, "  rankdir=BT;").unwrap();
        writeln!(out, "  node [shape=box];").unwrap();
        for (i, e) in self.elements.iter().enumerate() {
            writeln!(out, "  n{i} [label=\"{e}\"];").unwrap();
        }
        for (i, j) in self.covers() {
            writeln!(out, "  n{i} -> n{j};").unwrap();
        }
        out.push_str("}\n");
        out
    }
}

/// A tuple of factor elements, printed as `<a, b, ...>`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Tuple<T>(pub Vec<T>);

impl<T: fmt::Display> fmt::Display for Tuple<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("<")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str(">")
    }
}

/// A product of finite posets kept as its factors; elements are index tuples.
#[derive(Debug, Clone)]
pub struct ProductPoset<T> {
    factors: Vec<FinitePoset<T>>,
}

impl<T: Clone> ProductPoset<T> {
    pub fn new(factors: Vec<FinitePoset<T>>) -> Self {
        ProductPoset { factors }
    }

    pub fn factors(&self) -> &[FinitePoset<T>] {
        &self.factors
    }

    pub fn size(&self) -> u128 {
        self.factors.iter().map(|f| f.len() as u128).product()
    }

    pub fn le(&self, a: &[usize], b: &[usize]) -> bool {
        self.factors
            .iter()
            .zip(a.iter().zip(b))
            .all(|(f, (&x, &y))| f.le(x, y))
    }

    /// Lists the product explicitly when it has at most `cap` elements.
    pub fn materialize(&self, cap: u128) -> Result<FinitePoset<Tuple<T>>> {
        let size = self.size();
        if size > cap {
            return Err(Error::SizeCap { size, cap });
        }
        let mut tuples: Vec<Vec<usize>> = vec![Vec::new()];
        for f in &self.factors {
            tuples = tuples
                .into_iter()
                .flat_map(|t| {
                    (0..f.len()).map(move |i| {
                        let mut t = t.clone();
                        t.push(i);
                        t
                    })
                })
                .collect();
        }
        let p = FinitePoset::from_relation_unchecked(tuples, |a, b| self.le(a, b));
        Ok(p.map(|t| {
            Tuple(
                t.iter()
                    .zip(&self.factors)
                    .map(|(&i, f)| f.elements[i].clone())
                    .collect(),
            )
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn divisors(n: u32) -> FinitePoset<u32> {
        let elems: Vec<u32> = (1..=n).filter(|d| n.is_multiple_of(*d)).collect();
        FinitePoset::from_relation(elems, |a, b| b % a == 0).unwrap()
    }

    #[test]
    fn divisor_lattice() {
        let p = divisors(12);
        assert_eq!(p.len(), 6);
        assert_eq!(p.minimum(), Some(0));
        assert_eq!(p.maximum(), Some(5));
        assert_eq!(p.covers().len(), 7);
        let op = p.opposite();
        assert_eq!(op.maximum(), Some(0));
    }

    #[test]
    fn rejects_non_posets() {
        assert!(FinitePoset::from_relation(vec![0, 1], |_, _| true).is_err());
        assert!(FinitePoset::from_relation(vec![0, 1, 2], |a, b| a == b || b == &(a + 1)).is_err());
        assert!(FinitePoset::from_relation(vec![0, 1], |a, b| a < b).is_err());
    }

    #[test]
    fn products() {
        let chain = FinitePoset::from_relation(vec![0, 1], |a, b| a <= b).unwrap();
        let prod = ProductPoset::new(vec![chain.clone(), chain]);
        assert_eq!(prod.size(), 4);
        let square = prod.materialize(10).unwrap();
        square.validate().unwrap();
        assert_eq!(square.covers().len(), 4);
        assert_eq!(square.elements()[3].to_string(), "<1, 1>");
        assert!(prod.materialize(3).is_err());
        let empty: ProductPoset<u8> = ProductPoset::new(Vec::new());
        assert_eq!(empty.materialize(1).unwrap().len(), 1);
    }

    #[test]
    fn wide_bitsets() {
        let p = FinitePoset::from_relation((0..130).collect(), |a: &i32, b: &i32| a <= b).unwrap();
        assert_eq!(p.upset(64).count(), 66);
        assert_eq!(p.maximum(), Some(129));
    }
}
