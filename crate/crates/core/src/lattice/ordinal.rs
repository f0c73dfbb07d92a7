//! Monotone maps of finite ordinals `[m] = {0 < ... < m}` and their duals.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A monotone map `[source] -> [target]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OrdinalMap {
    source: usize,
    target: usize,
    values: Vec<usize>,
}

impl OrdinalMap {
    pub fn new(source: usize, target: usize, values: Vec<usize>) -> Result<Self> {
        if values.len() != source + 1 {
            return Err(Error::InvalidMap(format!(
                "[{source}] has {} elements, {} values given",
                source + 1,
                values.len()
            )));
        }
        if values.iter().any(|&v| v > target) {
            return Err(Error::InvalidMap(format!(
                "values {values:?} exceed [{target}]"
            )));
        }
        if values.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidMap(format!(
                "values {values:?} are not monotone"
            )));
        }
        Ok(OrdinalMap {
            source,
            target,
            values,
        })
    }

    pub fn identity(n: usize) -> Self {
        OrdinalMap {
            source: n,
            target: n,
            values: (0..=n).collect(),
        }
    }

    /// The coface `[n-1] -> [n]` missing `j`.
    pub fn coface(n: usize, j: usize) -> Result<Self> {
        if n == 0 || j > n {
            return Err(Error::InvalidMap(format!("no coface d^{j} into [{n}]")));
        }
        Ok(OrdinalMap {
            source: n - 1,
            target: n,
            values: (0..n).map(|y| if y < j { y } else { y + 1 }).collect(),
        })
    }

    /// The codegeneracy `[n+1] -> [n]` hitting `j` twice.
    pub fn codegeneracy(n: usize, j: usize) -> Result<Self> {
        if j > n {
            return Err(Error::InvalidMap(format!(
                "no codegeneracy s^{j} onto [{n}]"
            )));
        }
        Ok(OrdinalMap {
            source: n + 1,
            target: n,
            values: (0..=n + 1)
                .map(|y| if y <= j { y } else { y - 1 })
                .collect(),
        })
    }

    /// All monotone maps `[source] -> [target]`.
    pub fn all(source: usize, target: usize) -> Vec<OrdinalMap> {
        let mut out = Vec::new();
        let mut values = vec![0; source + 1];
        loop {
            out.push(OrdinalMap {
                source,
                target,
                values: values.clone(),
            });
            let mut i = source + 1;
            loop {
                if i == 0 {
                    return out;
                }
                i -= 1;
                if values[i] < target {
                    values[i] += 1;
                    let v = values[i];
                    values[i + 1..].iter_mut().for_each(|x| *x = v);
                    break;
                }
            }
        }
    }

    pub fn source(&self) -> usize {
        self.source
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn apply(&self, y: usize) -> usize {
        self.values[y]
    }

    pub fn is_injective(&self) -> bool {
        self.values.windows(2).all(|w| w[0] < w[1])
    }

    pub fn is_surjective(&self) -> bool {
        self.values.first() == Some(&0)
            && self.values.last() == Some(&self.target)
            && self.values.windows(2).all(|w| w[1] - w[0] <= 1)
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &OrdinalMap) -> Result<OrdinalMap> {
        if first.target != self.source {
            return Err(Error::InvalidMap(format!(
                "cannot compose [{}] -> [{}] after [{}] -> [{}]",
                self.source, self.target, first.source, first.target
            )));
        }
        Ok(OrdinalMap {
            source: first.source,
            target: self.target,
            values: first.values.iter().map(|&v| self.values[v]).collect(),
        })
    }

    /// The endpoint-preserving map of intervals `[[target+1]] -> [[source+1]]`
    /// dual to this map: `s ↦ #{y : f(y) >= target + 1 - s}`.
    pub fn joyal_dual(&self) -> Vec<usize> {
        (0..=self.target + 1)
            .map(|s| self.values.iter().filter(|&&v| v + s > self.target).count())
            .collect()
    }
}

impl fmt::Display for OrdinalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]->[{}]{:?}", self.source, self.target, self.values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simplicial_identities() {
        // d^j d^i = d^i d^{j-1} for i < j.
        for n in 2..5 {
            for j in 1..=n {
                for i in 0..j {
                    let lhs = OrdinalMap::coface(n, j)
                        .unwrap()
                        .after(&OrdinalMap::coface(n - 1, i).unwrap())
                        .unwrap();
                    let rhs = OrdinalMap::coface(n, i)
                        .unwrap()
                        .after(&OrdinalMap::coface(n - 1, j - 1).unwrap())
                        .unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
        // s^j d^j = id.
        for n in 0..4 {
            for j in 0..=n {
                let c = OrdinalMap::codegeneracy(n, j)
                    .unwrap()
                    .after(&OrdinalMap::coface(n + 1, j).unwrap())
                    .unwrap();
                assert_eq!(c, OrdinalMap::identity(n));
            }
        }
    }

    #[test]
    fn dual_preserves_endpoints_and_reverses_composition() {
        for m in 0..3 {
            for n in 0..3 {
                for f in OrdinalMap::all(m, n) {
                    let d = f.joyal_dual();
                    assert_eq!(d[0], 0);
                    assert_eq!(*d.last().unwrap(), m + 1);
                    assert!(d.windows(2).all(|w| w[0] <= w[1]));
                    for p in 0..3 {
                        for g in OrdinalMap::all(n, p) {
                            let gf = g.after(&f).unwrap().joyal_dual();
                            let composed: Vec<usize> =
                                g.joyal_dual().iter().map(|&s| d[s]).collect();
                            assert_eq!(gf, composed);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn counts_and_validation() {
        assert_eq!(OrdinalMap::all(1, 1).len(), 3);
        assert_eq!(OrdinalMap::all(2, 3).len(), 20);
        assert!(OrdinalMap::new(1, 1, vec![1, 0]).is_err());
        assert!(OrdinalMap::coface(0, 0).is_err());
        assert!(OrdinalMap::codegeneracy(1, 0).unwrap().is_surjective());
        assert!(OrdinalMap::coface(2, 1).unwrap().is_injective());
    }
}
