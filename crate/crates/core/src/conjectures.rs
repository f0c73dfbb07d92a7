//! Label systems for the two-leaf trees and the exhaustive checks on them.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poset::{FinitePoset, ProductPoset};
use crate::signatures::{meet, TruncatedSignature};
use crate::trees::{quasi_bijection_exists, LevelTree, Numbering};
use crate::vdgen::{generate_tilde_in, generate_v};

/// One set of admissible signatures per meeting level `0..=d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelSystem {
    d: usize,
    labels: Vec<Vec<TruncatedSignature>>,
}

impl LabelSystem {
    /// The built-in system: `V_d` at level 0, `Ṽ^{d-c}` at level `c`, and
    /// `(12)` at level `d`.
    pub fn builtin(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidSystem("depth must be positive".into()));
        }
        let mut labels = vec![generate_v(d)?.elements];
        for c in 1..d {
            labels.push(generate_tilde_in(d - c, d)?.elements);
        }
        labels.push(vec![TruncatedSignature::minimal(d)]);
        LabelSystem::new(d, labels)
    }

    pub fn new(d: usize, labels: Vec<Vec<TruncatedSignature>>) -> Result<Self> {
        if labels.len() != d + 1 {
            return Err(Error::InvalidSystem(format!(
                "expected {} label sets, got {}",
                d + 1,
                labels.len()
            )));
        }
        for (c, set) in labels.iter().enumerate() {
            if set.is_empty() {
                return Err(Error::InvalidSystem(format!("level {c} has no labels")));
            }
            if let Some(bad) = set.iter().find(|s| s.depth() != d) {
                return Err(Error::DepthMismatch(bad.depth(), d));
            }
        }
        Ok(LabelSystem { d, labels })
    }

    /// Replaces the labels at one level.
    pub fn with_level(mut self, c: usize, labels: Vec<TruncatedSignature>) -> Result<Self> {
        if c > self.d {
            return Err(Error::LevelOutOfRange {
                level: c,
                depth: self.d,
            });
        }
        self.labels[c] = labels;
        LabelSystem::new(self.d, self.labels)
    }

    pub fn depth(&self) -> usize {
        self.d
    }

    pub fn labels(&self, c: usize) -> &[TruncatedSignature] {
        &self.labels[c]
    }

    pub fn levels(&self) -> &[Vec<TruncatedSignature>] {
        &self.labels
    }

    /// Whether some label at level `c` dominates `x`.
    pub fn admits(&self, c: usize, x: &TruncatedSignature) -> bool {
        self.labels[c].iter().any(|l| x.le(l))
    }
}

#[derive(Serialize, Deserialize)]
struct SystemRepr {
    d: usize,
    labels: Vec<Vec<String>>,
}

impl Serialize for LabelSystem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SystemRepr {
            d: self.d,
            labels: self
                .labels
                .iter()
                .map(|set| set.iter().map(|x| x.to_string()).collect())
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LabelSystem {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let repr = SystemRepr::deserialize(de)?;
        let labels = repr
            .labels
            .iter()
            .map(|set| {
                set.iter()
                    .map(|t| TruncatedSignature::parse(t, repr.d))
                    .collect()
            })
            .collect::<Result<Vec<Vec<_>>>>()
            .map_err(serde::de::Error::custom)?;
        LabelSystem::new(repr.d, labels).map_err(serde::de::Error::custom)
    }
}

/// A label at level `b` whose image under the twist is not dominated by any
/// label at level `a`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conj1Witness {
    pub a: usize,
    pub b: usize,
    pub twist: Numbering,
    pub label: String,
    pub required: String,
    pub candidates: Vec<String>,
}

impl Conj1Witness {
    /// Re-derives the failure from the system alone.
    pub fn replay(&self, sys: &LabelSystem) -> Result<bool> {
        let d = sys.depth();
        if !quasi_bijection_exists(d + 1, self.a, Numbering::Id, self.b, self.twist)? {
            return Ok(false);
        }
        let label = TruncatedSignature::parse(&self.label, d)?;
        if !sys.labels(self.b).contains(&label) {
            return Ok(false);
        }
        let required = twisted(&label, self.twist);
        Ok(required.to_string() == self.required && !sys.admits(self.a, &required))
    }
}

fn twisted(x: &TruncatedSignature, twist: Numbering) -> TruncatedSignature {
    match twist {
        Numbering::Id => x.clone(),
        Numbering::Swap => x.swap(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "lowercase")]
pub enum Outcome<W> {
    Pass,
    Fail { witness: W },
}

impl<W> Outcome<W> {
    pub fn passed(&self) -> bool {
        matches!(self, Outcome::Pass)
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Outcome::Pass => None,
            Outcome::Fail { witness } => Some(witness),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Conj1Report {
    pub check: &'static str,
    pub d: usize,
    #[serde(flatten)]
    pub outcome: Outcome<Conj1Witness>,
    pub checked: usize,
    /// Outcome restricted to the quasi-bijections out of level 0 into level 1.
    pub reduced_pass: bool,
    pub reduction_agrees: bool,
}

/// Checks that every quasi-bijection `(a, id) -> (b, twist)` sends labels at
/// level `b` into the downset of the labels at level `a`.
pub fn check_conjecture1(sys: &LabelSystem) -> Conj1Report {
    let d = sys.depth();
    let mut tasks = Vec::new();
    for a in 0..=d {
        for b in a..=d {
            for twist in [Numbering::Id, Numbering::Swap] {
                if quasi_bijection_exists(d + 1, a, Numbering::Id, b, twist)
                    .expect("levels in range")
                {
                    for label in sys.labels(b) {
                        tasks.push((a, b, twist, label));
                    }
                }
            }
        }
    }
    let violation = |&(a, b, twist, label): &(usize, usize, Numbering, &TruncatedSignature)| {
        let required = twisted(label, twist);
        (!sys.admits(a, &required)).then(|| Conj1Witness {
            a,
            b,
            twist,
            label: label.to_string(),
            required: required.to_string(),
            candidates: sys.labels(a).iter().map(|x| x.to_string()).collect(),
        })
    };
    let first = tasks.par_iter().find_map_first(violation);
    let reduced_pass = tasks
        .iter()
        .filter(|t| t.0 == 0 && t.1 == 1.min(d))
        .all(|t| violation(t).is_none());
    let full_pass = first.is_none();
    Conj1Report {
        check: "conj1",
        d,
        outcome: match first {
            None => Outcome::Pass,
            Some(witness) => Outcome::Fail { witness },
        },
        checked: tasks.len(),
        reduced_pass,
        reduction_agrees: reduced_pass == full_pass,
    }
}

/// All valid signatures below at least one of the given labels.
pub fn downset(labels: &[TruncatedSignature]) -> Result<FinitePoset<TruncatedSignature>> {
    let d = match labels.first() {
        Some(x) => x.depth(),
        None => return FinitePoset::from_relation(Vec::new(), |_, _| true),
    };
    if let Some(bad) = labels.iter().find(|x| x.depth() != d) {
        return Err(Error::DepthMismatch(bad.depth(), d));
    }
    let elements: BTreeSet<TruncatedSignature> = labels.iter().flat_map(|x| x.down_set()).collect();
    FinitePoset::from_relation(elements.into_iter().collect(), |a, b| a.le(b))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conj2Witness {
    pub d: usize,
    pub alpha: String,
    /// 1-based positions in the canonical list whose labels dominate `alpha`.
    pub indices: Vec<usize>,
}

impl Conj2Witness {
    pub fn replay(&self) -> Result<bool> {
        let v = generate_v(self.d)?.elements;
        let alpha = TruncatedSignature::parse(&self.alpha, self.d)?;
        let indices = membership(&v, &alpha);
        Ok(indices == self.indices && !is_interval(&indices))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Conj2Report {
    pub check: &'static str,
    pub d: usize,
    #[serde(flatten)]
    pub outcome: Outcome<Conj2Witness>,
    pub elements: usize,
    /// Elements lying below two or more canonical labels.
    pub shared: usize,
}

fn membership(v: &[TruncatedSignature], alpha: &TruncatedSignature) -> Vec<usize> {
    v.iter()
        .enumerate()
        .filter(|(_, w)| alpha.le(w))
        .map(|(i, _)| i + 1)
        .collect()
}

fn is_interval(indices: &[usize]) -> bool {
    indices.windows(2).all(|w| w[1] == w[0] + 1)
}

/// Checks that the canonical labels above any element form an interval.
pub fn check_conjecture2(d: usize) -> Result<Conj2Report> {
    let v = generate_v(d)?.elements;
    let p = downset(&v)?;
    let memberships: Vec<Vec<usize>> = p.elements().par_iter().map(|a| membership(&v, a)).collect();
    let outcome = match p
        .elements()
        .iter()
        .zip(&memberships)
        .find(|(_, m)| !is_interval(m))
    {
        None => Outcome::Pass,
        Some((alpha, m)) => Outcome::Fail {
            witness: Conj2Witness {
                d,
                alpha: alpha.to_string(),
                indices: m.clone(),
            },
        },
    };
    Ok(Conj2Report {
        check: "conj2",
        d,
        outcome,
        elements: p.len(),
        shared: memberships.iter().filter(|m| m.len() >= 2).count(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PieceMaximum {
    pub index: usize,
    pub maximum: Option<String>,
    pub expected: String,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OverlapMaximum {
    pub index: usize,
    pub maximum: Option<String>,
    pub meet: Option<String>,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverReport {
    pub check: &'static str,
    pub d: usize,
    pub poset_size: usize,
    pub union_size: usize,
    pub union_ok: bool,
    pub pieces: Vec<PieceMaximum>,
    pub overlaps: Vec<OverlapMaximum>,
    pub interval: Conj2Report,
    pub pass: bool,
}

/// The set-level content of covering the poset by the downsets of the
/// canonical labels and their consecutive overlaps.
pub fn check_cover(d: usize) -> Result<CoverReport> {
    let v = generate_v(d)?.elements;
    let whole = downset(&v)?;
    let pieces: Vec<BTreeSet<TruncatedSignature>> = v
        .iter()
        .map(|w| w.down_set().into_iter().collect())
        .collect();
    let union: BTreeSet<_> = pieces.iter().flatten().cloned().collect();
    let union_ok = union.iter().eq(whole.elements().iter());
    let max_of = |set: &BTreeSet<TruncatedSignature>| -> Option<TruncatedSignature> {
        set.iter().find(|x| set.iter().all(|y| y.le(x))).cloned()
    };
    let piece_max: Vec<PieceMaximum> = pieces
        .iter()
        .zip(&v)
        .enumerate()
        .map(|(i, (set, w))| {
            let m = max_of(set);
            PieceMaximum {
                index: i + 1,
                ok: m.as_ref() == Some(w),
                maximum: m.map(|x| x.to_string()),
                expected: w.to_string(),
            }
        })
        .collect();
    let overlaps: Vec<OverlapMaximum> = (0..v.len().saturating_sub(1))
        .map(|i| {
            let common: BTreeSet<_> = pieces[i].intersection(&pieces[i + 1]).cloned().collect();
            let m = max_of(&common);
            let mt = meet(&v[i], &v[i + 1]);
            OverlapMaximum {
                index: i + 1,
                ok: m.is_some() && m == mt,
                maximum: m.map(|x| x.to_string()),
                meet: mt.map(|x| x.to_string()),
            }
        })
        .collect();
    let interval = check_conjecture2(d)?;
    let pass = union_ok
        && piece_max.iter().all(|p| p.ok)
        && overlaps.iter().all(|o| o.ok)
        && interval.outcome.passed();
    Ok(CoverReport {
        check: "cover",
        d,
        poset_size: whole.len(),
        union_size: union.len(),
        union_ok,
        pieces: piece_max,
        overlaps,
        interval,
        pass,
    })
}

/// The poset attached to a pruned tree: one factor per leaf pair, namely the
/// downset of the labels at the pair's meeting level.
#[derive(Debug, Clone)]
pub struct TreePoset {
    pub pairs: Vec<((usize, usize), usize)>,
    pub product: ProductPoset<TruncatedSignature>,
}

pub fn poset_for_tree(sys: &LabelSystem, tree: &LevelTree) -> Result<TreePoset> {
    if tree.depth() != sys.depth() + 1 {
        return Err(Error::DepthMismatch(tree.depth(), sys.depth() + 1));
    }
    let order = tree.leaf_order()?;
    let mut factors = Vec::with_capacity(order.len());
    let mut cache: Vec<Option<FinitePoset<TruncatedSignature>>> = vec![None; sys.depth() + 1];
    for &c in order.values() {
        if cache[c].is_none() {
            cache[c] = Some(downset(sys.labels(c))?);
        }
        factors.push(cache[c].clone().expect("filled"));
    }
    Ok(TreePoset {
        pairs: order.into_iter().collect(),
        product: ProductPoset::new(factors),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(text: &str, d: usize) -> TruncatedSignature {
        TruncatedSignature::parse(text, d).unwrap()
    }

    #[test]
    fn builtin_system_two() {
        let sys = LabelSystem::builtin(2).unwrap();
        let show = |c| {
            sys.labels(c)
                .iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
        };
        assert_eq!(show(0), vec!["(121)|(121)", "(1212)|(21)"]);
        assert_eq!(show(1), vec!["(121)|(12)"]);
        assert_eq!(show(2), vec!["(12)"]);
    }

    #[test]
    fn conjecture_one_small() {
        let report = check_conjecture1(&LabelSystem::builtin(2).unwrap());
        assert!(report.outcome.passed());
        assert!(report.reduction_agrees);
    }

    #[test]
    fn weakened_system_fails() {
        let sys = LabelSystem::builtin(2)
            .unwrap()
            .with_level(0, vec![s("(121)|(121)", 2)])
            .unwrap();
        let report = check_conjecture1(&sys);
        let w = report.outcome.witness().expect("must fail");
        assert_eq!((w.a, w.b, w.twist), (0, 1, Numbering::Swap));
        assert_eq!(w.label, "(121)|(12)");
        assert_eq!(w.required, "(212)|(21)");
        assert!(w.replay(&sys).unwrap());
        assert!(!w.replay(&LabelSystem::builtin(2).unwrap()).unwrap());
    }

    #[test]
    fn downset_of_minimal() {
        let p = downset(&[s("(12)", 2)]).unwrap();
        assert_eq!(p.len(), 1);
    }

    #[test]
    fn conjecture_two_membership() {
        let v = generate_v(2).unwrap().elements;
        assert_eq!(membership(&v, &s("(121)|(21)", 2)), vec![1, 2]);
        assert!(check_conjecture2(2).unwrap().outcome.passed());
    }

    #[test]
    fn system_serde_round_trip() {
        let sys = LabelSystem::builtin(3).unwrap();
        let json = serde_json::to_string(&sys).unwrap();
        assert_eq!(serde_json::from_str::<LabelSystem>(&json).unwrap(), sys);
    }

    #[test]
    fn one_leaf_tree_poset() {
        let sys = LabelSystem::builtin(2).unwrap();
        let tp = poset_for_tree(&sys, &LevelTree::linear(3)).unwrap();
        assert_eq!(tp.product.materialize(10).unwrap().len(), 1);
        assert!(poset_for_tree(&sys, &LevelTree::linear(2)).is_err());
    }
}
