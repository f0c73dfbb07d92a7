//! Matching maps of a block, viewed as a cosimplicial object in the output
//! degree, computed as finite-set equalizers for each argument multidegree.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::ordinal::OrdinalMap;
use super::path::{enumerate_paths, LatticePath};
use crate::budget::Budget;
use crate::conjectures::Outcome;
use crate::error::{Error, Result};
use crate::signatures::BergerElement;
use crate::trees::cartesian;

/// Block elements with the given argument degrees and output degree.
pub fn block_elements(bound: &BergerElement, in_degrees: &[usize], out: usize) -> Vec<LatticePath> {
    enumerate_paths(in_degrees, out)
        .into_iter()
        .filter(|p| p.in_block(bound).expect("arity checked by caller"))
        .collect()
}

fn codegeneracy(p: &LatticePath, i: usize) -> LatticePath {
    let n = p.out_degree();
    p.act_output(&OrdinalMap::codegeneracy(n - 1, i).expect("i < n"))
        .expect("codegeneracy starts at the output degree")
}

/// Argument face `d_a` applied on every axis at once.
fn diagonal_face(p: &LatticePath, a: usize) -> LatticePath {
    let n = p.in_degrees()[0];
    let map = OrdinalMap::coface(n, a).expect("a <= n");
    (0..p.arity()).fold(p.clone(), |q, axis| {
        q.act_argument(axis, &map).expect("diagonal degrees")
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MatchingKind {
    Point,
    Surjection,
    Bijection,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MatchingEntry {
    pub degrees: Vec<usize>,
    /// Size of the block in output degree `level + 1`.
    pub source_size: usize,
    /// Size of the matching object.
    pub matching_size: usize,
    pub injective: bool,
    pub surjective: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HornSummary {
    pub inner_instances: u64,
    pub inner_lifted: u64,
    pub outer_instances: u64,
    pub outer_lifted: u64,
}

impl HornSummary {
    pub fn all_lift(&self) -> bool {
        self.inner_instances == self.inner_lifted && self.outer_instances == self.outer_lifted
    }
}

/// What a matching witness shows; the listed paths depend on the kind.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MatchingFailure {
    /// No paths: the block is empty in these degrees.
    EmptyBlock,
    /// Paths form a compatible tuple (one path for `m_0`) outside the image.
    NoPreimage,
    /// Two distinct paths with the same image.
    NotInjective,
    /// Paths are the base simplex followed by the horn faces in order.
    UnfilledHorn { horn: usize },
}

impl fmt::Display for MatchingFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatchingFailure::EmptyBlock => write!(f, "empty block"),
            MatchingFailure::NoPreimage => write!(f, "compatible tuple with no preimage"),
            MatchingFailure::NotInjective => write!(f, "two paths with the same image"),
            MatchingFailure::UnfilledHorn { horn } => write!(f, "horn {horn} has no filler"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchingWitness {
    pub degrees: Vec<usize>,
    pub failure: MatchingFailure,
    pub paths: Vec<LatticePath>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MatchingReport {
    pub check: &'static str,
    pub block: String,
    pub level: i64,
    pub expected: MatchingKind,
    #[serde(flatten)]
    pub outcome: Outcome<MatchingWitness>,
    pub entries: Vec<MatchingEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub horns: Option<HornSummary>,
}

/// Tests the matching map `m_level` of the block on every argument
/// multidegree with entries at most `max_degree`.
pub fn matching_check(
    bound: &BergerElement,
    level: i64,
    max_degree: usize,
    budget: &Budget,
) -> Result<MatchingReport> {
    if level < -1 {
        return Err(Error::InvalidMap(format!(
            "matching level {level} is below -1"
        )));
    }
    let k = bound.arity();
    let expected = match level {
        -1 => MatchingKind::Point,
        0 => MatchingKind::Surjection,
        _ => MatchingKind::Bijection,
    };
    let mut entries = Vec::new();
    let mut witness = None;
    for degrees in cartesian(&vec![(0..=max_degree).collect::<Vec<_>>(); k]) {
        budget.check("matching check")?;
        let entry = match level {
            -1 => {
                let source = block_elements(bound, &degrees, 0);
                if source.is_empty() {
                    witness.get_or_insert(MatchingWitness {
                        degrees: degrees.clone(),
                        failure: MatchingFailure::EmptyBlock,
                        paths: Vec::new(),
                    });
                }
                MatchingEntry {
                    degrees: degrees.clone(),
                    source_size: source.len(),
                    matching_size: 1,
                    injective: source.len() <= 1,
                    surjective: !source.is_empty(),
                }
            }
            0 => {
                let source = block_elements(bound, &degrees, 1);
                let target = block_elements(bound, &degrees, 0);
                let mut hit: Vec<bool> = vec![false; target.len()];
                let index: HashMap<&LatticePath, usize> =
                    target.iter().enumerate().map(|(i, p)| (p, i)).collect();
                for p in &source {
                    hit[index[&codegeneracy(p, 0)]] = true;
                }
                if let Some(miss) = hit.iter().position(|h| !h) {
                    witness.get_or_insert(MatchingWitness {
                        degrees: degrees.clone(),
                        failure: MatchingFailure::NoPreimage,
                        paths: vec![target[miss].clone()],
                    });
                }
                MatchingEntry {
                    degrees: degrees.clone(),
                    source_size: source.len(),
                    matching_size: target.len(),
                    injective: source.len() == target.len(),
                    surjective: hit.iter().all(|&h| h),
                }
            }
            _ => {
                let l = level as usize;
                let (entry, w) = matching_entry(bound, &degrees, l);
                if let Some(w) = w {
                    witness.get_or_insert(w);
                }
                entry
            }
        };
        entries.push(entry);
    }
    let horns = if level == 0 {
        let (summary, w) = horn_lifts(bound, max_degree.clamp(1, 2), budget)?;
        if let Some(w) = w {
            witness.get_or_insert(w);
        }
        Some(summary)
    } else {
        None
    };
    Ok(MatchingReport {
        check: "matching",
        block: bound
            .to_factor()
            .map_or_else(|| bound.to_string(), |f| f.to_string()),
        level,
        expected,
        outcome: match witness {
            None => Outcome::Pass,
            Some(witness) => Outcome::Fail { witness },
        },
        entries,
        horns,
    })
}

/// The equalizer of `(X^l)^{l+1}` under `s^i x_j = s^{j-1} x_i` for `i < j`,
/// compared with the image of `X^{l+1}`.
fn matching_entry(
    bound: &BergerElement,
    degrees: &[usize],
    l: usize,
) -> (MatchingEntry, Option<MatchingWitness>) {
    let upper = block_elements(bound, degrees, l + 1);
    let middle = block_elements(bound, degrees, l);
    let lower = block_elements(bound, degrees, l - 1);
    let lower_index: HashMap<&LatticePath, usize> =
        lower.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let middle_index: HashMap<&LatticePath, usize> =
        middle.iter().enumerate().map(|(i, p)| (p, i)).collect();
    // degen[i][x] = index of s^i x in the lower set.
    let degen: Vec<Vec<usize>> = (0..l)
        .map(|i| {
            middle
                .iter()
                .map(|p| lower_index[&codegeneracy(p, i)])
                .collect()
        })
        .collect();
    let mut preimage_of_first: HashMap<usize, Vec<usize>> = HashMap::new();
    for (x, &y) in degen[0].iter().enumerate() {
        preimage_of_first.entry(y).or_default().push(x);
    }
    let mut tuples: Vec<Vec<usize>> = Vec::new();
    let mut current = Vec::with_capacity(l + 1);
    fn extend(
        current: &mut Vec<usize>,
        l: usize,
        middle_len: usize,
        degen: &[Vec<usize>],
        pre: &HashMap<usize, Vec<usize>>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let j = current.len();
        if j == l + 1 {
            out.push(current.clone());
            return;
        }
        let candidates: Vec<usize> = if j == 0 {
            (0..middle_len).collect()
        } else {
            pre.get(&degen[j - 1][current[0]])
                .cloned()
                .unwrap_or_default()
        };
        for x in candidates {
            if (0..j).all(|i| degen[i][x] == degen[j - 1][current[i]]) {
                current.push(x);
                extend(current, l, middle_len, degen, pre, out);
                current.pop();
            }
        }
    }
    extend(
        &mut current,
        l,
        middle.len(),
        &degen,
        &preimage_of_first,
        &mut tuples,
    );
    let mut images: HashMap<Vec<usize>, &LatticePath> = HashMap::new();
    let mut witness = None;
    for p in &upper {
        let image: Vec<usize> = (0..=l).map(|i| middle_index[&codegeneracy(p, i)]).collect();
        if let Some(&first) = images.get(&image) {
            witness.get_or_insert(MatchingWitness {
                degrees: degrees.to_vec(),
                failure: MatchingFailure::NotInjective,
                paths: vec![first.clone(), p.clone()],
            });
        } else {
            images.insert(image, p);
        }
    }
    let injective = images.len() == upper.len();
    let surjective = tuples.iter().all(|t| images.contains_key(t));
    if let Some(t) = tuples.iter().find(|t| !images.contains_key(*t)) {
        witness.get_or_insert(MatchingWitness {
            degrees: degrees.to_vec(),
            failure: MatchingFailure::NoPreimage,
            paths: t.iter().map(|&x| middle[x].clone()).collect(),
        });
    }
    (
        MatchingEntry {
            degrees: degrees.to_vec(),
            source_size: upper.len(),
            matching_size: tuples.len(),
            injective,
            surjective,
        },
        witness,
    )
}

/// Every horn `Λ^p_i -> X[1]` over a `p`-simplex of `X[0]` on the diagonal,
/// for `p` up to `max_p`, together with a search for a filler.
fn horn_lifts(
    bound: &BergerElement,
    max_p: usize,
    budget: &Budget,
) -> Result<(HornSummary, Option<MatchingWitness>)> {
    let k = bound.arity();
    let mut summary = HornSummary {
        inner_instances: 0,
        inner_lifted: 0,
        outer_instances: 0,
        outer_lifted: 0,
    };
    let mut witness = None;
    let mut inner_failed = false;
    for p in 1..=max_p {
        let base = block_elements(bound, &vec![p; k], 0);
        let total = block_elements(bound, &vec![p; k], 1);
        let faces_below = block_elements(bound, &vec![p - 1; k], 1);
        let mut over: HashMap<LatticePath, Vec<&LatticePath>> = HashMap::new();
        for x in &total {
            over.entry(codegeneracy(x, 0)).or_default().push(x);
        }
        let mut below_over: HashMap<LatticePath, Vec<&LatticePath>> = HashMap::new();
        for x in &faces_below {
            below_over.entry(codegeneracy(x, 0)).or_default().push(x);
        }
        for y in &base {
            for horn in 0..=p {
                budget.check("horn lifting")?;
                let faces: Vec<usize> = (0..=p).filter(|&a| a != horn).collect();
                let options: Vec<Vec<&LatticePath>> = faces
                    .iter()
                    .map(|&a| {
                        below_over
                            .get(&diagonal_face(y, a))
                            .cloned()
                            .unwrap_or_default()
                    })
                    .collect();
                for family in cartesian(&options) {
                    let compatible = faces.iter().enumerate().all(|(u, &a)| {
                        faces.iter().enumerate().skip(u + 1).all(|(v, &b)| {
                            p < 2 || diagonal_face(family[v], a) == diagonal_face(family[u], b - 1)
                        })
                    });
                    if !compatible {
                        continue;
                    }
                    let outer = horn == 0 || horn == p;
                    if outer {
                        summary.outer_instances += 1;
                    } else {
                        summary.inner_instances += 1;
                    }
                    let filled = over.get(y).is_some_and(|xs| {
                        xs.iter().any(|x| {
                            faces
                                .iter()
                                .enumerate()
                                .all(|(u, &a)| diagonal_face(x, a) == *family[u])
                        })
                    });
                    if filled {
                        if outer {
                            summary.outer_lifted += 1;
                        } else {
                            summary.inner_lifted += 1;
                        }
                    } else if witness.is_none() || (!outer && !inner_failed) {
                        inner_failed |= !outer;
                        let mut paths = vec![y.clone()];
                        paths.extend(family.iter().map(|&x| x.clone()));
                        witness = Some(MatchingWitness {
                            degrees: vec![p; k],
                            failure: MatchingFailure::UnfilledHorn { horn },
                            paths,
                        });
                    }
                }
            }
        }
    }
    Ok((summary, witness))
}

fn compatible_tuple(tuple: &[LatticePath]) -> bool {
    let l = tuple.len() - 1;
    (0..=l).all(|j| (0..j).all(|i| codegeneracy(&tuple[j], i) == codegeneracy(&tuple[i], j - 1)))
}

/// Re-derives a matching failure from the block, the level and the witness
/// alone. Forged or inconsistent witnesses give `Ok(false)`.
pub fn replay_matching(
    bound: &BergerElement,
    level: i64,
    witness: &MatchingWitness,
) -> Result<bool> {
    let degrees = &witness.degrees;
    if degrees.len() != bound.arity() || level < -1 {
        return Ok(false);
    }
    let paths = &witness.paths;
    let member = |p: &LatticePath, out: usize, degs: &[usize]| -> Result<bool> {
        Ok(p.in_degrees() == degs && p.out_degree() == out && p.in_block(bound)?)
    };
    Ok(match (&witness.failure, level) {
        (MatchingFailure::EmptyBlock, _) => {
            paths.is_empty() && block_elements(bound, degrees, 0).is_empty()
        }
        (MatchingFailure::NoPreimage, 0) => match paths.as_slice() {
            [y] => {
                member(y, 0, degrees)?
                    && block_elements(bound, degrees, 1)
                        .iter()
                        .all(|x| codegeneracy(x, 0) != *y)
            }
            _ => false,
        },
        (MatchingFailure::NoPreimage, l) if l >= 1 => {
            let l = l as usize;
            paths.len() == l + 1
                && paths
                    .iter()
                    .map(|p| member(p, l, degrees))
                    .collect::<Result<Vec<_>>>()?
                    .into_iter()
                    .all(|b| b)
                && compatible_tuple(paths)
                && block_elements(bound, degrees, l + 1)
                    .iter()
                    .all(|w| (0..=l).any(|i| codegeneracy(w, i) != paths[i]))
        }
        (MatchingFailure::NotInjective, l) if l >= 1 => match paths.as_slice() {
            [a, b] => {
                let l = l as usize;
                a != b
                    && member(a, l + 1, degrees)?
                    && member(b, l + 1, degrees)?
                    && (0..=l).all(|i| codegeneracy(a, i) == codegeneracy(b, i))
            }
            _ => false,
        },
        (MatchingFailure::UnfilledHorn { horn }, 0) => {
            let p = match degrees.first() {
                Some(&p) if p >= 1 && degrees.iter().all(|&q| q == p) && *horn <= p => p,
                _ => return Ok(false),
            };
            let faces: Vec<usize> = (0..=p).filter(|a| a != horn).collect();
            let (y, family) = match paths.split_first() {
                Some((y, family)) if family.len() == faces.len() => (y, family),
                _ => return Ok(false),
            };
            let below = vec![p - 1; degrees.len()];
            for (x, &a) in family.iter().zip(&faces) {
                if !member(x, 1, &below)? || codegeneracy(x, 0) != diagonal_face(y, a) {
                    return Ok(false);
                }
            }
            for (u, &a) in faces.iter().enumerate() {
                for (v, &b) in faces.iter().enumerate().skip(u + 1) {
                    if diagonal_face(&family[v], a) != diagonal_face(&family[u], b - 1) {
                        return Ok(false);
                    }
                }
            }
            member(y, 0, degrees)?
                && block_elements(bound, degrees, 1).iter().all(|x| {
                    codegeneracy(x, 0) != *y
                        || faces
                            .iter()
                            .zip(family)
                            .any(|(&a, f)| diagonal_face(x, a) != *f)
                })
        }
        _ => false,
    })
}
