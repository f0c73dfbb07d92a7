//! Integer homology of a block at a fixed output degree, realized in the
//! argument directions through normalized polysimplicial chains.

use std::collections::HashMap;

use num_bigint::BigInt;
use serde::Serialize;

use super::matching::block_elements;
use super::ordinal::OrdinalMap;
use super::path::LatticePath;
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::signatures::BergerElement;
use crate::snf::SparseMatrix;
use crate::topology::{homology, ChainComplex, HomologyReport};

pub const DEFAULT_MAX_TOTAL: usize = 8;

/// Face `d_j` in argument `axis`.
pub fn argument_face(p: &LatticePath, axis: usize, j: usize) -> LatticePath {
    let map = OrdinalMap::coface(p.in_degrees()[axis], j).expect("j <= degree");
    p.act_argument(axis, &map)
        .expect("face of a positive degree")
}

/// Degeneracy `s_j` in argument `axis`.
pub fn argument_degeneracy(p: &LatticePath, axis: usize, j: usize) -> LatticePath {
    let map = OrdinalMap::codegeneracy(p.in_degrees()[axis], j).expect("j <= degree");
    p.act_argument(axis, &map)
        .expect("degeneracy lands in the axis")
}

/// True when the path lies in the image of some argument degeneracy, decided
/// by testing `x = s_j d_j x`.
pub fn is_degenerate_by_image(p: &LatticePath) -> bool {
    (0..p.arity()).any(|axis| {
        (0..p.in_degrees()[axis])
            .any(|j| argument_degeneracy(&argument_face(p, axis, j), axis, j) == *p)
    })
}

/// Total degree past which every block element is degenerate.
pub fn degree_bound(bound: &BergerElement, out: usize) -> usize {
    let k = bound.arity();
    let mut changes = 0;
    for i in 0..k {
        for j in i + 1..k {
            changes += bound.mu(i, j) + 1;
        }
    }
    (out + changes + 1).saturating_sub(k)
}

fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 {
            vec![Vec::new()]
        } else {
            Vec::new()
        };
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FrontierStatus {
    Closed,
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct BlockHomologyReport {
    pub check: &'static str,
    pub block: String,
    pub output_degree: usize,
    pub max_total: usize,
    /// Nondegenerate elements on each total-degree diagonal.
    pub diagonals: Vec<usize>,
    pub degree_bound: usize,
    pub status: FrontierStatus,
    pub homology: HomologyReport,
}

impl BlockHomologyReport {
    /// Exactly `Z` in degree 0 over a closed frontier.
    pub fn is_point(&self) -> bool {
        self.status == FrontierStatus::Closed && self.homology.is_acyclic()
    }
}

/// Normalized chains on the block's nondegenerate elements with output
/// degree `out`, graded by total argument degree up to `max_total`.
pub fn block_homology(
    bound: &BergerElement,
    out: usize,
    max_total: usize,
    budget: &Budget,
) -> Result<BlockHomologyReport> {
    let k = bound.arity();
    let limit = degree_bound(bound, out);
    let top = max_total.min(limit + 1);
    let mut cells: Vec<Vec<LatticePath>> = Vec::new();
    for total in 0..=top {
        let mut diagonal = Vec::new();
        for degrees in compositions(total, k) {
            budget.check("block homology")?;
            diagonal.extend(
                block_elements(bound, &degrees, out)
                    .into_iter()
                    .filter(|p| !is_degenerate_by_image(p)),
            );
        }
        diagonal.sort();
        cells.push(diagonal);
    }
    if top == limit + 1 && !cells[top].is_empty() {
        return Err(Error::InvalidPath(format!(
            "nondegenerate element {} above the degree bound {limit}",
            cells[top][0]
        )));
    }
    while cells.len() > 1 && cells.last().is_some_and(Vec::is_empty) {
        cells.pop();
    }
    let index: Vec<HashMap<&LatticePath, usize>> = cells
        .iter()
        .map(|c| c.iter().enumerate().map(|(i, p)| (p, i)).collect())
        .collect();
    let mut boundaries = Vec::new();
    for q in 1..cells.len() {
        let mut m = SparseMatrix::zeros(cells[q - 1].len(), cells[q].len());
        for (col, x) in cells[q].iter().enumerate() {
            let mut offset = 0;
            for axis in 0..k {
                let p = x.in_degrees()[axis];
                for j in 0..=p {
                    if p == 0 {
                        break;
                    }
                    let face = argument_face(x, axis, j);
                    if let Some(&row) = index[q - 1].get(&face) {
                        let sign = if (offset + j) % 2 == 0 { 1 } else { -1 };
                        m.add(row, col, &BigInt::from(sign));
                    }
                }
                offset += p;
            }
        }
        boundaries.push(m);
    }
    let dims = cells.iter().map(Vec::len).collect();
    let complex = ChainComplex::new(dims, boundaries)?;
    Ok(BlockHomologyReport {
        check: "block-homology",
        block: bound
            .to_factor()
            .map_or_else(|| bound.to_string(), |f| f.to_string()),
        output_degree: out,
        max_total,
        diagonals: cells.iter().map(Vec::len).collect(),
        degree_bound: limit,
        status: if max_total > limit {
            FrontierStatus::Closed
        } else {
            FrontierStatus::Inconclusive
        },
        homology: homology(&complex),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::path::enumerate_paths;
    use crate::signatures::Factor;

    fn block(text: &str) -> BergerElement {
        BergerElement::from_factor(Factor::parse(text).unwrap())
    }

    #[test]
    fn image_test_matches_adjacent_letter_test() {
        for degrees in [vec![1, 0], vec![1, 1], vec![2, 1], vec![0, 0, 1]] {
            for out in 0..3 {
                for p in enumerate_paths(&degrees, out) {
                    assert_eq!(is_degenerate_by_image(&p), !p.is_nondegenerate(), "{p}");
                }
            }
        }
    }

    #[test]
    fn small_blocks_are_points() {
        for word in ["12", "121", "1212"] {
            for out in 0..=1 {
                let r = block_homology(&block(word), out, DEFAULT_MAX_TOTAL, &Budget::unlimited())
                    .unwrap();
                assert!(
                    r.is_point(),
                    "{word} at {out}: {:?} {:?}",
                    r.diagonals,
                    r.homology.betti()
                );
            }
        }
    }

    #[test]
    fn word_121_cells() {
        let r = block_homology(&block("121"), 0, DEFAULT_MAX_TOTAL, &Budget::unlimited()).unwrap();
        assert_eq!(r.diagonals, vec![2, 1]);
    }

    #[test]
    fn low_cap_is_inconclusive() {
        let r = block_homology(&block("1212"), 1, 1, &Budget::unlimited()).unwrap();
        assert_eq!(r.status, FrontierStatus::Inconclusive);
        assert!(!r.is_point());
    }

    #[test]
    fn single_argument_block() {
        let unary = BergerElement::new(1, vec![], vec![0]).unwrap();
        for out in 0..3 {
            let r = block_homology(&unary, out, DEFAULT_MAX_TOTAL, &Budget::unlimited()).unwrap();
            assert!(r.is_point(), "{:?}", r.diagonals);
        }
    }
}
