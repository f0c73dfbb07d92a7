//! Property checks shared by the proptest suite and the acceptance run.

#![allow(dead_code)]

use operad_forge_core::conjectures::downset;
use operad_forge_core::lattice::{enumerate_paths, LatticePath, OrdinalMap};
use operad_forge_core::poset::FinitePoset;
use operad_forge_core::signatures::{berger_leq, BergerElement, TruncatedSignature};
use operad_forge_core::topology::{ChainComplex, HomologyReport};
use operad_forge_core::vdgen::generate_v;

pub type Check = Result<(), String>;

fn ensure(ok: bool, message: impl FnOnce() -> String) -> Check {
    if ok {
        Ok(())
    } else {
        Err(message())
    }
}

/// Every signature below some canonical label, for `d = 1..=max_d`.
pub fn signature_pool(max_d: usize) -> Vec<Vec<TruncatedSignature>> {
    (1..=max_d)
        .map(|d| {
            downset(&generate_v(d).unwrap().elements)
                .unwrap()
                .elements()
                .to_vec()
        })
        .collect()
}

pub fn order_axioms(
    x: &TruncatedSignature,
    y: &TruncatedSignature,
    z: &TruncatedSignature,
) -> Check {
    ensure(x.le(x), || format!("{x} is not below itself"))?;
    ensure(!(x.le(y) && y.le(x)) || x == y, || {
        format!("{x} and {y} are mutually below")
    })?;
    ensure(!(x.le(y) && y.le(z)) || x.le(z), || {
        format!("{x} <= {y} <= {z} is not transitive")
    })
}

pub fn swap_automorphism(x: &TruncatedSignature, y: &TruncatedSignature) -> Check {
    ensure(x.le(y) == x.swap().le(&y.swap()), || {
        format!("swap changes {x} <= {y}")
    })
}

pub fn swap_involution(x: &TruncatedSignature) -> Check {
    ensure(x.swap().swap() == *x, || format!("swap twice moves {x}"))?;
    ensure(x.swap() != *x, || format!("swap fixes {x}"))
}

/// Argument actions never raise block parameters; output actions keep them.
pub fn unary_monotone(
    p: &LatticePath,
    axis: usize,
    map: &OrdinalMap,
    out_map: &OrdinalMap,
) -> Check {
    let moved = p.act_argument(axis, map).map_err(|e| e.to_string())?;
    let below = berger_leq(&moved.params(), &p.params()).map_err(|e| e.to_string())?;
    ensure(below, || {
        format!("{p} acted by {map} on axis {} rose to {moved}", axis + 1)
    })?;
    let shifted = p.act_output(out_map).map_err(|e| e.to_string())?;
    ensure(shifted.params() == p.params(), || {
        format!("{p} acted by {out_map} changed parameters")
    })
}

pub fn boundary_squares_to_zero(c: &ChainComplex) -> Check {
    for q in 1..c.dims().len().saturating_sub(1) {
        let lower = c.boundary(q).unwrap();
        let upper = c.boundary(q + 1).unwrap();
        ensure(lower.mul(upper).unwrap().is_zero(), || {
            format!("d_{q} d_{} is nonzero", q + 1)
        })?;
    }
    Ok(())
}

pub fn euler_consistent(h: &HomologyReport) -> Check {
    ensure(h.euler_from_betti() == h.euler_from_generators(), || {
        format!(
            "chi from chains {} vs from homology {}",
            h.euler_from_generators(),
            h.euler_from_betti()
        )
    })
}

/// The poset on the chosen elements with the signature order.
pub fn subposet(pool: &[TruncatedSignature], pick: &[bool]) -> FinitePoset<TruncatedSignature> {
    let chosen: Vec<TruncatedSignature> = pool
        .iter()
        .zip(pick)
        .filter(|(_, &b)| b)
        .map(|(x, _)| x.clone())
        .collect();
    FinitePoset::from_relation(chosen, |a, b| a.le(b)).unwrap()
}

/// A lattice path chosen by indices, reduced modulo the available counts.
pub fn pick_path(degrees: &[usize], out: usize, index: usize) -> LatticePath {
    let all = enumerate_paths(degrees, out);
    all[index % all.len()].clone()
}

pub fn pick_map(source: usize, target: usize, index: usize) -> OrdinalMap {
    let all = OrdinalMap::all(source, target);
    all[index % all.len()].clone()
}

/// A `K(k)` element from raw complexities and a rotation of the identity.
pub fn pick_block(k: usize, mu: &[usize], rotation: usize) -> BergerElement {
    let rank: Vec<usize> = (0..k).map(|i| (i + rotation) % k).collect();
    BergerElement::new(k, mu[..k * (k - 1) / 2].to_vec(), rank).unwrap()
}
