//! Generalized lattice paths between level-tree colors.
//!
//! A path of depth `d` consists of a classical path between the level-1
//! intervals and, for each internal source point at level 1, a path of depth
//! `d - 1` from the subtree over that point into the funny product of the
//! target subtrees over its image. Targets whose coordinate is an endpoint
//! contribute the unit and are left out of the fiber, which records the
//! surviving axes as `active`.

use serde::{Deserialize, Serialize};

use super::path::{self, LatticePath};
use crate::error::{Error, Result};
use crate::signatures::{BergerElement, Factor, TruncatedSignature};
use crate::trees::{cartesian, LevelTree};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "GeneralizedRecord", into = "GeneralizedRecord")]
pub struct GeneralizedLatticePath {
    source: LevelTree,
    targets: Vec<LevelTree>,
    top: LatticePath,
    fibers: Vec<Fiber>,
}

/// The path one level up over an internal source point.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fiber {
    active: Vec<usize>,
    path: GeneralizedLatticePath,
}

impl Fiber {
    /// Axes of the parent path whose coordinate is internal here.
    pub fn active(&self) -> &[usize] {
        &self.active
    }

    pub fn path(&self) -> &GeneralizedLatticePath {
        &self.path
    }
}

#[derive(Serialize, Deserialize)]
struct GeneralizedRecord {
    source: LevelTree,
    targets: Vec<LevelTree>,
    top: LatticePath,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    fibers: Vec<FiberRecord>,
}

#[derive(Serialize, Deserialize)]
struct FiberRecord {
    active: Vec<usize>,
    path: GeneralizedRecord,
}

impl TryFrom<GeneralizedRecord> for GeneralizedLatticePath {
    type Error = Error;

    fn try_from(r: GeneralizedRecord) -> Result<Self> {
        let fibers = r
            .fibers
            .into_iter()
            .map(|f| {
                if f.active.contains(&0) {
                    return Err(Error::InvalidPath("active axes are numbered from 1".into()));
                }
                Ok(Fiber {
                    active: f.active.iter().map(|a| a - 1).collect(),
                    path: GeneralizedLatticePath::try_from(f.path)?,
                })
            })
            .collect::<Result<_>>()?;
        GeneralizedLatticePath::new(r.source, r.targets, r.top, fibers)
    }
}

impl From<GeneralizedLatticePath> for GeneralizedRecord {
    fn from(p: GeneralizedLatticePath) -> Self {
        GeneralizedRecord {
            source: p.source,
            targets: p.targets,
            top: p.top,
            fibers: p
                .fibers
                .into_iter()
                .map(|f| FiberRecord {
                    active: f.active.iter().map(|a| a + 1).collect(),
                    path: f.path.into(),
                })
                .collect(),
        }
    }
}

/// Per-level bounds for block membership.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BlockBound {
    /// A bar-string bound for paths of arity two.
    Signature(TruncatedSignature),
    /// One `K(k)` element per level.
    Levels(Vec<BergerElement>),
}

/// Axes whose coordinate at source object `a` is internal.
fn active_axes(top: &LatticePath, a: usize) -> (Vec<usize>, Vec<usize>) {
    let coords = top.object_coordinates(a);
    let active: Vec<usize> = (0..coords.len())
        .filter(|&j| coords[j] > 0 && coords[j] <= top.in_degrees()[j])
        .collect();
    (active, coords)
}

impl GeneralizedLatticePath {
    pub fn new(
        source: LevelTree,
        targets: Vec<LevelTree>,
        top: LatticePath,
        fibers: Vec<Fiber>,
    ) -> Result<Self> {
        let d = source.depth();
        if let Some(t) = targets.iter().find(|t| t.depth() != d) {
            return Err(Error::DepthMismatch(t.depth(), d));
        }
        let expected: Vec<usize> = targets.iter().map(|t| t.vertex_count(1)).collect();
        if top.in_degrees() != expected.as_slice() || top.out_degree() != source.vertex_count(1) {
            return Err(Error::ColorMismatch(format!(
                "level-1 path has degrees {:?} -> {} but the colors need {:?} -> {}",
                top.in_degrees(),
                top.out_degree(),
                expected,
                source.vertex_count(1)
            )));
        }
        if d == 1 {
            if !fibers.is_empty() {
                return Err(Error::InvalidPath("depth-1 paths have no fibers".into()));
            }
        } else {
            if fibers.len() != source.vertex_count(1) {
                return Err(Error::InvalidPath(format!(
                    "{} fibers for {} internal points",
                    fibers.len(),
                    source.vertex_count(1)
                )));
            }
            for (idx, fiber) in fibers.iter().enumerate() {
                let (active, coords) = active_axes(&top, idx + 1);
                if fiber.active != active {
                    return Err(Error::InvalidPath(format!(
                        "fiber {} lists axes {:?}, the level-1 path makes {:?} active",
                        idx + 1,
                        fiber.active,
                        active
                    )));
                }
                let want_targets: Vec<LevelTree> = active
                    .iter()
                    .map(|&j| targets[j].subtree(coords[j] - 1))
                    .collect();
                if fiber.path.source != source.subtree(idx) || fiber.path.targets != want_targets {
                    return Err(Error::ColorMismatch(format!(
                        "fiber {} has the wrong colors",
                        idx + 1
                    )));
                }
            }
        }
        Ok(GeneralizedLatticePath {
            source,
            targets,
            top,
            fibers,
        })
    }

    /// A depth-1 path between corolla colors.
    pub fn from_path(top: LatticePath) -> Self {
        GeneralizedLatticePath {
            source: LevelTree::corolla(top.out_degree()),
            targets: top
                .in_degrees()
                .iter()
                .map(|&n| LevelTree::corolla(n))
                .collect(),
            top,
            fibers: Vec::new(),
        }
    }

    pub fn identity(color: &LevelTree) -> Self {
        let m = color.vertex_count(1);
        let fibers = if color.depth() == 1 {
            Vec::new()
        } else {
            (0..m)
                .map(|a| Fiber {
                    active: vec![0],
                    path: GeneralizedLatticePath::identity(&color.subtree(a)),
                })
                .collect()
        };
        GeneralizedLatticePath {
            source: color.clone(),
            targets: vec![color.clone()],
            top: LatticePath::identity(m),
            fibers,
        }
    }

    pub fn depth(&self) -> usize {
        self.source.depth()
    }

    pub fn arity(&self) -> usize {
        self.targets.len()
    }

    pub fn source(&self) -> &LevelTree {
        &self.source
    }

    pub fn targets(&self) -> &[LevelTree] {
        &self.targets
    }

    pub fn top(&self) -> &LatticePath {
        &self.top
    }

    pub fn fibers(&self) -> &[Fiber] {
        &self.fibers
    }

    /// Calls `visit(level, i, j, factor)` for every pair of axes that move
    /// together in some fiber, stopping early when it returns `false`.
    pub fn visit_pairs(&self, visit: &mut dyn FnMut(usize, usize, usize, Factor) -> bool) -> bool {
        let names: Vec<usize> = (0..self.arity()).collect();
        self.visit_named(1, &names, visit)
    }

    fn visit_named(
        &self,
        level: usize,
        names: &[usize],
        visit: &mut dyn FnMut(usize, usize, usize, Factor) -> bool,
    ) -> bool {
        let k = names.len();
        for i in 0..k {
            for j in i + 1..k {
                if !visit(level, names[i], names[j], self.top.pair_factor(i, j)) {
                    return false;
                }
            }
        }
        self.fibers.iter().all(|f| {
            let sub: Vec<usize> = f.active.iter().map(|&a| names[a]).collect();
            f.path.visit_named(level + 1, &sub, visit)
        })
    }

    /// All factors of the `(i, j)` projection, grouped by level.
    pub fn pair_profile(&self, i: usize, j: usize) -> Vec<Vec<Factor>> {
        let mut levels = vec![Vec::new(); self.depth()];
        self.visit_pairs(&mut |level, a, b, f| {
            if (a, b) == (i, j) {
                levels[level - 1].push(f);
            }
            true
        });
        levels
    }

    /// The projection to axes `i < j` is dominated by `sig` at every level.
    pub fn pair_below(&self, i: usize, j: usize, sig: &TruncatedSignature) -> bool {
        self.visit_pairs(&mut |level, a, b, f| {
            (a, b) != (i, j) || sig.level(level).is_some_and(|g| f.le(&g))
        })
    }

    /// Maximum number of direction changes per level over all pairs.
    pub fn complexity(&self) -> Vec<usize> {
        let mut c = vec![0; self.depth()];
        self.visit_pairs(&mut |level, _, _, f| {
            c[level - 1] = c[level - 1].max(f.len() - 1);
            true
        });
        c
    }
}

pub fn block_membership(path: &GeneralizedLatticePath, bound: &BlockBound) -> Result<bool> {
    match bound {
        BlockBound::Signature(sig) => {
            if path.arity() != 2 {
                return Err(Error::ArityMismatch(path.arity(), 2));
            }
            if sig.depth() != path.depth() {
                return Err(Error::DepthMismatch(sig.depth(), path.depth()));
            }
            Ok(path.pair_below(0, 1, sig))
        }
        BlockBound::Levels(levels) => {
            if levels.len() != path.depth() {
                return Err(Error::DepthMismatch(levels.len(), path.depth()));
            }
            if let Some(b) = levels.iter().find(|b| b.arity() != path.arity()) {
                return Err(Error::ArityMismatch(path.arity(), b.arity()));
            }
            Ok(path.visit_pairs(&mut |level, i, j, f| f.le(&levels[level - 1].pair(i, j))))
        }
    }
}

/// All generalized paths from `source` into the funny product of `targets`.
pub fn enumerate_generalized(
    source: &LevelTree,
    targets: &[LevelTree],
) -> Result<Vec<GeneralizedLatticePath>> {
    let d = source.depth();
    if let Some(t) = targets.iter().find(|t| t.depth() != d) {
        return Err(Error::DepthMismatch(t.depth(), d));
    }
    let degrees: Vec<usize> = targets.iter().map(|t| t.vertex_count(1)).collect();
    let mut out = Vec::new();
    for top in path::enumerate_paths(&degrees, source.vertex_count(1)) {
        if d == 1 {
            out.push(GeneralizedLatticePath {
                source: source.clone(),
                targets: targets.to_vec(),
                top,
                fibers: Vec::new(),
            });
            continue;
        }
        let mut options = Vec::with_capacity(source.vertex_count(1));
        for a in 0..source.vertex_count(1) {
            let (active, coords) = active_axes(&top, a + 1);
            let fiber_targets: Vec<LevelTree> = active
                .iter()
                .map(|&j| targets[j].subtree(coords[j] - 1))
                .collect();
            let paths = enumerate_generalized(&source.subtree(a), &fiber_targets)?;
            options.push(
                paths
                    .into_iter()
                    .map(|path| Fiber {
                        active: active.clone(),
                        path,
                    })
                    .collect::<Vec<_>>(),
            );
        }
        for fibers in cartesian(&options) {
            out.push(GeneralizedLatticePath {
                source: source.clone(),
                targets: targets.to_vec(),
                top: top.clone(),
                fibers,
            });
        }
    }
    Ok(out)
}

/// Number of paths [`enumerate_generalized`] would produce, without building them.
pub fn count_generalized(source: &LevelTree, targets: &[LevelTree]) -> Result<u128> {
    let d = source.depth();
    if let Some(t) = targets.iter().find(|t| t.depth() != d) {
        return Err(Error::DepthMismatch(t.depth(), d));
    }
    let degrees: Vec<usize> = targets.iter().map(|t| t.vertex_count(1)).collect();
    if d == 1 {
        return Ok(path::count_paths(&degrees, source.vertex_count(1)));
    }
    let mut total = 0u128;
    for top in path::enumerate_paths(&degrees, source.vertex_count(1)) {
        let mut product = 1u128;
        for a in 0..source.vertex_count(1) {
            let (active, coords) = active_axes(&top, a + 1);
            let fiber_targets: Vec<LevelTree> = active
                .iter()
                .map(|&j| targets[j].subtree(coords[j] - 1))
                .collect();
            product =
                product.saturating_mul(count_generalized(&source.subtree(a), &fiber_targets)?);
        }
        total = total.saturating_add(product);
    }
    Ok(total)
}

/// Replaces argument `s` of `outer` by `inners[s]`, whose axes are renamed
/// by `relabel[s]` into a composite with colors `targets`.
pub fn substitute_generalized(
    outer: &GeneralizedLatticePath,
    inners: &[GeneralizedLatticePath],
    relabel: &[Vec<usize>],
    targets: Vec<LevelTree>,
) -> Result<GeneralizedLatticePath> {
    if inners.len() != outer.arity() || relabel.len() != outer.arity() {
        return Err(Error::ColorMismatch("one inner path per argument".into()));
    }
    for (s, inner) in inners.iter().enumerate() {
        if inner.source != outer.targets[s] {
            return Err(Error::ColorMismatch(format!(
                "argument {} has color {} but the inner path starts at {}",
                s + 1,
                outer.targets[s],
                inner.source
            )));
        }
        if relabel[s].len() != inner.arity()
            || relabel[s]
                .iter()
                .zip(&inner.targets)
                .any(|(&g, t)| targets.get(g) != Some(t))
        {
            return Err(Error::ColorMismatch(format!(
                "inner colors of argument {} do not match",
                s + 1
            )));
        }
    }
    let degrees: Vec<usize> = targets.iter().map(|t| t.vertex_count(1)).collect();
    let inner_tops: Vec<LatticePath> = inners.iter().map(|p| p.top.clone()).collect();
    let top = path::substitute(&outer.top, &inner_tops, relabel, degrees)?;
    if outer.depth() == 1 {
        return GeneralizedLatticePath::new(outer.source.clone(), targets, top, Vec::new());
    }
    let mut fibers = Vec::with_capacity(outer.fibers.len());
    for (a, outer_fiber) in outer.fibers.iter().enumerate() {
        let (active, coords) = active_axes(&top, a + 1);
        let outer_coords = outer.top.object_coordinates(a + 1);
        let mut fiber_inners = Vec::new();
        let mut fiber_relabel = Vec::new();
        for &s in &outer_fiber.active {
            let inner_fiber = &inners[s].fibers[outer_coords[s] - 1];
            fiber_inners.push(inner_fiber.path.clone());
            let names = inner_fiber
                .active
                .iter()
                .map(|&r| {
                    let g = relabel[s][r];
                    active.binary_search(&g).map_err(|_| {
                        Error::InvalidPath(format!(
                            "axis {} is internal in a fiber but not in the composite",
                            g + 1
                        ))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            fiber_relabel.push(names);
        }
        let fiber_targets: Vec<LevelTree> = active
            .iter()
            .map(|&g| targets[g].subtree(coords[g] - 1))
            .collect();
        let path = substitute_generalized(
            &outer_fiber.path,
            &fiber_inners,
            &fiber_relabel,
            fiber_targets,
        )?;
        fibers.push(Fiber { active, path });
    }
    GeneralizedLatticePath::new(outer.source.clone(), targets, top, fibers)
}

/// Partial composition `outer ∘_slot inner`.
pub fn compose_generalized(
    outer: &GeneralizedLatticePath,
    slot: usize,
    inner: &GeneralizedLatticePath,
) -> Result<GeneralizedLatticePath> {
    if slot >= outer.arity() {
        return Err(Error::ColorMismatch(format!(
            "slot {} beyond arity {}",
            slot + 1,
            outer.arity()
        )));
    }
    let k = inner.arity();
    let mut inners = Vec::new();
    let mut relabel = Vec::new();
    let mut targets = Vec::new();
    for (s, color) in outer.targets.iter().enumerate() {
        if s == slot {
            inners.push(inner.clone());
            relabel.push((slot..slot + k).collect());
            targets.extend(inner.targets.iter().cloned());
        } else {
            inners.push(GeneralizedLatticePath::identity(color));
            relabel.push(vec![if s < slot { s } else { s + k - 1 }]);
            targets.push(color.clone());
        }
    }
    substitute_generalized(outer, &inners, &relabel, targets)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(text: &str) -> LevelTree {
        LevelTree::parse(2, text).unwrap()
    }

    #[test]
    fn depth_one_agrees_with_classical_paths() {
        let src = LevelTree::corolla(1);
        let tgts = vec![LevelTree::corolla(1), LevelTree::corolla(0)];
        let all = enumerate_generalized(&src, &tgts).unwrap();
        assert_eq!(all.len(), path::enumerate_paths(&[1, 0], 1).len());
        let colors = [t("[[1]]"), t("[[0],[0]]"), t("[[0]]")];
        let deep = enumerate_generalized(&colors[0], &colors[1..]).unwrap();
        assert_eq!(
            deep.len() as u128,
            count_generalized(&colors[0], &colors[1..]).unwrap()
        );
    }

    #[test]
    fn identity_is_a_unit_at_depth_two() {
        let colors = [t("[[1]]"), t("[[0],[0]]"), t("[[0]]")];
        let all = enumerate_generalized(&colors[0], &colors[1..]).unwrap();
        assert!(!all.is_empty());
        for p in &all {
            let id_out = GeneralizedLatticePath::identity(p.source());
            let left = substitute_generalized(
                &id_out,
                std::slice::from_ref(p),
                &[vec![0, 1]],
                p.targets().to_vec(),
            )
            .unwrap();
            assert_eq!(&left, p);
            for slot in 0..2 {
                let right = compose_generalized(
                    p,
                    slot,
                    &GeneralizedLatticePath::identity(&p.targets()[slot]),
                )
                .unwrap();
                assert_eq!(&right, p);
            }
        }
    }

    #[test]
    fn per_fiber_bound_check() {
        // Two fibers at level 2 with both axes active: one led by each axis.
        let colors = [t("[[0],[0]]"), t("[[0],[0]]"), t("[[0]]")];
        let all = enumerate_generalized(&colors[0], &colors[1..]).unwrap();
        let wanted = all
            .iter()
            .find(|p| {
                let profile = p.pair_profile(0, 1);
                let mut second: Vec<String> = profile[1].iter().map(|f| f.to_string()).collect();
                second.sort();
                profile[0][0].to_string() == "(121)" && second == ["(12)", "(21)"]
            })
            .expect("a path with fibers (12) and (21)");
        let bound = BergerElement::from_factor(Factor::parse("121").unwrap());
        let levels = BlockBound::Levels(vec![bound.clone(), bound]);
        assert!(block_membership(wanted, &levels).unwrap());
        let tight = BlockBound::Levels(vec![
            BergerElement::from_factor(Factor::parse("121").unwrap()),
            BergerElement::from_factor(Factor::parse("12").unwrap()),
        ]);
        assert!(!block_membership(wanted, &tight).unwrap());
    }

    #[test]
    fn validation_rejects_wrong_fibers() {
        let colors = [t("[[1]]"), t("[[0]]")];
        let p = &enumerate_generalized(&colors[0], &colors[1..]).unwrap()[0];
        assert!(GeneralizedLatticePath::new(
            p.source().clone(),
            p.targets().to_vec(),
            p.top().clone(),
            Vec::new()
        )
        .is_err());
        let bad_sig = BlockBound::Signature(TruncatedSignature::parse("(121)", 1).unwrap());
        assert!(block_membership(p, &bad_sig).is_err());
    }

    #[test]
    fn serde_round_trip() {
        let colors = [t("[[1]]"), t("[[0],[0]]"), t("[[0]]")];
        for p in enumerate_generalized(&colors[0], &colors[1..])
            .unwrap()
            .iter()
            .take(20)
        {
            let text = serde_json::to_string(p).unwrap();
            let back: GeneralizedLatticePath = serde_json::from_str(&text).unwrap();
            assert_eq!(&back, p);
        }
    }
}
