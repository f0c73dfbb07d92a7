//! Level trees, pruned trees, leaf orders and morphisms of level trees.
//!
//! A tree of depth `d` is stored as one vector of fiber sizes per level: entry
//! `fibers[k][v]` is the number of children of vertex `v` at level `k`. Level 0
//! holds the root only, so `fibers[0]` always has length one. Vertices are
//! addressed by `(level, index)` with indices running left to right.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Range;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LevelTree {
    depth: usize,
    fibers: Vec<Vec<usize>>,
}

impl LevelTree {
    /// Builds a tree from per-level fiber sizes, `fibers[k-1]` listing the
    /// children counts of the level `k-1` vertices.
    pub fn new(depth: usize, fibers: Vec<Vec<usize>>) -> Result<Self> {
        if depth == 0 {
            return Err(Error::InvalidTree("depth must be positive".into()));
        }
        if fibers.len() != depth {
            return Err(Error::InvalidTree(format!(
                "expected {depth} levels of fibers, got {}",
                fibers.len()
            )));
        }
        let mut width = 1;
        for (k, level) in fibers.iter().enumerate() {
            if level.len() != width {
                return Err(Error::InvalidTree(format!(
                    "level {} has {} fiber entries but level {} has {} vertices",
                    k + 1,
                    level.len(),
                    k,
                    width
                )));
            }
            width = level.iter().sum();
        }
        Ok(LevelTree { depth, fibers })
    }

    /// The linear tree with a single vertex on every level.
    pub fn linear(depth: usize) -> Self {
        assert!(depth > 0, "depth must be positive");
        LevelTree {
            depth,
            fibers: vec![vec![1]; depth],
        }
    }

    /// The depth-1 tree with `n` leaves.
    pub fn corolla(n: usize) -> Self {
        LevelTree {
            depth: 1,
            fibers: vec![vec![n]],
        }
    }

    /// The tree with nothing above the root.
    pub fn degenerate(depth: usize) -> Self {
        assert!(depth > 0, "depth must be positive");
        let mut fibers = vec![Vec::new(); depth];
        fibers[0] = vec![0];
        LevelTree { depth, fibers }
    }

    /// Joins trees of depth `d` under a new root, giving a tree of depth `d + 1`.
    pub fn graft(depth: usize, children: &[LevelTree]) -> Result<Self> {
        if depth < 2 {
            return Err(Error::InvalidTree("graft needs depth at least 2".into()));
        }
        if let Some(c) = children.iter().find(|c| c.depth != depth - 1) {
            return Err(Error::DepthMismatch(c.depth, depth - 1));
        }
        let mut fibers = vec![vec![children.len()]];
        for k in 0..depth - 1 {
            fibers.push(children.iter().flat_map(|c| c.fibers[k].clone()).collect());
        }
        LevelTree::new(depth, fibers)
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn fibers(&self) -> &[Vec<usize>] {
        &self.fibers
    }

    pub fn vertex_count(&self, level: usize) -> usize {
        match level {
            0 => 1,
            l if l <= self.depth => self.fibers[l - 1].iter().sum(),
            _ => 0,
        }
    }

    /// Number of children of a vertex; zero at the top level.
    pub fn fiber_size(&self, level: usize, index: usize) -> usize {
        if level >= self.depth {
            0
        } else {
            self.fibers[level][index]
        }
    }

    /// Index range of the children of `(level, index)` at `level + 1`.
    pub fn children(&self, level: usize, index: usize) -> Range<usize> {
        if level >= self.depth {
            return 0..0;
        }
        let start: usize = self.fibers[level][..index].iter().sum();
        start..start + self.fibers[level][index]
    }

    /// Index of the parent of `(level, index)`, for `level >= 1`.
    pub fn parent(&self, level: usize, index: usize) -> usize {
        assert!(level >= 1 && level <= self.depth);
        let mut acc = 0;
        for (p, &size) in self.fibers[level - 1].iter().enumerate() {
            acc += size;
            if index < acc {
                return p;
            }
        }
        panic!("vertex ({level}, {index}) out of range");
    }

    /// Index of the ancestor of `(level, index)` at `target <= level`.
    pub fn ancestor(&self, level: usize, index: usize, target: usize) -> usize {
        let (mut l, mut i) = (level, index);
        while l > target {
            i = self.parent(l, i);
            l -= 1;
        }
        i
    }

    pub fn is_leaf(&self, level: usize, index: usize) -> bool {
        level == self.depth || self.fiber_size(level, index) == 0
    }

    /// All leaves, ordered by level and then left to right.
    pub fn leaves(&self) -> Vec<(usize, usize)> {
        (0..=self.depth)
            .flat_map(|l| (0..self.vertex_count(l)).map(move |i| (l, i)))
            .filter(|&(l, i)| self.is_leaf(l, i))
            .collect()
    }

    pub fn is_pruned(&self) -> bool {
        self.fibers[..self.depth]
            .iter()
            .all(|level| level.iter().all(|&s| s > 0))
    }

    /// True when no vertex sits at the top level.
    pub fn is_degenerate(&self) -> bool {
        self.vertex_count(self.depth) == 0
    }

    /// Number of top-level vertices, which for a pruned tree are all its leaves.
    pub fn top_count(&self) -> usize {
        self.vertex_count(self.depth)
    }

    /// Number of non-root vertices. For a depth-2 tree `([m]; [n_1], ..)` this
    /// is `m + n_1 + ... + n_m`.
    pub fn degree(&self) -> usize {
        (1..=self.depth).map(|l| self.vertex_count(l)).sum()
    }

    /// The depth `d - 1` tree above a level-1 vertex.
    pub fn subtree(&self, index: usize) -> LevelTree {
        assert!(self.depth >= 2, "subtree needs depth at least 2");
        let mut range = index..index + 1;
        let mut fibers = Vec::with_capacity(self.depth - 1);
        for k in 1..self.depth {
            let level = &self.fibers[k];
            fibers.push(level[range.clone()].to_vec());
            let start: usize = level[..range.start].iter().sum();
            let len: usize = level[range.clone()].iter().sum();
            range = start..start + len;
        }
        LevelTree {
            depth: self.depth - 1,
            fibers,
        }
    }

    /// For each pair of top-level leaves `x < y`, the highest level at which
    /// their ancestors coincide.
    pub fn leaf_order(&self) -> Result<BTreeMap<(usize, usize), usize>> {
        if !self.is_pruned() {
            return Err(Error::NotPruned);
        }
        let n = self.top_count();
        let chains: Vec<Vec<usize>> = (0..n)
            .map(|x| {
                (0..=self.depth)
                    .map(|l| self.ancestor(self.depth, x, l))
                    .collect()
            })
            .collect();
        let mut out = BTreeMap::new();
        for x in 0..n {
            for y in x + 1..n {
                let meet = (0..=self.depth)
                    .take_while(|&l| chains[x][l] == chains[y][l])
                    .last()
                    .expect("roots agree");
                out.insert((x, y), meet);
            }
        }
        Ok(out)
    }

    /// Meeting level of two distinct top-level leaves.
    pub fn meeting_level(&self, x: usize, y: usize) -> usize {
        let mut level = self.depth;
        let (mut a, mut b) = (x, y);
        while a != b {
            a = self.parent(level, a);
            b = self.parent(level, b);
            level -= 1;
        }
        level
    }

    /// The subtree spanned by top-level vertices, or the degenerate tree when
    /// there are none.
    pub fn prunisation(&self) -> LevelTree {
        if self.is_degenerate() {
            return LevelTree::degenerate(self.depth);
        }
        let d = self.depth;
        let mut keep: Vec<Vec<bool>> = (0..=d).map(|l| vec![false; self.vertex_count(l)]).collect();
        keep[d].iter_mut().for_each(|k| *k = true);
        for l in (1..=d).rev() {
            for i in 0..self.vertex_count(l) {
                if keep[l][i] {
                    let p = self.parent(l, i);
                    keep[l - 1][p] = true;
                }
            }
        }
        let fibers = (0..d)
            .map(|l| {
                (0..self.vertex_count(l))
                    .filter(|&i| keep[l][i])
                    .map(|i| self.children(l, i).filter(|&c| keep[l + 1][c]).count())
                    .collect()
            })
            .collect();
        LevelTree { depth: d, fibers }
    }

    /// Nested-array text form: a depth-1 tree with `n` vertices is `[n]`, a
    /// deeper tree is the array of the subtrees above its level-1 vertices.
    pub fn to_nested(&self) -> Value {
        if self.depth == 1 {
            return Value::from(vec![self.fibers[0][0]]);
        }
        Value::Array(
            (0..self.vertex_count(1))
                .map(|i| self.subtree(i).to_nested())
                .collect(),
        )
    }

    pub fn from_nested(depth: usize, value: &Value) -> Result<Self> {
        let arr = value
            .as_array()
            .ok_or_else(|| Error::InvalidTree(format!("expected an array, got {value}")))?;
        if depth == 1 {
            return match arr.as_slice() {
                [n] => n
                    .as_u64()
                    .map(|n| LevelTree::corolla(n as usize))
                    .ok_or_else(|| Error::InvalidTree(format!("expected a count, got {n}"))),
                _ => Err(Error::InvalidTree(format!(
                    "depth-1 tree must be [n], got {value}"
                ))),
            };
        }
        if depth == 0 {
            return Err(Error::InvalidTree("depth must be positive".into()));
        }
        let children = arr
            .iter()
            .map(|c| LevelTree::from_nested(depth - 1, c))
            .collect::<Result<Vec<_>>>()?;
        LevelTree::graft(depth, &children)
    }

    /// Parses the compact text form, e.g. `[[1],[2]]` for depth 2.
    pub fn parse(depth: usize, text: &str) -> Result<Self> {
        let value: Value =
            serde_json::from_str(text).map_err(|e| Error::InvalidTree(format!("{text}: {e}")))?;
        LevelTree::from_nested(depth, &value)
    }
}

impl fmt::Display for LevelTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_nested())
    }
}

#[derive(Serialize, Deserialize)]
struct TreeRepr {
    d: usize,
    tree: Value,
}

impl Serialize for LevelTree {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TreeRepr {
            d: self.depth,
            tree: self.to_nested(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LevelTree {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = TreeRepr::deserialize(d)?;
        LevelTree::from_nested(repr.d, &repr.tree).map_err(serde::de::Error::custom)
    }
}

/// All pruned trees of the given depth with exactly `leaves` top-level leaves,
/// in a fixed order.
pub fn pruned_trees(depth: usize, leaves: usize) -> Vec<LevelTree> {
    assert!(depth > 0, "depth must be positive");
    if leaves == 0 {
        return Vec::new();
    }
    if depth == 1 {
        return vec![LevelTree::corolla(leaves)];
    }
    let mut out = Vec::new();
    for parts in compositions(leaves) {
        let options: Vec<Vec<LevelTree>> =
            parts.iter().map(|&p| pruned_trees(depth - 1, p)).collect();
        for choice in cartesian(&options) {
            out.push(LevelTree::graft(depth, &choice).expect("depths agree"));
        }
    }
    out
}

/// All trees of the given depth with at most `max_degree` non-root vertices.
pub fn trees_up_to_degree(depth: usize, max_degree: usize) -> Vec<LevelTree> {
    let mut out = Vec::new();
    for deg in 0..=max_degree {
        out.extend(trees_of_degree(depth, deg));
    }
    out
}

fn trees_of_degree(depth: usize, degree: usize) -> Vec<LevelTree> {
    if depth == 1 {
        return vec![LevelTree::corolla(degree)];
    }
    let mut out = Vec::new();
    for m in 0..=degree {
        for parts in weak_compositions(degree - m, m) {
            let options: Vec<Vec<LevelTree>> = parts
                .iter()
                .map(|&p| trees_of_degree(depth - 1, p))
                .collect();
            for choice in cartesian(&options) {
                out.push(LevelTree::graft(depth, &choice).expect("depths agree"));
            }
        }
    }
    out
}

fn compositions(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in (1..=n).rev() {
        for mut rest in compositions(n - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn weak_compositions(n: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if n == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in 0..=n {
        for mut rest in weak_compositions(n - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

pub(crate) fn cartesian<T: Clone>(options: &[Vec<T>]) -> Vec<Vec<T>> {
    let mut acc: Vec<Vec<T>> = vec![Vec::new()];
    for opts in options {
        let mut next = Vec::with_capacity(acc.len() * opts.len());
        for prefix in &acc {
            for o in opts {
                let mut v = prefix.clone();
                v.push(o.clone());
                next.push(v);
            }
        }
        acc = next;
    }
    acc
}

/// A morphism of level trees given by its vertex functions on levels `1..=d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TreeMorphism {
    source: LevelTree,
    target: LevelTree,
    maps: Vec<Vec<usize>>,
}

impl TreeMorphism {
    pub fn new(source: LevelTree, target: LevelTree, maps: Vec<Vec<usize>>) -> Result<Self> {
        let d = source.depth;
        if target.depth != d {
            return Err(Error::DepthMismatch(d, target.depth));
        }
        if maps.len() != d {
            return Err(Error::InvalidMorphism(format!(
                "expected {d} level maps, got {}",
                maps.len()
            )));
        }
        for l in 1..=d {
            let f = &maps[l - 1];
            if f.len() != source.vertex_count(l) {
                return Err(Error::InvalidMorphism(format!(
                    "level {l} map has {} entries for {} vertices",
                    f.len(),
                    source.vertex_count(l)
                )));
            }
            for (v, &w) in f.iter().enumerate() {
                if w >= target.vertex_count(l) {
                    return Err(Error::InvalidMorphism(format!(
                        "level {l} vertex {v} maps outside the target"
                    )));
                }
                let down_src = if l == 1 {
                    0
                } else {
                    maps[l - 2][source.parent(l, v)]
                };
                if target.parent(l, w) != down_src {
                    return Err(Error::InvalidMorphism(format!(
                        "level {l} vertex {v} does not commute with the structure maps"
                    )));
                }
            }
            for p in 0..source.vertex_count(l - 1) {
                let r = source.children(l - 1, p);
                if r.clone().zip(r.skip(1)).any(|(a, b)| f[a] > f[b]) {
                    return Err(Error::InvalidMorphism(format!(
                        "not order preserving on the fiber of ({}, {p})",
                        l - 1
                    )));
                }
            }
        }
        Ok(TreeMorphism {
            source,
            target,
            maps,
        })
    }

    pub fn identity(tree: &LevelTree) -> Self {
        let maps = (1..=tree.depth)
            .map(|l| (0..tree.vertex_count(l)).collect())
            .collect();
        TreeMorphism {
            source: tree.clone(),
            target: tree.clone(),
            maps,
        }
    }

    /// Builds the morphism of pruned trees determined by a function on
    /// top-level leaves, rejecting functions that do not come from a morphism.
    pub fn from_leaf_map(
        source: &LevelTree,
        target: &LevelTree,
        leaf_map: &[usize],
    ) -> Result<Self> {
        if !source.is_pruned() || !target.is_pruned() {
            return Err(Error::NotPruned);
        }
        let d = source.depth;
        if target.depth != d {
            return Err(Error::DepthMismatch(d, target.depth));
        }
        if leaf_map.len() != source.top_count() {
            return Err(Error::InvalidMorphism(
                "leaf map has the wrong length".into(),
            ));
        }
        let mut maps: Vec<Vec<Option<usize>>> = (1..=d)
            .map(|l| vec![None; source.vertex_count(l)])
            .collect();
        for (x, &fx) in leaf_map.iter().enumerate() {
            if fx >= target.top_count() {
                return Err(Error::InvalidMorphism(format!(
                    "leaf {x} maps outside the target"
                )));
            }
            for l in 1..=d {
                let v = source.ancestor(d, x, l);
                let w = target.ancestor(d, fx, l);
                match maps[l - 1][v] {
                    None => maps[l - 1][v] = Some(w),
                    Some(prev) if prev == w => {}
                    Some(_) => {
                        return Err(Error::InvalidMorphism(format!(
                            "leaves above ({l}, {v}) land in different level-{l} vertices"
                        )))
                    }
                }
            }
        }
        let maps = maps
            .into_iter()
            .map(|m| {
                m.into_iter()
                    .map(|w| w.expect("pruned trees reach every vertex"))
                    .collect()
            })
            .collect();
        TreeMorphism::new(source.clone(), target.clone(), maps)
    }

    pub fn source(&self) -> &LevelTree {
        &self.source
    }

    pub fn target(&self) -> &LevelTree {
        &self.target
    }

    pub fn maps(&self) -> &[Vec<usize>] {
        &self.maps
    }

    /// The function on top-level vertices.
    pub fn leaf_map(&self) -> &[usize] {
        &self.maps[self.source.depth - 1]
    }

    pub fn is_surjective(&self) -> bool {
        (1..=self.source.depth).all(|l| {
            let mut hit = vec![false; self.target.vertex_count(l)];
            self.maps[l - 1].iter().for_each(|&w| hit[w] = true);
            hit.into_iter().all(|h| h)
        })
    }

    /// Preimage of the chain from the root to the leaf `(level, index)` of the
    /// target, as a level tree of the same depth.
    pub fn fiber(&self, level: usize, index: usize) -> Result<LevelTree> {
        let d = self.source.depth;
        if level > d
            || index >= self.target.vertex_count(level)
            || !self.target.is_leaf(level, index)
        {
            return Err(Error::NotALeaf { level, index });
        }
        let chain: Vec<usize> = (0..=level)
            .map(|l| self.target.ancestor(level, index, l))
            .collect();
        let inside = |l: usize, v: usize| l == 0 || (l <= level && self.maps[l - 1][v] == chain[l]);
        let fibers = (0..d)
            .map(|l| {
                (0..self.source.vertex_count(l))
                    .filter(|&v| inside(l, v))
                    .map(|v| {
                        self.source
                            .children(l, v)
                            .filter(|&c| inside(l + 1, c))
                            .count()
                    })
                    .collect()
            })
            .collect();
        LevelTree::new(d, fibers)
    }

    /// Source leaf indices over a target leaf, in source order.
    pub fn leaf_preimage(&self, target_leaf: usize) -> Vec<usize> {
        self.leaf_map()
            .iter()
            .enumerate()
            .filter(|&(_, &y)| y == target_leaf)
            .map(|(x, _)| x)
            .collect()
    }
}

/// `psi ∘ phi`, defined when the target of `phi` is the source of `psi`.
pub fn compose_morphisms(psi: &TreeMorphism, phi: &TreeMorphism) -> Result<TreeMorphism> {
    if phi.target != psi.source {
        return Err(Error::InvalidMorphism("target and source differ".into()));
    }
    let maps = phi
        .maps
        .iter()
        .zip(&psi.maps)
        .map(|(f, g)| f.iter().map(|&v| g[v]).collect())
        .collect();
    TreeMorphism::new(phi.source.clone(), psi.target.clone(), maps)
}

/// All morphisms between pruned trees, ordered by leaf map.
pub fn pruned_morphisms(
    source: &LevelTree,
    target: &LevelTree,
    surjective_only: bool,
) -> Vec<TreeMorphism> {
    let n = source.top_count();
    let m = target.top_count();
    let mut out = Vec::new();
    if m == 0 {
        return out;
    }
    let mut f = vec![0; n];
    loop {
        if let Ok(phi) = TreeMorphism::from_leaf_map(source, target, &f) {
            if !surjective_only || phi.is_surjective() {
                out.push(phi);
            }
        }
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            f[i] += 1;
            if f[i] < m {
                break;
            }
            f[i] = 0;
        }
    }
}

/// An element of Σ_2 labelling the two leaves of a two-leaf tree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Numbering {
    Id,
    Swap,
}

impl Numbering {
    pub fn compose(self, other: Numbering) -> Numbering {
        if self == other {
            Numbering::Id
        } else {
            Numbering::Swap
        }
    }
}

impl fmt::Display for Numbering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Numbering::Id => "id",
            Numbering::Swap => "swap",
        })
    }
}

/// The pruned depth-`n` tree with two leaves meeting at level `a`, with a
/// numbering of its leaves.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TwoLeafTree {
    pub n: usize,
    pub a: usize,
    pub numbering: Numbering,
}

impl TwoLeafTree {
    pub fn new(n: usize, a: usize, numbering: Numbering) -> Result<Self> {
        if a >= n {
            return Err(Error::LevelOutOfRange { level: a, depth: n });
        }
        Ok(TwoLeafTree { n, a, numbering })
    }

    pub fn tree(&self) -> LevelTree {
        let fibers = (0..self.n)
            .map(|l| match l.cmp(&self.a) {
                std::cmp::Ordering::Less => vec![1],
                std::cmp::Ordering::Equal => vec![2],
                std::cmp::Ordering::Greater => vec![1, 1],
            })
            .collect();
        LevelTree {
            depth: self.n,
            fibers,
        }
    }
}

impl fmt::Display for TwoLeafTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T^{}_{},{}", self.n, self.a, self.numbering)
    }
}

/// Whether a quasi-bijection `(T^n_a, src) -> (T^n_b, tgt)` exists.
pub fn quasi_bijection_exists(
    n: usize,
    a: usize,
    src: Numbering,
    b: usize,
    tgt: Numbering,
) -> Result<bool> {
    for level in [a, b] {
        if level >= n {
            return Err(Error::LevelOutOfRange { level, depth: n });
        }
    }
    Ok(if src == tgt { a <= b } else { a < b })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(d: usize, text: &str) -> LevelTree {
        LevelTree::parse(d, text).unwrap()
    }

    #[test]
    fn nested_text_round_trips() {
        let tree = t(2, "[[1],[2]]");
        assert_eq!(tree.fibers(), &[vec![2], vec![1, 2]]);
        assert_eq!(tree.to_string(), "[[1],[2]]");
        let json = serde_json::to_string(&tree).unwrap();
        assert_eq!(json, r#"{"d":2,"tree":[[1],[2]]}"#);
        assert_eq!(serde_json::from_str::<LevelTree>(&json).unwrap(), tree);
    }

    #[test]
    fn rejects_inconsistent_levels() {
        assert!(LevelTree::new(2, vec![vec![2], vec![1]]).is_err());
        assert!(LevelTree::new(1, vec![vec![1, 1]]).is_err());
        assert!(LevelTree::parse(1, "[1,2]").is_err());
    }

    #[test]
    fn leaf_order_of_two_leaf_tree() {
        let tree = TwoLeafTree::new(3, 0, Numbering::Id).unwrap().tree();
        let order = tree.leaf_order().unwrap();
        assert_eq!(order.into_iter().collect::<Vec<_>>(), vec![((0, 1), 0)]);
        assert!(LevelTree::linear(3).leaf_order().unwrap().is_empty());
    }

    #[test]
    fn leaf_order_rejects_unpruned() {
        assert_eq!(t(2, "[[1],[0]]").leaf_order(), Err(Error::NotPruned));
    }

    #[test]
    fn prunisation_drops_dead_branches() {
        assert_eq!(t(2, "[[1],[0]]").prunisation(), t(2, "[[1]]"));
        let pruned = t(2, "[[1],[2]]");
        assert_eq!(pruned.prunisation(), pruned);
        let dead = t(2, "[[0],[0]]").prunisation();
        assert!(dead.is_degenerate());
        assert_eq!(dead, LevelTree::degenerate(2));
    }

    #[test]
    fn fiber_of_collapse() {
        let src = t(2, "[[1],[1],[1]]");
        let tgt = t(2, "[[1],[1]]");
        let phi = TreeMorphism::from_leaf_map(&src, &tgt, &[0, 0, 1]).unwrap();
        let f = phi.fiber(2, 0).unwrap();
        assert_eq!(f, t(2, "[[1],[1]]"));
        assert_eq!(phi.fiber(2, 1).unwrap(), LevelTree::linear(2));
        assert!(phi.fiber(1, 0).is_err());
    }

    #[test]
    fn fiber_can_be_unpruned() {
        let src = t(2, "[[2],[1]]");
        let tgt = t(2, "[[2]]");
        let phi = TreeMorphism::from_leaf_map(&src, &tgt, &[0, 1, 0]).unwrap();
        let f = phi.fiber(2, 1).unwrap();
        assert!(!f.is_pruned());
        assert_eq!(f.prunisation(), LevelTree::linear(2));
    }

    #[test]
    fn identity_fibers_are_linear() {
        let tree = t(3, "[[[1],[2]],[[3]]]");
        let id = TreeMorphism::identity(&tree);
        for leaf in 0..tree.top_count() {
            assert_eq!(id.fiber(3, leaf).unwrap(), LevelTree::linear(3));
        }
    }

    #[test]
    fn morphism_validation_rejects_order_reversal() {
        let tree = t(1, "[2]");
        assert!(TreeMorphism::new(tree.clone(), tree.clone(), vec![vec![1, 0]]).is_err());
        let two = t(2, "[[1],[1]]");
        assert!(TreeMorphism::from_leaf_map(&two, &two, &[1, 0]).is_err());
        assert!(TreeMorphism::from_leaf_map(&two, &t(2, "[[2]]"), &[1, 0]).is_ok());
    }

    #[test]
    fn compose_collapses() {
        let t3 = t(2, "[[1],[1],[1]]");
        let t2 = t(2, "[[1],[1]]");
        let t1 = LevelTree::linear(2);
        let phi = TreeMorphism::from_leaf_map(&t3, &t2, &[0, 0, 1]).unwrap();
        let psi = TreeMorphism::from_leaf_map(&t2, &t1, &[0, 0]).unwrap();
        let total = compose_morphisms(&psi, &phi).unwrap();
        assert_eq!(total.leaf_map(), &[0, 0, 0]);
        assert_eq!(
            compose_morphisms(&phi, &TreeMorphism::identity(&t3)).unwrap(),
            phi
        );
        assert!(compose_morphisms(&phi, &psi).is_err());
    }

    #[test]
    fn quasi_bijections() {
        use Numbering::*;
        assert!(quasi_bijection_exists(4, 1, Id, 2, Swap).unwrap());
        assert!(quasi_bijection_exists(4, 2, Id, 2, Id).unwrap());
        assert!(!quasi_bijection_exists(4, 2, Id, 1, Swap).unwrap());
        assert!(!quasi_bijection_exists(4, 2, Id, 2, Swap).unwrap());
        assert!(quasi_bijection_exists(4, 4, Id, 2, Swap).is_err());
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(pruned_trees(2, 3).len(), 4);
        assert_eq!(pruned_trees(1, 3).len(), 1);
        // Depth-2 trees of degree <= 2: [], [[0]], [[1]], [[0],[0]].
        assert_eq!(trees_up_to_degree(2, 2).len(), 4);
        assert!(pruned_trees(3, 3)
            .iter()
            .all(|t| t.is_pruned() && t.top_count() == 3));
    }

    #[test]
    fn degree_of_theta_two_objects() {
        assert_eq!(t(2, "[[2]]").degree(), 3);
        assert_eq!(t(2, "[[0],[0]]").degree(), 2);
        assert_eq!(t(2, "[]").degree(), 0);
    }
}
