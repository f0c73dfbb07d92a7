//! Exhaustive closure checks: compose every admitted operation along every
//! surjection of pruned trees within the given caps and confirm that the
//! composite is admitted again.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::generalized::{
    count_generalized, enumerate_generalized, substitute_generalized, GeneralizedLatticePath,
};
use super::path::{self, LatticePath};
use crate::budget::Budget;
use crate::conjectures::{LabelSystem, Outcome};
use crate::error::{Error, Result};
use crate::signatures::{Factor, TruncatedSignature};
use crate::trees::{
    cartesian, pruned_morphisms, pruned_trees, trees_up_to_degree, LevelTree, TreeMorphism,
};

/// The operad whose components are checked.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ClosureOperad {
    /// One block per `level`-tree: leaves meeting at level `c` may change
    /// direction at most `level - c - 1` times, first axis first.
    Lattice { level: usize },
    /// Label systems on `(d+1)`-trees with depth-`d` tree colors.
    Seq { system: LabelSystem },
}

impl ClosureOperad {
    pub fn tree_depth(&self) -> usize {
        match self {
            ClosureOperad::Lattice { level } => *level,
            ClosureOperad::Seq { system } => system.depth() + 1,
        }
    }

    pub fn color_depth(&self) -> usize {
        match self {
            ClosureOperad::Lattice { .. } => 1,
            ClosureOperad::Seq { system } => system.depth(),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            ClosureOperad::Lattice { level } if *level == 0 => Err(Error::InvalidSystem(
                "the lattice operad needs level at least 1".into(),
            )),
            _ => Ok(()),
        }
    }

    fn pair_ok<E: Element>(&self, e: &E, i: usize, j: usize, c: usize) -> bool {
        match self {
            ClosureOperad::Lattice { level } => {
                e.pair_le_factor(i, j, Factor::from_params(level - 1 - c, true))
            }
            ClosureOperad::Seq { system } => system
                .labels(c)
                .iter()
                .any(|sig| e.pair_le_signature(i, j, sig)),
        }
    }

    /// The first pair of leaves whose projection escapes its labels.
    pub fn violation<E: Element>(&self, tree: &LevelTree, e: &E) -> Option<(usize, usize)> {
        let n = tree.top_count();
        (0..n)
            .flat_map(|x| (x + 1..n).map(move |y| (x, y)))
            .find(|&(x, y)| !self.pair_ok(e, x, y, tree.meeting_level(x, y)))
    }
}

/// Operations that can be enumerated, substituted and tested against labels.
pub trait Element: Clone + Send + Sync + Sized {
    fn enumerate(source: &LevelTree, targets: &[LevelTree]) -> Result<Vec<Self>>;
    fn count(source: &LevelTree, targets: &[LevelTree]) -> Result<u128>;
    fn substitute(
        outer: &Self,
        inners: &[Self],
        relabel: &[Vec<usize>],
        targets: &[LevelTree],
    ) -> Result<Self>;
    fn pair_le_factor(&self, i: usize, j: usize, bound: Factor) -> bool;
    fn pair_le_signature(&self, i: usize, j: usize, sig: &TruncatedSignature) -> bool;
    fn identity(color: &LevelTree) -> Self;
    fn to_generalized(&self) -> GeneralizedLatticePath;
}

impl Element for LatticePath {
    fn enumerate(source: &LevelTree, targets: &[LevelTree]) -> Result<Vec<Self>> {
        let degrees: Vec<usize> = targets.iter().map(|t| t.vertex_count(1)).collect();
        Ok(path::enumerate_paths(&degrees, source.vertex_count(1)))
    }

    fn count(source: &LevelTree, targets: &[LevelTree]) -> Result<u128> {
        let degrees: Vec<usize> = targets.iter().map(|t| t.vertex_count(1)).collect();
        Ok(path::count_paths(&degrees, source.vertex_count(1)))
    }

    fn substitute(
        outer: &Self,
        inners: &[Self],
        relabel: &[Vec<usize>],
        targets: &[LevelTree],
    ) -> Result<Self> {
        path::substitute(
            outer,
            inners,
            relabel,
            targets.iter().map(|t| t.vertex_count(1)).collect(),
        )
    }

    fn pair_le_factor(&self, i: usize, j: usize, bound: Factor) -> bool {
        self.pair_factor(i, j).le(&bound)
    }

    fn pair_le_signature(&self, i: usize, j: usize, sig: &TruncatedSignature) -> bool {
        sig.level(1).is_some_and(|g| self.pair_factor(i, j).le(&g))
    }

    fn identity(color: &LevelTree) -> Self {
        LatticePath::identity(color.vertex_count(1))
    }

    fn to_generalized(&self) -> GeneralizedLatticePath {
        GeneralizedLatticePath::from_path(self.clone())
    }
}

impl Element for GeneralizedLatticePath {
    fn enumerate(source: &LevelTree, targets: &[LevelTree]) -> Result<Vec<Self>> {
        enumerate_generalized(source, targets)
    }

    fn count(source: &LevelTree, targets: &[LevelTree]) -> Result<u128> {
        count_generalized(source, targets)
    }

    fn substitute(
        outer: &Self,
        inners: &[Self],
        relabel: &[Vec<usize>],
        targets: &[LevelTree],
    ) -> Result<Self> {
        substitute_generalized(outer, inners, relabel, targets.to_vec())
    }

    fn pair_le_factor(&self, i: usize, j: usize, bound: Factor) -> bool {
        self.depth() == 1 && self.top().pair_factor(i, j).le(&bound)
    }

    fn pair_le_signature(&self, i: usize, j: usize, sig: &TruncatedSignature) -> bool {
        self.pair_below(i, j, sig)
    }

    fn identity(color: &LevelTree) -> Self {
        GeneralizedLatticePath::identity(color)
    }

    fn to_generalized(&self) -> GeneralizedLatticePath {
        self.clone()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClosureMode {
    /// Every fiber carries an arbitrary admitted operation.
    Full,
    /// At most one fiber carries an arbitrary operation, the others carry
    /// identities: partial compositions, including unary actions.
    Partial,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureBounds {
    /// Largest number of leaves of the composite tree.
    pub max_leaves: usize,
    /// Largest number of leaves of the outer tree.
    pub max_outer_leaves: usize,
    /// Largest color degree.
    pub max_degree: usize,
    pub mode: ClosureMode,
    /// Largest number of candidate operations enumerated for one component.
    pub max_candidates: u128,
}

/// A composite that escapes its labels, with everything needed to rebuild it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosureWitness {
    pub operad: ClosureOperad,
    /// The tree of the composite.
    pub tree: LevelTree,
    /// The tree of the outer operation.
    pub outer_tree: LevelTree,
    pub leaf_map: Vec<usize>,
    pub outer: GeneralizedLatticePath,
    pub inners: Vec<GeneralizedLatticePath>,
    pub composite: GeneralizedLatticePath,
    /// The offending leaves, numbered from 1.
    pub pair: [usize; 2],
    pub meeting_level: usize,
}

impl ClosureWitness {
    /// Rebuilds the composite and confirms that the inputs are admitted
    /// while the composite is not.
    pub fn replay(&self) -> Result<bool> {
        let phi = TreeMorphism::from_leaf_map(&self.tree, &self.outer_tree, &self.leaf_map)?;
        if self
            .operad
            .violation(&self.outer_tree, &self.outer)
            .is_some()
        {
            return Ok(false);
        }
        let s_count = self.outer_tree.top_count();
        if self.inners.len() != s_count {
            return Ok(false);
        }
        let mut relabel = Vec::new();
        for (s, inner) in self.inners.iter().enumerate() {
            let fiber = phi.fiber(self.tree.depth(), s)?.prunisation();
            if self.operad.violation(&fiber, inner).is_some() {
                return Ok(false);
            }
            relabel.push(phi.leaf_preimage(s));
        }
        let composite = substitute_generalized(
            &self.outer,
            &self.inners,
            &relabel,
            self.composite.targets().to_vec(),
        )?;
        if composite != self.composite {
            return Ok(false);
        }
        let (x, y) = (self.pair[0] - 1, self.pair[1] - 1);
        Ok(self.tree.meeting_level(x, y) == self.meeting_level
            && !self.operad.pair_ok(&composite, x, y, self.meeting_level))
    }
}

/// Tally of the pair cases seen on classical composites.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseTally {
    /// Both leaves in one fiber: the composite inherits the inner factor.
    pub same_fiber: u64,
    /// Fibers in the same order as the leaves.
    pub untwisted: u64,
    /// Fibers in the opposite order.
    pub twisted: u64,
    /// Pairs in different fibers where some inner segment misses the leaf,
    /// so the composite may only lie below the outer factor.
    pub collapsed: u64,
    /// Pairs breaking the expected rule; always zero on a correct build.
    pub violations: u64,
}

impl CaseTally {
    fn merge(&mut self, other: &CaseTally) {
        self.same_fiber += other.same_fiber;
        self.untwisted += other.untwisted;
        self.twisted += other.twisted;
        self.collapsed += other.collapsed;
        self.violations += other.violations;
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClosureReport {
    pub check: &'static str,
    pub operad: ClosureOperad,
    pub bounds: ClosureBounds,
    #[serde(flatten)]
    pub outcome: Outcome<ClosureWitness>,
    pub tree_maps: usize,
    pub composites: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cases: Option<CaseTally>,
}

type MemberKey = (LevelTree, Vec<LevelTree>, LevelTree);

struct Members<E> {
    operad: ClosureOperad,
    cap: u128,
    cache: Mutex<HashMap<MemberKey, Arc<Vec<E>>>>,
}

impl<E: Element> Members<E> {
    fn get(
        &self,
        tree: &LevelTree,
        inputs: &[LevelTree],
        output: &LevelTree,
    ) -> Result<Arc<Vec<E>>> {
        let key = (tree.clone(), inputs.to_vec(), output.clone());
        if let Some(hit) = self.cache.lock().expect("cache lock").get(&key) {
            return Ok(hit.clone());
        }
        let size = E::count(output, inputs)?;
        if size > self.cap {
            return Err(Error::SizeCap {
                size,
                cap: self.cap,
            });
        }
        let all: Vec<E> = E::enumerate(output, inputs)?
            .into_iter()
            .filter(|e| self.operad.violation(tree, e).is_none())
            .collect();
        let all = Arc::new(all);
        self.cache
            .lock()
            .expect("cache lock")
            .insert(key, all.clone());
        Ok(all)
    }
}

struct Job {
    tree: LevelTree,
    phi: TreeMorphism,
    fibers: Vec<LevelTree>,
    preimages: Vec<Vec<usize>>,
}

#[derive(Default)]
struct JobResult {
    composites: u64,
    cases: CaseTally,
    witness: Option<ClosureWitness>,
}

pub fn closure_check(
    operad: &ClosureOperad,
    bounds: &ClosureBounds,
    budget: &Budget,
) -> Result<ClosureReport> {
    operad.validate()?;
    if operad.color_depth() == 1 {
        run::<LatticePath>(operad, bounds, budget)
    } else {
        run::<GeneralizedLatticePath>(operad, bounds, budget)
    }
}

fn run<E: Element>(
    operad: &ClosureOperad,
    bounds: &ClosureBounds,
    budget: &Budget,
) -> Result<ClosureReport> {
    let n = operad.tree_depth();
    let colors = if operad.color_depth() == 1 {
        (0..=bounds.max_degree).map(LevelTree::corolla).collect()
    } else {
        trees_up_to_degree(operad.color_depth(), bounds.max_degree)
    };
    let mut jobs = Vec::new();
    for t_leaves in 1..=bounds.max_leaves {
        for tree in pruned_trees(n, t_leaves) {
            for s_leaves in 1..=t_leaves.min(bounds.max_outer_leaves) {
                for outer_tree in pruned_trees(n, s_leaves) {
                    for phi in pruned_morphisms(&tree, &outer_tree, true) {
                        let preimages: Vec<Vec<usize>> =
                            (0..s_leaves).map(|s| phi.leaf_preimage(s)).collect();
                        if bounds.mode == ClosureMode::Partial
                            && preimages.iter().filter(|p| p.len() > 1).count() > 1
                        {
                            continue;
                        }
                        let fibers = (0..s_leaves)
                            .map(|s| phi.fiber(n, s).map(|f| f.prunisation()))
                            .collect::<Result<Vec<_>>>()?;
                        jobs.push(Job {
                            tree: tree.clone(),
                            phi,
                            fibers,
                            preimages,
                        });
                    }
                }
            }
        }
    }
    log::info!(
        "closure check: {} tree maps, {} colors",
        jobs.len(),
        colors.len()
    );
    let members = Members::<E> {
        operad: operad.clone(),
        cap: bounds.max_candidates,
        cache: Mutex::new(HashMap::new()),
    };
    let results: Vec<Result<JobResult>> = jobs
        .par_iter()
        .map(|job| run_job(operad, bounds, budget, &members, &colors, job))
        .collect();
    let mut composites = 0;
    let mut cases = CaseTally::default();
    let mut witness = None;
    for r in results {
        let r = r?;
        composites += r.composites;
        cases.merge(&r.cases);
        if witness.is_none() {
            witness = r.witness;
        }
    }
    let outcome = match witness {
        None => Outcome::Pass,
        Some(witness) => Outcome::Fail { witness },
    };
    Ok(ClosureReport {
        check: "closure",
        operad: operad.clone(),
        bounds: bounds.clone(),
        outcome,
        tree_maps: jobs.len(),
        composites,
        cases: (operad.color_depth() == 1).then_some(cases),
    })
}

fn run_job<E: Element>(
    operad: &ClosureOperad,
    bounds: &ClosureBounds,
    budget: &Budget,
    members: &Members<E>,
    colors: &[LevelTree],
    job: &Job,
) -> Result<JobResult> {
    let mut result = JobResult::default();
    let t_count = job.tree.top_count();
    let s_count = job.preimages.len();
    let designated: Vec<Option<usize>> = match bounds.mode {
        ClosureMode::Full => vec![None],
        ClosureMode::Partial => match job.preimages.iter().position(|p| p.len() > 1) {
            Some(s) => vec![Some(s)],
            None => (0..s_count).map(Some).collect(),
        },
    };
    let color_choices = cartesian(&vec![colors.to_vec(); t_count]);
    for input_colors in &color_choices {
        for output in colors {
            for &chosen in &designated {
                // Outer input colors: free on arbitrary fibers, forced on identity fibers.
                let per_fiber: Vec<Vec<LevelTree>> = (0..s_count)
                    .map(|s| match chosen {
                        Some(c) if c != s => vec![input_colors[job.preimages[s][0]].clone()],
                        _ => colors.to_vec(),
                    })
                    .collect();
                for outer_colors in cartesian(&per_fiber) {
                    budget.check("closure check")?;
                    let outer_set = members.get(job.phi.target(), &outer_colors, output)?;
                    if outer_set.is_empty() {
                        continue;
                    }
                    let mut inner_sets = Vec::with_capacity(s_count);
                    for (s, preimage) in job.preimages.iter().enumerate().take(s_count) {
                        let inputs: Vec<LevelTree> =
                            preimage.iter().map(|&x| input_colors[x].clone()).collect();
                        let set = match chosen {
                            Some(c) if c != s => Arc::new(vec![E::identity(&outer_colors[s])]),
                            _ => members.get(&job.fibers[s], &inputs, &outer_colors[s])?,
                        };
                        inner_sets.push(set);
                    }
                    if inner_sets.iter().any(|s| s.is_empty()) {
                        continue;
                    }
                    if let Some(w) = compose_all(
                        operad,
                        job,
                        input_colors,
                        &outer_set,
                        &inner_sets,
                        &mut result,
                    )? {
                        result.witness = Some(w);
                        return Ok(result);
                    }
                }
            }
        }
    }
    Ok(result)
}

fn compose_all<E: Element>(
    operad: &ClosureOperad,
    job: &Job,
    input_colors: &[LevelTree],
    outer_set: &[E],
    inner_sets: &[Arc<Vec<E>>],
    result: &mut JobResult,
) -> Result<Option<ClosureWitness>> {
    let classical = operad.color_depth() == 1;
    let mut index = vec![0usize; inner_sets.len()];
    loop {
        let inners: Vec<E> = index
            .iter()
            .zip(inner_sets)
            .map(|(&i, set)| set[i].clone())
            .collect();
        for outer in outer_set {
            let composite = E::substitute(outer, &inners, &job.preimages, input_colors)?;
            result.composites += 1;
            if classical {
                tally_cases(
                    job,
                    &outer.to_generalized(),
                    &inners.iter().map(E::to_generalized).collect::<Vec<_>>(),
                    &composite.to_generalized(),
                    &mut result.cases,
                );
            }
            if let Some((x, y)) = operad.violation(&job.tree, &composite) {
                return Ok(Some(ClosureWitness {
                    operad: operad.clone(),
                    tree: job.tree.clone(),
                    outer_tree: job.phi.target().clone(),
                    leaf_map: job.phi.leaf_map().to_vec(),
                    outer: outer.to_generalized(),
                    inners: inners.iter().map(E::to_generalized).collect(),
                    composite: composite.to_generalized(),
                    pair: [x + 1, y + 1],
                    meeting_level: job.tree.meeting_level(x, y),
                }));
            }
        }
        let mut i = index.len();
        loop {
            if i == 0 {
                return Ok(None);
            }
            i -= 1;
            index[i] += 1;
            if index[i] < inner_sets[i].len() {
                break;
            }
            index[i] = 0;
        }
    }
}

/// Checks the three pair rules on a classical composite.
fn tally_cases(
    job: &Job,
    outer: &GeneralizedLatticePath,
    inners: &[GeneralizedLatticePath],
    composite: &GeneralizedLatticePath,
    tally: &mut CaseTally,
) {
    let leaf_map = job.phi.leaf_map();
    let local: Vec<usize> = (0..leaf_map.len())
        .map(|x| {
            job.preimages[leaf_map[x]]
                .iter()
                .position(|&y| y == x)
                .expect("leaf in its fiber")
        })
        .collect();
    let n = leaf_map.len();
    for x in 0..n {
        for y in x + 1..n {
            let got = composite.top().pair_factor(x, y);
            let (s1, s2) = (leaf_map[x], leaf_map[y]);
            if s1 == s2 {
                tally.same_fiber += 1;
                if got != inners[s1].top().pair_factor(local[x], local[y]) {
                    tally.violations += 1;
                }
                continue;
            }
            let expected = if s1 < s2 {
                tally.untwisted += 1;
                outer.top().pair_factor(s1, s2)
            } else {
                tally.twisted += 1;
                outer.top().pair_factor(s2, s1).swap()
            };
            let covers = |s: usize, leaf: usize| {
                let p = inners[s].top();
                (1..=p.out_degree() + 1).all(|r| p.segment(r).contains(&local[leaf]))
            };
            let exact = covers(s1, x) && covers(s2, y);
            if !exact {
                tally.collapsed += 1;
            }
            let ok = if exact {
                got == expected
            } else {
                got.le(&expected)
            };
            if !ok {
                tally.violations += 1;
            }
        }
    }
}

pub const DEFAULT_MAX_CANDIDATES: u128 = 200_000;

/// Bounds for the classical check: arities and degrees up to the given caps.
pub fn lattice_bounds(max_arity: usize, max_degree: usize) -> ClosureBounds {
    ClosureBounds {
        max_leaves: max_arity,
        max_outer_leaves: max_arity,
        max_degree,
        mode: ClosureMode::Full,
        max_candidates: DEFAULT_MAX_CANDIDATES,
    }
}

/// Bounds for the desk-scale label-system check.
pub fn seq_bounds(max_degree: usize) -> ClosureBounds {
    ClosureBounds {
        max_leaves: 2,
        max_outer_leaves: 2,
        max_degree,
        mode: ClosureMode::Partial,
        max_candidates: DEFAULT_MAX_CANDIDATES,
    }
}
