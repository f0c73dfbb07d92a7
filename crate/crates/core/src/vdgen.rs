//! The elementary-move procedure producing the canonical label lists.
//!
//! Starting from `(121)|...|(121)`, a move takes the leading symbol of factor
//! `A` and appends a symbol to factor `A - 1`. A source factor that shrinks to
//! two symbols truncates the signature after it, which is allowed only when
//! the single factor to its right already has two symbols.

use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::signatures::{Factor, TruncatedSignature};

/// One applied move: 1-based source factor and whether a factor was removed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Move {
    pub source: usize,
    pub removal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MoveState {
    pub signature: TruncatedSignature,
    pub history: Vec<Move>,
}

impl MoveState {
    pub fn start(d: usize) -> Self {
        MoveState {
            signature: TruncatedSignature::top(d),
            history: Vec::new(),
        }
    }

    pub fn removals(&self) -> usize {
        self.history.iter().filter(|m| m.removal).count()
    }
}

/// Applies the move out of factor `a` (1-based).
pub fn elementary_move(state: &MoveState, a: usize) -> Result<MoveState> {
    let (signature, removal) = apply_move(&state.signature, a)?;
    let mut history = state.history.clone();
    history.push(Move { source: a, removal });
    let expected = state.signature.symbol_count() - if removal { 2 } else { 0 };
    if signature.symbol_count() != expected {
        return Err(Error::IllegalMove(format!(
            "{signature} has {} symbols, expected {expected}",
            signature.symbol_count()
        )));
    }
    Ok(MoveState { signature, history })
}

fn apply_move(sig: &TruncatedSignature, a: usize) -> Result<(TruncatedSignature, bool)> {
    let m = sig.len();
    if a < 2 || a > m {
        return Err(Error::IllegalMove(format!(
            "factor {a} out of range 2..={m} in {sig}"
        )));
    }
    let mut factors: Vec<Factor> = sig.factors().to_vec();
    let source = factors[a - 1];
    if source.len() < 3 {
        return Err(Error::IllegalMove(format!(
            "factor {a} of {sig} is too short"
        )));
    }
    let receiver = factors[a - 2];
    factors[a - 2] = Factor::new(receiver.len() + 1, receiver.lead())?;
    factors[a - 1] = Factor::new(source.len() - 1, 3 - source.lead())?;
    let mut removal = false;
    if source.len() == 3 && a < m {
        if m != a + 1 || factors[a].len() != 2 {
            return Err(Error::IllegalMove(format!(
                "factor {a} of {sig} would shrink to two symbols with longer factors to its right"
            )));
        }
        factors.truncate(a);
        removal = true;
    }
    let next = TruncatedSignature::new(sig.depth(), factors)
        .map_err(|e| Error::IllegalMove(format!("move {a} on {sig}: {e}")))?;
    Ok((next, removal))
}

/// The legal moves out of a state, split by whether they remove a factor.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Candidates {
    pub preferred: Vec<usize>,
    pub removing: Vec<usize>,
}

pub fn candidates(sig: &TruncatedSignature) -> Candidates {
    let mut out = Candidates::default();
    for a in 2..=sig.len() {
        if let Ok((_, removal)) = apply_move(sig, a) {
            if removal {
                out.removing.push(a);
            } else {
                out.preferred.push(a);
            }
        }
    }
    out
}

/// Rule 3: the rightmost move that does not remove a factor, falling back to
/// the rightmost removing move.
pub fn next_factor(state: &MoveState) -> Option<usize> {
    let c = candidates(&state.signature);
    c.preferred.last().or(c.removing.last()).copied()
}

/// A state at which the selection rule had more than one non-removing move.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MoveWarning {
    pub step: usize,
    pub signature: TruncatedSignature,
    pub candidates: Candidates,
    pub chosen: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MoveSequence {
    pub d: usize,
    pub elements: Vec<TruncatedSignature>,
    pub moves: Vec<Move>,
    pub warnings: Vec<MoveWarning>,
}

impl MoveSequence {
    pub fn labels(&self) -> &[TruncatedSignature] {
        &self.elements
    }
}

/// The canonical list `V_d`.
pub fn generate_v(d: usize) -> Result<MoveSequence> {
    if d == 0 {
        return Err(Error::InvalidSignature("depth must be positive".into()));
    }
    let mut state = MoveState::start(d);
    let mut elements = vec![state.signature.clone()];
    let mut warnings = Vec::new();
    while let Some(a) = next_factor(&state) {
        let c = candidates(&state.signature);
        if c.preferred.len() > 1 {
            log::warn!(
                "several non-removing moves at {}: {:?}; taking {a}",
                state.signature,
                c.preferred
            );
            warnings.push(MoveWarning {
                step: elements.len() - 1,
                signature: state.signature.clone(),
                candidates: c,
                chosen: a,
            });
        }
        state = elementary_move(&state, a)?;
        if elements.contains(&state.signature) {
            return Err(Error::IllegalMove(format!("{} revisited", state.signature)));
        }
        elements.push(state.signature.clone());
    }
    let last = elements.last().expect("nonempty");
    if d > 1 && last.factors().last().map(Factor::len) != Some(2) {
        return Err(Error::IllegalMove(format!(
            "terminal state {last} does not end in a pair"
        )));
    }
    Ok(MoveSequence {
        d,
        elements,
        moves: state.history,
        warnings,
    })
}

/// `Ṽ^l` in the smallest ambient depth holding it, `l + 1`.
pub fn generate_tilde(l: usize) -> Result<MoveSequence> {
    generate_tilde_in(l, l + 1)
}

/// `Ṽ^l` embedded in ambient depth `d > l`: `V_l` with its first element
/// extended by `(12)`, or just `(12)` when `l = 0`.
pub fn generate_tilde_in(l: usize, d: usize) -> Result<MoveSequence> {
    if d <= l {
        return Err(Error::DepthMismatch(d, l + 1));
    }
    if l == 0 {
        return Ok(MoveSequence {
            d,
            elements: vec![TruncatedSignature::minimal(d)],
            moves: Vec::new(),
            warnings: Vec::new(),
        });
    }
    let base = generate_v(l)?;
    let mut elements = Vec::with_capacity(base.elements.len());
    for (i, e) in base.elements.iter().enumerate() {
        if i == 0 {
            let mut factors = e.factors().to_vec();
            factors.push(Factor::from_params(0, true));
            elements.push(TruncatedSignature::new(d, factors)?);
        } else {
            elements.push(e.with_depth(d)?);
        }
    }
    Ok(MoveSequence {
        d,
        elements,
        moves: base.moves,
        warnings: base.warnings,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MoveEdge {
    pub from: usize,
    pub to: usize,
    pub source: usize,
    pub removal: bool,
    pub canonical: bool,
}

/// Every state reachable by legal moves, ignoring the selection rule.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MoveGraph {
    pub d: usize,
    pub nodes: Vec<TruncatedSignature>,
    pub on_path: Vec<bool>,
    pub edges: Vec<MoveEdge>,
}

impl MoveGraph {
    pub fn pruned(&self) -> Vec<&TruncatedSignature> {
        self.nodes
            .iter()
            .zip(&self.on_path)
            .filter(|(_, &p)| !p)
            .map(|(n, _)| n)
            .collect()
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::new();
        writeln!(out, "digraph moves_d{} {{", self.d).unwrap();
        writeln!(out, "  rankdir=LR;").unwrap();
        writeln!(out, "  node [shape=box];").unwrap();
        for (i, n) in self.nodes.iter().enumerate() {
            let style = if self.on_path[i] {
                ""
            } else {
                ", style=dashed"
            };
            writeln!(out, "  n{i} [label=\"{n}\"{style}];").unwrap();
        }
        for e in &self.edges {
            let style = if e.canonical {
                "penwidth=2"
            } else {
                "style=dashed"
            };
            writeln!(
                out,
                "  n{} -> n{} [label=\"{}\", {style}];",
                e.from, e.to, e.source
            )
            .unwrap();
        }
        out.push_str("}\n");
        out
    }
}

/// Breadth-first expansion of all legal moves from `(121)|...|(121)`.
pub fn move_graph(d: usize) -> Result<MoveGraph> {
    let canonical = generate_v(d)?;
    let mut index: BTreeMap<TruncatedSignature, usize> = BTreeMap::new();
    let mut nodes = Vec::new();
    let mut edges = Vec::new();
    let mut queue = VecDeque::new();
    let start = TruncatedSignature::top(d);
    index.insert(start.clone(), 0);
    nodes.push(start.clone());
    queue.push_back(start);
    while let Some(sig) = queue.pop_front() {
        let from = index[&sig];
        for a in 2..=sig.len() {
            let Ok((next, removal)) = apply_move(&sig, a) else {
                continue;
            };
            let to = *index.entry(next.clone()).or_insert_with(|| {
                nodes.push(next.clone());
                queue.push_back(next.clone());
                nodes.len() - 1
            });
            let canonical_edge = canonical
                .elements
                .windows(2)
                .any(|w| w[0] == sig && w[1] == next);
            edges.push(MoveEdge {
                from,
                to,
                source: a,
                removal,
                canonical: canonical_edge,
            });
        }
    }
    let on_path = nodes
        .iter()
        .map(|n| canonical.elements.contains(n))
        .collect();
    Ok(MoveGraph {
        d,
        nodes,
        on_path,
        edges,
    })
}
