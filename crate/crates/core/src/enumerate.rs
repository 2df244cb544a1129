//! Reverse-search enumeration of FDAGs.
//!
//! Every FDAG other than the trivial one arises from a unique antecedent by
//! one of three expansion rules applied to its last vertex: branching (add an
//! arc), elongation (new vertex one level higher) and widening (new vertex at
//! the same height). Walking these rules from the trivial FDAG visits each
//! FDAG exactly once.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::dag::Fdag;
use crate::words::{is_minimal, minimal_words, DecreasingWord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    Branching,
    Elongation,
    Widening,
    Repetition,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::Branching => "branching",
            Rule::Elongation => "elongation",
            Rule::Widening => "widening",
            Rule::Repetition => "repetition",
        })
    }
}

/// One expansion step from an FDAG to a successor.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expansion {
    /// Append this letter to the child word of the last vertex.
    Branching(usize),
    /// New vertex whose only child is this vertex.
    Elongation(usize),
    /// New vertex at the height of the last one, with this child word.
    Widening(DecreasingWord),
}

impl Expansion {
    pub fn rule(&self) -> Rule {
        match self {
            Expansion::Branching(_) => Rule::Branching,
            Expansion::Elongation(_) => Rule::Elongation,
            Expansion::Widening(_) => Rule::Widening,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumError {
    #[error("the trivial FDAG has no antecedent")]
    NoAntecedent,
    #[error("constraints do not bound the enumeration: {0}")]
    Unbounded(&'static str),
}

/// All expansions of `d`: branching letters descending, then elongations
/// ascending, then widenings in minimal-word order.
pub fn expansions(d: &Fdag) -> Vec<Expansion> {
    let n = d.last_index();
    let top = d.top_start();
    let w = d.word(n);
    let mut out = Vec::with_capacity(2 * d.len());
    if let Some(last) = w.last() {
        out.extend((0..=last).rev().map(Expansion::Branching));
    }
    out.extend((top..=n).map(Expansion::Elongation));
    if let Some(max_letter) = d.boundary() {
        out.extend(
            minimal_words(w, max_letter)
                .into_iter()
                .map(Expansion::Widening),
        );
    }
    out
}

/// `expansions(d).len()` without building them.
pub fn successor_count(d: &Fdag) -> usize {
    let branching = d.word(d.last_index()).last().map_or(0, |a| a + 1);
    // widening contributes exactly top_start words (one per lower letter)
    branching + d.len()
}

pub fn apply(d: &mut Fdag, e: &Expansion) {
    match e {
        Expansion::Branching(a) => d.push_letter(*a),
        Expansion::Elongation(a) => {
            let h = d.height() + 1;
            d.push_vertex(DecreasingWord::from_multiset(vec![*a]), h);
        }
        Expansion::Widening(w) => {
            let h = d.height();
            d.push_vertex(w.clone(), h);
        }
    }
}

/// Reverts `apply(d, e)`.
pub fn undo(d: &mut Fdag, e: &Expansion) {
    match e {
        Expansion::Branching(_) => d.pop_letter(),
        Expansion::Elongation(_) | Expansion::Widening(_) => d.pop_vertex(),
    }
}

/// Successors built by copying.
pub fn successors(d: &Fdag) -> Vec<(Expansion, Fdag)> {
    expansions(d)
        .into_iter()
        .map(|e| {
            let mut s = d.clone();
            apply(&mut s, &e);
            (e, s)
        })
        .collect()
}

/// The unique FDAG that `d` is a successor of, and the rule involved.
pub fn antecedent(d: &Fdag) -> Result<(Fdag, Rule), EnumError> {
    if d.is_trivial() {
        return Err(EnumError::NoAntecedent);
    }
    let n = d.last_index();
    let w = d.word(n);
    let mut prev = d.clone();
    let rule = if d.last_is_alone() {
        if w.len() == 1 {
            prev.pop_vertex();
            Rule::Elongation
        } else {
            prev.pop_letter();
            Rule::Branching
        }
    } else if is_minimal(w, d.word(n - 1)) {
        prev.pop_vertex();
        Rule::Widening
    } else {
        prev.pop_letter();
        Rule::Branching
    };
    Ok((prev, rule))
}

struct Frame {
    // pending expansions, consumed from the back
    pending: Vec<Expansion>,
    via: Option<Expansion>,
}

/// Depth-first reverse search over a single mutable FDAG.
///
/// The predicate receives each candidate and its depth below the start and
/// must be anti-monotone: once it rejects an FDAG it is assumed to reject
/// all of its descendants, which are then skipped.
pub struct ReverseSearch<G> {
    current: Fdag,
    stack: Vec<Frame>,
    pred: G,
    max_depth: Option<usize>,
    started: bool,
}

impl<G: FnMut(&Fdag, usize) -> bool> ReverseSearch<G> {
    pub fn new(start: Fdag, pred: G) -> Self {
        ReverseSearch {
            current: start,
            stack: Vec::new(),
            pred,
            max_depth: None,
            started: false,
        }
    }

    /// Hard depth cut, cheaper than a depth test in the predicate.
    pub fn max_depth(mut self, depth: usize) -> Self {
        self.max_depth = Some(depth);
        self
    }

    fn frame(&self, via: Option<Expansion>) -> Frame {
        let depth = self.stack.len();
        let mut pending = if self.max_depth.is_some_and(|m| depth >= m) {
            Vec::new()
        } else {
            expansions(&self.current)
        };
        pending.reverse();
        Frame { pending, via }
    }

    /// Advances to the next FDAG and returns it with its depth.
    pub fn next_node(&mut self) -> Option<(&Fdag, usize)> {
        if !self.started {
            self.started = true;
            if !(self.pred)(&self.current, 0) {
                return None;
            }
            let f = self.frame(None);
            self.stack.push(f);
            return Some((&self.current, 0));
        }
        loop {
            let top = self.stack.last_mut()?;
            match top.pending.pop() {
                Some(e) => {
                    apply(&mut self.current, &e);
                    let depth = self.stack.len();
                    if (self.pred)(&self.current, depth) {
                        let f = self.frame(Some(e));
                        self.stack.push(f);
                        return Some((&self.current, depth));
                    }
                    undo(&mut self.current, &e);
                }
                None => {
                    let frame = self.stack.pop().expect("non-empty");
                    if let Some(e) = frame.via {
                        undo(&mut self.current, &e);
                    }
                }
            }
        }
    }
}

impl<G: FnMut(&Fdag, usize) -> bool> Iterator for ReverseSearch<G> {
    type Item = Fdag;

    fn next(&mut self) -> Option<Fdag> {
        self.next_node().map(|(d, _)| d.clone())
    }
}

/// All FDAGs within `steps` expansions of the trivial one, in DFS order.
pub fn enumerate_steps(steps: usize) -> ReverseSearch<impl FnMut(&Fdag, usize) -> bool> {
    ReverseSearch::new(Fdag::trivial(), |_: &Fdag, _| true).max_depth(steps)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    /// Depth-first with in-place apply and undo.
    #[default]
    Incremental,
    /// Breadth-first over copied FDAGs.
    Copying,
}

/// Number of FDAGs at each step count `0..=max_steps`.
pub fn level_counts(max_steps: usize, strategy: Strategy, parallel: bool) -> Vec<u64> {
    match (strategy, parallel) {
        (Strategy::Incremental, false) => dfs_counts(Fdag::trivial(), max_steps),
        (Strategy::Copying, false) => bfs_counts(max_steps),
        (Strategy::Incremental, true) => parallel_dfs_counts(max_steps),
        (Strategy::Copying, true) => parallel_bfs_counts(max_steps),
    }
}

fn dfs_counts(start: Fdag, max_steps: usize) -> Vec<u64> {
    let mut counts = vec![0u64; max_steps + 1];
    // the deepest level is counted without being visited
    let mut search =
        ReverseSearch::new(start, |_: &Fdag, _| true).max_depth(max_steps.saturating_sub(1));
    while let Some((d, depth)) = search.next_node() {
        counts[depth] += 1;
        if depth + 1 == max_steps {
            counts[max_steps] += successor_count(d) as u64;
        }
    }
    counts
}

fn bfs_counts(max_steps: usize) -> Vec<u64> {
    let mut counts = vec![1u64];
    let mut level = vec![Fdag::trivial()];
    for k in 1..=max_steps {
        if k == max_steps {
            counts.push(level.iter().map(|d| successor_count(d) as u64).sum());
            break;
        }
        level = level
            .iter()
            .flat_map(|d| successors(d).into_iter().map(|(_, s)| s))
            .collect();
        counts.push(level.len() as u64);
    }
    counts
}

fn parallel_bfs_counts(max_steps: usize) -> Vec<u64> {
    let mut counts = vec![1u64];
    let mut level = vec![Fdag::trivial()];
    for k in 1..=max_steps {
        if k == max_steps {
            counts.push(level.par_iter().map(|d| successor_count(d) as u64).sum());
            break;
        }
        level = level
            .par_iter()
            .flat_map_iter(|d| successors(d).into_iter().map(|(_, s)| s))
            .collect();
        counts.push(level.len() as u64);
    }
    counts
}

fn parallel_dfs_counts(max_steps: usize) -> Vec<u64> {
    // split at a shallow frontier, then run independent DFS below each node
    let split = max_steps.min(4);
    let mut counts = vec![0u64; max_steps + 1];
    let mut frontier = vec![Fdag::trivial()];
    for slot in counts.iter_mut().take(split) {
        *slot = frontier.len() as u64;
        frontier = frontier
            .iter()
            .flat_map(|d| successors(d).into_iter().map(|(_, s)| s))
            .collect();
    }
    let below = frontier
        .into_par_iter()
        .map(|d| dfs_counts(d, max_steps - split))
        .reduce(
            || vec![0u64; max_steps - split + 1],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        );
    for (i, c) in below.into_iter().enumerate() {
        counts[split + i] += c;
    }
    counts
}

/// Bounds on enumerated FDAGs. Only combinations that leave finitely many
/// FDAGs are accepted: a step cap, vertices with outdegree, or height with
/// outdegree.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Constraint {
    pub max_steps: Option<usize>,
    pub max_vertices: Option<usize>,
    pub max_outdegree: Option<usize>,
    pub max_height: Option<usize>,
}

impl Constraint {
    pub fn steps(k: usize) -> Self {
        Constraint {
            max_steps: Some(k),
            ..Default::default()
        }
    }

    pub fn vertices_outdegree(n: usize, d: usize) -> Self {
        Constraint {
            max_vertices: Some(n),
            max_outdegree: Some(d),
            ..Default::default()
        }
    }

    pub fn height_outdegree(h: usize, d: usize) -> Self {
        Constraint {
            max_height: Some(h),
            max_outdegree: Some(d),
            ..Default::default()
        }
    }

    pub fn is_finite(&self) -> bool {
        self.max_steps.is_some()
            || (self.max_outdegree.is_some()
                && (self.max_vertices.is_some() || self.max_height.is_some()))
    }

    pub fn admits(&self, d: &Fdag, depth: usize) -> bool {
        self.max_steps.is_none_or(|k| depth <= k)
            && self.max_vertices.is_none_or(|n| d.len() <= n)
            && self.max_height.is_none_or(|h| d.height() <= h)
            && self
                .max_outdegree
                .is_none_or(|k| d.word(d.last_index()).len() <= k)
    }
}

/// Anti-monotone predicate for [`ReverseSearch`] started at the trivial FDAG.
///
/// Only the last vertex changes along an expansion, so the outdegree test
/// looks at that vertex alone.
pub fn constrained_predicate(
    c: Constraint,
) -> Result<impl Fn(&Fdag, usize) -> bool + Clone, EnumError> {
    if !c.is_finite() {
        return Err(EnumError::Unbounded(
            "give a step cap, or a maximum outdegree with a vertex or height bound",
        ));
    }
    Ok(move |d: &Fdag, depth: usize| c.admits(d, depth))
}

pub fn enumerate_constrained(
    c: Constraint,
) -> Result<ReverseSearch<impl FnMut(&Fdag, usize) -> bool>, EnumError> {
    let pred = constrained_predicate(c)?;
    let search = ReverseSearch::new(Fdag::trivial(), pred);
    Ok(match c.max_steps {
        Some(k) => search.max_depth(k),
        None => search,
    })
}

fn binomial(n: u128, k: u128) -> Option<u128> {
    let k = k.min(n.checked_sub(k)?);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul(n - i)? / (i + 1);
    }
    Some(acc)
}

/// Largest possible number of vertices at height `h` in an FDAG whose
/// outdegree is at most `d`. `None` on `u128` overflow.
pub fn max_vertices_at_height(h: usize, d: usize) -> Option<u128> {
    let d = d as u128;
    let mut levels: Vec<u128> = vec![1];
    if h >= 1 {
        levels.push(d);
    }
    let mut lower: u128 = 1; // n_0 + ... + n_{h-2}
    for _ in 2..=h {
        let prev = *levels.last().expect("non-empty");
        let mut total: u128 = 0;
        for k in 1..=d {
            let top = binomial((k + prev).checked_sub(1)?, k)?;
            let rest = binomial(d - k + lower, d - k)?;
            total = total.checked_add(top.checked_mul(rest)?)?;
        }
        lower = lower.checked_add(prev)?;
        levels.push(total);
    }
    Some(levels[h])
}

/// The generator behind every seeded random choice in this crate.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// End point of a `steps`-long walk from the trivial FDAG choosing each
/// successor uniformly.
pub fn random_fdag(steps: usize, seed: u64) -> Fdag {
    random_fdag_with(steps, &mut seeded_rng(seed))
}

pub fn random_fdag_with<R: Rng + ?Sized>(steps: usize, rng: &mut R) -> Fdag {
    let mut d = Fdag::trivial();
    for _ in 0..steps {
        let mut options = expansions(&d);
        let pick = rng.gen_range(0..options.len());
        let e = options.swap_remove(pick);
        apply(&mut d, &e);
    }
    d
}

/// Multiplicity of each vertex as a tree of a (possibly redundant) forest,
/// with the index of the last incremented vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PresenceVector {
    pub counts: Vec<u64>,
    pub last: usize,
}

/// Sources present once, everything else absent.
pub fn initial_presence(d: &Fdag) -> PresenceVector {
    let mut counts = vec![0u64; d.len()];
    for s in d.sources() {
        counts[s] = 1;
    }
    PresenceVector { counts, last: 0 }
}

/// One successor per index at or after the last incremented one.
pub fn repetition_successors(p: &PresenceVector) -> Vec<PresenceVector> {
    (p.last..p.counts.len())
        .map(|j| {
            let mut next = p.clone();
            next.counts[j] += 1;
            next.last = j;
            next
        })
        .collect()
}

/// Node of the forest enumeration tree: once a repetition has been added the
/// topology is frozen and only further repetitions are allowed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ForestNode {
    pub dag: Fdag,
    pub presence: PresenceVector,
    pub frozen: bool,
}

impl ForestNode {
    pub fn root() -> Self {
        ForestNode::unfrozen(Fdag::trivial())
    }

    pub fn unfrozen(dag: Fdag) -> Self {
        let presence = initial_presence(&dag);
        ForestNode {
            dag,
            presence,
            frozen: false,
        }
    }

    pub fn successors(&self) -> Vec<(Rule, ForestNode)> {
        let mut out = Vec::new();
        if !self.frozen {
            out.extend(
                successors(&self.dag)
                    .into_iter()
                    .map(|(e, d)| (e.rule(), ForestNode::unfrozen(d))),
            );
        }
        out.extend(repetition_successors(&self.presence).into_iter().map(|p| {
            (
                Rule::Repetition,
                ForestNode {
                    dag: self.dag.clone(),
                    presence: p,
                    frozen: true,
                },
            )
        }));
        out
    }

    /// Applies a topology rule; refused once frozen.
    pub fn expand(&self, e: &Expansion) -> Option<ForestNode> {
        if self.frozen {
            return None;
        }
        let mut d = self.dag.clone();
        apply(&mut d, e);
        Some(ForestNode::unfrozen(d))
    }
}

/// All forest nodes within `steps` steps of `start`, with their depths.
pub fn enumerate_forests(start: ForestNode, steps: usize) -> Vec<(ForestNode, usize)> {
    let mut out = Vec::new();
    let mut stack = vec![(start, 0usize)];
    while let Some((node, depth)) = stack.pop() {
        if depth < steps {
            for (_, s) in node.successors().into_iter().rev() {
                stack.push((s, depth + 1));
            }
        }
        out.push((node, depth));
    }
    out
}
