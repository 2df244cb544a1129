//! Enumeration of subFDAGs (forests of subtrees) of a host FDAG, and
//! frequent subFDAG mining over the forest the host compresses.
//!
//! A subFDAG is a children-closed vertex set containing the leaf. States are
//! grown one vertex at a time, always adding a vertex later in the canonical
//! order than every vertex already present, so each set is reached once.

use std::collections::BTreeSet;

use num_rational::Ratio;

use crate::dag::{DagError, Fdag};
use crate::words::lex_compare;

/// Node of the subFDAG enumeration tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternState {
    /// Vertices of the host, increasing.
    pub delta: Vec<usize>,
    /// Vertices that may be added next, increasing.
    pub candidates: Vec<usize>,
    /// Trees containing every vertex of `delta` as a subtree.
    pub origin: BTreeSet<usize>,
    pub last_vertex: usize,
}

impl PatternState {
    pub fn subfdag(&self, host: &Fdag) -> Fdag {
        host.induced(&self.delta)
            .expect("states are children-closed")
    }
}

/// The canonical FDAG on a children-closed vertex set.
pub fn induced_subfdag(d: &Fdag, vertices: &[usize]) -> Result<Fdag, DagError> {
    d.induced(vertices)
}

/// `origin(v)`: indices of the trees (given by their root vertex) in which
/// the tree compressed by `v` occurs as a subtree.
pub fn origins(d: &Fdag, roots: &[usize]) -> Vec<BTreeSet<usize>> {
    let mut out = vec![BTreeSet::new(); d.len()];
    for (t, &r) in roots.iter().enumerate() {
        for v in d.descendants_with(r) {
            out[v].insert(t);
        }
    }
    out
}

/// Origins when the trees are the sources of `d`, in canonical order.
pub fn origins_from_sources(d: &Fdag) -> Vec<BTreeSet<usize>> {
    origins(d, &d.sources())
}

struct Filter {
    n_trees: usize,
    sigma: Ratio<u64>,
}

impl Filter {
    fn keeps(&self, omega: &BTreeSet<usize>) -> bool {
        !omega.is_empty()
            && (omega.len() as u128) * (*self.sigma.denom() as u128)
                >= (*self.sigma.numer() as u128) * (self.n_trees as u128)
    }
}

/// Depth-first stream of pattern states.
pub struct PatternSearch<'a> {
    dag: &'a Fdag,
    children: Vec<Vec<usize>>,
    parents: Vec<Vec<usize>>,
    origins: Vec<BTreeSet<usize>>,
    filter: Option<Filter>,
    stack: Vec<PatternState>,
}

impl<'a> PatternSearch<'a> {
    fn new(dag: &'a Fdag, origins: Vec<BTreeSet<usize>>, filter: Option<Filter>) -> Self {
        let children: Vec<Vec<usize>> = dag
            .words()
            .iter()
            .map(|w| {
                let mut c: Vec<usize> = w.iter().collect();
                c.dedup();
                c
            })
            .collect();
        let parents = dag.parents();
        let candidates = (1..dag.len()).filter(|&v| children[v] == [0]).collect();
        let root = PatternState {
            delta: vec![0],
            candidates,
            origin: origins[0].clone(),
            last_vertex: 0,
        };
        let keep = filter.as_ref().is_none_or(|f| f.keeps(&root.origin));
        PatternSearch {
            dag,
            children,
            parents,
            origins,
            filter,
            stack: if keep { vec![root] } else { Vec::new() },
        }
    }

    /// Successors of `state` in the enumeration tree.
    pub fn heirs(&self, state: &PatternState) -> Vec<PatternState> {
        let words = self.dag.words();
        let mut out = Vec::with_capacity(state.candidates.len());
        for &s in &state.candidates {
            let origin: BTreeSet<usize> = state
                .origin
                .intersection(&self.origins[s])
                .copied()
                .collect();
            if let Some(f) = &self.filter {
                if !f.keeps(&origin) {
                    continue;
                }
            }
            let mut delta = state.delta.clone();
            delta.push(s);
            let mut candidates: Vec<usize> = state
                .candidates
                .iter()
                .copied()
                .filter(|&v| lex_compare(&words[v], &words[s]).is_gt())
                .collect();
            for &p in &self.parents[s] {
                if self.children[p]
                    .iter()
                    .all(|c| delta.binary_search(c).is_ok())
                {
                    candidates.push(p);
                }
            }
            candidates.sort_unstable();
            out.push(PatternState {
                delta,
                candidates,
                origin,
                last_vertex: s,
            });
        }
        out
    }
}

impl Iterator for PatternSearch<'_> {
    type Item = PatternState;

    fn next(&mut self) -> Option<PatternState> {
        let state = self.stack.pop()?;
        let mut heirs = self.heirs(&state);
        heirs.reverse();
        self.stack.extend(heirs);
        Some(state)
    }
}

/// Every subFDAG of `d`, each once. Origins treat the sources as the trees.
pub fn enumerate_subfdags(d: &Fdag) -> PatternSearch<'_> {
    PatternSearch::new(d, origins_from_sources(d), None)
}

/// SubFDAGs present in at least one tree and in at least a fraction `sigma`
/// of the `n_trees` trees. Failing states are not expanded.
pub fn frequent_subfdags<'a>(
    d: &'a Fdag,
    origins: &'a [BTreeSet<usize>],
    n_trees: usize,
    sigma: Ratio<u64>,
) -> PatternSearch<'a> {
    let filter = Filter { n_trees, sigma };
    PatternSearch::new(d, origins.to_vec(), Some(filter))
}

/// Patterns mined at threshold zero on `d`, over subFDAGs enumerated
/// separately on each source's subDAG.
pub fn mining_quotient(d: &Fdag) -> Ratio<u64> {
    let origins = origins_from_sources(d);
    let n_trees = d.sources().len();
    let mined = frequent_subfdags(d, &origins, n_trees, Ratio::from_integer(0)).count() as u64;
    let separate: u64 = d
        .sources()
        .into_iter()
        .map(|r| enumerate_subfdags(&d.subdag(r)).count() as u64)
        .sum();
    Ratio::new(mined, separate)
}
