//! FDAGs: DAG compressions of irredundant forests, stored in their unique
//! canonical vertex order.
//!
//! Vertex `i` carries its child multiset as a decreasing word of canonical
//! indices. The canonical order puts heights in non-decreasing order and,
//! inside a block of equal height, child words in strictly increasing
//! lexicographic order. Vertex 0 is the unique leaf.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::trees::Tree;
use crate::words::{lex_compare, DecreasingWord};

/// First canonical-ordering constraint broken by a candidate vertex order.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("graph has no vertices")]
    Empty,
    #[error("vertex {vertex} has child {child}, which does not precede it (topological order)")]
    NotTopological { vertex: usize, child: usize },
    #[error("vertices {first} and {second} have the same children (distinct child sets)")]
    DuplicateChildren { first: usize, second: usize },
    #[error("vertex {vertex} is lower than vertex {} (height order)", vertex - 1)]
    HeightOrder { vertex: usize },
    #[error("vertex {vertex} has a child word not greater than vertex {} at the same height (lexicographic order)", vertex - 1)]
    ChildOrder { vertex: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DagError {
    #[error("empty forest")]
    EmptyForest,
    #[error("forest is redundant: tree {inner} is a subtree of tree {outer}")]
    Redundant { inner: usize, outer: usize },
    #[error("vertex set is empty")]
    EmptyVertexSet,
    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),
    #[error("vertex set is not closed: arc {parent} -> {child} leaves it")]
    NotClosed { parent: usize, child: usize },
    #[error(transparent)]
    Invalid(#[from] Violation),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct FormatError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Fdag {
    words: Vec<DecreasingWord>,
    heights: Vec<usize>,
    // first index of the block of vertices sharing the height of the last vertex
    top_start: usize,
}

/// Checks whether `children` (child lists in any order, indexed by vertex)
/// listed in this vertex order is the canonical ordering of an FDAG.
pub fn validate(children: &[Vec<usize>]) -> Result<(), Violation> {
    let words: Vec<DecreasingWord> = children
        .iter()
        .map(|c| DecreasingWord::from_multiset(c.clone()))
        .collect();
    check_canonical(&words).map(|_| ())
}

fn check_canonical(words: &[DecreasingWord]) -> Result<Vec<usize>, Violation> {
    if words.is_empty() {
        return Err(Violation::Empty);
    }
    let mut heights = Vec::with_capacity(words.len());
    for (v, w) in words.iter().enumerate() {
        // decreasing words: the first letter is the largest
        if let Some(child) = w.first().filter(|&c| c >= v) {
            return Err(Violation::NotTopological { vertex: v, child });
        }
        heights.push(w.iter().map(|c| heights[c] + 1).max().unwrap_or(0));
    }
    let mut seen: HashMap<&DecreasingWord, usize> = HashMap::with_capacity(words.len());
    for (v, w) in words.iter().enumerate() {
        if let Some(&first) = seen.get(w) {
            return Err(Violation::DuplicateChildren { first, second: v });
        }
        seen.insert(w, v);
    }
    for v in 1..words.len() {
        match heights[v].cmp(&heights[v - 1]) {
            Ordering::Less => return Err(Violation::HeightOrder { vertex: v }),
            Ordering::Equal if lex_compare(&words[v], &words[v - 1]) != Ordering::Greater => {
                return Err(Violation::ChildOrder { vertex: v })
            }
            _ => {}
        }
    }
    Ok(heights)
}

fn top_block_start(heights: &[usize]) -> usize {
    let last = heights[heights.len() - 1];
    heights
        .iter()
        .rposition(|&h| h != last)
        .map_or(0, |i| i + 1)
}

impl Fdag {
    /// The FDAG with a single vertex and no arcs.
    pub fn trivial() -> Self {
        Fdag {
            words: vec![DecreasingWord::empty()],
            heights: vec![0],
            top_start: 0,
        }
    }

    pub fn from_child_words(words: Vec<DecreasingWord>) -> Result<Self, Violation> {
        let heights = check_canonical(&words)?;
        let top_start = top_block_start(&heights);
        Ok(Fdag {
            words,
            heights,
            top_start,
        })
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    /// Always false: an FDAG has at least its leaf.
    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.words.len() == 1
    }

    pub fn last_index(&self) -> usize {
        self.words.len() - 1
    }

    pub fn word(&self, v: usize) -> &DecreasingWord {
        &self.words[v]
    }

    pub fn words(&self) -> &[DecreasingWord] {
        &self.words
    }

    pub fn vertex_height(&self, v: usize) -> usize {
        self.heights[v]
    }

    pub fn heights(&self) -> &[usize] {
        &self.heights
    }

    pub fn height(&self) -> usize {
        self.heights[self.last_index()]
    }

    pub fn outdegree(&self) -> usize {
        self.words
            .iter()
            .map(DecreasingWord::len)
            .max()
            .unwrap_or(0)
    }

    /// Number of arcs counted with multiplicity.
    pub fn arc_count(&self) -> usize {
        self.words.iter().map(DecreasingWord::len).sum()
    }

    /// Index of the first vertex at the height of the last vertex. Vertices
    /// below it form the lower alphabet, the rest the top alphabet.
    pub fn top_start(&self) -> usize {
        self.top_start
    }

    /// Largest index of a vertex strictly lower than the last vertex; `None`
    /// for the trivial FDAG.
    pub fn boundary(&self) -> Option<usize> {
        self.top_start.checked_sub(1)
    }

    /// Whether the last vertex is the only one at its height.
    pub fn last_is_alone(&self) -> bool {
        self.top_start == self.last_index()
    }

    pub fn sources(&self) -> Vec<usize> {
        let mut has_parent = vec![false; self.len()];
        for w in &self.words {
            for c in w.iter() {
                has_parent[c] = true;
            }
        }
        (0..self.len()).filter(|&v| !has_parent[v]).collect()
    }

    /// Parents of each vertex, without multiplicity, in increasing order.
    pub fn parents(&self) -> Vec<Vec<usize>> {
        let mut parents = vec![Vec::new(); self.len()];
        for (v, w) in self.words.iter().enumerate() {
            let mut prev = None;
            for c in w.iter() {
                if prev != Some(c) {
                    parents[c].push(v);
                    prev = Some(c);
                }
            }
        }
        parents
    }

    /// Number of expansion steps separating this FDAG from the trivial one.
    pub fn steps(&self) -> usize {
        self.words
            .windows(2)
            .map(|pair| pair[1].len() - pair[1].common_prefix_len(&pair[0]))
            .sum()
    }

    /// `v` together with all its descendants, in increasing order.
    pub fn descendants_with(&self, v: usize) -> Vec<usize> {
        let mut seen = vec![false; self.len()];
        seen[v] = true;
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            for c in self.words[u].iter() {
                if !seen[c] {
                    seen[c] = true;
                    stack.push(c);
                }
            }
        }
        (0..self.len()).filter(|&u| seen[u]).collect()
    }

    /// The single-source FDAG made of `v` and its descendants.
    pub fn subdag(&self, v: usize) -> Fdag {
        self.induced(&self.descendants_with(v))
            .expect("descendant sets are closed")
    }

    /// Restriction to a children-closed vertex set, re-indexed canonically.
    ///
    /// Heights survive the restriction and the re-indexing is monotone, so
    /// the inherited order is already canonical.
    pub fn induced(&self, vertices: &[usize]) -> Result<Fdag, DagError> {
        if vertices.is_empty() {
            return Err(DagError::EmptyVertexSet);
        }
        let mut new_index = vec![usize::MAX; self.len()];
        let mut sorted = vertices.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        for (i, &v) in sorted.iter().enumerate() {
            if v >= self.len() {
                return Err(DagError::VertexOutOfRange(v));
            }
            new_index[v] = i;
        }
        for &v in &sorted {
            if let Some(child) = self.words[v].iter().find(|&c| new_index[c] == usize::MAX) {
                return Err(DagError::NotClosed { parent: v, child });
            }
        }
        let words = sorted
            .iter()
            .map(|&v| self.words[v].map_letters(|c| new_index[c]))
            .collect();
        Ok(Fdag::from_child_words(words)?)
    }

    /// The tree compressed by the subDAG rooted at `v`.
    pub fn expand_vertex(&self, v: usize) -> Tree {
        let mut children: Vec<Vec<usize>> = vec![Vec::new()];
        let mut stack = vec![(v, 0usize)];
        while let Some((dag_v, tree_v)) = stack.pop() {
            for c in self.words[dag_v].iter() {
                children.push(Vec::new());
                let id = children.len() - 1;
                children[tree_v].push(id);
                stack.push((c, id));
            }
        }
        Tree::from_child_lists(children, 0).expect("expansion is a tree")
    }

    /// The forest compressed by this FDAG: one tree per source, in canonical
    /// order of the sources.
    pub fn expand(&self) -> Vec<Tree> {
        self.sources()
            .into_iter()
            .map(|s| self.expand_vertex(s))
            .collect()
    }

    /// One-line form: child words joined by `;`.
    pub fn to_line(&self) -> String {
        let mut out = String::new();
        for (i, w) in self.words.iter().enumerate() {
            if i > 0 {
                out.push(';');
            }
            out.push_str(&w.to_string());
        }
        out
    }

    pub fn from_line(line: &str) -> Result<Fdag, FormatError> {
        let err = |message: String| FormatError { line: 1, message };
        let words = line
            .split(';')
            .map(|part| part.parse::<DecreasingWord>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| err(e.to_string()))?;
        Fdag::from_child_words(words).map_err(|e| err(e.to_string()))
    }

    pub(crate) fn push_letter(&mut self, letter: usize) {
        let last = self.last_index();
        self.words[last].push_unchecked(letter);
    }

    pub(crate) fn pop_letter(&mut self) {
        let last = self.last_index();
        self.words[last].pop();
    }

    pub(crate) fn push_vertex(&mut self, word: DecreasingWord, height: usize) {
        if height != self.height() {
            self.top_start = self.len();
        }
        self.words.push(word);
        self.heights.push(height);
    }

    pub(crate) fn pop_vertex(&mut self) {
        self.words.pop();
        self.heights.pop();
        if self.top_start >= self.len() {
            self.top_start = top_block_start(&self.heights);
        }
    }
}

impl Default for Fdag {
    fn default() -> Self {
        Fdag::trivial()
    }
}

/// Result of compressing a forest: the FDAG and, for every input tree, the
/// canonical index of the vertex compressing its root.
#[derive(Debug, Clone)]
pub struct Reduction {
    pub dag: Fdag,
    pub roots: Vec<usize>,
}

/// DAG reduction of an irredundant forest.
pub fn reduce(forest: &[Tree]) -> Result<Fdag, DagError> {
    reduce_with_roots(forest).map(|r| r.dag)
}

pub fn reduce_with_roots(forest: &[Tree]) -> Result<Reduction, DagError> {
    if forest.is_empty() {
        return Err(DagError::EmptyForest);
    }
    // Hash-consing on exact sorted child-class vectors: no collisions.
    let mut interned: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut class_children: Vec<Vec<usize>> = Vec::new();
    let mut class_height: Vec<usize> = Vec::new();
    let mut node_classes: Vec<Vec<usize>> = Vec::with_capacity(forest.len());
    for tree in forest {
        let mut class = vec![usize::MAX; tree.len()];
        for v in tree.post_order() {
            let mut key: Vec<usize> = tree.children(v).iter().map(|&c| class[c]).collect();
            key.sort_unstable();
            let next = class_children.len();
            let id = *interned.entry(key.clone()).or_insert(next);
            if id == next {
                class_height.push(key.iter().map(|&c| class_height[c] + 1).max().unwrap_or(0));
                class_children.push(key);
            }
            class[v] = id;
        }
        node_classes.push(class);
    }
    let root_classes: Vec<usize> = forest
        .iter()
        .zip(&node_classes)
        .map(|(t, classes)| classes[t.root()])
        .collect();
    check_irredundant(forest, &node_classes, &root_classes)?;

    let n = class_children.len();
    let max_height = class_height.iter().copied().max().unwrap_or(0);
    let mut by_height: Vec<Vec<usize>> = vec![Vec::new(); max_height + 1];
    for (c, &h) in class_height.iter().enumerate() {
        by_height[h].push(c);
    }
    let mut canonical = vec![usize::MAX; n];
    let mut words: Vec<DecreasingWord> = Vec::with_capacity(n);
    for level in by_height {
        // children are strictly lower, hence already numbered
        let mut keyed: Vec<(DecreasingWord, usize)> = level
            .into_iter()
            .map(|c| {
                let letters = class_children[c].iter().map(|&k| canonical[k]).collect();
                (DecreasingWord::from_multiset(letters), c)
            })
            .collect();
        keyed.sort_by(|a, b| lex_compare(&a.0, &b.0));
        assert!(
            keyed.windows(2).all(|p| p[0].0 != p[1].0),
            "isomorphic classes were not merged"
        );
        for (word, c) in keyed {
            canonical[c] = words.len();
            words.push(word);
        }
    }
    let dag = Fdag::from_child_words(words).expect("reduction is canonical");
    let roots = root_classes.iter().map(|&c| canonical[c]).collect();
    Ok(Reduction { dag, roots })
}

fn check_irredundant(
    forest: &[Tree],
    node_classes: &[Vec<usize>],
    root_classes: &[usize],
) -> Result<(), DagError> {
    for (i, &rc) in root_classes.iter().enumerate() {
        for (j, classes) in node_classes.iter().enumerate() {
            if i == j {
                continue;
            }
            let root_j = forest[j].root();
            let contains = classes
                .iter()
                .enumerate()
                .any(|(v, &c)| c == rc && (v != root_j || root_classes[j] == rc));
            if contains {
                return Err(DagError::Redundant { inner: i, outer: j });
            }
        }
    }
    Ok(())
}

impl fmt::Display for Fdag {
    /// The `fdag 1` text format.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "fdag 1")?;
        writeln!(f, "n {}", self.len())?;
        for (i, w) in self.words.iter().enumerate() {
            if w.is_empty() {
                writeln!(f, "{i}:")?;
            } else {
                writeln!(f, "{i}: {w}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for Fdag {
    type Err = FormatError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |line: usize, message: String| FormatError { line, message };
        let mut lines = s.lines().enumerate().map(|(i, l)| (i + 1, l.trim_end()));
        match lines.next() {
            Some((_, "fdag 1")) => {}
            Some((i, other)) => {
                return Err(err(i, format!("expected header `fdag 1`, found {other:?}")))
            }
            None => return Err(err(1, "missing header `fdag 1`".into())),
        }
        let (count_line, count) = match lines.next() {
            Some((i, l)) => {
                let n = l
                    .strip_prefix("n ")
                    .and_then(|x| x.trim().parse::<usize>().ok())
                    .ok_or_else(|| err(i, format!("expected `n <vertex count>`, found {l:?}")))?;
                (i, n)
            }
            None => return Err(err(2, "missing vertex count line".into())),
        };
        let mut words = Vec::with_capacity(count);
        let mut last_line = count_line;
        for (i, l) in lines {
            if l.trim().is_empty() {
                if words.len() == count {
                    break;
                }
                return Err(err(i, "unexpected blank line".into()));
            }
            if words.len() == count {
                return Err(err(i, "more vertex lines than announced".into()));
            }
            let (idx, rest) = l
                .split_once(':')
                .ok_or_else(|| err(i, format!("expected `<index>: <word>`, found {l:?}")))?;
            let idx: usize = idx
                .trim()
                .parse()
                .map_err(|_| err(i, format!("bad vertex index {idx:?}")))?;
            if idx != words.len() {
                return Err(err(
                    i,
                    format!("expected vertex {}, found {idx}", words.len()),
                ));
            }
            let word = rest
                .parse::<DecreasingWord>()
                .map_err(|e| err(i, e.to_string()))?;
            words.push(word);
            last_line = i;
        }
        if words.len() != count {
            return Err(err(
                last_line,
                format!("expected {count} vertices, found {}", words.len()),
            ));
        }
        Fdag::from_child_words(words).map_err(|v| {
            let vertex = match &v {
                Violation::Empty => None,
                Violation::NotTopological { vertex, .. }
                | Violation::HeightOrder { vertex }
                | Violation::ChildOrder { vertex } => Some(*vertex),
                Violation::DuplicateChildren { second, .. } => Some(*second),
            };
            err(
                vertex.map_or(count_line, |x| count_line + 1 + x),
                v.to_string(),
            )
        })
    }
}

/// Parses a stream of `fdag 1` records separated by blank lines.
pub fn parse_fdag_stream(text: &str) -> Result<Vec<Fdag>, FormatError> {
    let mut out = Vec::new();
    let mut block = String::new();
    let mut block_start = 1;
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            if !block.is_empty() {
                out.push(block.parse::<Fdag>().map_err(|e| FormatError {
                    line: e.line + block_start - 1,
                    message: e.message,
                })?);
                block.clear();
            }
            continue;
        }
        if block.is_empty() {
            block_start = i + 1;
        }
        block.push_str(line);
        block.push('\n');
    }
    if !block.is_empty() {
        out.push(block.parse::<Fdag>().map_err(|e| FormatError {
            line: e.line + block_start - 1,
            message: e.message,
        })?);
    }
    Ok(out)
}
