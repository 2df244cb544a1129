//! Unordered rooted trees.
//!
//! Trees are stored as an arena of child lists. Sibling order is an
//! artifact of storage: every structural query (signatures, isomorphism,
//! height) is invariant under sibling permutation.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: byte {offset}: {message}")]
    InLine {
        line: usize,
        offset: usize,
        message: &'static str,
    },
    #[error("byte {offset}: {message}")]
    At {
        offset: usize,
        message: &'static str,
    },
}

impl ParseError {
    fn at(offset: usize, message: &'static str) -> Self {
        ParseError::At { offset, message }
    }

    fn with_line(self, line: usize) -> Self {
        match self {
            ParseError::At { offset, message } => ParseError::InLine {
                line,
                offset,
                message,
            },
            other => other,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tree {
    children: Vec<Vec<usize>>,
    root: usize,
}

/// Canonical signature of a rooted unordered tree: the parenthesis encoding
/// in which every child list is sorted. Equal signatures mean isomorphic
/// trees and conversely.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Signature(String);

impl Signature {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Tree {
    pub fn leaf() -> Self {
        Tree {
            children: vec![Vec::new()],
            root: 0,
        }
    }

    /// A new root whose subtrees are `subtrees`.
    pub fn join(subtrees: Vec<Tree>) -> Self {
        let mut builder = TreeBuilder::default();
        let root = builder.add_node();
        for t in &subtrees {
            let child = builder.graft(t, t.root);
            builder.children[root].push(child);
        }
        builder.finish(root)
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn len(&self) -> usize {
        self.children.len()
    }

    pub fn is_empty(&self) -> bool {
        self.children.is_empty()
    }

    pub fn children(&self, v: usize) -> &[usize] {
        &self.children[v]
    }

    /// Vertices in post-order (children before parents).
    pub fn post_order(&self) -> Vec<usize> {
        let mut order = Vec::with_capacity(self.len());
        let mut stack = vec![(self.root, false)];
        while let Some((v, expanded)) = stack.pop() {
            if expanded {
                order.push(v);
            } else {
                stack.push((v, true));
                for &c in self.children[v].iter().rev() {
                    stack.push((c, false));
                }
            }
        }
        order
    }

    pub fn heights(&self) -> Vec<usize> {
        let mut h = vec![0; self.len()];
        for v in self.post_order() {
            h[v] = self.children[v]
                .iter()
                .map(|&c| h[c] + 1)
                .max()
                .unwrap_or(0);
        }
        h
    }

    pub fn height(&self) -> usize {
        self.heights()[self.root]
    }

    pub fn outdegree(&self) -> usize {
        self.children.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Signature of every vertex's subtree, indexed by vertex.
    pub fn signatures(&self) -> Vec<Signature> {
        let mut sigs: Vec<Option<String>> = vec![None; self.len()];
        for v in self.post_order() {
            let mut kids: Vec<&str> = self.children[v]
                .iter()
                .map(|&c| sigs[c].as_deref().expect("post-order"))
                .collect();
            kids.sort_unstable();
            let mut s = String::with_capacity(2 + kids.iter().map(|k| k.len()).sum::<usize>());
            s.push('(');
            for k in kids {
                s.push_str(k);
            }
            s.push(')');
            sigs[v] = Some(s);
        }
        sigs.into_iter()
            .map(|s| Signature(s.expect("reachable")))
            .collect()
    }

    pub fn signature(&self) -> Signature {
        self.signatures().swap_remove(self.root)
    }

    /// One signature per isomorphism class of rooted subtrees.
    pub fn distinct_subtrees(&self) -> BTreeSet<Signature> {
        self.signatures().into_iter().collect()
    }

    pub fn isomorphic(&self, other: &Tree) -> bool {
        self.len() == other.len() && self.signature() == other.signature()
    }

    /// The subtree rooted at `v` as a standalone tree.
    pub fn subtree(&self, v: usize) -> Tree {
        let mut builder = TreeBuilder::default();
        let root = builder.graft(self, v);
        builder.finish(root)
    }

    /// Builds a tree from explicit child lists, checking that every vertex
    /// other than `root` has exactly one parent and all are reachable.
    pub fn from_child_lists(children: Vec<Vec<usize>>, root: usize) -> Option<Tree> {
        let n = children.len();
        if root >= n {
            return None;
        }
        let mut parents = vec![0usize; n];
        for list in &children {
            for &c in list {
                if c >= n {
                    return None;
                }
                parents[c] += 1;
            }
        }
        if parents[root] != 0
            || parents
                .iter()
                .enumerate()
                .any(|(v, &p)| v != root && p != 1)
        {
            return None;
        }
        let tree = Tree { children, root };
        (tree.post_order().len() == n).then_some(tree)
    }
}

#[derive(Default)]
struct TreeBuilder {
    children: Vec<Vec<usize>>,
}

impl TreeBuilder {
    fn add_node(&mut self) -> usize {
        self.children.push(Vec::new());
        self.children.len() - 1
    }

    /// Copies the subtree of `src` rooted at `v`, returning the new root.
    fn graft(&mut self, src: &Tree, v: usize) -> usize {
        let new_root = self.add_node();
        let mut stack = vec![(v, new_root)];
        while let Some((old, new)) = stack.pop() {
            for &c in &src.children[old] {
                let nc = self.add_node();
                self.children[new].push(nc);
                stack.push((c, nc));
            }
        }
        new_root
    }

    fn finish(self, root: usize) -> Tree {
        Tree {
            children: self.children,
            root,
        }
    }
}

/// Parses `tree := "(" tree* ")"`, ignoring ASCII whitespace between tokens.
pub fn parse_tree(text: &str) -> Result<Tree, ParseError> {
    let bytes = text.as_bytes();
    let mut builder = TreeBuilder::default();
    let mut stack: Vec<usize> = Vec::new();
    let mut root = None;
    for (offset, &b) in bytes.iter().enumerate() {
        match b {
            b'(' => {
                if root.is_some() {
                    return Err(ParseError::at(offset, "trailing input after tree"));
                }
                let v = builder.add_node();
                if let Some(&parent) = stack.last() {
                    builder.children[parent].push(v);
                }
                stack.push(v);
            }
            b')' => {
                let v = stack
                    .pop()
                    .ok_or_else(|| ParseError::at(offset, "unbalanced ')'"))?;
                if stack.is_empty() {
                    root = Some(v);
                }
            }
            b if b.is_ascii_whitespace() => {}
            _ => return Err(ParseError::at(offset, "unexpected character")),
        }
    }
    if !stack.is_empty() {
        return Err(ParseError::at(bytes.len(), "unclosed '('"));
    }
    let root = root.ok_or_else(|| ParseError::at(bytes.len(), "empty input"))?;
    Ok(builder.finish(root))
}

/// Parses a forest file: one tree per line, `#` comments and blank lines
/// skipped. Line numbers in errors are 1-based.
pub fn parse_forest(text: &str) -> Result<Vec<Tree>, ParseError> {
    let mut trees = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        trees.push(parse_tree(line).map_err(|e| e.with_line(i + 1))?);
    }
    Ok(trees)
}

impl fmt::Display for Tree {
    /// Parenthesis encoding in storage order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut stack = vec![(self.root, false)];
        while let Some((v, close)) = stack.pop() {
            if close {
                f.write_str(")")?;
                continue;
            }
            f.write_str("(")?;
            stack.push((v, true));
            for &c in self.children[v].iter().rev() {
                stack.push((c, false));
            }
        }
        Ok(())
    }
}
