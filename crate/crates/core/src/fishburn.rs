//! Bijection between FDAGs and row-Fishburn matrices.
//!
//! Rows are labelled `v_n .. v_1` from top to bottom and columns
//! `v_{n-1} .. v_0` from left to right, so vertex `i` owns row `n - i` and
//! child `j` sits in column `n - 1 - j`. Upper-triangular means entries with
//! column < row are zero.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::dag::{Fdag, Violation};
use crate::words::DecreasingWord;

/// Leading constant of the asymptotic count of row-Fishburn matrices.
pub const BETA: f64 = 1.297_068_612_06;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FishburnError {
    #[error("expected {expected} entries, found {found}")]
    WrongLength { expected: usize, found: usize },
    #[error("entry ({row}, {col}) lies below the diagonal but is nonzero")]
    BelowDiagonal { row: usize, col: usize },
    #[error("row {0} has no nonzero entry")]
    ZeroRow(usize),
    #[error("rows are equal, their difference is undefined")]
    EqualRows,
    #[error("rows differ first at index {index} with a negative difference")]
    NegativeDifference { index: usize },
    #[error("row has no nonzero entry")]
    ZeroIncrement,
    #[error("rows have different lengths")]
    LengthMismatch,
    #[error("decoded graph is not canonical: {0}")]
    NotCanonical(#[from] Violation),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct MatrixFormatError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RowFishburnMatrix {
    dim: usize,
    // row-major, dim * dim
    entries: Vec<u64>,
}

impl RowFishburnMatrix {
    pub fn empty() -> Self {
        RowFishburnMatrix {
            dim: 0,
            entries: Vec::new(),
        }
    }

    pub fn new(dim: usize, entries: Vec<u64>) -> Result<Self, FishburnError> {
        if entries.len() != dim * dim {
            return Err(FishburnError::WrongLength {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        let m = RowFishburnMatrix { dim, entries };
        for r in 0..dim {
            if let Some(col) = (0..r).find(|&c| m.get(r, c) != 0) {
                return Err(FishburnError::BelowDiagonal { row: r, col });
            }
            if m.row(r).iter().all(|&x| x == 0) {
                return Err(FishburnError::ZeroRow(r));
            }
        }
        Ok(m)
    }

    pub fn from_rows(rows: Vec<Vec<u64>>) -> Result<Self, FishburnError> {
        let dim = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
            return Err(FishburnError::WrongLength {
                expected: dim,
                found: bad.len(),
            });
        }
        RowFishburnMatrix::new(dim, rows.concat())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> u64 {
        self.entries[row * self.dim + col]
    }

    pub fn row(&self, r: usize) -> &[u64] {
        &self.entries[r * self.dim..(r + 1) * self.dim]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u64]> {
        (0..self.dim).map(move |r| self.row(r))
    }

    /// Sum of all entries.
    pub fn size(&self) -> u64 {
        self.entries.iter().sum()
    }

    /// Nonzero entry in every column as well as every row.
    pub fn is_general_fishburn(&self) -> bool {
        (0..self.dim).all(|c| (0..self.dim).any(|r| self.get(r, c) != 0))
    }

    /// (R2): one more row and column on the top left, the new top row
    /// holding a single 1 at `col`.
    fn grown(&self, col: usize) -> Self {
        let d = self.dim + 1;
        let mut entries = vec![0u64; d * d];
        entries[col] = 1;
        for r in 0..self.dim {
            entries[(r + 1) * d + 1..(r + 2) * d].copy_from_slice(self.row(r));
        }
        RowFishburnMatrix { dim: d, entries }
    }

    fn rightmost_top(&self) -> usize {
        self.row(0)
            .iter()
            .rposition(|&x| x != 0)
            .expect("rows are nonzero")
    }

    /// Matrices obtained by one expansion rule.
    pub fn children(&self) -> Vec<RowFishburnMatrix> {
        let mut out = Vec::with_capacity(2 * self.dim + 1);
        if self.dim > 0 {
            // (R1): any column at or right of the rightmost top-row nonzero
            for c in self.rightmost_top()..self.dim {
                let mut m = self.clone();
                m.entries[c] += 1;
                out.push(m);
            }
        }
        out.extend((0..=self.dim).map(|c| self.grown(c)));
        out
    }

    /// Inverse of [`children`](Self::children); `None` for the empty matrix.
    pub fn parent(&self) -> Option<RowFishburnMatrix> {
        if self.dim == 0 {
            return None;
        }
        if self.row(0).iter().sum::<u64>() == 1 {
            let d = self.dim - 1;
            let mut entries = Vec::with_capacity(d * d);
            for r in 1..self.dim {
                entries.extend_from_slice(&self.row(r)[1..]);
            }
            return Some(RowFishburnMatrix { dim: d, entries });
        }
        let mut m = self.clone();
        let c = self.rightmost_top();
        m.entries[c] -= 1;
        Some(m)
    }
}

/// `a ⊖ b`: zeros before the first differing index `j`, then `a_j - b_j`,
/// then the rest of `a`.
pub fn ominus(a: &[u64], b: &[u64]) -> Result<Vec<u64>, FishburnError> {
    if a.len() != b.len() {
        return Err(FishburnError::LengthMismatch);
    }
    let j = (0..a.len())
        .find(|&i| a[i] != b[i])
        .ok_or(FishburnError::EqualRows)?;
    if a[j] < b[j] {
        return Err(FishburnError::NegativeDifference { index: j });
    }
    let mut out = vec![0u64; a.len()];
    out[j] = a[j] - b[j];
    out[j + 1..].copy_from_slice(&a[j + 1..]);
    Ok(out)
}

/// `a ⊕ b`: `a` before the first nonzero index `j` of `b`, then
/// `a_j + b_j`, then the rest of `b`.
pub fn oplus(a: &[u64], b: &[u64]) -> Result<Vec<u64>, FishburnError> {
    if a.len() != b.len() {
        return Err(FishburnError::LengthMismatch);
    }
    let j = b
        .iter()
        .position(|&x| x != 0)
        .ok_or(FishburnError::ZeroIncrement)?;
    let mut out = Vec::with_capacity(a.len());
    out.extend_from_slice(&a[..j]);
    out.push(a[j] + b[j]);
    out.extend_from_slice(&b[j + 1..]);
    Ok(out)
}

/// Row of the reduced adjacency matrix for vertex `i`.
fn adjacency_row(d: &Fdag, i: usize) -> Vec<u64> {
    let n = d.last_index();
    let mut row = vec![0u64; n];
    for j in d.word(i).iter() {
        row[n - 1 - j] += 1;
    }
    row
}

/// Reduced adjacency matrix: rows `v_n..v_1`, columns `v_{n-1}..v_0`.
pub fn adjacency_matrix(d: &Fdag) -> RowFishburnMatrix {
    let n = d.last_index();
    let rows: Vec<Vec<u64>> = (1..=n).rev().map(|i| adjacency_row(d, i)).collect();
    RowFishburnMatrix::from_rows(rows).expect("non-leaf vertices have children")
}

/// The incremental adjacency matrix of `d`; its size is the step count.
pub fn to_matrix(d: &Fdag) -> RowFishburnMatrix {
    let n = d.last_index();
    let rows: Vec<Vec<u64>> = (1..=n).map(|i| adjacency_row(d, i)).collect();
    let mut hat = Vec::with_capacity(n);
    for i in 0..n {
        hat.push(if i == 0 {
            rows[0].clone()
        } else {
            ominus(&rows[i], &rows[i - 1]).expect("consecutive rows strictly increase")
        });
    }
    hat.reverse();
    RowFishburnMatrix::from_rows(hat).expect("incremental rows stay row-Fishburn")
}

pub fn from_matrix(m: &RowFishburnMatrix) -> Result<Fdag, FishburnError> {
    let n = m.dim();
    let mut words = vec![DecreasingWord::empty()];
    let mut prev: Option<Vec<u64>> = None;
    for i in 1..=n {
        let hat = m.row(n - i);
        let row = match &prev {
            None => hat.to_vec(),
            Some(p) => oplus(p, hat)?,
        };
        let mut letters = Vec::new();
        for (c, &k) in row.iter().enumerate() {
            letters.extend(std::iter::repeat_n(n - 1 - c, k as usize));
        }
        words.push(DecreasingWord::from_multiset(letters));
        prev = Some(row);
    }
    Ok(Fdag::from_child_words(words)?)
}

/// True when `d` compresses a single tree.
pub fn single_tree_check(d: &Fdag) -> bool {
    d.sources().len() == 1
}

/// Every row-Fishburn matrix of size at most `max_size`, each once, in
/// depth-first order from the empty matrix.
pub fn enumerate_matrices(max_size: u64) -> MatrixSearch {
    MatrixSearch {
        stack: vec![RowFishburnMatrix::empty()],
        max_size,
    }
}

pub struct MatrixSearch {
    stack: Vec<RowFishburnMatrix>,
    max_size: u64,
}

impl Iterator for MatrixSearch {
    type Item = RowFishburnMatrix;

    fn next(&mut self) -> Option<RowFishburnMatrix> {
        let m = self.stack.pop()?;
        // every rule adds exactly one to the size
        if m.size() < self.max_size {
            let mut children = m.children();
            children.reverse();
            self.stack.extend(children);
        }
        Some(m)
    }
}

/// Number of row-Fishburn matrices of each size `0..=max_size`.
pub fn matrix_counts(max_size: u64) -> Vec<u64> {
    let mut counts = vec![0u64; max_size as usize + 1];
    for m in enumerate_matrices(max_size) {
        counts[m.size() as usize] += 1;
    }
    counts
}

/// Leading-order estimate `k! (12/π²)^k β` of the count at size `k`.
pub fn asymptotic_estimate(k: u32) -> f64 {
    let factorial: f64 = (1..=k).map(f64::from).product();
    factorial * (12.0 / (PI * PI)).powi(k as i32) * BETA
}

/// `count / (k! (12/π²)^k)`, which tends to `BETA`.
pub fn asymptotic_ratio(k: u32, count: u64) -> f64 {
    count as f64 * BETA / asymptotic_estimate(k)
}

impl fmt::Display for RowFishburnMatrix {
    /// The `rfm 1` text format.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "rfm 1")?;
        writeln!(f, "dim {}", self.dim)?;
        for row in self.rows() {
            let cells: Vec<String> = row.iter().map(u64::to_string).collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

impl FromStr for RowFishburnMatrix {
    type Err = MatrixFormatError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |line: usize, message: String| MatrixFormatError { line, message };
        let lines: Vec<&str> = s.lines().map(str::trim_end).collect();
        if lines.first() != Some(&"rfm 1") {
            return Err(err(1, "expected header `rfm 1`".into()));
        }
        let dim: usize = lines
            .get(1)
            .and_then(|l| l.strip_prefix("dim "))
            .and_then(|x| x.trim().parse().ok())
            .ok_or_else(|| err(2, "expected `dim <d>`".into()))?;
        let body: Vec<(usize, &str)> = lines
            .iter()
            .enumerate()
            .skip(2)
            .map(|(i, l)| (i + 1, *l))
            .filter(|(_, l)| !l.trim().is_empty())
            .collect();
        if body.len() != dim {
            return Err(err(
                lines.len().max(2),
                format!("expected {dim} rows, found {}", body.len()),
            ));
        }
        let mut entries = Vec::with_capacity(dim * dim);
        for &(line, text) in &body {
            let row = text
                .split_whitespace()
                .map(str::parse::<u64>)
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| err(line, format!("bad entry: {e}")))?;
            if row.len() != dim {
                return Err(err(
                    line,
                    format!("expected {dim} entries, found {}", row.len()),
                ));
            }
            entries.extend(row);
        }
        RowFishburnMatrix::new(dim, entries).map_err(|e| {
            let line = match e {
                FishburnError::BelowDiagonal { row, .. } | FishburnError::ZeroRow(row) => {
                    body[row].0
                }
                _ => 2,
            };
            err(line, e.to_string())
        })
    }
}

/// Parses a stream of `rfm 1` records separated by blank lines.
pub fn parse_matrix_stream(text: &str) -> Result<Vec<RowFishburnMatrix>, MatrixFormatError> {
    let mut out = Vec::new();
    let mut current: Vec<&str> = Vec::new();
    let mut start = 1;
    let lines: Vec<&str> = text.lines().collect();
    let mut flush = |block: &mut Vec<&str>, start: usize| -> Result<(), MatrixFormatError> {
        if block.is_empty() {
            return Ok(());
        }
        let m = block
            .join("\n")
            .parse::<RowFishburnMatrix>()
            .map_err(|e| MatrixFormatError {
                line: e.line + start - 1,
                message: e.message,
            })?;
        out.push(m);
        block.clear();
        Ok(())
    };
    for (i, line) in lines.iter().enumerate() {
        // a new header starts a new record; `dim 0` records have no rows
        if line.trim() == "rfm 1" {
            flush(&mut current, start)?;
            start = i + 1;
        }
        if !line.trim().is_empty() {
            current.push(line);
        }
    }
    flush(&mut current, start)?;
    Ok(out)
}
