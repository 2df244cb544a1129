//! Enumeration of forests of unordered trees through their DAG compressions,
//! with subpattern enumeration, frequent pattern mining and a bijection with
//! Fishburn matrices.

pub mod dag;
pub mod enumerate;
pub mod fishburn;
pub mod patterns;
pub mod trees;
pub mod words;

pub use dag::{
    reduce, reduce_with_roots, validate, DagError, Fdag, FormatError, Reduction, Violation,
};
pub use enumerate::{
    antecedent, expansions, level_counts, random_fdag, successors, Constraint, EnumError,
    Expansion, ReverseSearch, Rule, Strategy,
};
pub use fishburn::{enumerate_matrices, from_matrix, to_matrix, FishburnError, RowFishburnMatrix};
pub use patterns::{enumerate_subfdags, frequent_subfdags, mining_quotient, origins, PatternState};
pub use trees::{parse_forest, parse_tree, ParseError, Signature, Tree};
pub use words::{lex_compare, minimal_words, DecreasingWord, WordError};
