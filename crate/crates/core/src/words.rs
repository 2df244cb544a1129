//! Decreasing words over the integer alphabet `{0, ..., n}`.
//!
//! A child multiset of an FDAG vertex is written as the non-increasing
//! sequence of the canonical indices of its children. The lexicographic
//! order on those words drives both the canonical ordering of vertices and
//! the widening expansion rule.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("letter {next} at position {position} is greater than the previous letter {prev}")]
    NotDecreasing {
        position: usize,
        prev: usize,
        next: usize,
    },
    #[error("invalid letter {0:?}")]
    BadLetter(String),
}

/// A non-increasing sequence of letters. The empty word is allowed.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct DecreasingWord(Vec<usize>);

impl DecreasingWord {
    pub fn empty() -> Self {
        DecreasingWord(Vec::new())
    }

    pub fn new(letters: Vec<usize>) -> Result<Self, WordError> {
        for (i, pair) in letters.windows(2).enumerate() {
            if pair[1] > pair[0] {
                return Err(WordError::NotDecreasing {
                    position: i + 1,
                    prev: pair[0],
                    next: pair[1],
                });
            }
        }
        Ok(DecreasingWord(letters))
    }

    /// Sorts an arbitrary multiset of letters into a decreasing word.
    pub fn from_multiset(mut letters: Vec<usize>) -> Self {
        letters.sort_unstable_by(|a, b| b.cmp(a));
        DecreasingWord(letters)
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<usize> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<usize> {
        self.0.last().copied()
    }

    /// Appends a letter, returning an error if it would break the decreasing
    /// property.
    pub fn push(&mut self, letter: usize) -> Result<(), WordError> {
        if let Some(prev) = self.last() {
            if letter > prev {
                return Err(WordError::NotDecreasing {
                    position: self.len(),
                    prev,
                    next: letter,
                });
            }
        }
        self.0.push(letter);
        Ok(())
    }

    pub(crate) fn push_unchecked(&mut self, letter: usize) {
        debug_assert!(self.last().is_none_or(|prev| letter <= prev));
        self.0.push(letter);
    }

    pub(crate) fn pop(&mut self) -> Option<usize> {
        self.0.pop()
    }

    /// Suffix cut: the word without its last letter. The empty word maps to
    /// itself.
    pub fn suffix_cut(&self) -> DecreasingWord {
        let mut letters = self.0.clone();
        letters.pop();
        DecreasingWord(letters)
    }

    /// Length of the longest common prefix with `other`.
    pub fn common_prefix_len(&self, other: &DecreasingWord) -> usize {
        self.0
            .iter()
            .zip(other.0.iter())
            .take_while(|(a, b)| a == b)
            .count()
    }

    /// Applies a monotone relabelling of letters. The result stays decreasing
    /// as long as `map` is non-decreasing on the letters used.
    pub(crate) fn map_letters(&self, map: impl Fn(usize) -> usize) -> DecreasingWord {
        DecreasingWord(self.0.iter().map(|&a| map(a)).collect())
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }
}

/// Lexicographic comparison: positionwise on the common length, then a
/// strict prefix is smaller than its extension. The empty word is the
/// least element.
pub fn lex_compare(a: &DecreasingWord, b: &DecreasingWord) -> Ordering {
    for (x, y) in a.0.iter().zip(b.0.iter()) {
        match x.cmp(y) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    a.len().cmp(&b.len())
}

impl Ord for DecreasingWord {
    fn cmp(&self, other: &Self) -> Ordering {
        lex_compare(self, other)
    }
}

impl PartialOrd for DecreasingWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// `w` is minimal above `bound` iff `w > bound` and its suffix cut is not.
pub fn is_minimal(w: &DecreasingWord, bound: &DecreasingWord) -> bool {
    lex_compare(w, bound) == Ordering::Greater
        && lex_compare(&w.suffix_cut(), bound) != Ordering::Greater
}

/// All minimal words strictly greater than `bound` over the alphabet
/// `{0, ..., max_letter}`, in construction order: single letters above the
/// first letter, then prefix extensions position by position, then `bound`
/// followed by each letter not exceeding its last one.
///
/// There are exactly `max_letter + 1` of them unless the first letter of
/// `bound` exceeds `max_letter`, in which case there are none.
pub fn minimal_words(bound: &DecreasingWord, max_letter: usize) -> Vec<DecreasingWord> {
    let letters = bound.letters();
    let Some(&first) = letters.first() else {
        return (0..=max_letter).map(|a| DecreasingWord(vec![a])).collect();
    };
    if first > max_letter {
        return Vec::new();
    }
    let mut out = Vec::with_capacity(max_letter + 1);
    for a in first + 1..=max_letter {
        out.push(DecreasingWord(vec![a]));
    }
    for k in 1..letters.len() {
        let (prev, cur) = (letters[k - 1], letters[k]);
        for a in cur + 1..=prev {
            let mut w = Vec::with_capacity(k + 1);
            w.extend_from_slice(&letters[..k]);
            w.push(a);
            out.push(DecreasingWord(w));
        }
    }
    let last = letters[letters.len() - 1];
    for a in 0..=last {
        let mut w = Vec::with_capacity(letters.len() + 1);
        w.extend_from_slice(letters);
        w.push(a);
        out.push(DecreasingWord(w));
    }
    out
}

impl fmt::Display for DecreasingWord {
    /// Letters separated by single spaces; the empty word prints as nothing.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

impl FromStr for DecreasingWord {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let letters = s
            .split_whitespace()
            .map(|tok| {
                tok.parse::<usize>()
                    .map_err(|_| WordError::BadLetter(tok.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        DecreasingWord::new(letters)
    }
}

#[macro_export]
#[doc(hidden)]
macro_rules! word {
    () => { $crate::words::DecreasingWord::empty() };
    ($($a:expr),+ $(,)?) => {
        $crate::words::DecreasingWord::new(vec![$($a),+]).expect("decreasing word literal")
    };
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(s: &str) -> DecreasingWord {
        // compact digit notation used in the worked examples: "211" = 2 1 1
        DecreasingWord::new(s.bytes().map(|b| (b - b'0') as usize).collect()).unwrap()
    }

    /// Every decreasing word of length <= max_len over {0..=max_letter}.
    fn all_words(max_letter: usize, max_len: usize) -> Vec<DecreasingWord> {
        let mut out = vec![DecreasingWord::empty()];
        let mut frontier = vec![DecreasingWord::empty()];
        for _ in 0..max_len {
            let mut next = Vec::new();
            for word in &frontier {
                let top = word.last().unwrap_or(max_letter);
                for a in 0..=top {
                    let mut x = word.clone();
                    x.push(a).unwrap();
                    next.push(x);
                }
            }
            out.extend(next.iter().cloned());
            frontier = next;
        }
        out
    }

    #[test]
    fn lex_examples() {
        assert_eq!(lex_compare(&w("0"), &w("00")), Ordering::Less);
        assert_eq!(
            lex_compare(&DecreasingWord::empty(), &w("0")),
            Ordering::Less
        );
        assert_eq!(lex_compare(&w("211"), &w("22")), Ordering::Less);
        assert_eq!(lex_compare(&w("211"), &w("211")), Ordering::Equal);
        assert_eq!(
            lex_compare(&DecreasingWord::empty(), &DecreasingWord::empty()),
            Ordering::Equal
        );
    }

    #[test]
    fn suffix_cut_examples() {
        assert_eq!(w("22").suffix_cut(), w("2"));
        assert_eq!(w("3").suffix_cut(), DecreasingWord::empty());
        assert_eq!(
            DecreasingWord::empty().suffix_cut(),
            DecreasingWord::empty()
        );
    }

    #[test]
    fn minimal_words_worked_example() {
        let got = minimal_words(&w("211"), 3);
        assert_eq!(got, vec![w("3"), w("22"), w("2110"), w("2111")]);
    }

    #[test]
    fn minimal_words_small_cases() {
        assert_eq!(minimal_words(&w("0"), 0), vec![w("00")]);
        assert!(minimal_words(&w("3"), 2).is_empty());
    }

    #[test]
    fn is_minimal_examples() {
        assert!(is_minimal(&w("22"), &w("211")));
        assert!(!is_minimal(&w("21110"), &w("211")));
        assert!(!is_minimal(&w("211"), &w("211")));
    }

    #[test]
    fn rejects_increasing_letters() {
        assert!(matches!(
            DecreasingWord::new(vec![1, 2]),
            Err(WordError::NotDecreasing { position: 1, .. })
        ));
        assert!("1 2 1".parse::<DecreasingWord>().is_err());
        assert!("a".parse::<DecreasingWord>().is_err());
    }

    #[test]
    fn text_form() {
        assert_eq!(w("211").to_string(), "2 1 1");
        assert_eq!(DecreasingWord::empty().to_string(), "");
        assert_eq!(
            "".parse::<DecreasingWord>().unwrap(),
            DecreasingWord::empty()
        );
        assert_eq!("  2 1   1 ".parse::<DecreasingWord>().unwrap(), w("211"));
    }

    #[test]
    fn minimal_words_match_brute_force() {
        // Minimal words have length at most |bound| + 1, so enumerating
        // words up to that length is exhaustive.
        for n in 0..=4 {
            for bound in all_words(4, 4).into_iter().filter(|b| !b.is_empty()) {
                let got = minimal_words(&bound, n);
                if bound.first().unwrap() > n {
                    assert!(got.is_empty());
                    continue;
                }
                assert_eq!(got.len(), n + 1, "bound {bound}, n {n}");
                let mut expected: Vec<_> = all_words(n, bound.len() + 1)
                    .into_iter()
                    .filter(|c| is_minimal(c, &bound))
                    .collect();
                let mut sorted = got.clone();
                sorted.sort();
                expected.sort();
                assert_eq!(sorted, expected, "bound {bound}, n {n}");
            }
        }
    }

    #[test]
    fn lex_is_a_total_order() {
        let words = all_words(3, 4);
        for a in &words {
            for b in &words {
                let ab = lex_compare(a, b);
                assert_eq!(ab, lex_compare(b, a).reverse());
                assert_eq!(ab == Ordering::Equal, a == b);
            }
        }
        // transitivity on a thinned sample keeps this cheap
        let sample: Vec<_> = words.iter().step_by(3).collect();
        for a in &sample {
            for b in &sample {
                if lex_compare(a, b) != Ordering::Less {
                    continue;
                }
                for c in &sample {
                    if lex_compare(b, c) == Ordering::Less {
                        assert_eq!(lex_compare(a, c), Ordering::Less);
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn suffix_cut_never_increases(mut letters in prop::collection::vec(0usize..8, 0..8)) {
            letters.sort_unstable_by(|a, b| b.cmp(a));
            let word = DecreasingWord::new(letters).unwrap();
            prop_assert_ne!(lex_compare(&word.suffix_cut(), &word), Ordering::Greater);
        }

        #[test]
        fn text_round_trip(mut letters in prop::collection::vec(0usize..1000, 0..10)) {
            letters.sort_unstable_by(|a, b| b.cmp(a));
            let word = DecreasingWord::new(letters).unwrap();
            prop_assert_eq!(word.to_string().parse::<DecreasingWord>().unwrap(), word);
        }
    }
}
