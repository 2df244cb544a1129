#![allow(dead_code)]

use fdag::{enumerate::random_fdag, parse_tree, DecreasingWord, Fdag, Tree};

pub const TABLE: [u64; 9] = [1, 1, 3, 12, 61, 380, 2815, 24213, 237348];

pub fn dag(words: &[&str]) -> Fdag {
    Fdag::from_child_words(
        words
            .iter()
            .map(|s| s.parse::<DecreasingWord>().unwrap())
            .collect(),
    )
    .unwrap()
}

pub fn worked_example() -> Fdag {
    dag(&["", "0", "0 0", "0 0 0", "1", "2 1 1"])
}

pub fn worked_forest() -> Vec<Tree> {
    ["((()))", "((())(())(()()))", "(()()())"]
        .iter()
        .map(|s| parse_tree(s).unwrap())
        .collect()
}

/// Children-closed vertex subsets containing the leaf, by exhaustive search.
pub fn closed_subsets(d: &Fdag) -> Vec<Vec<usize>> {
    let n = d.len();
    assert!(n <= 20);
    let mut out = Vec::new();
    for mask in 0u32..(1 << (n - 1)) {
        let set: Vec<usize> = std::iter::once(0)
            .chain((1..n).filter(|&v| mask >> (v - 1) & 1 == 1))
            .collect();
        let mut member = vec![false; n];
        set.iter().for_each(|&v| member[v] = true);
        if set.iter().all(|&v| d.word(v).iter().all(|c| member[c])) {
            out.push(set);
        }
    }
    out
}

/// Random FDAGs with between 2 and `max_vertices` vertices.
pub fn random_hosts(count: usize, max_vertices: usize) -> Vec<Fdag> {
    let mut out = Vec::new();
    let mut seed = 0u64;
    while out.len() < count {
        let steps = 2 + (seed % 15) as usize;
        let d = random_fdag(steps, seed);
        seed += 1;
        if d.len() >= 2 && d.len() <= max_vertices {
            out.push(d);
        }
    }
    out
}
