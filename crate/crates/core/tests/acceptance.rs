//! Acceptance suite: one PASS/FAIL line per criterion.

mod common;

use std::collections::{BTreeSet, HashSet};
use std::hint::black_box;
use std::time::{Duration, Instant};

use common::{closed_subsets, random_hosts, worked_forest, TABLE};
use fdag::enumerate::{
    antecedent, enumerate_constrained, enumerate_forests, enumerate_steps, level_counts,
    max_vertices_at_height, random_fdag, successors, Constraint, ForestNode, Strategy,
};
use fdag::fishburn::{
    asymptotic_ratio, enumerate_matrices, from_matrix, matrix_counts, to_matrix, RowFishburnMatrix,
    BETA,
};
use fdag::patterns::{enumerate_subfdags, frequent_subfdags, origins_from_sources};
use fdag::{reduce, Fdag};
use num_rational::Ratio;

type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn table_reproduction() -> Outcome {
    let start = Instant::now();
    let counts = level_counts(7, Strategy::Incremental, false);
    let elapsed = start.elapsed();
    // independent check: materialize every FDAG of the first seven levels
    let mut by_level = vec![0u64; 8];
    let mut search = enumerate_steps(7);
    while let Some((_, depth)) = search.next_node() {
        by_level[depth] += 1;
    }
    let extended = level_counts(8, Strategy::Incremental, true);
    let pass = counts == TABLE[..=7]
        && by_level == TABLE[..=7]
        && elapsed < Duration::from_secs(60)
        && extended == TABLE;
    outcome(
        pass,
        format!(
            "counts {counts:?} in {elapsed:.2?}; k=8 gives {}",
            extended[8]
        ),
    )
}

fn bijection_cross_count() -> Outcome {
    let matrices = matrix_counts(6);
    let fdags = level_counts(6, Strategy::Copying, false);
    let small: Vec<Fdag> = enumerate_steps(5).collect();
    let fdag_ok = small
        .iter()
        .all(|d| from_matrix(&to_matrix(d)).as_ref() == Ok(d));
    let mats: Vec<RowFishburnMatrix> = enumerate_matrices(5).collect();
    let mat_ok = mats
        .iter()
        .all(|m| from_matrix(m).map(|d| to_matrix(&d)).as_ref() == Ok(m));
    let pass = matrices == fdags && fdag_ok && mat_ok && small.len() == 458 && mats.len() == 458;
    outcome(
        pass,
        format!(
            "matrix counts {matrices:?}; {} FDAGs and {} matrices round-trip",
            small.len(),
            mats.len()
        ),
    )
}

fn worked_example_fidelity() -> Outcome {
    let d = reduce(&worked_forest()).expect("irredundant");
    let words: Vec<String> = d
        .words()
        .iter()
        .map(|w| w.to_string().replace(' ', ""))
        .collect();
    let words_ok = words == ["", "0", "00", "000", "1", "211"];
    let lasts: Vec<String> = successors(&d)
        .iter()
        .map(|(_, s)| s.word(s.last_index()).to_string().replace(' ', ""))
        .collect();
    let succ_ok = lasts == ["2111", "2110", "4", "5", "3", "22", "2110", "2111"];
    let m = to_matrix(&d);
    let fig = RowFishburnMatrix::from_rows(vec![
        vec![0, 0, 1, 2, 0],
        vec![0, 0, 0, 1, 0],
        vec![0, 0, 0, 0, 1],
        vec![0, 0, 0, 0, 1],
        vec![0, 0, 0, 0, 1],
    ])
    .expect("row-Fishburn");
    let subs = enumerate_subfdags(&d).count();
    let pass = words_ok && succ_ok && m == fig && m.size() == 7 && subs == 16;
    outcome(
        pass,
        format!(
            "words {words:?}; successors {lasts:?}; size {}; {subs} subFDAGs",
            m.size()
        ),
    )
}

fn inverse_rule() -> Outcome {
    let mut checked = 0usize;
    let mut bad = 0usize;
    for d in enumerate_steps(5) {
        for (e, s) in successors(&d) {
            checked += 1;
            if antecedent(&s) != Ok((d.clone(), e.rule())) {
                bad += 1;
            }
        }
    }
    outcome(
        bad == 0,
        format!("{checked} successor pairs, {bad} mismatches"),
    )
}

fn random_corpus() -> Vec<Fdag> {
    (1..=100u64)
        .flat_map(|k| (0..10u64).map(move |rep| random_fdag(k as usize, k * 100 + rep)))
        .collect()
}

fn successor_bounds(corpus: &[Fdag]) -> Outcome {
    let bad = corpus
        .iter()
        .filter(|d| {
            let n = d.len();
            let s = successors(d).len();
            !(n + 1..=2 * n - 1).contains(&s)
        })
        .count();
    outcome(
        bad == 0,
        format!("{} random FDAGs, {bad} outside [n+1, 2n-1]", corpus.len()),
    )
}

fn binomial(n: u64, k: u64) -> u64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn redundancy_count() -> Outcome {
    let mut rows = Vec::new();
    let mut pass = true;
    for d in [Fdag::trivial(), common::dag(&["", "0"])] {
        let n = d.last_index() as u64;
        for k in 0..=5u64 {
            let start = ForestNode {
                frozen: true,
                ..ForestNode::unfrozen(d.clone())
            };
            let got = enumerate_forests(start, k as usize).len() as u64 - 1;
            let want = binomial(n + 1 + k, k) - 1;
            pass &= got == want;
            rows.push(got);
        }
    }
    outcome(pass, format!("counts {rows:?}"))
}

fn finiteness() -> Outcome {
    let start = Instant::now();
    let mut best = [0u128; 3];
    let mut total = 0usize;
    for d in enumerate_constrained(Constraint::height_outdegree(2, 2)).expect("finite") {
        total += 1;
        for (h, slot) in best.iter_mut().enumerate() {
            *slot = (*slot).max(d.heights().iter().filter(|&&x| x == h).count() as u128);
        }
    }
    let bounds: Vec<u128> = (0..3)
        .map(|h| max_vertices_at_height(h, 2).expect("small"))
        .collect();
    let pass = best.iter().zip(&bounds).all(|(b, n)| b <= n) && bounds[2] == 7;
    outcome(
        pass,
        format!(
            "{total} FDAGs in {:.2?}; maxima {best:?} vs bounds {bounds:?}",
            start.elapsed()
        ),
    )
}

fn mining_oracle() -> Outcome {
    let sigmas = [
        Ratio::new(0u64, 1),
        Ratio::new(1, 3),
        Ratio::new(1, 2),
        Ratio::new(1, 1),
    ];
    let hosts = random_hosts(50, 12);
    let mut bad = 0usize;
    for d in &hosts {
        let o = origins_from_sources(d);
        let n_trees = d.sources().len();
        let subsets = closed_subsets(d);
        for &sigma in &sigmas {
            let got: HashSet<Vec<usize>> = frequent_subfdags(d, &o, n_trees, sigma)
                .map(|s| s.delta)
                .collect();
            let want: HashSet<Vec<usize>> = subsets
                .iter()
                .filter(|set| {
                    let omega: BTreeSet<usize> = (0..n_trees)
                        .filter(|t| set.iter().all(|&v| o[v].contains(t)))
                        .collect();
                    !omega.is_empty() && Ratio::new(omega.len() as u64, n_trees as u64) >= sigma
                })
                .cloned()
                .collect();
            bad += usize::from(got != want);
        }
    }
    outcome(
        bad == 0,
        format!(
            "{} hosts x {} thresholds, {bad} mismatches",
            hosts.len(),
            sigmas.len()
        ),
    )
}

fn asymptotic_sanity() -> Outcome {
    let counts = level_counts(8, Strategy::Incremental, true);
    let ratios: Vec<f64> = (4..=8u32)
        .map(|k| asymptotic_ratio(k, counts[k as usize]))
        .collect();
    let increasing = ratios.windows(2).all(|w| w[0] < w[1]);
    let last = ratios[4];
    let pass = (1.15..=1.30).contains(&last) && increasing && ratios.iter().all(|&r| r < BETA);
    let shown: Vec<String> = ratios.iter().map(|r| format!("{r:.4}")).collect();
    outcome(
        pass,
        format!("ratios k=4..8 [{}], beta {BETA}", shown.join(", ")),
    )
}

/// Least-squares slope of log(time) on log(#D * deg(D)).
fn scaling_trend(corpus: &[Fdag]) -> Outcome {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for d in corpus {
        let size = (d.len() * d.outdegree().max(1)) as f64;
        let mut best = Duration::MAX;
        for _ in 0..7 {
            let start = Instant::now();
            for _ in 0..5 {
                black_box(successors(black_box(d)));
            }
            best = best.min(start.elapsed());
        }
        xs.push(size.ln());
        ys.push((best.as_nanos().max(1) as f64 / 5.0).ln());
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let slope = sxy / sxx;
    outcome(
        slope <= 2.3,
        format!(
            "log-log slope {slope:.3} over {} FDAGs (limit 2.3)",
            xs.len()
        ),
    )
}

fn main() {
    let corpus = random_corpus();
    let criteria: Vec<Criterion> = vec![
        ("table reproduction", Box::new(table_reproduction)),
        ("bijection cross-count", Box::new(bijection_cross_count)),
        ("worked-example fidelity", Box::new(worked_example_fidelity)),
        ("inverse rule", Box::new(inverse_rule)),
        ("successor bounds", Box::new(|| successor_bounds(&corpus))),
        ("redundancy count", Box::new(redundancy_count)),
        ("finiteness", Box::new(finiteness)),
        ("mining oracle", Box::new(mining_oracle)),
        ("asymptotic sanity", Box::new(asymptotic_sanity)),
        ("scaling trend", Box::new(|| scaling_trend(&corpus))),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("[{tag}] criterion {:>2} {name}: {}", i + 1, o.detail);
        failed += usize::from(!o.pass);
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
