//! CSV measurements over a corpus of random FDAGs: `reps` walks for each
//! step count `1..=max_steps`, drawn from one seeded generator.

use std::hint::black_box;
use std::io::Write;
use std::time::Instant;

use anyhow::Result;
use clap::{Args, ValueEnum};
use fdag::enumerate::{random_fdag_with, seeded_rng, successors};
use fdag::patterns::mining_quotient;
use fdag::Fdag;

#[derive(Clone, Copy, ValueEnum)]
pub enum Kind {
    /// `vertices,successors`
    Successors,
    /// `vertices,total_ns,amortized`: time to build all successors by copying.
    Delay,
    /// `vertices,Q`
    Quotient,
}

#[derive(Args)]
pub struct Corpus {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    max_steps: usize,
    #[arg(long, default_value_t = 10)]
    reps: usize,
}

fn corpus(c: &Corpus) -> Vec<Fdag> {
    let mut rng = seeded_rng(c.seed);
    (1..=c.max_steps)
        .flat_map(|k| (0..c.reps).map(move |_| k))
        .map(|k| random_fdag_with(k, &mut rng))
        .collect()
}

pub fn run(kind: Kind, c: &Corpus, out: &mut dyn Write) -> Result<()> {
    let dags = corpus(c);
    match kind {
        Kind::Successors => {
            writeln!(out, "vertices,successors")?;
            for d in &dags {
                writeln!(out, "{},{}", d.len(), successors(d).len())?;
            }
        }
        Kind::Delay => {
            writeln!(out, "vertices,total_ns,amortized")?;
            for d in &dags {
                let start = Instant::now();
                let n = black_box(successors(black_box(d))).len();
                let total = start.elapsed().as_nanos();
                writeln!(out, "{},{},{:.1}", d.len(), total, total as f64 / n as f64)?;
            }
        }
        Kind::Quotient => {
            writeln!(out, "vertices,Q")?;
            for d in &dags {
                let q = mining_quotient(d);
                writeln!(
                    out,
                    "{},{:.6}",
                    d.len(),
                    *q.numer() as f64 / *q.denom() as f64
                )?;
            }
        }
    }
    Ok(())
}
