mod bench;

use std::fs::File;
use std::io::{self, BufWriter, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use fdag::dag::parse_fdag_stream;
use fdag::enumerate::{
    enumerate_constrained, level_counts, random_fdag_with, seeded_rng, Constraint, Strategy,
};
use fdag::fishburn::{enumerate_matrices, from_matrix, parse_matrix_stream, to_matrix};
use fdag::patterns::{enumerate_subfdags, frequent_subfdags, mining_quotient, origins};
use fdag::{parse_forest, reduce_with_roots, Fdag, Tree};
use num_rational::Ratio;

#[derive(Parser)]
#[command(
    name = "fdag",
    version,
    about = "Enumerate and mine DAG-compressed forests of unordered trees"
)]
struct Cli {
    /// Write output here instead of stdout (`-` is stdout).
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List FDAGs under the given bounds.
    Enumerate {
        #[command(flatten)]
        bounds: Bounds,
        #[arg(long, value_enum, default_value_t = Format::Fdag)]
        format: Format,
    },
    /// Print the number of FDAGs at each step count, comma separated.
    Count {
        #[arg(long)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = StrategyArg::Incremental)]
        strategy: StrategyArg,
        #[arg(long)]
        parallel: bool,
    },
    /// Compress a forest file (one tree per line) into an FDAG.
    Compress { input: PathBuf },
    /// Expand FDAG records into a forest file.
    Expand { input: PathBuf },
    /// Check that FDAG records are in canonical order.
    Validate {
        #[arg(default_value = "-")]
        input: PathBuf,
    },
    /// List every subFDAG of an FDAG.
    Subfdags { input: PathBuf },
    /// Mine subFDAGs of a forest present in at least a fraction sigma of its trees.
    Mine {
        input: PathBuf,
        #[arg(long, value_parser = parse_sigma)]
        sigma: Ratio<u64>,
    },
    /// Mining quotient of an FDAG whose sources are taken as the trees.
    Quotient { input: PathBuf },
    /// Random FDAGs by uniform successor walks from the trivial one.
    Random {
        #[arg(long)]
        steps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, value_enum, default_value_t = Format::Fdag)]
        format: Format,
    },
    /// Row-Fishburn matrix conversions and enumeration.
    #[command(subcommand)]
    Fishburn(FishburnCommand),
    /// CSV measurements over a random corpus.
    Bench {
        #[arg(value_enum)]
        kind: bench::Kind,
        #[command(flatten)]
        corpus: bench::Corpus,
    },
}

#[derive(Subcommand)]
enum FishburnCommand {
    ToMatrix {
        input: PathBuf,
    },
    FromMatrix {
        input: PathBuf,
    },
    Enumerate {
        #[arg(long)]
        max_size: u64,
    },
}

#[derive(Args)]
struct Bounds {
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long)]
    max_vertices: Option<usize>,
    #[arg(long)]
    max_outdegree: Option<usize>,
    #[arg(long)]
    max_height: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    /// `fdag 1` records separated by blank lines.
    Fdag,
    /// One `word;word;...` line per FDAG.
    Line,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Incremental,
    Copying,
}

fn parse_sigma(s: &str) -> Result<Ratio<u64>, String> {
    let r: Ratio<u64> = s
        .parse()
        .map_err(|_| format!("expected p/q, found {s:?}"))?;
    if r > Ratio::from_integer(1) {
        return Err("sigma must lie in [0, 1]".into());
    }
    Ok(r)
}

struct Input {
    name: String,
    text: String,
}

fn read_input(path: &PathBuf) -> Result<Input> {
    let mut text = String::new();
    if path.as_os_str() == "-" {
        io::stdin()
            .read_to_string(&mut text)
            .context("reading stdin")?;
        return Ok(Input {
            name: "<stdin>".into(),
            text,
        });
    }
    File::open(path)
        .and_then(|mut f| f.read_to_string(&mut text))
        .with_context(|| format!("reading {}", path.display()))?;
    Ok(Input {
        name: path.display().to_string(),
        text,
    })
}

fn read_fdags(path: &PathBuf) -> Result<Vec<Fdag>> {
    let input = read_input(path)?;
    let dags = parse_fdag_stream(&input.text)
        .map_err(|e| anyhow!("{}:{}: {}", input.name, e.line, e.message))?;
    if dags.is_empty() {
        return Err(anyhow!("{}: no FDAG record found", input.name));
    }
    Ok(dags)
}

fn read_single_fdag(path: &PathBuf) -> Result<Fdag> {
    let mut dags = read_fdags(path)?;
    if dags.len() > 1 {
        return Err(anyhow!(
            "{}: expected one FDAG record, found {}",
            path.display(),
            dags.len()
        ));
    }
    Ok(dags.remove(0))
}

fn read_forest(path: &PathBuf) -> Result<(String, Vec<Tree>)> {
    let input = read_input(path)?;
    let forest = parse_forest(&input.text).map_err(|e| anyhow!("{}:{}", input.name, e))?;
    Ok((input.name, forest))
}

fn write_fdag(out: &mut dyn Write, d: &Fdag, format: Format, first: bool) -> io::Result<()> {
    match format {
        Format::Fdag => {
            if !first {
                writeln!(out)?;
            }
            write!(out, "{d}")
        }
        Format::Line => writeln!(out, "{}", d.to_line()),
    }
}

fn vertex_list(vs: &[usize]) -> String {
    vs.iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

/// Errors that are the caller's fault rather than the input's.
#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn run(cli: Cli) -> Result<()> {
    let mut out: Box<dyn Write> = match &cli.output {
        Some(p) if p.as_os_str() != "-" => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        _ => Box::new(BufWriter::new(io::stdout().lock())),
    };
    match cli.command {
        Command::Enumerate { bounds, format } => {
            let c = Constraint {
                max_steps: bounds.steps,
                max_vertices: bounds.max_vertices,
                max_outdegree: bounds.max_outdegree,
                max_height: bounds.max_height,
            };
            let mut search = enumerate_constrained(c).map_err(|e| UsageError(e.to_string()))?;
            let mut first = true;
            while let Some((d, _)) = search.next_node() {
                write_fdag(&mut out, d, format, first)?;
                first = false;
            }
        }
        Command::Count {
            steps,
            strategy,
            parallel,
        } => {
            let strategy = match strategy {
                StrategyArg::Incremental => Strategy::Incremental,
                StrategyArg::Copying => Strategy::Copying,
            };
            let counts = level_counts(steps, strategy, parallel);
            let cells: Vec<String> = counts.iter().map(u64::to_string).collect();
            writeln!(out, "{}", cells.join(","))?;
        }
        Command::Compress { input } => {
            let (name, forest) = read_forest(&input)?;
            let r = reduce_with_roots(&forest).map_err(|e| anyhow!("{name}: {e}"))?;
            write!(out, "{}", r.dag)?;
        }
        Command::Expand { input } => {
            for d in read_fdags(&input)? {
                for t in d.expand() {
                    writeln!(out, "{t}")?;
                }
            }
        }
        Command::Validate { input } => {
            read_fdags(&input)?;
            writeln!(out, "ok")?;
        }
        Command::Subfdags { input } => {
            let d = read_single_fdag(&input)?;
            let mut count = 0usize;
            for s in enumerate_subfdags(&d) {
                let line = format!("{} | {}", vertex_list(&s.delta), s.subfdag(&d).to_line());
                writeln!(out, "{}", line.trim_end())?;
                count += 1;
            }
            writeln!(out, "count {count}")?;
        }
        Command::Mine { input, sigma } => {
            let (name, forest) = read_forest(&input)?;
            let r = reduce_with_roots(&forest).map_err(|e| anyhow!("{name}: {e}"))?;
            let o = origins(&r.dag, &r.roots);
            let n = forest.len();
            let mut count = 0usize;
            for s in frequent_subfdags(&r.dag, &o, n, sigma) {
                let line = format!(
                    "{}/{n} {} | {}",
                    s.origin.len(),
                    vertex_list(&s.delta),
                    s.subfdag(&r.dag).to_line()
                );
                writeln!(out, "{}", line.trim_end())?;
                count += 1;
            }
            writeln!(out, "count {count}")?;
        }
        Command::Quotient { input } => {
            let d = read_single_fdag(&input)?;
            writeln!(out, "{}", mining_quotient(&d))?;
        }
        Command::Random {
            steps,
            seed,
            count,
            format,
        } => {
            let mut rng = seeded_rng(seed);
            for i in 0..count {
                let d = random_fdag_with(steps, &mut rng);
                write_fdag(&mut out, &d, format, i == 0)?;
            }
        }
        Command::Fishburn(FishburnCommand::ToMatrix { input }) => {
            for (i, d) in read_fdags(&input)?.iter().enumerate() {
                if i > 0 {
                    writeln!(out)?;
                }
                write!(out, "{}", to_matrix(d))?;
            }
        }
        Command::Fishburn(FishburnCommand::FromMatrix { input }) => {
            let src = read_input(&input)?;
            let matrices = parse_matrix_stream(&src.text)
                .map_err(|e| anyhow!("{}:{}: {}", src.name, e.line, e.message))?;
            for (i, m) in matrices.iter().enumerate() {
                let d =
                    from_matrix(m).map_err(|e| anyhow!("{}: matrix {}: {e}", src.name, i + 1))?;
                write_fdag(&mut out, &d, Format::Fdag, i == 0)?;
            }
        }
        Command::Fishburn(FishburnCommand::Enumerate { max_size }) => {
            for (i, m) in enumerate_matrices(max_size).enumerate() {
                if i > 0 {
                    writeln!(out)?;
                }
                write!(out, "{m}")?;
            }
        }
        Command::Bench { kind, corpus } => bench::run(kind, &corpus, &mut out)?,
    }
    out.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if e.downcast_ref::<io::Error>()
                .is_some_and(|io| io.kind() == io::ErrorKind::BrokenPipe)
            {
                return ExitCode::SUCCESS;
            }
            eprintln!("error: {e:#}");
            if e.downcast_ref::<UsageError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::FAILURE
            }
        }
    }
}
