use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use qdecomp::abacus::{render_abacus, RenderOptions};
use qdecomp::blocks::VerificationReport;
use qdecomp::cache::CacheFile;
use qdecomp::suites;
use qdecomp::{BetaSet, CanonicalEngine, Partition, RunnerTuple};

const CACHE_ENV: &str = "QDECOMP_CACHE";

/// q-decomposition numbers of the level-one Fock space.
#[derive(Parser)]
#[command(name = "qdecomp", version)]
struct Cli {
    /// Column cache to preload when it exists.
    #[arg(long, global = true, env = CACHE_ENV)]
    cache: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the canonical basis column G(μ) as λ: d_{λμ}(q).
    Column {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        mu: Partition,
        #[arg(long, value_enum, default_value_t = ColumnFormat::Text)]
        format: ColumnFormat,
    },
    /// Print the decomposition matrix for partitions of one size.
    Dmatrix {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        size: usize,
        #[arg(long, value_enum, default_value_t = MatrixFormat::Csv)]
        format: MatrixFormat,
    },
    /// Draw β_s(μ) on the n-abacus.
    Abacus {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        mu: Partition,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        s: i64,
        /// Runner tuple, e.g. `4,2,3`.
        #[arg(long, value_delimiter = ',')]
        runners: Option<Vec<usize>>,
        /// Row range `lo..hi`, e.g. `-2..2`.
        #[arg(long, allow_hyphen_values = true)]
        rows: Option<String>,
    },
    /// Run a verification suite and print its JSON report.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long, value_delimiter = ',')]
        n: Option<Vec<usize>>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        s: Option<Vec<i64>>,
        /// Number of sections in the runner tuples.
        #[arg(long, value_delimiter = ',')]
        r: Option<Vec<usize>>,
        #[arg(long, default_value_t = 6)]
        max_size: usize,
        /// Residues moved at once by the `moves` suite.
        #[arg(long, default_value_t = 2)]
        max_residues: usize,
    },
    /// Manage the persistent column cache.
    Cache {
        #[arg(long, env = CACHE_ENV)]
        file: PathBuf,
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Subcommand)]
enum CacheAction {
    /// Compute every column up to the given size and write the cache.
    Warm {
        #[arg(long, value_delimiter = ',')]
        n: Vec<usize>,
        #[arg(long)]
        max_size: usize,
    },
    /// Print column counts.
    Stats,
    /// Print the cache in canonical JSON.
    Export,
}

#[derive(Clone, Copy, ValueEnum)]
enum ColumnFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum MatrixFormat {
    Csv,
    Json,
    Latex,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Relations,
    Canonical,
    Bar,
    Decomp,
    Runner,
    Fk,
    Lbt,
    Moves,
    Branching,
    Determinism,
}

fn read_cache(path: &Path) -> anyhow::Result<CacheFile> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    CacheFile::from_json(&text).with_context(|| format!("loading {}", path.display()))
}

fn engine_for(cache: Option<&Path>) -> anyhow::Result<CanonicalEngine> {
    let engine = CanonicalEngine::new();
    if let Some(path) = cache.filter(|p| p.exists()) {
        read_cache(path)?.load_into(&engine)?;
    }
    Ok(engine)
}

fn parse_rows(text: &str) -> anyhow::Result<(i64, i64)> {
    let (lo, hi) = text.split_once("..").context("rows must look like lo..hi")?;
    let (lo, hi): (i64, i64) = (lo.trim().parse()?, hi.trim().parse()?);
    if lo > hi {
        bail!("empty row range {text}");
    }
    Ok((lo, hi))
}

fn run_suite(
    engine: &CanonicalEngine,
    suite: Suite,
    ns: Option<Vec<usize>>,
    ss: Option<Vec<i64>>,
    rs: Option<Vec<usize>>,
    max_size: usize,
    max_residues: usize,
) -> qdecomp::Result<VerificationReport> {
    let ss = ss.unwrap_or_else(|| vec![0, 1]);
    let ns_or = |d: &[usize]| ns.clone().unwrap_or_else(|| d.to_vec());
    let single = |d: usize| ns.as_ref().and_then(|v| v.first().copied()).unwrap_or(d);
    match suite {
        Suite::Relations => suites::relations(&ns_or(&[2, 3]), &ss, max_size),
        Suite::Canonical => {
            let mut all = VerificationReport::new("canonical column invariants", json!({"max_size": max_size}));
            for n in ns_or(&[2, 3]) {
                all.absorb(suites::canonical_invariants(engine, n, max_size)?);
            }
            Ok(all)
        }
        Suite::Bar => suites::bar_symmetry(engine, &ns_or(&[2, 3]), &ss, max_size),
        Suite::Decomp => suites::decomp(engine, &ns_or(&[3, 4]), &ss, max_size),
        Suite::Runner => suites::runner(
            engine,
            &ns_or(&[3, 4]),
            &rs.unwrap_or_else(|| vec![2, 3]),
            &ss,
            max_size,
        ),
        Suite::Fk => suites::fk(engine, &ss, max_size),
        Suite::Lbt => suites::lbt(engine, &ns_or(&[3, 5]), max_size),
        Suite::Moves => suites::moves(engine, single(5), max_size, max_residues),
        Suite::Branching => suites::branching(engine, single(5), max_size),
        Suite::Determinism => suites::determinism(engine, &ns_or(&[2, 3]), max_size),
    }
}

fn run(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.command {
        Command::Column { n, mu, format } => {
            let engine = engine_for(cli.cache.as_deref())?;
            let col = engine.column(&mu, n)?;
            match format {
                ColumnFormat::Text => {
                    for (l, c) in col.sorted_desc() {
                        println!("{l}: {c}");
                    }
                }
                ColumnFormat::Json => {
                    let entries: Vec<_> = col.sorted_desc();
                    println!("{}", json!({"n": n, "mu": mu, "entries": entries}));
                }
            }
        }
        Command::Dmatrix { n, size, format } => {
            let engine = engine_for(cli.cache.as_deref())?;
            let m = engine.decomposition_matrix(n, size)?;
            match format {
                MatrixFormat::Csv => print!("{}", m.to_csv()),
                MatrixFormat::Json => println!("{}", m.to_json()),
                MatrixFormat::Latex => print!("{}", m.to_latex()),
            }
        }
        Command::Abacus {
            n,
            mu,
            s,
            runners,
            rows,
        } => {
            if n == 0 {
                bail!("n must be positive");
            }
            let sections = match runners {
                Some(parts) => {
                    let nt = RunnerTuple::new(parts)?;
                    if nt.n() != n {
                        bail!("runner tuple {nt} does not sum to n = {n}");
                    }
                    Some(nt)
                }
                None => None,
            };
            let rows = rows.as_deref().map(parse_rows).transpose()?;
            print!(
                "{}",
                render_abacus(&BetaSet::from_partition(&mu, s), n, &RenderOptions { rows, sections })
            );
        }
        Command::Verify {
            suite,
            n,
            s,
            r,
            max_size,
            max_residues,
        } => {
            let engine = engine_for(cli.cache.as_deref())?;
            let report = run_suite(&engine, suite, n, s, r, max_size, max_residues)?;
            let mut out = serde_json::to_value(&report)?;
            out["passed"] = json!(report.passed());
            println!("{}", serde_json::to_string_pretty(&out)?);
            if !report.passed() {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Cache { file, action } => match action {
            CacheAction::Warm { n, max_size } => {
                let engine = engine_for(Some(&file))?;
                for &k in &n {
                    for m in 0..=max_size {
                        engine.decomposition_matrix(k, m)?;
                    }
                }
                let text = CacheFile::from_engine(&engine).to_json();
                fs::write(&file, text).with_context(|| format!("writing {}", file.display()))?;
                let stats = engine.stats();
                println!(
                    "{}",
                    json!({"columns": stats.columns, "computed": stats.misses, "file": file})
                );
            }
            CacheAction::Stats => {
                let cache = read_cache(&file)?;
                let mut by_n: BTreeMap<usize, usize> = BTreeMap::new();
                let mut max_size = 0;
                for e in &cache.entries {
                    *by_n.entry(e.n).or_default() += 1;
                    max_size = max_size.max(e.mu.size());
                }
                println!(
                    "{}",
                    json!({"version": cache.version, "columns": cache.entries.len(), "by_n": by_n, "max_size": max_size})
                );
            }
            CacheAction::Export => print!("{}", read_cache(&file)?.to_json()),
        },
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
