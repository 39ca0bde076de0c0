use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use pentile::algebra::{simplify, EquationSystem, Simplified};
use pentile::blockforms::{list_block_forms, parse_catalog, LabeledBlock};
use pentile::boundary::{enumerate_partitions, PartitionedCode};
use pentile::isohedral::{filter_with, lookup, Lemmas};
use pentile::matcher::Corona;
use pentile::pipeline::{parse_assignment, read_jsonl, run_search, Outcome, RunConfig, SearchRecord};
use pentile::realizability::{realize, triage_untyped, RealizabilityVerdict};
use pentile::render::{render_block, render_pentagon};
use pentile::report::{report, sorted_labels};
use pentile::species::{enumerate_species, node_bounds};

#[derive(Parser)]
#[command(name = "pentile", about = "Search for convex pentagons admitting i-block transitive tilings")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Block species solving the valence equation.
    Species {
        #[arg(long)]
        i: u32,
        #[arg(long)]
        n: Option<u32>,
    },
    /// Species with their surviving topological types and elimination reasons.
    FilterTypes {
        #[arg(long)]
        i: u32,
        #[arg(long)]
        n: Option<u32>,
    },
    /// Block forms of a catalog.
    Forms {
        #[arg(long)]
        i: u32,
        #[arg(long)]
        forms: Option<PathBuf>,
    },
    /// Partitioned boundary codes of a boundary code such as 2111211111.
    Partitions {
        code: String,
        #[arg(long, default_value_t = 2)]
        i: u32,
    },
    /// Runs the full search and writes JSONL records to --out.
    Search {
        #[arg(long)]
        i: u32,
        #[arg(long)]
        n: Option<u32>,
        #[arg(long)]
        forms: Option<PathBuf>,
        #[arg(long)]
        ih_db: Option<PathBuf>,
        /// Restrict to these block forms.
        #[arg(long = "form")]
        form_names: Vec<String>,
        /// Restrict to these isohedral types.
        #[arg(long = "ih")]
        ih_names: Vec<String>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        resume: bool,
        #[arg(long)]
        tolerance_residual: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Realizability and triage of a system such as "A=π/2, C=π/2, a=b".
    Realize { system: String },
    /// SVG of a pentagon satisfying a system, or of a search record's block and corona.
    Render {
        #[arg(long, conflicts_with_all = ["run", "key"])]
        system: Option<String>,
        #[arg(long, requires = "key")]
        run: Option<PathBuf>,
        #[arg(long, requires = "run")]
        key: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Tables of a finished run.
    Report {
        #[arg(long)]
        run: PathBuf,
    },
}

// Writes to stdout, returning errors (such as a closed pipe) instead of panicking.
macro_rules! out {
    ($($t:tt)*) => {{
        use std::io::Write;
        write!(std::io::stdout().lock(), $($t)*)?
    }};
}
macro_rules! outln {
    ($($t:tt)*) => {{
        use std::io::Write;
        writeln!(std::io::stdout().lock(), $($t)*)?
    }};
}

type Res = Result<(), Box<dyn std::error::Error>>;

fn n_range(i: u32, n: Option<u32>) -> Result<Vec<u32>, Box<dyn std::error::Error>> {
    let (lo, hi) = node_bounds(i as i64)?;
    Ok(match n {
        Some(n) => vec![n],
        None => (lo..=hi).collect(),
    })
}

fn reduce(text: &str) -> Result<pentile::algebra::ReducedSystem, Box<dyn std::error::Error>> {
    match simplify(&EquationSystem::parse(text)?) {
        Simplified::Reduced(r) => Ok(r),
        other => Err(format!("system is not consistent and convex: {other:?}").into()),
    }
}

fn witness(text: &str) -> Result<pentile::realizability::ClosureInstance, Box<dyn std::error::Error>> {
    match realize(&reduce(text)?).verdict {
        RealizabilityVerdict::Feasible { witness, .. } => Ok(witness),
        other => Err(format!("no pentagon to draw: {other:?}").into()),
    }
}

fn run(cli: Cli) -> Res {
    match cli.cmd {
        Cmd::Species { i, n } => {
            for n in n_range(i, n)? {
                for s in enumerate_species(i as i64, n)? {
                    outln!("{i} {n} {s}");
                }
            }
        }
        Cmd::FilterTypes { i, n } => {
            for n in n_range(i, n)? {
                for s in enumerate_species(i as i64, n)? {
                    let r = filter_with(&s, Lemmas::ALL);
                    let kept: Vec<String> = r.kept.iter().map(|t| t.to_string()).collect();
                    let gone: Vec<String> = r.eliminated.iter().map(|(t, why)| format!("{t} {why:?}")).collect();
                    let kept = if kept.is_empty() { "-".to_string() } else { kept.join(", ") };
                    outln!("{i} {n} {s}: {kept}  (eliminated: {})", gone.join("; "));
                }
            }
        }
        Cmd::Forms { i, forms } => {
            let list = match forms {
                Some(p) => parse_catalog(&std::fs::read_to_string(p)?)?.into_iter().filter(|f| f.i() == i).collect(),
                None => list_block_forms(i)?.iter().map(|f| (**f).clone()).collect::<Vec<_>>(),
            };
            for f in list {
                outln!("{} n={} cells={:?} code={}", f.name, f.n(), f.cells, f.code_string());
            }
        }
        Cmd::Partitions { code, i } => {
            let digits: Vec<u32> = code.chars().map(|c| c.to_digit(10).ok_or("code must be digits")).collect::<Result<_, _>>()?;
            for p in enumerate_partitions(&digits, i) {
                outln!("{p}");
            }
        }
        Cmd::Search { i, n, forms, ih_db, form_names, ih_names, jobs, out, resume, tolerance_residual, seed } => {
            let mut cfg = RunConfig::new(i, out);
            cfg.n = n;
            cfg.forms_file = forms;
            cfg.ih_db = ih_db;
            cfg.forms = (!form_names.is_empty()).then_some(form_names);
            cfg.ih = (!ih_names.is_empty()).then_some(ih_names);
            cfg.jobs = jobs;
            cfg.resume = resume;
            cfg.seed = seed;
            if let Some(t) = tolerance_residual {
                cfg.residual_tol = t;
            }
            let s = run_search(&cfg)?;
            for (n, t) in &s.per_n {
                outln!("n={n}: types {}", sorted_labels(&t.types).join(","));
            }
            outln!("outcomes: {:?}", s.outcomes);
            if !s.unresolved.is_empty() {
                outln!("unresolved: {}", s.unresolved.len());
            }
        }
        Cmd::Realize { system } => {
            let rep = triage_untyped(&reduce(&system)?);
            outln!("{}", serde_json::to_string_pretty(&rep)?);
        }
        Cmd::Render { system, run, key, out } => {
            let svg = match (system, run, key) {
                (Some(text), _, _) => render_pentagon(&witness(&text)?)?,
                (None, Some(dir), Some(key)) => {
                    let records: Vec<SearchRecord> = read_jsonl(&dir.join("candidates.jsonl"))?;
                    let r = records.iter().find(|r| r.key.starts_with(&key)).ok_or("no record with that key")?;
                    let Outcome::Reduced { system, .. } = &r.outcome else {
                        return Err("record has no consistent system".into());
                    };
                    let i: u32 = r.form[..1].parse()?;
                    let form = list_block_forms(i)?.into_iter().find(|f| f.name == r.form).ok_or("unknown form")?;
                    let labeled = LabeledBlock::from_key(&form, &r.labeling).ok_or("bad labeling")?;
                    let part: PartitionedCode = r.partition.parse()?;
                    let a = parse_assignment(&r.assignment).ok_or("bad assignment")?;
                    let corona = Corona::build(&form, &part, lookup(&r.ih)?, a, i).ok_or("assignment no longer valid")?;
                    render_block(&corona, &labeled, &witness(system)?)?
                }
                _ => return Err("give --system, or --run with --key".into()),
            };
            std::fs::write(out, svg)?;
        }
        Cmd::Report { run } => out!("{}", report(&run)?),
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) if e.downcast_ref::<std::io::Error>().is_some_and(|e| e.kind() == std::io::ErrorKind::BrokenPipe) => {
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
