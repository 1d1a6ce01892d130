use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use densub_core::constructions::{gen_deletion_construction, gen_sparse_random, DeletionSpec, SparseRandomSpec};
use densub_core::census::census;
use densub_core::io::{format_edge_list, read_graph, write_edge_list};
use densub_core::oracles::min_dense_size;
use densub_core::rational::{self, parse_ratio};
use densub_core::report::{CensusRecord, DensityRecord, GenerationRecord};
use densub_core::sweep::{run_sweep, write_csv};
use densub_core::{
    build_caterpillar, extract_dense_subgraph, extract_min_degree_subgraph, Criterion, DensityReport, Error,
    ExtractOptions, Graph, OracleBudget, Ratio, SparsityMode, SweepConfig,
};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "densub", version, about = "Find small subgraphs of large average degree")]
struct Cli {
    #[command(flatten)]
    shared: Shared,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Shared {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Subset budget for exhaustive oracles.
    #[arg(long, global = true, default_value_t = 100_000_000)]
    budget_subsets: u64,
    /// Embedding budget for exhaustive oracles.
    #[arg(long, global = true, default_value_t = 100_000_000)]
    budget_embeddings: u64,
    /// Wall-clock limit for exhaustive oracles, in seconds.
    #[arg(long, global = true, default_value_t = 600)]
    budget_seconds: u64,
    /// Output format; `csv` applies to `sweep` only.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a lower-bound graph.
    Gen {
        #[command(subcommand)]
        construction: Construction,
    },
    /// Extract a small dense subgraph.
    Extract {
        graph: PathBuf,
        /// Target average degree (or minimum degree with --min-degree).
        #[arg(long, value_parser = ratio_arg)]
        s: Ratio,
        #[arg(long)]
        min_degree: bool,
        #[arg(long, value_parser = ratio_arg, default_value = "1/100")]
        delta: Ratio,
        #[arg(long, value_parser = ratio_arg, default_value = "1/2")]
        epsilon: Ratio,
        #[arg(long, default_value_t = 1)]
        log_exponent: u32,
        #[arg(long, default_value_t = 10_000_000)]
        census_limit: u64,
        /// Skip the piecing pipeline and run the baselines only.
        #[arg(long)]
        no_pipeline: bool,
    },
    /// Count copies of the caterpillar T_{a,b} and group them by leaf image.
    Census {
        graph: PathBuf,
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
        #[arg(long)]
        limit: Option<u64>,
    },
    /// Decide (rho, r)-sparsity.
    Sparsity {
        graph: PathBuf,
        #[arg(long, value_parser = ratio_arg)]
        rho: Ratio,
        #[arg(long)]
        r: usize,
        /// Randomized search for a violating set instead of the exact scan.
        #[arg(long)]
        heuristic: bool,
    },
    /// Re-check a density record against its graph.
    Verify {
        graph: PathBuf,
        /// File holding a density record (one JSON line).
        #[arg(long)]
        record: PathBuf,
        /// Also compute the exact minimum witness size.
        #[arg(long)]
        oracle: bool,
    },
    /// Run a seeded sweep from a config file.
    Sweep {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum Construction {
    /// Random graph G(n, 2d/(n-1)) with no small dense subgraph.
    Feige {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = ratio_arg)]
        d: Ratio,
        #[arg(long, value_parser = ratio_arg)]
        s: Ratio,
        #[arg(long, default_value_t = 1.0)]
        cs: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Random graph with every dense set of at most t vertices broken up.
    Verstraete {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = ratio_arg)]
        s: Ratio,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn ratio_arg(s: &str) -> Result<Ratio, String> {
    parse_ratio(s).map_err(|e| e.to_string())
}

/// Failure that is neither a library error nor a usage error.
#[derive(Debug)]
struct Mismatch(String);

enum Failure {
    Core(Error),
    Usage(String),
    Mismatch(Mismatch),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Core(Error::Io(e))
    }
}

fn exit_code(f: &Failure) -> u8 {
    match f {
        Failure::Core(Error::Capability(_)) => 3,
        Failure::Core(Error::Infeasible(_)) => 4,
        Failure::Core(_) | Failure::Usage(_) => 2,
        Failure::Mismatch(_) => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let msg = match &f {
                Failure::Core(e) => e.to_string(),
                Failure::Usage(m) => format!("usage: {m}"),
                Failure::Mismatch(Mismatch(m)) => format!("verification failed: {m}"),
            };
            eprintln!("densub: {msg}");
            ExitCode::from(exit_code(&f))
        }
    }
}

fn budget(shared: &Shared) -> Result<OracleBudget, Failure> {
    Ok(OracleBudget::new(shared.budget_subsets, shared.budget_embeddings, Duration::from_secs(shared.budget_seconds))?)
}

fn emit(format: Format, record: &Value) -> Result<(), Failure> {
    let mut out = io::stdout().lock();
    match format {
        Format::Json => writeln!(out, "{record}")?,
        Format::Text => {
            if let Value::Object(map) = record {
                for (k, v) in map {
                    match v {
                        Value::String(s) => writeln!(out, "{k}: {s}")?,
                        other => writeln!(out, "{k}: {other}")?,
                    }
                }
            }
        }
        Format::Csv => return Err(Failure::Usage("--format csv is only available for sweep".into())),
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let shared = &cli.shared;
    let format = shared.format.unwrap_or(Format::Json);
    match &cli.command {
        Command::Gen { construction } => {
            let (name, graph, params, diag, out) = match construction {
                Construction::Feige { n, d, s, cs, out } => {
                    let spec = SparseRandomSpec { n: *n, d: *d, s: *s, c_s: *cs, seed: shared.seed };
                    let (g, diag) = gen_sparse_random(&spec)?;
                    ("feige", g, to_value(&spec), to_value(&diag), out)
                }
                Construction::Verstraete { n, s, t, out } => {
                    let spec = DeletionSpec { n: *n, s: *s, t: *t, seed: shared.seed };
                    let (g, diag) = gen_deletion_construction(&spec)?;
                    ("verstraete", g, to_value(&spec), to_value(&diag), out)
                }
            };
            let record = GenerationRecord::new(name, shared.seed, params, diag);
            let line = record.to_json_line();
            match out {
                Some(path) => {
                    write_edge_list(path, &graph, None)?;
                    std::fs::write(sidecar(path), format!("{line}\n"))?;
                    emit(format, &serde_json::from_str(&line).expect("record is json"))?;
                }
                None => {
                    let mut stdout = io::stdout().lock();
                    writeln!(stdout, "# {line}")?;
                    stdout.write_all(format_edge_list(&graph, None).as_bytes())?;
                }
            }
        }
        Command::Extract { graph, s, min_degree, delta, epsilon, log_exponent, census_limit, no_pipeline } => {
            let g = read_graph(graph)?;
            let options = ExtractOptions {
                delta: *delta,
                epsilon: *epsilon,
                log_exponent: *log_exponent,
                census_limit: *census_limit,
                seed: shared.seed,
                pipeline: !no_pipeline,
                ..Default::default()
            };
            let report = if *min_degree {
                extract_min_degree_subgraph(&g, *s, &options)?
            } else {
                extract_dense_subgraph(&g, *s, &options)?
            };
            emit(format, &to_value(&DensityRecord::new(&g, &report)))?;
        }
        Command::Census { graph, a, b, limit } => {
            let tree = build_caterpillar(*a, *b)?;
            let g = read_graph(graph)?;
            let report = census(&g, &tree, *limit)?;
            emit(format, &to_value(&CensusRecord::new(&report)))?;
        }
        Command::Sparsity { graph, rho, r, heuristic } => {
            let g = read_graph(graph)?;
            let mode = if *heuristic { SparsityMode::Heuristic { seed: shared.seed } } else { SparsityMode::Exact };
            let cert = g.is_sparse(*rho, *r, mode, &budget(shared)?)?;
            let record = json!({
                "version": densub_core::report::RECORD_VERSION,
                "kind": "sparsity",
                "rho": rational::format_ratio(&cert.rho),
                "r": cert.r,
                "verdict": cert.verdict,
                "method": cert.method,
                "witness": cert.witness,
            });
            emit(format, &record)?;
        }
        Command::Verify { graph, record, oracle } => {
            let g = read_graph(graph)?;
            let text = std::fs::read_to_string(record)
                .map_err(|e| io::Error::new(e.kind(), format!("{}: {e}", record.display())))?;
            let line = text.lines().find(|l| !l.trim().is_empty()).unwrap_or("");
            let claimed: Value =
                serde_json::from_str(line).map_err(|e| Error::Parse { line: 1, msg: e.to_string() })?;
            let result = verify_density(&g, &claimed, *oracle, &budget(shared)?)?;
            emit(format, &result)?;
            if result["consistent"] != Value::Bool(true) {
                return Err(Failure::Mismatch(Mismatch(result["problems"].to_string())));
            }
        }
        Command::Sweep { config, out } => {
            let cfg = SweepConfig::read(config)?;
            let rows = run_sweep(&cfg)?;
            let mut sink: Box<dyn Write> = match out {
                Some(path) => Box::new(io::BufWriter::new(
                    std::fs::File::create(path)
                        .map_err(|e| io::Error::new(e.kind(), format!("{}: {e}", path.display())))?,
                )),
                None => Box::new(io::stdout().lock()),
            };
            match shared.format.unwrap_or(Format::Csv) {
                Format::Csv => write_csv(&mut sink, &rows)?,
                Format::Json => {
                    for r in &rows {
                        writeln!(sink, "{}", serde_json::to_string(r).expect("rows serialize"))?;
                    }
                }
                Format::Text => return Err(Failure::Usage("sweep writes csv or json".into())),
            }
            sink.flush()?;
        }
    }
    Ok(())
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("records serialize")
}

fn sidecar(path: &Path) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(".meta.json");
    PathBuf::from(name)
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value, Failure> {
    v.get(key).ok_or_else(|| Failure::Core(Error::Parse { line: 1, msg: format!("record lacks {key:?}") }))
}

fn verify_density(g: &Graph, claimed: &Value, oracle: bool, budget: &OracleBudget) -> Result<Value, Failure> {
    if field(claimed, "kind")? != "density" {
        return Err(Failure::Usage("verify expects a density record".into()));
    }
    let parse = |msg: &str| Failure::Core(Error::Parse { line: 1, msg: msg.to_string() });
    let witness: Vec<usize> = serde_json::from_value(field(claimed, "witness_vertices")?.clone())
        .map_err(|_| parse("witness_vertices must be a list of vertex ids"))?;
    let s = parse_ratio(field(claimed, "s")?.as_str().ok_or_else(|| parse("s must be a string"))?)?;
    let criterion = match field(claimed, "criterion")?.as_str() {
        Some("min-degree") => Criterion::MinDegree,
        Some("average-degree") => Criterion::AverageDegree,
        _ => return Err(parse("unknown criterion")),
    };
    let measured = DensityReport::measure(g, witness, Some(s), criterion, densub_core::Branch::Oracle, "verify")?;
    let mut problems = Vec::new();
    if field(claimed, "witness_edges")?.as_u64() != Some(measured.edges as u64) {
        problems.push(format!("witness has {} edges", measured.edges));
    }
    let num = field(claimed, "avg_degree_num")?.as_i64();
    let den = field(claimed, "avg_degree_den")?.as_i64();
    if num.zip(den).map(|(n, d)| d != 0 && Ratio::new(n, d) == measured.average_degree) != Some(true) {
        problems.push(format!("average degree is {}", rational::format_ratio(&measured.average_degree)));
    }
    if field(claimed, "achieved")?.as_bool() != Some(measured.achieved) {
        problems.push(format!("achieved is {}", measured.achieved));
    }
    let mut optimum = Value::Null;
    if oracle && criterion == Criterion::AverageDegree {
        let best = min_dense_size(g, s, budget)?;
        if let Some(k) = best {
            if measured.achieved && measured.size() < k {
                problems.push(format!("witness smaller than the optimum {k}"));
            }
        }
        if best.is_some() != measured.achieved {
            problems.push(format!("oracle feasibility is {}", best.is_some()));
        }
        optimum = json!(best);
    }
    Ok(json!({
        "version": densub_core::report::RECORD_VERSION,
        "kind": "verification",
        "consistent": problems.is_empty(),
        "witness_size": measured.size(),
        "achieved": measured.achieved,
        "oracle_min_size": optimum,
        "problems": problems,
    }))
}
