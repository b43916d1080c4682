use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use fairorient::alloc_count::CountingAllocator;
use fairorient::workload::write_stream;
use fairorient::{BucketKind, Lambda, Params, Variant};
use fairorient_bench::error::{BenchError, Result};
use fairorient_bench::profile::{write_geomean, write_profile};
use fairorient_bench::{
    geomean, profile, read_rows, run_all, write_rows, Cell, Extras, Instance, Mode, Objective,
    Reference, Row, RunConfig,
};

#[global_allocator]
static ALLOC: CountingAllocator = CountingAllocator;

#[derive(Parser)]
#[command(
    name = "fairorient",
    version,
    about = "Fair dynamic edge orientation benchmarks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Replay streams through each variant and parameter setting.
    Run(RunArgs),
    /// Performance profile over one or more results tables.
    Profile(ProfileArgs),
    /// Geometric mean per algorithm, normalised to the best.
    Geomean(GeomeanArgs),
    /// Write a generated G(n, m) update stream.
    Gen(GenArgs),
}

#[derive(Clone, Copy)]
struct Gnm {
    n: usize,
    m: u64,
}

impl FromStr for Gnm {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let (n, m) = s
            .split_once(':')
            .ok_or_else(|| format!("expected N:M, got `{s}`"))?;
        Ok(Gnm {
            n: n.parse().map_err(|_| format!("bad vertex count `{n}`"))?,
            m: m.parse().map_err(|_| format!("bad edge count `{m}`"))?,
        })
    }
}

#[derive(Args)]
struct RunArgs {
    /// Update stream file; repeatable.
    #[arg(long = "stream", value_name = "PATH")]
    streams: Vec<PathBuf>,
    /// Generated G(n, m) instance as N:M; repeatable.
    #[arg(long = "gnm", value_name = "N:M")]
    gnm: Vec<Gnm>,
    /// Deletion pattern for generated instances.
    #[arg(long, default_value = "lex", value_name = "lex|top50|out50")]
    mode: Mode,
    /// Reference orientation for top50 and out50 generation.
    #[arg(long, default_value = "exact", value_name = "exact|engine")]
    reference: Reference,
    /// Seed for generated instances.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(
        long = "variant",
        default_value = "packed",
        value_name = "fractional|packed|packed-list"
    )]
    variants: Vec<Variant>,
    /// Overrides the bucket store of every variant.
    #[arg(long, value_name = "array|list")]
    bucket_store: Option<BucketKind>,
    #[arg(long = "lambda", default_value = "1/10", value_name = "P/Q")]
    lambdas: Vec<Lambda>,
    #[arg(long = "theta", default_value = "1", value_name = "0|1")]
    thetas: Vec<u32>,
    #[arg(long = "b", default_value = "1", value_name = "INT")]
    bs: Vec<u32>,
    #[arg(long, default_value_t = 3)]
    repeats: u32,
    /// Engine time after which a cell is marked OOT.
    #[arg(long, value_name = "SECONDS")]
    timeout_sec: Option<u64>,
    /// Write the results table here instead of standard output.
    #[arg(long, value_name = "PATH")]
    csv: Option<PathBuf>,
    /// Also print a performance profile of this run on standard output.
    #[arg(long, requires = "csv", value_name = "time|max|sumsq")]
    profile: Option<Objective>,
    /// Count fairness violations of the final orientation.
    #[arg(long)]
    audit: bool,
    /// Exact optimum of the final graph, when within the oracle's caps.
    #[arg(long)]
    oracle: bool,
    /// Time batches of updates instead of each update.
    #[arg(long)]
    batch_timing: bool,
}

#[derive(Args)]
struct ProfileArgs {
    /// Results tables.
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    #[arg(long, default_value = "time", value_name = "time|max|sumsq")]
    objective: Objective,
    /// Number of factors in the grid.
    #[arg(long, default_value_t = 50)]
    steps: usize,
    /// Largest factor; defaults to the largest ratio observed.
    #[arg(long)]
    tau_max: Option<f64>,
    #[arg(long, short, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GeomeanArgs {
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    #[arg(long, default_value = "time", value_name = "time|max|sumsq")]
    objective: Objective,
    #[arg(long, short, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value = "lex", value_name = "lex|top50|out50")]
    mode: Mode,
    #[arg(long, default_value = "exact", value_name = "exact|engine")]
    reference: Reference,
    #[arg(long, short, value_name = "PATH")]
    out: Option<PathBuf>,
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| BenchError::io(p.display().to_string(), e))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn read_tables(inputs: &[PathBuf]) -> Result<Vec<Row>> {
    let mut rows = Vec::new();
    for p in inputs {
        let shown = p.display().to_string();
        let f = File::open(p).map_err(|e| BenchError::io(&shown, e))?;
        rows.extend(read_rows(f, &shown)?);
    }
    Ok(rows)
}

fn run(args: RunArgs) -> Result<()> {
    if args.streams.is_empty() && args.gnm.is_empty() {
        return Err(BenchError::Table(
            "give at least one --stream or --gnm".into(),
        ));
    }
    let mut instances = Vec::new();
    for p in &args.streams {
        instances.push(Instance::load(p)?);
    }
    for g in &args.gnm {
        instances.push(Instance::generated(
            g.n,
            g.m,
            args.seed,
            args.mode,
            args.reference,
        )?);
    }
    let mut cells = Vec::new();
    for &variant in &args.variants {
        for &lambda in &args.lambdas {
            for &theta in &args.thetas {
                for &b in &args.bs {
                    cells.push(Cell {
                        variant,
                        buckets: args.bucket_store,
                        params: Params::new(lambda, theta, b)?,
                    });
                }
            }
        }
    }
    let cfg = RunConfig {
        repeats: args.repeats,
        timeout: args.timeout_sec.map(Duration::from_secs),
        batch_timing: args.batch_timing,
        audit: args.audit,
        oracle: args.oracle,
    };
    let rows = run_all(&instances, &cells, &cfg)?;
    let extras = Extras {
        audit: args.audit,
        oracle: args.oracle,
    };
    let mut out = output(args.csv.as_deref())?;
    write_rows(&mut out, &rows, extras)?;
    out.flush().map_err(|e| BenchError::io("output", e))?;
    if let Some(objective) = args.profile {
        let p = profile(&rows, objective, 50, None)?;
        write_profile(output(None)?, &p)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(args) => run(args),
        Command::Profile(args) => read_tables(&args.inputs).and_then(|rows| {
            let p = profile(&rows, args.objective, args.steps, args.tau_max)?;
            write_profile(output(args.out.as_deref())?, &p)
        }),
        Command::Geomean(args) => read_tables(&args.inputs).and_then(|rows| {
            let s = geomean(&rows, args.objective)?;
            write_geomean(output(args.out.as_deref())?, &s)
        }),
        Command::Gen(args) => {
            Instance::generated(args.n, args.m, args.seed, args.mode, args.reference).and_then(
                |inst| {
                    let mut out = output(args.out.as_deref())?;
                    out.write_all(write_stream(&inst.stream).as_bytes())
                        .and_then(|_| out.flush())
                        .map_err(|e| BenchError::io("output", e))
                },
            )
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
