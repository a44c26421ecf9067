//! `isoprime` — uniform bounds on prime-degree isogenies over degree-d
//! number fields.
//!
//! Results go to stdout, progress to stderr. Exit codes: 0 success,
//! 1 usage error, 2 computation caveat (e.g. an unfactored cofactor),
//! 3 corrupt persisted state.

mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use isoprime_core::bounds::{accumulate_row, BoundRow, RowOptions, Type1Inputs};
use isoprime_core::ntheory::FactorEffort;
use isoprime_core::signatures::{class_of, orbit_representatives, GaloisModel, Signature};
use isoprime_core::type2::{
    cc_scan, momose_type2_bound, ConstantsTable, Pipeline, ScanCheckpoint, ScanOptions,
};
use isoprime_core::Error;

use config::RunConfig;
use output::{Format, OutputDoc};

#[derive(Parser)]
#[command(
    name = "isoprime",
    version,
    about = "Uniform bounds on prime-degree isogenies of elliptic curves over degree-d number fields"
)]
struct Cli {
    /// Versioned JSON config; command-line flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EffortArg {
    Fast,
    Deep,
}

impl From<EffortArg> for FactorEffort {
    fn from(e: EffortArg) -> Self {
        match e {
            EffortArg::Fast => FactorEffort::Fast,
            EffortArg::Deep => FactorEffort::Deep,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModelArg {
    Cyclic,
    Symmetric,
}

impl From<ModelArg> for GaloisModel {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Cyclic => GaloisModel::Cyclic,
            ModelArg::Symmetric => GaloisModel::Symmetric,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PipelineArg {
    Plain,
    Refined,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Table,
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Per-signature-class isogeny-prime bound rows (table regeneration).
    Bounds(BoundsArgs),
    /// The uniform Type-2 bound pipeline for odd degrees.
    Type2(Type2Args),
    /// Checkpointed Condition-CC scan over a prime range.
    Scan(ScanArgs),
    /// Signature orbit classes and counts.
    Orbits(OrbitsArgs),
    /// Fast internal consistency checks.
    Selfcheck,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long)]
    degree: Option<u32>,
    /// Bound every orbit class of the degree.
    #[arg(long, conflicts_with_all = ["signature", "trace"])]
    all_classes: bool,
    /// Explicit signature, e.g. "0,4" (repeatable).
    #[arg(long)]
    signature: Vec<String>,
    /// Only classes with these traces (repeatable).
    #[arg(long)]
    trace: Vec<u32>,
    #[arg(long)]
    q_max: Option<u64>,
    #[arg(long, value_enum)]
    model: Option<ModelArg>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    #[arg(long, value_enum)]
    effort: Option<EffortArg>,
    /// Stop once the surviving prime support is unchanged for N
    /// consecutive auxiliary primes.
    #[arg(long)]
    stabilize_window: Option<u32>,
    /// JSON file with external formal-immersion integers.
    #[arg(long)]
    type1_extras: Option<PathBuf>,
}

#[derive(Args)]
struct Type2Args {
    #[arg(long)]
    degree: Option<u32>,
    #[arg(long, value_enum)]
    pipeline: Option<PipelineArg>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    #[arg(long, value_enum)]
    effort: Option<EffortArg>,
    /// JSON file with additional Chebotarev constants rows.
    #[arg(long)]
    constants: Option<PathBuf>,
}

#[derive(Args)]
struct ScanArgs {
    #[arg(long)]
    degree: Option<u32>,
    #[arg(long)]
    from: u64,
    #[arg(long)]
    to: u64,
    /// Checkpoint path; resumed when the file exists.
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    /// Numbers per scan segment.
    #[arg(long)]
    segment: Option<u64>,
    /// Stop after this many segments (checkpoint stays resumable).
    #[arg(long)]
    max_segments: Option<u64>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
}

#[derive(Args)]
struct OrbitsArgs {
    #[arg(long)]
    degree: Option<u32>,
    #[arg(long, value_enum)]
    model: Option<ModelArg>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::CorruptCheckpoint(_) => ExitCode::from(3),
                _ => ExitCode::from(1),
            }
        }
    }
}

fn run(cli: Cli) -> isoprime_core::Result<ExitCode> {
    let cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    let workers = cli.workers.or(cfg.workers).unwrap_or(0);
    if workers > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build_global()
            .map_err(|e| Error::Domain(format!("thread pool: {e}")))?;
    }

    match cli.command {
        Command::Bounds(args) => cmd_bounds(args, &cfg),
        Command::Type2(args) => cmd_type2(args, &cfg),
        Command::Scan(args) => cmd_scan(args, &cfg),
        Command::Orbits(args) => cmd_orbits(args, &cfg),
        Command::Selfcheck => cmd_selfcheck(),
    }
}

fn parse_signature(text: &str) -> isoprime_core::Result<Signature> {
    let entries: Result<Vec<u8>, _> = text
        .trim()
        .trim_start_matches('(')
        .trim_end_matches(')')
        .split(',')
        .map(|t| t.trim().parse::<u8>())
        .collect();
    let entries = entries.map_err(|e| Error::Domain(format!("signature '{text}': {e}")))?;
    Signature::new(entries)
}

fn cmd_bounds(args: BoundsArgs, cfg: &RunConfig) -> isoprime_core::Result<ExitCode> {
    let degree = args
        .degree
        .or(cfg.degree)
        .ok_or_else(|| Error::Domain("--degree is required".into()))?;
    let q_max = args.q_max.or(cfg.q_max).unwrap_or(50);
    let model: GaloisModel = args
        .model
        .map(Into::into)
        .or(cfg.galois_model)
        .unwrap_or(GaloisModel::Cyclic);
    let format = resolve_format(args.format, cfg);
    let effort: FactorEffort = args
        .effort
        .map(Into::into)
        .or(cfg.effort.map(Into::into))
        .unwrap_or(FactorEffort::Fast);
    let type1_inputs: Option<Type1Inputs> = match args.type1_extras.as_ref().or(cfg
        .type1_extras
        .as_ref())
    {
        Some(path) => {
            let data = std::fs::read_to_string(path)?;
            Some(
                serde_json::from_str(&data)
                    .map_err(|e| Error::Domain(format!("type1 extras: {e}")))?,
            )
        }
        None => None,
    };

    // select classes
    let mut classes = if !args.signature.is_empty() {
        args.signature
            .iter()
            .map(|s| {
                let sig = parse_signature(s)?;
                if sig.degree() != degree {
                    return Err(Error::Domain(format!(
                        "signature {sig} has degree {}, expected {degree}",
                        sig.degree()
                    )));
                }
                Ok(class_of(&sig, model))
            })
            .collect::<isoprime_core::Result<Vec<_>>>()?
    } else {
        let all = orbit_representatives(degree, model)?;
        if args.trace.is_empty() {
            all
        } else {
            all.into_iter()
                .filter(|c| args.trace.contains(&c.representative.trace()))
                .collect()
        }
    };
    classes.sort_by_key(|c| {
        (
            c.representative.trace(),
            c.representative.entries().to_vec(),
        )
    });

    let opts = RowOptions {
        q_max,
        effort,
        stabilization_window: args.stabilize_window.or(cfg.stabilize_window),
        type1_inputs,
    };
    // classes sharing (trace, type-1-ness) produce identical bound data;
    // compute once per key and restamp the class label
    let mut memo: std::collections::HashMap<(u32, bool), BoundRow> = std::collections::HashMap::new();
    let mut rows: Vec<BoundRow> = Vec::new();
    for class in &classes {
        let key = (
            class.representative.trace(),
            class.representative.is_type1(),
        );
        let row = match memo.get(&key) {
            Some(row) => {
                let mut row = row.clone();
                row.class = class.representative.to_string();
                row
            }
            None => {
                eprintln!("bounding class {} ...", class.representative);
                let row = accumulate_row(class, &opts)?;
                memo.insert(key, row.clone());
                row
            }
        };
        rows.push(row);
    }

    let caveat = rows.iter().any(|r| r.probable_primality);
    let doc = OutputDoc::bounds(degree, q_max, model, &rows);
    doc.emit(format)?;
    Ok(if caveat {
        ExitCode::from(2)
    } else {
        ExitCode::SUCCESS
    })
}

fn cmd_type2(args: Type2Args, cfg: &RunConfig) -> isoprime_core::Result<ExitCode> {
    let degree = args
        .degree
        .or(cfg.degree)
        .ok_or_else(|| Error::Domain("--degree is required".into()))?;
    let pipeline = match args.pipeline {
        Some(PipelineArg::Plain) => Pipeline::Plain,
        Some(PipelineArg::Refined) => Pipeline::Refined,
        None => cfg.pipeline.unwrap_or(Pipeline::Refined),
    };
    let format = resolve_format(args.format, cfg);
    let effort: FactorEffort = args
        .effort
        .map(Into::into)
        .or(cfg.effort.map(Into::into))
        .unwrap_or(FactorEffort::Fast);
    let mut table = ConstantsTable::default();
    if let Some(path) = args.constants.as_ref().or(cfg.constants.as_ref()) {
        let data = std::fs::read_to_string(path)?;
        let extra: ConstantsTable =
            serde_json::from_str(&data).map_err(|e| Error::Domain(format!("constants: {e}")))?;
        table.rows.extend(extra.rows);
    }

    eprintln!("computing type-2 bound for degree {degree} ({pipeline:?} pipeline) ...");
    let audit = momose_type2_bound(degree, pipeline, &table, effort)?;
    // soundness caveats (an unfactored cofactor, or results resting on
    // probable-primality answers) surface as exit code 2
    let incomplete = audit.caveats.iter().any(|c| c.contains("unfactored"));
    OutputDoc::type2(&audit).emit(format)?;
    Ok(if incomplete || audit.probable_primality {
        ExitCode::from(2)
    } else {
        ExitCode::SUCCESS
    })
}

fn cmd_scan(args: ScanArgs, cfg: &RunConfig) -> isoprime_core::Result<ExitCode> {
    let degree = args
        .degree
        .or(cfg.degree)
        .ok_or_else(|| Error::Domain("--degree is required".into()))?;
    let format = resolve_format(args.format, cfg);
    let checkpoint_path = args.checkpoint.or_else(|| cfg.checkpoint.clone());
    let opts = ScanOptions {
        segment_span: args.segment.or(cfg.segment).unwrap_or(100_000_000),
        checkpoint_path: checkpoint_path.clone(),
        max_segments: args.max_segments,
    };
    let existing = match &checkpoint_path {
        Some(path) if path.exists() => {
            eprintln!("resuming from checkpoint {}", path.display());
            Some(ScanCheckpoint::load(path)?)
        }
        _ => None,
    };
    let state = cc_scan(degree, args.from, args.to, existing, &opts)?;
    OutputDoc::scan(&state).emit(format)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_orbits(args: OrbitsArgs, cfg: &RunConfig) -> isoprime_core::Result<ExitCode> {
    let degree = args
        .degree
        .or(cfg.degree)
        .ok_or_else(|| Error::Domain("--degree is required".into()))?;
    let model: GaloisModel = args
        .model
        .map(Into::into)
        .or(cfg.galois_model)
        .unwrap_or(GaloisModel::Cyclic);
    let format = resolve_format(args.format, cfg);
    let classes = orbit_representatives(degree, model)?;
    OutputDoc::orbits(degree, model, &classes).emit(format)?;
    Ok(ExitCode::SUCCESS)
}

fn resolve_format(arg: Option<FormatArg>, cfg: &RunConfig) -> Format {
    match arg {
        Some(FormatArg::Table) => Format::Table,
        Some(FormatArg::Json) => Format::Json,
        Some(FormatArg::Csv) => Format::Csv,
        None => cfg.format.unwrap_or(Format::Table),
    }
}

fn cmd_selfcheck() -> isoprime_core::Result<ExitCode> {
    use isoprime_core::ntheory;
    use num_bigint::BigUint;

    let mut ok = true;
    let mut check = |name: &str, pass: bool| {
        println!("{}  {}", if pass { "PASS" } else { "FAIL" }, name);
        ok &= pass;
    };

    check(
        "sieve: pi(10^4) = 1229",
        ntheory::primes_in(0, 10_000).len() == 1229,
    );
    check(
        "primality: 253507 prime, 3967 prime",
        ntheory::is_prime(&BigUint::from(253_507u32))
            && ntheory::is_prime(&BigUint::from(3967u32)),
    );
    check(
        "jacobi: (2/17) = 1",
        ntheory::jacobi(&2.into(), &BigUint::from(17u32)).unwrap() == 1,
    );
    check(
        "cc: satisfies_cc_uniform(3, 253507)",
        isoprime_core::type2::satisfies_cc_uniform(3, 253_507).unwrap(),
    );
    check(
        "cc: !satisfies_cc_uniform(1, 17)",
        !isoprime_core::type2::satisfies_cc_uniform(1, 17).unwrap(),
    );
    check(
        "orbits: 9 quadratic classes",
        orbit_representatives(2, GaloisModel::Cyclic)
            .map(|c| c.len() == 9)
            .unwrap_or(false),
    );
    let s3 = isoprime_core::type2::s_root(3, &ConstantsTable::base_row()).unwrap_or(0.0);
    check("type2: S_3 in [2.3e29, 2.5e29]", (2.3e29..2.5e29).contains(&s3));
    check(
        "bounds: grh d=2 trace-6 bound near 864",
        isoprime_core::bounds::grh_trace6_bound(2, 6)
            .map(|v| (864.0..864.01).contains(&v))
            .unwrap_or(false),
    );

    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}


