mod config;
mod suites;

use std::fmt::Write as _;
use std::process::ExitCode;
use std::sync::atomic::Ordering;
use std::sync::Arc;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use graphcx::calculus::OperatorTag;
use graphcx::chromatic::l7_pipeline;
use graphcx::graphcore::{encode, enumerate_graphs, GradedBasis, Parity, MAX_VERTICES};
use graphcx::homology::{constraints_key, Cache, ComplexSpec, Engine, Grading};
use graphcx::specseq::{FilteredComplex, Filtration, MixedDifferential, SpectralSequence, Window};
use serde_json::{json, Value};

use config::{CommonArgs, Format, RunConfig, DEFAULT_MAX_VERTICES};
use suites::Suite;

/// Exit code for a run whose assertions failed.
const EXIT_FAILED: u8 = 1;
/// Exit code for an invalid configuration (clap uses the same code).
const EXIT_USAGE: u8 = 2;
/// Exit code for a computation that stopped with an error.
const EXIT_ERROR: u8 = 3;

#[derive(Parser)]
#[command(
    name = "graphcx",
    version,
    about = "Cohomology, spectral sequences and checks for Kontsevich graph complexes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FiltrationArg {
    Vertex,
    Betti,
}

#[derive(Subcommand)]
enum Command {
    /// List the basis of graph classes, cell by cell.
    Enumerate {
        #[command(flatten)]
        common: CommonArgs,
        /// Only this vertex count.
        #[arg(long)]
        v: Option<usize>,
        /// Only this edge count.
        #[arg(long)]
        e: Option<usize>,
    },
    /// Cohomology dimensions of `δ`, indexed by `(e, b)` (even) or `(v, b)` (odd).
    Dims {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Pages and cancellations of the spectral sequence of `δ + ∇` or its odd analogue.
    Specseq {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_enum, default_value = "betti")]
        filtration: FiltrationArg,
        /// Last page to compute.
        #[arg(long, default_value_t = 3)]
        pages: usize,
        /// Use the predual complex (contraction plus deletion).
        #[arg(long)]
        dual: bool,
    },
    /// Run a verification suite; the exit code is 0 iff every check passes.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// The loop-order-seven computation with its colouring invariant.
    L7 {
        #[command(flatten)]
        common: CommonArgs,
    },
}

struct Outcome {
    text: String,
    passed: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match configure(&cli.command) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(cfg.jobs).build_global() {
        eprintln!("warning: {e}");
    }
    let outcome = match execute(&cli.command, &cfg) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(EXIT_ERROR);
        }
    };
    if let Err(e) = emit(&cfg, &outcome.text) {
        eprintln!("error: {e:#}");
        return ExitCode::from(EXIT_ERROR);
    }
    if outcome.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAILED)
    }
}

fn configure(cmd: &Command) -> Result<RunConfig> {
    match cmd {
        Command::Enumerate { common, v, e } => {
            if let Some(v) = v {
                anyhow::ensure!((1..=MAX_VERTICES).contains(v), "--v must be between 1 and {MAX_VERTICES}");
            }
            RunConfig::build("enumerate", common, Format::Csv, DEFAULT_MAX_VERTICES, json!({ "v": v, "e": e }))
        }
        Command::Dims { common } => {
            // even tables run over edge counts, so by default every vertex count is in range
            let dv = match common.parity {
                config::ParityArg::Even => common.max_edges.unwrap_or(config::DEFAULT_MAX_EDGES) + 1,
                config::ParityArg::Odd => DEFAULT_MAX_VERTICES,
            };
            RunConfig::build("dims", common, Format::Csv, dv.min(MAX_VERTICES), Value::Null)
        }
        Command::Specseq { common, filtration, pages, dual } => {
            anyhow::ensure!(*pages >= 1, "--pages must be at least 1");
            let cfg = RunConfig::build(
                "specseq",
                common,
                Format::Csv,
                DEFAULT_MAX_VERTICES,
                json!({ "filtration": format!("{filtration:?}").to_lowercase(), "pages": pages, "dual": dual }),
            )?;
            filtered_complex(&cfg, *filtration, *dual)?;
            Ok(cfg)
        }
        Command::Verify { suite, common } => {
            RunConfig::build("verify", common, Format::Json, DEFAULT_MAX_VERTICES, json!({ "suite": suite }))
        }
        Command::L7 { common } => RunConfig::build("l7", common, Format::Json, DEFAULT_MAX_VERTICES, Value::Null),
    }
}

fn execute(cmd: &Command, cfg: &RunConfig) -> Result<Outcome> {
    match cmd {
        Command::Enumerate { v, e, .. } => cmd_enumerate(cfg, *v, *e),
        Command::Dims { .. } => cmd_dims(cfg),
        Command::Specseq { filtration, pages, dual, .. } => cmd_specseq(cfg, *filtration, *pages, *dual),
        Command::Verify { suite, .. } => cmd_verify(cfg, *suite),
        Command::L7 { .. } => cmd_l7(cfg),
    }
}

fn emit(cfg: &RunConfig, text: &str) -> Result<()> {
    match &cfg.out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cache(cfg: &RunConfig) -> Option<Arc<Cache>> {
    cfg.cache_dir.as_ref().map(|d| Arc::new(Cache::new(d)))
}

fn cache_json(cache: Option<&Cache>) -> Value {
    match cache {
        None => Value::Null,
        Some(c) => json!({ "root": c.root() }),
    }
}

fn report_cache_stats(cache: Option<&Cache>) {
    if let Some(c) = cache {
        eprintln!(
            "cache {}: {} hits, {} misses, {} corrupt entries replaced",
            c.root().display(),
            c.stats.hits.load(Ordering::Relaxed),
            c.stats.misses.load(Ordering::Relaxed),
            c.stats.corrupt.load(Ordering::Relaxed),
        );
    }
}

fn to_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

fn cmd_enumerate(cfg: &RunConfig, v: Option<usize>, e: Option<usize>) -> Result<Outcome> {
    let parity = cfg.parity();
    let vs: Vec<usize> = v.map_or_else(|| (1..=cfg.max_vertices).collect(), |v| vec![v]);
    let es: Vec<usize> = e.map_or_else(|| (0..=cfg.max_edges).collect(), |e| vec![e]);
    let cache = cache(cfg);
    let mut bases: Vec<GradedBasis> = Vec::new();
    for &v in &vs {
        for &e in &es {
            let make = || enumerate_graphs(v, e, parity, &cfg.constraints);
            let b = match &cache {
                Some(c) => c.basis_or(parity, &cfg.constraints, v, e, make)?,
                None => make()?,
            };
            bases.push(b);
        }
    }
    report_cache_stats(cache.as_deref());
    let text = match cfg.format {
        Format::Csv => {
            let mut s = String::new();
            for b in &bases {
                for g in b.iter() {
                    writeln!(s, "{}", encode(g))?;
                }
            }
            s
        }
        Format::Json => {
            let cells: Vec<Value> = bases
                .iter()
                .map(|b| json!({ "v": b.v, "e": b.e, "count": b.len(), "graphs": b.iter().map(encode).collect::<Vec<_>>() }))
                .collect();
            to_text(&json!({
                "config": cfg,
                "cache_key": constraints_key(&cfg.constraints),
                "cache": cache_json(cache.as_deref()),
                "cells": cells,
            }))
        }
    };
    Ok(Outcome { text, passed: true })
}

fn cmd_dims(cfg: &RunConfig) -> Result<Outcome> {
    let grading = match cfg.parity() {
        Parity::Even => Grading::ByEdgesAndB,
        Parity::Odd => Grading::ByVerticesAndB,
    };
    let spec = ComplexSpec::new(cfg.parity(), OperatorTag::Delta, cfg.constraints, grading)?;
    let mut engine = Engine::new(spec, cfg.field());
    let cache = cache(cfg);
    if let Some(c) = &cache {
        engine = engine.with_cache(c.clone());
    }
    let mut positions = Vec::new();
    for v in 1..=cfg.max_vertices {
        for e in 0..=cfg.max_edges {
            positions.push(grading.axes(v, e));
        }
    }
    let table = engine.table_at(&positions);
    report_cache_stats(cache.as_deref());
    let text = match cfg.format {
        Format::Csv => table.to_csv(),
        Format::Json => to_text(&json!({
            "config": cfg,
            "cache": cache_json(cache.as_deref()),
            "cache_key": constraints_key(&cfg.constraints),
            "table": table.to_json(),
        })),
    };
    Ok(Outcome { text, passed: true })
}

fn filtered_complex(cfg: &RunConfig, filtration: FiltrationArg, dual: bool) -> Result<FilteredComplex> {
    let filtration = match filtration {
        FiltrationArg::Vertex => Filtration::ByVertexCount,
        FiltrationArg::Betti => Filtration::ByBettiNumber,
    };
    let differential = match (cfg.parity(), dual) {
        (Parity::Even, false) => MixedDifferential::DeltaPlusNabla,
        (Parity::Even, true) => MixedDifferential::ContractPlusDelete,
        (Parity::Odd, false) => MixedDifferential::TwistedOdd,
        (Parity::Odd, true) => anyhow::bail!("--dual applies to even graphs only"),
    };
    let window = Window { max_vertices: cfg.max_vertices, max_edges: cfg.max_edges };
    Ok(FilteredComplex::new(cfg.parity(), cfg.constraints, differential, filtration, window)?)
}

fn cmd_specseq(cfg: &RunConfig, filtration: FiltrationArg, pages: usize, dual: bool) -> Result<Outcome> {
    let fc = filtered_complex(cfg, filtration, dual)?;
    let ss = SpectralSequence::with_field(fc, cfg.field());
    let reports = (1..=pages).map(|r| ss.page(r)).collect::<graphcx::Result<Vec<_>>>()?;
    let cancellations = ss.cancellations(pages)?;
    let text = match cfg.format {
        Format::Csv => {
            let mut s = String::from("page,v,e,p,n,dim,flagged\n");
            for r in &reports {
                for c in &r.cells {
                    writeln!(s, "{},{},{},{},{},{},{}", r.page, c.v, c.e, c.p, c.n, c.dim, c.flagged)?;
                }
            }
            s
        }
        Format::Json => to_text(&json!({
            "config": cfg,
            "cache_key": constraints_key(&cfg.constraints),
            "pages": reports,
            "cancellations": cancellations,
        })),
    };
    Ok(Outcome { text, passed: true })
}

fn cmd_verify(cfg: &RunConfig, suite: Suite) -> Result<Outcome> {
    let checks = suites::run(suite, cfg)?;
    let passed = checks.iter().all(|c| c.passed);
    let text = match cfg.format {
        Format::Csv => {
            let mut s = String::from("check,passed,detail\n");
            for c in &checks {
                writeln!(s, "\"{}\",{},\"{}\"", c.name, c.passed, c.detail.replace('"', "'"))?;
            }
            s
        }
        Format::Json => to_text(&json!({ "config": cfg, "passed": passed, "checks": checks })),
    };
    Ok(Outcome { text, passed })
}

fn cmd_l7(cfg: &RunConfig) -> Result<Outcome> {
    let r = l7_pipeline()?;
    let passed = r.nonexact();
    let text = match cfg.format {
        Format::Csv => {
            let mut s = String::from("quantity,value\n");
            writeln!(s, "f_explicit_total,{}", r.f_explicit_ribbon.total)?;
            writeln!(s, "f_explicit_per_class,{}", r.f_explicit_ribbon.per_class)?;
            writeln!(s, "f_w2_total,{}", r.f_w2.total)?;
            writeln!(s, "nonexact,{passed}")?;
            s
        }
        Format::Json => to_text(&json!({ "config": cfg, "report": r.to_json() })),
    };
    Ok(Outcome { text, passed })
}
