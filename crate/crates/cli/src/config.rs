use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use graphcx::graphcore::{GraphConstraints, Parity, MAX_VERTICES};
use graphcx::linalg::Field;
use graphcx::oddtwist::TruncationLevel;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ParityArg {
    Even,
    Odd,
}

impl From<ParityArg> for Parity {
    fn from(p: ParityArg) -> Self {
        match p {
            ParityArg::Even => Parity::Even,
            ParityArg::Odd => Parity::Odd,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    #[arg(long, value_enum, default_value = "even")]
    pub parity: ParityArg,
    /// Only connected graphs.
    #[arg(long)]
    pub connected: bool,
    /// Exclude edges from a vertex to itself.
    #[arg(long)]
    pub no_tadpoles: bool,
    #[arg(long, default_value_t = 0)]
    pub min_valence: usize,
    #[arg(long)]
    pub max_vertices: Option<usize>,
    #[arg(long)]
    pub max_edges: Option<usize>,
    /// `q` for exact rationals, `p:<prime>` for a prime field.
    #[arg(long, default_value = "p:2147483647")]
    pub field: String,
    #[arg(long, default_value_t = 9)]
    pub truncate_edges: usize,
    #[arg(long, default_value_t = 7)]
    pub truncate_mult: usize,
    #[arg(long, env = "GC_CACHE")]
    pub cache: Option<PathBuf>,
    /// Write the report here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long)]
    pub jobs: Option<usize>,
}

pub const DEFAULT_MAX_VERTICES: usize = 8;
pub const DEFAULT_MAX_EDGES: usize = 12;

#[derive(Debug, Clone, Serialize)]
pub struct Truncation {
    pub max_edges: usize,
    pub max_multiplicity: usize,
}

/// Everything a run depends on. Embedded in every report.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: String,
    pub parity: ParityArg,
    pub constraints: GraphConstraints,
    pub max_vertices: usize,
    pub max_edges: usize,
    pub field: String,
    pub truncation: Truncation,
    pub cache_dir: Option<PathBuf>,
    pub format: Format,
    pub jobs: usize,
    /// Subcommand-specific settings.
    pub extra: serde_json::Value,
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn build(
        command: &str,
        args: &CommonArgs,
        default_format: Format,
        default_vertices: usize,
        extra: serde_json::Value,
    ) -> Result<Self> {
        let max_vertices = args.max_vertices.unwrap_or(default_vertices);
        let max_edges = args.max_edges.unwrap_or(DEFAULT_MAX_EDGES);
        if max_vertices == 0 || max_vertices > MAX_VERTICES {
            bail!("--max-vertices must be between 1 and {MAX_VERTICES}");
        }
        let field: Field = args.field.parse().with_context(|| format!("bad --field {:?}", args.field))?;
        TruncationLevel::new(args.truncate_edges, args.truncate_mult).context("bad truncation")?;
        let jobs = args.jobs.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
        if jobs == 0 {
            bail!("--jobs must be positive");
        }
        let constraints = GraphConstraints {
            connected: args.connected,
            allow_tadpoles: !args.no_tadpoles,
            min_valence: args.min_valence,
            max_edge_multiplicity: None,
        };
        Ok(RunConfig {
            command: command.to_string(),
            parity: args.parity,
            constraints,
            max_vertices,
            max_edges,
            field: field.to_string(),
            truncation: Truncation { max_edges: args.truncate_edges, max_multiplicity: args.truncate_mult },
            cache_dir: args.cache.clone(),
            format: args.format.unwrap_or(default_format),
            jobs,
            extra,
            out: args.out.clone(),
        })
    }

    pub fn parity(&self) -> Parity {
        self.parity.into()
    }

    pub fn field(&self) -> Field {
        self.field.parse().expect("validated")
    }

    pub fn truncation(&self) -> TruncationLevel {
        TruncationLevel::new(self.truncation.max_edges, self.truncation.max_multiplicity).expect("validated")
    }
}
