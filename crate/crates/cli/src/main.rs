//! `psnum`: compute and cross-check Parry-Sullivan numbers of multigraph files.
//!
//! Exit codes: 0 success, 2 unreadable or malformed input, 3 a work cap was
//! hit, 4 two methods (or a fuzz case) disagreed.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use psnum_core::Caps;

use crate::commands::Outcome;

#[derive(Parser)]
#[command(
    name = "psnum",
    version,
    about = "Parry-Sullivan numbers of directed multigraphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute det(I - A) by one or more methods and compare them.
    Compute {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::All)]
        method: Method,
        #[command(flatten)]
        caps: CapArgs,
        /// Also tabulate family classes by induced permutation.
        #[arg(long)]
        classes: bool,
        /// Also report the source/sink elimination trace.
        #[arg(long)]
        reduce: bool,
        #[arg(long)]
        json: bool,
    },
    /// List circuits, and optionally every vertex-disjoint family.
    Circuits {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        families: bool,
        #[command(flatten)]
        caps: CapArgs,
        #[arg(long)]
        json: bool,
    },
    /// Cross-check all methods on seeded random multigraphs.
    Fuzz {
        #[arg(long)]
        max_vertices: usize,
        #[arg(long)]
        max_edges: usize,
        #[arg(long)]
        cases: u64,
        #[arg(long)]
        seed: u64,
        #[command(flatten)]
        caps: CapArgs,
        #[arg(long)]
        json: bool,
    },
    /// Eliminate sources, sinks and isolated vertices until none remain.
    Reduce {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Det,
    Circuits,
    Leibniz,
    All,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Det => "det",
            Method::Circuits => "circuits",
            Method::Leibniz => "leibniz",
            Method::All => "all",
        }
    }
}

#[derive(Args, Clone, Copy)]
struct CapArgs {
    /// Most circuits to enumerate [default: 1000000, or PS_DEFAULT_CAPS]
    #[arg(long)]
    circuit_cap: Option<usize>,
    /// Most families the backtracking walk may visit [default: 10000000, or PS_DEFAULT_CAPS]
    #[arg(long)]
    node_cap: Option<u64>,
}

impl CapArgs {
    fn resolve(self) -> Result<Caps, String> {
        let mut caps = match std::env::var("PS_DEFAULT_CAPS") {
            Ok(spec) => parse_caps(&spec)?,
            Err(_) => Caps::default(),
        };
        if let Some(c) = self.circuit_cap {
            caps.circuits = c;
        }
        if let Some(n) = self.node_cap {
            caps.nodes = n;
        }
        Ok(caps)
    }
}

/// `circuits=N,nodes=N,factorial=N`, any subset, in any order.
fn parse_caps(spec: &str) -> Result<Caps, String> {
    let mut caps = Caps::default();
    for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let (key, value) = part
            .split_once('=')
            .ok_or_else(|| format!("PS_DEFAULT_CAPS: expected key=value, got `{part}`"))?;
        let bad = |_| format!("PS_DEFAULT_CAPS: `{value}` is not a non-negative integer");
        match key.trim() {
            "circuits" => caps.circuits = value.trim().parse().map_err(bad)?,
            "nodes" => caps.nodes = value.trim().parse().map_err(bad)?,
            "factorial" => caps.factorial_limit = value.trim().parse().map_err(bad)?,
            other => return Err(format!("PS_DEFAULT_CAPS: unknown key `{other}`")),
        }
    }
    Ok(caps)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Compute {
            input,
            method,
            caps,
            classes,
            reduce,
            json,
        } => caps
            .resolve()
            .map_err(Outcome::input)
            .and_then(|caps| commands::compute(&input, method, &caps, classes, reduce, json)),
        Command::Circuits {
            input,
            families,
            caps,
            json,
        } => caps
            .resolve()
            .map_err(Outcome::input)
            .and_then(|caps| commands::circuits(&input, families, &caps, json)),
        Command::Fuzz {
            max_vertices,
            max_edges,
            cases,
            seed,
            caps,
            json,
        } => caps
            .resolve()
            .map_err(Outcome::input)
            .and_then(|caps| commands::fuzz(max_vertices, max_edges, cases, seed, &caps, json)),
        Command::Reduce { input, json } => commands::reduce(&input, json),
    };
    let outcome = result.unwrap_or_else(|e| e);
    if let Some(msg) = &outcome.message {
        eprintln!("psnum: {msg}");
    }
    ExitCode::from(outcome.code)
}
