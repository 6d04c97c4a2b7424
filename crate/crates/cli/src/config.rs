use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use tdi_core::io::{parse_edge_list, parse_graph6, parse_weights, to_graph6, WeightKind};
use tdi_core::sdp::SolveOptions;
use tdi_core::tdi::WeightBox;
use tdi_core::{Graph, WeightVec};

use crate::output::CliError;

#[derive(Debug, Parser)]
#[command(name = "tdi", version, about = "Lifted SDP relaxations, integral certificates and TDI audits")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Edge-list file: `n` on the first line, then one `i j` per line.
    #[arg(long, global = true, value_name = "FILE")]
    pub graph: Option<PathBuf>,
    /// Graph in graph6 format.
    #[arg(long, global = true, value_name = "STRING")]
    pub g6: Option<String>,
    /// Integer weights: a JSON array, or lines `v w` (vertices) / `i j w`
    /// (edges) with unlisted entries 0. Default: all ones.
    #[arg(long, global = true, value_name = "FILE")]
    pub weights: Option<PathBuf>,
    /// Per-coordinate weight range of the audit box.
    #[arg(long = "box", global = true, value_name = "LO..HI", default_value = "0..2")]
    pub wbox: WeightBox,
    /// Seeded draws from {0..5} added to the audit box.
    #[arg(long, global = true, value_name = "N", default_value_t = 50)]
    pub samples: usize,
    #[arg(long, global = true, value_name = "N", default_value_t = 0)]
    pub seed: u64,
    /// Absolute duality gap at which the solver stops.
    #[arg(long, global = true, value_name = "X", default_value_t = 1e-8)]
    pub tol_gap: f64,
    /// Distance to the nearest integer accepted as integral.
    #[arg(long, global = true, value_name = "X", default_value_t = 1e-5)]
    pub tol_int: f64,
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Write the report to a file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Lovász theta or one of its variants.
    Theta {
        #[arg(long, value_enum, default_value = "theta")]
        variant: ThetaArg,
        /// Also print the primal matrix.
        #[arg(long)]
        show_primal: bool,
    },
    /// Minimum weighted clique cover with its integral dual certificate.
    Cover,
    /// Perfection test with clique, chromatic and stability numbers.
    Perfect,
    /// TDI check of the theta body on a weight box.
    TdiAudit {
        /// Audit every graph with up to N vertices instead of one graph.
        #[arg(long, value_name = "N")]
        corpus: Option<usize>,
        /// Include disconnected graphs in a corpus run.
        #[arg(long)]
        all: bool,
        /// Also audit integrality of the support values.
        #[arg(long)]
        integrality: bool,
    },
    /// MaxCut SDP value against the brute-force cut and the integer dual.
    Maxcut {
        #[arg(long, value_enum, default_value = "plain")]
        variant: MaxcutArg,
    },
    /// Exact integer dual of the MaxCut SDP with the closed-form check.
    MaxcutDual,
    /// Weak-duality chain for theta: alpha <= primal <= dual <= cover number.
    Chain,
    /// Summary table of every graph with up to N vertices.
    Corpus {
        #[arg(long, value_name = "N", default_value_t = 6)]
        max_n: usize,
        /// Include disconnected graphs.
        #[arg(long)]
        all: bool,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Theta { .. } => "theta",
            Command::Cover => "cover",
            Command::Perfect => "perfect",
            Command::TdiAudit { .. } => "tdi-audit",
            Command::Maxcut { .. } => "maxcut",
            Command::MaxcutDual => "maxcut-dual",
            Command::Chain => "chain",
            Command::Corpus { .. } => "corpus",
        }
    }

    fn weight_kind(&self) -> WeightKind {
        match self {
            Command::Maxcut { .. } | Command::MaxcutDual => WeightKind::Edge,
            _ => WeightKind::Vertex,
        }
    }

    fn needs_graph(&self) -> bool {
        match self {
            Command::Corpus { .. } => false,
            Command::TdiAudit { corpus, .. } => corpus.is_none(),
            _ => true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ThetaArg {
    Theta,
    #[value(name = "theta_prime", alias = "theta-prime")]
    ThetaPrime,
    #[value(name = "theta_plus", alias = "theta-plus")]
    ThetaPlus,
    Trace,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MaxcutArg {
    Plain,
    Homog,
    Strengthened,
}

/// Everything a report depends on. Equal configurations give byte-identical
/// reports.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    /// graph6 of the input graph.
    pub graph: Option<String>,
    pub weights: Option<Vec<i64>>,
    #[serde(rename = "box")]
    pub wbox: WeightBox,
    pub samples: usize,
    pub seed: u64,
    pub tol_gap: f64,
    pub tol_int: f64,
    #[serde(skip)]
    pub json: bool,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[serde(skip)]
    pub g: Option<Graph>,
}

impl RunConfig {
    pub fn resolve(cli: &Cli) -> Result<Self, CliError> {
        let c = &cli.common;
        for (name, v) in [("--tol-gap", c.tol_gap), ("--tol-int", c.tol_int)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(CliError::input(format!("{name} must be positive, got {v}")));
            }
        }
        let g = match (&c.graph, &c.g6) {
            (Some(_), Some(_)) => return Err(CliError::input("give either --graph or --g6, not both")),
            (Some(path), None) => Some(parse_edge_list(&read(path)?)?),
            (None, Some(s)) => Some(parse_graph6(s)?),
            (None, None) if cli.command.needs_graph() => {
                return Err(CliError::input("a graph is required (--graph or --g6)"))
            }
            (None, None) => None,
        };
        let weights = match (&g, &c.weights) {
            (Some(g), Some(path)) => Some(parse_weights(&read(path)?, g, cli.command.weight_kind())?),
            (None, Some(_)) => return Err(CliError::input("--weights needs a graph")),
            (Some(g), None) => Some(WeightVec::ones(match cli.command.weight_kind() {
                WeightKind::Vertex => g.n(),
                WeightKind::Edge => g.edge_count(),
            })),
            (None, None) => None,
        };
        Ok(RunConfig {
            command: cli.command.name(),
            graph: g.as_ref().map(to_graph6),
            weights: weights.map(|w| w.0),
            wbox: c.wbox,
            samples: c.samples,
            seed: c.seed,
            tol_gap: c.tol_gap,
            tol_int: c.tol_int,
            json: c.json,
            out: c.out.clone(),
            g,
        })
    }

    pub fn graph(&self) -> &Graph {
        self.g.as_ref().expect("graph resolved for this command")
    }

    pub fn weights(&self) -> WeightVec {
        WeightVec(self.weights.clone().expect("weights resolved with the graph"))
    }

    pub fn solve_options(&self) -> SolveOptions {
        SolveOptions {
            gap_tol: self.tol_gap,
            ..SolveOptions::default()
        }
    }
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path)
        .map_err(|e| CliError::input(format!("cannot read {}: {e}", path.display())))
}
