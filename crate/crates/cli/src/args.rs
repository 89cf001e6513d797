use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

/// A complete job: the parsed command line. It serializes to JSON and back
/// without loss, and `weilmod run --config job.json` replays it.
#[derive(Parser, Serialize, Deserialize, Clone, Debug, PartialEq)]
#[command(name = "weilmod", version, about = "Exact Weil representations, Weil factors and metaplectic cocycles")]
pub struct JobConfig {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    #[serde(default)]
    pub format: Format,

    /// `json`, `csv`, or a file path (a `.csv` extension selects CSV).
    #[arg(long, global = true)]
    #[serde(default)]
    pub out: Option<String>,

    /// Add a floating-point complex embedding next to cyclotomic values.
    /// The float is for reading only; the exact coefficients are authoritative.
    #[arg(long, global = true)]
    #[serde(default)]
    pub approx: bool,

    /// Worker threads; overrides WEILMOD_THREADS.
    #[arg(long, global = true)]
    #[serde(default)]
    pub threads: Option<usize>,

    /// Print this job as JSON instead of running it.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub print_config: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(ValueEnum, Serialize, Deserialize, Clone, Copy, Debug, PartialEq, Eq, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(ValueEnum, Serialize, Deserialize, Clone, Copy, Debug, PartialEq, Eq, Default)]
#[serde(rename_all = "lowercase")]
pub enum CocyclePath {
    #[default]
    Formula,
    Operator,
}

#[derive(Subcommand, Serialize, Deserialize, Clone, Debug, PartialEq)]
#[serde(tag = "command", rename_all = "lowercase")]
pub enum Command {
    /// Non-normalised Weil factor Ω(ψ∘Q) with the standard measure.
    Omega {
        /// `fq:p:f`, `fq:p` or `qp:p`.
        #[arg(long)]
        field: String,
        /// `diag:a,b,..` or `gram:a,b;c,d`.
        #[arg(long)]
        form: String,
        #[arg(long, default_value = "psi")]
        psi: String,
        /// `cyclo` or `fl:ℓ` / `fl:ℓ:d`.
        #[arg(long, default_value = "cyclo")]
        coeff: String,
    },
    /// Hilbert symbol (a, b)_F.
    Hilbert {
        #[arg(long)]
        field: String,
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
    },
    /// Hasse invariant and determinant class of a quadratic form.
    Hasse {
        #[arg(long)]
        field: String,
        #[arg(long)]
        form: String,
    },
    /// Metaplectic cocycle ĉ(g1, g2).
    Cocycle {
        #[arg(long)]
        field: String,
        #[arg(long, default_value_t = 1)]
        m: usize,
        /// Row-major matrix `a,b;c,d` or a JSON array of rows.
        #[arg(long)]
        g1: Option<String>,
        #[arg(long)]
        g2: Option<String>,
        #[arg(long, value_enum, default_value_t = CocyclePath::Formula)]
        path: CocyclePath,
        /// Every pair in Sp(W) (finite fields only).
        #[arg(long)]
        exhaustive: bool,
        /// This many seeded random pairs.
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "psi")]
        psi: String,
        #[arg(long, default_value = "cyclo")]
        coeff: String,
    },
    /// Bruhat decomposition g = p1·w_j·p2 and the invariant x(g).
    Bruhat {
        #[arg(long)]
        field: String,
        #[arg(long)]
        g: String,
    },
    /// All Schrödinger-model operators ρ(h) over a finite field.
    Heisenberg {
        #[arg(long)]
        field: String,
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[arg(long, default_value = "psi")]
        psi: String,
        #[arg(long, default_value = "cyclo")]
        coeff: String,
        /// Write the operators to this JSON file.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Weil operators σ(g) over a finite field.
    Weilrep {
        #[arg(long)]
        field: String,
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[arg(long)]
        g: Option<String>,
        /// Every element of Sp₂(F_q) (m = 1).
        #[arg(long)]
        all: bool,
        #[arg(long, default_value = "psi")]
        psi: String,
        #[arg(long, default_value = "cyclo")]
        coeff: String,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Theta lift table for the pair O(V) × Sp_{2m'}.
    Theta {
        #[arg(long)]
        field: String,
        #[arg(long = "V")]
        #[serde(rename = "V")]
        v: String,
        #[arg(long, default_value_t = 1)]
        mprime: usize,
        #[arg(long, default_value = "psi")]
        psi: String,
        #[arg(long, default_value = "cyclo")]
        coeff: String,
        /// Also compare with the reduction mod this ℓ.
        #[arg(long)]
        congruence: Option<u64>,
    },
    /// Runs the seeded invariant suites.
    Selfcheck {
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Run only this suite.
        #[arg(long)]
        suite: Option<u32>,
    },
    /// Replays a job written by `--print-config`.
    Run {
        #[arg(long)]
        config: PathBuf,
    },
}
