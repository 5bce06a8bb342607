use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "ergopt", version, about = "Ergodic optimization and discounted transfer-function experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum EvalMode {
    Direct,
    Closed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MinMeanMethod {
    Karp,
    BruteForce,
}

#[derive(Debug, Args)]
pub struct Common {
    /// System file (finite shift or rotation).
    #[arg(long)]
    pub system: PathBuf,
    /// Observable file; defaults to the weights embedded in the system file.
    #[arg(long)]
    pub obs: Option<PathBuf>,
    /// Transfer-function observable `u₀`; the tested `f` is `u₀∘σ - u₀`.
    #[arg(long)]
    pub u: Option<PathBuf>,
    /// Sample points file; defaults to all points within the size limits.
    #[arg(long)]
    pub points: Option<PathBuf>,
    /// Draw this many random points instead of enumerating.
    #[arg(long)]
    pub random_points: Option<usize>,
    #[arg(long, default_value_t = 3)]
    pub max_pre: usize,
    #[arg(long, default_value_t = 3)]
    pub max_cycle: usize,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Output format; inferred from the `--out` extension when omitted.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write an SVG plot of the result table.
    #[arg(long)]
    pub plot: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct Discount {
    #[arg(long, value_delimiter = ',', default_value = "0.1,0.01,0.001")]
    pub eps_list: Vec<f64>,
    /// Tail tolerance for direct summation.
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long, value_enum, default_value_t = EvalMode::Closed)]
    pub method: EvalMode,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Minimizing value and a minimizing cycle.
    Minmean {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = MinMeanMethod::Karp)]
        method: MinMeanMethod,
    },
    /// Critical subgraph with potentials.
    Mather {
        #[command(flatten)]
        common: Common,
    },
    /// Periodic point with nonpositive reduced prefix sums.
    Morris {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 10_000)]
        horizon: u64,
    },
    /// Range of integrals of an observable over invariant measures.
    Balance {
        #[command(flatten)]
        common: Common,
    },
    /// Transfer values, positive parts and defects over a sample.
    Subaction {
        #[command(flatten)]
        common: Common,
        /// Truncation horizon on rotations.
        #[arg(long, default_value_t = 10_000)]
        horizon: u64,
    },
    /// Two-sided Birkhoff-sum bounds on the critical subgraph.
    Corollary {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 10_000)]
        horizon: u64,
        #[arg(long, default_value_t = 6)]
        max_cycle_len: usize,
    },
    /// Discounted transfer values.
    Discounted {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        discount: Discount,
    },
    /// Residuals of the discounted cohomological equation.
    DceCheck {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        discount: Discount,
    },
    /// Gap in the identity `U_ε[u∘σ - u] = u - ∫u∘σ dμ_ε`.
    Lemma2 {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',', default_value = "0.5,0.1,0.01,0.001")]
        eps_list: Vec<f64>,
    },
    /// Sup error of `U_ε[u∘σ - u]` against `u - ∫u` for a balanced `u`.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        discount: Discount,
        #[arg(long, default_value_t = 1e-2)]
        threshold: f64,
    },
    /// Empirical-measure decomposition of the discounted measure.
    Decompose {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_delimiter = ',', default_value = "10000")]
        n: Vec<u64>,
        /// Discount rates; `ln n / n` when omitted.
        #[arg(long, value_delimiter = ',')]
        eps: Vec<f64>,
        /// Run the grid n ∈ {1e2..1e5} × ε ∈ {ln n/n, 2 ln n/n, 0.01}.
        #[arg(long)]
        grid: bool,
    },
    /// Two-word block schedule and the alternating discounted values.
    Oscillate {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "9")]
        n1: String,
        #[arg(long, default_value_t = 3)]
        pmax: usize,
        /// Comma-separated edge ids of the even-p word.
        #[arg(long)]
        w0: Option<String>,
        /// Comma-separated edge ids of the odd-p word.
        #[arg(long)]
        w1: Option<String>,
        /// Also write the schedule as JSON.
        #[arg(long)]
        schedule_out: Option<PathBuf>,
    },
}

impl Command {
    pub fn common(&self) -> &Common {
        match self {
            Command::Minmean { common, .. }
            | Command::Mather { common }
            | Command::Morris { common, .. }
            | Command::Balance { common }
            | Command::Subaction { common, .. }
            | Command::Corollary { common, .. }
            | Command::Discounted { common, .. }
            | Command::DceCheck { common, .. }
            | Command::Lemma2 { common, .. }
            | Command::Sweep { common, .. }
            | Command::Decompose { common, .. }
            | Command::Oscillate { common, .. } => common,
        }
    }
}
