//! Command-line grammar.

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Numerical exploration of inequalities between bivariate means.
#[derive(Debug, Parser)]
#[command(name = "means-lab", version, about, long_about = None)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum OutFormat {
    #[default]
    Csv,
    Json,
}

/// A pair given as `--x/--y` or as a canonical ratio `--t` (scale 1).
#[derive(Debug, Clone, Args)]
pub struct PairArgs {
    /// First argument.
    #[arg(long, requires = "y", allow_negative_numbers = true)]
    pub x: Option<f64>,
    /// Second argument.
    #[arg(long, requires = "x", allow_negative_numbers = true)]
    pub y: Option<f64>,
    /// Canonical ratio max/min; the pair is (t, 1).
    #[arg(long, conflicts_with_all = ["x", "y"], allow_negative_numbers = true)]
    pub t: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct OutArgs {
    /// Output format.
    #[arg(long = "out", value_enum, default_value_t = OutFormat::Csv)]
    pub format: OutFormat,
}

/// Ratio region of a search.
#[derive(Debug, Clone, Args)]
pub struct RegionArgs {
    /// Inequality id (EQ2_PRODUCT, EQ1_POWER, EQ3_SUM, EQ4_SANDOR, EQ6_CONJ,
    /// P_LE_I, CHAIN_EQ10, LEMMA_EQ11).
    #[arg(long)]
    pub ineq: String,
    /// Smallest ratio.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub t_lo: f64,
    /// Largest ratio.
    #[arg(long, default_value_t = 1e8, allow_negative_numbers = true)]
    pub t_hi: f64,
    /// Number of ratio grid points.
    #[arg(long, default_value_t = 100)]
    pub t_steps: usize,
    /// Linear instead of logarithmic ratio spacing.
    #[arg(long)]
    pub linear: bool,
    /// Single exponent.
    #[arg(long, allow_negative_numbers = true, conflicts_with_all = ["n_lo", "n_hi"])]
    pub n: Option<f64>,
    /// First exponent of an exponent grid.
    #[arg(long, allow_negative_numbers = true, requires_all = ["n_hi", "n_steps"])]
    pub n_lo: Option<f64>,
    /// Last exponent of an exponent grid.
    #[arg(long, allow_negative_numbers = true, requires_all = ["n_lo", "n_steps"])]
    pub n_hi: Option<f64>,
    /// Number of exponents in the grid.
    #[arg(long, requires_all = ["n_lo", "n_hi"])]
    pub n_steps: Option<usize>,
    /// Seed of all randomized steps.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Maximum number of binary64 margin evaluations.
    #[arg(long, default_value_t = means_lab_core::explore::DEFAULT_BUDGET)]
    pub budget: usize,
}

#[derive(Debug, Clone, Args)]
pub struct PrecisionArgs {
    /// Starting precision of sign certification, in decimal digits
    /// (overrides MEANS_LAB_DIGITS).
    #[arg(long)]
    pub digits: Option<u32>,
}

#[derive(Debug, Clone, Args)]
pub struct ThreadArgs {
    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate one mean (or `all`).
    Eval {
        /// H, G, A, Q, P, L, I, or `all`.
        #[arg(long)]
        kind: String,
        #[command(flatten)]
        pair: PairArgs,
        /// Evaluate with the extended-precision oracle at this many digits.
        #[arg(long)]
        digits: Option<u32>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Margin of one inequality, with a certified sign.
    Margin {
        #[arg(long)]
        ineq: String,
        #[command(flatten)]
        pair: PairArgs,
        /// Exponent, for EQ1_POWER and LEMMA_EQ11.
        #[arg(long, allow_negative_numbers = true)]
        n: Option<f64>,
        #[command(flatten)]
        precision: PrecisionArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// The six chain quantities and their five consecutive margins.
    Chain {
        #[command(flatten)]
        pair: PairArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Residuals of the algebraic identities behind the product and sum
    /// inequalities.
    Identities {
        #[command(flatten)]
        pair: PairArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Power-sum lemma gap `c^n + d^n - a^n - b^n`.
    Lemma {
        #[arg(long, allow_negative_numbers = true)]
        a: f64,
        #[arg(long, allow_negative_numbers = true)]
        b: f64,
        #[arg(long, allow_negative_numbers = true)]
        c: f64,
        #[arg(long, allow_negative_numbers = true)]
        d: f64,
        /// Integer exponent.
        #[arg(long, allow_negative_numbers = true)]
        n: i32,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Sign map over a (ratio, exponent) grid.
    Scan {
        #[command(flatten)]
        region: RegionArgs,
        #[command(flatten)]
        precision: PrecisionArgs,
        #[command(flatten)]
        threads: ThreadArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Search for a certified counterexample; exits 3 when one is found.
    Hunt {
        #[command(flatten)]
        region: RegionArgs,
        /// Random samples per refinement interval.
        #[arg(long, default_value_t = 64)]
        refine_samples: usize,
        #[command(flatten)]
        precision: PrecisionArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Localize a sign change of a margin in the ratio by bisection.
    Bracket {
        #[arg(long)]
        ineq: String,
        #[arg(long, allow_negative_numbers = true)]
        n: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        t_lo: f64,
        #[arg(long, allow_negative_numbers = true)]
        t_hi: f64,
        /// Stop when ln(t_hi / t_lo) is at most this.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[command(flatten)]
        precision: PrecisionArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Per-exponent minimum of the power gap over (t_lo, t_hi].
    Profile {
        /// Comma-separated exponents.
        #[arg(
            long,
            value_delimiter = ',',
            allow_negative_numbers = true,
            default_value = "-2,-1,-0.5,0,0.25,0.5,0.75,1,1.5,2"
        )]
        n_list: Vec<f64>,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        t_lo: f64,
        #[arg(long, default_value_t = 1e6, allow_negative_numbers = true)]
        t_hi: f64,
        /// Coarse log-spaced grid points per exponent.
        #[arg(long, default_value_t = means_lab_core::explore::DEFAULT_MIN_GRID)]
        grid: usize,
        #[command(flatten)]
        precision: PrecisionArgs,
        #[command(flatten)]
        threads: ThreadArgs,
        #[command(flatten)]
        out: OutArgs,
    },
}
