use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

#[derive(Debug, Parser)]
#[command(
    name = "popzeta",
    version,
    about = "Populations of integers generated by sets of primes, their identities and partial zeta functions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// Which primes generate the population.
#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
pub struct ListSpec {
    /// Arithmetical list `r0:r`, i.e. primes p_{r0}, p_{r0+r}, ... (1:1 is all primes).
    #[arg(long, value_parser = parse_list)]
    pub list: Option<(u64, u64)>,
    /// Explicit comma-separated primes.
    #[arg(long, value_delimiter = ',', value_parser = parse_count)]
    pub primes: Option<Vec<u64>>,
}

#[derive(Debug, Clone, Args)]
pub struct EvalArgs {
    /// Euler products and prime sums use primes up to this cutoff.
    #[arg(long, default_value = "1e6", value_parser = parse_count)]
    pub prime_cutoff: u64,
    /// Dirichlet series use population members up to this cutoff.
    #[arg(long, default_value = "1e6", value_parser = parse_count)]
    pub series_cutoff: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Function {
    Zeta,
    Eta,
    EtaDerivative,
    W,
    WShift,
    GK,
    ZetaK,
    Perron,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Euler,
    Dirichlet,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MertensKind {
    /// Constant of the product over (1 - 1/p)^-1.
    Gamma,
    /// Residual of the sum of ln(p)/p.
    Lnp,
    /// Constant of the sum of 1/p.
    OneOverP,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the population members up to --max, one per line.
    Enumerate {
        #[command(flatten)]
        list: ListSpec,
        #[arg(long, value_parser = parse_count)]
        max: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Count the members up to --max, optionally checking inclusion-exclusion at every n <= max.
    Count {
        #[command(flatten)]
        list: ListSpec,
        #[arg(long, value_parser = parse_count)]
        max: u64,
        #[arg(long)]
        inclusion_exclusion: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Check summation identities at every integer x <= --max.
    Identities {
        #[command(flatten)]
        list: ListSpec,
        #[arg(long, value_parser = parse_count)]
        max: u64,
        /// Run every identity.
        #[arg(long, conflicts_with = "id")]
        all: bool,
        /// Identity to run (repeatable).
        #[arg(long, required_unless_present = "all")]
        id: Vec<String>,
        /// Exponent for identities that take one (repeatable).
        #[arg(long, allow_negative_numbers = true, default_values_t = [1.0])]
        a: Vec<f64>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Check power-series identities coefficient by coefficient.
    SeriesIdentities {
        #[command(flatten)]
        list: ListSpec,
        #[arg(long, default_value_t = 64)]
        degree: usize,
        #[arg(long, conflicts_with = "id")]
        all: bool,
        #[arg(long, required_unless_present = "all")]
        id: Vec<String>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Evaluate a zeta-type function at points s (CSV re_s,im_s,re_val,im_val,err).
    Eval {
        #[command(flatten)]
        list: ListSpec,
        #[arg(long, value_enum, default_value = "zeta")]
        function: Function,
        #[arg(long, value_enum, default_value = "euler")]
        method: MethodArg,
        /// Point `re` or `re,im` (repeatable; for zeta-k the path, starting at a real point > 1).
        #[arg(long, value_parser = parse_s, allow_negative_numbers = true)]
        s: Vec<Complex64>,
        /// Number of lists in the factorization (defaults to the reason of the list).
        #[arg(long)]
        k: Option<u64>,
        /// Perron: non-integer x.
        #[arg(long)]
        x: Option<f64>,
        /// Perron: abscissa of the vertical line.
        #[arg(long, default_value_t = 1.5)]
        sigma: f64,
        /// Perron: height of the truncated contour.
        #[arg(short = 'T', long = "height", default_value_t = 400.0)]
        t_max: f64,
        #[command(flatten)]
        cfg: EvalArgs,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Mertens-type fits over the primes of an arithmetical list.
    Mertens {
        #[command(flatten)]
        list: ListSpec,
        #[arg(long, value_enum, default_value = "gamma")]
        kind: MertensKind,
        #[arg(long, default_value = "1e3:1e6", value_parser = parse_grid)]
        grid: GridSpec,
        /// Write the per-point fit here.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Estimate the density constant A_M (exploratory).
    EstimateA {
        #[command(flatten)]
        list: ListSpec,
        #[arg(long, default_value = "1e3:1e7", value_parser = parse_grid)]
        grid: GridSpec,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Density, harmonic, Laplace and series-integral fits for one list.
    Asymptotics {
        #[command(flatten)]
        list: ListSpec,
        #[arg(long, default_value = "1e3:1e6", value_parser = parse_grid)]
        grid: GridSpec,
        /// Grid of small x for the Laplace sums.
        #[arg(long, default_value = "1e-3:1e-1", value_parser = parse_grid)]
        small_grid: GridSpec,
        /// Largest n for the series-minus-integral constant of 1/t.
        #[arg(long, default_value = "1e6", value_parser = parse_count)]
        n_max: u64,
        /// Directory for per-fit CSV dumps.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run the summation, series and analytic identity checks for one list.
    Report {
        #[command(flatten)]
        list: ListSpec,
        #[arg(long, default_value = "2000", value_parser = parse_count)]
        max: u64,
        #[arg(long, default_value_t = 64)]
        degree: usize,
        #[arg(long, value_parser = parse_s, allow_negative_numbers = true, default_values = ["2", "3", "2,5"])]
        s: Vec<Complex64>,
        #[command(flatten)]
        cfg: EvalArgs,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub lo: f64,
    pub hi: f64,
    pub per_decade: usize,
}

/// A nonnegative integer, also accepted in exponent form such as `1e6`.
pub fn parse_count(s: &str) -> Result<u64, String> {
    if let Ok(n) = s.parse::<u64>() {
        return Ok(n);
    }
    let x: f64 = s.parse().map_err(|_| format!("`{s}` is not a nonnegative integer"))?;
    if x.is_finite() && x >= 0.0 && x.fract() == 0.0 && x < 9.2e18 {
        Ok(x as u64)
    } else {
        Err(format!("`{s}` is not a nonnegative integer"))
    }
}

pub fn parse_list(s: &str) -> Result<(u64, u64), String> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| format!("`{s}` is not of the form r0:r"))?;
    let r0 = parse_count(a)?;
    let r = parse_count(b)?;
    if r0 < 1 || r < 1 {
        return Err("r0 and r must be >= 1".into());
    }
    if r0 > r {
        return Err(format!("first index {r0} exceeds the reason {r}"));
    }
    Ok((r0, r))
}

/// `lo:hi` or `lo:hi:points_per_decade`.
pub fn parse_grid(s: &str) -> Result<GridSpec, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let num = |t: &str| -> Result<f64, String> {
        t.parse::<f64>()
            .ok()
            .filter(|x| x.is_finite() && *x > 0.0)
            .ok_or_else(|| format!("`{t}` is not a positive number"))
    };
    let (lo, hi, per_decade) = match parts.as_slice() {
        [lo, hi] => (num(lo)?, num(hi)?, 10),
        [lo, hi, n] => (num(lo)?, num(hi)?, parse_count(n)? as usize),
        _ => return Err(format!("`{s}` is not of the form lo:hi[:per_decade]")),
    };
    if hi <= lo || per_decade == 0 {
        return Err(format!("grid `{s}` needs lo < hi and at least one point per decade"));
    }
    Ok(GridSpec { lo, hi, per_decade })
}

/// `re` or `re,im`.
pub fn parse_s(s: &str) -> Result<Complex64, String> {
    let num = |t: &str| -> Result<f64, String> {
        t.trim()
            .parse::<f64>()
            .ok()
            .filter(|x| x.is_finite())
            .ok_or_else(|| format!("`{t}` is not a number"))
    };
    match s.split_once(',') {
        Some((re, im)) => Ok(Complex64::new(num(re)?, num(im)?)),
        None => Ok(Complex64::new(num(s)?, 0.0)),
    }
}
