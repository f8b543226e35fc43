//! Empirical fits of asymptotic laws: Mertens-type products and sums over an
//! arithmetical list of primes, the density constant `A_M` of its population,
//! harmonic and Laplace sums over the population, and series-minus-integral
//! constants.
//!
//! Every fit reports the per-point estimates of its constant together with an
//! oscillation band, the min/max of the estimates over the half of the grid
//! nearest the limit. None of these constants is certified.

use std::io::{self, Write};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::population::PopulationTable;
use crate::primes::ArithmeticalList;
use crate::report::{IdentityReport, Value};

/// Direction in which the grid approaches the asymptotic regime.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Limit {
    Infinity,
    Zero,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticFit {
    /// Descriptor of the list or set the fit is about.
    pub label: String,
    /// Name of the fitted quantity.
    pub quantity: String,
    /// Strictly increasing.
    pub grid: Vec<f64>,
    pub observed: Vec<f64>,
    pub model: Vec<f64>,
    /// Estimate of the constant at each grid point.
    pub estimates: Vec<f64>,
    /// Estimate at the grid point nearest the limit.
    pub constant: f64,
    pub band: (f64, f64),
    pub limit: Limit,
    /// Set when no theorem guarantees the constant exists.
    pub exploratory: bool,
}

impl AsymptoticFit {
    fn new(
        label: String,
        quantity: &str,
        grid: Vec<f64>,
        observed: Vec<f64>,
        estimates: Vec<f64>,
        limit: Limit,
        model: impl Fn(f64, f64) -> f64,
    ) -> Self {
        let n = grid.len();
        let (near, constant) = match limit {
            Limit::Infinity => (n / 2..n, estimates[n - 1]),
            Limit::Zero => (0..n.div_ceil(2), estimates[0]),
        };
        let band = estimates[near]
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &e| (lo.min(e), hi.max(e)));
        let model = grid.iter().map(|&x| model(x, constant)).collect();
        Self {
            label,
            quantity: quantity.to_string(),
            grid,
            observed,
            model,
            estimates,
            constant,
            band,
            limit,
            exploratory: false,
        }
    }

    pub fn band_width(&self) -> f64 {
        self.band.1 - self.band.0
    }

    pub fn grid_max(&self) -> f64 {
        *self.grid.last().expect("fits have a nonempty grid")
    }

    /// `x,observed,model,constant_estimate`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "x,observed,model,constant_estimate")?;
        for i in 0..self.grid.len() {
            writeln!(
                out,
                "{:e},{:e},{:e},{:e}",
                self.grid[i], self.observed[i], self.model[i], self.estimates[i]
            )?;
        }
        Ok(())
    }

    /// Header and value line `constant,band_lo,band_hi,grid_max`.
    pub fn summary(&self) -> String {
        format!(
            "constant,band_lo,band_hi,grid_max\n{},{},{},{:e}\n",
            self.constant,
            self.band.0,
            self.band.1,
            self.grid_max()
        )
    }

    /// Whether `|estimate - target|` over the top decade of the grid stays
    /// below its value over the bottom decade (at the mean).
    pub fn trends_toward(&self, target: f64) -> bool {
        let lo = self.grid[0];
        let hi = self.grid_max();
        let mean_dev = |keep: &dyn Fn(f64) -> bool| {
            let devs: Vec<f64> = self
                .grid
                .iter()
                .zip(&self.estimates)
                .filter(|(x, _)| keep(**x))
                .map(|(_, e)| (e - target).abs())
                .collect();
            devs.iter().sum::<f64>() / devs.len() as f64
        };
        let (top, bottom) = match self.limit {
            Limit::Infinity => (
                mean_dev(&|x| x >= hi / 10.0 * (1.0 - 1e-12)),
                mean_dev(&|x| x <= lo * 10.0 * (1.0 + 1e-12)),
            ),
            Limit::Zero => (
                mean_dev(&|x| x <= lo * 10.0 * (1.0 + 1e-12)),
                mean_dev(&|x| x >= hi / 10.0 * (1.0 - 1e-12)),
            ),
        };
        top <= bottom
    }
}

/// `per_decade` geometric steps from `lo` to `hi`, both included.
pub fn geometric_grid(lo: f64, hi: f64, per_decade: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0) || !(hi > lo) || per_decade == 0 {
        return Err(Error::Domain(format!(
            "grid needs 0 < lo < hi and at least one point per decade (got {lo}, {hi}, {per_decade})"
        )));
    }
    let decades = (hi / lo).log10();
    let steps = (decades * per_decade as f64).round().max(1.0) as usize;
    Ok((0..=steps)
        .map(|i| lo * 10f64.powf(decades * i as f64 / steps as f64))
        .map(|x| {
            // snap to exact powers of ten where the exponent is integral
            let e = x.log10().round();
            if (x.log10() - e).abs() < 1e-12 {
                10f64.powf(e)
            } else {
                x
            }
        })
        .collect())
}

/// Geometric, 10 per decade, `1e3 ..= 1e7`.
pub fn default_grid() -> Vec<f64> {
    geometric_grid(1e3, 1e7, 10).expect("valid constant grid")
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::Domain("empty grid".into()));
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Domain("grid must be strictly increasing".into()));
    }
    Ok(())
}

fn arithmetical_reason(list: &ArithmeticalList) -> Result<u64> {
    list.reason()
        .ok_or_else(|| Error::NotArithmetical(list.label()))
}

/// Cumulative `sum_{p <= x, p in M} term(p)` at each grid point.
fn prime_sums(list: &ArithmeticalList, grid: &[f64], term: impl Fn(f64) -> f64) -> Result<Vec<f64>> {
    let top = grid[grid.len() - 1].floor() as u64;
    let primes = list.primes_up_to(top)?;
    let mut out = Vec::with_capacity(grid.len());
    let mut acc = 0.0;
    let mut i = 0;
    for &x in grid {
        while i < primes.len() && primes[i] as f64 <= x {
            acc += term(primes[i] as f64);
            i += 1;
        }
        out.push(acc);
    }
    Ok(out)
}

fn require_lnln(grid: &[f64]) -> Result<()> {
    check_grid(grid)?;
    if grid[0] < 3.0 {
        return Err(Error::Domain(format!("ln ln x needs x >= 3 (got {})", grid[0])));
    }
    Ok(())
}

/// `gamma_M` in `prod_{p <= x, p in M} (1 - 1/p)^-1 ~ e^{gamma_M} (ln x)^{1/r}`.
pub fn mertens_fit(list: &ArithmeticalList, grid: &[f64]) -> Result<AsymptoticFit> {
    let r = arithmetical_reason(list)? as f64;
    require_lnln(grid)?;
    let observed = prime_sums(list, grid, |p| -(-1.0 / p).ln_1p())?;
    let estimates = grid
        .iter()
        .zip(&observed)
        .map(|(&x, &o)| o - x.ln().ln() / r)
        .collect();
    Ok(AsymptoticFit::new(
        list.label(),
        "gamma_M",
        grid.to_vec(),
        observed,
        estimates,
        Limit::Infinity,
        |x, c| x.ln().ln() / r + c,
    ))
}

/// Residual of `sum_{p <= x, p in M} ln(p)/p - (1/r) ln x`, expected bounded.
pub fn lnp_over_p(list: &ArithmeticalList, grid: &[f64]) -> Result<AsymptoticFit> {
    let r = arithmetical_reason(list)? as f64;
    check_grid(grid)?;
    if grid[0] < 1.0 {
        return Err(Error::Domain(format!("grid must start at x >= 1 (got {})", grid[0])));
    }
    let observed = prime_sums(list, grid, |p| p.ln() / p)?;
    let estimates = grid.iter().zip(&observed).map(|(&x, &o)| o - x.ln() / r).collect();
    Ok(AsymptoticFit::new(
        list.label(),
        "lnp_over_p_residual",
        grid.to_vec(),
        observed,
        estimates,
        Limit::Infinity,
        |x, c| x.ln() / r + c,
    ))
}

/// `b` in `sum_{p <= x, p in M} 1/p = (1/r) ln ln x + b + o(1)`.
pub fn one_over_p(list: &ArithmeticalList, grid: &[f64]) -> Result<AsymptoticFit> {
    let r = arithmetical_reason(list)? as f64;
    require_lnln(grid)?;
    let observed = prime_sums(list, grid, |p| 1.0 / p)?;
    let estimates = grid
        .iter()
        .zip(&observed)
        .map(|(&x, &o)| o - x.ln().ln() / r)
        .collect();
    Ok(AsymptoticFit::new(
        list.label(),
        "b",
        grid.to_vec(),
        observed,
        estimates,
        Limit::Infinity,
        |x, c| x.ln().ln() / r + c,
    ))
}

/// `A_M` in the conjectured `N_pop(x) ~ A_M x (ln x)^{1/r} / ln x`, estimated
/// pointwise as `N_pop(x) ln x / (x (ln x)^{1/r})`. Always exploratory.
pub fn estimate_a(list: &ArithmeticalList, grid: &[f64], table: &PopulationTable) -> Result<AsymptoticFit> {
    let r = arithmetical_reason(list)? as f64;
    check_grid(grid)?;
    if grid[0] <= 1.0 {
        return Err(Error::Domain(format!("grid must start above 1 (got {})", grid[0])));
    }
    let shape = |x: f64| x * x.ln().powf(1.0 / r) / x.ln();
    let observed = grid
        .iter()
        .map(|&x| table.n_pop(x).map(|n| n as f64))
        .collect::<Result<Vec<_>>>()?;
    let estimates = grid.iter().zip(&observed).map(|(&x, &n)| n / shape(x)).collect();
    let mut fit = AsymptoticFit::new(
        table.label().to_string(),
        "A_M",
        grid.to_vec(),
        observed,
        estimates,
        Limit::Infinity,
        |x, c| c * shape(x),
    );
    fit.exploratory = true;
    Ok(fit)
}

/// Ratio `S_pop(x; 1) / (r A(x) (ln x)^{1/r})` on the grid of `a_fit`, with
/// `A(x)` the pointwise density estimate at the same `x`.
pub fn mesch_check(
    list: &ArithmeticalList,
    table: &PopulationTable,
    a_fit: &AsymptoticFit,
) -> Result<AsymptoticFit> {
    let r = arithmetical_reason(list)? as f64;
    let grid = &a_fit.grid;
    let observed = grid
        .iter()
        .map(|&x| table.s_pop(x, 1.0))
        .collect::<Result<Vec<_>>>()?;
    let model: Vec<f64> = grid
        .iter()
        .zip(&a_fit.estimates)
        .map(|(&x, &a)| r * a * x.ln().powf(1.0 / r))
        .collect();
    let estimates = observed.iter().zip(&model).map(|(o, m)| o / m).collect();
    let mut fit = AsymptoticFit::new(
        table.label().to_string(),
        "harmonic_ratio",
        grid.clone(),
        observed,
        estimates,
        Limit::Infinity,
        |_, _| 0.0,
    );
    fit.model = model;
    fit.exploratory = a_fit.exploratory;
    Ok(fit)
}

/// Laplace sums over the population at small `x`.
#[derive(Debug, Clone, PartialEq)]
pub struct LaplaceCheck {
    /// Ratio of the sum to `(A/x) (ln 1/x)^{1/r - 1}`.
    pub fit: AsymptoticFit,
    /// `sum e^{-nx}` against `x int_1^inf N_pop(t) e^{-tx} dt`, per grid point.
    pub identity: Vec<IdentityReport>,
}

/// Relative tolerance of the exact Laplace identity.
pub const LAPLACE_TOL: f64 = 1e-10;

/// Checks `sum_{n in pop} e^{-nx} = x int_1^inf N_pop(t) e^{-tx} dt` exactly,
/// and the ratio of the sum to `(A/x) (ln 1/x)^{1/r - 1}` for `x -> 0`.
///
/// Members beyond `40/x` contribute less than `e^-40` relative and are
/// dropped, so the table must reach `40/x`.
pub fn sigexp_check(
    list: &ArithmeticalList,
    grid: &[f64],
    a_est: f64,
    table: &PopulationTable,
) -> Result<LaplaceCheck> {
    let r = arithmetical_reason(list)? as f64;
    check_grid(grid)?;
    if !(grid[0] > 0.0) || grid[grid.len() - 1] >= 1.0 {
        return Err(Error::Domain("Laplace grid must lie in (0, 1)".into()));
    }
    let need = (40.0 / grid[0]).ceil();
    if need > table.bound() as f64 {
        return Err(Error::OutOfRange {
            value: need,
            bound: table.bound(),
        });
    }
    let sides: Vec<(f64, f64)> = grid
        .par_iter()
        .map(|&x| {
            let members = &table.members()[..table.count((40.0 / x).ceil() as u64)];
            let direct: f64 = members.iter().rev().map(|&n| (-(n as f64) * x).exp()).sum();
            // N_pop = k on [m_k, m_{k+1}): x int = k (e^{-m_k x} - e^{-m_{k+1} x})
            let mut integral = 0.0;
            for k in (0..members.len()).rev() {
                let hi = members.get(k + 1).map_or(0.0, |&m| (-(m as f64) * x).exp());
                integral += (k + 1) as f64 * ((-(members[k] as f64) * x).exp() - hi);
            }
            (direct, integral)
        })
        .collect();

    let identity = grid
        .iter()
        .zip(&sides)
        .map(|(&x, &(direct, integral))| {
            let residual = direct - integral;
            let tolerance = LAPLACE_TOL * direct.abs();
            IdentityReport {
                identity_id: "laplace-step-integral".into(),
                list: list.label(),
                x: format!("{x:e}"),
                a: String::new(),
                lhs: Value::Float(direct),
                rhs: Value::Float(integral),
                residual: Value::Float(residual),
                err: 0.0,
                tolerance,
                pass: residual.abs() <= tolerance,
            }
        })
        .collect();

    let shape = |x: f64| (1.0 / x) * (1.0 / x).ln().powf(1.0 / r - 1.0);
    let observed: Vec<f64> = sides.iter().map(|s| s.0).collect();
    let estimates = grid
        .iter()
        .zip(&observed)
        .map(|(&x, &o)| o / (a_est * shape(x)))
        .collect();
    let mut fit = AsymptoticFit::new(
        table.label().to_string(),
        "laplace_ratio",
        grid.to_vec(),
        observed,
        estimates,
        Limit::Zero,
        |x, _| a_est * shape(x),
    );
    fit.exploratory = true;
    Ok(LaplaceCheck { fit, identity })
}

/// A positive decreasing function vanishing at infinity, with its integral
/// over an interval.
pub trait DecreasingFn {
    fn value(&self, t: f64) -> f64;

    /// `int_a^b f`, by 8-point Gauss-Legendre unless overridden.
    fn integral(&self, a: f64, b: f64) -> f64 {
        const NODES: [f64; 4] = [
            0.183_434_642_495_649_8,
            0.525_532_409_916_329,
            0.796_666_477_413_626_7,
            0.960_289_856_497_536_3,
        ];
        const WEIGHTS: [f64; 4] = [
            0.362_683_783_378_362,
            0.313_706_645_877_887_3,
            0.222_381_034_453_374_5,
            0.101_228_536_290_376_3,
        ];
        let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
        h * NODES
            .iter()
            .zip(WEIGHTS)
            .map(|(&x, w)| w * (self.value(c - h * x) + self.value(c + h * x)))
            .sum::<f64>()
    }
}

impl<F: Fn(f64) -> f64> DecreasingFn for F {
    fn value(&self, t: f64) -> f64 {
        self(t)
    }
}

/// `t^-a` for `a > 0`, integrated in closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerDecay(pub f64);

impl DecreasingFn for PowerDecay {
    fn value(&self, t: f64) -> f64 {
        t.powf(-self.0)
    }

    fn integral(&self, a: f64, b: f64) -> f64 {
        if self.0 == 1.0 {
            (b / a).ln()
        } else {
            (b.powf(1.0 - self.0) - a.powf(1.0 - self.0)) / (1.0 - self.0)
        }
    }
}

/// `u_n = sum_{i <= n, i in A} f(i) - sum_{i <= n, i in A} int_i^{i+1} f`
/// at `n = n_max, n_max/2, n_max/4, ...`, so consecutive estimates give the
/// Cauchy gaps `|u_{2n} - u_n|`.
pub fn series_integral_constant(
    label: &str,
    members: &[u64],
    f: &dyn DecreasingFn,
    n_max: u64,
) -> Result<AsymptoticFit> {
    if n_max < 1 || members.first().is_none_or(|&m| m > n_max) {
        return Err(Error::Domain("the set must have members <= n_max".into()));
    }
    if members.windows(2).any(|w| w[1] <= w[0]) || members[0] == 0 {
        return Err(Error::Domain("members must be positive and increasing".into()));
    }
    // sampled decrease, positivity and decay
    let samples: Vec<f64> = (0..=64)
        .map(|i| f.value((n_max as f64 + 1.0).powf(i as f64 / 64.0)))
        .collect();
    if samples.iter().any(|v| !(*v > 0.0 && v.is_finite())) {
        return Err(Error::Precondition("f must be positive and finite on [1, n_max + 1]".into()));
    }
    if samples.windows(2).any(|w| w[1] > w[0]) || !(samples[64] < samples[0]) {
        return Err(Error::Precondition("f must be decreasing".into()));
    }

    let mut grid: Vec<u64> = std::iter::successors(Some(n_max), |&n| (n > 1).then_some(n / 2)).collect();
    grid.reverse();
    let mut sums = Vec::with_capacity(grid.len());
    let mut integrals = Vec::with_capacity(grid.len());
    let (mut s, mut integ) = (0.0, 0.0);
    let mut i = 0;
    for &n in &grid {
        while i < members.len() && members[i] <= n {
            let m = members[i] as f64;
            s += f.value(m);
            integ += f.integral(m, m + 1.0);
            i += 1;
        }
        sums.push(s);
        integrals.push(integ);
    }
    let estimates = sums.iter().zip(&integrals).map(|(s, i)| s - i).collect();
    let mut fit = AsymptoticFit::new(
        label.to_string(),
        "C_A",
        grid.iter().map(|&n| n as f64).collect(),
        sums,
        estimates,
        Limit::Infinity,
        |_, _| 0.0,
    );
    fit.model = integrals;
    Ok(fit)
}

/// `|u_{2n} - u_n|` along a doubling grid, from the bottom up.
pub fn cauchy_gaps(fit: &AsymptoticFit) -> Vec<f64> {
    fit.estimates.windows(2).map(|w| (w[1] - w[0]).abs()).collect()
}
