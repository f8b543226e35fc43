//! Complex evaluation of prime zeta sums `eta_M`, partial zeta functions `Z_M`,
//! their regularizations and the identities linking them, each value carrying
//! a heuristic truncation error.
//!
//! Tail estimates are heuristics, not certified bounds. The prime tail is
//! `sum_{p > P} p^-sigma ~ P^(1-sigma) / ((sigma - 1) ln P)`, scaled by the
//! density `1/r` of an arithmetical list.

mod checks;
mod products;
pub mod quad;
pub mod special;

use std::io::{self, Write};

use num_complex::Complex64;

pub use checks::{
    abel_integral_check, gamma_integral_check, log_mobius_check, method_agreement_check,
    perron_estimate, pi_log_check, power_identity_check, shift_identity_check,
    weierstrass_identity_check,
};
pub use products::{ak_profile, g_k, zeta_k_path};

use crate::error::{Error, Result};
use crate::population::PopulationTable;
use crate::primes::{ArithmeticalList, ListKind, PrimeTable};

/// Truncation and tolerance settings shared by every evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalConfig {
    /// Euler products and prime sums use primes `<= prime_cutoff`.
    pub prime_cutoff: u64,
    /// Dirichlet series use members `<= series_cutoff`.
    pub series_cutoff: u64,
    /// Relative tolerance of adaptive quadrature.
    pub quad_tol: f64,
    /// Order `k` of the Weierstrass factors used by `g_k`.
    pub weierstrass_order: u32,
    /// Lower end of the numerical part of the Gamma integral.
    pub small_t: f64,
    /// Number of Möbius terms in the logarithmic inversion.
    pub mobius_terms: usize,
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self {
            prime_cutoff: 1_000_000,
            series_cutoff: 1_000_000,
            quad_tol: 1e-10,
            weierstrass_order: 2,
            small_t: 5e-5,
            mobius_terms: 64,
        }
    }
}

impl EvalConfig {
    pub fn validate(&self) -> Result<()> {
        if self.prime_cutoff < 2 {
            return Err(Error::Domain("prime cutoff must be >= 2".into()));
        }
        if self.series_cutoff < 1 {
            return Err(Error::Domain("series cutoff must be >= 1".into()));
        }
        if self.weierstrass_order < 1 {
            return Err(Error::Domain("Weierstrass order must be >= 1".into()));
        }
        if !(self.quad_tol > 0.0) || !(self.small_t > 0.0) || self.mobius_terms < 1 {
            return Err(Error::Domain(
                "quadrature tolerance, small t and Möbius terms must be positive".into(),
            ));
        }
        Ok(())
    }

    pub fn with_prime_cutoff(mut self, p: u64) -> Self {
        self.prime_cutoff = p;
        self
    }

    pub fn with_series_cutoff(mut self, n: u64) -> Self {
        self.series_cutoff = n;
        self
    }
}

/// A complex value with its heuristic truncation error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalResult {
    pub value: Complex64,
    pub err: f64,
    pub config: EvalConfig,
}

/// Euler product or Dirichlet series for `Z_M`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    EulerProduct,
    DirichletSeries,
}

/// `p^-s`.
#[inline]
pub(crate) fn pow_neg(p: u64, s: Complex64) -> Complex64 {
    (-s * (p as f64).ln()).exp()
}

/// `sum_{m > k} z^m / m = -ln(1 - z) - sum_{m <= k} z^m / m`, for `|z| < 1`.
pub(crate) fn weierstrass_remainder(z: Complex64, k: u32) -> Complex64 {
    if z.norm() < 0.5 {
        let mut term = z.powu(k + 1);
        let mut m = (k + 1) as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        loop {
            let add = term / m;
            acc += add;
            if add.norm() <= 1e-18 * acc.norm().max(1e-300) {
                return acc;
            }
            term *= z;
            m += 1.0;
        }
    }
    let mut acc = -(Complex64::new(1.0, 0.0) - z).ln();
    let mut power = Complex64::new(1.0, 0.0);
    for m in 1..=k {
        power *= z;
        acc -= power / m as f64;
    }
    acc
}

/// Heuristic `sum_{p > P} p^-sigma` over all primes.
pub(crate) fn prime_tail(p: u64, sigma: f64) -> f64 {
    let pf = p as f64;
    pf.powf(1.0 - sigma) / ((sigma - 1.0) * pf.ln())
}

/// Fraction of primes beyond the cutoff expected to lie in the list.
pub(crate) fn tail_weight(list: &ArithmeticalList, cutoff: u64) -> f64 {
    match list.kind() {
        ListKind::Explicit(ps) => {
            if ps.last().is_some_and(|&p| p > cutoff) {
                1.0
            } else {
                0.0
            }
        }
        ListKind::Arithmetical { r, .. } => 1.0 / *r as f64,
        ListKind::Complement(inner) if matches!(**inner, ListKind::Full) => 0.0,
        _ => 1.0,
    }
}

pub(crate) fn require_re(s: Complex64, bound: f64, what: &str) -> Result<()> {
    if !(s.re > bound) || !s.im.is_finite() {
        return Err(Error::Domain(format!("{what} needs Re(s) > {bound} (got s = {s})")));
    }
    Ok(())
}

/// Primes of `list` up to the configured cutoff.
pub(crate) fn cutoff_primes<'l>(list: &'l ArithmeticalList, cfg: &EvalConfig) -> Result<&'l [u64]> {
    cfg.validate()?;
    list.primes_up_to(cfg.prime_cutoff)
}

/// All primes up to the cutoff from a table that must reach it.
pub(crate) fn table_primes<'t>(table: &'t PrimeTable, cfg: &EvalConfig) -> Result<&'t [u64]> {
    cfg.validate()?;
    if table.limit() < cfg.prime_cutoff {
        return Err(Error::InsufficientMaterialization {
            have: table.limit(),
            need: cfg.prime_cutoff,
        });
    }
    Ok(&table.primes()[..table.count_up_to(cfg.prime_cutoff)])
}

pub(crate) fn fmt_s(s: Complex64) -> String {
    if s.im == 0.0 {
        format!("{}", s.re)
    } else {
        format!("{}{:+}i", s.re, s.im)
    }
}

/// `eta_M(s) = sum_{p in M} p^-s`, for `Re(s) > 1`.
pub fn eta(list: &ArithmeticalList, s: Complex64, cfg: &EvalConfig) -> Result<EvalResult> {
    require_re(s, 1.0, "eta")?;
    let primes = cutoff_primes(list, cfg)?;
    let value = primes.iter().rev().map(|&p| pow_neg(p, s)).sum();
    Ok(EvalResult {
        value,
        err: tail_weight(list, cfg.prime_cutoff) * prime_tail(cfg.prime_cutoff, s.re),
        config: *cfg,
    })
}

/// `d/ds eta_M(s) = -sum_{p in M} ln(p) p^-s`, for `Re(s) > 1`.
pub fn eta_derivative(list: &ArithmeticalList, s: Complex64, cfg: &EvalConfig) -> Result<EvalResult> {
    require_re(s, 1.0, "eta derivative")?;
    let primes = cutoff_primes(list, cfg)?;
    let value = -primes
        .iter()
        .rev()
        .map(|&p| (p as f64).ln() * pow_neg(p, s))
        .sum::<Complex64>();
    let pf = cfg.prime_cutoff as f64;
    // sum_{p > P} ln p p^-sigma ~ int_P^inf t^-sigma dt
    let err = tail_weight(list, cfg.prime_cutoff) * pf.powf(1.0 - s.re) / (s.re - 1.0);
    Ok(EvalResult {
        value,
        err,
        config: *cfg,
    })
}

/// `Z_M(s)` as the Euler product over primes `<= P`.
pub fn zeta_euler(list: &ArithmeticalList, s: Complex64, cfg: &EvalConfig) -> Result<EvalResult> {
    require_re(s, 1.0, "partial zeta")?;
    let primes = cutoff_primes(list, cfg)?;
    // summing -ln(1 - p^-s) smallest-first keeps rounding near one ulp;
    // a running product of ~1e5 factors drifts by hundreds of ulps
    let log: Complex64 = primes
        .iter()
        .rev()
        .map(|&p| weierstrass_remainder(pow_neg(p, s), 0))
        .sum();
    let value = log.exp();
    let pf = cfg.prime_cutoff as f64;
    // log-tail sum_{p > P} -ln(1 - p^-s) <= tail / (1 - P^-sigma)
    let tail = tail_weight(list, cfg.prime_cutoff) * prime_tail(cfg.prime_cutoff, s.re)
        / (1.0 - pf.powf(-s.re));
    Ok(EvalResult {
        value,
        err: value.norm() * tail.exp_m1(),
        config: *cfg,
    })
}

/// `Z_M(s)` as the Dirichlet series over members `<= N` of a population table.
pub fn zeta_dirichlet(table: &PopulationTable, s: Complex64, cfg: &EvalConfig) -> Result<EvalResult> {
    require_re(s, 1.0, "partial zeta")?;
    cfg.validate()?;
    let n = cfg.series_cutoff;
    if n > table.bound() {
        return Err(Error::OutOfRange {
            value: n as f64,
            bound: table.bound(),
        });
    }
    let members = &table.members()[..table.count(n)];
    let value = members.iter().rev().map(|&m| pow_neg(m, s)).sum();
    let nf = n as f64;
    // members beyond N assumed to keep the density N_pop(N) / N
    let density = members.len() as f64 / nf;
    let err = density * nf.powf(1.0 - s.re) / (s.re - 1.0);
    Ok(EvalResult {
        value,
        err,
        config: *cfg,
    })
}

/// `Z_M(s)` by either method; the Dirichlet series enumerates the population.
pub fn zeta_partial(
    list: &ArithmeticalList,
    s: Complex64,
    method: Method,
    cfg: &EvalConfig,
) -> Result<EvalResult> {
    match method {
        Method::EulerProduct => zeta_euler(list, s, cfg),
        Method::DirichletSeries => {
            let mut list = list.clone();
            let table = crate::population::enumerate_pop(&mut list, cfg.series_cutoff)?;
            zeta_dirichlet(&table, s, cfg)
        }
    }
}

/// `ln W_M(s) = sum_p [-ln(1 - p^-s) - p^-s]` over primes `<= P`.
fn log_w(primes: &[u64], s: Complex64) -> Complex64 {
    primes
        .iter()
        .rev()
        .map(|&p| weierstrass_remainder(pow_neg(p, s), 1))
        .sum()
}

/// `W_M(s) = prod_p 1 / ((1 - p^-s) e^{p^-s})`, for `Re(s) > 1/2`.
pub fn w_regularized(list: &ArithmeticalList, s: Complex64, cfg: &EvalConfig) -> Result<EvalResult> {
    require_re(s, 0.5, "regularized product")?;
    let primes = cutoff_primes(list, cfg)?;
    let value = log_w(primes, s).exp();
    let pf = cfg.prime_cutoff as f64;
    // remainder terms are ~ p^-2s / 2
    let log_tail = tail_weight(list, cfg.prime_cutoff) * 0.5 * pf.powf(1.0 - 2.0 * s.re)
        / ((2.0 * s.re - 1.0) * pf.ln());
    Ok(EvalResult {
        value,
        err: value.norm() * log_tail.exp_m1(),
        config: *cfg,
    })
}

/// The first index and reason of an arithmetical list (`P` has `1:1`).
pub(crate) fn list_shape(list: &ArithmeticalList) -> Result<(u64, u64)> {
    match list.kind() {
        ListKind::Full => Ok((1, 1)),
        ListKind::Arithmetical { r0, r } => Ok((*r0, *r)),
        other => Err(Error::NotArithmetical(other.to_string())),
    }
}

/// Number of complete index blocks `p_{1 + nr} .. p_{r + nr}` among the primes.
fn complete_blocks(primes: &[u64], r: u64) -> usize {
    primes.len() / r as usize
}

/// `w_j(s) = sum_n (p_{1 + nr}^-s - p_{1 + j + nr}^-s)`, the paired alternating
/// series between `M_r` and its `j`-th shift, over complete blocks.
pub fn shift_pair_series(
    table: &PrimeTable,
    r: u64,
    j: u64,
    s: Complex64,
    cfg: &EvalConfig,
) -> Result<EvalResult> {
    require_re(s, 0.0, "paired series")?;
    if r < 1 || j >= r {
        return Err(Error::Domain(format!("need 0 <= j < r (got j={j}, r={r})")));
    }
    let primes = table_primes(table, cfg)?;
    let (r, j) = (r as usize, j as usize);
    let value = (0..complete_blocks(primes, r as u64))
        .rev()
        .map(|n| pow_neg(primes[n * r], s) - pow_neg(primes[n * r + j], s))
        .sum();
    Ok(EvalResult {
        value,
        err: if j == 0 { 0.0 } else { shift_tail(s, 1, cfg.prime_cutoff) },
        config: *cfg,
    })
}

/// Heuristic tail of a block-paired series beyond `P`: each block contributes
/// about `|s| * (spread of the block) * p^(-sigma - 1)`.
pub(crate) fn shift_tail(s: Complex64, r: u64, cutoff: u64) -> f64 {
    s.norm() * r as f64 * (cutoff as f64).powf(-s.re) / s.re
}

/// `w(s)` in `eta_1(s) = r eta_M(s) + w(s)`, for `Re(s) > 0`, summed block by
/// block: `sum_n [sum_{j < r} p_{1 + j + nr}^-s - r p_{r0 + nr}^-s]`.
pub fn w_shift(list: &ArithmeticalList, s: Complex64, cfg: &EvalConfig) -> Result<EvalResult> {
    require_re(s, 0.0, "shift function")?;
    let (r0, r) = list_shape(list)?;
    if r == 1 {
        return Ok(EvalResult {
            value: Complex64::new(0.0, 0.0),
            err: 0.0,
            config: *cfg,
        });
    }
    let primes = table_primes(list.table(), cfg)?;
    let (r0, ru) = (r0 as usize, r as usize);
    let value = (0..complete_blocks(primes, r))
        .rev()
        .map(|n| {
            let block = &primes[n * ru..(n + 1) * ru];
            let total: Complex64 = block.iter().map(|&p| pow_neg(p, s)).sum();
            total - r as f64 * pow_neg(block[r0 - 1], s)
        })
        .sum();
    Ok(EvalResult {
        value,
        err: shift_tail(s, r, cfg.prime_cutoff),
        config: *cfg,
    })
}

/// Grid dump: `re_s,im_s,re_val,im_val,err` per point.
pub fn write_grid<W: Write>(mut out: W, rows: &[(Complex64, EvalResult)]) -> io::Result<()> {
    writeln!(out, "re_s,im_s,re_val,im_val,err")?;
    for (s, r) in rows {
        writeln!(
            out,
            "{},{},{:e},{:e},{:e}",
            s.re, s.im, r.value.re, r.value.im, r.err
        )?;
    }
    Ok(())
}

/// `-s int_2^X pi(t) ln(t) t^(-s-1) dt`, integrated exactly over each interval
/// where `pi` is constant, with the tail beyond `X` bounded through `pi(t) <= t`.
pub fn pi_log_integral(table: &PrimeTable, s: Complex64, x_cut: u64, cfg: &EvalConfig) -> Result<EvalResult> {
    require_re(s, 1.0, "prime-counting integral")?;
    if table.limit() < x_cut {
        return Err(Error::InsufficientMaterialization {
            have: table.limit(),
            need: x_cut,
        });
    }
    if x_cut < 2 {
        return Err(Error::Domain("integral cut must be >= 2".into()));
    }
    // F(t) = -t^-s (s ln t + 1) / s^2 is an antiderivative of ln(t) t^(-s-1)
    let anti = |t: f64| -> Complex64 {
        let lt = t.ln();
        -(-s * lt).exp() * (s * lt + 1.0) / (s * s)
    };
    let primes = &table.primes()[..table.count_up_to(x_cut)];
    let mut edges: Vec<f64> = primes.iter().map(|&p| p as f64).collect();
    edges.push(x_cut as f64);
    let mut integral = Complex64::new(0.0, 0.0);
    let mut prev = anti(edges[0]);
    for (k, w) in edges.windows(2).enumerate() {
        let next = anti(w[1]);
        integral += (k as f64 + 1.0) * (next - prev);
        prev = next;
    }
    let value = -s * integral;
    let x = x_cut as f64;
    let sigma = s.re;
    let err = s.norm() * x.powf(1.0 - sigma) * (x.ln() / (sigma - 1.0) + 1.0 / (sigma - 1.0).powi(2));
    Ok(EvalResult {
        value,
        err,
        config: *cfg,
    })
}
