//! The factorization `zeta = g_k * zeta_k^k` and branch-tracked `zeta_k`.
//!
//! The primes split into the `k` lists `A_i = {p_i, p_{k+i}, p_{2k+i}, ...}`
//! with `A_1 = M_k`. Pairing `alpha_n = p_{1+(n-1)k}` with
//! `beta_n = p_{i+(n-1)k}` gives `alpha_n <= beta_n <= alpha_{n+1}`, and
//!
//! ```text
//! ln(Z_{A_i} / Z_{A_1}) = sum_n [R(beta_n^-s) - R(alpha_n^-s)]
//!                       + sum_{m <= K} (1/m) sum_n (beta_n^-ms - alpha_n^-ms)
//! ```
//!
//! where `R(z) = sum_{m > K} z^m / m` is the remainder of the order-`K`
//! Weierstrass factor. Both sums converge for `Re(s) > 1 / (K + 1)`, so
//! `ln g_k = sum_{i=2..k} ln(Z_{A_i} / Z_{A_1})` is defined there.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::special::riemann_zeta;
use super::{pow_neg, require_re, shift_tail, table_primes, weierstrass_remainder, EvalConfig, EvalResult};
use crate::error::{Error, Result};
use crate::primes::PrimeTable;

/// `ln g_k(s)` with its error on the logarithm.
fn log_g_k(table: &PrimeTable, s: Complex64, k: u64, cfg: &EvalConfig) -> Result<(Complex64, f64)> {
    if k < 1 {
        return Err(Error::Domain("k must be >= 1".into()));
    }
    let order = cfg.weierstrass_order;
    let floor = 1.0 / (order as f64 + 1.0);
    require_re(s, floor, "g_k")?;
    if k == 1 {
        return Ok((Complex64::new(0.0, 0.0), 0.0));
    }
    let primes = table_primes(table, cfg)?;
    let ku = k as usize;
    let blocks = primes.len() / ku;
    for n in 0..blocks {
        let alpha = primes[n * ku];
        let next = primes.get((n + 1) * ku).copied().unwrap_or(u64::MAX);
        if let Some(i) = (1..ku).find(|&i| {
            let beta = primes[n * ku + i];
            !(alpha <= beta && beta <= next)
        }) {
            return Err(Error::Interleaving {
                index: n + 1,
                detail: format!("list {} breaks alpha <= beta <= next alpha", i + 1),
            });
        }
    }

    let mut total = Complex64::new(0.0, 0.0);
    for n in (0..blocks).rev() {
        let za = pow_neg(primes[n * ku], s);
        let ra = weierstrass_remainder(za, order);
        for i in 1..ku {
            let zb = pow_neg(primes[n * ku + i], s);
            total += weierstrass_remainder(zb, order) - ra;
            let (mut pa, mut pb) = (Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0));
            for m in 1..=order {
                pa *= za;
                pb *= zb;
                total += (pb - pa) / m as f64;
            }
        }
    }

    // Alternating tails beyond P, one per Weierstrass power, and the
    // remainder tail ~ sum_{p > P} |p^-s|^{K+1} / (K + 1).
    let pf = cfg.prime_cutoff as f64;
    let sigma = s.re;
    let alt: f64 = (1..=order)
        .map(|m| shift_tail(s * m as f64, 1, cfg.prime_cutoff) / m as f64)
        .sum();
    let kk = (order + 1) as f64;
    let rem = if kk * sigma > 1.0 {
        pf.powf(1.0 - kk * sigma) / ((kk * sigma - 1.0) * pf.ln()) / kk
    } else {
        f64::INFINITY
    };
    Ok((total, (k - 1) as f64 * (alt + 2.0 * rem)))
}

/// `g_k(s)`, analytic and zero-free for `Re(s) > 1 / (K + 1)`; `g_1 = 1`.
pub fn g_k(table: &PrimeTable, s: Complex64, k: u64, cfg: &EvalConfig) -> Result<EvalResult> {
    let (log, log_err) = log_g_k(table, s, k, cfg)?;
    let value = log.exp();
    Ok(EvalResult {
        value,
        err: value.norm() * log_err.exp_m1(),
        config: *cfg,
    })
}

/// `zeta_k` along a path, continued through `exp((ln zeta - ln g_k) / k)` with
/// the branch of `ln zeta` tracked from the real anchor `path[0] > 1`, where
/// everything is real and positive.
pub fn zeta_k_path(
    table: &PrimeTable,
    k: u64,
    path: &[Complex64],
    cfg: &EvalConfig,
) -> Result<Vec<EvalResult>> {
    let anchor = *path
        .first()
        .ok_or_else(|| Error::Domain("path must contain at least the anchor".into()))?;
    if anchor.im != 0.0 || !(anchor.re > 1.0) {
        return Err(Error::Domain(format!(
            "path must start at a real point s0 > 1 (got {anchor})"
        )));
    }
    if k < 1 {
        return Err(Error::Domain("k must be >= 1".into()));
    }
    let mut out = Vec::with_capacity(path.len());
    let mut prev_log: Option<Complex64> = None;
    for (idx, &s) in path.iter().enumerate() {
        let z = riemann_zeta(s)?;
        if z.norm() < 1e-12 {
            return Err(Error::SingularPath(idx));
        }
        let mut log_zeta = z.ln();
        if let Some(prev) = prev_log {
            let turns = ((prev.im - log_zeta.im) / (2.0 * PI)).round();
            log_zeta.im += 2.0 * PI * turns;
            let jump = (log_zeta.im - prev.im).abs();
            if jump > PI / 4.0 {
                return Err(Error::PathTooCoarse {
                    from: idx - 1,
                    to: idx,
                    jump,
                });
            }
        }
        prev_log = Some(log_zeta);
        let (log_g, log_err) = log_g_k(table, s, k, cfg)?;
        let value = ((log_zeta - log_g) / k as f64).exp();
        out.push(EvalResult {
            value,
            err: value.norm() * (log_err / k as f64).exp_m1(),
            config: *cfg,
        });
    }
    Ok(out)
}

/// `zeta_k(s) (s - 1)^{1/k}` along a real path decreasing toward 1, whose
/// stabilization estimates the constant in `zeta_k(s) ~ A_k / (s - 1)^{1/k}`.
pub fn ak_profile(
    table: &PrimeTable,
    k: u64,
    s_values: &[f64],
    cfg: &EvalConfig,
) -> Result<Vec<(f64, EvalResult)>> {
    if s_values.iter().any(|&s| !(s > 1.0)) {
        return Err(Error::Domain("profile points must be real and > 1".into()));
    }
    let path: Vec<Complex64> = s_values.iter().map(|&s| Complex64::new(s, 0.0)).collect();
    let zk = zeta_k_path(table, k, &path, cfg)?;
    Ok(s_values
        .iter()
        .zip(zk)
        .map(|(&s, mut r)| {
            let scale = (s - 1.0).powf(1.0 / k as f64);
            r.value *= scale;
            r.err *= scale;
            (s, r)
        })
        .collect())
}
