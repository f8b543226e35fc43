//! Numerical checks of the analytic identities satisfied by `eta_M`, `Z_M`,
//! `W_M` and `g_k`. Every check reports both sides, the residual, and a
//! tolerance assembled from the tail estimates of the two sides.

use num_complex::Complex64;

use super::products::g_k;
use super::quad::integrate;
use super::special::{gamma, riemann_zeta};
use super::{
    cutoff_primes, eta, eta_derivative, fmt_s, list_shape, pi_log_integral, pow_neg, require_re,
    w_regularized, w_shift, weierstrass_remainder, zeta_dirichlet, zeta_euler, EvalConfig,
    EvalResult,
};
use crate::arithfun::arith_values;
use crate::error::{Error, Result};
use crate::population::{enumerate_pop, PopulationTable};
use crate::primes::{ArithmeticalList, ListKind};
use crate::report::{IdentityReport, Value};


fn report(
    id: &str,
    list: &ArithmeticalList,
    s: Complex64,
    a: String,
    lhs: Complex64,
    rhs: Complex64,
    err: f64,
    slack: f64,
) -> IdentityReport {
    let residual = lhs - rhs;
    let tolerance = err + slack;
    IdentityReport {
        identity_id: id.to_string(),
        list: list.label(),
        x: fmt_s(s),
        a,
        lhs: Value::Complex(lhs),
        rhs: Value::Complex(rhs),
        residual: Value::Complex(residual),
        err,
        tolerance,
        pass: residual.norm() <= tolerance,
    }
}

/// Slack for double-precision rounding accumulated over `terms` factors or
/// summands; it matters when both sides are truncated at the same primes and
/// the identity is then exact.
fn rounding(scale: f64, terms: usize) -> f64 {
    4.0 * f64::EPSILON * (terms as f64 + 16.0) * scale.max(1.0)
}

/// `Z_M = W_M e^{eta_M}`.
pub fn weierstrass_identity_check(
    list: &ArithmeticalList,
    s: Complex64,
    cfg: &EvalConfig,
) -> Result<IdentityReport> {
    require_re(s, 1.0, "product identity")?;
    let z = zeta_euler(list, s, cfg)?;
    let w = w_regularized(list, s, cfg)?;
    let e = eta(list, s, cfg)?;
    let rhs = w.value * e.value.exp();
    let tol = z.err + e.value.exp().norm() * w.err + rhs.norm() * e.err.exp_m1();
    Ok(report("weierstrass", list, s, String::new(), z.value, rhs, tol, rounding(rhs.norm(), cutoff_primes(list, cfg)?.len())))
}

/// `eta_1 = r eta_M + w`, with `w` summed over blocks of consecutive primes.
pub fn shift_identity_check(
    list: &ArithmeticalList,
    s: Complex64,
    cfg: &EvalConfig,
) -> Result<IdentityReport> {
    require_re(s, 1.0, "shift identity")?;
    let (_, r) = list_shape(list)?;
    let all = ArithmeticalList::full(cfg.prime_cutoff)?;
    let e1 = eta(&all, s, cfg)?;
    let em = eta(list, s, cfg)?;
    let w = w_shift(list, s, cfg)?;
    let rhs = r as f64 * em.value + w.value;
    let terms = cutoff_primes(&all, cfg)?.len();
    let tol = e1.err + r as f64 * em.err + w.err;
    Ok(report("shift", list, s, format!("r={r}"), e1.value, rhs, tol, rounding(rhs.norm(), terms)))
}

/// `zeta = g_k Z_M^k` for `M = M_k` (first index 1, `k` the reason), against
/// an independent evaluation of Riemann zeta.
pub fn power_identity_check(
    list: &ArithmeticalList,
    s: Complex64,
    cfg: &EvalConfig,
) -> Result<IdentityReport> {
    require_re(s, 1.0, "power identity")?;
    let (r0, k) = list_shape(list)?;
    if r0 != 1 {
        return Err(Error::Precondition(format!(
            "the power factorization is anchored on first index 1 (got {r0}:{k})"
        )));
    }
    let zeta = riemann_zeta(s)?;
    let zk = zeta_euler(list, s, cfg)?;
    let g = g_k(list.table(), s, k, cfg)?;
    let zn = zk.value.norm();
    let g_terms = list.table().count_up_to(cfg.prime_cutoff);
    let rhs = g.value * zk.value.powu(k as u32);
    let tol = g.err * zn.powi(k as i32) + g.value.norm() * k as f64 * zn.powi(k as i32 - 1) * zk.err;
    Ok(report("power", list, s, format!("k={k}"), zeta, rhs, tol, rounding(rhs.norm(), g_terms)))
}

/// Euler product against Dirichlet series over the population.
pub fn method_agreement_check(
    list: &ArithmeticalList,
    s: Complex64,
    cfg: &EvalConfig,
) -> Result<IdentityReport> {
    require_re(s, 1.0, "method agreement")?;
    let mut l = list.clone();
    let table = enumerate_pop(&mut l, cfg.series_cutoff)?;
    let e = zeta_euler(list, s, cfg)?;
    let d = zeta_dirichlet(&table, s, cfg)?;
    let tol = e.err + d.err;
    Ok(report(
        "euler-vs-dirichlet",
        list,
        s,
        format!("P={};N={}", cfg.prime_cutoff, cfg.series_cutoff),
        e.value,
        d.value,
        tol, rounding(e.value.norm(), table.count(cfg.series_cutoff)),
    ))
}

/// `eta_M(s) = sum_n mu(n)/n ln Z_M(ns)`, truncated at `n <= mobius_terms`.
///
/// Both sides use the same primes, on which the identity is exact, so only
/// the omitted `n` contribute to the tolerance.
pub fn log_mobius_check(
    list: &ArithmeticalList,
    s: Complex64,
    cfg: &EvalConfig,
) -> Result<IdentityReport> {
    require_re(s, 1.0, "logarithmic inversion")?;
    let primes = cutoff_primes(list, cfg)?;
    let lhs = eta(list, s, cfg)?.value;
    let mut rhs = Complex64::new(0.0, 0.0);
    for n in (1..=cfg.mobius_terms as u64).rev() {
        let mu = arith_values(n)?.mu;
        if mu == 0 {
            continue;
        }
        let ns = s * n as f64;
        let log_z: Complex64 = primes
            .iter()
            .rev()
            .map(|&p| weierstrass_remainder(pow_neg(p, ns), 0))
            .sum();
        rhs += log_z * (mu as f64 / n as f64);
    }
    let tail = match primes.first() {
        Some(&p) => {
            let n1 = (cfg.mobius_terms + 1) as f64;
            2.0 * (p as f64).powf(-n1 * s.re) / n1
        }
        None => 0.0,
    };
    Ok(report(
        "log-mobius",
        list,
        s,
        format!("terms={}", cfg.mobius_terms),
        lhs,
        rhs,
        tail, rounding(lhs.norm(), primes.len()),
    ))
}

/// Sums `x^n = e^{-n t}` over members with `n t <= 40`, stepping through the
/// gaps between consecutive members with precomputed factors.
fn g_pop_exp(members: &[u64], t: f64) -> f64 {
    let cut = (40.0 / t).floor();
    let n = members.partition_point(|&m| (m as f64) <= cut);
    if n == 0 {
        return 0.0;
    }
    let mut gap_factor: Vec<f64> = vec![1.0];
    let step = (-t).exp();
    let mut acc = 0.0;
    let mut term = (-(members[0] as f64) * t).exp();
    acc += term;
    for w in members[..n].windows(2) {
        let g = (w[1] - w[0]) as usize;
        while gap_factor.len() <= g {
            let last = *gap_factor.last().expect("nonempty");
            gap_factor.push(last * step);
        }
        term *= gap_factor[g];
        acc += term;
    }
    acc
}

/// `Gamma(s) Z_M(s) = int_0^inf G_pop(e^-t) t^(s-1) dt`.
///
/// The integral is computed numerically on `[t0, 60]` in the variable
/// `u = ln t`. Below `t0` the integrand is replaced by its leading behavior
/// `t0 G(e^-t0) t^(s-2)`, with half of that piece charged to the tolerance.
pub fn gamma_integral_check(
    list: &ArithmeticalList,
    s: Complex64,
    cfg: &EvalConfig,
) -> Result<IdentityReport> {
    require_re(s, 1.0, "Gamma integral")?;
    cfg.validate()?;
    let t0 = cfg.small_t;
    const T_MAX: f64 = 60.0;
    let bound = (40.0 / t0).ceil() as u64;
    let mut l = list.clone();
    let table = enumerate_pop(&mut l, bound)?;
    let members = table.members();

    let f = |u: f64| {
        let t = u.exp();
        g_pop_exp(members, t) * (s * u).exp()
    };
    let (integral, quad_err) = integrate(f, t0.ln(), T_MAX.ln(), 1e-14, cfg.quad_tol)?;
    let c0 = t0 * g_pop_exp(members, t0);
    let small = c0 * (t0.ln() * (s - 1.0)).exp() / (s - 1.0);
    // beyond T_MAX: G(e^-t) <= 2 e^-t, and t^(sigma-1) grows slowly
    let large = 2.0 * (-T_MAX).exp() * T_MAX.powf(s.re);
    let lhs = integral + small;

    let z = zeta_euler(list, s, cfg)?;
    let gs = gamma(s);
    let rhs = gs * z.value;
    let tol = quad_err + 0.5 * small.norm() + large + gs.norm() * z.err;
    Ok(report(
        "gamma-integral",
        list,
        s,
        format!("t0={t0:e}"),
        lhs,
        rhs,
        tol, rounding(rhs.norm(), members.len()),
    ))
}

/// `Z_M(s) = s int_1^inf N_pop(t) t^(-s-1) dt`, integrated exactly on each
/// interval of constancy of `N_pop` up to `x`.
pub fn abel_integral_check(
    list: &ArithmeticalList,
    table: &PopulationTable,
    s: Complex64,
    x: u64,
    cfg: &EvalConfig,
) -> Result<IdentityReport> {
    require_re(s, 1.0, "Abel integral")?;
    if x < 1 {
        return Err(Error::Domain("integral cut must be >= 1".into()));
    }
    if x > table.bound() {
        return Err(Error::OutOfRange {
            value: x as f64,
            bound: table.bound(),
        });
    }
    let members = &table.members()[..table.count(x)];
    // s int_a^b t^(-s-1) dt = a^-s - b^-s
    let mut lhs = Complex64::new(0.0, 0.0);
    let top = pow_neg(x, s);
    for k in (0..members.len()).rev() {
        let hi = members.get(k + 1).map_or(top, |&m| pow_neg(m, s));
        lhs += (k + 1) as f64 * (pow_neg(members[k], s) - hi);
    }
    let xf = x as f64;
    let density = members.len() as f64 / xf;
    let tail = s.norm() * density * xf.powf(1.0 - s.re) / (s.re - 1.0);
    let z = zeta_euler(list, s, cfg)?;
    Ok(report(
        "abel-integral",
        list,
        s,
        format!("X={x}"),
        lhs,
        z.value,
        tail + z.err, rounding(lhs.norm(), members.len()),
    ))
}

/// Perron estimate of `N_pop(x)`:
/// `(1/pi) Re int_0^T Z_M(sigma + it) x^(sigma + it) / (sigma + it) dt`
/// by the trapezoid rule with step about `0.1`. The reported error is the
/// truncation order `x^sigma / T`.
pub fn perron_estimate(
    list: &ArithmeticalList,
    x: f64,
    sigma: f64,
    t_max: f64,
    cfg: &EvalConfig,
) -> Result<EvalResult> {
    if !(x > 0.0) || x.fract() == 0.0 {
        return Err(Error::Domain(format!("Perron's formula needs non-integer x > 0 (got {x})")));
    }
    if !(sigma > 1.0) || !(t_max > 0.0) {
        return Err(Error::Domain(format!("need sigma > 1 and T > 0 (got {sigma}, {t_max})")));
    }
    let steps = (t_max / 0.1).ceil() as usize;
    let h = t_max / steps as f64;
    let lx = x.ln();
    let mut total = 0.0;
    let mut z_err = 0.0f64;
    for j in 0..=steps {
        let s = Complex64::new(sigma, j as f64 * h);
        let z = zeta_euler(list, s, cfg)?;
        let weight = if j == 0 || j == steps { 0.5 } else { 1.0 };
        total += weight * (z.value * (s * lx).exp() / s).re;
        z_err = z_err.max(z.err / s.norm());
    }
    let value = total * h / std::f64::consts::PI;
    let err = x.powf(sigma) / t_max + x.powf(sigma) * z_err * t_max / std::f64::consts::PI;
    Ok(EvalResult {
        value: Complex64::new(value, 0.0),
        err,
        config: *cfg,
    })
}

/// `eta_1'(s) - eta_1(s)/s = -s int_2^inf pi(t) ln(t) t^(-s-1) dt`, the
/// integral cut at the prime cutoff.
pub fn pi_log_check(list: &ArithmeticalList, s: Complex64, cfg: &EvalConfig) -> Result<IdentityReport> {
    if !matches!(list.kind(), ListKind::Full) {
        return Err(Error::Precondition(format!(
            "the prime-counting integral is stated for all primes (got {})",
            list.label()
        )));
    }
    require_re(s, 1.0, "prime-counting integral")?;
    let d = eta_derivative(list, s, cfg)?;
    let e = eta(list, s, cfg)?;
    let lhs = d.value - e.value / s;
    let rhs = pi_log_integral(list.table(), s, cfg.prime_cutoff, cfg)?;
    let tol = d.err + e.err / s.norm() + rhs.err;
    Ok(report(
        "pi-log-integral",
        list,
        s,
        format!("X={}", cfg.prime_cutoff),
        lhs,
        rhs.value,
        tol, rounding(lhs.norm(), list.table().count_up_to(cfg.prime_cutoff)),
    ))
}
