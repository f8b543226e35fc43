//! Complex Gamma and Riemann zeta functions.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// `Gamma(z)` by the Lanczos approximation, with reflection for `Re z < 1/2`.
pub fn gamma(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // Gamma(z) Gamma(1 - z) = pi / sin(pi z)
        return PI / ((PI * z).sin() * gamma(1.0 - z));
    }
    let z = z - 1.0;
    let mut acc = Complex64::new(LANCZOS[0], 0.0);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powc(z + 0.5) * (-t).exp() * acc
}

/// `B_{2j} / (2j)!` for `j = 1..=12`.
const BERNOULLI_OVER_FACTORIAL: [f64; 12] = [
    8.333_333_333_333_333e-2,
    -1.388_888_888_888_889e-3,
    3.306_878_306_878_307e-5,
    -8.267_195_767_195_768e-7,
    2.087_675_698_786_81e-8,
    -5.284_190_138_687_493e-10,
    1.338_253_653_068_468e-11,
    -3.389_680_296_322_583e-13,
    8.586_062_056_277_845e-15,
    -2.174_868_698_558_062e-16,
    5.509_002_828_360_23e-18,
    -1.395_446_468_581_252e-19,
];

/// Riemann `zeta(s)` for `s != 1` by Euler-Maclaurin summation.
pub fn riemann_zeta(s: Complex64) -> Result<Complex64> {
    if (s - 1.0).norm() < 1e-14 {
        return Err(Error::Domain("zeta has a pole at s = 1".into()));
    }
    if s.re < 0.0 {
        // functional equation: zeta(s) = 2^s pi^(s-1) sin(pi s / 2) Gamma(1 - s) zeta(1 - s)
        let one_minus = 1.0 - s;
        let two = Complex64::new(2.0, 0.0);
        let pi = Complex64::new(PI, 0.0);
        return Ok(two.powc(s)
            * pi.powc(s - 1.0)
            * (PI * s / 2.0).sin()
            * gamma(one_minus)
            * riemann_zeta(one_minus)?);
    }
    let n = 20usize.max(s.im.abs().ceil() as usize + 10);
    let nf = n as f64;
    let mut sum = Complex64::new(0.0, 0.0);
    for k in (1..n).rev() {
        sum += (-s * (k as f64).ln()).exp();
    }
    let n_s = (-s * nf.ln()).exp(); // N^-s
    sum += n_s * nf / (s - 1.0) + 0.5 * n_s;
    // sum_j B_2j/(2j)! s(s+1)...(s+2j-2) N^(-s-2j+1)
    let mut rising = s; // s (s+1) ... (s+2j-2)
    let mut power = n_s / nf; // N^(-s-1)
    for (j, &b) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        sum += b * rising * power;
        let m = 2.0 * j as f64;
        rising *= (s + m + 1.0) * (s + m + 2.0);
        power /= nf * nf;
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn gamma_values() {
        assert!((gamma(c(5.0, 0.0)) - 24.0).norm() < 1e-12);
        assert!((gamma(c(0.5, 0.0)) - PI.sqrt()).norm() < 1e-14);
        assert!((gamma(c(-0.5, 0.0)) + 2.0 * PI.sqrt()).norm() < 1e-13);
        // |Gamma(1/2 + i t)|^2 = pi / cosh(pi t)
        for t in [0.3, 2.0, 7.5] {
            let g = gamma(c(0.5, t));
            assert!((g.norm_sqr() / (PI / (PI * t).cosh()) - 1.0).abs() < 1e-12);
        }
        // recurrence Gamma(z + 1) = z Gamma(z)
        let z = c(2.0, 5.0);
        assert!(((gamma(z + 1.0) / (z * gamma(z))) - 1.0).norm() < 1e-13);
    }

    #[test]
    fn zeta_values() {
        assert!((riemann_zeta(c(2.0, 0.0)).unwrap() - PI * PI / 6.0).norm() < 1e-14);
        assert!((riemann_zeta(c(4.0, 0.0)).unwrap() - PI.powi(4) / 90.0).norm() < 1e-14);
        assert!((riemann_zeta(c(0.0, 0.0)).unwrap() + 0.5).norm() < 1e-14);
        assert!((riemann_zeta(c(-1.0, 0.0)).unwrap() + 1.0 / 12.0).norm() < 1e-13);
        // first nontrivial zero
        assert!(riemann_zeta(c(0.5, 14.134_725_141_734_693)).unwrap().norm() < 1e-10);
        // zeta(s) - 1/(s-1) -> Euler's gamma at s -> 1
        let s = c(1.0 + 1e-7, 0.0);
        let v = riemann_zeta(s).unwrap() - 1.0 / (s - 1.0);
        assert!((v.re - 0.577_215_664_901_532_9).abs() < 1e-6);
        assert!(riemann_zeta(c(1.0, 0.0)).is_err());
        // direct partial sums at s = 2 + 5i
        let s = c(2.0, 5.0);
        let direct: Complex64 = (1..200_000u32).rev().map(|n| (-s * (n as f64).ln()).exp()).sum();
        assert!((riemann_zeta(s).unwrap() - direct).norm() < 2e-5 * 5.4);
    }
}
