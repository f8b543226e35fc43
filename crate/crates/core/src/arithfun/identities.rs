//! Summation identities over a population.
//!
//! Every identity has the shape
//!
//! ```text
//! sum_{i <= x, i in pop} l(i)  =  sum_{i <= x, i in pop} w(i) * V(x / i),
//! V(u) = sum_{j <= u, j in pop} v(j)
//! ```
//!
//! with `V = N_pop` when `v = 1` and `V = S_pop(.; a)` when `v(j) = j^-a`. The
//! left side is summed from the arithmetic function itself; the right side only
//! through prefix sums of `v`, so the two sides are computed independently.
//!
//! For integer `a` all terms are rational. They are scaled by the least common
//! denominator `D` of every term so the comparison runs on integers.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use super::{ArithValues, Factorizer};
use crate::error::{Error, Result};
use crate::population::PopulationTable;
use crate::report::{IdentityReport, Value};

/// Largest total size of the scaled term tables, in bits.
const MAX_EXACT_BITS: u64 = 1 << 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SumIdentity {
    /// `sum i = sum N(x/i) phi(i)`
    SumPhi,
    /// `sum 2^nu(i) = sum N(x/i) |mu(i)|`
    SumTwoPowNu,
    /// `sum N(x/i) mu(i) = 1`
    MobiusCount,
    /// `sum phi(i)/i = sum N(x/i) mu(i)/i`
    PhiOverI,
    /// `sum tau(i) = sum N(x/i)`
    DivisorCount,
    /// `sum nu(i) = sum_{p prime} N(x/p)`
    PrimeFactorCount,
    /// `sum sigma_a(i) = sum N(x/i) i^a`
    SigmaA,
    /// `sum sigma_a(i)/i^a = sum N(x/i) i^-a`
    SigmaAOverIa,
    /// `sum sigma_a(i)/i^a = sum S(x/i; a)`
    SigmaAHarmonic,
    /// `sum tau(i)/i^a = sum S(x/i; a) i^-a`
    TauOverIa,
    /// `sum nu(i)/i^a = sum_{p prime} S(x/p; a) p^-a`
    NuOverIa,
    /// `sum (phi * tau)(i) = sum phi(i) sum_{j <= x/i} tau(j)`
    ConvolutionPrefix,
    /// `sum i = sum mu(i) sum_{j <= x/i} sigma(j) = sum sigma(i) sum_{j <= x/i} mu(j)`
    SigmaMobius,
    /// `N(x) = sum mu(i) sum_{j <= x/i} tau(j) = sum tau(i) sum_{j <= x/i} mu(j)`
    TauMobius,
}

pub const SUM_IDENTITIES: [SumIdentity; 14] = [
    SumIdentity::SumPhi,
    SumIdentity::SumTwoPowNu,
    SumIdentity::MobiusCount,
    SumIdentity::PhiOverI,
    SumIdentity::DivisorCount,
    SumIdentity::PrimeFactorCount,
    SumIdentity::SigmaA,
    SumIdentity::SigmaAOverIa,
    SumIdentity::SigmaAHarmonic,
    SumIdentity::TauOverIa,
    SumIdentity::NuOverIa,
    SumIdentity::ConvolutionPrefix,
    SumIdentity::SigmaMobius,
    SumIdentity::TauMobius,
];

impl SumIdentity {
    pub fn id(self) -> &'static str {
        match self {
            SumIdentity::SumPhi => "sum-phi",
            SumIdentity::SumTwoPowNu => "sum-2pow-nu",
            SumIdentity::MobiusCount => "mobius-count",
            SumIdentity::PhiOverI => "phi-over-i",
            SumIdentity::DivisorCount => "divisor-count",
            SumIdentity::PrimeFactorCount => "prime-factor-count",
            SumIdentity::SigmaA => "sigma-a",
            SumIdentity::SigmaAOverIa => "sigma-a-over-ia",
            SumIdentity::SigmaAHarmonic => "sigma-a-harmonic",
            SumIdentity::TauOverIa => "tau-over-ia",
            SumIdentity::NuOverIa => "nu-over-ia",
            SumIdentity::ConvolutionPrefix => "convolution-prefix",
            SumIdentity::SigmaMobius => "sigma-mobius",
            SumIdentity::TauMobius => "tau-mobius",
        }
    }

    pub fn from_id(id: &str) -> Result<Self> {
        SUM_IDENTITIES
            .iter()
            .copied()
            .find(|s| s.id() == id)
            .ok_or_else(|| Error::UnknownIdentity(id.to_string()))
    }

    /// Whether the identity depends on the exponent `a`.
    pub fn uses_a(self) -> bool {
        matches!(
            self,
            SumIdentity::SigmaA
                | SumIdentity::SigmaAOverIa
                | SumIdentity::SigmaAHarmonic
                | SumIdentity::TauOverIa
                | SumIdentity::NuOverIa
        )
    }
}

impl fmt::Display for SumIdentity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// Per-member values of the summands: `lhs`, then one `(w, v)` pair per
/// right-hand side.
struct Terms<T> {
    lhs: Vec<T>,
    forms: Vec<(Vec<T>, Vec<T>)>,
}

/// Arithmetic helpers the term builder needs, for exact and float modes.
trait Scalar: Clone {
    fn int(n: i64) -> Self;
    fn big(n: BigInt) -> Self;
    /// `n^e` for the identity's exponent (or its negative).
    fn pow(n: u64, a: Exponent, negate: bool) -> Self;
    fn sigma(v: &ArithValues, a: Exponent) -> Self;
    fn div_int(self, n: u64) -> Self;
    fn mul(self, other: Self) -> Self;
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Exponent {
    Int(i64),
    Real(f64),
}

impl Exponent {
    fn value(self) -> f64 {
        match self {
            Exponent::Int(a) => a as f64,
            Exponent::Real(a) => a,
        }
    }
}

impl Scalar for BigRational {
    fn int(n: i64) -> Self {
        BigRational::from_integer(n.into())
    }
    fn big(n: BigInt) -> Self {
        BigRational::from_integer(n)
    }
    fn pow(n: u64, a: Exponent, negate: bool) -> Self {
        let Exponent::Int(a) = a else {
            unreachable!("exact terms need an integer exponent")
        };
        let e = if negate { -a } else { a };
        let p = BigInt::from(n).pow(e.unsigned_abs() as u32);
        if e >= 0 {
            BigRational::from_integer(p)
        } else {
            BigRational::new(BigInt::one(), p)
        }
    }
    fn sigma(v: &ArithValues, a: Exponent) -> Self {
        let Exponent::Int(a) = a else {
            unreachable!("exact terms need an integer exponent")
        };
        v.sigma(a)
    }
    fn div_int(self, n: u64) -> Self {
        self / BigRational::from_integer(n.into())
    }
    fn mul(self, other: Self) -> Self {
        self * other
    }
}

impl Scalar for f64 {
    fn int(n: i64) -> Self {
        n as f64
    }
    fn big(n: BigInt) -> Self {
        n.to_f64().unwrap_or(f64::INFINITY)
    }
    fn pow(n: u64, a: Exponent, negate: bool) -> Self {
        let e = if negate { -a.value() } else { a.value() };
        (n as f64).powf(e)
    }
    fn sigma(v: &ArithValues, a: Exponent) -> Self {
        v.sigma_f64(a.value())
    }
    fn div_int(self, n: u64) -> Self {
        self / n as f64
    }
    fn mul(self, other: Self) -> Self {
        self * other
    }
}

fn divisors(factors: &[(u64, u32)]) -> Vec<u64> {
    let mut ds = vec![1u64];
    for &(p, e) in factors {
        let len = ds.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                ds.push(ds[i] * pk);
            }
        }
    }
    ds
}

fn build_terms<T: Scalar>(
    id: SumIdentity,
    members: &[u64],
    values: &[ArithValues],
    a: Exponent,
) -> Terms<T> {
    use SumIdentity::*;
    let per = |f: &dyn Fn(&ArithValues) -> T| -> Vec<T> { values.iter().map(f).collect() };
    let one = || per(&|_| T::int(1));
    let mu = || per(&|v| T::int(v.mu as i64));
    let phi = || per(&|v| T::int(v.phi as i64));
    let tau = || per(&|v| T::int(v.tau as i64));
    let ident = || per(&|v| T::int(v.n as i64));
    let sigma1 = || per(&|v| T::big(v.sigma_int(1)));
    let is_prime = |v: &ArithValues| v.factors.len() == 1 && v.factors[0].1 == 1;
    let inv_pow = || per(&|v| T::pow(v.n, a, true));

    let (lhs, forms) = match id {
        SumPhi => (ident(), vec![(phi(), one())]),
        SumTwoPowNu => (
            per(&|v| T::int(1i64 << v.nu)),
            vec![(per(&|v| T::int(v.mu.abs() as i64)), one())],
        ),
        MobiusCount => (per(&|v| T::int((v.n == 1) as i64)), vec![(mu(), one())]),
        PhiOverI => (
            per(&|v| T::int(v.phi as i64).div_int(v.n)),
            vec![(per(&|v| T::int(v.mu as i64).div_int(v.n)), one())],
        ),
        DivisorCount => (tau(), vec![(one(), one())]),
        PrimeFactorCount => (
            per(&|v| T::int(v.nu as i64)),
            vec![(per(&|v| T::int(is_prime(v) as i64)), one())],
        ),
        SigmaA => (
            per(&|v| T::sigma(v, a)),
            vec![(per(&|v| T::pow(v.n, a, false)), one())],
        ),
        SigmaAOverIa => (
            per(&|v| T::sigma(v, a).mul(T::pow(v.n, a, true))),
            vec![(inv_pow(), one())],
        ),
        SigmaAHarmonic => (
            per(&|v| T::sigma(v, a).mul(T::pow(v.n, a, true))),
            vec![(one(), inv_pow())],
        ),
        TauOverIa => (
            per(&|v| T::int(v.tau as i64).mul(T::pow(v.n, a, true))),
            vec![(inv_pow(), inv_pow())],
        ),
        NuOverIa => (
            per(&|v| T::int(v.nu as i64).mul(T::pow(v.n, a, true))),
            vec![(
                per(&|v| {
                    if is_prime(v) {
                        T::pow(v.n, a, true)
                    } else {
                        T::int(0)
                    }
                }),
                inv_pow(),
            )],
        ),
        ConvolutionPrefix => {
            // (phi * tau)(i) summed over the divisors of i directly.
            let lhs = values
                .iter()
                .map(|v| {
                    let total: i64 = divisors(&v.factors)
                        .into_iter()
                        .map(|d| {
                            let dv = ArithValues::from_factors(d, super::factorize(d));
                            let qv = ArithValues::from_factors(v.n / d, super::factorize(v.n / d));
                            dv.phi as i64 * qv.tau as i64
                        })
                        .sum();
                    T::int(total)
                })
                .collect();
            (lhs, vec![(phi(), tau())])
        }
        SigmaMobius => (ident(), vec![(mu(), sigma1()), (sigma1(), mu())]),
        TauMobius => (one(), vec![(mu(), tau()), (tau(), mu())]),
    };
    debug_assert!(lhs.len() == members.len());
    Terms { lhs, forms }
}

fn prefix<T: Clone + std::ops::Add<Output = T>>(xs: &[T], zero: T) -> Vec<T> {
    let mut out = Vec::with_capacity(xs.len() + 1);
    out.push(zero.clone());
    let mut acc = zero;
    for x in xs {
        acc = acc + x.clone();
        out.push(acc.clone());
    }
    out
}

enum Mode {
    Exact {
        denom: BigInt,
        /// Prefix sums of `l * D`.
        lhs: Vec<BigInt>,
        /// `(w * D, prefix sums of v * D)` per right-hand side.
        forms: Vec<(Vec<BigInt>, Vec<BigInt>)>,
    },
    Float {
        lhs: Vec<f64>,
        forms: Vec<(Vec<f64>, Vec<f64>)>,
    },
}

/// Checks one summation identity at every `x` up to a bound, reusing the term
/// tables across evaluations.
pub struct SumIdentityVerifier<'t> {
    id: SumIdentity,
    table: &'t PopulationTable,
    x_max: u64,
    a: Option<Exponent>,
    mode: Mode,
}

impl<'t> SumIdentityVerifier<'t> {
    /// Exact mode when `a` is an integer (or unused), float mode otherwise.
    pub fn new(id: SumIdentity, table: &'t PopulationTable, x_max: u64, a: Option<f64>) -> Result<Self> {
        if x_max > table.bound() {
            return Err(Error::OutOfRange {
                value: x_max as f64,
                bound: table.bound(),
            });
        }
        let a = match (id.uses_a(), a) {
            (false, _) => None,
            (true, None) => {
                return Err(Error::Domain(format!("identity {id} needs an exponent a")))
            }
            (true, Some(a)) if !a.is_finite() => {
                return Err(Error::Domain(format!("exponent a = {a} is not finite")))
            }
            (true, Some(a)) if a.fract() == 0.0 && a.abs() <= 64.0 => Some(Exponent::Int(a as i64)),
            (true, Some(a)) => Some(Exponent::Real(a)),
        };
        let members = &table.members()[..table.count(x_max)];
        let factorizer = Factorizer::new(x_max.max(1))?;
        let values: Vec<ArithValues> = members
            .iter()
            .map(|&n| ArithValues::from_factors(n, factorizer.factorize(n)))
            .collect();

        let exponent = a.unwrap_or(Exponent::Int(0));
        let mode = match exponent {
            Exponent::Int(_) => {
                let terms: Terms<BigRational> = build_terms(id, members, &values, exponent);
                Self::scale(terms)?
            }
            Exponent::Real(_) => {
                let terms: Terms<f64> = build_terms(id, members, &values, exponent);
                Mode::Float {
                    lhs: prefix(&terms.lhs, 0.0),
                    forms: terms
                        .forms
                        .into_iter()
                        .map(|(w, v)| (w, prefix(&v, 0.0)))
                        .collect(),
                }
            }
        };
        Ok(Self {
            id,
            table,
            x_max,
            a,
            mode,
        })
    }

    fn scale(terms: Terms<BigRational>) -> Result<Mode> {
        let all = || {
            terms
                .lhs
                .iter()
                .chain(terms.forms.iter().flat_map(|(w, v)| w.iter().chain(v.iter())))
        };
        let denom = all().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let count = all().count() as u64;
        let bits = denom.bits() * 2 + 64;
        if bits.saturating_mul(count) > MAX_EXACT_BITS {
            return Err(Error::Resource(format!(
                "exact check needs {count} terms of about {bits} bits"
            )));
        }
        let lift = |q: &BigRational| -> BigInt { q.numer() * (&denom / q.denom()) };
        let lhs: Vec<BigInt> = terms.lhs.iter().map(lift).collect();
        let forms = terms
            .forms
            .iter()
            .map(|(w, v)| {
                let v: Vec<BigInt> = v.iter().map(lift).collect();
                (w.iter().map(lift).collect(), prefix(&v, BigInt::zero()))
            })
            .collect();
        Ok(Mode::Exact {
            lhs: prefix(&lhs, BigInt::zero()),
            denom,
            forms,
        })
    }

    pub fn id(&self) -> SumIdentity {
        self.id
    }

    pub fn x_max(&self) -> u64 {
        self.x_max
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.mode, Mode::Exact { .. })
    }

    fn check_x(&self, x: f64) -> Result<u64> {
        if !(x >= 1.0) || x > self.x_max as f64 {
            return Err(Error::OutOfRange {
                value: x,
                bound: self.x_max,
            });
        }
        Ok(x.floor() as u64)
    }

    /// `sum_{i <= x} w(i) V(x / i)` over the member prefix of length `n`.
    fn rhs_exact(&self, x: u64, n: usize, w: &[BigInt], vp: &[BigInt]) -> BigInt {
        let members = self.table.members();
        let mut acc = BigInt::zero();
        for k in 0..n {
            if w[k].is_zero() {
                continue;
            }
            let inner = &vp[self.table.count(x / members[k])];
            if !inner.is_zero() {
                acc += &w[k] * inner;
            }
        }
        acc
    }

    fn rhs_float(&self, x: u64, n: usize, w: &[f64], vp: &[f64]) -> f64 {
        let members = self.table.members();
        (0..n)
            .rev()
            .filter(|&k| w[k] != 0.0)
            .map(|k| w[k] * vp[self.table.count(x / members[k])])
            .sum()
    }

    /// Fast pass/fail at integer `x`, without building a report.
    pub fn holds(&self, x: u64) -> bool {
        let n = self.table.count(x);
        match &self.mode {
            Mode::Exact { denom, lhs, forms } => {
                let scaled = &lhs[n] * denom;
                forms
                    .iter()
                    .all(|(w, vp)| self.rhs_exact(x, n, w, vp) == scaled)
            }
            Mode::Float { lhs, forms } => forms.iter().all(|(w, vp)| {
                let r = self.rhs_float(x, n, w, vp);
                (r - lhs[n]).abs() <= float_tolerance(lhs[n])
            }),
        }
    }

    pub fn evaluate(&self, x: f64) -> Result<IdentityReport> {
        let xi = self.check_x(x)?;
        let n = self.table.count(xi);
        let (lhs, rhs, residual, tolerance, pass) = match &self.mode {
            Mode::Exact { denom, lhs, forms } => {
                let d2 = denom * denom;
                let lhs_q = BigRational::new(lhs[n].clone(), denom.clone());
                let mut rhs_first = None;
                let mut worst = BigRational::zero();
                for (w, vp) in forms {
                    let r = BigRational::new(self.rhs_exact(xi, n, w, vp), d2.clone());
                    let diff = &r - &lhs_q;
                    if diff.abs() > worst.abs() {
                        worst = diff;
                    }
                    rhs_first.get_or_insert(r);
                }
                let pass = worst.is_zero();
                (
                    exact_value(lhs_q),
                    exact_value(rhs_first.expect("at least one right-hand side")),
                    exact_value(worst),
                    0.0,
                    pass,
                )
            }
            Mode::Float { lhs, forms } => {
                let l = lhs[n];
                let rs: Vec<f64> = forms
                    .iter()
                    .map(|(w, vp)| self.rhs_float(xi, n, w, vp))
                    .collect();
                let worst = rs
                    .iter()
                    .map(|r| r - l)
                    .fold(0.0f64, |m, d| if d.abs() > m.abs() { d } else { m });
                let tol = float_tolerance(l);
                (
                    Value::Float(l),
                    Value::Float(rs[0]),
                    Value::Float(worst),
                    tol,
                    worst.abs() <= tol,
                )
            }
        };
        Ok(IdentityReport {
            identity_id: self.id.id().to_string(),
            list: self.table.label().to_string(),
            x: format!("{x}"),
            a: self.a.map(|a| format!("{}", a.value())).unwrap_or_default(),
            lhs,
            rhs,
            residual,
            err: 0.0,
            tolerance,
            pass,
        })
    }

    /// Checks every integer `x` in `1..=x_max`; returns the report at the
    /// smallest failing `x`, if any.
    pub fn first_failure(&self) -> Option<IdentityReport> {
        let bad = (1..=self.x_max)
            .into_par_iter()
            .filter(|&x| !self.holds(x))
            .min()?;
        self.evaluate(bad as f64).ok()
    }
}

fn float_tolerance(lhs: f64) -> f64 {
    1e-10 * lhs.abs()
}

fn exact_value(q: BigRational) -> Value {
    if q.is_integer() {
        Value::Int(q.to_integer())
    } else {
        Value::Rational(q)
    }
}

/// Checks a single identity at a single `x`.
pub fn verify_sum_identity(
    id: &str,
    table: &PopulationTable,
    x: f64,
    a: Option<f64>,
) -> Result<IdentityReport> {
    let id = SumIdentity::from_id(id)?;
    if !(x >= 1.0) || x > table.bound() as f64 {
        return Err(Error::OutOfRange {
            value: x,
            bound: table.bound(),
        });
    }
    SumIdentityVerifier::new(id, table, x.floor() as u64, a)?.evaluate(x)
}
