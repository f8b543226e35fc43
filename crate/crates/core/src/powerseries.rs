//! Exact truncated power series over the rationals, the generating series
//! `G_pop` and `l_pop`, and the generating-function identities they satisfy.

use std::fmt;
use std::io::{self, Write};
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::arithfun::arith_values;
use crate::error::{Error, Result};
use crate::population::{enumerate_pop, PopulationTable};
use crate::primes::ArithmeticalList;
use crate::report::{IdentityReport, Value};

/// Coefficients `c_0 ..= c_D` of a power series truncated at degree cap `D`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoefficientSeries {
    coeffs: Vec<BigRational>,
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

impl CoefficientSeries {
    pub fn zero(cap: usize) -> Self {
        Self {
            coeffs: vec![BigRational::zero(); cap + 1],
        }
    }

    /// `c x^k`, or zero when `k` exceeds the cap.
    pub fn monomial(cap: usize, k: usize, c: BigRational) -> Self {
        let mut s = Self::zero(cap);
        if k <= cap {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Self {
        assert!(!coeffs.is_empty(), "a series has at least the constant term");
        Self { coeffs }
    }

    pub fn cap(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn set(&mut self, k: usize, c: BigRational) {
        if k <= self.cap() {
            self.coeffs[k] = c;
        }
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// Drops every coefficient above `cap`.
    pub fn truncate(&self, cap: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(cap + 1, BigRational::zero());
        Self { coeffs }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// `f(x^n)`, truncated at the same cap.
    pub fn compose_pow(&self, n: usize) -> Self {
        assert!(n >= 1, "substitution x -> x^n needs n >= 1");
        let mut out = Self::zero(self.cap());
        for (k, c) in self.coeffs.iter().enumerate() {
            match k.checked_mul(n) {
                Some(e) if e <= self.cap() => out.coeffs[e] = c.clone(),
                _ => break,
            }
        }
        out
    }

    /// Formal derivative. Coefficient `D` of the input only determines
    /// coefficient `D - 1`, so the cap drops by one.
    pub fn derivative(&self) -> Self {
        if self.cap() == 0 {
            return Self::zero(0);
        }
        Self {
            coeffs: (1..=self.cap())
                .map(|k| &self.coeffs[k] * q(k as i64))
                .collect(),
        }
    }

    /// `x d/dx`, which keeps the cap.
    pub fn x_derivative(&self) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| c * q(k as i64))
                .collect(),
        }
    }

    /// Exact value at a rational point (a polynomial evaluation).
    pub fn eval(&self, x: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * x + c)
    }

    /// Number of degrees where `self` and `other` differ.
    pub fn mismatches(&self, other: &Self) -> usize {
        let cap = self.cap().max(other.cap());
        (0..=cap).filter(|&k| self.coeff(k) != other.coeff(k)).count()
    }

    /// One `k,numerator,denominator` row per coefficient.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "k,numerator,denominator")?;
        for (k, c) in self.coeffs.iter().enumerate() {
            writeln!(out, "{k},{},{}", c.numer(), c.denom())?;
        }
        Ok(())
    }

    fn combine(&self, other: &Self, f: impl Fn(&BigRational, &BigRational) -> BigRational) -> Self {
        let cap = self.cap().min(other.cap());
        Self {
            coeffs: (0..=cap)
                .map(|k| f(&self.coeffs[k], &other.coeffs[k]))
                .collect(),
        }
    }
}

impl Add for &CoefficientSeries {
    type Output = CoefficientSeries;
    fn add(self, rhs: Self) -> CoefficientSeries {
        self.combine(rhs, |a, b| a + b)
    }
}

impl Sub for &CoefficientSeries {
    type Output = CoefficientSeries;
    fn sub(self, rhs: Self) -> CoefficientSeries {
        self.combine(rhs, |a, b| a - b)
    }
}

impl Neg for &CoefficientSeries {
    type Output = CoefficientSeries;
    fn neg(self) -> CoefficientSeries {
        CoefficientSeries {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

/// Cauchy product truncated at the smaller cap.
impl Mul for &CoefficientSeries {
    type Output = CoefficientSeries;
    fn mul(self, rhs: Self) -> CoefficientSeries {
        let cap = self.cap().min(rhs.cap());
        let mut out = CoefficientSeries::zero(cap);
        for (i, a) in self.coeffs.iter().enumerate().take(cap + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(cap + 1 - i) {
                if !b.is_zero() {
                    out.coeffs[i + j] += a * b;
                }
            }
        }
        out
    }
}

impl fmt::Display for CoefficientSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mag = c.abs();
            let mono = match k {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{k}"),
            };
            if k == 0 {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                f.write_str(&mono)?;
            } else {
                write!(f, "{mag} {mono}")?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(x^{})", self.cap() + 1)
    }
}

fn require_cover(table: &PopulationTable, cap: usize) -> Result<()> {
    if (table.bound() as usize) < cap {
        return Err(Error::OutOfRange {
            value: cap as f64,
            bound: table.bound(),
        });
    }
    Ok(())
}

/// `G_pop(q) = sum_{k in pop} q^k` to degree `cap`.
pub fn g_pop_series(table: &PopulationTable, cap: usize) -> Result<CoefficientSeries> {
    require_cover(table, cap)?;
    let mut s = CoefficientSeries::zero(cap);
    for &k in &table.members()[..table.count(cap as u64)] {
        s.coeffs[k as usize] = BigRational::one();
    }
    Ok(s)
}

/// `l_pop(x) = sum_{k in pop} x^k / k` to degree `cap`.
pub fn l_pop_series(table: &PopulationTable, cap: usize) -> Result<CoefficientSeries> {
    require_cover(table, cap)?;
    let mut s = CoefficientSeries::zero(cap);
    for &k in &table.members()[..table.count(cap as u64)] {
        s.coeffs[k as usize] = BigRational::new(BigInt::one(), k.into());
    }
    Ok(s)
}

/// `ln(1 / (1 - x^n)) = sum_{m >= 1} x^{nm} / m` to degree `cap`.
fn log_geometric(n: usize, cap: usize) -> CoefficientSeries {
    let mut s = CoefficientSeries::zero(cap);
    for m in 1..=cap / n {
        s.coeffs[n * m] = BigRational::new(BigInt::one(), BigInt::from(m));
    }
    s
}

/// `x^n / (1 - x^n)` to degree `cap`.
fn lambert_term(n: usize, cap: usize) -> CoefficientSeries {
    let mut s = CoefficientSeries::zero(cap);
    for m in 1..=cap / n {
        s.coeffs[n * m] = BigRational::one();
    }
    s
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SeriesIdentity {
    /// `sum_{n in pop} mu(n)/n l_pop(x^n) = x`
    LogMobius,
    /// `l_pop(x) = sum_{n in pop(P - M)} mu(n)/n ln(1/(1 - x^n))`
    LogComplement,
    /// `sum_{n in pop} mu(n) G_pop(x^n) = x`
    LambertMobius,
    /// `sum_{n in pop} phi(n) G_pop(x^n) = x G_pop'(x)`
    LambertPhi,
    /// `sum_{n in pop} x^n/(1 - x^n) = sum_{pop} tau(n) x^n + sum_{not pop} B_n x^n`
    LambertTau,
    /// `sum_{n in pop} n x^n/(1 - x^n) = sum_{pop} sigma(n) x^n + sum_{not pop} B_n x^n`
    LambertSigma,
}

pub const SERIES_IDENTITIES: [SeriesIdentity; 6] = [
    SeriesIdentity::LogMobius,
    SeriesIdentity::LogComplement,
    SeriesIdentity::LambertMobius,
    SeriesIdentity::LambertPhi,
    SeriesIdentity::LambertTau,
    SeriesIdentity::LambertSigma,
];

impl SeriesIdentity {
    pub fn id(self) -> &'static str {
        match self {
            SeriesIdentity::LogMobius => "log-mobius",
            SeriesIdentity::LogComplement => "log-complement",
            SeriesIdentity::LambertMobius => "lambert-mobius",
            SeriesIdentity::LambertPhi => "lambert-phi",
            SeriesIdentity::LambertTau => "lambert-tau",
            SeriesIdentity::LambertSigma => "lambert-sigma",
        }
    }

    pub fn from_id(id: &str) -> Result<Self> {
        SERIES_IDENTITIES
            .iter()
            .copied()
            .find(|s| s.id() == id)
            .ok_or_else(|| Error::UnknownIdentity(id.to_string()))
    }
}

impl fmt::Display for SeriesIdentity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// Both sides of a series identity, built independently to degree `cap`.
pub fn series_identity_sides(
    id: SeriesIdentity,
    list: &ArithmeticalList,
    cap: usize,
) -> Result<(CoefficientSeries, CoefficientSeries)> {
    if cap < 2 {
        return Err(Error::Domain(format!("series cap must be >= 2 (got {cap})")));
    }
    let mut list = list.clone();
    let table = enumerate_pop(&mut list, cap as u64)?;
    let members = &table.members()[..table.count(cap as u64)];
    let x = CoefficientSeries::monomial(cap, 1, BigRational::one());
    let mu = |n: u64| arith_values(n).map(|v| v.mu as i64);

    let sides = match id {
        SeriesIdentity::LogMobius => {
            let l = l_pop_series(&table, cap)?;
            let mut lhs = CoefficientSeries::zero(cap);
            for &n in members {
                let m = mu(n)?;
                if m != 0 {
                    let w = BigRational::new(m.into(), n.into());
                    lhs = &lhs + &l.compose_pow(n as usize).scale(&w);
                }
            }
            (lhs, x)
        }
        SeriesIdentity::LogComplement => {
            let lhs = l_pop_series(&table, cap)?;
            let mut own = list.clone();
            own.materialize(cap as u64)?;
            let mut complement = own.complement()?;
            let other = enumerate_pop(&mut complement, cap as u64)?;
            let mut rhs = CoefficientSeries::zero(cap);
            for &n in other.members() {
                let m = mu(n)?;
                if m != 0 {
                    let w = BigRational::new(m.into(), n.into());
                    rhs = &rhs + &log_geometric(n as usize, cap).scale(&w);
                }
            }
            (lhs, rhs)
        }
        SeriesIdentity::LambertMobius | SeriesIdentity::LambertPhi => {
            let g = g_pop_series(&table, cap)?;
            let mut lhs = CoefficientSeries::zero(cap);
            for &n in members {
                let v = arith_values(n)?;
                let w = if id == SeriesIdentity::LambertMobius {
                    v.mu as i64
                } else {
                    v.phi as i64
                };
                if w != 0 {
                    lhs = &lhs + &g.compose_pow(n as usize).scale(&q(w));
                }
            }
            let rhs = if id == SeriesIdentity::LambertMobius {
                x
            } else {
                g.x_derivative()
            };
            (lhs, rhs)
        }
        SeriesIdentity::LambertTau | SeriesIdentity::LambertSigma => {
            let sigma = id == SeriesIdentity::LambertSigma;
            let mut lhs = CoefficientSeries::zero(cap);
            for &n in members {
                let w = if sigma { q(n as i64) } else { q(1) };
                lhs = &lhs + &lambert_term(n as usize, cap).scale(&w);
            }
            // Divisor-count table reaching every n <= cap, members or not.
            let mut rhs = CoefficientSeries::zero(cap);
            for n in 1..=cap as u64 {
                let c = if table.contains(n) {
                    let v = arith_values(n)?;
                    if sigma {
                        q(v.sigma_int(1).try_into().expect("sigma fits i64"))
                    } else {
                        q(v.tau as i64)
                    }
                } else {
                    let ds = table.pop_divisors(n)?;
                    if sigma {
                        q(ds.iter().sum::<u64>() as i64)
                    } else {
                        q(ds.len() as i64)
                    }
                };
                rhs.coeffs[n as usize] = c;
            }
            (lhs, rhs)
        }
    };
    Ok(sides)
}

/// Checks one series identity coefficient by coefficient up to degree `cap`.
///
/// The residual is the number of mismatching coefficients.
pub fn verify_series_identity(id: &str, list: &ArithmeticalList, cap: usize) -> Result<IdentityReport> {
    let id = SeriesIdentity::from_id(id)?;
    let (lhs, rhs) = series_identity_sides(id, list, cap)?;
    let bad = lhs.mismatches(&rhs);
    Ok(IdentityReport {
        identity_id: id.id().to_string(),
        list: list.label(),
        x: cap.to_string(),
        a: String::new(),
        lhs: Value::Series(lhs.to_string()),
        rhs: Value::Series(rhs.to_string()),
        residual: Value::Int(bad.into()),
        err: 0.0,
        tolerance: 0.0,
        pass: bad == 0,
    })
}

/// `G_D(a) G_D(b)` against the regrouped double sum
/// `sum_{n in pop} sum_{d | n} a^d b^{n/d}` restricted to `d, n/d <= D`.
///
/// Both are exact rationals; `tolerance` is the bound
/// `2 m^{D+1} / (1 - m)`, `m = max(|a|, |b|)`, on what the truncation at `D`
/// leaves out of the infinite product.
pub fn bivariate_product_check(
    list: &ArithmeticalList,
    a: &BigRational,
    b: &BigRational,
    cap: usize,
) -> Result<IdentityReport> {
    use num_traits::ToPrimitive;
    if a.abs() >= BigRational::one() || b.abs() >= BigRational::one() {
        return Err(Error::Domain(format!("need |a| < 1 and |b| < 1 (got a={a}, b={b})")));
    }
    if cap < 1 {
        return Err(Error::Domain("series cap must be >= 1".into()));
    }
    let mut list = list.clone();
    let square = (cap as u64) * (cap as u64);
    let table = enumerate_pop(&mut list, square)?;
    let g = g_pop_series(&table, cap)?;
    let lhs = g.eval(a) * g.eval(b);

    let powers = |base: &BigRational| -> Vec<BigRational> {
        let mut p = vec![BigRational::one()];
        for k in 1..=cap {
            let next = &p[k - 1] * base;
            p.push(next);
        }
        p
    };
    let (pa, pb) = (powers(a), powers(b));
    let mut rhs = BigRational::zero();
    for &n in table.members() {
        for d in table.pop_divisors(n)? {
            let e = n / d;
            if d as usize <= cap && e as usize <= cap {
                rhs += &pa[d as usize] * &pb[e as usize];
            }
        }
    }
    let residual = &lhs - &rhs;
    let m = a.abs().max(b.abs()).to_f64().unwrap_or(1.0);
    let tolerance = 2.0 * m.powi(cap as i32 + 1) / (1.0 - m);
    let pass = residual.abs().to_f64().unwrap_or(f64::INFINITY) <= tolerance;
    let as_value = |v: BigRational| {
        if v.is_integer() {
            Value::Int(v.to_integer())
        } else {
            Value::Float(v.to_f64().unwrap_or(f64::NAN))
        }
    };
    Ok(IdentityReport {
        identity_id: "bivariate-product".into(),
        list: list.label(),
        x: cap.to_string(),
        a: format!("{a};{b}"),
        lhs: as_value(lhs),
        rhs: as_value(rhs),
        residual: as_value(residual),
        err: tolerance,
        tolerance,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primes::make_list;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn pop_table(list: &ArithmeticalList, bound: u64) -> PopulationTable {
        enumerate_pop(&mut list.clone(), bound).unwrap()
    }

    fn support(s: &CoefficientSeries) -> Vec<usize> {
        (0..=s.cap()).filter(|&k| !s.coeff(k).is_zero()).collect()
    }

    #[test]
    fn generating_series() {
        let m2 = make_list(1, 2, 2).unwrap();
        let g = g_pop_series(&pop_table(&m2, 11), 11).unwrap();
        assert_eq!(support(&g), vec![1, 2, 4, 5, 8, 10, 11]);
        assert!(g.coeffs().iter().all(|c| c.is_zero() || c.is_one()));

        let empty = ArithmeticalList::empty();
        assert_eq!(support(&g_pop_series(&pop_table(&empty, 5), 5).unwrap()), vec![1]);
        let all = ArithmeticalList::full(4).unwrap();
        assert_eq!(support(&g_pop_series(&pop_table(&all, 4), 4).unwrap()), vec![1, 2, 3, 4]);

        let l = l_pop_series(&pop_table(&m2, 8), 8).unwrap();
        assert_eq!(support(&l), vec![1, 2, 4, 5, 8]);
        assert_eq!(l.coeff(5), r(1, 5));
        let m3 = make_list(1, 3, 8).unwrap();
        assert_eq!(support(&l_pop_series(&pop_table(&m3, 8), 8).unwrap()), vec![1, 2, 4, 7, 8]);

        // all primes: -ln(1 - x)
        let l = l_pop_series(&pop_table(&all, 10), 10).unwrap();
        assert_eq!(l, log_geometric(1, 10));
        assert!(g_pop_series(&pop_table(&m2, 10), 11).is_err());
    }

    #[test]
    fn arithmetic() {
        let s = CoefficientSeries::from_coeffs(vec![q(1), q(2), q(3)]);
        let t = CoefficientSeries::from_coeffs(vec![q(0), q(1), q(1), q(5)]);
        let p = &s * &t;
        assert_eq!(p.cap(), 2);
        assert_eq!(p.coeffs(), &[q(0), q(1), q(3)]);
        assert!(p.is_integral());
        assert_eq!((&s + &t).coeffs(), &[q(1), q(3), q(4)]);
        assert_eq!((&s - &s), CoefficientSeries::zero(2));
        assert_eq!(s.derivative().coeffs(), &[q(2), q(6)]);
        assert_eq!(s.x_derivative().coeffs(), &[q(0), q(2), q(6)]);
        assert_eq!(s.compose_pow(2).coeffs(), &[q(1), q(0), q(2)]);
        assert_eq!(s.eval(&r(1, 2)), r(11, 4));
        assert_eq!(s.to_string(), "1 + 2 x + 3 x^2 + O(x^3)");
        assert_eq!((-&s).to_string(), "-1 - 2 x - 3 x^2 + O(x^3)");
        assert_eq!(CoefficientSeries::zero(1).to_string(), "0 + O(x^2)");
    }

    #[test]
    fn csv_dump() {
        let s = CoefficientSeries::from_coeffs(vec![q(0), r(-1, 2)]);
        let mut out = Vec::new();
        s.write_csv(&mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "k,numerator,denominator\n0,0,1\n1,-1,2\n");
    }

    #[test]
    fn identities_hold() {
        let lists = [
            make_list(1, 2, 64).unwrap(),
            make_list(1, 3, 64).unwrap(),
            ArithmeticalList::full(64).unwrap(),
        ];
        for list in &lists {
            for id in SERIES_IDENTITIES {
                let rep = verify_series_identity(id.id(), list, 40).unwrap();
                assert!(rep.pass, "{id} on {}", list.label());
            }
        }
        assert!(matches!(
            verify_series_identity("nope", &lists[0], 10),
            Err(Error::UnknownIdentity(_))
        ));
        assert!(verify_series_identity("log-mobius", &lists[0], 1).is_err());
    }

    #[test]
    fn lambert_mobius_is_the_monomial_x() {
        let m2 = make_list(1, 2, 2).unwrap();
        let (lhs, _) = series_identity_sides(SeriesIdentity::LambertMobius, &m2, 32).unwrap();
        assert_eq!(lhs, CoefficientSeries::monomial(32, 1, BigRational::one()));
        let all = ArithmeticalList::full(2).unwrap();
        let (lhs, _) = series_identity_sides(SeriesIdentity::LogMobius, &all, 16).unwrap();
        assert_eq!(lhs, CoefficientSeries::monomial(16, 1, BigRational::one()));
    }

    #[test]
    fn lambert_tau_off_population_coefficient() {
        let m2 = make_list(1, 2, 2).unwrap();
        let (lhs, rhs) = series_identity_sides(SeriesIdentity::LambertTau, &m2, 20).unwrap();
        assert_eq!(rhs.coeff(6), q(2));
        assert_eq!(lhs.coeff(6), q(2));
    }

    #[test]
    fn truncation_consistency() {
        let m2 = make_list(1, 2, 2).unwrap();
        for id in SERIES_IDENTITIES {
            let (a, _) = series_identity_sides(id, &m2, 24).unwrap();
            let (b, _) = series_identity_sides(id, &m2, 40).unwrap();
            assert_eq!(a, b.truncate(24), "{id}");
        }
    }

    #[test]
    fn bivariate_products() {
        let m2 = make_list(1, 2, 2).unwrap();
        let zero = bivariate_product_check(&m2, &q(0), &q(0), 16).unwrap();
        assert_eq!(zero.lhs, Value::Int(0.into()));
        assert!(zero.pass);

        let rep = bivariate_product_check(&m2, &r(1, 3), &r(1, 4), 64).unwrap();
        assert!(rep.pass);
        // independent double sum at a doubled cap in floating point
        let t = pop_table(&m2, 128);
        let g = |x: f64| -> f64 { t.members().iter().map(|&k| x.powi(k as i32)).sum() };
        let oracle = g(1.0 / 3.0) * g(0.25);
        assert!((rep.lhs.magnitude() - oracle).abs() <= rep.tolerance + 1e-15);

        let all = ArithmeticalList::full(2).unwrap();
        let rep = bivariate_product_check(&all, &r(1, 2), &r(1, 2), 64).unwrap();
        assert!(rep.pass);
        assert!((rep.lhs.magnitude() - 1.0).abs() < 1e-15);
        assert!(rep.tolerance < 1e-18);
        assert!(matches!(
            bivariate_product_check(&all, &q(1), &q(0), 8),
            Err(Error::Domain(_))
        ));
    }
}
