//! Classical arithmetic functions, Dirichlet convolution restricted to a
//! population, Möbius pairs and the summation identities over `pop(M)`.

mod identities;

pub use identities::{verify_sum_identity, SumIdentity, SumIdentityVerifier, SUM_IDENTITIES};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::population::PopulationTable;
use crate::report::{IdentityReport, Value};

/// Prime factorization `[(p, e)]` by trial division, primes increasing.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    if n <= 1 {
        return out;
    }
    for p in [2u64, 3] {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    }
    // 6k ± 1 wheel
    let mut d = 5u64;
    while d.saturating_mul(d) <= n {
        for p in [d, d + 2] {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            if e > 0 {
                out.push((p, e));
            }
        }
        d += 6;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Smallest-prime-factor table for fast repeated factorization up to a bound.
#[derive(Debug, Clone)]
pub struct Factorizer {
    spf: Vec<u32>,
}

impl Factorizer {
    pub fn new(bound: u64) -> Result<Self> {
        if bound > u32::MAX as u64 {
            return Err(Error::Resource(format!(
                "factor table up to {bound} exceeds the supported size"
            )));
        }
        let n = bound as usize;
        let mut spf = vec![0u32; n + 1];
        let mut primes: Vec<u32> = Vec::new();
        // linear sieve
        for i in 2..=n {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u32);
            }
            for &p in &primes {
                let m = p as usize * i;
                if p > spf[i] || m > n {
                    break;
                }
                spf[m] = p;
            }
        }
        Ok(Self { spf })
    }

    pub fn bound(&self) -> u64 {
        (self.spf.len() - 1) as u64
    }

    /// Factorization of `n`; falls back to trial division above the table.
    pub fn factorize(&self, n: u64) -> Vec<(u64, u32)> {
        if n > self.bound() {
            return factorize(n);
        }
        let mut n = n as usize;
        let mut out: Vec<(u64, u32)> = Vec::new();
        while n > 1 {
            let p = self.spf[n] as usize;
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p as u64, e));
        }
        out
    }
}

/// The classical arithmetic functions at one argument.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArithValues {
    pub n: u64,
    pub mu: i8,
    pub phi: u64,
    pub tau: u64,
    pub nu: u32,
    pub factors: Vec<(u64, u32)>,
}

pub fn arith_values(n: u64) -> Result<ArithValues> {
    if n < 1 {
        return Err(Error::Domain("arithmetic functions are defined for n >= 1".into()));
    }
    Ok(ArithValues::from_factors(n, factorize(n)))
}

impl ArithValues {
    pub fn from_factors(n: u64, factors: Vec<(u64, u32)>) -> Self {
        let squarefree = factors.iter().all(|&(_, e)| e == 1);
        let mu = if !squarefree {
            0
        } else if factors.len() % 2 == 0 {
            1
        } else {
            -1
        };
        let phi = factors
            .iter()
            .map(|&(p, e)| (p - 1) * p.pow(e - 1))
            .product();
        let tau = factors.iter().map(|&(_, e)| e as u64 + 1).product();
        Self {
            n,
            mu,
            phi,
            tau,
            nu: factors.len() as u32,
            factors,
        }
    }

    /// `sigma_a(n)` for a non-negative integer exponent.
    pub fn sigma_int(&self, a: u32) -> BigInt {
        let mut total = BigInt::one();
        for &(p, e) in &self.factors {
            let pa = BigInt::from(p).pow(a);
            let mut term = BigInt::one();
            let mut acc = BigInt::one();
            for _ in 0..e {
                term *= &pa;
                acc += &term;
            }
            total *= acc;
        }
        total
    }

    /// `sigma_a(n)` for any integer exponent; negative exponents use
    /// `sigma_{-b}(n) = sigma_b(n) / n^b`.
    pub fn sigma(&self, a: i64) -> BigRational {
        let b = a.unsigned_abs() as u32;
        let s = BigRational::from_integer(self.sigma_int(b));
        if a >= 0 {
            s
        } else {
            s / BigRational::from_integer(BigInt::from(self.n).pow(b))
        }
    }

    /// `sigma_a(n)` for a real exponent, summed over divisors.
    pub fn sigma_f64(&self, a: f64) -> f64 {
        self.factors
            .iter()
            .map(|&(p, e)| (0..=e).map(|k| (p as f64).powf(a * k as f64)).sum::<f64>())
            .product()
    }
}

/// Values for every integer in `1..=bound`, index 0 unused.
pub fn arith_table(bound: u64) -> Result<Vec<ArithValues>> {
    let f = Factorizer::new(bound)?;
    let mut out = Vec::with_capacity(bound as usize + 1);
    out.push(ArithValues::from_factors(0, Vec::new()));
    for n in 1..=bound {
        out.push(ArithValues::from_factors(n, f.factorize(n)));
    }
    Ok(out)
}

/// Dirichlet product `c_n = sum_{kl = n} a_k b_l` of two coefficient vectors
/// indexed `1..=X` (index 0 ignored), both supported on the population.
///
/// Fails if an input has a nonzero coefficient off the population; the output is
/// checked to be supported on the population as well.
pub fn dirichlet_convolve<T>(a: &[T], b: &[T], table: &PopulationTable) -> Result<Vec<T>>
where
    T: Zero + Clone + std::ops::Mul<Output = T>,
{
    if a.len() != b.len() || a.is_empty() {
        return Err(Error::Precondition(
            "coefficient vectors must have equal, nonzero length".into(),
        ));
    }
    let x = (a.len() - 1) as u64;
    if x > table.bound() {
        return Err(Error::OutOfRange {
            value: x as f64,
            bound: table.bound(),
        });
    }
    let support = |v: &[T], name: &str| -> Result<Vec<usize>> {
        let idx: Vec<usize> = (1..v.len()).filter(|&i| !v[i].is_zero()).collect();
        if let Some(&bad) = idx.iter().find(|&&i| !table.contains(i as u64)) {
            return Err(Error::Precondition(format!(
                "{name} has a nonzero coefficient at {bad}, outside the population"
            )));
        }
        Ok(idx)
    };
    let sa = support(a, "first input")?;
    let sb = support(b, "second input")?;

    let mut c = vec![T::zero(); a.len()];
    for &k in &sa {
        for &l in &sb {
            let n = k * l;
            if n as u64 > x {
                break;
            }
            c[n] = c[n].clone() + a[k].clone() * b[l].clone();
        }
    }
    if let Some(bad) = (1..c.len()).find(|&n| !c[n].is_zero() && !table.contains(n as u64)) {
        return Err(Error::Precondition(format!(
            "convolution produced a coefficient at {bad}, outside the population"
        )));
    }
    Ok(c)
}

/// Builds `F(y) = sum_{k in pop} f(k y)` and reconstructs `f(x)` as
/// `sum_{k in pop} mu(k) F(k x)`.
///
/// `f` is integer-valued and vanishes above `support`, so the round trip is
/// exact. The table must reach `support / x`.
pub fn mobius_pair_check<F>(
    f: F,
    support: f64,
    table: &PopulationTable,
    x: f64,
) -> Result<IdentityReport>
where
    F: Fn(f64) -> i64,
{
    if !(x > 0.0) {
        return Err(Error::Domain("the evaluation point must be positive".into()));
    }
    let reach = support / x;
    if reach > table.bound() as f64 {
        return Err(Error::OutOfRange {
            value: reach,
            bound: table.bound(),
        });
    }
    let members = &table.members()[..table.count(reach.max(0.0).floor() as u64)];
    let big_f = |y: f64| -> i128 {
        members
            .iter()
            .take_while(|&&k| k as f64 * y <= support)
            .map(|&k| f(k as f64 * y) as i128)
            .sum()
    };
    let rebuilt: i128 = members
        .iter()
        .map(|&k| {
            let mu = ArithValues::from_factors(k, factorize(k)).mu as i128;
            if mu == 0 {
                0
            } else {
                mu * big_f(k as f64 * x)
            }
        })
        .sum();
    let direct = f(x) as i128;
    let residual = rebuilt - direct;
    Ok(IdentityReport {
        identity_id: "mobius-pair".into(),
        list: table.label().to_string(),
        x: format!("{x}"),
        a: String::new(),
        lhs: Value::Int(direct.into()),
        rhs: Value::Int(rebuilt.into()),
        residual: Value::Int(residual.into()),
        err: 0.0,
        tolerance: 0.0,
        pass: residual == 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::population::enumerate_pop;
    use crate::primes::make_list;

    fn divisors(n: u64) -> Vec<u64> {
        (1..=n).filter(|d| n % d == 0).collect()
    }

    /// Oracle built from divisor enumeration and gcd counting only.
    fn oracle(n: u64) -> (i8, u64, u64, u32, u64) {
        let ds = divisors(n);
        let tau = ds.len() as u64;
        let sigma = ds.iter().sum();
        let phi = (1..=n).filter(|&k| num_integer::gcd(k, n) == 1).count() as u64;
        let primes: Vec<u64> = ds
            .iter()
            .copied()
            .filter(|&d| d > 1 && divisors(d).len() == 2)
            .collect();
        let squarefree = primes.iter().all(|p| n % (p * p) != 0);
        let mu = if !squarefree {
            0
        } else if primes.len() % 2 == 0 {
            1
        } else {
            -1
        };
        (mu, phi, tau, primes.len() as u32, sigma)
    }

    #[test]
    fn spec_examples() {
        assert_eq!(arith_values(4).unwrap().mu, 0);
        let one = arith_values(1).unwrap();
        assert_eq!((one.mu, one.phi, one.tau, one.nu), (1, 1, 1, 0));
        let ten = arith_values(10).unwrap();
        assert_eq!((ten.mu, ten.phi, ten.tau, ten.nu), (1, 4, 4, 2));
        assert_eq!(ten.sigma_int(1), BigInt::from(18));
        assert!(arith_values(0).is_err());
    }

    #[test]
    fn agrees_with_oracle() {
        let table = arith_table(2000).unwrap();
        for n in 1..=2000u64 {
            let v = &table[n as usize];
            let (mu, phi, tau, nu, sigma) = oracle(n);
            assert_eq!((v.mu, v.phi, v.tau, v.nu), (mu, phi, tau, nu), "n={n}");
            assert_eq!(v.sigma_int(1), BigInt::from(sigma));
            assert_eq!(*v, arith_values(n).unwrap());
        }
    }

    #[test]
    fn sigma_variants() {
        let v = arith_values(12).unwrap();
        assert_eq!(v.sigma_int(0), BigInt::from(6));
        assert_eq!(v.sigma_int(2), BigInt::from(1 + 4 + 9 + 16 + 36 + 144));
        let minus = v.sigma(-1);
        assert_eq!(minus, BigRational::new(28.into(), 12.into()));
        assert!((v.sigma_f64(-1.0) - 28.0 / 12.0).abs() < 1e-14);
        assert!((v.sigma_f64(0.5) - divisors(12).iter().map(|&d| (d as f64).sqrt()).sum::<f64>()).abs() < 1e-12);
    }

    #[test]
    fn factorizer_matches_trial_division() {
        let f = Factorizer::new(10_000).unwrap();
        for n in 1..=10_000 {
            assert_eq!(f.factorize(n), factorize(n));
        }
        assert_eq!(f.factorize(1_000_003 * 2), vec![(2, 1), (1_000_003, 1)]);
    }

    #[test]
    fn mobius_sum_over_divisors() {
        let table = arith_table(10_000).unwrap();
        for n in 1..=10_000u64 {
            let s: i64 = divisors_from(&table[n as usize].factors)
                .into_iter()
                .map(|d| table[d as usize].mu as i64)
                .sum();
            assert_eq!(s, (n == 1) as i64, "n={n}");
        }
    }

    fn divisors_from(factors: &[(u64, u32)]) -> Vec<u64> {
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

    fn pop25(bound: u64) -> PopulationTable {
        enumerate_pop(&mut make_list(1, 2, 2).unwrap(), bound).unwrap()
    }

    fn indicator(table: &PopulationTable) -> Vec<i64> {
        (0..=table.bound())
            .map(|n| (n > 0 && table.contains(n)) as i64)
            .collect()
    }

    #[test]
    fn convolution_examples() {
        let t = pop25(20);
        let one = indicator(&t);
        let tau = dirichlet_convolve(&one, &one, &t).unwrap();
        assert_eq!(tau[4], 3);

        let mu: Vec<i64> = (0..=20u64)
            .map(|n| if n > 0 && t.contains(n) { arith_values(n).unwrap().mu as i64 } else { 0 })
            .collect();
        let unit = dirichlet_convolve(&one, &mu, &t).unwrap();
        assert_eq!(unit[1], 1);
        assert!(unit[2..].iter().all(|&c| c == 0));

        let id: Vec<i64> = (0..=20u64)
            .map(|n| if n > 0 && t.contains(n) { n as i64 } else { 0 })
            .collect();
        let sigma = dirichlet_convolve(&one, &id, &t).unwrap();
        for n in 1..=20u64 {
            let want = if t.contains(n) { divisors(n).iter().sum::<u64>() as i64 } else { 0 };
            assert_eq!(sigma[n as usize], want, "n={n}");
        }
    }

    #[test]
    fn convolution_rejects_off_population_support() {
        let t = pop25(20);
        let mut bad = indicator(&t);
        bad[3] = 1;
        let one = indicator(&t);
        assert!(matches!(
            dirichlet_convolve(&bad, &one, &t),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn mobius_pairs() {
        let t = pop25(1000);
        // indicator of t <= T at x = 1: the rebuilt value is sum mu(i) N_pop(T / i) = 1
        let r = mobius_pair_check(|y| (y <= 50.0) as i64, 50.0, &t, 1.0).unwrap();
        assert!(r.pass);
        assert_eq!(r.rhs, Value::Int(1.into()));
        let spike = mobius_pair_check(|y| (y == 40.0) as i64 * 7, 40.0, &t, 2.0).unwrap();
        assert!(spike.pass);
        assert!(mobius_pair_check(|_| 1, 2000.0, &t, 1.0).is_err());
    }
}
