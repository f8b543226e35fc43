//! Enumeration of `pop(M)` and the queries built on it: `N_pop`, `S_pop`,
//! membership and population-restricted divisors.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::arithfun::factorize;
use crate::error::{Error, Result};
use crate::primes::ArithmeticalList;

/// Sorted members of `pop(M) ∩ [1, bound]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PopulationTable {
    label: String,
    bound: u64,
    members: Vec<u64>,
}

/// Enumerates every integer `<= bound` whose prime factors all lie in `list`.
///
/// Generalized Hamming enumeration: a min-heap seeded with 1, where popping `m`
/// (whose largest prime factor is the `i`-th prime of `M`) pushes `m * q` for
/// each prime `q` of `M` of rank `>= i`. Every member is produced exactly once.
pub fn enumerate_pop(list: &mut ArithmeticalList, bound: u64) -> Result<PopulationTable> {
    if bound < 1 {
        return Err(Error::Domain("population bound must be >= 1".into()));
    }
    if !list.kind().is_finite() {
        list.materialize(bound)?;
    }
    let primes = list.primes_up_to(bound)?;
    Ok(PopulationTable::from_primes(list.label(), primes, bound))
}

impl PopulationTable {
    /// Builds the table for an explicit prime slice (assumed sorted, primes only).
    pub fn from_primes(label: impl Into<String>, primes: &[u64], bound: u64) -> Self {
        let mut members = Vec::new();
        let mut heap = BinaryHeap::new();
        heap.push(Reverse((1u64, 0usize)));
        while let Some(Reverse((m, rank))) = heap.pop() {
            members.push(m);
            for (j, &q) in primes.iter().enumerate().skip(rank) {
                match m.checked_mul(q) {
                    Some(next) if next <= bound => heap.push(Reverse((next, j))),
                    _ => break,
                }
            }
        }
        Self {
            label: label.into(),
            bound,
            members,
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn members(&self) -> &[u64] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Membership for `n <= bound`.
    pub fn contains(&self, n: u64) -> bool {
        self.members.binary_search(&n).is_ok()
    }

    /// Exact count of members `<= n` (no range check).
    pub fn count(&self, n: u64) -> usize {
        self.members.partition_point(|&m| m <= n)
    }

    fn check_range(&self, x: f64) -> Result<()> {
        if x.is_nan() || x > self.bound as f64 {
            return Err(Error::OutOfRange {
                value: x,
                bound: self.bound,
            });
        }
        Ok(())
    }

    /// `N_pop(x)`, the number of members `<= x` (floor semantics).
    pub fn n_pop(&self, x: f64) -> Result<u64> {
        self.check_range(x)?;
        if x < 1.0 {
            return Ok(0);
        }
        Ok(self.count(x.floor() as u64) as u64)
    }

    /// `S_pop(u; a) = sum of 1/i^a over members i <= u`, summed from the
    /// largest member down.
    pub fn s_pop(&self, u: f64, a: f64) -> Result<f64> {
        self.check_range(u)?;
        if u < 1.0 {
            return Ok(0.0);
        }
        let n = self.count(u.floor() as u64);
        Ok(self.members[..n]
            .iter()
            .rev()
            .map(|&i| (i as f64).powf(-a))
            .sum())
    }

    /// Divisors of `n` that belong to the population, ascending.
    pub fn pop_divisors(&self, n: u64) -> Result<Vec<u64>> {
        if n < 1 || n > self.bound {
            return Err(Error::OutOfRange {
                value: n as f64,
                bound: self.bound,
            });
        }
        let mut divisors = vec![1u64];
        for (p, e) in factorize(n) {
            if !self.contains(p) {
                continue;
            }
            let current = divisors.len();
            let mut pk = 1;
            for _ in 0..e {
                pk *= p;
                for i in 0..current {
                    divisors.push(divisors[i] * pk);
                }
            }
        }
        divisors.sort_unstable();
        Ok(divisors)
    }
}

/// Whether every prime factor of `n` lies in `list`.
///
/// Divides out the primes of `M` up to `sqrt(n)`; what remains is either 1 or
/// has at most one prime factor outside that range, which must itself be in `M`.
pub fn is_member(list: &mut ArithmeticalList, n: u64) -> Result<bool> {
    if n < 1 {
        return Err(Error::Domain("membership is defined for n >= 1".into()));
    }
    if list.kind().is_finite() {
        let mut rest = n;
        for &p in list.members() {
            while rest % p == 0 {
                rest /= p;
            }
        }
        return Ok(rest == 1);
    }
    list.materialize(n.max(2))?;
    let mut rest = n;
    for &p in list.primes_up_to(n.isqrt())? {
        while rest % p == 0 {
            rest /= p;
        }
    }
    if rest == 1 {
        return Ok(true);
    }
    list.contains_prime(rest)
}

/// Squarefree products of the complement primes, paired with their Möbius sign,
/// for counting `N_pop` by inclusion-exclusion.
#[derive(Debug, Clone)]
pub struct InclusionExclusion {
    max_n: u64,
    terms: Vec<(u64, i8)>,
}

impl InclusionExclusion {
    /// Prepares the terms for all `n <= max_n`. The complement of `list` must be
    /// materialized at least to `max_n`: `complement_bound` states how far it is.
    pub fn new(list: &ArithmeticalList, max_n: u64, complement_bound: u64) -> Result<Self> {
        if complement_bound < max_n {
            return Err(Error::InsufficientMaterialization {
                have: complement_bound,
                need: max_n,
            });
        }
        let mut own = list.clone();
        own.materialize(complement_bound)?;
        let complement = own.complement()?;
        let primes = complement.primes_up_to(max_n)?;

        let mut terms = vec![(1u64, 1i8)];
        // Depth-first over increasing prime indices, pruning once k > max_n.
        let mut stack: Vec<(u64, usize, i8)> = vec![(1, 0, 1)];
        while let Some((k, start, sign)) = stack.pop() {
            for (j, &p) in primes.iter().enumerate().skip(start) {
                let next = k * p;
                if next > max_n {
                    break;
                }
                terms.push((next, -sign));
                stack.push((next, j + 1, -sign));
            }
        }
        terms.sort_unstable();
        Ok(Self { max_n, terms })
    }

    /// `sum over squarefree k in pop(P - M), k <= n, of mu(k) * floor(n / k)`.
    pub fn count(&self, n: u64) -> Result<i64> {
        if n > self.max_n {
            return Err(Error::InsufficientMaterialization {
                have: self.max_n,
                need: n,
            });
        }
        Ok(self
            .terms
            .iter()
            .take_while(|(k, _)| *k <= n)
            .map(|&(k, mu)| mu as i64 * (n / k) as i64)
            .sum())
    }
}

/// One-shot inclusion-exclusion count of the members `<= n`.
pub fn inclusion_exclusion_count(
    list: &ArithmeticalList,
    n: u64,
    complement_bound: u64,
) -> Result<i64> {
    InclusionExclusion::new(list, n, complement_bound)?.count(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primes::{make_list, shift_list};

    fn pop25(bound: u64) -> PopulationTable {
        enumerate_pop(&mut make_list(1, 2, 2).unwrap(), bound).unwrap()
    }

    #[test]
    fn enumerates_known_prefixes() {
        assert_eq!(
            pop25(32).members(),
            &[1, 2, 4, 5, 8, 10, 11, 16, 17, 20, 22, 23, 25, 31, 32]
        );
        let shifted = shift_list(&make_list(1, 2, 50).unwrap(), 1, 50).unwrap();
        let mut shifted = shifted;
        assert_eq!(
            enumerate_pop(&mut shifted, 49).unwrap().members(),
            &[1, 3, 7, 9, 13, 19, 21, 27, 29, 37, 39, 43, 49]
        );
        let mut empty = ArithmeticalList::empty();
        assert_eq!(enumerate_pop(&mut empty, 100).unwrap().members(), &[1]);
        assert!(matches!(
            enumerate_pop(&mut empty, 0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn near_u64_max_does_not_wrap() {
        let t = PopulationTable::from_primes("{2 3}", &[2, 3], u64::MAX);
        assert!(t.members().windows(2).all(|w| w[0] < w[1]));
        assert_eq!(*t.members().last().unwrap(), {
            // largest 3-smooth number below 2^64
            let mut best = 1u64;
            let mut a = 1u64;
            while let Some(x) = Some(a) {
                let mut b = x;
                loop {
                    best = best.max(b);
                    match b.checked_mul(3) {
                        Some(v) => b = v,
                        None => break,
                    }
                }
                match a.checked_mul(2) {
                    Some(v) => a = v,
                    None => break,
                }
            }
            best
        });
    }

    #[test]
    fn counting() {
        let t = pop25(32);
        assert_eq!(t.n_pop(32.0).unwrap(), 15);
        assert_eq!(t.n_pop(20.5).unwrap(), 10);
        assert_eq!(t.n_pop(1.0).unwrap(), 1);
        assert!(matches!(t.n_pop(32.5), Err(Error::OutOfRange { .. })));
        let all = enumerate_pop(&mut ArithmeticalList::full(10).unwrap(), 10).unwrap();
        assert_eq!(all.n_pop(7.9).unwrap(), 7);
    }

    #[test]
    fn harmonic_sums() {
        let t = pop25(32);
        assert!((t.s_pop(5.0, 1.0).unwrap() - 1.95).abs() < 1e-15);
        assert_eq!(t.s_pop(20.0, 0.0).unwrap(), t.n_pop(20.0).unwrap() as f64);
        let all = enumerate_pop(&mut ArithmeticalList::full(3).unwrap(), 3).unwrap();
        assert!((all.s_pop(3.0, 1.0).unwrap() - 11.0 / 6.0).abs() < 1e-15);
        assert!(t.s_pop(40.0, 1.0).is_err());
    }

    #[test]
    fn membership() {
        let mut m2 = make_list(1, 2, 2).unwrap();
        assert!(is_member(&mut m2, 22).unwrap());
        assert!(is_member(&mut m2, 1).unwrap());
        assert!(!is_member(&mut m2, 6).unwrap());
        assert!(is_member(&mut m2, 47 * 47 * 2).unwrap());
        assert!(!is_member(&mut m2, 43 * 2).unwrap());
        let t = pop25(3000);
        for n in 1..=3000 {
            assert_eq!(is_member(&mut m2, n).unwrap(), t.contains(n), "n={n}");
        }
    }

    #[test]
    fn divisors() {
        let t = pop25(100);
        assert_eq!(t.pop_divisors(6).unwrap(), vec![1, 2]);
        assert_eq!(t.pop_divisors(1).unwrap(), vec![1]);
        assert_eq!(t.pop_divisors(20).unwrap(), vec![1, 2, 4, 5, 10, 20]);
        assert!(t.pop_divisors(101).is_err());
    }

    #[test]
    fn inclusion_exclusion() {
        let m2 = make_list(1, 2, 2).unwrap();
        assert_eq!(inclusion_exclusion_count(&m2, 32, 32).unwrap(), 15);
        assert!(matches!(
            inclusion_exclusion_count(&m2, 32, 31),
            Err(Error::InsufficientMaterialization { .. })
        ));
        let all = ArithmeticalList::full(2).unwrap();
        assert_eq!(inclusion_exclusion_count(&all, 977, 977).unwrap(), 977);
        let t = pop25(1000);
        assert_eq!(
            inclusion_exclusion_count(&m2, 1000, 1000).unwrap(),
            t.count(1000) as i64
        );
    }
}
