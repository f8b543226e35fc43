//! Prime generation and arithmetical lists of primes.
//!
//! Primes are indexed from 1, so `p_1 = 2`, `p_2 = 3`, `p_3 = 5`. An
//! arithmetical list with first index `r0` and reason `r` is the set
//! `{p_{r0}, p_{r0 + r}, p_{r0 + 2r}, ...}` with `1 <= r0 <= r`.

use std::fmt;

use crate::error::{Error, Result};

/// Largest sieve limit accepted; the prime vector alone would need several
/// gigabytes beyond this.
pub const MAX_SIEVE_LIMIT: u64 = 1 << 33;

/// Width of one sieve segment, in integers.
const SEGMENT_LEN: u64 = 1 << 18;

/// All primes up to `limit`, in increasing order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
}

/// Returns every prime `<= limit`.
pub fn sieve_primes(limit: u64) -> Result<PrimeTable> {
    if limit < 2 {
        return Err(Error::EmptyRange(limit));
    }
    let mut table = PrimeTable::empty();
    table.extend_to(limit)?;
    Ok(table)
}

/// Plain sieve of Eratosthenes, used only for the base primes `<= sqrt(limit)`.
fn small_primes(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

impl PrimeTable {
    fn empty() -> Self {
        Self {
            limit: 1,
            primes: Vec::new(),
        }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    /// The `n`-th prime, 1-based.
    pub fn nth(&self, n: usize) -> Option<u64> {
        n.checked_sub(1).and_then(|i| self.primes.get(i).copied())
    }

    /// 1-based index of `p` in the sequence of primes, if `p` is a tabulated prime.
    pub fn index_of(&self, p: u64) -> Option<usize> {
        self.primes.binary_search(&p).ok().map(|i| i + 1)
    }

    /// `pi(x)`: the number of primes `<= x`. Only meaningful for `x <= limit`.
    pub fn count_up_to(&self, x: u64) -> usize {
        self.primes.partition_point(|&p| p <= x)
    }

    pub fn is_prime(&self, n: u64) -> Option<bool> {
        (n <= self.limit).then(|| self.primes.binary_search(&n).is_ok())
    }

    /// Extends the table to `new_limit` by sieving only the new segments.
    /// Already tabulated primes are left untouched.
    pub fn extend_to(&mut self, new_limit: u64) -> Result<()> {
        if new_limit <= self.limit {
            return Ok(());
        }
        if new_limit > MAX_SIEVE_LIMIT {
            return Err(Error::Resource(format!(
                "sieve limit {new_limit} exceeds the supported maximum {MAX_SIEVE_LIMIT}"
            )));
        }
        let root = new_limit.isqrt();
        let base: Vec<u64> = if self.limit >= root {
            self.primes[..self.count_up_to(root)].to_vec()
        } else {
            small_primes(root)
        };

        let mut lo = self.limit + 1;
        let mut marks = Vec::with_capacity(SEGMENT_LEN as usize);
        while lo <= new_limit {
            let hi = (lo + SEGMENT_LEN - 1).min(new_limit);
            marks.clear();
            marks.resize((hi - lo + 1) as usize, true);
            for &p in &base {
                if p * p > hi {
                    break;
                }
                let first = (p * p).max(lo.div_ceil(p) * p);
                let mut m = first;
                while m <= hi {
                    marks[(m - lo) as usize] = false;
                    m += p;
                }
            }
            for (offset, &is_prime) in marks.iter().enumerate() {
                let n = lo + offset as u64;
                if is_prime && n >= 2 {
                    self.primes.push(n);
                }
            }
            lo = hi + 1;
        }
        self.limit = new_limit;
        Ok(())
    }
}

/// The shape of a prime set `M`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ListKind {
    /// All primes.
    Full,
    /// `{p_{r0 + n r} : n >= 0}`.
    Arithmetical { r0: u64, r: u64 },
    /// A finite set of primes, sorted and deduplicated.
    Explicit(Vec<u64>),
    /// All primes not in the inner set.
    Complement(Box<ListKind>),
}

impl ListKind {
    /// Membership of the prime `p`, whose 1-based index among all primes is `index`.
    fn contains_indexed(&self, index: u64, p: u64) -> bool {
        match self {
            ListKind::Full => true,
            ListKind::Arithmetical { r0, r } => index >= *r0 && (index - r0) % r == 0,
            ListKind::Explicit(ps) => ps.binary_search(&p).is_ok(),
            ListKind::Complement(inner) => !inner.contains_indexed(index, p),
        }
    }

    /// Whether the set is known to be finite (explicit, or the complement of `P`).
    pub fn is_finite(&self) -> bool {
        match self {
            ListKind::Explicit(_) => true,
            ListKind::Complement(inner) => matches!(**inner, ListKind::Full),
            _ => false,
        }
    }

    /// The reason of the list, when it is an arithmetical list (`P` has reason 1).
    pub fn reason(&self) -> Option<u64> {
        match self {
            ListKind::Full => Some(1),
            ListKind::Arithmetical { r, .. } => Some(*r),
            _ => None,
        }
    }
}

impl fmt::Display for ListKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ListKind::Full => write!(f, "P"),
            ListKind::Arithmetical { r0, r } => write!(f, "{r0}:{r}"),
            ListKind::Explicit(ps) => {
                let body: Vec<String> = ps.iter().map(u64::to_string).collect();
                write!(f, "{{{}}}", body.join(" "))
            }
            ListKind::Complement(inner) => write!(f, "P-({inner})"),
        }
    }
}

/// A set of primes `M` with its members materialized up to a working bound.
///
/// Materialization only ever appends: enlarging the bound never changes the
/// members already listed.
#[derive(Debug, Clone)]
pub struct ArithmeticalList {
    kind: ListKind,
    table: PrimeTable,
    members: Vec<u64>,
    bound: u64,
}

/// Builds the arithmetical list `{p_{r0 + n r}}` materialized up to `bound`.
pub fn make_list(r0: u64, r: u64, bound: u64) -> Result<ArithmeticalList> {
    ArithmeticalList::arithmetical(r0, r, bound)
}

/// The shifted list `M^(j) = {p_{1 + j + n r}}` of `M_r`.
pub fn shift_list(list: &ArithmeticalList, j: u64, bound: u64) -> Result<ArithmeticalList> {
    list.shift(j, bound)
}

impl ArithmeticalList {
    fn with_kind(kind: ListKind, bound: u64) -> Result<Self> {
        let mut list = Self {
            kind,
            table: PrimeTable::empty(),
            members: Vec::new(),
            bound: 1,
        };
        list.materialize(bound.max(2))?;
        Ok(list)
    }

    /// All primes.
    pub fn full(bound: u64) -> Result<Self> {
        Self::with_kind(ListKind::Full, bound)
    }

    pub fn arithmetical(r0: u64, r: u64, bound: u64) -> Result<Self> {
        if r0 < 1 || r < 1 {
            return Err(Error::Domain(format!(
                "first index and reason must be >= 1 (got r0={r0}, r={r})"
            )));
        }
        if r0 > r {
            return Err(Error::ListConstraint { r0, r });
        }
        if bound < 2 {
            return Err(Error::Domain(format!("bound must be >= 2 (got {bound})")));
        }
        Self::with_kind(ListKind::Arithmetical { r0, r }, bound)
    }

    /// A finite explicit set of primes. Non-primes are rejected.
    pub fn explicit(primes: &[u64]) -> Result<Self> {
        let mut ps = primes.to_vec();
        ps.sort_unstable();
        ps.dedup();
        let top = ps.last().copied().unwrap_or(2).max(2);
        let list = Self::with_kind(ListKind::Explicit(ps.clone()), top)?;
        if let Some(bad) = ps.iter().find(|&&p| list.table.is_prime(p) != Some(true)) {
            return Err(Error::Domain(format!("{bad} is not a prime")));
        }
        Ok(list)
    }

    /// The empty prime set; its population is `{1}`.
    pub fn empty() -> Self {
        Self::explicit(&[]).expect("empty list is always valid")
    }

    /// `P - M`, materialized to the same bound.
    pub fn complement(&self) -> Result<Self> {
        let kind = match &self.kind {
            ListKind::Complement(inner) => (**inner).clone(),
            other => ListKind::Complement(Box::new(other.clone())),
        };
        let mut out = Self {
            kind,
            table: self.table.clone(),
            members: Vec::new(),
            bound: 1,
        };
        out.refill();
        Ok(out)
    }

    /// The `j`-th shift of `M_r`: `{p_{1 + j + n r}}`. Requires first index 1.
    pub fn shift(&self, j: u64, bound: u64) -> Result<Self> {
        let r = match self.kind {
            ListKind::Full => 1,
            ListKind::Arithmetical { r0: 1, r } => r,
            _ => {
                return Err(Error::NotArithmetical(format!(
                    "{} (shifts need first index 1)",
                    self.kind
                )))
            }
        };
        if j >= r {
            return Err(Error::Domain(format!("shift {j} must be below the reason {r}")));
        }
        if r == 1 {
            return Self::full(bound);
        }
        Self::arithmetical(1 + j, r, bound)
    }

    /// Extends the materialized members up to `bound`.
    pub fn materialize(&mut self, bound: u64) -> Result<()> {
        if bound <= self.bound {
            return Ok(());
        }
        self.table.extend_to(bound)?;
        let start = self.table.count_up_to(self.bound);
        for (i, &p) in self.table.primes().iter().enumerate().skip(start) {
            if self.kind.contains_indexed(i as u64 + 1, p) {
                self.members.push(p);
            }
        }
        self.bound = bound;
        Ok(())
    }

    fn refill(&mut self) {
        self.members = self
            .table
            .primes()
            .iter()
            .enumerate()
            .filter(|(i, &p)| self.kind.contains_indexed(*i as u64 + 1, p))
            .map(|(_, &p)| p)
            .collect();
        self.bound = self.table.limit();
    }

    pub fn kind(&self) -> &ListKind {
        &self.kind
    }

    pub fn reason(&self) -> Option<u64> {
        self.kind.reason()
    }

    /// Materialization bound. Finite lists are complete regardless of it.
    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn table(&self) -> &PrimeTable {
        &self.table
    }

    /// Materialized members, increasing.
    pub fn members(&self) -> &[u64] {
        &self.members
    }

    pub fn label(&self) -> String {
        self.kind.to_string()
    }

    /// True when every member `<= x` is known.
    pub fn covers(&self, x: u64) -> bool {
        self.bound >= x || self.kind.is_finite()
    }

    /// Members `<= x`; fails if the list has not been materialized that far.
    pub fn primes_up_to(&self, x: u64) -> Result<&[u64]> {
        if !self.covers(x) {
            return Err(Error::InsufficientMaterialization {
                have: self.bound,
                need: x,
            });
        }
        let n = self.members.partition_point(|&p| p <= x);
        Ok(&self.members[..n])
    }

    /// Whether the prime `p` belongs to `M`.
    pub fn contains_prime(&self, p: u64) -> Result<bool> {
        if !self.covers(p) {
            return Err(Error::InsufficientMaterialization {
                have: self.bound,
                need: p,
            });
        }
        Ok(self.members.binary_search(&p).is_ok())
    }

    /// The `n`-th member, 1-based.
    pub fn nth_member(&self, n: usize) -> Option<u64> {
        n.checked_sub(1).and_then(|i| self.members.get(i).copied())
    }
}
