//! Integer populations generated by sets of primes, their counting and
//! harmonic functions, restricted arithmetic-function identities, partial
//! Euler products, and empirical Mertens-type asymptotics.
//!
//! A population `pop(M)` is the set of positive integers whose prime factors
//! all lie in `M`. Most sets of interest are *arithmetical lists*: the primes
//! `p_{r0}, p_{r0 + r}, p_{r0 + 2r}, ...` taken by index jumps of the reason
//! `r` through the sequence of all primes (`p_1 = 2`).
//!
//! Module map:
//!
//! * [`primes`]: segmented sieve, arithmetical lists and their shifts.
//! * [`population`]: enumeration of `pop(M)`, `N_pop`, `S_pop`, divisors.
//! * [`arithfun`]: arithmetic functions, restricted Dirichlet convolution,
//!   Möbius pairs and the summation identities over a population.
//! * [`powerseries`]: exact truncated power series and the generating-function
//!   identities.
//! * [`zeta_eval`]: complex evaluation of partial zeta functions, prime zeta
//!   sums and their regularizations, with tail estimates.
//! * [`asymptotics`]: Mertens-type fits and density-constant estimates.

pub mod arithfun;
pub mod asymptotics;
pub mod error;
pub mod population;
pub mod powerseries;
pub mod primes;
pub mod report;
pub mod zeta_eval;

pub use error::{Error, Result};
pub use population::PopulationTable;
pub use primes::{ArithmeticalList, ListKind, PrimeTable};
pub use report::{IdentityReport, Value};
