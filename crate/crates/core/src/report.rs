//! Outcome of one identity check, serializable as a CSV row.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;

/// A side or residual of an identity, kept exact when possible.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Int(BigInt),
    Rational(BigRational),
    Float(f64),
    Complex(Complex64),
    /// Textual rendering of a truncated power series.
    Series(String),
}

impl Value {
    /// Magnitude as a float, for display and tolerance checks.
    pub fn magnitude(&self) -> f64 {
        use num_traits::{Signed, ToPrimitive};
        match self {
            Value::Int(n) => n.abs().to_f64().unwrap_or(f64::INFINITY),
            Value::Rational(q) => q.abs().to_f64().unwrap_or(f64::INFINITY),
            Value::Float(x) => x.abs(),
            Value::Complex(z) => z.norm(),
            Value::Series(_) => f64::NAN,
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(n) => write!(f, "{n}"),
            Value::Rational(q) => write!(f, "{q}"),
            Value::Float(x) => write!(f, "{x:e}"),
            Value::Complex(z) => write!(f, "{:e}{:+e}i", z.re, z.im),
            Value::Series(s) => write!(f, "{s}"),
        }
    }
}

/// Result of checking one identity instance.
///
/// For exact identities `pass` means the residual is zero; for floating ones it
/// means `|residual| <= tolerance`, where `tolerance` is `err` (the truncation
/// and quadrature error the two sides report) plus a rounding allowance.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityReport {
    pub identity_id: String,
    pub list: String,
    pub x: String,
    pub a: String,
    pub lhs: Value,
    pub rhs: Value,
    pub residual: Value,
    pub err: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl IdentityReport {
    pub const CSV_HEADER: &'static str = "identity_id,M,x,a,lhs,rhs,residual,pass";

    /// `identity_id,M,x,a,lhs,rhs,residual,pass`. Fields never contain commas.
    pub fn csv_row(&self) -> String {
        let clean = |s: String| s.replace(',', ";");
        format!(
            "{},{},{},{},{},{},{},{}",
            self.identity_id,
            clean(self.list.clone()),
            self.x,
            self.a,
            clean(self.lhs.to_string()),
            clean(self.rhs.to_string()),
            clean(self.residual.to_string()),
            self.pass
        )
    }
}
