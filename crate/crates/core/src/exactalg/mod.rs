//! Exact arithmetic: rationals, the variable context, sparse multivariate
//! polynomials over Q and exact linear systems.

mod linsys;
mod poly;

pub use linsys::{rank, LinearSystem, Matrix, RowOutcome, RowReducer, Solution};
pub use poly::{Monomial, Poly};

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};

/// Exact rational number; always stored in lowest terms with a positive
/// denominator.
pub type Rational = num_rational::BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `(-1)^k` as a rational.
pub fn sign(k: usize) -> Rational {
    if k.is_multiple_of(2) {
        Rational::one()
    } else {
        -Rational::one()
    }
}

/// Print a rational as `n` or `n/d`.
pub fn fmt_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Maximum number of variables; index sets are stored as `u32` bitmasks.
pub const MAX_VARS: usize = 32;

/// Ordered list of variable names. Index `i` is tied to the basis derivation
/// `@x_i` and the basis form `dx_i`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VarContext {
    names: Vec<String>,
}

impl VarContext {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Arc<Self>> {
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        if names.len() > MAX_VARS {
            return Err(Error::InvalidContext(format!(
                "{} variables exceed the maximum of {MAX_VARS}",
                names.len()
            )));
        }
        for (i, a) in names.iter().enumerate() {
            if a.is_empty() || !a.chars().all(|c| c.is_alphanumeric() || c == '_') {
                return Err(Error::InvalidContext(format!("bad variable name {a:?}")));
            }
            if a.chars().next().is_some_and(|c| c.is_ascii_digit()) {
                return Err(Error::InvalidContext(format!("bad variable name {a:?}")));
            }
            if names[..i].contains(a) {
                return Err(Error::InvalidContext(format!("duplicate variable {a:?}")));
            }
        }
        Ok(Arc::new(VarContext { names }))
    }

    pub fn n(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Context with the variables of `self` followed by `extra`.
    pub fn extended<S: AsRef<str>>(&self, extra: &[S]) -> Result<Arc<Self>> {
        let mut all: Vec<String> = self.names.clone();
        all.extend(extra.iter().map(|s| s.as_ref().to_string()));
        VarContext::new(&all)
    }
}

impl fmt::Debug for VarContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.names.join(","))
    }
}

pub(crate) fn same_ctx(a: &Arc<VarContext>, b: &Arc<VarContext>) -> Result<()> {
    if Arc::ptr_eq(a, b) || a == b {
        Ok(())
    } else {
        Err(Error::ContextMismatch {
            left: a.names.join(","),
            right: b.names.join(","),
        })
    }
}
