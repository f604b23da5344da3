//! Exact scalar fields.
//!
//! Every computation in this crate is exact: incidence tests compare against
//! zero, ranks are decided by exact elimination, and forms are compared for
//! equality. The [`Field`] trait captures what the algorithms need from a
//! number type; it is implemented for every [`Ratio`] over a signed integer
//! type, so the same code runs over `BigRational` (the default, see
//! [`crate::Rational`]) and over fixed-width rationals such as `Ratio<i128>`
//! for small inputs.
//!
//! Floating point types are deliberately not `Field`s: they are not `Ord` or
//! `Hash`, and a rounded zero test would silently change combinatorial types.

use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Num, Signed};

/// An exact ordered field.
pub trait Field:
    Clone + Debug + Display + Ord + Hash + Num + Signed + FromStr + Send + Sync + 'static
{
    fn from_i64(v: i64) -> Self;

    /// `n / d`; panics when `d == 0`.
    fn frac(n: i64, d: i64) -> Self {
        Self::from_i64(n) / Self::from_i64(d)
    }

    /// Parses `"p/q"`, `"p"` or a decimal-free integer literal.
    fn parse_exact(s: &str) -> Option<Self> {
        s.trim().parse().ok()
    }
}

impl<T> Field for Ratio<T>
where
    T: Integer + Signed + Clone + Debug + Display + Hash + FromStr + From<i64> + Send + Sync + 'static,
{
    fn from_i64(v: i64) -> Self {
        Ratio::from_integer(T::from(v))
    }
}

/// `n!` in the field.
pub fn factorial<F: Field>(n: usize) -> F {
    (1..=n as i64).fold(F::one(), |acc, k| acc * F::from_i64(k))
}
