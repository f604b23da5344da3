pub mod builtin;
pub mod error;
pub mod linalg;
pub mod local_global;
pub mod oracle;
pub mod poly;
pub mod polytope;
pub mod resolution;
pub mod scalar;
pub mod simple;
pub mod sym;
pub mod uniform;
pub mod volume;

pub use error::{Error, Result};
pub use scalar::Field;

use num_rational::BigRational;

/// Exact rationals, the default scalar.
pub type Rational = BigRational;
pub type Polytope = polytope::HPolytope<Rational>;
pub type Poly = poly::MultiPoly<Rational>;
pub type Expr = sym::SymExpr<Rational>;
pub type Form = volume::VolumeForm<Rational>;
pub type Family = uniform::FormFamily<Rational>;
