//! Arbitrary-precision scalars and precision planning.
//!
//! [`ArbReal`] and [`ArbComplex`] carry their working precision (in bits) with
//! the value; binary operations round the result to the smaller of the two
//! operand precisions, so precision never silently inflates. Decimal input is
//! parsed exactly through rationals before rounding once to the working
//! precision, and [`plan_precision`] decides that working precision from the
//! requested number of correct digits plus the expected worst intermediate
//! term magnitude.

mod complex;
mod decimal;
mod policy;
mod real;
mod scalar;

pub use complex::ArbComplex;
pub use decimal::{decimal_string, parse_number};
pub use policy::{plan_precision, PrecisionPlan};
pub use real::ArbReal;
pub use scalar::{complex_rat_log10_abs, rat_log10_abs, CRat, Rat, Scalar};
