//! Arbitrary-precision series solutions of second-order linear ODEs with
//! polynomial coefficients, together with apriori estimates of coefficient
//! growth and of the number of terms a target precision will require.
//!
//! The crate is organized in layers:
//!
//! * [`numerics`]: arbitrary-precision real/complex scalars and precision
//!   planning,
//! * [`ode`]: problem representation, classification of the origin, indicial
//!   structure, and exact index shifts,
//! * [`frobenius`]: coefficient recursions, series evaluation, and analytic
//!   continuation along paths,
//! * [`legendre`]: discrete Legendre transforms with a finite-size correction,
//! * [`wkb`]: exponential-growth profiles of solutions from phase integrals,
//! * [`estimator`]: the growth profile turned into coefficient-magnitude and
//!   term-count predictions.

pub mod error;
pub mod estimator;
pub mod frobenius;
pub mod legendre;
pub mod numerics;
pub mod ode;
pub(crate) mod roots;
pub mod wkb;

pub use error::{Error, Result};
