//! Toolkit for the planar rational recurrence
//!
//! ```text
//! x[n+1] = x[n-1] / (a + b * x[n] * x[n-1]),    n >= 0,
//! ```
//!
//! with real parameters `(a, b)` and initial pair `(x[-1], x[0])`.
//!
//! The product `y[n] = x[n] * x[n-1]` obeys the first-order Moebius recurrence
//! `y[n+1] = y[n] / (a + b y[n])`, which has a closed form. That reduction
//! drives everything here: closed-form orbit terms as running products of a
//! multiplier sequence `h(n)`, an exact decision procedure for whether an
//! orbit ever hits a zero denominator, a complete asymptotic taxonomy over
//! `(a, b, x[-1], x[0])`, certified truncation bounds for the limiting
//! 2-periodic point, and stability analysis of the periodic orbits.
//!
//! All numerics are generic over [`scalar::Scalar`], with two concrete
//! instantiations: [`Float`] (binary64, fast, used for sweeps and long
//! orbits) and [`Exact`] (arbitrary-precision rationals, used wherever a
//! decision has to be exact). Mixing the two in one computation is a type
//! error, which is the point.

pub mod admissibility;
pub mod classifier;
pub mod orbit;
pub mod params;
pub mod riccati;
pub mod scalar;

mod error;

pub use error::Error;
pub use params::{alpha_of, validate_params, Params, SeedPair};
pub use scalar::Scalar;

/// Binary64 scalar mode.
pub type Float = f64;
/// Arbitrary-precision rational scalar mode.
pub type Exact = num_rational::BigRational;

/// Parameters in float mode.
pub type FloatParams = Params<Float>;
/// Parameters in exact mode.
pub type ExactParams = Params<Exact>;
/// An orbit computed in float mode.
pub type FloatOrbit = orbit::Orbit<Float>;
/// An orbit computed in exact mode.
pub type ExactOrbit = orbit::Orbit<Exact>;
