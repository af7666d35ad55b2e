//! Parameters `(a, b)`, seed pairs `(x[-1], x[0])`, and the product
//! `alpha = b * x[-1] * x[0]` that controls an orbit's fate for fixed `a`.

use crate::scalar::Scalar;
use crate::Error;

/// The real parameters `(a, b)` of the recurrence.
///
/// Construction rejects `(0, 0)`, where the denominator is identically zero,
/// and (in float mode) non-finite inputs. Everything downstream relies on
/// this, so the fields stay private.
#[derive(Debug, Clone, PartialEq)]
pub struct Params<S> {
    a: S,
    b: S,
}

impl<S: Scalar> Params<S> {
    pub fn new(a: S, b: S) -> Result<Self, Error> {
        validate_params(&a, &b)?;
        Ok(Params { a, b })
    }

    pub fn a(&self) -> &S {
        &self.a
    }

    pub fn b(&self) -> &S {
        &self.b
    }
}

/// Accepts any finite `(a, b)` except `(0, 0)`.
pub fn validate_params<S: Scalar>(a: &S, b: &S) -> Result<(), Error> {
    if !a.is_finite_value() || !b.is_finite_value() {
        return Err(Error::NonFinite);
    }
    if a.is_zero() && b.is_zero() {
        return Err(Error::DegenerateParams);
    }
    Ok(())
}

/// The initial pair `(x[-1], x[0])`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeedPair<S> {
    x_prev: S,
    x_zero: S,
}

impl<S: Scalar> SeedPair<S> {
    pub fn new(x_prev: S, x_zero: S) -> Result<Self, Error> {
        if !x_prev.is_finite_value() || !x_zero.is_finite_value() {
            return Err(Error::NonFinite);
        }
        Ok(SeedPair { x_prev, x_zero })
    }

    /// `x[-1]`
    pub fn x_prev(&self) -> &S {
        &self.x_prev
    }

    /// `x[0]`
    pub fn x_zero(&self) -> &S {
        &self.x_zero
    }

    pub fn is_origin(&self) -> bool {
        self.x_prev.is_zero() && self.x_zero.is_zero()
    }
}

/// `alpha = b * x[-1] * x[0]`, in the same arithmetic mode as the inputs.
pub fn alpha_of<S: Scalar>(params: &Params<S>, seed: &SeedPair<S>) -> S {
    params.b.clone() * seed.x_prev.clone() * seed.x_zero.clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Exact;

    fn e(n: i64, d: i64) -> Exact {
        Exact::from_ratio(n, d)
    }

    #[test]
    fn alpha_of_examples() {
        // product of ones
        let p = Params::new(1.0, 1.0).unwrap();
        let s = SeedPair::new(1.0, 1.0).unwrap();
        assert_eq!(alpha_of(&p, &s), 1.0);

        // zero factor
        let p = Params::new(-1.0, 1.0).unwrap();
        let s = SeedPair::new(0.0, 2.0).unwrap();
        assert_eq!(alpha_of(&p, &s), 0.0);

        // alpha = 1 - a at the singular bifurcation point a* = 3 for b = -1
        let p = Params::new(e(3, 1), e(-1, 1)).unwrap();
        let s = SeedPair::new(e(1, 1), e(2, 1)).unwrap();
        assert_eq!(alpha_of(&p, &s), e(-2, 1));
        assert_eq!(alpha_of(&p, &s), Exact::from_int(1) - e(3, 1));
    }

    #[test]
    fn values_are_send_and_sync() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<Params<Exact>>();
        assert_send_sync::<Params<f64>>();
        assert_send_sync::<SeedPair<Exact>>();
    }

    #[test]
    fn validate_params_examples() {
        assert_eq!(
            Params::new(0.0, 0.0).unwrap_err(),
            Error::DegenerateParams
        );
        assert!(Params::new(0.0, 1.0).is_ok());
        assert!(Params::new(1.0, 0.0).is_ok());
        assert_eq!(Params::new(f64::NAN, 1.0).unwrap_err(), Error::NonFinite);
        assert_eq!(
            SeedPair::new(1.0, f64::INFINITY).unwrap_err(),
            Error::NonFinite
        );
    }
}
