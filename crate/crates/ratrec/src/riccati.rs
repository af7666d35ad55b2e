//! The first-order Moebius recurrence `y[n+1] = y[n] / (a + b y[n])`, its
//! closed form, and the multiplier sequences `h(n)` and `g(n) = 1 - h(n)`
//! driving the second-order orbit through `x[n+1] = h(n) x[n-1]`.
//!
//! With `alpha = b y[0]` and
//!
//! ```text
//! u(m) = a^m (1 - a) + alpha (1 - a^m),
//! ```
//!
//! the multiplier is `h(n) = u(n) / u(n+1)` for `a != 1` and
//! `h(n) = (1 + alpha n) / (1 + alpha (n+1))` for `a = 1`. For `|a| > 1` the
//! quotient is evaluated with numerator and denominator rescaled by `a^-n`,
//! which keeps float mode stable as `a^n` overflows; for `|a| < 1` the raw
//! form is used and the underflow of `a^n` to zero matches the limit.

use crate::params::Params;
use crate::scalar::Scalar;
use crate::Error;

/// Index/parameter bundle for the coefficient sequences.
///
/// `h(n)` depends only on `a`, `alpha` and `n`; the denominator `u(n+1)` is
/// nonzero exactly when `alpha` avoids the forbidden value with index `n+1`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientQuery<S> {
    pub n: u32,
    pub a: S,
    pub alpha: S,
}

/// One Moebius step `y -> y / (a + b y)`.
pub fn riccati_step<S: Scalar>(y: &S, params: &Params<S>) -> Result<S, Error> {
    let den = params.a().clone() + params.b().clone() * y.clone();
    if den.is_zero() {
        return Err(Error::SingularDenominator);
    }
    let next = y.clone() / den;
    if !next.is_finite_value() {
        return Err(Error::SingularDenominator);
    }
    Ok(next)
}

/// `y[n]` directly from the closed form, equal to `n` Moebius steps from `y0`.
pub fn riccati_closed<S: Scalar>(y0: &S, params: &Params<S>, n: u32) -> Result<S, Error> {
    let (a, b) = (params.a(), params.b());
    if n == 0 {
        return Ok(y0.clone());
    }
    if a.is_one() {
        // y[n] = y0 / (1 + y0 b n)
        let den = S::one() + y0.clone() * b.clone() * S::from_int(n as i64);
        if den.is_zero() {
            return Err(Error::SingularDenominator);
        }
        let y = y0.clone() / den;
        return finite_or_singular(y);
    }
    let one_minus_a = S::one() - a.clone();
    let by0 = b.clone() * y0.clone();
    if by0 == one_minus_a {
        // fixed point y0 = (1 - a)/b
        return Ok(y0.clone());
    }
    let den = if a.abs() <= S::one() {
        let t = a.powi(n);
        t.clone() * one_minus_a.clone() + by0 * (S::one() - t)
    } else {
        // scaled by a^-n; the numerator gets the same factor below
        let s = (S::one() / a.clone()).powi(n);
        one_minus_a.clone() + by0 * (s - S::one())
    };
    if den.is_zero() {
        return Err(Error::SingularDenominator);
    }
    let y = if a.abs() <= S::one() {
        y0.clone() * one_minus_a / den
    } else {
        let s = (S::one() / a.clone()).powi(n);
        y0.clone() * one_minus_a * s / den
    };
    finite_or_singular(y)
}

/// `h(n)`: the multiplier `x[n+1] / x[n-1]`, branch-correct at `a = 1`.
pub fn h_coeff<S: Scalar>(q: &CoefficientQuery<S>) -> Result<S, Error> {
    let (num, den) = h_parts(&q.a, &q.alpha, q.n);
    if den.is_zero() {
        return Err(Error::SingularDenominator);
    }
    finite_or_singular(num / den)
}

/// `g(n) = 1 - h(n)`, defined for `a != 1`.
pub fn g_coeff<S: Scalar>(q: &CoefficientQuery<S>) -> Result<S, Error> {
    let (a, alpha) = (&q.a, &q.alpha);
    if a.is_one() {
        return Err(Error::UnsupportedBranch("g(n) requires a != 1"));
    }
    if *alpha == S::one() - a.clone() {
        return Ok(S::zero());
    }
    let factor = (a.clone() + alpha.clone() - S::one()) * (S::one() - a.clone());
    let den = if a.abs() <= S::one() {
        u_term(a, alpha, q.n + 1)
    } else {
        // u(n+1) / a^n
        let s = (S::one() / a.clone()).powi(q.n);
        a.clone() * (S::one() - a.clone()) + alpha.clone() * (s - a.clone())
    };
    if den.is_zero() {
        return Err(Error::SingularDenominator);
    }
    let g = if a.abs() <= S::one() {
        factor * a.powi(q.n) / den
    } else {
        factor / den
    };
    finite_or_singular(g)
}

/// `u(m) = a^m (1 - a) + alpha (1 - a^m)`, the raw (unscaled) form.
///
/// Vanishes exactly at the forbidden alpha of index `m`; safe in exact mode
/// for any `a`, and in float mode for `|a| <= 1`.
pub(crate) fn u_term<S: Scalar>(a: &S, alpha: &S, m: u32) -> S {
    let t = a.powi(m);
    t.clone() * (S::one() - a.clone()) + alpha.clone() * (S::one() - t)
}

/// Numerator/denominator of `h(n)`, consistently scaled.
fn h_parts<S: Scalar>(a: &S, alpha: &S, n: u32) -> (S, S) {
    if a.is_one() {
        let an = alpha.clone() * S::from_int(n as i64);
        let an1 = alpha.clone() * S::from_int(n as i64 + 1);
        return (S::one() + an, S::one() + an1);
    }
    if *alpha == S::one() - a.clone() {
        // u(m) = (1-a) identically; the rescaled float form would cancel
        return (S::one(), S::one());
    }
    if a.abs() <= S::one() {
        (u_term(a, alpha, n), u_term(a, alpha, n + 1))
    } else {
        // u(n)/a^n and u(n+1)/a^n
        let s = (S::one() / a.clone()).powi(n);
        let one_minus_a = S::one() - a.clone();
        (
            one_minus_a.clone() + alpha.clone() * (s.clone() - S::one()),
            a.clone() * one_minus_a + alpha.clone() * (s - a.clone()),
        )
    }
}

fn finite_or_singular<S: Scalar>(v: S) -> Result<S, Error> {
    if v.is_finite_value() {
        Ok(v)
    } else {
        Err(Error::SingularDenominator)
    }
}

/// A computed Moebius orbit `y[1] .. y[N]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RiccatiOrbit<S> {
    pub y0: S,
    pub terms: Vec<S>,
}

impl<S: Scalar> RiccatiOrbit<S> {
    /// Iterate `riccati_step` `n_max` times; errors out at a singular step.
    pub fn compute(y0: S, params: &Params<S>, n_max: u32) -> Result<Self, Error> {
        let mut terms = Vec::with_capacity(n_max as usize);
        let mut y = y0.clone();
        for _ in 0..n_max {
            y = riccati_step(&y, params)?;
            terms.push(y.clone());
        }
        Ok(RiccatiOrbit { y0, terms })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{Exact, Float};
    use num_traits::{Signed, Zero};
    use proptest::prelude::*;

    fn e(n: i64, d: i64) -> Exact {
        Exact::from_ratio(n, d)
    }

    fn ep(a: (i64, i64), b: (i64, i64)) -> Params<Exact> {
        Params::new(e(a.0, a.1), e(b.0, b.1)).unwrap()
    }

    #[test]
    fn step_examples() {
        let p = ep((1, 1), (1, 1));
        assert_eq!(riccati_step(&e(1, 1), &p).unwrap(), e(1, 2));

        // fixed point y = (1 - a)/b with a = 1/2, b = 1
        let p = ep((1, 2), (1, 1));
        assert_eq!(riccati_step(&e(1, 2), &p).unwrap(), e(1, 2));

        // y = -a/b zeroes the denominator
        let p = ep((3, 1), (2, 1));
        assert_eq!(
            riccati_step(&e(-3, 2), &p).unwrap_err(),
            Error::SingularDenominator
        );
    }

    #[test]
    fn closed_form_matches_stepping_oracle() {
        // oracle: three explicit steps at a = 1, b = 1, y0 = 1
        let p = ep((1, 1), (1, 1));
        let mut y = e(1, 1);
        for _ in 0..3 {
            y = riccati_step(&y, &p).unwrap();
        }
        assert_eq!(y, e(1, 4));
        assert_eq!(riccati_closed(&e(1, 1), &p, 3).unwrap(), e(1, 4));

        // one step at a = 2, b = 1: 1/(2 + 1)
        let p = ep((2, 1), (1, 1));
        assert_eq!(riccati_closed(&e(1, 1), &p, 1).unwrap(), e(1, 3));
        assert_eq!(
            riccati_closed(&e(1, 1), &p, 1).unwrap(),
            riccati_step(&e(1, 1), &p).unwrap()
        );

        // fixed point (1 - a)/b stays put for any n
        let p = ep((-3, 5), (2, 1));
        let fixed = e(8, 5) / e(2, 1);
        for n in [0u32, 1, 7, 64] {
            assert_eq!(riccati_closed(&fixed, &p, n).unwrap(), fixed);
        }
    }

    #[test]
    fn closed_form_denominator_vanishes_at_blow_up_index() {
        // y0 b = -1/2 is forbidden with index 2 for a = 1: stepping dies
        // computing y[2], and the closed form errs exactly at n = 2.
        let p = ep((1, 1), (1, 1));
        let y0 = e(-1, 2);
        let y1 = riccati_step(&y0, &p).unwrap();
        assert_eq!(y1, e(-1, 1));
        assert_eq!(riccati_step(&y1, &p).unwrap_err(), Error::SingularDenominator);
        assert_eq!(
            riccati_closed(&y0, &p, 2).unwrap_err(),
            Error::SingularDenominator
        );
        assert!(riccati_closed(&y0, &p, 1).is_ok());
    }

    #[test]
    fn h_known_values() {
        // alpha = 1 - a gives h = 1 for all n
        for (a, n) in [((2i64, 1i64), 0u32), ((-1, 2), 5), ((7, 3), 13)] {
            let a = e(a.0, a.1);
            let q = CoefficientQuery {
                n,
                a: a.clone(),
                alpha: Exact::from_int(1) - a,
            };
            assert_eq!(h_coeff(&q).unwrap(), Exact::from_int(1));
        }
        // alpha = 0, a != 0 gives h = 1/a
        for (a, n) in [((2i64, 1i64), 0u32), ((-1, 2), 3), ((5, 4), 9)] {
            let q = CoefficientQuery {
                n,
                a: e(a.0, a.1),
                alpha: Exact::from_int(0),
            };
            assert_eq!(h_coeff(&q).unwrap(), Exact::from_int(1) / e(a.0, a.1));
        }
        // a = -1, alpha = 3: h alternates 1/2 (even n), 2 (odd n)
        for n in 0..8u32 {
            let q = CoefficientQuery {
                n,
                a: e(-1, 1),
                alpha: e(3, 1),
            };
            let expect = if n % 2 == 0 { e(1, 2) } else { e(2, 1) };
            assert_eq!(h_coeff(&q).unwrap(), expect);
        }
    }

    #[test]
    fn g_examples() {
        // alpha = 1 - a kills the numerator factor
        let q = CoefficientQuery {
            n: 7,
            a: e(1, 2),
            alpha: e(1, 2),
        };
        assert_eq!(g_coeff(&q).unwrap(), Exact::from_int(0));

        // oracle: g(0) = 1 - h(0), h(0) = 1/(a + alpha)
        let q = CoefficientQuery {
            n: 0,
            a: e(1, 2),
            alpha: e(1, 1),
        };
        assert_eq!(h_coeff(&q).unwrap(), e(2, 3));
        assert_eq!(g_coeff(&q).unwrap(), e(1, 3));

        let q = CoefficientQuery {
            n: 0,
            a: e(-1, 1),
            alpha: e(3, 1),
        };
        assert_eq!(h_coeff(&q).unwrap(), e(1, 2));
        assert_eq!(g_coeff(&q).unwrap(), e(1, 2));

        let q = CoefficientQuery {
            n: 0,
            a: e(1, 1),
            alpha: e(1, 1),
        };
        assert_eq!(
            g_coeff(&q).unwrap_err(),
            Error::UnsupportedBranch("g(n) requires a != 1")
        );
    }

    #[test]
    fn float_h_is_stable_at_large_n() {
        // |a| > 1: a^n overflows long before n = 800; h must approach 1/a
        let q = CoefficientQuery {
            n: 800,
            a: 2.0f64,
            alpha: 1.0,
        };
        let h = h_coeff(&q).unwrap();
        assert!((h - 0.5).abs() < 1e-12);

        // |a| < 1: a^n underflows; h must approach 1
        let q = CoefficientQuery {
            n: 100_000,
            a: 0.5f64,
            alpha: 3.0,
        };
        assert_eq!(h_coeff(&q).unwrap(), 1.0);

        let q = CoefficientQuery {
            n: 60,
            a: -0.5f64,
            alpha: -0.75,
        };
        let exact = CoefficientQuery {
            n: 60,
            a: e(-1, 2),
            alpha: e(-3, 4),
        };
        let expect = h_coeff(&exact).unwrap().to_f64_lossy();
        assert!((h_coeff(&q).unwrap() - expect).abs() <= 1e-12 * expect.abs());
    }

    #[test]
    fn riccati_orbit_terms_satisfy_defining_relation() {
        let p = ep((1, 3), (-2, 1));
        let orbit = RiccatiOrbit::compute(e(5, 7), &p, 40).unwrap();
        let mut prev = orbit.y0.clone();
        for y in &orbit.terms {
            let lhs = y.clone() * (e(1, 3) + e(-2, 1) * prev.clone());
            assert_eq!(lhs, prev);
            prev = y.clone();
        }
    }

    // Small-integer rational strategies keep exact arithmetic fast.
    fn small_a() -> impl Strategy<Value = Exact> {
        (-9i64..=9, 1i64..=4)
            .prop_map(|(n, d)| e(n, d))
            .prop_filter("a != 1", |a| *a != Exact::from_int(1))
    }

    fn small_alpha() -> impl Strategy<Value = Exact> {
        (-12i64..=12, 1i64..=4).prop_map(|(n, d)| e(n, d))
    }

    proptest! {
        // closed form == n-fold stepping, both branches, exact
        #[test]
        fn closed_equals_iterated_step(
            an in -6i64..=6, ad in 1i64..=3,
            bn in prop::sample::select(vec![-2i64, -1, 1, 2]),
            y0n in -8i64..=8, y0d in 1i64..=4,
            n in 0u32..=64,
        ) {
            let params = Params::new(e(an, ad), e(bn, 1)).unwrap();
            let y0 = e(y0n, y0d);
            let mut y = Ok(y0.clone());
            for _ in 0..n {
                y = riccati_step(y.as_ref().unwrap(), &params);
                if y.is_err() { break; }
            }
            // Equality is only claimed for admissible y0, i.e. when stepping
            // survives; a blown-up orbit leaves the closed form unconstrained.
            if let Ok(v) = y {
                prop_assert_eq!(riccati_closed(&y0, &params, n).unwrap(), v);
            }
        }

        // h(n) = 1 - g(n) exactly, a != 1
        #[test]
        fn h_is_one_minus_g(a in small_a(), alpha in small_alpha(), n in 0u32..=64) {
            let q = CoefficientQuery { n, a, alpha };
            if let (Ok(h), Ok(g)) = (h_coeff(&q), g_coeff(&q)) {
                prop_assert_eq!(h, Exact::from_int(1) - g);
            }
        }

        // h(n) = 1 / (a + b y[n]) with y from the closed form, b != 0
        #[test]
        fn h_matches_riccati_reciprocal(
            a in small_a(),
            alpha in small_alpha(),
            bn in prop::sample::select(vec![-3i64, -1, 1, 2]),
            n in 0u32..=40,
        ) {
            let b = e(bn, 1);
            let params = Params::new(a.clone(), b.clone()).unwrap();
            let y0 = alpha.clone() / b;
            let q = CoefficientQuery { n, a, alpha };
            if let (Ok(h), Ok(y)) = (h_coeff(&q), riccati_closed(&y0, &params, n)) {
                let den = params.a().clone() + params.b().clone() * y;
                prop_assume!(!den.is_zero());
                prop_assert_eq!(h, Exact::from_int(1) / den);
            }
        }

        // prod_{n=0..2k+1} h(n) telescopes to (1-a)/u(2k+2), exact
        #[test]
        fn telescoping_product(a in small_a(), alpha in small_alpha(), k in 0u32..=32) {
            let mut prod = Exact::from_int(1);
            let mut ok = true;
            for n in 0..=(2 * k + 1) {
                match h_coeff(&CoefficientQuery { n, a: a.clone(), alpha: alpha.clone() }) {
                    Ok(h) => prod *= h,
                    Err(_) => { ok = false; break; }
                }
            }
            prop_assume!(ok);
            let den = u_term(&a, &alpha, 2 * k + 2);
            prop_assume!(!den.is_zero());
            let rhs = (Exact::from_int(1) - a) / den;
            prop_assert_eq!(prod, rhs);
        }

        // 0 < |a| < 1 and alpha > (1-a)/2 force u(n) > 0 and h(n) > 0
        #[test]
        fn positivity_under_half_condition(
            an in prop::sample::select(vec![-4i64, -3, -2, -1, 1, 2, 3, 4]),
            ad in 5i64..=9,
            margin_n in 1i64..=40, margin_d in 1i64..=4,
            n in 0u32..=80,
        ) {
            let a = e(an, ad);
            prop_assume!(a.abs() < Exact::from_int(1) && !num_traits::Zero::is_zero(&a));
            let alpha = (Exact::from_int(1) - a.clone()) / Exact::from_int(2)
                + e(margin_n, margin_d * 8);
            let u = u_term(&a, &alpha, n);
            prop_assert!(u > Exact::from_int(0));
            let h = h_coeff(&CoefficientQuery { n, a, alpha }).unwrap();
            prop_assert!(h > Exact::from_int(0));
        }
    }

    #[test]
    fn float_closed_form_large_n_decays_to_zero() {
        let p: Params<Float> = Params::new(2.0, 1.0).unwrap();
        let y = riccati_closed(&1.0, &p, 10_000).unwrap();
        assert_eq!(y, 0.0);
        // a = 1 branch: y[n] = y0/(1 + y0 b n)
        let p: Params<Float> = Params::new(1.0, 1.0).unwrap();
        let y = riccati_closed(&1.0, &p, 10_000).unwrap();
        assert!((y - 1.0 / 10_001.0).abs() < 1e-18);
    }
}
