//! The complete asymptotic taxonomy of the recurrence over `(a, b, seed)`,
//! dispatching on `a` and `alpha = b x[-1] x[0]`:
//!
//! * `a = -1`: six regimes in `alpha`, from exact 2- and 4-cycles to
//!   unbounded orbits with fully determined sign patterns;
//! * `|a| >= 1`, `a != -1`: convergence to zero unless `alpha = 1 - a`
//!   (exact 2-cycle);
//! * `|a| < 1`: exact cycles at `a = 0` and `alpha = 1 - a`, geometric
//!   blow-up at `alpha = 0`, and otherwise convergence to a 2-periodic
//!   point `(p, q)` with `p q = (1-a)/b`, certified by a truncation bound.
//!
//! Boundary dispatch compares exactly (bitwise in float mode): the taxonomy
//! is genuinely discontinuous at `|a| = 1`, `a = 0` and at the singular
//! alphas, so a tolerance band would misclassify nearby regular inputs.

mod limit;
mod stability;

pub use limit::{
    equilibria, limit_periodic_point, product_bounds, sign_stabilization_index, tail_bound,
    PeriodicPoint, ProductBounds,
};
pub use stability::{
    period2_jacobian_eigs, periodic_stability, periodic_stability_probe, zero_stability,
    ProbeEntry, ProbeReport, StabilityClass, StabilityTarget, StabilityVerdict,
};

use crate::admissibility::{check_admissible_default, AdmissibilityVerdict};
use crate::params::{alpha_of, Params, SeedPair};
use crate::scalar::Scalar;
use serde_json::json;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    /// Sign of a nonzero value.
    pub fn of<S: Scalar>(v: &S) -> Option<Sign> {
        if v.is_zero() {
            None
        } else if *v > S::zero() {
            Some(Sign::Positive)
        } else {
            Some(Sign::Negative)
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Sign::Positive => "positive",
            Sign::Negative => "negative",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    fn name(&self) -> &'static str {
        match self {
            Parity::Even => "even",
            Parity::Odd => "odd",
        }
    }
}

/// What one index-parity subsequence of a geometric orbit does.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubseqFate {
    IdenticallyZero,
    DivergesTo(Sign),
    /// Magnitude grows while the sign alternates (negative `a`).
    DivergesAlternating,
}

impl SubseqFate {
    fn json_value(&self) -> serde_json::Value {
        match self {
            SubseqFate::IdenticallyZero => json!("zero"),
            SubseqFate::DivergesTo(s) => json!({"diverges": s.name()}),
            SubseqFate::DivergesAlternating => json!("diverges-alternating"),
        }
    }
}

/// The asymptotic class of an orbit.
#[derive(Debug, Clone, PartialEq)]
pub enum Behavior<S> {
    NotAdmissible {
        blow_up_step: u32,
    },
    /// Both seed entries are zero: the whole orbit is zero.
    TriviallyZero,
    ConvergesToZero,
    /// Exactly periodic with period <= 2: odd-index terms equal `p`,
    /// even-index terms equal `q`. For `alpha = 1 - a` the cycle starts at
    /// `x[-1]`; for `a = 0` it starts at `x[0]` (with `p = x[1] = 1/(b x[0])`).
    ExactlyTwoPeriodic {
        p: S,
        q: S,
    },
    /// Regular orbit with `0 < |a| < 1`: converges to the 2-periodic point
    /// `(p, q)`, with `|p q - (1-a)/b| <= error_bound` certified.
    ConvergesToTwoPeriodic {
        p: S,
        q: S,
        error_bound: S,
    },
    /// `a = -1`, `alpha = 0`: the cycle `x[1..4] = (-x[-1], -x[0], x[-1], x[0])`.
    FourPeriodic {
        cycle: [S; 4],
    },
    /// `a = -1`, `alpha > 2`: even terms diverge with this sign, odd go to 0.
    UnboundedEvenDivergesOddToZero {
        sign: Sign,
    },
    /// `a = -1`, `1 < alpha < 2`: odd terms diverge, even go to zero.
    UnboundedOddDivergesEvenToZero {
        sign: Sign,
    },
    /// `a = -1`, `0 < alpha < 1` or `alpha < 0`: one parity splits into two
    /// mod-4 phases diverging with opposite signs; the other parity goes to
    /// zero. `phase_signs` are the limits of the lower and upper residue
    /// (indices 4k+1 and 4k+3 when odd diverges, 4k and 4k+2 when even).
    UnboundedAlternating {
        diverging: Parity,
        phase_signs: [Sign; 2],
    },
    /// `0 < |a| < 1`, `alpha = 0`, seed not the origin: `x[n+2] = x[n]/a`.
    UnboundedGeometric {
        even: SubseqFate,
        odd: SubseqFate,
    },
}

impl<S: Scalar> Behavior<S> {
    pub fn json_value(&self) -> serde_json::Value {
        match self {
            Behavior::NotAdmissible { blow_up_step } => {
                json!({"class": "NotAdmissible", "blow_up_step": blow_up_step})
            }
            Behavior::TriviallyZero => json!({"class": "TriviallyZero"}),
            Behavior::ConvergesToZero => json!({"class": "ConvergesToZero"}),
            Behavior::ExactlyTwoPeriodic { p, q } => json!({
                "class": "ExactlyTwoPeriodic",
                "p": p.json_value(),
                "q": q.json_value(),
            }),
            Behavior::ConvergesToTwoPeriodic { p, q, error_bound } => json!({
                "class": "ConvergesToTwoPeriodic",
                "p": p.json_value(),
                "q": q.json_value(),
                "error_bound": error_bound.json_value(),
            }),
            Behavior::FourPeriodic { cycle } => json!({
                "class": "FourPeriodic",
                "cycle": cycle.iter().map(|c| c.json_value()).collect::<Vec<_>>(),
            }),
            Behavior::UnboundedEvenDivergesOddToZero { sign } => json!({
                "class": "UnboundedEvenDivergesOddToZero",
                "sign": sign.name(),
            }),
            Behavior::UnboundedOddDivergesEvenToZero { sign } => json!({
                "class": "UnboundedOddDivergesEvenToZero",
                "sign": sign.name(),
            }),
            Behavior::UnboundedAlternating {
                diverging,
                phase_signs,
            } => json!({
                "class": "UnboundedAlternating",
                "diverging": diverging.name(),
                "phase_signs": [phase_signs[0].name(), phase_signs[1].name()],
            }),
            Behavior::UnboundedGeometric { even, odd } => json!({
                "class": "UnboundedGeometric",
                "even": even.json_value(),
                "odd": odd.json_value(),
            }),
        }
    }

    pub fn class_name(&self) -> &'static str {
        match self {
            Behavior::NotAdmissible { .. } => "NotAdmissible",
            Behavior::TriviallyZero => "TriviallyZero",
            Behavior::ConvergesToZero => "ConvergesToZero",
            Behavior::ExactlyTwoPeriodic { .. } => "ExactlyTwoPeriodic",
            Behavior::ConvergesToTwoPeriodic { .. } => "ConvergesToTwoPeriodic",
            Behavior::FourPeriodic { .. } => "FourPeriodic",
            Behavior::UnboundedEvenDivergesOddToZero { .. } => "UnboundedEvenDivergesOddToZero",
            Behavior::UnboundedOddDivergesEvenToZero { .. } => "UnboundedOddDivergesEvenToZero",
            Behavior::UnboundedAlternating { .. } => "UnboundedAlternating",
            Behavior::UnboundedGeometric { .. } => "UnboundedGeometric",
        }
    }
}

fn default_tol<S: Scalar>() -> S {
    S::from_ratio(1, 1_000_000_000)
}

/// Classify with the default certificate tolerance (`1e-9`).
pub fn classify<S: Scalar>(params: &Params<S>, seed: &SeedPair<S>) -> Behavior<S> {
    classify_with_tol(params, seed, &default_tol())
}

/// `tol` only affects the certificate attached to `ConvergesToTwoPeriodic`.
pub fn classify_with_tol<S: Scalar>(
    params: &Params<S>,
    seed: &SeedPair<S>,
    tol: &S,
) -> Behavior<S> {
    if let AdmissibilityVerdict::NonAdmissible { blow_up_step } =
        check_admissible_default(params, seed)
    {
        return Behavior::NotAdmissible { blow_up_step };
    }
    // float Undecided proceeds: the verdict itself is reported alongside

    let (a, b) = (params.a(), params.b());
    let alpha = alpha_of(params, seed);
    let one_minus_a = S::one() - a.clone();
    let (xm1, x0) = (seed.x_prev(), seed.x_zero());

    if seed.is_origin() {
        // a != 0 here: the origin with a = 0 is non-admissible
        return Behavior::TriviallyZero;
    }

    if (-a.clone()).is_one() {
        return classify_a_minus_one(&alpha, xm1, x0);
    }

    if a.abs() >= S::one() {
        if alpha == one_minus_a {
            return Behavior::ExactlyTwoPeriodic {
                p: xm1.clone(),
                q: x0.clone(),
            };
        }
        return Behavior::ConvergesToZero;
    }

    // |a| < 1 from here
    if a.is_zero() {
        // 2-periodic from x[0] on: x[1] = 1/(b x0); alpha != 0 so x0 != 0
        return Behavior::ExactlyTwoPeriodic {
            p: S::one() / (b.clone() * x0.clone()),
            q: x0.clone(),
        };
    }
    if alpha == one_minus_a {
        return Behavior::ExactlyTwoPeriodic {
            p: xm1.clone(),
            q: x0.clone(),
        };
    }
    if alpha.is_zero() {
        let fate = |v: &S| match Sign::of(v) {
            None => SubseqFate::IdenticallyZero,
            Some(s) => {
                if *a > S::zero() {
                    SubseqFate::DivergesTo(s)
                } else {
                    SubseqFate::DivergesAlternating
                }
            }
        };
        return Behavior::UnboundedGeometric {
            even: fate(x0),
            odd: fate(xm1),
        };
    }

    // regular: certified limit always exists for 0 < |a| < 1
    match limit_periodic_point(params, seed, tol) {
        Ok(pp) => Behavior::ConvergesToTwoPeriodic {
            p: pp.p,
            q: pp.q,
            error_bound: pp.error_bound,
        },
        // unreachable for regular seeds; kept total rather than panicking
        Err(_) => Behavior::ConvergesToZero,
    }
}

/// The six alpha-regimes at `a = -1` (alpha = 1 is non-admissible).
fn classify_a_minus_one<S: Scalar>(alpha: &S, xm1: &S, x0: &S) -> Behavior<S> {
    let two = S::two();
    if *alpha == two {
        return Behavior::ExactlyTwoPeriodic {
            p: xm1.clone(),
            q: x0.clone(),
        };
    }
    if alpha.is_zero() {
        return Behavior::FourPeriodic {
            cycle: [-xm1.clone(), -x0.clone(), xm1.clone(), x0.clone()],
        };
    }
    if *alpha > two {
        // x[2k+2] = x0 (alpha-1)^(k+1) with alpha - 1 > 1
        return Behavior::UnboundedEvenDivergesOddToZero {
            sign: Sign::of(x0).expect("alpha != 0 forces x0 != 0"),
        };
    }
    if *alpha > S::one() {
        // 1 < alpha < 2: odd terms x[-1]/(alpha-1)^(k+1) diverge
        return Behavior::UnboundedOddDivergesEvenToZero {
            sign: Sign::of(xm1).expect("alpha != 0 forces x[-1] != 0"),
        };
    }
    if *alpha > S::zero() {
        // 0 < alpha < 1: odd terms split mod 4, even go to zero;
        // x[4k+1] -> -sign(x[-1]) inf, x[4k+3] -> +sign(x[-1]) inf
        let s = Sign::of(xm1).expect("alpha != 0 forces x[-1] != 0");
        return Behavior::UnboundedAlternating {
            diverging: Parity::Odd,
            phase_signs: [s.flip(), s],
        };
    }
    // alpha < 0: even terms split mod 4, odd go to zero;
    // x[4k] -> sign(x0) inf, x[4k+2] -> -sign(x0) inf
    let s = Sign::of(x0).expect("alpha != 0 forces x0 != 0");
    Behavior::UnboundedAlternating {
        diverging: Parity::Even,
        phase_signs: [s, s.flip()],
    }
}

/// The full JSON report for one classification:
/// `{params, seed, alpha, admissibility, behavior, certificates}`.
pub fn classify_report<S: Scalar>(params: &Params<S>, seed: &SeedPair<S>) -> serde_json::Value {
    classify_report_with_tol(params, seed, &default_tol())
}

pub fn classify_report_with_tol<S: Scalar>(
    params: &Params<S>,
    seed: &SeedPair<S>,
    tol: &S,
) -> serde_json::Value {
    let behavior = classify_with_tol(params, seed, tol);
    let verdict = check_admissible_default(params, seed);
    let alpha = alpha_of(params, seed);
    let certificates = match &behavior {
        Behavior::ConvergesToTwoPeriodic { p, q, error_bound } => {
            periodic_certificates(params, p, q, Some(error_bound))
        }
        Behavior::ExactlyTwoPeriodic { p, q } => periodic_certificates(params, p, q, None),
        _ => json!({
            "pq_product": null,
            "target_pq": null,
            "tail_bound": null,
            "eigenvalues": null,
        }),
    };
    json!({
        "params": {"a": params.a().json_value(), "b": params.b().json_value()},
        "seed": {
            "x_prev": seed.x_prev().json_value(),
            "x_zero": seed.x_zero().json_value(),
        },
        "alpha": alpha.json_value(),
        "admissibility": verdict.json_value(),
        "behavior": behavior.json_value(),
        "certificates": certificates,
    })
}

fn periodic_certificates<S: Scalar>(
    params: &Params<S>,
    p: &S,
    q: &S,
    error_bound: Option<&S>,
) -> serde_json::Value {
    let target = if params.b().is_zero() {
        None
    } else {
        Some((S::one() - params.a().clone()) / params.b().clone())
    };
    let eigenvalues = period2_jacobian_eigs(params, p, q)
        .ok()
        .map(|(l1, l2)| json!([l1.json_value(), l2.json_value()]));
    json!({
        "pq_product": (p.clone() * q.clone()).json_value(),
        "target_pq": target.map(|t| t.json_value()),
        "tail_bound": error_bound.map(|e| e.json_value()),
        "eigenvalues": eigenvalues,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orbit::iterate;
    use crate::{Exact, Float};
    use num_traits::Signed;

    fn e(n: i64, d: i64) -> Exact {
        Exact::from_ratio(n, d)
    }

    fn fp(a: f64, b: f64) -> Params<Float> {
        Params::new(a, b).unwrap()
    }

    fn fs(x: f64, y: f64) -> SeedPair<Float> {
        SeedPair::new(x, y).unwrap()
    }

    #[test]
    fn four_periodic_at_a_minus_one_alpha_zero() {
        let got = classify(&fp(-1.0, 1.0), &fs(0.0, 2.0));
        match got {
            Behavior::FourPeriodic { cycle } => {
                assert_eq!(cycle[0], 0.0);
                assert_eq!(cycle[1], -2.0);
                assert_eq!(cycle[2], 0.0);
                assert_eq!(cycle[3], 2.0);
            }
            b => panic!("expected FourPeriodic, got {:?}", b),
        }
    }

    #[test]
    fn converges_to_zero_above_one() {
        assert_eq!(
            classify(&fp(2.0, 1.0), &fs(1.0, 1.0)),
            Behavior::ConvergesToZero
        );
    }

    #[test]
    fn converges_to_two_periodic_with_product_half() {
        match classify(&fp(0.5, 1.0), &fs(1.0, 1.0)) {
            Behavior::ConvergesToTwoPeriodic { p, q, error_bound } => {
                assert!((p * q - 0.5).abs() <= error_bound.max(1e-10));
                // oracle: long float iteration's subsequence values
                let orbit = iterate(&fp(0.5, 1.0), &fs(1.0, 1.0), 100_001);
                assert!((p - orbit.term(99_999).unwrap()).abs() < 1e-7);
                assert!((q - orbit.term(100_000).unwrap()).abs() < 1e-7);
            }
            b => panic!("expected ConvergesToTwoPeriodic, got {:?}", b),
        }
    }

    #[test]
    fn a_minus_one_even_diverges_for_large_alpha() {
        assert_eq!(
            classify(&fp(-1.0, 1.0), &fs(1.0, 3.0)),
            Behavior::UnboundedEvenDivergesOddToZero {
                sign: Sign::Positive
            }
        );
        assert_eq!(
            classify(&fp(-1.0, 1.0), &fs(-1.0, -3.0)),
            Behavior::UnboundedEvenDivergesOddToZero {
                sign: Sign::Negative
            }
        );
    }

    #[test]
    fn a_minus_one_remaining_regimes() {
        // alpha = 2: exact 2-cycle
        assert_eq!(
            classify(&fp(-1.0, 1.0), &fs(1.0, 2.0)),
            Behavior::ExactlyTwoPeriodic { p: 1.0, q: 2.0 }
        );
        // 1 < alpha < 2
        assert_eq!(
            classify(&fp(-1.0, 1.0), &fs(1.0, 1.5)),
            Behavior::UnboundedOddDivergesEvenToZero {
                sign: Sign::Positive
            }
        );
        // 0 < alpha < 1: odd parity splits
        assert_eq!(
            classify(&fp(-1.0, 1.0), &fs(1.0, 0.5)),
            Behavior::UnboundedAlternating {
                diverging: Parity::Odd,
                phase_signs: [Sign::Negative, Sign::Positive],
            }
        );
        // alpha < 0: even parity splits
        assert_eq!(
            classify(&fp(-1.0, 1.0), &fs(1.0, -1.0)),
            Behavior::UnboundedAlternating {
                diverging: Parity::Even,
                phase_signs: [Sign::Negative, Sign::Positive],
            }
        );
        // alpha = 1 is the lone non-admissible ray
        assert_eq!(
            classify(&fp(-1.0, 1.0), &fs(1.0, 1.0)),
            Behavior::NotAdmissible { blow_up_step: 1 }
        );
    }

    #[test]
    fn boundary_cases_below_one() {
        // a = 0: 2-periodic from x[0] with p = 1/(b x0)
        assert_eq!(
            classify(&fp(0.0, 1.0), &fs(2.0, 3.0)),
            Behavior::ExactlyTwoPeriodic {
                p: 1.0 / 3.0,
                q: 3.0
            }
        );
        // alpha = 1 - a
        assert_eq!(
            classify(&fp(0.5, 1.0), &fs(1.0, 0.5)),
            Behavior::ExactlyTwoPeriodic { p: 1.0, q: 0.5 }
        );
        // alpha = 0, nonzero seed, 0 < a < 1: geometric divergence
        assert_eq!(
            classify(&fp(0.5, 1.0), &fs(0.0, 2.0)),
            Behavior::UnboundedGeometric {
                even: SubseqFate::DivergesTo(Sign::Positive),
                odd: SubseqFate::IdenticallyZero,
            }
        );
        // same with a < 0: signs alternate
        assert_eq!(
            classify(&fp(-0.5, 1.0), &fs(3.0, 0.0)),
            Behavior::UnboundedGeometric {
                even: SubseqFate::IdenticallyZero,
                odd: SubseqFate::DivergesAlternating,
            }
        );
        // b = 0 (alpha = 0) with both entries nonzero
        assert_eq!(
            classify(&fp(0.5, 0.0), &fs(3.0, -2.0)),
            Behavior::UnboundedGeometric {
                even: SubseqFate::DivergesTo(Sign::Negative),
                odd: SubseqFate::DivergesTo(Sign::Positive),
            }
        );
        // origin seed
        assert_eq!(
            classify(&fp(0.5, 1.0), &fs(0.0, 0.0)),
            Behavior::TriviallyZero
        );
    }

    #[test]
    fn a_one_cases() {
        // b = 0: alpha = 0 = 1 - a, every orbit 2-periodic
        assert_eq!(
            classify(&fp(1.0, 0.0), &fs(4.0, 7.0)),
            Behavior::ExactlyTwoPeriodic { p: 4.0, q: 7.0 }
        );
        // b != 0, alpha != 0: converges to zero
        assert_eq!(
            classify(&fp(1.0, 1.0), &fs(1.0, 1.0)),
            Behavior::ConvergesToZero
        );
    }

    #[test]
    fn exact_mode_classification() {
        let p: Params<Exact> = Params::new(e(1, 2), e(1, 1)).unwrap();
        let s = SeedPair::new(e(1, 1), e(1, 1)).unwrap();
        match classify(&p, &s) {
            Behavior::ConvergesToTwoPeriodic { p, q, error_bound } => {
                let err = error_bound.clone();
                assert!((p * q - e(1, 2)).abs() <= err);
            }
            b => panic!("unexpected {:?}", b),
        }
    }

    #[test]
    fn report_shape() {
        let v = classify_report(&fp(0.5, 1.0), &fs(1.0, 1.0));
        assert_eq!(v["behavior"]["class"], "ConvergesToTwoPeriodic");
        assert_eq!(v["admissibility"]["verdict"], "AdmissibleRegular");
        assert!((v["alpha"].as_f64().unwrap() - 1.0).abs() < 1e-15);
        assert!(v["certificates"]["pq_product"].as_f64().is_some());
        let eigs = v["certificates"]["eigenvalues"].as_array().unwrap();
        assert_eq!(eigs.len(), 2);

        let v = classify_report(&fp(2.0, 1.0), &fs(1.0, 1.0));
        assert_eq!(v["behavior"]["class"], "ConvergesToZero");
        assert!(v["certificates"]["pq_product"].is_null());
    }

    #[test]
    fn classification_agrees_with_float_orbits() {
        // one representative per class, checked against a long orbit
        let cases: Vec<(f64, f64, (f64, f64))> = vec![
            (2.0, 1.0, (1.0, 1.0)),   // zero limit
            (0.5, 1.0, (1.0, 1.0)),   // 2-periodic limit
            (-1.0, 1.0, (1.0, 3.0)),  // even diverges
            (0.5, 1.0, (0.0, 2.0)),   // geometric
            (3.0, -1.0, (1.0, 2.0)),  // exact 2-cycle
        ];
        for (a, b, (x, y)) in cases {
            let params = fp(a, b);
            let seed = fs(x, y);
            let orbit = iterate(&params, &seed, 2_000);
            match classify(&params, &seed) {
                Behavior::ConvergesToZero => {
                    assert!(orbit.term(2_000).unwrap().abs() < 1e-6);
                }
                Behavior::ConvergesToTwoPeriodic { p, q, .. } => {
                    assert!((orbit.term(1_999).unwrap() - p).abs() < 1e-6);
                    assert!((orbit.term(2_000).unwrap() - q).abs() < 1e-6);
                }
                Behavior::UnboundedEvenDivergesOddToZero { sign } => {
                    let last_even = *orbit.term(2_000).unwrap();
                    assert!(last_even.abs() > 1e6);
                    assert_eq!(Sign::of(&last_even), Some(sign));
                    assert!(orbit.term(1_999).unwrap().abs() < 1e-6);
                }
                Behavior::UnboundedGeometric { .. } => {
                    let (even, odd) = crate::orbit::even_odd_split(&orbit);
                    assert!(even.last().unwrap().abs() > 1e6);
                    assert!(odd.iter().all(|v| *v == 0.0));
                }
                Behavior::ExactlyTwoPeriodic { p, q } => {
                    assert_eq!(*orbit.term(1_999).unwrap(), p);
                    assert_eq!(*orbit.term(2_000).unwrap(), q);
                }
                b => panic!("unexpected class {:?}", b),
            }
        }
    }
}
