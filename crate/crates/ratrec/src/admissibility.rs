//! Whether an initial pair ever produces a zero denominator, and if so when.
//!
//! The orbit of `(x[-1], x[0])` blows up at step `m` exactly when
//! `alpha = b x[-1] x[0]` equals the forbidden value
//!
//! ```text
//! phi(m) = a^m (a - 1) / (1 - a^m)      (a != 1),
//! phi(m) = -1/m                         (a = 1),
//! ```
//!
//! so admissibility is membership of `alpha` in a countable set. The set
//! accumulates at a single limit (`0` for `|a| < 1`, `1 - a` for `|a| > 1`),
//! and within each parity class of `m` the distance `|phi(m) - limit|` is
//! strictly decreasing. That yields a terminating exact test: scan `m`
//! upward, per parity, until the forbidden values have passed `alpha`'s
//! distance to the limit; `alpha` is forbidden iff it equaled one of the
//! scanned values. Float mode runs the same scan with a tolerance and a cap,
//! and may return `Undecided`.
//!
//! The per-parity monotonicity is a derived fact, not something quoted, so
//! it is property-tested below rather than assumed silently.

use crate::params::{alpha_of, Params, SeedPair};
use crate::scalar::Scalar;
use crate::Error;
use serde_json::json;

/// Which singular family an admissible seed belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SingularKind {
    /// `alpha = 0` with `a != 0`: geometric orbits `x[n+2] = x[n]/a`.
    AlphaZero,
    /// `alpha = 1 - a`: the orbit is 2-periodic from `x[-1]` on.
    AlphaOneMinusA,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdmissibilityVerdict {
    AdmissibleRegular,
    AdmissibleSingular(SingularKind),
    /// Direct iteration hits a zero denominator when computing `x[step]`.
    NonAdmissible { blow_up_step: u32 },
    /// Float mode only: the scan hit its cap without resolving `alpha`.
    Undecided { max_n_checked: u32 },
}

impl AdmissibilityVerdict {
    pub fn is_admissible(&self) -> bool {
        matches!(
            self,
            AdmissibilityVerdict::AdmissibleRegular
                | AdmissibilityVerdict::AdmissibleSingular(_)
        )
    }

    pub fn json_value(&self) -> serde_json::Value {
        match self {
            AdmissibilityVerdict::AdmissibleRegular => json!({"verdict": "AdmissibleRegular"}),
            AdmissibilityVerdict::AdmissibleSingular(kind) => json!({
                "verdict": "AdmissibleSingular",
                "kind": match kind {
                    SingularKind::AlphaZero => "AlphaZero",
                    SingularKind::AlphaOneMinusA => "AlphaOneMinusA",
                },
            }),
            AdmissibilityVerdict::NonAdmissible { blow_up_step } => json!({
                "verdict": "NonAdmissible",
                "blow_up_step": blow_up_step,
            }),
            AdmissibilityVerdict::Undecided { max_n_checked } => json!({
                "verdict": "Undecided",
                "max_n_checked": max_n_checked,
            }),
        }
    }
}

/// Scan controls. `n_cap` and `float_tol` only matter in float mode; the
/// exact scan always terminates with a definite answer.
#[derive(Debug, Clone)]
pub struct CheckOpts<S> {
    pub n_cap: u32,
    pub float_tol: S,
}

impl<S: Scalar> Default for CheckOpts<S> {
    fn default() -> Self {
        CheckOpts {
            n_cap: 10_000,
            float_tol: S::from_ratio(1, 1_000_000_000_000),
        }
    }
}

/// The forbidden value of index `n >= 1`, or `None` when `a^n = 1` leaves no
/// constraint at that index (`a = -1`, `n` even).
pub fn forbidden_alpha<S: Scalar>(a: &S, n: u32) -> Option<S> {
    assert!(n >= 1, "forbidden_alpha requires n >= 1");
    if a.is_one() {
        return Some(-(S::one() / S::from_int(n as i64)));
    }
    if a.abs() <= S::one() {
        let t = a.powi(n);
        let den = S::one() - t.clone();
        if den.is_zero() {
            return None;
        }
        Some(t * (a.clone() - S::one()) / den)
    } else {
        // a^n (a-1)/(1 - a^n) = (a-1)/(a^-n - 1), stable when a^n overflows
        let s = (S::one() / a.clone()).powi(n);
        let den = s - S::one();
        if den.is_zero() {
            return None;
        }
        Some((a.clone() - S::one()) / den)
    }
}

/// Limit of the forbidden sequence: `0` for `|a| < 1`, `1 - a` for `|a| > 1`.
pub fn forbidden_limit<S: Scalar>(a: &S) -> Result<S, Error> {
    if a.is_zero() || a.abs().is_one() {
        return Err(Error::UnsupportedBranch(
            "forbidden_limit requires a not in {-1, 0, 1}",
        ));
    }
    if a.abs() < S::one() {
        Ok(S::zero())
    } else {
        Ok(S::one() - a.clone())
    }
}

/// Decide admissibility of a seed for given parameters.
pub fn check_admissible<S: Scalar>(
    params: &Params<S>,
    seed: &SeedPair<S>,
    opts: &CheckOpts<S>,
) -> AdmissibilityVerdict {
    check_alpha(params.a(), &alpha_of(params, seed), opts)
}

/// `check_admissible` with default options.
pub fn check_admissible_default<S: Scalar>(
    params: &Params<S>,
    seed: &SeedPair<S>,
) -> AdmissibilityVerdict {
    check_admissible(params, seed, &CheckOpts::default())
}

/// The decision on `(a, alpha)` directly.
pub fn check_alpha<S: Scalar>(a: &S, alpha: &S, opts: &CheckOpts<S>) -> AdmissibilityVerdict {
    use AdmissibilityVerdict::*;
    if !alpha.is_finite_value() {
        return Undecided { max_n_checked: 0 };
    }

    // a = 0: the only forbidden value is 0 (denominator of x[1] is alpha).
    if a.is_zero() {
        if forbidden_match(alpha, &S::zero(), opts) {
            return NonAdmissible { blow_up_step: 1 };
        }
        if *alpha == S::one() {
            return AdmissibleSingular(SingularKind::AlphaOneMinusA);
        }
        return AdmissibleRegular;
    }

    // a = 1: forbidden set {-1/n}; alpha = 0 is both singular kinds at once,
    // reported as AlphaOneMinusA since the orbit is exactly 2-periodic.
    if a.is_one() {
        if alpha.is_zero() {
            return AdmissibleSingular(SingularKind::AlphaOneMinusA);
        }
        return decide_a_one(alpha, opts);
    }

    // a = -1: forbidden set {1}; singular at alpha = 0 and alpha = 2.
    if (-a.clone()).is_one() {
        if forbidden_match(alpha, &S::one(), opts) {
            return NonAdmissible { blow_up_step: 1 };
        }
        if alpha.is_zero() {
            return AdmissibleSingular(SingularKind::AlphaZero);
        }
        if *alpha == S::two() {
            return AdmissibleSingular(SingularKind::AlphaOneMinusA);
        }
        return AdmissibleRegular;
    }

    // Singular alphas are never forbidden (phi(n) misses 0 and 1 - a).
    if alpha.is_zero() {
        return AdmissibleSingular(SingularKind::AlphaZero);
    }
    if *alpha == S::one() - a.clone() {
        return AdmissibleSingular(SingularKind::AlphaOneMinusA);
    }

    decide_general(a, alpha, opts)
}

/// Forbidden-value comparison: exact in exact mode, within tolerance in
/// float mode (a float seed that close to singular behaves singular).
fn forbidden_match<S: Scalar>(alpha: &S, phi: &S, opts: &CheckOpts<S>) -> bool {
    if S::EXACT {
        alpha == phi
    } else {
        let scale = if phi.abs() > S::one() {
            phi.abs()
        } else {
            S::one()
        };
        (alpha.clone() - phi.clone()).abs() <= opts.float_tol.clone() * scale
    }
}

fn decide_a_one<S: Scalar>(alpha: &S, opts: &CheckOpts<S>) -> AdmissibilityVerdict {
    use AdmissibilityVerdict::*;
    if S::EXACT {
        // alpha = -1/k for an integer k >= 1 iff -1/alpha is such an integer
        if alpha.is_negative() && *alpha >= -S::one() {
            let recip = -(S::one() / alpha.clone());
            if recip.is_integer_value() {
                // steps past u32::MAX saturate; they are unreachable anyway
                return NonAdmissible {
                    blow_up_step: recip.as_u32_exact().unwrap_or(u32::MAX),
                };
            }
        }
        return AdmissibleRegular;
    }
    let af = alpha.to_f64_lossy();
    if af > 0.0 || af < -1.0 - opts.float_tol.to_f64_lossy() {
        return AdmissibleRegular;
    }
    let k = (-1.0 / af).round();
    if k >= 1.0 && k <= opts.n_cap as f64 {
        let phi = S::from_ratio(-1, k as i64);
        if forbidden_match(alpha, &phi, opts) {
            return NonAdmissible {
                blow_up_step: k as u32,
            };
        }
        return AdmissibleRegular;
    }
    // alpha sits in the accumulation zone (-1/n_cap, 0) where the forbidden
    // values are below float resolution
    Undecided {
        max_n_checked: opts.n_cap,
    }
}

/// The scan for `a` outside `{-1, 0, 1}` and regular `alpha`.
fn decide_general<S: Scalar>(a: &S, alpha: &S, opts: &CheckOpts<S>) -> AdmissibilityVerdict {
    use AdmissibilityVerdict::*;
    let limit = forbidden_limit(a).expect("a not in {-1,0,1} here");
    let target = (alpha.clone() - limit.clone()).abs();
    debug_assert!(
        target > S::zero(),
        "alpha = limit is singular, handled earlier"
    );

    let inv_mode = a.abs() > S::one();
    let base = if inv_mode {
        S::one() / a.clone()
    } else {
        a.clone()
    };
    // running power of a (of 1/a when |a| > 1, for float stability)
    let mut pw = S::one();
    let mut done = [false, false];
    let mut n: u32 = 0;
    loop {
        if done[0] && done[1] {
            return AdmissibleRegular;
        }
        if !S::EXACT && n >= opts.n_cap {
            return Undecided {
                max_n_checked: opts.n_cap,
            };
        }
        n += 1;
        pw = pw * base.clone();
        let parity = (n % 2) as usize;
        if done[parity] {
            continue;
        }
        let phi = if inv_mode {
            // (a - 1)/(a^-n - 1)
            let den = pw.clone() - S::one();
            debug_assert!(!den.is_zero());
            (a.clone() - S::one()) / den
        } else {
            let den = S::one() - pw.clone();
            debug_assert!(!den.is_zero());
            pw.clone() * (a.clone() - S::one()) / den
        };
        if forbidden_match(alpha, &phi, opts) {
            return NonAdmissible { blow_up_step: n };
        }
        if (phi - limit.clone()).abs() < target {
            // all later forbidden values of this parity are strictly closer
            // to the limit than alpha, so they cannot equal it
            done[parity] = true;
        }
    }
}
