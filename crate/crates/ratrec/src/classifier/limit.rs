//! The limiting 2-periodic point of a regular orbit with `0 < |a| < 1`,
//! computed as finite products of `h` with a certified truncation bound,
//! plus the closed-form envelopes that hold for every partial product.
//!
//! The tail estimate: `|g(n)| <= C |a|^n` with an explicit `C`, and
//! `|log(1-g)| <= 2|g|` once `|g| <= 1/2`, so the log of the remaining
//! product past index `k_from` is at most `B = 2 C |a|^(2 k_from) / (1-a^2)`
//! and the multiplicative error at most `e^B - 1`.

use crate::admissibility::{check_admissible_default, AdmissibilityVerdict, SingularKind};
use crate::params::{alpha_of, Params, SeedPair};
use crate::riccati::{h_coeff, CoefficientQuery};
use crate::scalar::Scalar;
use crate::Error;

/// A periodic point `(p, q)` with its minimal period and a certified bound
/// on how far the reported values can sit from the true limit.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicPoint<S> {
    pub p: S,
    pub q: S,
    pub period: u8,
    pub error_bound: S,
}

/// Closed-form envelopes for the partial products of `h`:
/// `prod h(2i+1)` stays in `[odd_lower, odd_upper]` and `prod h(2i)` in
/// `[even_lower, even_upper]`, for every truncation point, under
/// `0 < |a| < 1` and `alpha > (1-a)/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductBounds<S> {
    pub odd_upper: S,
    pub odd_lower: S,
    pub even_upper: S,
    pub even_lower: S,
}

fn in_open_unit<S: Scalar>(a: &S) -> bool {
    !a.is_zero() && a.abs() < S::one()
}

/// Upper bound `B` on `|log prod_{i >= k_from} h(2i + delta)|`, either parity.
///
/// Errs with `TailNotYetGeometric` when `k_from` is too small for the
/// estimate's preconditions (`|g| <= 1/2` past `2 k_from`, and a positive
/// lower bound on the denominator of `g`).
pub fn tail_bound<S: Scalar>(params: &Params<S>, alpha: &S, k_from: u32) -> Result<S, Error> {
    let a = params.a();
    if !in_open_unit(a) {
        return Err(Error::NotInRange);
    }
    let one_minus_a = S::one() - a.clone();
    if *alpha == one_minus_a {
        // g vanishes identically; the tail is exactly 1
        return Ok(S::zero());
    }
    if alpha.is_zero() {
        return Err(Error::NotRegular);
    }
    let abs_a = a.abs();
    let pow = abs_a.powi(2 * k_from);
    let dev = (S::one() - a.clone() - alpha.clone()).abs();
    // |u(n+1)| >= |alpha| - |a|^(n+1) |1-a-alpha| for n >= 2 k_from
    let den_floor = alpha.abs() - pow.clone() * abs_a.clone() * dev.clone();
    if den_floor <= S::zero() {
        return Err(Error::TailNotYetGeometric);
    }
    let c = dev * one_minus_a.clone() / den_floor;
    if c.clone() * pow.clone() > S::half() {
        return Err(Error::TailNotYetGeometric);
    }
    let one_minus_a2 = one_minus_a * (S::one() + a.clone());
    Ok(S::two() * c * pow / one_minus_a2)
}

/// The four closed-form product bounds under `0<|a|<1`, `alpha > (1-a)/2`.
///
/// The odd-product exponent is `2|(1-a-alpha)a|/(1-a^2)`. For the even
/// products the denominator floor of the log sum depends on the branch:
/// `2|1-a-alpha|/((1-a^2)(1+a))` covers `a < 0` and `alpha >= 1-a`, while
/// for `a > 0` with `alpha < 1 - a` the floor is `alpha` itself and the
/// valid exponent is `(1-a-alpha)(1-a)/(alpha(1-a^2))` (the shortcut
/// constant fails in part of that branch). The lower bound of each parity
/// pairs with the other parity's upper exponent, because the two products
/// multiply to at least `min(1, (1-a)/alpha)`.
pub fn product_bounds<S: Scalar>(a: &S, alpha: &S) -> Result<ProductBounds<S>, Error> {
    let one_minus_a = S::one() - a.clone();
    if !in_open_unit(a) || alpha.clone() * S::two() <= one_minus_a {
        return Err(Error::OutOfHypothesis);
    }
    let one_minus_a2 = one_minus_a.clone() * (S::one() + a.clone());
    let dev = one_minus_a.clone() - alpha.clone(); // 1 - a - alpha, signed
    let exp_odd = S::two() * dev.abs() * a.abs() / one_minus_a2.clone();
    let exp_even = if *a > S::zero() && dev > S::zero() {
        dev * one_minus_a.clone() / (alpha.clone() * one_minus_a2)
    } else {
        S::two() * dev.abs() / (one_minus_a2 * (S::one() + a.clone()))
    };
    let floor = if one_minus_a < alpha.clone() {
        one_minus_a / alpha.clone()
    } else {
        S::one()
    };
    Ok(ProductBounds {
        odd_upper: exp_odd.exp_upper(),
        odd_lower: floor.clone() * (-exp_even.clone()).exp_lower(),
        even_upper: exp_even.exp_upper(),
        even_lower: floor * (-exp_odd).exp_lower(),
    })
}

/// Default truncation cap for [`limit_periodic_point`].
const K_MAX: u32 = 200_000;

/// The 2-periodic limit `(p, q)` of the orbit of `seed`, for `0 < |a| < 1`.
///
/// `p` and `q` are the finite products `x[-1] P_K` and `x[0] Q_K`, truncated
/// once the certified tail bound pushes the total error below `tol`; the
/// returned `error_bound` covers the truncation (plus float rounding in
/// float mode) and certifies `|p q - (1-a)/b| <= error_bound`. If the cap on
/// `K` is hit first the point is still returned with its honest, larger
/// bound.
pub fn limit_periodic_point<S: Scalar>(
    params: &Params<S>,
    seed: &SeedPair<S>,
    tol: &S,
) -> Result<PeriodicPoint<S>, Error> {
    let a = params.a();
    if !in_open_unit(a) {
        return Err(Error::NotInRange);
    }
    match check_admissible_default(params, seed) {
        AdmissibilityVerdict::NonAdmissible { blow_up_step } => {
            return Err(Error::NotAdmissible { blow_up_step })
        }
        AdmissibilityVerdict::AdmissibleSingular(SingularKind::AlphaZero) => {
            return Err(Error::NotRegular)
        }
        AdmissibilityVerdict::AdmissibleSingular(SingularKind::AlphaOneMinusA) => {
            // h is identically 1: the seed itself is the periodic point
            let (p, q) = (seed.x_prev().clone(), seed.x_zero().clone());
            let period = if p == q { 1 } else { 2 };
            return Ok(PeriodicPoint {
                p,
                q,
                period,
                error_bound: S::zero(),
            });
        }
        AdmissibilityVerdict::AdmissibleRegular | AdmissibilityVerdict::Undecided { .. } => {}
    }

    let alpha = alpha_of(params, seed);
    let abs_a = a.abs();
    let aa = abs_a.clone() * abs_a.clone();
    let one_minus_a = S::one() - a.clone();
    let one_minus_a2 = one_minus_a.clone() * (S::one() + a.clone());
    let dev = (one_minus_a.clone() - alpha.clone()).abs();
    let c_num = dev.clone() * one_minus_a.clone();

    let quarter_tol = tol.clone() / S::from_int(4);
    let half_tol = tol.clone() / S::two();
    let eps = S::from_ratio(1, 4_503_599_627_370_496); // 2^-52

    let mut p = seed.x_prev().clone();
    let mut q = seed.x_zero().clone();
    let mut pow2k = S::one(); // |a|^(2k) entering iteration k
    let mut best_err: Option<S> = None;
    for k in 0..=K_MAX {
        let h_even = h_coeff(&CoefficientQuery {
            n: 2 * k,
            a: a.clone(),
            alpha: alpha.clone(),
        })?;
        let h_odd = h_coeff(&CoefficientQuery {
            n: 2 * k + 1,
            a: a.clone(),
            alpha: alpha.clone(),
        })?;
        p = p * h_even.clone();
        q = q * h_odd.clone();
        let pow_next = pow2k * aa.clone(); // |a|^(2(k+1)), tail from k_from = k+1
        pow2k = pow_next.clone();

        let den_floor = alpha.abs() - pow_next.clone() * abs_a.clone() * dev.clone();
        if den_floor <= S::zero() {
            continue;
        }
        let c = c_num.clone() / den_floor;
        if c.clone() * pow_next.clone() > S::half() {
            continue;
        }
        let tail = S::two() * c * pow_next / one_minus_a2.clone();
        let settled = (h_even - S::one()).abs() < quarter_tol
            && (h_odd - S::one()).abs() < quarter_tol;

        let e_tail = tail.exp_m1_upper();
        let e_tail2 = (tail.clone() * S::two()).exp_m1_upper();
        let pq = p.clone() * q.clone();
        let mut err = p.abs() * e_tail.clone();
        let err_q = q.abs() * e_tail;
        if err_q > err {
            err = err_q;
        }
        let err_pq = pq.abs() * e_tail2;
        if err_pq > err {
            err = err_pq;
        }
        if !S::EXACT {
            // rounding allowance for the 2k+2 float product factors
            let factors = S::from_int(2 * k as i64 + 16);
            err = err + factors * eps.clone() * (p.abs() + q.abs() + pq.abs() + S::one());
        }
        best_err = Some(err.clone());
        if tail < half_tol && settled && err <= *tol {
            return Ok(finish(p, q, err));
        }
    }
    // cap reached: report the point with the honest (larger) certificate
    let err = best_err.unwrap_or_else(|| p.abs() + q.abs() + S::one());
    Ok(finish(p, q, err))
}

fn finish<S: Scalar>(p: S, q: S, error_bound: S) -> PeriodicPoint<S> {
    let scale = (p.abs() + q.abs()) * S::from_ratio(1, 1_000_000_000_000);
    let period = if (p.clone() - q.clone()).abs() <= error_bound.clone() + scale {
        1
    } else {
        2
    };
    PeriodicPoint {
        p,
        q,
        period,
        error_bound,
    }
}

/// All equilibria: zero always, and `x = +-sqrt((1-a)/b)` when `(1-a) b > 0`.
///
/// In exact mode a non-square `(1-a)/b` has no representable root and the
/// call errs with `NotRepresentable`; float mode always succeeds.
pub fn equilibria<S: Scalar>(params: &Params<S>) -> Result<Vec<PeriodicPoint<S>>, Error> {
    let mut out = vec![PeriodicPoint {
        p: S::zero(),
        q: S::zero(),
        period: 1,
        error_bound: S::zero(),
    }];
    let one_minus_a = S::one() - params.a().clone();
    if one_minus_a.clone() * params.b().clone() > S::zero() {
        let v = one_minus_a / params.b().clone();
        let root = v.try_sqrt().ok_or(Error::NotRepresentable)?;
        for r in [root.clone(), -root] {
            out.push(PeriodicPoint {
                p: r.clone(),
                q: r,
                period: 1,
                error_bound: S::zero(),
            });
        }
    }
    Ok(out)
}

/// Smallest `N` past which `sign(u(n+1)) = sign(alpha)` is guaranteed, by
/// scanning until `|a|^(n+1) |1-a-alpha| < |alpha|`. Capped at `10^5`.
pub fn sign_stabilization_index<S: Scalar>(a: &S, alpha: &S) -> Result<u32, Error> {
    if !in_open_unit(a) {
        return Err(Error::NotInRange);
    }
    if alpha.is_zero() {
        return Err(Error::NotRegular);
    }
    let dev = (S::one() - a.clone() - alpha.clone()).abs();
    let target = alpha.abs();
    let abs_a = a.abs();
    let mut pow = abs_a.clone(); // |a|^(n+1) at n = 0
    for n in 0..100_000u32 {
        if pow.clone() * dev.clone() < target {
            return Ok(n);
        }
        pow = pow * abs_a.clone();
    }
    Err(Error::TailNotYetGeometric)
}
