//! Stability of the periodic orbits: the zero equilibrium's verdict table,
//! the analytic Jacobian of the second iterate of the phase map
//! `F(x, y) = (y, x/(a + b x y))` at 2-periodic points, and an empirical
//! perturbation probe.

use crate::orbit::{iterate, Termination};
use crate::params::{Params, SeedPair};
use crate::scalar::Scalar;
use crate::Error;
use rayon::prelude::*;
use serde_json::json;

#[derive(Debug, Clone, PartialEq)]
pub enum StabilityTarget<S> {
    ZeroEquilibrium,
    NonzeroPeriodic { p: S, q: S },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StabilityClass {
    AsymptoticallyStable,
    StableNotAsymptotically,
    Unstable,
}

impl StabilityClass {
    fn name(&self) -> &'static str {
        match self {
            StabilityClass::AsymptoticallyStable => "AsymptoticallyStable",
            StabilityClass::StableNotAsymptotically => "StableNotAsymptotically",
            StabilityClass::Unstable => "Unstable",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityVerdict<S> {
    pub target: StabilityTarget<S>,
    pub verdict: StabilityClass,
    /// Eigenvalues of the analytic Jacobian of `F∘F`; present only for
    /// nonzero periodic targets with `a != 0`.
    pub eigenvalues: Option<(S, S)>,
}

impl<S: Scalar> StabilityVerdict<S> {
    pub fn json_value(&self) -> serde_json::Value {
        let target = match &self.target {
            StabilityTarget::ZeroEquilibrium => json!("ZeroEquilibrium"),
            StabilityTarget::NonzeroPeriodic { p, q } => json!({
                "NonzeroPeriodic": {"p": p.json_value(), "q": q.json_value()}
            }),
        };
        json!({
            "target": target,
            "verdict": self.verdict.name(),
            "eigenvalues": self
                .eigenvalues
                .as_ref()
                .map(|(l1, l2)| json!([l1.json_value(), l2.json_value()])),
        })
    }
}

/// Stability of the zero solution. The linearization at zero has
/// characteristic equation `x^2 = 1/a`, so zero is asymptotically stable
/// iff `|a| > 1`, or `a = 1` with `b != 0` where it attracts every regular
/// solution outright. `(a, b) = (1, 0)` makes every orbit 2-periodic
/// (stable, not asymptotically); everything else is unstable.
pub fn zero_stability<S: Scalar>(params: &Params<S>) -> StabilityVerdict<S> {
    let a = params.a();
    let verdict = if a.abs() > S::one() {
        StabilityClass::AsymptoticallyStable
    } else if a.is_one() {
        if params.b().is_zero() {
            StabilityClass::StableNotAsymptotically
        } else {
            StabilityClass::AsymptoticallyStable
        }
    } else {
        // |a| < 1 (zero repels) and a = -1 (nearby seeds are unbounded)
        StabilityClass::Unstable
    };
    StabilityVerdict {
        target: StabilityTarget::ZeroEquilibrium,
        verdict,
        eigenvalues: None,
    }
}

fn is_periodic_pair<S: Scalar>(params: &Params<S>, p: &S, q: &S) -> bool {
    let residue = params.a().clone() + params.b().clone() * p.clone() * q.clone() - S::one();
    if S::EXACT {
        residue.is_zero()
    } else {
        let scale = S::one() + params.a().abs() + (params.b().clone() * p.clone() * q.clone()).abs();
        residue.abs() <= S::from_ratio(1, 1_000_000_000) * scale
    }
}

/// Eigenvalues of the analytic Jacobian of `F∘F` at a 2-periodic point
/// `(p, q)` (so `a + b p q = 1` within tolerance, `a != 0`), sorted
/// ascending. At such points the Jacobian is
/// `[[a, -b p^2], [-a b q^2, a + b^2 p^2 q^2]]` with trace `1 + a^2` and
/// determinant `a^2`.
pub fn period2_jacobian_eigs<S: Scalar>(
    params: &Params<S>,
    p: &S,
    q: &S,
) -> Result<(S, S), Error> {
    let (a, b) = (params.a(), params.b());
    if a.is_zero() || !is_periodic_pair(params, p, q) {
        return Err(Error::NotPeriodicPoint);
    }
    // chain rule through both applications, valid also slightly off the
    // periodic set: DF(x,y) = [[0, 1], [a/D^2, -b x^2/D^2]], D = a + b x y
    let d1 = a.clone() + b.clone() * p.clone() * q.clone();
    if d1.is_zero() {
        return Err(Error::NotPeriodicPoint);
    }
    let mid = p.clone() / d1.clone();
    let d2 = a.clone() + b.clone() * q.clone() * mid.clone();
    if d2.is_zero() {
        return Err(Error::NotPeriodicPoint);
    }
    let c1 = a.clone() / (d1.clone() * d1.clone());
    let e1 = -(b.clone() * p.clone() * p.clone()) / (d1.clone() * d1);
    let c2 = a.clone() / (d2.clone() * d2.clone());
    let e2 = -(b.clone() * q.clone() * q.clone()) / (d2.clone() * d2);
    // M = [[c1, e1], [e2 c1, c2 + e2 e1]]; its determinant collapses to c1 c2
    let trace = c1.clone() + c2.clone() + e2 * e1;
    let det = c1 * c2;
    let mut disc = trace.clone() * trace.clone() - S::from_int(4) * det;
    if disc < S::zero() {
        // the spectrum is real at periodic points; tiny negatives are noise
        let fuzz = S::from_ratio(1, 100_000_000) * (S::one() + trace.abs() * trace.abs());
        if disc.abs() <= fuzz {
            disc = S::zero();
        } else {
            return Err(Error::NotPeriodicPoint);
        }
    }
    let root = disc.try_sqrt().ok_or(Error::NotRepresentable)?;
    let half = S::half();
    let l1 = (trace.clone() - root.clone()) * half.clone();
    let l2 = (trace + root) * half;
    Ok(if l1 <= l2 { (l1, l2) } else { (l2, l1) })
}

/// Qualitative verdict for a nonzero 2-periodic point `(p, q)`.
pub fn periodic_stability<S: Scalar>(
    params: &Params<S>,
    p: &S,
    q: &S,
) -> Result<StabilityVerdict<S>, Error> {
    if (p.clone() * q.clone()).is_zero() || !is_periodic_pair(params, p, q) {
        return Err(Error::NotPeriodicPoint);
    }
    let a = params.a();
    let eigenvalues = if a.is_zero() {
        None
    } else {
        Some(period2_jacobian_eigs(params, p, q)?)
    };
    // 0 <= |a| < 1: stable inside a continuum of neighbouring cycles, never
    // attracting; |a| >= 1 (except the b = 0 shift map at a = 1): unstable.
    let verdict = if a.abs() < S::one() || (a.is_one() && params.b().is_zero()) {
        StabilityClass::StableNotAsymptotically
    } else {
        StabilityClass::Unstable
    };
    Ok(StabilityVerdict {
        target: StabilityTarget::NonzeroPeriodic {
            p: p.clone(),
            q: q.clone(),
        },
        verdict,
        eigenvalues,
    })
}

/// One row of the empirical perturbation table.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeEntry<S> {
    pub delta: S,
    /// `sup_k |x[2k] - q|` along the perturbed orbit.
    pub sup_even: S,
    /// `sup_k |x[2k+1] - p|` along the perturbed orbit.
    pub sup_odd: S,
    /// False when the perturbed orbit died before `n_max`.
    pub completed: bool,
}

/// The probe's output. This is an empirical check of the qualitative
/// stability statement, not a proof: it reports observed sup-distances for
/// a grid of perturbation sizes.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeReport<S> {
    pub p: S,
    pub q: S,
    pub n_max: u32,
    pub entries: Vec<ProbeEntry<S>>,
}

impl<S: Scalar> ProbeReport<S> {
    pub fn json_value(&self) -> serde_json::Value {
        json!({
            "kind": "empirical-probe",
            "p": self.p.json_value(),
            "q": self.q.json_value(),
            "n_max": self.n_max,
            "entries": self.entries.iter().map(|e| json!({
                "delta": e.delta.json_value(),
                "sup_even": e.sup_even.json_value(),
                "sup_odd": e.sup_odd.json_value(),
                "completed": e.completed,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Run orbits from `(p + delta, q + delta)` for each delta and record how
/// far the subsequences stray from `(q, p)`. Deltas run in parallel; the
/// report preserves grid order.
pub fn periodic_stability_probe<S: Scalar + Send + Sync>(
    params: &Params<S>,
    p: &S,
    q: &S,
    delta_grid: &[S],
    n_max: u32,
) -> Result<ProbeReport<S>, Error> {
    if params.a().abs() >= S::one() || params.a().is_zero() {
        return Err(Error::NotInRange);
    }
    if !is_periodic_pair(params, p, q) {
        return Err(Error::NotPeriodicPoint);
    }
    let entries: Vec<ProbeEntry<S>> = delta_grid
        .par_iter()
        .map(|delta| {
            let seed = SeedPair::new(p.clone() + delta.clone(), q.clone() + delta.clone())
                .expect("finite perturbed seed");
            let orbit = iterate(params, &seed, n_max);
            let mut sup_even = S::zero();
            let mut sup_odd = S::zero();
            for (n, x) in orbit.iter_indexed() {
                let d = if n.rem_euclid(2) == 0 {
                    x.clone() - q.clone()
                } else {
                    x.clone() - p.clone()
                }
                .abs();
                if n.rem_euclid(2) == 0 {
                    if d > sup_even {
                        sup_even = d;
                    }
                } else if d > sup_odd {
                    sup_odd = d;
                }
            }
            ProbeEntry {
                delta: delta.clone(),
                sup_even,
                sup_odd,
                completed: orbit.termination == Termination::Completed,
            }
        })
        .collect();
    Ok(ProbeReport {
        p: p.clone(),
        q: q.clone(),
        n_max,
        entries,
    })
}
