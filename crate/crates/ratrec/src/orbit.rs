//! Direct iteration of the recurrence with singularity detection, and
//! closed-form evaluation through the running products of `h(n)`.
//!
//! Terms are stored shifted by one so `x[-1]` sits at slot 0; every public
//! surface speaks the natural indexing `n = -1, 0, 1, ...`.

use crate::admissibility::{check_admissible_default, AdmissibilityVerdict};
use crate::params::{alpha_of, Params, SeedPair};
use crate::riccati::{h_coeff, CoefficientQuery};
use crate::scalar::Scalar;
use crate::Error;
use serde_json::json;

/// Why an orbit stopped. A singular or non-finite step is data, not an
/// error: the offending term is *not* stored, so a `SingularAt(m)` orbit
/// holds exactly the terms `x[-1] .. x[m-1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    Completed,
    /// `a + b x[m-1] x[m-2] = 0` while computing `x[m]`.
    SingularAt(u32),
    /// Float mode: the step overflowed or produced NaN while computing `x[m]`.
    NonFiniteAt(u32),
    /// Exact mode: `x[m]` would exceed the per-term bit budget.
    BitLimitAt(u32),
}

impl Termination {
    pub fn json_value(&self) -> serde_json::Value {
        match self {
            Termination::Completed => json!({"kind": "Completed"}),
            Termination::SingularAt(m) => json!({"kind": "SingularAt", "step": m}),
            Termination::NonFiniteAt(m) => json!({"kind": "NonFiniteAt", "step": m}),
            Termination::BitLimitAt(m) => json!({"kind": "BitLimitAt", "step": m}),
        }
    }
}

/// A computed trajectory with its termination metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct Orbit<S> {
    pub params: Params<S>,
    pub seed: SeedPair<S>,
    terms: Vec<S>,
    pub termination: Termination,
    /// Float mode: steps whose denominator was nonzero but tiny relative to
    /// its operands (`|den| < 1e-12 (|a| + |b x x|)`). Large excursions are
    /// legitimate there, but the values carry reduced accuracy.
    pub ill_conditioned: Vec<u32>,
}

impl<S: Scalar> Orbit<S> {
    /// Term `x[n]`, `n >= -1`, if the orbit reached it.
    pub fn term(&self, n: i64) -> Option<&S> {
        if n < -1 {
            return None;
        }
        self.terms.get((n + 1) as usize)
    }

    /// Largest computed index.
    pub fn last_index(&self) -> i64 {
        self.terms.len() as i64 - 2
    }

    /// `(n, x[n])` pairs from `n = -1` upward.
    pub fn iter_indexed(&self) -> impl Iterator<Item = (i64, &S)> {
        self.terms.iter().enumerate().map(|(i, x)| (i as i64 - 1, x))
    }

    pub fn terms(&self) -> &[S] {
        &self.terms
    }

    /// CSV rows `n,x`, one term per line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,x\n");
        for (n, x) in self.iter_indexed() {
            out.push_str(&format!("{},{}\n", n, x.literal()));
        }
        out
    }

    pub fn json_value(&self) -> serde_json::Value {
        json!({
            "params": {"a": self.params.a().json_value(), "b": self.params.b().json_value()},
            "seed": {
                "x_prev": self.seed.x_prev().json_value(),
                "x_zero": self.seed.x_zero().json_value(),
            },
            "termination": self.termination.json_value(),
            "first_index": -1,
            "terms": self.terms.iter().map(|x| x.json_value()).collect::<Vec<_>>(),
            "ill_conditioned": self.ill_conditioned,
        })
    }
}

#[derive(Debug, Clone)]
pub struct IterateOpts {
    /// Exact mode: stop before a term's numerator+denominator exceed this
    /// many bits. Keeps memory predictable on adversarial seeds.
    pub bit_limit: u64,
}

impl Default for IterateOpts {
    fn default() -> Self {
        IterateOpts { bit_limit: 1_000_000 }
    }
}

/// Iterate the recurrence up to `x[n_max]` or until it dies.
pub fn iterate<S: Scalar>(params: &Params<S>, seed: &SeedPair<S>, n_max: u32) -> Orbit<S> {
    iterate_with(params, seed, n_max, &IterateOpts::default())
}

pub fn iterate_with<S: Scalar>(
    params: &Params<S>,
    seed: &SeedPair<S>,
    n_max: u32,
    opts: &IterateOpts,
) -> Orbit<S> {
    let (a, b) = (params.a(), params.b());
    let mut terms = Vec::with_capacity(n_max as usize + 2);
    terms.push(seed.x_prev().clone());
    terms.push(seed.x_zero().clone());
    let mut ill_conditioned = Vec::new();
    let mut termination = Termination::Completed;
    let near = S::from_ratio(1, 1_000_000_000_000);
    for m in 1..=n_max {
        let x_cur = &terms[terms.len() - 1];
        let x_prev = &terms[terms.len() - 2];
        let prod = b.clone() * x_cur.clone() * x_prev.clone();
        if !prod.is_finite_value() {
            termination = Termination::NonFiniteAt(m);
            break;
        }
        let den = a.clone() + prod.clone();
        if den.is_zero() {
            termination = Termination::SingularAt(m);
            break;
        }
        if !den.is_finite_value() {
            termination = Termination::NonFiniteAt(m);
            break;
        }
        if !S::EXACT && den.abs() < near.clone() * (a.abs() + prod.abs()) {
            ill_conditioned.push(m);
        }
        let next = x_prev.clone() / den;
        if !next.is_finite_value() {
            termination = Termination::NonFiniteAt(m);
            break;
        }
        if S::EXACT && next.bit_size() > opts.bit_limit {
            termination = Termination::BitLimitAt(m);
            break;
        }
        terms.push(next);
    }
    Orbit {
        params: params.clone(),
        seed: seed.clone(),
        terms,
        termination,
        ill_conditioned,
    }
}

fn require_admissible<S: Scalar>(params: &Params<S>, seed: &SeedPair<S>) -> Result<(), Error> {
    match check_admissible_default(params, seed) {
        AdmissibilityVerdict::NonAdmissible { blow_up_step } => {
            Err(Error::NotAdmissible { blow_up_step })
        }
        // Undecided (float only) proceeds; the verdict is reported elsewhere.
        _ => Ok(()),
    }
}

/// `x[n]` straight from the representation formula, without iterating.
///
/// Equals `iterate(..).term(n)` exactly in exact mode.
pub fn closed_form_term<S: Scalar>(
    params: &Params<S>,
    seed: &SeedPair<S>,
    n: i64,
) -> Result<S, Error> {
    assert!(n >= -1, "orbit indices start at -1");
    require_admissible(params, seed)?;
    if n == -1 {
        return Ok(seed.x_prev().clone());
    }
    if n == 0 {
        return Ok(seed.x_zero().clone());
    }
    let (a, alpha) = (params.a(), alpha_of(params, seed));
    // odd n = 2k+1 uses h(0), h(2), .., h(2k); even n = 2k+2 the odd h's
    let (base, first) = if n % 2 == 1 {
        (seed.x_prev().clone(), 0u32)
    } else {
        (seed.x_zero().clone(), 1u32)
    };
    let mut acc = base;
    let mut idx = first;
    while (idx as i64) < n {
        let h = h_coeff(&CoefficientQuery {
            n: idx,
            a: a.clone(),
            alpha: alpha.clone(),
        })?;
        acc = acc * h;
        idx += 2;
    }
    Ok(acc)
}

/// The whole prefix `x[-1] .. x[n_max]` by running products, one `h` per
/// step. This is the batched form of [`closed_form_term`].
pub fn closed_form_terms<S: Scalar>(
    params: &Params<S>,
    seed: &SeedPair<S>,
    n_max: u32,
) -> Result<Vec<S>, Error> {
    require_admissible(params, seed)?;
    let (a, alpha) = (params.a(), alpha_of(params, seed));
    let mut terms = Vec::with_capacity(n_max as usize + 2);
    terms.push(seed.x_prev().clone());
    terms.push(seed.x_zero().clone());
    for m in 1..=n_max {
        let h = h_coeff(&CoefficientQuery {
            n: m - 1,
            a: a.clone(),
            alpha: alpha.clone(),
        })?;
        let prev = terms[(m - 1) as usize].clone(); // x[m-2] lives at slot m-1
        terms.push(h * prev);
    }
    Ok(terms)
}

/// Running products `P_k = prod_{i<=k} h(2i)` and `Q_k = prod_{i<=k} h(2i+1)`,
/// so `x[2k+1] = x[-1] P_k` and `x[2k+2] = x[0] Q_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialProducts<S> {
    pub even: Vec<S>,
    pub odd: Vec<S>,
}

pub fn partial_products<S: Scalar>(
    params: &Params<S>,
    seed: &SeedPair<S>,
    k_max: u32,
) -> Result<PartialProducts<S>, Error> {
    require_admissible(params, seed)?;
    let (a, alpha) = (params.a(), alpha_of(params, seed));
    let mut even = Vec::with_capacity(k_max as usize + 1);
    let mut odd = Vec::with_capacity(k_max as usize + 1);
    let (mut p, mut q) = (S::one(), S::one());
    for k in 0..=k_max {
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
        p = p * h_even;
        q = q * h_odd;
        even.push(p.clone());
        odd.push(q.clone());
    }
    Ok(PartialProducts { even, odd })
}

/// Split an orbit into its even-index and odd-index subsequences,
/// `({x[0], x[2], ..}, {x[-1], x[1], ..})`, preserving order.
pub fn even_odd_split<S: Scalar>(orbit: &Orbit<S>) -> (Vec<S>, Vec<S>) {
    let mut even = Vec::new();
    let mut odd = Vec::new();
    for (n, x) in orbit.iter_indexed() {
        if n.rem_euclid(2) == 0 {
            even.push(x.clone());
        } else {
            odd.push(x.clone());
        }
    }
    (even, odd)
}
