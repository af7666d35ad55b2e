//! Bifurcation sweeps: for a fixed-step grid of `a` values, iterate the
//! recurrence from one seed and keep the tail of each orbit.
//!
//! Sweeps always run in float mode; the grid points are computed as
//! `a_min + k * step` in one multiplication each, never by accumulated
//! addition, so a grid through an integer parameter value hits it exactly.
//! Columns run in parallel and are gathered in grid order, which makes the
//! output byte-identical across thread counts.

use ratrec::orbit::{iterate, Termination};
use ratrec::{Params, SeedPair};
use rayon::prelude::*;

#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub a_min: f64,
    pub a_max: f64,
    /// Grid spacing, defaults to 0.005.
    pub step: f64,
    pub b: f64,
    pub x_prev: f64,
    pub x_zero: f64,
    /// Orbit length per grid point, defaults to 400.
    pub iters: u32,
    /// First retained index, defaults to 350.
    pub keep_from: u32,
}

pub const DEFAULT_STEP: f64 = 0.005;
pub const DEFAULT_ITERS: u32 = 400;
pub const DEFAULT_KEEP_FROM: u32 = 350;

impl SweepConfig {
    pub fn validate(&self) -> Result<(), String> {
        for (name, v) in [
            ("a-min", self.a_min),
            ("a-max", self.a_max),
            ("step", self.step),
            ("b", self.b),
            ("seed", self.x_prev),
            ("seed", self.x_zero),
        ] {
            if !v.is_finite() {
                return Err(format!("{name} must be finite"));
            }
        }
        if self.a_min > self.a_max {
            return Err("a-min must not exceed a-max".into());
        }
        if self.step <= 0.0 {
            return Err("step must be positive".into());
        }
        if self.keep_from >= self.iters {
            return Err("keep-from must be smaller than iters".into());
        }
        Ok(())
    }

    /// Number of grid points, endpoints inclusive.
    pub fn grid_len(&self) -> u64 {
        ((self.a_max - self.a_min) / self.step + 1e-9).floor() as u64 + 1
    }

    pub fn grid_point(&self, k: u64) -> f64 {
        self.a_min + (k as f64) * self.step
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleFlag {
    Ok,
    Singular,
    NonFinite,
}

impl SampleFlag {
    pub fn name(&self) -> &'static str {
        match self {
            SampleFlag::Ok => "ok",
            SampleFlag::Singular => "singular",
            SampleFlag::NonFinite => "non_finite",
        }
    }
}

/// One retained point of the diagram: `x = x[n]` at parameter `a`, or a
/// flagged placeholder from the failure step on.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BifurcationSample {
    pub a: f64,
    pub n: u32,
    pub x: Option<f64>,
    pub flag: SampleFlag,
}

/// Run the sweep: per grid point, the orbit's terms `x[keep_from ..= iters]`,
/// with rows flagged from the first singular or non-finite step onward.
pub fn sweep(cfg: &SweepConfig) -> Vec<BifurcationSample> {
    let count = cfg.grid_len() as usize;
    let mut columns: Vec<Vec<BifurcationSample>> = Vec::new();
    (0..count)
        .into_par_iter()
        .map(|k| column(cfg, cfg.grid_point(k as u64)))
        .collect_into_vec(&mut columns);
    columns.into_iter().flatten().collect()
}

fn column(cfg: &SweepConfig, a: f64) -> Vec<BifurcationSample> {
    let mut rows = Vec::with_capacity((cfg.iters - cfg.keep_from + 1) as usize);
    let seed = SeedPair::new(cfg.x_prev, cfg.x_zero).expect("validated seed");
    let (limit, fail_flag, orbit) = match Params::new(a, cfg.b) {
        Ok(params) => {
            let orbit = iterate(&params, &seed, cfg.iters);
            let (limit, flag) = match orbit.termination {
                Termination::Completed => (cfg.iters as i64, SampleFlag::Ok),
                Termination::SingularAt(m) | Termination::BitLimitAt(m) => {
                    (m as i64 - 1, SampleFlag::Singular)
                }
                Termination::NonFiniteAt(m) => (m as i64 - 1, SampleFlag::NonFinite),
            };
            (limit, flag, Some(orbit))
        }
        // a = b = 0 on the grid: the denominator is identically zero
        Err(_) => (-2, SampleFlag::Singular, None),
    };
    for n in cfg.keep_from..=cfg.iters {
        if (n as i64) <= limit {
            let x = *orbit.as_ref().unwrap().term(n as i64).unwrap();
            rows.push(BifurcationSample {
                a,
                n,
                x: Some(x),
                flag: SampleFlag::Ok,
            });
        } else {
            rows.push(BifurcationSample {
                a,
                n,
                x: None,
                flag: fail_flag,
            });
        }
    }
    rows
}
