//! Multi-start derivative-free maximization over parameterized state
//! families. Every value returned is attained by the returned state, so it
//! is a certified lower bound on the supremum being estimated.

pub mod nelder_mead;
mod param;

pub use param::StateParameterization;

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantum::DensityMatrix;
use crate::random::{derive_seed, rng};
use nelder_mead::{minimize, NelderMeadSettings};

/// Size of the initial simplex around a random start.
const INITIAL_STEP: f64 = 0.5;
/// Simplex size when re-seeding around the incumbent.
const POLISH_STEP: f64 = 0.05;
/// Maximum number of simplex re-seeds per restart.
const POLISH_ROUNDS: usize = 8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub restarts: usize,
    /// Nelder-Mead iterations per restart, re-seeds included.
    pub max_iters: usize,
    pub ftol: f64,
    pub xtol: f64,
    pub rng_seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self { restarts: 32, max_iters: 2000, ftol: 1e-9, xtol: 1e-8, rng_seed: 42 }
    }
}

impl OptimizerConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.rng_seed = seed;
        self
    }

    pub fn with_restarts(mut self, restarts: usize) -> Self {
        self.restarts = restarts;
        self
    }

    pub fn with_max_iters(mut self, max_iters: usize) -> Self {
        self.max_iters = max_iters;
        self
    }

    /// Same settings with a seed derived from `tag`.
    pub fn derived(&self, tag: u64) -> Self {
        self.clone().with_seed(derive_seed(self.rng_seed, tag))
    }

    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 || self.max_iters == 0 {
            return Err(Error::InvalidParameter("restarts and max_iters must be positive".into()));
        }
        if !(self.ftol > 0.0 && self.xtol > 0.0) {
            return Err(Error::InvalidParameter("tolerances must be positive".into()));
        }
        Ok(())
    }

    fn nm_settings(&self, step: f64, budget: usize) -> NelderMeadSettings {
        NelderMeadSettings { max_iters: budget, ftol: self.ftol, xtol: self.xtol, initial_step: step }
    }
}

#[derive(Debug, Clone)]
pub struct OptimizationOutcome {
    pub best_value: f64,
    pub best_state: DensityMatrix,
    pub best_params: Vec<f64>,
    /// Index into `restart_values` of the winning run.
    pub best_restart: usize,
    /// Random restarts first (in seed order), then warm starts.
    pub restart_values: Vec<f64>,
    pub converged: Vec<bool>,
    pub restart_params: Vec<Vec<f64>>,
}

impl OptimizationOutcome {
    pub fn converged_count(&self) -> usize {
        self.converged.iter().filter(|c| **c).count()
    }
}

fn sanitize(v: f64) -> f64 {
    if v.is_nan() {
        f64::NEG_INFINITY
    } else {
        v
    }
}

/// Maximizes `objective` over `family` from `cfg.restarts` standard-normal
/// starting vectors.
pub fn maximize<F>(objective: F, family: &StateParameterization, cfg: &OptimizerConfig) -> OptimizationOutcome
where
    F: Fn(&DensityMatrix) -> f64 + Sync,
{
    maximize_with_starts(objective, family, cfg, &[])
}

/// Like [`maximize`], with extra caller-supplied starting vectors run after
/// the random ones.
pub fn maximize_with_starts<F>(
    objective: F,
    family: &StateParameterization,
    cfg: &OptimizerConfig,
    warm_starts: &[Vec<f64>],
) -> OptimizationOutcome
where
    F: Fn(&DensityMatrix) -> f64 + Sync,
{
    run_starts(&objective, family, cfg, cfg.restarts, warm_starts)
}

/// Runs only the given starting vectors (no random restarts).
pub fn refine<F>(
    objective: F,
    family: &StateParameterization,
    cfg: &OptimizerConfig,
    starts: &[Vec<f64>],
) -> OptimizationOutcome
where
    F: Fn(&DensityMatrix) -> f64 + Sync,
{
    assert!(!starts.is_empty(), "refine needs at least one start");
    run_starts(&objective, family, cfg, 0, starts)
}

fn run_starts<F>(
    objective: &F,
    family: &StateParameterization,
    cfg: &OptimizerConfig,
    random: usize,
    warm: &[Vec<f64>],
) -> OptimizationOutcome
where
    F: Fn(&DensityMatrix) -> f64 + Sync,
{
    let n = family.param_len();
    for w in warm {
        assert_eq!(w.len(), n, "warm start length mismatch for {}", family.label());
    }
    let total = random + warm.len();
    assert!(total > 0, "no starting points");

    let runs: Vec<(Vec<f64>, f64, bool)> = (0..total)
        .into_par_iter()
        .map(|r| {
            let x0 = if r < random {
                let mut g = rng(derive_seed(cfg.rng_seed, r as u64));
                (0..n).map(|_| g.sample::<f64, _>(StandardNormal)).collect()
            } else {
                warm[r - random].clone()
            };
            local_search(objective, family, cfg, x0)
        })
        .collect();

    let best_restart = runs.iter().enumerate().fold(0, |best, (i, run)| if run.1 > runs[best].1 { i } else { best });
    let best_params = runs[best_restart].0.clone();
    let best_state = family.decode_unchecked(&best_params);
    let best_value = sanitize(objective(&best_state));
    OptimizationOutcome {
        best_value,
        best_state,
        best_params,
        best_restart,
        restart_values: runs.iter().map(|r| r.1).collect(),
        converged: runs.iter().map(|r| r.2).collect(),
        restart_params: runs.into_iter().map(|r| r.0).collect(),
    }
}

/// One restart: a Nelder-Mead run on half the budget, then fresh simplices
/// of shrinking size around the incumbent while they keep improving.
fn local_search<F>(
    objective: &F,
    family: &StateParameterization,
    cfg: &OptimizerConfig,
    x0: Vec<f64>,
) -> (Vec<f64>, f64, bool)
where
    F: Fn(&DensityMatrix) -> f64 + Sync,
{
    let f = |x: &[f64]| -sanitize(objective(&family.decode_unchecked(x)));
    let first = cfg.max_iters.div_ceil(2);
    let mut res = minimize(f, &x0, &cfg.nm_settings(INITIAL_STEP, first));
    let mut budget = cfg.max_iters - res.iterations;
    let mut converged = res.converged;
    let mut step = POLISH_STEP;
    for _ in 0..POLISH_ROUNDS {
        if budget == 0 {
            break;
        }
        let next = minimize(f, &res.x, &cfg.nm_settings(step, budget));
        budget -= next.iterations;
        converged = next.converged;
        let gain = res.fx - next.fx;
        if next.fx < res.fx {
            res = next;
        }
        if gain <= cfg.ftol && converged {
            break;
        }
        step = (step * 0.3).max(1e-4);
    }
    let value = sanitize(objective(&family.decode_unchecked(&res.x)));
    (res.x, value, converged)
}
