//! Rate experiments: single trials, grid sweeps, CSV and SVG output.
//!
//! # Seeds
//!
//! A sweep derives the seed of every trial from the plan's `base_seed` and the
//! grid position `(alpha index, n index, p index, trial index)`:
//!
//! ```text
//! h = splitmix64(base_seed)
//! for idx in [alpha_idx, n_idx, p_idx, trial_idx]:
//!     h = splitmix64(h ^ idx)
//! seed = h
//! ```
//!
//! so any single cell can be rerun on its own with [`trial_seed`].

pub mod io;
pub mod plot;
pub mod stats;

use std::time::Instant;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::estimator::{default_bandwidth, estimate, EstimatorConfig, Mode};
use crate::matrix::spectral_norm;
use crate::model::{build_omega, empirical_covariance, sample, ModelSpec, DEFAULT_RHO};

pub use io::{read_records_csv, records_to_csv, write_csv, RECORD_HEADER};
pub use plot::{render_plot, render_svg, PlotAxis};

/// One row of experiment output.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialRecord {
    pub alpha: f64,
    pub n: usize,
    pub p: usize,
    pub k: usize,
    pub trial: usize,
    pub seed: u64,
    /// `‖Ω̂ − Ω‖²` in the spectral norm.
    pub sq_spectral_error: f64,
    /// Wall time of the estimation step in milliseconds; zero when timing is disabled.
    pub elapsed_ms: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialSpec {
    pub alpha: f64,
    pub n: usize,
    pub p: usize,
    pub seed: u64,
    pub trial: usize,
    pub mode: Mode,
    pub k_override: Option<usize>,
    pub rho_amp: f64,
    pub record_timing: bool,
}

impl TrialSpec {
    pub fn new(alpha: f64, n: usize, p: usize, seed: u64) -> Self {
        TrialSpec {
            alpha,
            n,
            p,
            seed,
            trial: 0,
            mode: Mode::Fast,
            k_override: None,
            rho_amp: DEFAULT_RHO,
            record_timing: true,
        }
    }

    /// Bandwidth this trial uses: the override or `⌊n^(1/(2α+1))⌋`, clamped to `p`.
    pub fn bandwidth(&self) -> usize {
        self.k_override
            .unwrap_or_else(|| default_bandwidth(self.n.max(1), self.alpha))
            .min(self.p)
    }

    fn context(&self) -> String {
        let k = if self.k_override.is_some() || (self.alpha > 0.0 && self.n > 0) {
            self.bandwidth().to_string()
        } else {
            "-".to_string()
        };
        format!(
            "alpha={} n={} p={} k={} trial={} seed={} mode={}",
            self.alpha,
            self.n,
            self.p,
            k,
            self.trial,
            self.seed,
            self.mode
        )
    }
}

/// Builds the power-law model, samples `n` observations, estimates and scores.
pub fn run_trial(spec: &TrialSpec) -> Result<TrialRecord> {
    run_trial_inner(spec).map_err(|e| Error::Trial {
        context: spec.context(),
        source: Box::new(e),
    })
}

fn run_trial_inner(spec: &TrialSpec) -> Result<TrialRecord> {
    if spec.n == 0 {
        return Err(Error::Parameter("n must be positive".into()));
    }
    let model = build_omega(ModelSpec::new(spec.alpha, spec.p).with_rho(spec.rho_amp))?;
    let x = sample(&model, spec.n, spec.seed);
    let sigma_hat = empirical_covariance(&x)?;
    let k = spec.bandwidth();
    let config = EstimatorConfig::new(k).with_mode(spec.mode);
    let start = Instant::now();
    let omega_hat = estimate(&sigma_hat, &config)?;
    let elapsed = start.elapsed();
    let err = spectral_norm(&omega_hat.sub(&model.omega));
    Ok(TrialRecord {
        alpha: spec.alpha,
        n: spec.n,
        p: spec.p,
        k,
        trial: spec.trial,
        seed: spec.seed,
        sq_spectral_error: err * err,
        elapsed_ms: if spec.record_timing {
            elapsed.as_secs_f64() * 1e3
        } else {
            0.0
        },
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentPlan {
    pub alphas: Vec<f64>,
    pub ns: Vec<usize>,
    pub ps: Vec<usize>,
    pub trials: usize,
    pub base_seed: u64,
    pub rho_amp: f64,
    pub mode: Mode,
    pub k_override: Option<usize>,
    pub record_timing: bool,
}

impl ExperimentPlan {
    pub fn new(alphas: Vec<f64>, ns: Vec<usize>, ps: Vec<usize>, trials: usize, base_seed: u64) -> Self {
        ExperimentPlan {
            alphas,
            ns,
            ps,
            trials,
            base_seed,
            rho_amp: DEFAULT_RHO,
            mode: Mode::Fast,
            k_override: None,
            record_timing: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.alphas.is_empty() || self.ns.is_empty() || self.ps.is_empty() {
            return Err(Error::Parameter("alphas, ns and ps must be nonempty".into()));
        }
        if self.trials == 0 {
            return Err(Error::Parameter("trials must be at least 1".into()));
        }
        if let Some(a) = self.alphas.iter().find(|a| !(**a > 0.0) || !a.is_finite()) {
            return Err(Error::Parameter(format!("alpha must be positive, got {a}")));
        }
        if self.ns.contains(&0) || self.ps.contains(&0) {
            return Err(Error::Parameter("n and p must be positive".into()));
        }
        Ok(())
    }

    /// Trials in output order: alpha, then n, then p, then trial index.
    pub fn trial_specs(&self) -> Vec<TrialSpec> {
        let mut out = Vec::with_capacity(
            self.alphas.len() * self.ns.len() * self.ps.len() * self.trials,
        );
        for (ai, &alpha) in self.alphas.iter().enumerate() {
            for (ni, &n) in self.ns.iter().enumerate() {
                for (pi, &p) in self.ps.iter().enumerate() {
                    for t in 0..self.trials {
                        out.push(TrialSpec {
                            alpha,
                            n,
                            p,
                            seed: trial_seed(self.base_seed, ai, ni, pi, t),
                            trial: t,
                            mode: self.mode,
                            k_override: self.k_override,
                            rho_amp: self.rho_amp,
                            record_timing: self.record_timing,
                        });
                    }
                }
            }
        }
        out
    }
}

pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn trial_seed(base_seed: u64, alpha_idx: usize, n_idx: usize, p_idx: usize, trial_idx: usize) -> u64 {
    [alpha_idx, n_idx, p_idx, trial_idx]
        .into_iter()
        .fold(splitmix64(base_seed), |h, idx| splitmix64(h ^ idx as u64))
}

#[derive(Debug)]
pub struct TrialFailure {
    pub spec: TrialSpec,
    pub error: Error,
}

#[derive(Debug, Default)]
pub struct SweepOutcome {
    pub records: Vec<TrialRecord>,
    pub failures: Vec<TrialFailure>,
}

/// Runs every trial of the plan on the rayon pool. Output order follows
/// [`ExperimentPlan::trial_specs`] regardless of scheduling; failed trials are
/// collected instead of aborting the sweep.
pub fn run_sweep(plan: &ExperimentPlan) -> Result<SweepOutcome> {
    plan.validate()?;
    let results: Vec<(TrialSpec, Result<TrialRecord>)> = plan
        .trial_specs()
        .into_par_iter()
        .map(|spec| {
            let r = run_trial(&spec);
            (spec, r)
        })
        .collect();
    let mut out = SweepOutcome::default();
    for (spec, r) in results {
        match r {
            Ok(rec) => out.records.push(rec),
            Err(error) => out.failures.push(TrialFailure { spec, error }),
        }
    }
    Ok(out)
}

/// Mean, min and max of the squared error over the trials of one `(alpha, n, p)` cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CellSummary {
    pub alpha: f64,
    pub n: usize,
    pub p: usize,
    pub k: usize,
    pub trials: usize,
    pub mean: f64,
    pub min: f64,
    pub max: f64,
}

/// Groups records by `(alpha, n, p)`, sorted by alpha, n, p.
pub fn summarize(records: &[TrialRecord]) -> Vec<CellSummary> {
    let mut sorted: Vec<&TrialRecord> = records.iter().collect();
    sorted.sort_by(|a, b| {
        a.alpha
            .total_cmp(&b.alpha)
            .then(a.n.cmp(&b.n))
            .then(a.p.cmp(&b.p))
    });
    let mut out: Vec<CellSummary> = Vec::new();
    for r in sorted {
        let e = r.sq_spectral_error;
        match out.last_mut() {
            Some(c) if c.alpha == r.alpha && c.n == r.n && c.p == r.p => {
                c.mean += e;
                c.min = c.min.min(e);
                c.max = c.max.max(e);
                c.trials += 1;
            }
            _ => out.push(CellSummary {
                alpha: r.alpha,
                n: r.n,
                p: r.p,
                k: r.k,
                trials: 1,
                mean: e,
                min: e,
                max: e,
            }),
        }
    }
    for c in &mut out {
        c.mean /= c.trials as f64;
    }
    out
}
