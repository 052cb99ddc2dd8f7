//! Numerical checks of the estimator's structural properties on exact
//! (noise-free) inputs.
//!
//! The central object is the correction term: the difference between a
//! block of the true precision matrix and the central block of the inverse
//! of the surrounding covariance window. It measures the bias the estimator
//! incurs per block even with infinite data.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::estimator::{block_inverse, taper_apply, WindowSpec};
use crate::matrix::{l1_operator_norm, spectral_norm, SymMatrix};
use crate::model::{tail_sums, PrecisionModel};

/// `Ω[target] − (Σ[window]⁻¹)[target]` for block size `m` at offset `l`, given the
/// exact covariance `sigma = Ω⁻¹`.
fn correction_with_sigma(
    omega: &SymMatrix,
    sigma: &SymMatrix,
    l: isize,
    m: usize,
) -> Result<Option<SymMatrix>> {
    let (spec, approx) = block_inverse(sigma, m, l, 0.0)?;
    Ok(approx.map(|approx| omega.principal(spec.tgt_start, spec.tgt_end).sub(&approx)))
}

/// The correction term `W` for `(l, m)`: true target block minus the block recovered
/// by inverting the exact covariance window. Errors if the target is empty.
pub fn correction_term(model: &PrecisionModel, l: isize, m: usize) -> Result<SymMatrix> {
    let sigma = model.sigma();
    correction_with_sigma(&model.omega, &sigma, l, m)?.ok_or_else(|| {
        Error::Dimension(format!(
            "offset l = {l} with m = {m} has no target block in p = {}",
            model.dim()
        ))
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrectionReport {
    pub m_values: Vec<usize>,
    /// For each `m`, the largest spectral norm of the correction over interior offsets.
    pub max_norms: Vec<f64>,
    /// Least-squares slope of `ln max_norm` on `ln m`; NaN if any norm is zero or
    /// fewer than two block sizes were given.
    pub fitted_slope: f64,
}

/// Interior offsets `l ∈ [2m, p − 3m]`, where the window has room on both sides.
fn interior_offsets(m: usize, p: usize) -> impl Iterator<Item = isize> {
    let lo = 2 * m as isize;
    let hi = p as isize - 3 * m as isize;
    lo..=hi
}

pub fn correction_decay_report(model: &PrecisionModel, m_values: &[usize]) -> Result<CorrectionReport> {
    let p = model.dim();
    if m_values.is_empty() {
        return Err(Error::Parameter("no block sizes given".into()));
    }
    if let Some(&bad) = m_values.iter().find(|&&m| m < 2) {
        return Err(Error::Parameter(format!("block size {bad} < 2")));
    }
    let max_m = *m_values.iter().max().unwrap();
    if p < 5 * max_m {
        return Err(Error::InsufficientRange {
            p,
            max_m,
            needed: 5 * max_m,
        });
    }
    let sigma = model.sigma();
    let mut max_norms = Vec::with_capacity(m_values.len());
    for &m in m_values {
        let norms: Vec<f64> = interior_offsets(m, p)
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|l| {
                correction_with_sigma(&model.omega, &sigma, l, m)
                    .map(|w| w.map_or(0.0, |w| spectral_norm(&w)))
            })
            .collect::<Result<_>>()?;
        max_norms.push(norms.into_iter().fold(0.0, f64::max));
    }
    let fitted_slope = log_log_slope(m_values, &max_norms);
    Ok(CorrectionReport {
        m_values: m_values.to_vec(),
        max_norms,
        fitted_slope,
    })
}

fn log_log_slope(ms: &[usize], norms: &[f64]) -> f64 {
    if ms.len() < 2 || norms.iter().any(|&v| !(v > 0.0)) {
        return f64::NAN;
    }
    let xs: Vec<f64> = ms.iter().map(|&m| (m as f64).ln()).collect();
    let ys: Vec<f64> = norms.iter().map(|v| v.ln()).collect();
    crate::harness::stats::linear_fit(&xs, &ys).slope
}

/// `max_l ‖Ω̂_l − Ω_l‖` over every offset `l ∈ {1−m, …, p−1}`, where `Ω̂_l` is the
/// target block of the inverted `sigma_hat` window and `Ω_l` the matching block of `omega`.
pub fn block_deviation(sigma_hat: &SymMatrix, omega: &SymMatrix, m: usize) -> Result<f64> {
    let p = sigma_hat.dim();
    if omega.dim() != p {
        return Err(Error::Dimension(format!(
            "sigma_hat is {p}x{p} but omega is {0}x{0}",
            omega.dim()
        )));
    }
    if m == 0 {
        return Err(Error::Parameter("block size must be positive".into()));
    }
    let specs: Vec<WindowSpec> = WindowSpec::all(m, p).collect();
    let norms: Vec<f64> = specs
        .par_iter()
        .map(|spec| {
            let (_, est) = block_inverse(sigma_hat, m, spec.l, 0.0)?;
            Ok(est.map_or(0.0, |est| {
                spectral_norm(&est.sub(&omega.principal(spec.tgt_start, spec.tgt_end)))
            }))
        })
        .collect::<Result<_>>()?;
    Ok(norms.into_iter().fold(0.0, f64::max))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutsideBandReport {
    pub k: usize,
    /// `‖Ω_B‖` for the out-of-taper part `Ω_B`.
    pub spec_norm: f64,
    /// `‖Ω_B‖₁`
    pub l1_norm: f64,
    /// `max_j Σ_{|i−j| > k/2} |ω_ij|`
    pub half_band_tail: f64,
}

impl OutsideBandReport {
    /// `spec_norm ≤ l1_norm ≤ half_band_tail`, up to rounding.
    pub fn chain_holds(&self) -> bool {
        self.spec_norm <= self.l1_norm * (1.0 + 1e-12) + 1e-15
            && self.l1_norm <= self.half_band_tail + 1e-12
    }
}

pub fn outside_band_norm(omega: &SymMatrix, k: usize) -> OutsideBandReport {
    assert!(k >= 2, "bandwidth must be at least 2");
    let outside = taper_apply(omega, k).outside;
    // |i − j| > k/2  ⇔  |i − j| ≥ ⌊k/2⌋ + 1
    let d = k / 2 + 1;
    let tails = tail_sums(omega);
    let report = OutsideBandReport {
        k,
        spec_norm: spectral_norm(&outside),
        l1_norm: l1_operator_norm(&outside),
        half_band_tail: if d <= tails.len() { tails[d - 1] } else { 0.0 },
    };
    debug_assert!(report.chain_holds(), "{report:?}");
    report
}
