//! Banded precision matrix estimation.
//!
//! The estimator inverts overlapping diagonal windows of the empirical
//! covariance, keeps the central block of each inverse and combines two block
//! sizes into a linearly tapered, exactly banded estimate. A rank-1 update path
//! slides the window inverse along the diagonal in `O(k²)` per step.
//!
//! ```
//! use bandprec::{build_omega, empirical_covariance, estimate, sample, EstimatorConfig, ModelSpec};
//!
//! let model = build_omega(ModelSpec::new(0.5, 30)).unwrap();
//! let x = sample(&model, 200, 1);
//! let sigma_hat = empirical_covariance(&x).unwrap();
//! let omega_hat = estimate(&sigma_hat, &EstimatorConfig::new(6)).unwrap();
//! assert_eq!(omega_hat.get(0, 10), 0.0);
//! ```

pub mod diagnostics;
pub mod error;
pub mod estimator;
pub mod harness;
pub mod matrix;
pub mod model;

pub use diagnostics::{
    block_deviation, correction_decay_report, correction_term, outside_band_norm,
    CorrectionReport, OutsideBandReport,
};
pub use error::{Error, Result};
pub use estimator::{
    block_inverse, blockwise_sum, default_bandwidth, estimate, taper_apply, taper_combine,
    taper_weight, EstimatorConfig, Mode, TaperSplit, WindowSpec,
};
pub use harness::{
    read_records_csv, records_to_csv, render_plot, render_svg, run_sweep, run_trial, write_csv,
    ExperimentPlan, PlotAxis, SweepOutcome, TrialRecord, TrialSpec, RECORD_HEADER,
};
pub use matrix::{
    cholesky, inverse_append_trailing, inverse_delete_leading, invert_spd, l1_operator_norm,
    min_eigenvalue, spectral_norm, CholeskyFactor, DataMatrix, SymMatrix,
};
pub use model::{
    build_omega, empirical_covariance, f11_matrix, f12_matrix, sample, validate_membership,
    MembershipReport, ModelSpec, PrecisionModel,
};
