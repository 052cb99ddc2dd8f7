//! Test-instance generation: the power-law Toeplitz precision family, the two
//! adversarial families used for lower bounds, Gaussian sampling and the
//! covariance MLE.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::matrix::{cholesky, symmetric_eigenvalues, CholeskyFactor, DataMatrix, SymMatrix};

/// Off-diagonal amplitude used in all experiments.
pub const DEFAULT_RHO: f64 = 0.6;

/// `ω_ii = 1`, `ω_ij = rho_amp · |i − j|^(−alpha − 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelSpec {
    pub alpha: f64,
    pub rho_amp: f64,
    pub p: usize,
}

impl ModelSpec {
    pub fn new(alpha: f64, p: usize) -> Self {
        ModelSpec {
            alpha,
            rho_amp: DEFAULT_RHO,
            p,
        }
    }

    pub fn with_rho(mut self, rho_amp: f64) -> Self {
        self.rho_amp = rho_amp;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0) || !self.alpha.is_finite() {
            return Err(Error::Parameter(format!("alpha must be positive, got {}", self.alpha)));
        }
        if self.p == 0 {
            return Err(Error::Parameter("p must be positive".into()));
        }
        if !self.rho_amp.is_finite() {
            return Err(Error::Parameter("rho must be finite".into()));
        }
        Ok(())
    }

    /// Entry at distance `d` from the diagonal.
    pub fn entry(&self, d: usize) -> f64 {
        if d == 0 {
            1.0
        } else {
            self.rho_amp * (d as f64).powf(-self.alpha - 1.0)
        }
    }
}

/// An SPD precision matrix together with its Cholesky factor.
#[derive(Debug, Clone)]
pub struct PrecisionModel {
    /// Present when the matrix came from [`build_omega`].
    pub spec: Option<ModelSpec>,
    pub omega: SymMatrix,
    pub chol_omega: CholeskyFactor,
}

impl PrecisionModel {
    /// Wraps an arbitrary SPD precision matrix.
    pub fn from_omega(omega: SymMatrix) -> Result<Self> {
        let chol_omega = cholesky(&omega)?;
        Ok(PrecisionModel {
            spec: None,
            omega,
            chol_omega,
        })
    }

    pub fn dim(&self) -> usize {
        self.omega.dim()
    }

    /// `Σ = Ω⁻¹`, recomputed on every call.
    pub fn sigma(&self) -> SymMatrix {
        self.chol_omega.inverse()
    }
}

pub fn build_omega(spec: ModelSpec) -> Result<PrecisionModel> {
    spec.validate()?;
    let omega = SymMatrix::from_fn(spec.p, |i, j| spec.entry(i - j));
    let mut model = PrecisionModel::from_omega(omega)?;
    model.spec = Some(spec);
    Ok(model)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MembershipReport {
    pub min_eig: f64,
    pub max_eig: f64,
    /// `max(max_eig, 1 / min_eig)`; infinite when `min_eig <= 0`.
    pub implied_m0: f64,
    /// `tail_sums[k - 1] = max_j Σ_{|i−j| ≥ k} |ω_ij|` for `k = 1..=p`.
    pub tail_sums: Vec<f64>,
    /// `max_k tail_sums[k] · k^α`.
    pub implied_m: f64,
    pub member: bool,
}

impl MembershipReport {
    pub fn tail_sum(&self, k: usize) -> f64 {
        self.tail_sums[k - 1]
    }
}

/// `max_j Σ_{|i−j| ≥ k} |ω_ij|` for every `k = 1..=p`.
pub fn tail_sums(omega: &SymMatrix) -> Vec<f64> {
    let p = omega.dim();
    let mut best = vec![0.0f64; p];
    let mut by_dist = vec![0.0; p];
    for j in 0..p {
        by_dist.iter_mut().for_each(|x| *x = 0.0);
        for (i, v) in omega.row(j).iter().enumerate() {
            by_dist[i.abs_diff(j)] += v.abs();
        }
        let mut acc = 0.0;
        for d in (1..p).rev() {
            acc += by_dist[d];
            best[d - 1] = best[d - 1].max(acc);
        }
    }
    // k = p: no entries that far from the diagonal
    best[p - 1] = 0.0;
    best
}

/// Checks the decay and eigenvalue conditions of the bandable class with
/// parameters `(alpha, m, m0)`.
pub fn validate_membership(omega: &SymMatrix, alpha: f64, m: f64, m0: f64) -> MembershipReport {
    let eig = symmetric_eigenvalues(omega);
    let min_eig = eig[0];
    let max_eig = *eig.last().unwrap();
    let implied_m0 = if min_eig > 0.0 {
        max_eig.max(1.0 / min_eig)
    } else {
        f64::INFINITY
    };
    let tails = tail_sums(omega);
    let scaled: Vec<f64> = tails
        .iter()
        .enumerate()
        .map(|(i, t)| t * ((i + 1) as f64).powf(alpha))
        .collect();
    let implied_m = scaled.iter().copied().fold(0.0, f64::max);
    // relative slack so that m == implied_m is accepted despite rounding
    let slack = 1.0 + 1e-12;
    let decay_ok = scaled.iter().all(|&s| s <= m * slack);
    let eig_ok = min_eig * slack >= 1.0 / m0 && max_eig <= m0 * slack;
    MembershipReport {
        min_eig,
        max_eig,
        implied_m0,
        tail_sums: tails,
        implied_m,
        member: decay_ok && eig_ok,
    }
}

/// `n` i.i.d. draws from `N(0, Ω⁻¹)`, one per row.
///
/// Each row solves `Lᵀ x = z` for standard normal `z`, where `Ω = L Lᵀ`; then
/// `Cov(x) = L⁻ᵀ L⁻¹ = Ω⁻¹`. Normals come from a ChaCha8 stream seeded with
/// `seed`, drawn row by row in coordinate order.
pub fn sample(model: &PrecisionModel, n: usize, seed: u64) -> DataMatrix {
    let p = model.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = DataMatrix::zeros(n, p);
    for r in 0..n {
        let row = x.row_mut(r);
        for v in row.iter_mut() {
            *v = StandardNormal.sample(&mut rng);
        }
        model.chol_omega.solve_upper_in_place(row);
    }
    x
}

/// Mean-centered covariance with divisor `n`.
pub fn empirical_covariance(x: &DataMatrix) -> Result<SymMatrix> {
    let n = x.rows();
    let p = x.cols();
    if n == 0 {
        return Err(Error::EmptyData);
    }
    if p == 0 {
        return Err(Error::Dimension("observations have no coordinates".into()));
    }
    let mut mean = vec![0.0; p];
    for row in x.iter_rows() {
        for (m, v) in mean.iter_mut().zip(row) {
            *m += v;
        }
    }
    mean.iter_mut().for_each(|m| *m /= n as f64);

    let mut acc = vec![0.0; p * p];
    let mut centered = vec![0.0; p];
    for row in x.iter_rows() {
        for (c, (v, m)) in centered.iter_mut().zip(row.iter().zip(&mean)) {
            *c = v - m;
        }
        for i in 0..p {
            let ci = centered[i];
            let dst = &mut acc[i * p..i * p + i + 1];
            for (d, cj) in dst.iter_mut().zip(&centered[..=i]) {
                *d += ci * cj;
            }
        }
    }
    Ok(SymMatrix::from_fn(p, |i, j| acc[i * p + j] / n as f64))
}

/// Assouad-type instance `I + τ·a·Σ_m θ_m B(m, k)` with `a = k^(−α−1)`.
///
/// `B(m, k)` (1-based `m`) has ones at `(m, j)` and `(j, m)` for `m < j ≤ 2k`.
pub fn f11_matrix(k: usize, p: usize, alpha: f64, tau: f64, theta: &[bool]) -> Result<SymMatrix> {
    if k == 0 || 2 * k > p {
        return Err(Error::Dimension(format!("need 1 <= k and 2k <= p, got k = {k}, p = {p}")));
    }
    if theta.len() != k {
        return Err(Error::Dimension(format!(
            "theta has length {}, expected {k}",
            theta.len()
        )));
    }
    if !(tau > 0.0) || !(alpha > 0.0) {
        return Err(Error::Parameter("tau and alpha must be positive".into()));
    }
    let a = (k as f64).powf(-alpha - 1.0);
    let mut omega = SymMatrix::identity(p);
    for (m0, _) in theta.iter().enumerate().filter(|(_, &on)| on) {
        // zero-based row m0 ↔ 1-based m = m0 + 1; columns m+1..=2k ↔ m0+1..2k
        for j in (m0 + 1)..(2 * k) {
            omega.set(m0, j, omega.get(m0, j) + tau * a);
        }
    }
    Ok(omega)
}

/// Natural-log dimension cap `p₁ = min(p, ⌊e^{n/2}⌋)`.
pub fn f12_p1(p: usize, n: usize) -> usize {
    let cap = (n as f64 / 2.0).exp().floor();
    if cap >= p as f64 {
        p
    } else {
        cap as usize
    }
}

/// Le Cam-type diagonal instance: identity except `ω_mm = (1 + √(τ·ln p₁ / n))⁻¹`
/// at the 1-based coordinate `m`; `m = 0` gives the identity.
pub fn f12_matrix(m: usize, p: usize, n: usize, tau: f64, m0: f64, rho: f64) -> Result<SymMatrix> {
    let bound = (m0 - 1.0).powi(2).min((rho - 1.0).powi(2)).min(1.0);
    if !(tau > 0.0 && tau < bound) {
        return Err(Error::Parameter(format!(
            "tau = {tau} must lie in (0, {bound})"
        )));
    }
    if n == 0 {
        return Err(Error::Parameter("n must be positive".into()));
    }
    let p1 = f12_p1(p, n);
    if m > p1 {
        return Err(Error::Parameter(format!("m = {m} exceeds p1 = {p1}")));
    }
    let mut omega = SymMatrix::identity(p);
    if m >= 1 {
        let bump = (tau * (p1 as f64).ln() / n as f64).sqrt();
        omega.set(m - 1, m - 1, 1.0 / (1.0 + bump));
    }
    Ok(omega)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn small_models() {
        let m = build_omega(ModelSpec::new(0.5, 2)).unwrap();
        assert_eq!(m.omega.as_slice(), &[1.0, 0.6, 0.6, 1.0]);
        let m = build_omega(ModelSpec::new(0.5, 3)).unwrap();
        assert_abs_diff_eq!(m.omega.get(0, 2), 0.212_132_034_355_964_26, epsilon = 1e-15);
        let m = build_omega(ModelSpec::new(0.5, 7).with_rho(0.0)).unwrap();
        assert_eq!(m.omega, SymMatrix::identity(7));
    }

    #[test]
    fn non_spd_amplitude_fails() {
        let err = build_omega(ModelSpec::new(0.5, 50).with_rho(3.0)).unwrap_err();
        assert!(matches!(err, Error::NotPositiveDefinite { .. }));
        assert!(build_omega(ModelSpec::new(0.0, 5)).is_err());
    }

    #[test]
    fn toeplitz_structure() {
        let m = build_omega(ModelSpec::new(0.3, 12)).unwrap();
        for i in 0..12 {
            for j in 0..12 {
                assert_eq!(m.omega.get(i, j), m.omega.get(i.abs_diff(j), 0));
            }
        }
    }

    #[test]
    fn empirical_covariance_examples() {
        let one = DataMatrix::from_row_major(1, 3, vec![1.0, 2.0, 3.0]).unwrap();
        assert_eq!(empirical_covariance(&one).unwrap(), SymMatrix::zeros(3));
        let two = DataMatrix::from_row_major(2, 2, vec![1.0, 0.0, -1.0, 0.0]).unwrap();
        assert_eq!(
            empirical_covariance(&two).unwrap(),
            SymMatrix::from_diag(&[1.0, 0.0])
        );
        let none = DataMatrix::zeros(0, 3);
        assert!(matches!(empirical_covariance(&none), Err(Error::EmptyData)));
    }

    #[test]
    fn sample_shapes_and_determinism() {
        let m = build_omega(ModelSpec::new(0.5, 5)).unwrap();
        assert_eq!(sample(&m, 0, 1).rows(), 0);
        let a = sample(&m, 20, 99);
        let b = sample(&m, 20, 99);
        assert_eq!(a, b);
        assert_ne!(a, sample(&m, 20, 100));
    }

    #[test]
    fn membership_examples() {
        let r = validate_membership(&SymMatrix::identity(10), 0.5, 1.0, 2.0);
        assert!(r.member);
        assert!(r.tail_sums.iter().all(|&t| t == 0.0));
        let r = validate_membership(&SymMatrix::from_diag(&[0.1, 1.0]), 0.5, 1.0, 5.0);
        assert!(!r.member);
        assert_abs_diff_eq!(r.implied_m0, 10.0, epsilon = 1e-12);
    }

    #[test]
    fn f11_single_bit() {
        let omega = f11_matrix(2, 5, 0.5, 0.1, &[true, false]).unwrap();
        let a = 2f64.powf(-1.5);
        // 1-based (1, j) for j in 2..=4 ↔ zero-based (0, 1..=3)
        for j in 1..4 {
            assert_abs_diff_eq!(omega.get(0, j), 0.1 * a, epsilon = 1e-15);
        }
        assert_eq!(omega.get(0, 4), 0.0);
        assert!(f11_matrix(3, 5, 0.5, 0.1, &[true; 3]).is_err());
        assert!(f11_matrix(2, 5, 0.5, 0.1, &[true]).is_err());
    }

    #[test]
    fn f12_example() {
        let omega = f12_matrix(3, 50, 100, 0.5, 2.0, 0.0).unwrap();
        let want = 1.0 / (1.0 + (0.5 * 50f64.ln() / 100.0).sqrt());
        assert_abs_diff_eq!(omega.get(2, 2), want, epsilon = 1e-15);
        assert_abs_diff_eq!(want, 0.87731, epsilon = 1e-5);
        assert!(omega.is_diagonal());
        assert_eq!(f12_matrix(0, 50, 100, 0.5, 2.0, 0.0).unwrap(), SymMatrix::identity(50));
        assert!(f12_matrix(1, 50, 100, 1.5, 2.0, 0.0).is_err());
    }

    #[test]
    fn f12_cap() {
        assert_eq!(f12_p1(50, 100), 50);
        // e^{2} ≈ 7.39
        assert_eq!(f12_p1(50, 4), 7);
        assert!(f12_matrix(8, 50, 4, 0.5, 2.0, 0.0).is_err());
    }
}
