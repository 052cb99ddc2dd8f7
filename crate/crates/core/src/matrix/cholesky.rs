use super::sym::SymMatrix;
use crate::error::{Error, Result};

/// Pivots at or below this fraction of the largest diagonal entry are treated as zero.
pub const PIVOT_TOLERANCE: f64 = 1e-14;

/// Lower-triangular factor `L` with `L * Lᵀ = A`.
#[derive(Debug, Clone, PartialEq)]
pub struct CholeskyFactor {
    p: usize,
    // row-major, upper triangle kept at zero
    lower: Vec<f64>,
}

/// Pivot-free Cholesky factorization.
pub fn cholesky(a: &SymMatrix) -> Result<CholeskyFactor> {
    let p = a.dim();
    let threshold = PIVOT_TOLERANCE * a.max_diag().max(0.0);
    let mut l = vec![0.0; p * p];
    for j in 0..p {
        let mut d = a.get(j, j);
        for k in 0..j {
            d -= l[j * p + k] * l[j * p + k];
        }
        // `!(d > t)` also catches NaN
        if !(d > threshold) || d <= 0.0 {
            return Err(Error::NotPositiveDefinite { index: j, pivot: d });
        }
        let ljj = d.sqrt();
        l[j * p + j] = ljj;
        for i in (j + 1)..p {
            let mut s = a.get(i, j);
            for k in 0..j {
                s -= l[i * p + k] * l[j * p + k];
            }
            l[i * p + j] = s / ljj;
        }
    }
    Ok(CholeskyFactor { p, lower: l })
}

impl CholeskyFactor {
    pub fn dim(&self) -> usize {
        self.p
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.lower[i * self.p + j]
    }

    /// Row-major copy of `L`.
    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    /// `L * Lᵀ`.
    pub fn reconstruct(&self) -> SymMatrix {
        let p = self.p;
        SymMatrix::from_fn(p, |i, j| {
            let (ri, rj) = (&self.lower[i * p..i * p + j + 1], &self.lower[j * p..j * p + j + 1]);
            ri.iter().zip(rj).map(|(a, b)| a * b).sum()
        })
    }

    /// Solves `L y = b` in place.
    pub fn solve_lower_in_place(&self, b: &mut [f64]) {
        let p = self.p;
        assert_eq!(b.len(), p);
        for i in 0..p {
            let row = &self.lower[i * p..i * p + i];
            let s: f64 = row.iter().zip(&b[..i]).map(|(a, x)| a * x).sum();
            b[i] = (b[i] - s) / self.lower[i * p + i];
        }
    }

    /// Solves `Lᵀ x = b` in place.
    pub fn solve_upper_in_place(&self, b: &mut [f64]) {
        let p = self.p;
        assert_eq!(b.len(), p);
        for i in (0..p).rev() {
            let mut s = b[i];
            for k in (i + 1)..p {
                s -= self.lower[k * p + i] * b[k];
            }
            b[i] = s / self.lower[i * p + i];
        }
    }

    /// `A⁻¹ = L⁻ᵀ L⁻¹`, built from the lower triangle and mirrored.
    pub fn inverse(&self) -> SymMatrix {
        let p = self.p;
        // rows of L⁻¹, lower triangular
        let mut linv = vec![0.0; p * p];
        for j in 0..p {
            linv[j * p + j] = 1.0 / self.lower[j * p + j];
            for i in (j + 1)..p {
                let mut s = 0.0;
                for k in j..i {
                    s -= self.lower[i * p + k] * linv[k * p + j];
                }
                linv[i * p + j] = s / self.lower[i * p + i];
            }
        }
        // (L⁻ᵀ L⁻¹)_{ij} = Σ_{k ≥ max(i,j)} linv[k][i] * linv[k][j]
        SymMatrix::from_fn(p, |i, j| {
            let mut s = 0.0;
            for k in i..p {
                s += linv[k * p + i] * linv[k * p + j];
            }
            s
        })
    }
}

/// Inverse of a symmetric positive definite matrix.
///
/// Uses the square-root-free `L D Lᵀ` form of the same pivot-free elimination as
/// [`cholesky`], with the same pivot test, so diagonal inputs invert exactly.
pub fn invert_spd(a: &SymMatrix) -> Result<SymMatrix> {
    let p = a.dim();
    let threshold = PIVOT_TOLERANCE * a.max_diag().max(0.0);
    // unit lower factor, row-major; d holds the pivots
    let mut l = vec![0.0; p * p];
    let mut d = vec![0.0; p];
    for j in 0..p {
        let mut dj = a.get(j, j);
        for k in 0..j {
            dj -= l[j * p + k] * l[j * p + k] * d[k];
        }
        if !(dj > threshold) || dj <= 0.0 {
            return Err(Error::NotPositiveDefinite { index: j, pivot: dj });
        }
        d[j] = dj;
        l[j * p + j] = 1.0;
        for i in (j + 1)..p {
            let mut s = a.get(i, j);
            for k in 0..j {
                s -= l[i * p + k] * l[j * p + k] * d[k];
            }
            l[i * p + j] = s / dj;
        }
    }
    // unit lower L⁻¹
    let mut linv = vec![0.0; p * p];
    for j in 0..p {
        linv[j * p + j] = 1.0;
        for i in (j + 1)..p {
            let mut s = 0.0;
            for k in j..i {
                s -= l[i * p + k] * linv[k * p + j];
            }
            linv[i * p + j] = s;
        }
    }
    // (L⁻ᵀ D⁻¹ L⁻¹)_{ij} = Σ_{k ≥ i} linv[k][i] · linv[k][j] / d_k
    Ok(SymMatrix::from_fn(p, |i, j| {
        let mut s = 0.0;
        for k in i..p {
            s += linv[k * p + i] * linv[k * p + j] / d[k];
        }
        s
    }))
}
