//! Rank-1 updates of an explicit inverse when a row/column pair is removed
//! from the front or appended at the back of the underlying SPD matrix.
//! Both run in `O(q²)`.

use super::sym::{dot, SymMatrix};
use crate::error::{Error, Result};

/// Schur pivots at or below this value are treated as a loss of definiteness.
pub const UPDATE_TOLERANCE: f64 = 1e-14;

/// Given `inv = M⁻¹`, returns the inverse of `M` with its first row and column removed.
///
/// With `inv = [[ã, b̃ᵀ], [b̃, C̃]]` the result is `C̃ − b̃ b̃ᵀ / ã`.
pub fn inverse_delete_leading(inv: &SymMatrix) -> Result<SymMatrix> {
    let q = inv.dim();
    if q < 2 {
        return Err(Error::Dimension(
            "cannot delete from a 1x1 inverse".into(),
        ));
    }
    let a = inv.get(0, 0);
    if !(a > UPDATE_TOLERANCE) {
        return Err(Error::DegenerateUpdate { pivot: a });
    }
    let b = &inv.row(0)[1..];
    Ok(SymMatrix::from_fn(q - 1, |i, j| {
        inv.get(i + 1, j + 1) - b[i] * b[j] / a
    }))
}

/// Given `inv = C⁻¹`, returns the inverse of `[[C, border], [borderᵀ, corner]]`.
///
/// Uses the scalar Schur complement `s = corner − borderᵀ C⁻¹ border`.
pub fn inverse_append_trailing(inv: &SymMatrix, border: &[f64], corner: f64) -> Result<SymMatrix> {
    let q = inv.dim();
    if border.len() != q {
        return Err(Error::Dimension(format!(
            "border of length {} for a {q}x{q} inverse",
            border.len()
        )));
    }
    let u = inv.matvec(border);
    let s = corner - dot(border, &u);
    if !(s > UPDATE_TOLERANCE) {
        return Err(Error::DegenerateUpdate { pivot: s });
    }
    Ok(SymMatrix::from_fn(q + 1, |i, j| {
        if i < q {
            inv.get(i, j) + u[i] * u[j] / s
        } else if j < q {
            -u[j] / s
        } else {
            1.0 / s
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn identity_cases() {
        let out = inverse_delete_leading(&SymMatrix::identity(3)).unwrap();
        assert_eq!(out, SymMatrix::identity(2));
        let out = inverse_append_trailing(&SymMatrix::identity(1), &[0.0], 1.0).unwrap();
        assert_eq!(out, SymMatrix::identity(2));
    }

    #[test]
    fn two_by_two_delete() {
        // M = [[2,1],[1,2]], M⁻¹ = (1/3)[[2,-1],[-1,2]]; trailing block [2] has inverse 1/2
        let inv = SymMatrix::from_rows(&[vec![2.0 / 3.0, -1.0 / 3.0], vec![-1.0 / 3.0, 2.0 / 3.0]])
            .unwrap();
        let out = inverse_delete_leading(&inv).unwrap();
        assert_abs_diff_eq!(out.get(0, 0), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn one_by_one_append() {
        let out = inverse_append_trailing(&SymMatrix::from_diag(&[0.5]), &[1.0], 2.0).unwrap();
        let want = [[2.0 / 3.0, -1.0 / 3.0], [-1.0 / 3.0, 2.0 / 3.0]];
        for i in 0..2 {
            for j in 0..2 {
                assert_abs_diff_eq!(out.get(i, j), want[i][j], epsilon = 1e-15);
            }
        }
    }

    #[test]
    fn degenerate_pivots() {
        let z = SymMatrix::from_diag(&[0.0, 1.0]);
        assert!(matches!(
            inverse_delete_leading(&z),
            Err(Error::DegenerateUpdate { .. })
        ));
        // [[1,1],[1,1]] is singular
        assert!(matches!(
            inverse_append_trailing(&SymMatrix::identity(1), &[1.0], 1.0),
            Err(Error::DegenerateUpdate { .. })
        ));
        assert!(matches!(
            inverse_delete_leading(&SymMatrix::identity(1)),
            Err(Error::Dimension(_))
        ));
    }
}
