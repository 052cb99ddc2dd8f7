//! Eigenvalue and norm routines for dense symmetric matrices.
//!
//! `symmetric_eigenvalues` reduces to tridiagonal form with Householder
//! reflections and then runs implicit QL with Wilkinson shifts. The spectral
//! norm first tries power iteration from a fixed start vector and falls back
//! to the full eigenvalue computation when the residual test is not met.

use super::sym::{dot, SymMatrix};

const POWER_MAX_ITERS: usize = 300;
const POWER_RESIDUAL_TOL: f64 = 1e-11;
const QL_MAX_SWEEPS: usize = 60;

/// All eigenvalues, sorted ascending.
pub fn symmetric_eigenvalues(a: &SymMatrix) -> Vec<f64> {
    let n = a.dim();
    let (mut d, mut e) = tridiagonalize(a);
    tridiagonal_ql(&mut d, &mut e);
    debug_assert_eq!(d.len(), n);
    d.sort_by(|x, y| x.total_cmp(y));
    d
}

pub fn min_eigenvalue(a: &SymMatrix) -> f64 {
    symmetric_eigenvalues(a)[0]
}

pub fn max_eigenvalue(a: &SymMatrix) -> f64 {
    *symmetric_eigenvalues(a).last().unwrap()
}

/// Largest absolute eigenvalue.
pub fn spectral_norm(a: &SymMatrix) -> f64 {
    if let Some(v) = power_iteration(a) {
        return v;
    }
    symmetric_eigenvalues(a)
        .into_iter()
        .map(f64::abs)
        .fold(0.0, f64::max)
}

/// Maximum absolute column sum.
pub fn l1_operator_norm(a: &SymMatrix) -> f64 {
    let p = a.dim();
    // symmetric: column sums equal row sums
    (0..p)
        .map(|j| a.row(j).iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Deterministic, non-symmetric start vector. A constant vector would be
/// orthogonal to every antisymmetric eigenvector of a Toeplitz matrix.
fn start_vector(p: usize) -> Vec<f64> {
    const GOLDEN: f64 = 0.618_033_988_749_894_9;
    let mut v: Vec<f64> = (0..p)
        .map(|i| 0.5 + ((i as f64 + 1.0) * GOLDEN).fract())
        .collect();
    let norm = dot(&v, &v).sqrt();
    v.iter_mut().for_each(|x| *x /= norm);
    v
}

/// Power iteration with a Rayleigh-quotient residual test. Returns `None`
/// when the residual does not drop below tolerance in the iteration budget,
/// which includes the case of a `±λ` pair at the top of the spectrum.
fn power_iteration(a: &SymMatrix) -> Option<f64> {
    let p = a.dim();
    let scale = l1_operator_norm(a);
    if scale == 0.0 {
        return Some(0.0);
    }
    let mut v = start_vector(p);
    for _ in 0..POWER_MAX_ITERS {
        let w = a.matvec(&v);
        let mu = dot(&v, &w);
        let res: f64 = w
            .iter()
            .zip(&v)
            .map(|(wi, vi)| (wi - mu * vi).powi(2))
            .sum::<f64>()
            .sqrt();
        if res <= POWER_RESIDUAL_TOL * scale {
            return Some(mu.abs());
        }
        let norm = dot(&w, &w).sqrt();
        if norm == 0.0 {
            return None;
        }
        v = w.into_iter().map(|x| x / norm).collect();
    }
    None
}

/// Householder reduction to tridiagonal form. Returns the diagonal `d` and
/// the sub-diagonal `e` with `e[i]` coupling `i` and `i + 1` (`e[n-1] = 0`).
fn tridiagonalize(m: &SymMatrix) -> (Vec<f64>, Vec<f64>) {
    let n = m.dim();
    let mut a: Vec<Vec<f64>> = (0..n).map(|i| m.row(i).to_vec()).collect();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0;
        if l > 0 {
            let scale: f64 = a[i][..=l].iter().map(|x| x.abs()).sum();
            if scale == 0.0 {
                e[i] = a[i][l];
            } else {
                for k in 0..=l {
                    a[i][k] /= scale;
                    h += a[i][k] * a[i][k];
                }
                let f = a[i][l];
                let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                a[i][l] = f - g;
                let mut f = 0.0;
                for j in 0..=l {
                    let mut g = 0.0;
                    for k in 0..=j {
                        g += a[j][k] * a[i][k];
                    }
                    for k in (j + 1)..=l {
                        g += a[k][j] * a[i][k];
                    }
                    e[j] = g / h;
                    f += e[j] * a[i][j];
                }
                let hh = f / (h + h);
                for j in 0..=l {
                    let f = a[i][j];
                    let g = e[j] - hh * f;
                    e[j] = g;
                    for k in 0..=j {
                        a[j][k] -= f * e[k] + g * a[i][k];
                    }
                }
            }
        } else {
            e[i] = a[i][l];
        }
        d[i] = h;
    }
    for i in 0..n {
        d[i] = a[i][i];
    }
    // shift so that e[i] couples (i, i+1)
    for i in 1..n {
        e[i - 1] = e[i];
    }
    if n > 0 {
        e[n - 1] = 0.0;
    }
    (d, e)
}

/// Implicit QL on a symmetric tridiagonal matrix; eigenvalues left in `d`.
fn tridiagonal_ql(d: &mut [f64], e: &mut [f64]) {
    let n = d.len();
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > QL_MAX_SWEEPS {
                // Leaves the current approximation in place; in practice QL
                // converges in a handful of sweeps per eigenvalue.
                break;
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn diagonal_spectral_norm() {
        assert_eq!(spectral_norm(&SymMatrix::from_diag(&[1.0, 3.0, 2.0])), 3.0);
    }

    #[test]
    fn plus_minus_pair() {
        let a = SymMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        assert_relative_eq!(spectral_norm(&a), 1.0, max_relative = 1e-12);
        assert_relative_eq!(min_eigenvalue(&a), -1.0, max_relative = 1e-12);
    }

    #[test]
    fn l1_norm_examples() {
        assert_eq!(l1_operator_norm(&SymMatrix::identity(5)), 1.0);
        let a = SymMatrix::from_rows(&[vec![1.0, -2.0], vec![-2.0, 1.0]]).unwrap();
        assert_eq!(l1_operator_norm(&a), 3.0);
    }

    #[test]
    fn min_eigenvalue_examples() {
        assert_eq!(min_eigenvalue(&SymMatrix::identity(3)), 1.0);
        assert_relative_eq!(min_eigenvalue(&SymMatrix::from_diag(&[0.2, 5.0])), 0.2);
    }

    #[test]
    fn one_by_one_and_zero() {
        assert_eq!(symmetric_eigenvalues(&SymMatrix::from_diag(&[-4.0])), vec![-4.0]);
        assert_eq!(spectral_norm(&SymMatrix::zeros(3)), 0.0);
    }

    #[test]
    fn tridiagonal_toeplitz_closed_form() {
        // eigenvalues of tridiag(1, 2, 1) are 2 + 2 cos(kπ/(n+1))
        let n = 9;
        let a = SymMatrix::from_fn(n, |i, j| match i - j {
            0 => 2.0,
            1 => 1.0,
            _ => 0.0,
        });
        let got = symmetric_eigenvalues(&a);
        let mut want: Vec<f64> = (1..=n)
            .map(|k| 2.0 + 2.0 * (k as f64 * std::f64::consts::PI / (n as f64 + 1.0)).cos())
            .collect();
        want.sort_by(|a, b| a.total_cmp(b));
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).abs() < 1e-13, "{g} vs {w}");
        }
    }
}
