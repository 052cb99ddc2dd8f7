#![allow(dead_code)]

use bandprec::SymMatrix;
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random symmetric matrix with entries uniform in [-1, 1].
pub fn random_symmetric(p: usize, rng: &mut ChaCha8Rng) -> SymMatrix {
    SymMatrix::from_fn(p, |_, _| rng.gen_range(-1.0..1.0))
}

/// `GᵀG / p + shift·I` with Gaussian-ish G; condition number stays moderate.
pub fn random_spd(p: usize, shift: f64, rng: &mut ChaCha8Rng) -> SymMatrix {
    let g: Vec<f64> = (0..p * p).map(|_| rng.gen_range(-1.0..1.0)).collect();
    SymMatrix::from_fn(p, |i, j| {
        let s: f64 = (0..p).map(|r| g[r * p + i] * g[r * p + j]).sum();
        s / p as f64 + if i == j { shift } else { 0.0 }
    })
}

pub fn to_na(a: &SymMatrix) -> DMatrix<f64> {
    let p = a.dim();
    DMatrix::from_fn(p, p, |i, j| a.get(i, j))
}

pub fn na_eigenvalues(a: &SymMatrix) -> Vec<f64> {
    let mut v: Vec<f64> = to_na(a).symmetric_eigen().eigenvalues.iter().copied().collect();
    v.sort_by(|x, y| x.total_cmp(y));
    v
}

pub fn na_inverse(a: &SymMatrix) -> SymMatrix {
    let inv = to_na(a).try_inverse().expect("oracle inverse");
    let p = a.dim();
    SymMatrix::from_fn(p, |i, j| 0.5 * (inv[(i, j)] + inv[(j, i)]))
}

pub fn condition(a: &SymMatrix) -> f64 {
    let e = na_eigenvalues(a);
    e[e.len() - 1].abs() / e[0].abs()
}

pub fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

pub fn assert_exactly_symmetric(a: &SymMatrix) {
    for i in 0..a.dim() {
        for j in 0..i {
            assert_eq!(a.get(i, j).to_bits(), a.get(j, i).to_bits(), "asymmetry at ({i},{j})");
        }
    }
}
