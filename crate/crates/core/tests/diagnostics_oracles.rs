mod common;

use bandprec::{
    block_deviation, build_omega, correction_decay_report, correction_term, empirical_covariance,
    outside_band_norm, sample, spectral_norm, taper_apply, Error, ModelSpec, SymMatrix, WindowSpec,
};
use common::*;
use nalgebra::DMatrix;

/// `Ω_TO Ω_OO⁻¹ Ω_OT`, with `O` the complement of the window; independent of the
/// library's own inversion path.
fn schur_correction(omega: &SymMatrix, spec: &WindowSpec) -> SymMatrix {
    let p = omega.dim();
    let outside: Vec<usize> = (0..p).filter(|&i| i < spec.win_start || i >= spec.win_end).collect();
    let t = spec.target_len();
    if outside.is_empty() {
        return SymMatrix::zeros(t);
    }
    let o = outside.len();
    let to = DMatrix::from_fn(t, o, |a, b| omega.get(spec.tgt_start + a, outside[b]));
    let oo = DMatrix::from_fn(o, o, |a, b| omega.get(outside[a], outside[b]));
    let w = &to * oo.cholesky().expect("Ω_OO is SPD").solve(&to.transpose());
    SymMatrix::from_fn(t, |a, b| 0.5 * (w[(a, b)] + w[(b, a)]))
}

#[test]
fn correction_matches_schur_form() {
    let model = build_omega(ModelSpec::new(0.5, 200)).unwrap();
    for m in [4usize, 8, 16, 32] {
        let ls = [1 - m as isize, 0, 3, 2 * m as isize, 100, 199 - m as isize, 199];
        for l in ls {
            let spec = WindowSpec::new(l, m, 200);
            let got = correction_term(&model, l, m).unwrap();
            let want = schur_correction(&model.omega, &spec);
            let diff = got.max_abs_diff(&want);
            assert!(diff <= 1e-8, "m={m} l={l}: {diff:e}");
        }
    }
}

#[test]
fn correction_reconstructs_target_block() {
    let model = build_omega(ModelSpec::new(0.3, 60)).unwrap();
    let sigma = model.sigma();
    for (l, m) in [(20isize, 5usize), (-2, 4), (55, 8)] {
        let spec = WindowSpec::new(l, m, 60);
        let w = correction_term(&model, l, m).unwrap();
        let win_inv = na_inverse(&sigma.principal(spec.win_start, spec.win_end));
        let off = spec.target_offset();
        let t = spec.target_len();
        let recovered = SymMatrix::from_fn(t, |a, b| win_inv.get(off + a, off + b));
        let truth = model.omega.principal(spec.tgt_start, spec.tgt_end);
        assert!(recovered.add(&w).max_abs_diff(&truth) <= 1e-10);
    }
}

#[test]
fn correction_for_empty_target_is_an_error() {
    let model = build_omega(ModelSpec::new(0.5, 10)).unwrap();
    assert!(correction_term(&model, 10, 3).is_err());
    assert!(correction_term(&model, -3, 3).is_err());
}

#[test]
fn banded_truth_has_no_correction() {
    let omega = SymMatrix::from_fn(12, |i, j| match i - j {
        0 => 2.0,
        1 => -0.5,
        _ => 0.0,
    });
    let model = bandprec::PrecisionModel::from_omega(omega).unwrap();
    for l in 2..8 {
        assert!(spectral_norm(&correction_term(&model, l, 3).unwrap()) < 1e-12);
    }
}

#[test]
fn block_deviation_with_exact_sigma_is_max_correction() {
    let model = build_omega(ModelSpec::new(0.5, 40)).unwrap();
    let m = 6;
    let dev = block_deviation(&model.sigma(), &model.omega, m).unwrap();
    let want = WindowSpec::all(m, 40)
        .map(|spec| spectral_norm(&correction_term(&model, spec.l, m).unwrap()))
        .fold(0.0, f64::max);
    assert!((dev - want).abs() <= 1e-10, "{dev} vs {want}");
}

#[test]
fn block_deviation_sampled_dominates_bias() {
    let model = build_omega(ModelSpec::new(0.5, 50)).unwrap();
    let s = empirical_covariance(&sample(&model, 500, 4)).unwrap();
    let noisy = block_deviation(&s, &model.omega, 6).unwrap();
    let exact = block_deviation(&model.sigma(), &model.omega, 6).unwrap();
    assert!(noisy > exact);
    assert!(block_deviation(&s, &SymMatrix::identity(49), 6).is_err());
}

#[test]
fn correction_norms_decay_with_block_size() {
    let model = build_omega(ModelSpec::new(0.5, 256)).unwrap();
    let report = correction_decay_report(&model, &[4, 8, 16, 32]).unwrap();
    assert!(report.fitted_slope <= -0.5, "{report:?}");
    assert!(report.max_norms.windows(2).all(|w| w[1] < w[0]), "{report:?}");
    // slope agrees with an independent least-squares fit
    let xs: Vec<f64> = report.m_values.iter().map(|&m| (m as f64).ln()).collect();
    let ys: Vec<f64> = report.max_norms.iter().map(|v| v.ln()).collect();
    let (mx, my) = (xs.iter().sum::<f64>() / 4.0, ys.iter().sum::<f64>() / 4.0);
    let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    assert!((report.fitted_slope - num / den).abs() < 1e-12);
}

#[test]
fn decay_report_needs_room() {
    let model = build_omega(ModelSpec::new(0.5, 100)).unwrap();
    let err = correction_decay_report(&model, &[4, 32]).unwrap_err();
    assert!(matches!(err, Error::InsufficientRange { needed: 160, .. }));
}

#[test]
fn outside_band_chain() {
    for alpha in [0.3, 0.5] {
        let model = build_omega(ModelSpec::new(alpha, 100)).unwrap();
        let mut prev = f64::INFINITY;
        for k in [4, 8, 16] {
            let r = outside_band_norm(&model.omega, k);
            assert!(r.chain_holds(), "{r:?}");
            let outside = taper_apply(&model.omega, k).outside;
            let want = na_eigenvalues(&outside).into_iter().map(f64::abs).fold(0.0, f64::max);
            assert!((r.spec_norm - want).abs() <= 1e-9 * want.max(1.0));
            // brute-force half-band tail
            let tail = (0..100)
                .map(|j| {
                    (0..100usize)
                        .filter(|&i| 2 * i.abs_diff(j) > k)
                        .map(|i| model.omega.get(i, j).abs())
                        .sum::<f64>()
                })
                .fold(0.0, f64::max);
            assert!((r.half_band_tail - tail).abs() < 1e-12);
            assert!(r.half_band_tail < prev);
            prev = r.half_band_tail;
        }
    }
    let tri = SymMatrix::from_fn(10, |i, j| if i.abs_diff(j) <= 1 { 1.0 } else { 0.0 });
    let r = outside_band_norm(&tri, 2);
    assert_eq!((r.spec_norm, r.l1_norm, r.half_band_tail), (0.0, 0.0, 0.0));
}
