//! Blockwise inversion estimator for banded precision matrices.
//!
//! For a block size `m` and every offset `l ∈ {1−m, …, p−1}` the estimator
//! inverts the (clipped) window `[l−m, l+2m)` of the covariance estimate and
//! keeps the central block `[l, l+m)`. Summing these central blocks for
//! `m = k` and subtracting the sum for `m = ⌊k/2⌋` yields a matrix whose
//! entries carry linear taper weights; dividing by `k − ⌊k/2⌋` normalizes the
//! near-diagonal weight to one.
//!
//! Indices are zero-based and ranges half-open throughout.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::matrix::{
    inverse_append_trailing, inverse_delete_leading, invert_spd, SymMatrix,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Mode {
    /// Invert every window from scratch: `O(p k³)`.
    Naive,
    /// Slide a running window inverse with rank-1 updates: `O(p k²)`.
    #[default]
    Fast,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Naive => "naive",
            Mode::Fast => "fast",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "naive" => Ok(Mode::Naive),
            "fast" => Ok(Mode::Fast),
            other => Err(Error::Parameter(format!(
                "unknown mode `{other}` (expected naive or fast)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimatorConfig {
    /// Bandwidth; output entries with `|i − j| ≥ k` are zero.
    pub k: usize,
    pub mode: Mode,
    /// Added to each window's diagonal before inversion. Zero unless explicitly requested.
    pub ridge: f64,
}

impl EstimatorConfig {
    pub fn new(k: usize) -> Self {
        EstimatorConfig {
            k,
            mode: Mode::default(),
            ridge: 0.0,
        }
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_ridge(mut self, ridge: f64) -> Self {
        self.ridge = ridge;
        self
    }

    fn validate(&self, p: usize) -> Result<()> {
        if self.k < 2 || self.k > p {
            return Err(Error::Parameter(format!(
                "bandwidth k = {} must satisfy 2 <= k <= p = {p}",
                self.k
            )));
        }
        if !(self.ridge >= 0.0) || !self.ridge.is_finite() {
            return Err(Error::Parameter(format!(
                "ridge must be finite and nonnegative, got {}",
                self.ridge
            )));
        }
        Ok(())
    }
}

/// Window and target index ranges for block size `m` at offset `l`, clipped to `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WindowSpec {
    pub l: isize,
    pub m: usize,
    pub win_start: usize,
    pub win_end: usize,
    pub tgt_start: usize,
    pub tgt_end: usize,
}

fn clip(x: isize, p: usize) -> usize {
    x.clamp(0, p as isize) as usize
}

impl WindowSpec {
    pub fn new(l: isize, m: usize, p: usize) -> Self {
        let mi = m as isize;
        let win_start = clip(l - mi, p);
        let win_end = clip(l + 2 * mi, p).max(win_start);
        let tgt_start = clip(l, p).max(win_start);
        let tgt_end = clip(l + mi, p).clamp(tgt_start, win_end.max(tgt_start));
        WindowSpec {
            l,
            m,
            win_start,
            win_end,
            tgt_start,
            tgt_end,
        }
    }

    /// Every offset `l ∈ {1−m, …, p−1}`, in increasing order.
    pub fn all(m: usize, p: usize) -> impl Iterator<Item = WindowSpec> {
        (1 - m as isize..p as isize).map(move |l| WindowSpec::new(l, m, p))
    }

    pub fn window_len(&self) -> usize {
        self.win_end - self.win_start
    }

    pub fn target_len(&self) -> usize {
        self.tgt_end - self.tgt_start
    }

    /// Position of the target block inside the window.
    pub fn target_offset(&self) -> usize {
        self.tgt_start - self.win_start
    }

    pub fn is_empty(&self) -> bool {
        self.target_len() == 0
    }

    fn singular(&self) -> Error {
        Error::SingularWindow {
            m: self.m,
            l: self.l,
            win_start: self.win_start,
            win_end: self.win_end,
        }
    }
}

/// Weight the estimator applies at distance `d` from the diagonal for bandwidth `k`:
/// `[(k−d)₊ − (⌊k/2⌋−d)₊] / (k − ⌊k/2⌋)`.
///
/// One for `d < ⌊k/2⌋`, linear down to zero at `d = k`.
pub fn taper_weight(d: usize, k: usize) -> f64 {
    assert!(k >= 2, "bandwidth must be at least 2");
    let half = k / 2;
    let full = k.saturating_sub(d) as f64;
    let inner = half.saturating_sub(d) as f64;
    (full - inner) / (k - half) as f64
}

/// `⌊n^(1/(2α+1))⌋`, at least 2. Callers clamp to `p`.
pub fn default_bandwidth(n: usize, alpha: f64) -> usize {
    assert!(n >= 1 && alpha > 0.0, "need n >= 1 and alpha > 0");
    let x = (n as f64).powf(1.0 / (2.0 * alpha + 1.0));
    let r = x.round();
    // exact powers such as 125^(1/3) can land one ulp below the integer
    let k = if (x - r).abs() < 1e-9 * r.max(1.0) { r } else { x.floor() };
    (k as usize).max(2)
}

/// Inverts the clipped window for `(m, l)` and returns the target block of the inverse.
/// `None` when the target range is empty.
pub fn block_inverse(
    sigma_hat: &SymMatrix,
    m: usize,
    l: isize,
    ridge: f64,
) -> Result<(WindowSpec, Option<SymMatrix>)> {
    let spec = WindowSpec::new(l, m, sigma_hat.dim());
    if spec.is_empty() {
        return Ok((spec, None));
    }
    let inv = invert_window(sigma_hat, &spec, ridge)?;
    let off = spec.target_offset();
    Ok((spec, Some(inv.principal(off, off + spec.target_len()))))
}

fn window_matrix(sigma_hat: &SymMatrix, spec: &WindowSpec, ridge: f64) -> SymMatrix {
    let mut w = sigma_hat.principal(spec.win_start, spec.win_end);
    if ridge > 0.0 {
        for i in 0..w.dim() {
            w.set(i, i, w.get(i, i) + ridge);
        }
    }
    w
}

fn invert_window(sigma_hat: &SymMatrix, spec: &WindowSpec, ridge: f64) -> Result<SymMatrix> {
    let w = window_matrix(sigma_hat, spec, ridge);
    invert_spd(&w).map_err(|_| spec.singular())
}

/// Sum of all target blocks of window inverses for block size `m`, placed at their
/// global indices.
pub fn blockwise_sum(sigma_hat: &SymMatrix, m: usize, mode: Mode, ridge: f64) -> Result<SymMatrix> {
    if m == 0 {
        return Err(Error::Parameter("block size must be positive".into()));
    }
    match mode {
        Mode::Naive => blockwise_sum_naive(sigma_hat, m, ridge),
        Mode::Fast => blockwise_sum_fast(sigma_hat, m, ridge),
    }
}

fn blockwise_sum_naive(sigma_hat: &SymMatrix, m: usize, ridge: f64) -> Result<SymMatrix> {
    let p = sigma_hat.dim();
    let mut acc = SymMatrix::zeros(p);
    for spec in WindowSpec::all(m, p) {
        let inv = invert_window(sigma_hat, &spec, ridge)?;
        add_target(&mut acc, &inv, &spec);
    }
    Ok(acc)
}

fn blockwise_sum_fast(sigma_hat: &SymMatrix, m: usize, ridge: f64) -> Result<SymMatrix> {
    let p = sigma_hat.dim();
    let mut acc = SymMatrix::zeros(p);
    let mut windows = WindowSpec::all(m, p);
    let Some(first) = windows.next() else {
        return Ok(acc);
    };
    let mut inv = invert_window(sigma_hat, &first, ridge)?;
    add_target(&mut acc, &inv, &first);
    let mut prev = first;
    for spec in windows {
        inv = match slide(sigma_hat, &inv, &prev, &spec, ridge) {
            Ok(next) => next,
            Err(Error::DegenerateUpdate { .. }) => invert_window(sigma_hat, &spec, ridge)?,
            Err(e) => return Err(e),
        };
        add_target(&mut acc, &inv, &spec);
        prev = spec;
    }
    Ok(acc)
}

/// Moves the running inverse from window `prev` to window `next`. Each end of the
/// window advances by at most one index per step; appending happens first so the
/// inverse never drops to zero size.
fn slide(
    sigma_hat: &SymMatrix,
    inv: &SymMatrix,
    prev: &WindowSpec,
    next: &WindowSpec,
    ridge: f64,
) -> Result<SymMatrix> {
    debug_assert!(next.win_end - prev.win_end <= 1 && next.win_start - prev.win_start <= 1);
    let mut cur = None;
    if next.win_end > prev.win_end {
        let j = prev.win_end;
        let border = &sigma_hat.row(j)[prev.win_start..prev.win_end];
        cur = Some(inverse_append_trailing(
            inv,
            border,
            sigma_hat.get(j, j) + ridge,
        )?);
    }
    if next.win_start > prev.win_start {
        cur = Some(inverse_delete_leading(cur.as_ref().unwrap_or(inv))?);
    }
    Ok(cur.unwrap_or_else(|| inv.clone()))
}

fn add_target(acc: &mut SymMatrix, window_inv: &SymMatrix, spec: &WindowSpec) {
    let off = spec.target_offset();
    for i in 0..spec.target_len() {
        for j in 0..=i {
            let gi = spec.tgt_start + i;
            let gj = spec.tgt_start + j;
            acc.set(gi, gj, acc.get(gi, gj) + window_inv.get(off + i, off + j));
        }
    }
}

/// `(big − small) / (k − ⌊k/2⌋)`: the taper combination of the block sums for
/// `m = k` and `m = ⌊k/2⌋`.
pub fn taper_combine(big: &SymMatrix, small: &SymMatrix, k: usize) -> SymMatrix {
    let norm = (k - k / 2) as f64;
    big.sub(small).map(|x| x / norm)
}

/// The tapered blockwise-inversion estimate of the precision matrix.
pub fn estimate(sigma_hat: &SymMatrix, config: &EstimatorConfig) -> Result<SymMatrix> {
    config.validate(sigma_hat.dim())?;
    let k = config.k;
    let (big, small) = rayon::join(
        || blockwise_sum(sigma_hat, k, config.mode, config.ridge),
        || blockwise_sum(sigma_hat, k / 2, config.mode, config.ridge),
    );
    Ok(taper_combine(&big?, &small?, k))
}

#[derive(Debug, Clone, PartialEq)]
pub struct TaperSplit {
    /// `ω_ij · v_ij`
    pub inside: SymMatrix,
    /// `ω_ij · (1 − v_ij)`
    pub outside: SymMatrix,
}

pub fn taper_apply(omega: &SymMatrix, k: usize) -> TaperSplit {
    let inside = SymMatrix::from_fn(omega.dim(), |i, j| omega.get(i, j) * taper_weight(i - j, k));
    let outside = omega.sub(&inside);
    TaperSplit { inside, outside }
}
