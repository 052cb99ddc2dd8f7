use std::fmt;

use crate::error::{Error, Result};

/// Dense symmetric matrix stored row-major.
///
/// Every constructor and mutator writes both `(i, j)` and `(j, i)`, so the
/// stored entries are bit-identical across the diagonal.
#[derive(Clone, PartialEq)]
pub struct SymMatrix {
    p: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(p: usize) -> Self {
        assert!(p >= 1, "SymMatrix dimension must be positive");
        SymMatrix {
            p,
            data: vec![0.0; p * p],
        }
    }

    pub fn identity(p: usize) -> Self {
        Self::from_diag(&vec![1.0; p])
    }

    pub fn from_diag(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * m.p + i] = d;
        }
        m
    }

    /// Builds a matrix from `f(i, j)` evaluated on the lower triangle (`i >= j`).
    pub fn from_fn(p: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(p);
        for i in 0..p {
            for j in 0..=i {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Full row-major data; fails unless the input is exactly symmetric.
    pub fn from_row_major(p: usize, data: Vec<f64>) -> Result<Self> {
        if p == 0 {
            return Err(Error::Dimension("dimension must be positive".into()));
        }
        if data.len() != p * p {
            return Err(Error::Dimension(format!(
                "expected {} entries for a {p}x{p} matrix, got {}",
                p * p,
                data.len()
            )));
        }
        for i in 0..p {
            for j in 0..i {
                if data[i * p + j] != data[j * p + i] {
                    return Err(Error::NotSymmetric { row: i, col: j });
                }
            }
        }
        Ok(SymMatrix { p, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let p = rows.len();
        let mut data = Vec::with_capacity(p * p);
        for row in rows {
            if row.len() != p {
                return Err(Error::Dimension(format!(
                    "row of length {} in a {p}-row matrix",
                    row.len()
                )));
            }
            data.extend_from_slice(row);
        }
        Self::from_row_major(p, data)
    }

    /// Packed lower triangle, row by row: `(0,0), (1,0), (1,1), (2,0), ...`.
    pub fn from_lower(p: usize, lower: &[f64]) -> Result<Self> {
        if p == 0 || lower.len() != p * (p + 1) / 2 {
            return Err(Error::Dimension(format!(
                "packed lower triangle of length {} does not match p = {p}",
                lower.len()
            )));
        }
        let mut it = lower.iter();
        Ok(Self::from_fn(p, |_, _| *it.next().unwrap()))
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.p
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.p + j]
    }

    /// Writes `v` at `(i, j)` and `(j, i)`.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.p + j] = v;
        self.data[j * self.p + i] = v;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.p..(i + 1) * self.p]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn diag(&self) -> Vec<f64> {
        (0..self.p).map(|i| self.get(i, i)).collect()
    }

    pub fn max_diag(&self) -> f64 {
        self.diag().into_iter().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Principal submatrix on the half-open index range `[start, end)`.
    pub fn principal(&self, start: usize, end: usize) -> SymMatrix {
        assert!(start < end && end <= self.p, "bad principal range");
        let q = end - start;
        let mut data = Vec::with_capacity(q * q);
        for i in start..end {
            data.extend_from_slice(&self.row(i)[start..end]);
        }
        SymMatrix { p: q, data }
    }

    /// Adds `block` into the principal range starting at `start`.
    pub fn add_principal(&mut self, start: usize, block: &SymMatrix) {
        self.axpy_principal(start, 1.0, block);
    }

    /// `self[start.., start..] += scale * block`.
    pub fn axpy_principal(&mut self, start: usize, scale: f64, block: &SymMatrix) {
        let q = block.p;
        assert!(start + q <= self.p, "block does not fit");
        for i in 0..q {
            for j in 0..=i {
                let v = self.get(start + i, start + j) + scale * block.get(i, j);
                self.set(start + i, start + j, v);
            }
        }
    }

    pub fn scale(&self, s: f64) -> SymMatrix {
        self.map(|x| x * s)
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> SymMatrix {
        SymMatrix {
            p: self.p,
            data: self.data.iter().map(|&x| f(x)).collect(),
        }
    }

    pub fn sub(&self, other: &SymMatrix) -> SymMatrix {
        self.zip(other, |a, b| a - b)
    }

    pub fn add(&self, other: &SymMatrix) -> SymMatrix {
        self.zip(other, |a, b| a + b)
    }

    fn zip(&self, other: &SymMatrix, f: impl Fn(f64, f64) -> f64) -> SymMatrix {
        assert_eq!(self.p, other.p, "dimension mismatch");
        SymMatrix {
            p: self.p,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.p);
        (0..self.p).map(|i| dot(self.row(i), x)).collect()
    }

    /// Plain (non-symmetric in general) product `self * other`, row-major.
    pub fn matmul(&self, other: &SymMatrix) -> Vec<f64> {
        assert_eq!(self.p, other.p);
        let p = self.p;
        let mut out = vec![0.0; p * p];
        for i in 0..p {
            for k in 0..p {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                let orow = other.row(k);
                let dst = &mut out[i * p..(i + 1) * p];
                for (d, &b) in dst.iter_mut().zip(orow) {
                    *d += a * b;
                }
            }
        }
        out
    }

    pub fn max_abs_diff(&self, other: &SymMatrix) -> f64 {
        assert_eq!(self.p, other.p);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.p).all(|i| (0..i).all(|j| self.get(i, j) == 0.0))
    }
}

impl fmt::Debug for SymMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "SymMatrix({}x{})", self.p, self.p)?;
        for i in 0..self.p {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        Ok(())
    }
}

/// Dense `rows x cols` matrix, row-major. Holds observation data (one row per sample).
#[derive(Debug, Clone, PartialEq)]
pub struct DataMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DataMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DataMatrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn from_row_major(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "expected {} entries for {rows}x{cols}, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(DataMatrix { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[f64]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}
