//! Design matrix storage and the two matrix-vector kernels.
//!
//! Both kernels stream the stored entries row by row exactly once, so their
//! cost is linear in the number of stored values.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{check_len, Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Storage {
    /// Row-major, `rows * cols` values.
    Dense(Vec<f64>),
    /// Compressed sparse row.
    Csr {
        offsets: Vec<usize>,
        indices: Vec<usize>,
        values: Vec<f64>,
    },
}

/// An `m x n` predictor matrix, dense or CSR. Immutable once built.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignMatrix {
    rows: usize,
    cols: usize,
    storage: Storage,
}

/// Borrowed view of one row.
#[derive(Debug, Clone, Copy)]
pub enum RowView<'a> {
    Dense(&'a [f64]),
    Sparse {
        indices: &'a [usize],
        values: &'a [f64],
    },
}

impl<'a> RowView<'a> {
    /// Iterates over `(column, value)` for every stored entry of the row.
    pub fn iter(self) -> impl Iterator<Item = (usize, f64)> + 'a {
        let (dense, sparse) = match self {
            RowView::Dense(vals) => (Some(vals.iter().copied().enumerate()), None),
            RowView::Sparse { indices, values } => (
                None,
                Some(indices.iter().copied().zip(values.iter().copied())),
            ),
        };
        dense
            .into_iter()
            .flatten()
            .chain(sparse.into_iter().flatten())
    }

    #[inline]
    fn dot(self, x: &[f64]) -> f64 {
        match self {
            RowView::Dense(vals) => vals.iter().zip(x).fold(0.0, |acc, (a, b)| acc + a * b),
            RowView::Sparse { indices, values } => indices
                .iter()
                .zip(values)
                .fold(0.0, |acc, (&j, a)| acc + a * x[j]),
        }
    }

    #[inline]
    fn axpy_into(self, scale: f64, out: &mut [f64]) {
        match self {
            RowView::Dense(vals) => {
                for (o, a) in out.iter_mut().zip(vals) {
                    *o += a * scale;
                }
            }
            RowView::Sparse { indices, values } => {
                for (&j, a) in indices.iter().zip(values) {
                    out[j] += a * scale;
                }
            }
        }
    }

    #[inline]
    fn squared_norm(self) -> f64 {
        let vals = match self {
            RowView::Dense(vals) => vals,
            RowView::Sparse { values, .. } => values,
        };
        vals.iter().fold(0.0, |acc, a| acc + a * a)
    }
}

fn check_finite(values: &[f64]) -> Result<()> {
    match values.iter().position(|v| !v.is_finite()) {
        None => Ok(()),
        Some(k) => Err(Error::InvalidMatrix(alloc::format!(
            "stored value #{k} is not finite ({})",
            values[k]
        ))),
    }
}

fn check_shape(rows: usize, cols: usize) -> Result<()> {
    if rows == 0 || cols == 0 {
        return Err(Error::InvalidMatrix(alloc::format!(
            "shape {rows}x{cols} must have at least one row and one column"
        )));
    }
    Ok(())
}

impl DesignMatrix {
    /// Builds a dense matrix from row-major values.
    pub fn dense(rows: usize, cols: usize, values: Vec<f64>) -> Result<Self> {
        check_shape(rows, cols)?;
        check_len("dense values", rows * cols, values.len())?;
        check_finite(&values)?;
        Ok(Self {
            rows,
            cols,
            storage: Storage::Dense(values),
        })
    }

    /// Builds a dense matrix from a slice of equally long rows.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, |r| r.as_ref().len());
        let mut values = Vec::with_capacity(m * n);
        for r in rows {
            check_len("row length", n, r.as_ref().len())?;
            values.extend_from_slice(r.as_ref());
        }
        Self::dense(m, n, values)
    }

    /// Builds a CSR matrix. Column indices within each row must be strictly
    /// increasing and smaller than `cols`.
    pub fn csr(
        rows: usize,
        cols: usize,
        offsets: Vec<usize>,
        indices: Vec<usize>,
        values: Vec<f64>,
    ) -> Result<Self> {
        check_shape(rows, cols)?;
        check_len("csr offsets", rows + 1, offsets.len())?;
        check_len("csr values", indices.len(), values.len())?;
        if offsets[0] != 0 {
            return Err(Error::InvalidMatrix("first offset must be 0".into()));
        }
        if offsets[rows] != indices.len() {
            return Err(Error::InvalidMatrix(alloc::format!(
                "final offset {} does not match nnz {}",
                offsets[rows],
                indices.len()
            )));
        }
        for (i, w) in offsets.windows(2).enumerate() {
            if w[0] > w[1] {
                return Err(Error::InvalidMatrix(alloc::format!(
                    "offsets decrease at row {i}"
                )));
            }
            let row = &indices[w[0]..w[1]];
            if row.windows(2).any(|p| p[0] >= p[1]) {
                return Err(Error::InvalidMatrix(alloc::format!(
                    "column indices of row {i} are not strictly increasing"
                )));
            }
            if let Some(&last) = row.last() {
                if last >= cols {
                    return Err(Error::InvalidMatrix(alloc::format!(
                        "column index {last} in row {i} exceeds {cols} columns"
                    )));
                }
            }
        }
        check_finite(&values)?;
        Ok(Self {
            rows,
            cols,
            storage: Storage::Csr {
                offsets,
                indices,
                values,
            },
        })
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    /// Number of stored entries.
    pub fn nnz(&self) -> usize {
        match &self.storage {
            Storage::Dense(v) => v.len(),
            Storage::Csr { values, .. } => values.len(),
        }
    }

    pub fn is_sparse(&self) -> bool {
        matches!(self.storage, Storage::Csr { .. })
    }

    #[inline]
    pub fn row(&self, i: usize) -> RowView<'_> {
        match &self.storage {
            Storage::Dense(v) => RowView::Dense(&v[i * self.cols..(i + 1) * self.cols]),
            Storage::Csr {
                offsets,
                indices,
                values,
            } => {
                let (lo, hi) = (offsets[i], offsets[i + 1]);
                RowView::Sparse {
                    indices: &indices[lo..hi],
                    values: &values[lo..hi],
                }
            }
        }
    }

    /// Same matrix in CSR storage; exact zeros of a dense matrix are dropped.
    pub fn to_csr(&self) -> Self {
        match &self.storage {
            Storage::Csr { .. } => self.clone(),
            Storage::Dense(_) => {
                let mut offsets = Vec::with_capacity(self.rows + 1);
                let mut indices = Vec::new();
                let mut values = Vec::new();
                offsets.push(0);
                for i in 0..self.rows {
                    for (j, a) in self.row(i).iter() {
                        if a != 0.0 {
                            indices.push(j);
                            values.push(a);
                        }
                    }
                    offsets.push(indices.len());
                }
                Self {
                    rows: self.rows,
                    cols: self.cols,
                    storage: Storage::Csr {
                        offsets,
                        indices,
                        values,
                    },
                }
            }
        }
    }

    /// Same matrix in dense row-major storage.
    pub fn to_dense(&self) -> Self {
        match &self.storage {
            Storage::Dense(_) => self.clone(),
            Storage::Csr { .. } => {
                let mut values = vec![0.0; self.rows * self.cols];
                for i in 0..self.rows {
                    for (j, a) in self.row(i).iter() {
                        values[i * self.cols + j] = a;
                    }
                }
                Self {
                    rows: self.rows,
                    cols: self.cols,
                    storage: Storage::Dense(values),
                }
            }
        }
    }

    /// `A theta`.
    pub fn mat_vec(&self, theta: &[f64]) -> Result<Vec<f64>> {
        check_len("mat_vec input", self.cols, theta.len())?;
        let mut out = vec![0.0; self.rows];
        self.mat_vec_into(theta, &mut out);
        Ok(out)
    }

    /// `A^T s`.
    pub fn mat_tvec(&self, s: &[f64]) -> Result<Vec<f64>> {
        check_len("mat_tvec input", self.rows, s.len())?;
        let mut out = vec![0.0; self.cols];
        self.mat_tvec_into(s, &mut out);
        Ok(out)
    }

    /// Writes `A theta` into `out`. Lengths are the caller's responsibility.
    pub(crate) fn mat_vec_into(&self, theta: &[f64], out: &mut [f64]) {
        debug_assert_eq!(theta.len(), self.cols);
        debug_assert_eq!(out.len(), self.rows);
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            // Each row is reduced sequentially, so the result does not depend
            // on how rows are distributed over threads.
            if self.nnz() >= PARALLEL_MIN_NNZ {
                out.par_iter_mut()
                    .enumerate()
                    .for_each(|(i, o)| *o = self.row(i).dot(theta));
                return;
            }
        }
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.row(i).dot(theta);
        }
    }

    /// Writes `A^T s` into `out`, overwriting it.
    pub(crate) fn mat_tvec_into(&self, s: &[f64], out: &mut [f64]) {
        debug_assert_eq!(s.len(), self.rows);
        debug_assert_eq!(out.len(), self.cols);
        out.fill(0.0);
        for (i, &si) in s.iter().enumerate() {
            if si != 0.0 {
                self.row(i).axpy_into(si, out);
            }
        }
    }

    /// Largest Euclidean row norm, i.e. the norm of `A` as a map from
    /// `(R^m, l1)` into `(R^n, l2)`. One pass over the stored entries.
    pub fn operator_norm(&self) -> f64 {
        let max_sq = (0..self.rows)
            .map(|i| self.row(i).squared_norm())
            .fold(0.0, f64::max);
        libm::sqrt(max_sq)
    }
}

#[cfg(feature = "parallel")]
const PARALLEL_MIN_NNZ: usize = 1 << 15;
