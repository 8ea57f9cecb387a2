//! Integer-valued sparse matrices in coordinate form.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// One nonzero entry, 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Entry {
    pub row: usize,
    pub col: usize,
    pub value: i32,
}

/// COO matrix with entries sorted by `(row, col)` and no duplicates or zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    nrows: usize,
    ncols: usize,
    entries: Vec<Entry>,
}

impl SparseMatrix {
    /// Builds from unsorted triples. Duplicate positions are summed and zeros dropped.
    pub fn from_triplets(nrows: usize, ncols: usize, triplets: impl IntoIterator<Item = Entry>) -> Result<Self> {
        let mut entries: Vec<Entry> = triplets.into_iter().collect();
        for e in &entries {
            if e.row >= nrows || e.col >= ncols {
                return Err(Error::ShapeMismatch {
                    expected_rows: nrows,
                    expected_cols: ncols,
                    rows: e.row + 1,
                    cols: e.col + 1,
                });
            }
        }
        entries.sort_unstable_by_key(|e| (e.row, e.col));
        let mut merged: Vec<Entry> = Vec::with_capacity(entries.len());
        for e in entries {
            match merged.last_mut() {
                Some(last) if last.row == e.row && last.col == e.col => last.value += e.value,
                _ => merged.push(e),
            }
        }
        merged.retain(|e| e.value != 0);
        Ok(Self {
            nrows,
            ncols,
            entries: merged,
        })
    }

    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self {
            nrows,
            ncols,
            entries: Vec::new(),
        }
    }

    /// The matrix unit with a single 1 at `(row, col)`.
    pub fn unit(nrows: usize, ncols: usize, row: usize, col: usize) -> Self {
        assert!(row < nrows && col < ncols);
        Self {
            nrows,
            ncols,
            entries: vec![Entry { row, col, value: 1 }],
        }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.nrows, self.ncols)
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, row: usize, col: usize) -> i32 {
        self.entries
            .binary_search_by_key(&(row, col), |e| (e.row, e.col))
            .map_or(0, |i| self.entries[i].value)
    }

    pub fn transpose(&self) -> Self {
        let mut entries: Vec<Entry> = self
            .entries
            .iter()
            .map(|e| Entry {
                row: e.col,
                col: e.row,
                value: e.value,
            })
            .collect();
        entries.sort_unstable_by_key(|e| (e.row, e.col));
        Self {
            nrows: self.ncols,
            ncols: self.nrows,
            entries,
        }
    }

    /// Kronecker product with `self` as the outer (major) factor.
    pub fn kron(&self, other: &Self) -> Self {
        let mut entries = Vec::with_capacity(self.nnz() * other.nnz());
        for a in &self.entries {
            for b in &other.entries {
                entries.push(Entry {
                    row: a.row * other.nrows + b.row,
                    col: a.col * other.ncols + b.col,
                    value: a.value * b.value,
                });
            }
        }
        entries.sort_unstable_by_key(|e| (e.row, e.col));
        Self {
            nrows: self.nrows * other.nrows,
            ncols: self.ncols * other.ncols,
            entries,
        }
    }

    pub fn to_dense(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.nrows, self.ncols);
        for e in &self.entries {
            m[(e.row, e.col)] = e.value as f64;
        }
        m
    }

    /// Dense row-major integer copy; test and golden-value helper.
    pub fn to_dense_i32(&self) -> Vec<Vec<i32>> {
        let mut m = vec![vec![0; self.ncols]; self.nrows];
        for e in &self.entries {
            m[e.row][e.col] = e.value;
        }
        m
    }

    /// Adds `scale * self` into a dense accumulator of the same shape.
    pub fn add_scaled_to(&self, scale: f64, acc: &mut DMatrix<f64>) {
        debug_assert_eq!(acc.shape(), self.shape());
        for e in &self.entries {
            acc[(e.row, e.col)] += scale * e.value as f64;
        }
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        let mut best = 0i64;
        let mut current = 0i64;
        let mut row = usize::MAX;
        for e in &self.entries {
            if e.row != row {
                best = best.max(current);
                current = 0;
                row = e.row;
            }
            current += e.value.unsigned_abs() as i64;
        }
        best.max(current) as f64
    }
}

/// A matrix that can be applied to a vector.
pub trait LinearOperator {
    fn nrows(&self) -> usize;
    fn ncols(&self) -> usize;
    fn apply(&self, x: &[f64]) -> Vec<f64>;
    /// Maximum absolute row sum.
    fn norm_inf(&self) -> f64;
}

impl LinearOperator for SparseMatrix {
    fn nrows(&self) -> usize {
        self.nrows
    }

    fn ncols(&self) -> usize {
        self.ncols
    }

    fn apply(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.ncols);
        let mut y = vec![0.0; self.nrows];
        for e in &self.entries {
            y[e.row] += e.value as f64 * x[e.col];
        }
        y
    }

    fn norm_inf(&self) -> f64 {
        SparseMatrix::norm_inf(self)
    }
}

impl LinearOperator for DMatrix<f64> {
    fn nrows(&self) -> usize {
        self.nrows()
    }

    fn ncols(&self) -> usize {
        self.ncols()
    }

    fn apply(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.ncols());
        (0..self.nrows())
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    fn norm_inf(&self) -> f64 {
        self.row_iter()
            .map(|r| r.iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }
}
