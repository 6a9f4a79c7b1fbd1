//! Compressed sparse row matrices with full (both triangles) symmetric storage.

use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    n: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

/// Collects `(row, col, value)` contributions; duplicates are summed in
/// insertion order so assembly is deterministic.
#[derive(Debug, Clone, Default)]
pub struct TripletBuilder {
    n: usize,
    entries: Vec<(usize, usize, f64)>,
}

impl TripletBuilder {
    pub fn new(n: usize) -> Self {
        TripletBuilder { n, entries: Vec::new() }
    }

    pub fn with_capacity(n: usize, cap: usize) -> Self {
        TripletBuilder { n, entries: Vec::with_capacity(cap) }
    }

    pub fn push(&mut self, row: usize, col: usize, value: f64) {
        debug_assert!(row < self.n && col < self.n);
        self.entries.push((row, col, value));
    }

    pub fn build(mut self) -> CsrMatrix {
        // Stable sort keeps the per-entry summation order fixed.
        self.entries.sort_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = vec![0usize; self.n + 1];
        let mut col_idx = Vec::with_capacity(self.entries.len());
        let mut values: Vec<f64> = Vec::with_capacity(self.entries.len());
        let mut last: Option<(usize, usize)> = None;
        for (r, c, v) in self.entries {
            if last == Some((r, c)) {
                *values.last_mut().unwrap() += v;
            } else {
                col_idx.push(c);
                values.push(v);
                row_ptr[r + 1] += 1;
                last = Some((r, c));
            }
        }
        for i in 0..self.n {
            row_ptr[i + 1] += row_ptr[i];
        }
        CsrMatrix { n: self.n, row_ptr, col_idx, values }
    }
}

impl CsrMatrix {
    pub fn zeros(n: usize) -> Self {
        CsrMatrix { n, row_ptr: vec![0; n + 1], col_idx: Vec::new(), values: Vec::new() }
    }

    pub fn identity(n: usize) -> Self {
        CsrMatrix {
            n,
            row_ptr: (0..=n).collect(),
            col_idx: (0..n).collect(),
            values: vec![1.0; n],
        }
    }

    /// Tridiagonal matrix from its diagonal and off-diagonal.
    pub fn tridiagonal(diag: &[f64], off: &[f64]) -> Self {
        let n = diag.len();
        let mut b = TripletBuilder::with_capacity(n, 3 * n);
        for i in 0..n {
            if i > 0 {
                b.push(i, i - 1, off[i - 1]);
            }
            b.push(i, i, diag[i]);
            if i + 1 < n {
                b.push(i, i + 1, off[i]);
            }
        }
        b.build()
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let range = self.row_ptr[i]..self.row_ptr[i + 1];
        self.col_idx[range.clone()].iter().copied().zip(self.values[range].iter().copied())
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let range = self.row_ptr[i]..self.row_ptr[i + 1];
        match self.col_idx[range.clone()].binary_search(&j) {
            Ok(k) => self.values[range.start + k],
            Err(_) => 0.0,
        }
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    pub fn mul_vec_into(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate().take(self.n) {
            let mut s = 0.0;
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                s += self.values[k] * x[self.col_idx[k]];
            }
            *yi = s;
        }
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        self.mul_vec_into(x, &mut y);
        y
    }

    /// `xᵀ A y`.
    pub fn form(&self, x: &[f64], y: &[f64]) -> f64 {
        (0..self.n)
            .map(|i| x[i] * self.row(i).map(|(j, v)| v * y[j]).sum::<f64>())
            .sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Infinity norm: largest absolute row sum.
    pub fn max_row_sum(&self) -> f64 {
        (0..self.n).map(|i| self.row(i).map(|(_, v)| v.abs()).sum::<f64>()).fold(0.0, f64::max)
    }

    /// `max |a_ij − a_ji|`.
    pub fn asymmetry(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..self.n {
            for (j, v) in self.row(i) {
                worst = worst.max((v - self.get(j, i)).abs());
            }
        }
        worst
    }

    pub fn scaled(&self, s: f64) -> CsrMatrix {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v *= s);
        out
    }

    /// `self + s * other`.
    pub fn add_scaled(&self, other: &CsrMatrix, s: f64) -> Result<CsrMatrix> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: other.n });
        }
        let mut b = TripletBuilder::with_capacity(self.n, self.nnz() + other.nnz());
        for i in 0..self.n {
            for (j, v) in self.row(i) {
                b.push(i, j, v);
            }
            for (j, v) in other.row(i) {
                b.push(i, j, s * v);
            }
        }
        Ok(b.build())
    }

    /// Principal submatrix on the rows/columns where `keep[i]` is `Some(new_index)`.
    pub fn principal_submatrix(&self, keep: &[Option<usize>], new_n: usize) -> CsrMatrix {
        let mut b = TripletBuilder::with_capacity(new_n, self.nnz());
        for i in 0..self.n {
            if let Some(ni) = keep[i] {
                for (j, v) in self.row(i) {
                    if let Some(nj) = keep[j] {
                        b.push(ni, nj, v);
                    }
                }
            }
        }
        b.build()
    }

    /// `P A Pᵀ` where `perm[new] = old`.
    pub fn permuted(&self, perm: &[usize]) -> CsrMatrix {
        let mut inv = vec![0usize; self.n];
        for (new, &old) in perm.iter().enumerate() {
            inv[old] = new;
        }
        let mut b = TripletBuilder::with_capacity(self.n, self.nnz());
        for (new_i, &old_i) in perm.iter().enumerate() {
            for (j, v) in self.row(old_i) {
                b.push(new_i, inv[j], v);
            }
        }
        b.build()
    }

    /// Sparsity graph adjacency without the diagonal.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        (0..self.n)
            .map(|i| self.row(i).map(|(j, _)| j).filter(|&j| j != i).collect())
            .collect()
    }

    /// Row-major dense copy (small matrices only).
    pub fn to_dense(&self) -> Vec<f64> {
        let mut d = vec![0.0; self.n * self.n];
        for i in 0..self.n {
            for (j, v) in self.row(i) {
                d[i * self.n + j] = v;
            }
        }
        d
    }

    /// Sorted `(row, col, value)` triplets of the stored entries.
    pub fn triplets(&self) -> Vec<(usize, usize, f64)> {
        (0..self.n).flat_map(|i| self.row(i).map(move |(j, v)| (i, j, v))).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builder_sums_duplicates() {
        let mut b = TripletBuilder::new(3);
        b.push(0, 0, 1.0);
        b.push(2, 1, 4.0);
        b.push(0, 0, 2.0);
        b.push(1, 2, 4.0);
        let m = b.build();
        assert_eq!(m.nnz(), 3);
        assert_eq!(m.get(0, 0), 3.0);
        assert_eq!(m.get(1, 1), 0.0);
        assert_eq!(m.asymmetry(), 0.0);
        assert_eq!(m.mul_vec(&[1.0, 1.0, 1.0]), vec![3.0, 4.0, 4.0]);
        assert_eq!(m.form(&[1.0, 1.0, 1.0], &[1.0, 1.0, 1.0]), 11.0);
    }

    #[test]
    fn permutation_and_submatrix() {
        let m = CsrMatrix::tridiagonal(&[2.0, 3.0, 4.0], &[-1.0, -0.5]);
        let p = m.permuted(&[2, 0, 1]);
        assert_eq!(p.get(0, 0), 4.0);
        assert_eq!(p.get(0, 2), -0.5);
        let s = m.principal_submatrix(&[None, Some(0), Some(1)], 2);
        assert_eq!(s.to_dense(), vec![3.0, -0.5, -0.5, 4.0]);
        let sum = m.add_scaled(&CsrMatrix::identity(3), 2.0).unwrap();
        assert_eq!(sum.diagonal(), vec![4.0, 5.0, 6.0]);
    }
}
