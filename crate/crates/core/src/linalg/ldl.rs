//! Envelope (skyline) LDLᵀ factorization of symmetric positive definite
//! sparse matrices, with reverse Cuthill-McKee reordering.

use alloc::vec;
use alloc::vec::Vec;

use super::ordering::reverse_cuthill_mckee;
use crate::sparse::CsrMatrix;
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct EnvelopeLdl {
    /// `perm[new] = old`.
    perm: Vec<usize>,
    /// First stored column of each (permuted) row.
    first: Vec<usize>,
    /// Offset of each row's strictly-lower envelope in `lower`.
    offset: Vec<usize>,
    lower: Vec<f64>,
    diag: Vec<f64>,
}

impl EnvelopeLdl {
    /// Factors `a`. Fails with the (original) index of the first pivot that
    /// is not positive, so a successful factorization certifies definiteness.
    pub fn factor(a: &CsrMatrix) -> Result<Self> {
        let n = a.dim();
        let perm = reverse_cuthill_mckee(&a.adjacency());
        let b = a.permuted(&perm);
        let mut first = vec![0usize; n];
        let mut offset = vec![0usize; n + 1];
        for i in 0..n {
            first[i] = b.row(i).map(|(j, _)| j).filter(|&j| j <= i).min().unwrap_or(i);
            offset[i + 1] = offset[i] + (i - first[i]);
        }
        let mut lower = vec![0.0; offset[n]];
        let mut diag = vec![0.0; n];
        for i in 0..n {
            for (j, v) in b.row(i) {
                if j < i {
                    lower[offset[i] + j - first[i]] = v;
                } else if j == i {
                    diag[i] = v;
                }
            }
        }
        for i in 0..n {
            let fi = first[i];
            let (done, rest) = lower.split_at_mut(offset[i]);
            let row_i = &mut rest[..i - fi];
            // row_i[j - fi] becomes g_ij = l_ij d_j, computed left to right.
            for j in fi..i {
                let fj = first[j];
                let k0 = fi.max(fj);
                if k0 < j {
                    let row_j = &done[offset[j] + k0 - fj..offset[j] + j - fj];
                    let gi = &row_i[k0 - fi..j - fi];
                    let s: f64 = gi.iter().zip(row_j).map(|(g, l)| g * l).sum();
                    row_i[j - fi] -= s;
                }
            }
            let mut d = diag[i];
            for (k, g) in row_i.iter_mut().enumerate() {
                let l = *g / diag[fi + k];
                d -= *g * l;
                *g = l;
            }
            if !(d > 0.0) || !d.is_finite() {
                return Err(Error::Factorization { index: perm[i], value: d });
            }
            diag[i] = d;
        }
        Ok(EnvelopeLdl { perm, first, offset, lower, diag })
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// Stored strictly-lower entries.
    pub fn envelope_len(&self) -> usize {
        self.lower.len()
    }

    /// Pivots `d_i` in factorization order.
    pub fn pivots(&self) -> &[f64] {
        &self.diag
    }

    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let mut y: Vec<f64> = self.perm.iter().map(|&old| rhs[old]).collect();
        self.solve_permuted_in_place(&mut y);
        let mut out = vec![0.0; y.len()];
        for (new, &old) in self.perm.iter().enumerate() {
            out[old] = y[new];
        }
        out
    }

    fn solve_permuted_in_place(&self, y: &mut [f64]) {
        let n = y.len();
        for i in 0..n {
            let fi = self.first[i];
            let row = &self.lower[self.offset[i]..self.offset[i + 1]];
            let s: f64 = row.iter().zip(&y[fi..i]).map(|(l, v)| l * v).sum();
            y[i] -= s;
        }
        for (yi, d) in y.iter_mut().zip(&self.diag) {
            *yi /= d;
        }
        for i in (0..n).rev() {
            let fi = self.first[i];
            let yi = y[i];
            let row = &self.lower[self.offset[i]..self.offset[i + 1]];
            for (l, v) in row.iter().zip(&mut y[fi..i]) {
                *v -= l * yi;
            }
        }
    }
}
