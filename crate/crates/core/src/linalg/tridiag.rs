//! Symmetric tridiagonal eigenproblems: Sturm-sequence bisection for the
//! eigenvalues and inverse iteration for the eigenvectors.

use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    pub diag: Vec<f64>,
    /// `off[i]` couples rows `i` and `i + 1`.
    pub off: Vec<f64>,
}

impl SymTridiagonal {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Result<Self> {
        if diag.is_empty() || off.len() + 1 != diag.len() {
            return Err(Error::DimensionMismatch { expected: diag.len().saturating_sub(1), got: off.len() });
        }
        Ok(SymTridiagonal { diag, off })
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// Number of eigenvalues strictly below `x`.
    pub fn count_below(&self, x: f64) -> usize {
        let tiny = f64::MIN_POSITIVE.sqrt();
        let mut count = 0;
        let mut q = 1.0;
        for i in 0..self.dim() {
            let b2 = if i == 0 { 0.0 } else { self.off[i - 1] * self.off[i - 1] };
            q = self.diag[i] - x - if i == 0 { 0.0 } else { b2 / q };
            if q == 0.0 {
                q = -tiny;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn gershgorin(&self) -> (f64, f64) {
        let n = self.dim();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let r = if i > 0 { self.off[i - 1].abs() } else { 0.0 }
                + if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    /// The `k` smallest eigenvalues, ascending, to full working precision.
    pub fn smallest_eigenvalues(&self, k: usize) -> Result<Vec<f64>> {
        if k == 0 || k > self.dim() {
            return Err(Error::invalid_arg("requested eigenvalue count out of range"));
        }
        let (lo0, hi0) = self.gershgorin();
        let span = (hi0 - lo0).abs().max(hi0.abs()).max(lo0.abs()).max(f64::MIN_POSITIVE);
        let mut out = Vec::with_capacity(k);
        for j in 0..k {
            let (mut lo, mut hi) = (lo0 - 1e-12 * span, hi0 + 1e-12 * span);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if self.count_below(mid) > j {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            out.push(0.5 * (lo + hi));
        }
        Ok(out)
    }

    /// Unit eigenvector for the (accurate) eigenvalue `lambda`, orthogonalized
    /// against `previous`.
    pub fn eigenvector(&self, lambda: f64, previous: &[Vec<f64>]) -> Vec<f64> {
        let n = self.dim();
        let scale = self.gershgorin().1.abs().max(self.gershgorin().0.abs()).max(1.0);
        let shift = lambda + 4.0 * f64::EPSILON * scale;
        let mut x: Vec<f64> = (0..n).map(|i| 1.0 + 0.01 * ((i * 7919) % 101) as f64 / 101.0).collect();
        for _ in 0..4 {
            x = self.solve_shifted(shift, &x);
            for p in previous {
                let c: f64 = x.iter().zip(p).map(|(a, b)| a * b).sum();
                x.iter_mut().zip(p).for_each(|(a, b)| *a -= c * b);
            }
            let nrm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            x.iter_mut().for_each(|v| *v /= nrm);
        }
        x
    }

    /// Solves `(T − s I) x = b` by LU with partial pivoting.
    fn solve_shifted(&self, s: f64, b: &[f64]) -> Vec<f64> {
        let n = self.dim();
        let tiny = f64::MIN_POSITIVE.sqrt();
        if n == 1 {
            let d = self.diag[0] - s;
            return vec![b[0] / if d == 0.0 { tiny } else { d }];
        }
        // Rows kept as (d, u1, u2) upper bands after elimination.
        let mut d: Vec<f64> = self.diag.iter().map(|v| v - s).collect();
        let mut u1: Vec<f64> = self.off.clone();
        u1.push(0.0);
        let mut u2 = vec![0.0; n];
        let mut l = vec![0.0; n];
        let mut swapped = vec![false; n];
        let mut sub: Vec<f64> = self.off.clone();
        for i in 0..n - 1 {
            if sub[i].abs() > d[i].abs() {
                // Swap rows i and i+1.
                swapped[i] = true;
                let (di, u1i, u2i) = (d[i], u1[i], u2[i]);
                d[i] = sub[i];
                u1[i] = d[i + 1];
                u2[i] = u1[i + 1];
                let m = di / d[i];
                l[i] = m;
                d[i + 1] = u1i - m * u1[i];
                u1[i + 1] = u2i - m * u2[i];
            } else {
                let piv = if d[i] == 0.0 { tiny } else { d[i] };
                d[i] = piv;
                let m = sub[i] / piv;
                l[i] = m;
                d[i + 1] -= m * u1[i];
                u1[i + 1] -= m * u2[i];
            }
            sub[i] = 0.0;
        }
        if d[n - 1] == 0.0 {
            d[n - 1] = tiny;
        }
        let mut y = b.to_vec();
        for i in 0..n - 1 {
            if swapped[i] {
                y.swap(i, i + 1);
            }
            y[i + 1] -= l[i] * y[i];
        }
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let mut v = y[i];
            if i + 1 < n {
                v -= u1[i] * x[i + 1];
            }
            if i + 2 < n {
                v -= u2[i] * x[i + 2];
            }
            x[i] = v / d[i];
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_laplacian_spectrum() {
        let n = 50;
        let t = SymTridiagonal::new(vec![2.0; n], vec![-1.0; n - 1]).unwrap();
        let vals = t.smallest_eigenvalues(4).unwrap();
        let mut prev: Vec<Vec<f64>> = Vec::new();
        for (k, v) in vals.iter().enumerate() {
            let theta = core::f64::consts::PI * (k + 1) as f64 / (n + 1) as f64;
            assert!((v - (2.0 - 2.0 * theta.cos())).abs() < 1e-14);
            let x = t.eigenvector(*v, &prev);
            // Exact eigenvector is sin((i+1)θ) up to sign and scale.
            let exact: Vec<f64> = (0..n).map(|i| ((i + 1) as f64 * theta).sin()).collect();
            let en = exact.iter().map(|e| e * e).sum::<f64>().sqrt();
            let c: f64 = x.iter().zip(&exact).map(|(a, b)| a * b).sum::<f64>() / en;
            assert!((c.abs() - 1.0).abs() < 1e-12);
            prev.push(x);
        }
    }

    #[test]
    fn pivoting_handles_indefinite_shift() {
        let t = SymTridiagonal::new(vec![0.0, 1.0, -3.0, 2.0], vec![1.0, 4.0, 0.5]).unwrap();
        let b = [1.0, 2.0, 3.0, 4.0];
        let x = t.solve_shifted(0.3, &b);
        for i in 0..4 {
            let mut r = (t.diag[i] - 0.3) * x[i];
            if i > 0 {
                r += t.off[i - 1] * x[i - 1];
            }
            if i < 3 {
                r += t.off[i] * x[i + 1];
            }
            assert!((r - b[i]).abs() < 1e-12);
        }
    }
}
