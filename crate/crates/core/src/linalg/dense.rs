//! Dense symmetric eigensolvers for small problems: projected Rayleigh-Ritz
//! matrices and the brute-force reference for sparse pencils.

use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

/// Row-major square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    pub n: usize,
    pub data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(n: usize) -> Self {
        DenseMatrix { n, data: vec![0.0; n * n] }
    }

    pub fn from_row_major(n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, got: data.len() });
        }
        Ok(DenseMatrix { n, data })
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }
}

/// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
/// Returns ascending eigenvalues and the matching eigenvectors (as columns
/// stored row-major in the returned matrix, i.e. `vecs.at(i, k)` is the
/// `i`-th component of eigenvector `k`).
pub fn symmetric_eigen(a: &DenseMatrix) -> (Vec<f64>, DenseMatrix) {
    let n = a.n;
    let mut m = a.clone();
    let mut v = DenseMatrix::zeros(n);
    for i in 0..n {
        v.set(i, i, 1.0);
    }
    let norm: f64 = m.data.iter().map(|x| x * x).sum::<f64>().sqrt();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| m.at(i, j) * m.at(i, j))
            .sum::<f64>()
            .sqrt();
        if off <= f64::EPSILON * 1e-2 * norm || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m.at(p, q);
                if apq.abs() <= f64::MIN_POSITIVE {
                    continue;
                }
                let theta = (m.at(q, q) - m.at(p, p)) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m.at(k, p);
                    let mkq = m.at(k, q);
                    m.set(k, p, c * mkp - s * mkq);
                    m.set(k, q, s * mkp + c * mkq);
                }
                for k in 0..n {
                    let mpk = m.at(p, k);
                    let mqk = m.at(q, k);
                    m.set(p, k, c * mpk - s * mqk);
                    m.set(q, k, s * mpk + c * mqk);
                }
                for k in 0..n {
                    let vkp = v.at(k, p);
                    let vkq = v.at(k, q);
                    v.set(k, p, c * vkp - s * vkq);
                    v.set(k, q, s * vkp + c * vkq);
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m.at(i, i).total_cmp(&m.at(j, j)));
    let values = order.iter().map(|&i| m.at(i, i)).collect();
    let mut vecs = DenseMatrix::zeros(n);
    for (new, &old) in order.iter().enumerate() {
        for i in 0..n {
            vecs.set(i, new, v.at(i, old));
        }
    }
    (values, vecs)
}

/// Lower-triangular Cholesky factor of a symmetric positive definite matrix.
pub fn cholesky(a: &DenseMatrix) -> Result<DenseMatrix> {
    let n = a.n;
    let mut l = DenseMatrix::zeros(n);
    for j in 0..n {
        let mut d = a.at(j, j);
        for k in 0..j {
            d -= l.at(j, k) * l.at(j, k);
        }
        if !(d > 0.0) {
            return Err(Error::Factorization { index: j, value: d });
        }
        let d = d.sqrt();
        l.set(j, j, d);
        for i in j + 1..n {
            let mut s = a.at(i, j);
            for k in 0..j {
                s -= l.at(i, k) * l.at(j, k);
            }
            l.set(i, j, s / d);
        }
    }
    Ok(l)
}

/// All eigenpairs of the symmetric-definite pencil `A x = λ M x` by
/// reduction `L⁻¹ A L⁻ᵀ` with `M = L Lᵀ`. Eigenvectors are M-orthonormal.
pub fn generalized_eigen(a: &DenseMatrix, m: &DenseMatrix) -> Result<(Vec<f64>, DenseMatrix)> {
    let n = a.n;
    if m.n != n {
        return Err(Error::DimensionMismatch { expected: n, got: m.n });
    }
    let l = cholesky(m)?;
    // C = L⁻¹ A L⁻ᵀ: solve L Y = A, then C = L⁻¹ Yᵀ (A symmetric).
    let forward = |rhs: &mut [f64]| {
        for i in 0..n {
            let mut s = rhs[i];
            for k in 0..i {
                s -= l.at(i, k) * rhs[k];
            }
            rhs[i] = s / l.at(i, i);
        }
    };
    let mut y = DenseMatrix::zeros(n);
    let mut col = vec![0.0; n];
    for j in 0..n {
        (0..n).for_each(|i| col[i] = a.at(i, j));
        forward(&mut col);
        (0..n).for_each(|i| y.set(i, j, col[i]));
    }
    let mut c = DenseMatrix::zeros(n);
    for i in 0..n {
        (0..n).for_each(|j| col[j] = y.at(i, j));
        forward(&mut col);
        (0..n).for_each(|j| c.set(i, j, col[j]));
    }
    for i in 0..n {
        for j in 0..i {
            let s = 0.5 * (c.at(i, j) + c.at(j, i));
            c.set(i, j, s);
            c.set(j, i, s);
        }
    }
    let (values, z) = symmetric_eigen(&c);
    // x = L⁻ᵀ z.
    let mut x = DenseMatrix::zeros(n);
    for k in 0..n {
        for i in (0..n).rev() {
            let mut s = z.at(i, k);
            for j in i + 1..n {
                s -= l.at(j, i) * x.at(j, k);
            }
            x.set(i, k, s / l.at(i, i));
        }
    }
    Ok((values, x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jacobi_matches_known_spectrum() {
        // Path-graph Laplacian-like matrix with eigenvalues 2 - 2cos(kπ/(n+1)).
        let n = 12;
        let mut a = DenseMatrix::zeros(n);
        for i in 0..n {
            a.set(i, i, 2.0);
            if i + 1 < n {
                a.set(i, i + 1, -1.0);
                a.set(i + 1, i, -1.0);
            }
        }
        let (vals, vecs) = symmetric_eigen(&a);
        for (k, v) in vals.iter().enumerate() {
            let exact = 2.0 - 2.0 * (core::f64::consts::PI * (k + 1) as f64 / (n + 1) as f64).cos();
            assert!((v - exact).abs() < 1e-13);
        }
        for p in 0..n {
            for q in 0..n {
                let d: f64 = (0..n).map(|i| vecs.at(i, p) * vecs.at(i, q)).sum();
                assert!((d - if p == q { 1.0 } else { 0.0 }).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn generalized_pencil_is_m_orthonormal() {
        let a = DenseMatrix::from_row_major(2, alloc::vec![2.0, -1.0, -1.0, 2.0]).unwrap();
        let m = DenseMatrix::from_row_major(2, alloc::vec![2.0, 0.0, 0.0, 1.0]).unwrap();
        let (vals, x) = generalized_eigen(&a, &m).unwrap();
        for k in 0..2 {
            let v = [x.at(0, k), x.at(1, k)];
            let av = [2.0 * v[0] - v[1], -v[0] + 2.0 * v[1]];
            assert!((av[0] - vals[k] * 2.0 * v[0]).abs() < 1e-13);
            assert!((av[1] - vals[k] * v[1]).abs() < 1e-13);
            assert!((2.0 * v[0] * v[0] + v[1] * v[1] - 1.0).abs() < 1e-13);
        }
        let not_spd = DenseMatrix::from_row_major(2, alloc::vec![1.0, 2.0, 2.0, 1.0]).unwrap();
        assert!(cholesky(&not_spd).is_err());
    }
}
