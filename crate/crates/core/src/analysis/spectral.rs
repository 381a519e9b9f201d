//! Extreme eigenvalues by Lanczos iteration and small dense eigenproblems.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::{dot, norm, sqrt};
use crate::system::{LdlFactor, Pivots, SparseSymmetricMatrix};

/// Deterministic xorshift64* generator for start vectors and sample points.
#[derive(Debug, Clone)]
pub struct XorShift(u64);

impl XorShift {
    pub fn new(seed: u64) -> Self {
        Self(seed.max(1))
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.0 = x;
        x.wrapping_mul(0x2545_f491_4f6c_dd1d)
    }

    /// Uniform in `[0, 1)`.
    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }
}

/// Stopping rule of [`lanczos_largest`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LanczosOptions {
    /// Relative change of the largest Ritz value over `window` steps.
    pub tolerance: f64,
    pub window: usize,
    pub max_iterations: usize,
    pub seed: u64,
}

impl Default for LanczosOptions {
    fn default() -> Self {
        Self { tolerance: 1e-13, window: 10, max_iterations: 2000, seed: 0x9e37_79b9_7f4a_7c15 }
    }
}

/// Largest eigenvalue of the symmetric operator `apply` of size `n`, by
/// Lanczos iteration with full reorthogonalization.
pub fn lanczos_largest(n: usize, apply: &mut dyn FnMut(&[f64], &mut [f64]), opts: &LanczosOptions) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter("empty operator"));
    }
    let mut rng = XorShift::new(opts.seed);
    let mut q: Vec<f64> = (0..n).map(|_| rng.unit() - 0.5).collect();
    let nq = norm(&q);
    q.iter_mut().for_each(|v| *v /= nq);
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut history: Vec<f64> = Vec::new();
    let mut w = vec![0.0; n];
    let limit = opts.max_iterations.min(n);
    loop {
        apply(&q, &mut w);
        let a = dot(&q, &w);
        alpha.push(a);
        basis.push(q);
        // two passes of classical Gram-Schmidt against the whole basis
        for _ in 0..2 {
            for b in &basis {
                let c = dot(b, &w);
                w.iter_mut().zip(b).for_each(|(wi, bi)| *wi -= c * bi);
            }
        }
        let theta = largest_tridiagonal_eigenvalue(&alpha, &beta);
        if !theta.is_finite() {
            return Err(Error::NonFinite("Lanczos Ritz value"));
        }
        history.push(theta);
        let b = norm(&w);
        let k = alpha.len();
        let scale = theta.abs().max(f64::MIN_POSITIVE);
        let converged = k > opts.window
            && (theta - history[k - 1 - opts.window]).abs() <= opts.tolerance * scale;
        if converged || k >= limit || b <= 1e-14 * scale {
            return Ok(theta);
        }
        beta.push(b);
        q = w.iter().map(|v| v / b).collect();
    }
}

/// Largest eigenvalue of the symmetric tridiagonal matrix with diagonal
/// `alpha` and off-diagonal `beta`, by Sturm-sequence bisection.
pub fn largest_tridiagonal_eigenvalue(alpha: &[f64], beta: &[f64]) -> f64 {
    let k = alpha.len();
    let off = |i: usize| if i < beta.len() { beta[i].abs() } else { 0.0 };
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..k {
        let r = off(i) + if i > 0 { off(i - 1) } else { 0.0 };
        lo = lo.min(alpha[i] - r);
        hi = hi.max(alpha[i] + r);
    }
    // number of eigenvalues below x
    let below = |x: f64| {
        let mut count = 0;
        let mut d = 1.0;
        for i in 0..k {
            let b2 = if i > 0 { beta[i - 1] * beta[i - 1] } else { 0.0 };
            d = alpha[i] - x - if i > 0 { b2 / d } else { 0.0 };
            if d == 0.0 {
                d = -f64::EPSILON * (x.abs() + f64::MIN_POSITIVE);
            }
            if d < 0.0 {
                count += 1;
            }
        }
        count
    };
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if below(mid) == k {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// `λ_max / λ_min` of a symmetric positive definite matrix, using Lanczos on
/// the matrix and on its inverse.
pub fn condition_number(k: &SparseSymmetricMatrix, coords: &[[f64; 2]]) -> Result<f64> {
    let factor = LdlFactor::new(k, coords, k.dim() / coords.len().max(1), Pivots::Positive)
        .map_err(|_| Error::NonFinite("condition number of a matrix that is not positive definite"))?;
    condition_number_with(k, &factor)
}

/// As [`condition_number`] with an existing factorization of `k`.
pub fn condition_number_with(k: &SparseSymmetricMatrix, factor: &LdlFactor) -> Result<f64> {
    let n = k.dim();
    let opts = LanczosOptions::default();
    let max = lanczos_largest(n, &mut |x, y| k.matvec(x, y), &opts)?;
    let mut work = Vec::new();
    let inv_max = lanczos_largest(
        n,
        &mut |x, y| {
            y.copy_from_slice(x);
            factor.solve_in_place(y, &mut work);
        },
        &opts,
    )?;
    let c = max * inv_max;
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::NonFinite("condition number"));
    }
    Ok(c)
}

/// Largest `λ` with `A x = λ M x`, using the factorization of `M`.
pub fn largest_generalized_eigenvalue(a: &SparseSymmetricMatrix, mass: &LdlFactor) -> Result<f64> {
    let n = a.dim();
    let mut ax = vec![0.0; n];
    lanczos_largest(
        n,
        &mut |x, y| {
            let z = mass.half_solve_transpose(x);
            a.matvec(&z, &mut ax);
            y.copy_from_slice(&mass.half_solve(&ax));
        },
        &LanczosOptions::default(),
    )
}

/// `C_FL = 1 / (h √λ_max)` for the pencil `A − λ M`.
pub fn cfl_number(a: &SparseSymmetricMatrix, mass: &LdlFactor, h: f64) -> Result<f64> {
    let lambda = largest_generalized_eigenvalue(a, mass)?;
    if !(lambda > 0.0) {
        return Err(Error::NonFinite("largest generalized eigenvalue is not positive"));
    }
    Ok(1.0 / (h * sqrt(lambda)))
}

/// All eigenvalues of a dense symmetric matrix (row-major), ascending, by
/// cyclic Jacobi rotations.
pub fn dense_symmetric_eigenvalues(matrix: &[f64], n: usize) -> Vec<f64> {
    let mut a = matrix.to_vec();
    for _sweep in 0..100 {
        let off: f64 = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|(i, j)| i != j).map(|(i, j)| a[i * n + j] * a[i * n + j]).sum();
        let diag: f64 = (0..n).map(|i| a[i * n + i] * a[i * n + i]).sum();
        if off <= 1e-30 * diag || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + sqrt(theta * theta + 1.0));
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / sqrt(t * t + 1.0);
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut eig: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    eig.sort_by(|x, y| x.total_cmp(y));
    eig
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coords(n: usize) -> Vec<[f64; 2]> {
        (0..n).map(|i| [i as f64, 0.0]).collect()
    }

    #[test]
    fn trivial_condition_numbers() {
        let id = SparseSymmetricMatrix::identity(4);
        assert!((condition_number(&id, &coords(2)).unwrap() - 1.0).abs() < 1e-12);
        let d = SparseSymmetricMatrix::from_diagonal(&[1.0, 10.0]);
        assert!((condition_number(&d, &coords(1)).unwrap() - 10.0).abs() < 1e-10);
        let bad = SparseSymmetricMatrix::from_diagonal(&[1.0, -1.0]);
        assert!(condition_number(&bad, &coords(1)).is_err());
    }

    #[test]
    fn cfl_of_scaled_identity() {
        let m = SparseSymmetricMatrix::identity(6);
        let f = LdlFactor::new(&m, &coords(3), 2, Pivots::Positive).unwrap();
        let a = SparseSymmetricMatrix::from_diagonal(&[4.0; 6]);
        assert!((cfl_number(&a, &f, 1.0).unwrap() - 0.5).abs() < 1e-12);
        let a16 = SparseSymmetricMatrix::from_diagonal(&[16.0; 6]);
        assert!((cfl_number(&a16, &f, 1.0).unwrap() - 0.25).abs() < 1e-12);
    }

    #[test]
    fn lanczos_agrees_with_jacobi() {
        // random sparse SPD matrix: B Bᵀ + I with banded B
        let n = 60;
        let mut rng = XorShift::new(7);
        let mut b = vec![0.0; n * n];
        for i in 0..n {
            for j in i.saturating_sub(3)..=i {
                b[i * n + j] = rng.unit() - 0.3;
            }
        }
        let mut dense = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                dense[i * n + j] = (0..n).map(|k| b[i * n + k] * b[j * n + k]).sum::<f64>() + if i == j { 1e-3 } else { 0.0 };
            }
        }
        let k = SparseSymmetricMatrix::from_dense(n, &dense);
        let eig = dense_symmetric_eigenvalues(&dense, n);
        let exact = eig[n - 1] / eig[0];
        let c = condition_number(&k, &coords(n)).unwrap();
        assert!(((c - exact) / exact).abs() < 1e-8, "{c} {exact}");
    }

    #[test]
    fn jacobi_small_cases() {
        let e = dense_symmetric_eigenvalues(&[2.0, 1.0, 1.0, 2.0], 2);
        assert!((e[0] - 1.0).abs() < 1e-15 && (e[1] - 3.0).abs() < 1e-15);
        assert!((largest_tridiagonal_eigenvalue(&[2.0, 2.0], &[1.0]) - 3.0).abs() < 1e-14);
    }
}
