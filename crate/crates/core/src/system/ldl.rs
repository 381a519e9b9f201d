//! Sparse `LDLᵀ` factorization of a symmetric matrix, computed row by row
//! along the elimination tree of the permuted matrix.

use alloc::vec;
use alloc::vec::Vec;

use super::ordering::{invert, nested_dissection};
use super::sparse::SparseSymmetricMatrix;
use crate::error::{Error, Result};
use crate::math::sqrt;

const NONE: usize = usize::MAX;

/// `P K Pᵀ = L D Lᵀ` with unit lower triangular `L` stored by columns.
#[derive(Debug, Clone)]
pub struct LdlFactor {
    n: usize,
    perm: Vec<usize>,
    inv: Vec<usize>,
    col_ptr: Vec<usize>,
    rows: Vec<u32>,
    values: Vec<f64>,
    diag: Vec<f64>,
}

/// Which pivots the factorization accepts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pivots {
    /// All pivots must be positive: the matrix is positive definite.
    Positive,
    /// Any nonzero pivot.
    Nonzero,
}

impl LdlFactor {
    /// Factors `k` with a nested-dissection ordering built from `coords`,
    /// one point per `block` consecutive unknowns.
    pub fn new(k: &SparseSymmetricMatrix, coords: &[[f64; 2]], block: usize, pivots: Pivots) -> Result<Self> {
        let n = k.dim();
        if coords.len() * block != n {
            return Err(Error::DimensionMismatch { expected: n, got: coords.len() * block });
        }
        let (ptr, adj) = k.block_graph(block);
        let vperm = nested_dissection(&ptr, &adj, coords);
        let mut perm = Vec::with_capacity(n);
        for v in vperm {
            for c in 0..block {
                perm.push(v * block + c);
            }
        }
        Self::with_permutation(k, perm, pivots)
    }

    /// Factors `k` in the given order, `perm[new] = old`.
    pub fn with_permutation(k: &SparseSymmetricMatrix, perm: Vec<usize>, pivots: Pivots) -> Result<Self> {
        let n = k.dim();
        if perm.len() != n {
            return Err(Error::DimensionMismatch { expected: n, got: perm.len() });
        }
        let inv = invert(&perm);

        // symbolic: elimination tree and column counts
        let mut parent = vec![NONE; n];
        let mut flag = vec![NONE; n];
        let mut counts = vec![0usize; n];
        for row in 0..n {
            flag[row] = row;
            let (cols, _) = k.row(perm[row]);
            for &c in cols {
                let mut i = inv[c as usize];
                if i >= row {
                    continue;
                }
                while flag[i] != row {
                    if parent[i] == NONE {
                        parent[i] = row;
                    }
                    counts[i] += 1;
                    flag[i] = row;
                    i = parent[i];
                }
            }
        }
        let mut col_ptr = vec![0usize; n + 1];
        for i in 0..n {
            col_ptr[i + 1] = col_ptr[i] + counts[i];
        }
        let nnz = col_ptr[n];
        let mut rows = vec![0u32; nnz];
        let mut values = vec![0.0; nnz];
        let mut diag = vec![0.0; n];

        // numeric: row `row` of L by a sparse triangular solve
        let mut y = vec![0.0; n];
        let mut pattern = vec![0usize; n];
        let mut filled = vec![0usize; n];
        flag.iter_mut().for_each(|f| *f = NONE);
        let scale = (0..n).map(|i| k.get(i, i).abs()).fold(0.0, f64::max);
        for row in 0..n {
            let mut top = n;
            flag[row] = row;
            let (cols, vals) = k.row(perm[row]);
            for (&c, &v) in cols.iter().zip(vals) {
                let mut i = inv[c as usize];
                if i > row {
                    continue;
                }
                y[i] += v;
                let mut len = 0;
                while flag[i] != row {
                    pattern[len] = i;
                    len += 1;
                    flag[i] = row;
                    i = parent[i];
                }
                while len > 0 {
                    top -= 1;
                    len -= 1;
                    pattern[top] = pattern[len];
                }
            }
            let mut d = y[row];
            y[row] = 0.0;
            for &i in &pattern[top..n] {
                let yi = y[i];
                y[i] = 0.0;
                let start = col_ptr[i];
                let end = start + filled[i];
                for p in start..end {
                    y[rows[p] as usize] -= values[p] * yi;
                }
                let l = yi / diag[i];
                d -= l * yi;
                rows[end] = row as u32;
                values[end] = l;
                filled[i] += 1;
            }
            let bad = match pivots {
                Pivots::Positive => !(d > 0.0),
                Pivots::Nonzero => d == 0.0 || !d.is_finite(),
            };
            if bad || (scale > 0.0 && d.abs() < 1e-300 * scale) {
                return Err(Error::NotPositiveDefinite { row: perm[row], pivot: d });
            }
            diag[row] = d;
        }
        Ok(Self { n, perm, inv, col_ptr, rows, values, diag })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// Nonzeros of `L` below the diagonal.
    pub fn factor_nnz(&self) -> usize {
        self.values.len()
    }

    pub fn pivots(&self) -> &[f64] {
        &self.diag
    }

    /// Number of negative pivots, which equals the number of negative eigenvalues.
    pub fn negative_pivots(&self) -> usize {
        self.diag.iter().filter(|&&d| d < 0.0).count()
    }

    fn forward(&self, x: &mut [f64]) {
        for j in 0..self.n {
            let xj = x[j];
            if xj != 0.0 {
                for p in self.col_ptr[j]..self.col_ptr[j + 1] {
                    x[self.rows[p] as usize] -= self.values[p] * xj;
                }
            }
        }
    }

    fn backward(&self, x: &mut [f64]) {
        for j in (0..self.n).rev() {
            let mut s = x[j];
            for p in self.col_ptr[j]..self.col_ptr[j + 1] {
                s -= self.values[p] * x[self.rows[p] as usize];
            }
            x[j] = s;
        }
    }

    /// Solves `K x = b` in place.
    pub fn solve_in_place(&self, b: &mut [f64], work: &mut Vec<f64>) {
        work.resize(self.n, 0.0);
        for (w, &old) in work.iter_mut().zip(&self.perm) {
            *w = b[old];
        }
        self.forward(work);
        for (w, d) in work.iter_mut().zip(&self.diag) {
            *w /= d;
        }
        self.backward(work);
        for (new, &old) in self.perm.iter().enumerate() {
            b[old] = work[new];
        }
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let mut x = b.to_vec();
        self.solve_in_place(&mut x, &mut Vec::new());
        x
    }

    /// `y = D^{-1/2} L^{-1} P x`, for a positive definite factor.
    pub fn half_solve(&self, x: &[f64]) -> Vec<f64> {
        let mut y: Vec<f64> = self.perm.iter().map(|&old| x[old]).collect();
        self.forward(&mut y);
        for (v, d) in y.iter_mut().zip(&self.diag) {
            *v /= sqrt(*d);
        }
        y
    }

    /// `x = Pᵀ L^{-ᵀ} D^{-1/2} y`, the transpose of [`half_solve`](Self::half_solve).
    pub fn half_solve_transpose(&self, y: &[f64]) -> Vec<f64> {
        let mut w: Vec<f64> = y.iter().zip(&self.diag).map(|(v, d)| v / sqrt(*d)).collect();
        self.backward(&mut w);
        let mut x = vec![0.0; self.n];
        for (new, &old) in self.perm.iter().enumerate() {
            x[old] = w[new];
        }
        x
    }

    /// Position of original unknown `old` in the elimination order.
    pub fn position(&self, old: usize) -> usize {
        self.inv[old]
    }
}
