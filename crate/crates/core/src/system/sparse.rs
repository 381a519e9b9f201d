use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::sqrt;

/// Unsorted `(row, col, value)` contributions; duplicates are summed.
#[derive(Debug, Clone, Default)]
pub struct TripletList {
    dim: usize,
    entries: Vec<(u32, u32, f64)>,
}

impl TripletList {
    pub fn new(dim: usize) -> Self {
        Self { dim, entries: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn push(&mut self, row: usize, col: usize, value: f64) {
        debug_assert!(row < self.dim && col < self.dim);
        self.entries.push((row as u32, col as u32, value));
    }

    /// Scatters a dense local matrix `scale · K` onto the global DoFs `rows`/`cols`.
    pub fn add_block(&mut self, rows: &[usize], cols: &[usize], scale: f64, get: impl Fn(usize, usize) -> f64) {
        for (i, &r) in rows.iter().enumerate() {
            for (j, &c) in cols.iter().enumerate() {
                let v = get(i, j);
                if v != 0.0 {
                    self.push(r, c, scale * v);
                }
            }
        }
    }
}

/// Symmetric matrix in compressed sparse row form with both triangles stored.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseSymmetricMatrix {
    dim: usize,
    row_ptr: Vec<usize>,
    cols: Vec<u32>,
    values: Vec<f64>,
}

impl SparseSymmetricMatrix {
    /// Sums duplicate triplets and symmetrizes to `(K + Kᵀ)/2`, so that the
    /// result is exactly symmetric in structure and value.
    pub fn from_triplets(list: TripletList) -> Self {
        let dim = list.dim;
        let mut entries = list.entries;
        let n0 = entries.len();
        entries.reserve(n0);
        for k in 0..n0 {
            let (r, c, v) = entries[k];
            entries[k].2 = 0.5 * v;
            entries.push((c, r, 0.5 * v));
        }
        entries.sort_unstable_by_key(|&(r, c, _)| ((r as u64) << 32) | c as u64);
        let mut row_ptr = vec![0usize; dim + 1];
        let mut cols = Vec::new();
        let mut values = Vec::new();
        let mut last: Option<(u32, u32)> = None;
        for (r, c, v) in entries {
            if last == Some((r, c)) {
                *values.last_mut().unwrap() += v;
            } else {
                cols.push(c);
                values.push(v);
                row_ptr[r as usize + 1] += 1;
                last = Some((r, c));
            }
        }
        for i in 0..dim {
            row_ptr[i + 1] += row_ptr[i];
        }
        let mut m = Self { dim, row_ptr, cols, values };
        // the two halves of each pair were summed in the same order only up
        // to association; copy the upper triangle over the lower one
        for i in 0..dim {
            for k in m.row_ptr[i]..m.row_ptr[i + 1] {
                let j = m.cols[k] as usize;
                if j < i {
                    let upper = m.get(j, i);
                    m.values[k] = upper;
                }
            }
        }
        m
    }

    pub fn identity(dim: usize) -> Self {
        Self { dim, row_ptr: (0..=dim).collect(), cols: (0..dim as u32).collect(), values: vec![1.0; dim] }
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::identity(diag.len());
        m.values.copy_from_slice(diag);
        m
    }

    /// Builds from a dense row-major matrix, keeping nonzeros.
    pub fn from_dense(dim: usize, dense: &[f64]) -> Self {
        let mut t = TripletList::new(dim);
        for i in 0..dim {
            for j in 0..dim {
                if dense[i * dim + j] != 0.0 {
                    t.push(i, j, dense[i * dim + j]);
                }
            }
        }
        Self::from_triplets(t)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Column indices and values of row `i`, columns ascending.
    pub fn row(&self, i: usize) -> (&[u32], &[f64]) {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        (&self.cols[r.clone()], &self.values[r])
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (cols, vals) = self.row(i);
        match cols.binary_search(&(j as u32)) {
            Ok(k) => vals[k],
            Err(_) => 0.0,
        }
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.get(i, i)).collect()
    }

    /// `y = K x`.
    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate().take(self.dim) {
            let mut s = 0.0;
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                s += self.values[k] * x[self.cols[k] as usize];
            }
            *yi = s;
        }
    }

    /// `xᵀ K x`.
    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        let mut y = vec![0.0; self.dim];
        self.matvec(x, &mut y);
        x.iter().zip(&y).map(|(a, b)| a * b).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        sqrt(self.values.iter().map(|v| v * v).sum())
    }

    /// `‖K − Kᵀ‖_F / ‖K‖_F`.
    pub fn asymmetry(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.dim {
            let (cols, vals) = self.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                let d = v - self.get(j as usize, i);
                s += d * d;
            }
        }
        let n = self.frobenius_norm();
        if n > 0.0 {
            sqrt(s) / n
        } else {
            0.0
        }
    }

    /// `self + alpha · other` on the union pattern.
    pub fn add_scaled(&self, alpha: f64, other: &SparseSymmetricMatrix) -> Result<Self> {
        if other.dim != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: other.dim });
        }
        let mut t = TripletList::new(self.dim);
        for (m, s) in [(self, 1.0), (other, alpha)] {
            for i in 0..m.dim {
                let (cols, vals) = m.row(i);
                for (&j, &v) in cols.iter().zip(vals) {
                    t.push(i, j as usize, s * v);
                }
            }
        }
        Ok(Self::from_triplets(t))
    }

    /// Every stored entry as `(row, col, value)`, row-major.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.dim).flat_map(move |i| {
            let (cols, vals) = self.row(i);
            cols.iter().zip(vals).map(move |(&j, &v)| (i, j as usize, v))
        })
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let mut d = vec![0.0; self.dim * self.dim];
        for (i, j, v) in self.triplets() {
            d[i * self.dim + j] = v;
        }
        d
    }

    /// Vertex adjacency of the `block × block` grouped pattern, without self loops.
    pub(crate) fn block_graph(&self, block: usize) -> (Vec<usize>, Vec<u32>) {
        let nb = self.dim / block;
        let mut ptr = vec![0usize; nb + 1];
        let mut adj: Vec<u32> = Vec::new();
        let mut seen = vec![u32::MAX; nb];
        for v in 0..nb {
            for r in v * block..(v + 1) * block {
                let (cols, _) = self.row(r);
                for &c in cols {
                    let w = c as usize / block;
                    if w != v && seen[w] != v as u32 {
                        seen[w] = v as u32;
                        adj.push(w as u32);
                    }
                }
            }
            ptr[v + 1] = adj.len();
        }
        (ptr, adj)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triplets_are_summed_and_symmetrized() {
        let mut t = TripletList::new(3);
        t.push(0, 0, 1.0);
        t.push(0, 0, 2.0);
        t.push(0, 2, 4.0);
        t.push(2, 0, 2.0);
        t.push(1, 1, 5.0);
        let m = SparseSymmetricMatrix::from_triplets(t);
        assert_eq!(m.get(0, 0), 3.0);
        assert_eq!(m.get(0, 2), 3.0);
        assert_eq!(m.get(2, 0), 3.0);
        assert_eq!(m.get(1, 2), 0.0);
        assert_eq!(m.nnz(), 4);
        assert_eq!(m.asymmetry(), 0.0);
        let mut y = [0.0; 3];
        m.matvec(&[1.0, 1.0, 1.0], &mut y);
        assert_eq!(y, [6.0, 5.0, 3.0]);
    }

    #[test]
    fn dense_round_trip_and_sum() {
        let d = [2.0, -1.0, 0.0, -1.0, 2.0, -1.0, 0.0, -1.0, 2.0];
        let m = SparseSymmetricMatrix::from_dense(3, &d);
        assert_eq!(m.to_dense(), d);
        let s = m.add_scaled(2.0, &SparseSymmetricMatrix::identity(3)).unwrap();
        assert_eq!(s.diagonal(), [4.0; 3]);
        assert_eq!(m.quadratic_form(&[1.0, 1.0, 1.0]), 2.0);
        assert_eq!(m.triplets().count(), 7);
    }

    #[test]
    fn block_graph_groups_components() {
        let mut t = TripletList::new(6);
        t.push(0, 3, 1.0);
        t.push(1, 5, 1.0);
        t.push(2, 2, 1.0);
        let m = SparseSymmetricMatrix::from_triplets(t);
        let (ptr, adj) = m.block_graph(2);
        assert_eq!(ptr, [0, 2, 3, 4]);
        assert_eq!(adj, [1, 2, 0, 0]);
    }
}
