use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::quadrature::gauss_lobatto_nodes;
use crate::space::{CellBox, CellSide};

/// Tensor-product Lagrange basis of order `p` on Gauss-Lobatto nodes.
///
/// Local scalar node `j * (p + 1) + i` sits at reference point
/// `(nodes[i], nodes[j])`; the vector-valued DoF of component `c` at that
/// node has local index `2 * node + c`.
#[derive(Debug, Clone, PartialEq)]
pub struct ElementBasis {
    p: usize,
    nodes: Vec<f64>,
    /// Monomial coefficients of each 1D Lagrange polynomial, lowest first.
    coeffs: Vec<Vec<f64>>,
}

/// Shape function values and physical gradients at one point.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ShapeValues {
    pub values: Vec<f64>,
    pub grads: Vec<[f64; 2]>,
}

impl ElementBasis {
    pub fn new(p: usize) -> Result<Self> {
        let nodes = gauss_lobatto_nodes(p)?;
        let coeffs = (0..=p)
            .map(|i| {
                // ∏_{m≠i} (t - t_m) / (t_i - t_m)
                let mut poly = vec![1.0];
                for (m, &tm) in nodes.iter().enumerate() {
                    if m == i {
                        continue;
                    }
                    let scale = 1.0 / (nodes[i] - tm);
                    let mut next = vec![0.0; poly.len() + 1];
                    for (d, &c) in poly.iter().enumerate() {
                        next[d + 1] += c * scale;
                        next[d] -= c * tm * scale;
                    }
                    poly = next;
                }
                poly
            })
            .collect();
        Ok(Self { p, nodes, coeffs })
    }

    pub fn order(&self) -> usize {
        self.p
    }

    pub fn nodes_1d(&self) -> &[f64] {
        &self.nodes
    }

    /// Scalar shape functions per cell, `(p + 1)²`.
    pub fn node_count(&self) -> usize {
        (self.p + 1) * (self.p + 1)
    }

    /// Vector-valued DoFs per cell.
    pub fn dof_count(&self) -> usize {
        2 * self.node_count()
    }

    /// Reference coordinates of local node `k`.
    pub fn node_reference(&self, k: usize) -> [f64; 2] {
        let n = self.p + 1;
        [self.nodes[k % n], self.nodes[k / n]]
    }

    /// `k`-th derivative of every 1D Lagrange polynomial at `t`.
    pub fn lagrange_1d(&self, k: usize, t: f64, out: &mut [f64]) {
        for (i, poly) in self.coeffs.iter().enumerate() {
            let mut acc = 0.0;
            for d in (k..poly.len()).rev() {
                let mut factor = 1.0;
                for m in 0..k {
                    factor *= (d - m) as f64;
                }
                acc = acc * t + poly[d] * factor;
            }
            out[i] = acc;
        }
    }

    /// Values and physical gradients at physical point `x` of `cell`.
    ///
    /// The point may lie anywhere in the closed cell, including parts outside
    /// the material region.
    pub fn eval(&self, cell: &CellBox, x: [f64; 2], out: &mut ShapeValues) {
        let n = self.p + 1;
        let xi = cell.to_reference(x);
        let mut vx = [0.0; 6];
        let mut vy = [0.0; 6];
        let mut dx = [0.0; 6];
        let mut dy = [0.0; 6];
        self.lagrange_1d(0, xi[0], &mut vx);
        self.lagrange_1d(0, xi[1], &mut vy);
        self.lagrange_1d(1, xi[0], &mut dx);
        self.lagrange_1d(1, xi[1], &mut dy);
        let inv_h = 1.0 / cell.h;
        out.values.clear();
        out.grads.clear();
        for j in 0..n {
            for i in 0..n {
                out.values.push(vx[i] * vy[j]);
                out.grads.push([dx[i] * vy[j] * inv_h, vx[i] * dy[j] * inv_h]);
            }
        }
    }

    pub fn shape_eval(&self, cell: &CellBox, x: [f64; 2]) -> ShapeValues {
        let mut s = ShapeValues::default();
        self.eval(cell, x, &mut s);
        s
    }

    /// `k`-th derivative along the face normal (+x for left/right sides,
    /// +y for bottom/top) of every scalar shape function, traced on `side`
    /// at tangential reference coordinate `t`.
    pub fn normal_derivative(&self, side: CellSide, k: usize, t: f64, h: f64, out: &mut [f64]) -> Result<()> {
        if k == 0 || k > self.p {
            return Err(Error::InvalidParameter("normal derivative order must be in 1..=p"));
        }
        let n = self.p + 1;
        let mut normal = [0.0; 6];
        let mut tangential = [0.0; 6];
        let at = match side {
            CellSide::Left | CellSide::Bottom => 0.0,
            CellSide::Right | CellSide::Top => 1.0,
        };
        self.lagrange_1d(k, at, &mut normal);
        self.lagrange_1d(0, t, &mut tangential);
        let scale = 1.0 / crate::math::powi(h, k as i32);
        for j in 0..n {
            for i in 0..n {
                out[j * n + i] = match side {
                    CellSide::Left | CellSide::Right => normal[i] * tangential[j],
                    CellSide::Bottom | CellSide::Top => tangential[i] * normal[j],
                } * scale;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_cell() -> CellBox {
        CellBox { lo: [0.0, 0.0], h: 1.0 }
    }

    #[test]
    fn q1_center_values() {
        let b = ElementBasis::new(1).unwrap();
        let s = b.shape_eval(&unit_cell(), [0.5, 0.5]);
        assert_eq!(s.values, [0.25; 4]);
    }

    #[test]
    fn kronecker_and_partition_of_unity() {
        for p in 1..=5 {
            let b = ElementBasis::new(p).unwrap();
            let cell = CellBox { lo: [0.3, -1.0], h: 0.7 };
            for k in 0..b.node_count() {
                let x = cell.to_physical(b.node_reference(k));
                let s = b.shape_eval(&cell, x);
                for (j, &v) in s.values.iter().enumerate() {
                    let expected = if j == k { 1.0 } else { 0.0 };
                    assert!((v - expected).abs() < 1e-12, "p={p} k={k} j={j} v={v}");
                }
            }
            let s = b.shape_eval(&cell, [0.41, -0.77]);
            let sum: f64 = s.values.iter().sum();
            assert!((sum - 1.0).abs() < 1e-12);
            let gsum = s.grads.iter().fold([0.0, 0.0], |a, g| [a[0] + g[0], a[1] + g[1]]);
            assert!(gsum[0].abs() < 1e-10 && gsum[1].abs() < 1e-10);
        }
    }

    #[test]
    fn gradient_of_x_field() {
        let b = ElementBasis::new(3).unwrap();
        let cell = CellBox { lo: [2.0, 1.0], h: 0.25 };
        let coeff: Vec<f64> = (0..b.node_count()).map(|k| cell.to_physical(b.node_reference(k))[0]).collect();
        let s = b.shape_eval(&cell, [2.1, 1.2]);
        let g = s.grads.iter().zip(&coeff).fold([0.0, 0.0], |a, (g, c)| [a[0] + c * g[0], a[1] + c * g[1]]);
        assert!((g[0] - 1.0).abs() < 1e-12 && g[1].abs() < 1e-12);
    }

    #[test]
    fn normal_derivative_of_x_squared() {
        let b = ElementBasis::new(2).unwrap();
        let cell = CellBox { lo: [0.5, 0.0], h: 0.5 };
        let coeff: Vec<f64> = (0..b.node_count())
            .map(|k| {
                let x = cell.to_physical(b.node_reference(k));
                x[0] * x[0]
            })
            .collect();
        let mut d = vec![0.0; b.node_count()];
        for (side, xf) in [(CellSide::Left, 0.5), (CellSide::Right, 1.0)] {
            b.normal_derivative(side, 1, 0.3, cell.h, &mut d).unwrap();
            let v: f64 = d.iter().zip(&coeff).map(|(a, c)| a * c).sum();
            assert!((v - 2.0 * xf).abs() < 1e-12);
            b.normal_derivative(side, 2, 0.3, cell.h, &mut d).unwrap();
            let v: f64 = d.iter().zip(&coeff).map(|(a, c)| a * c).sum();
            assert!((v - 2.0).abs() < 1e-10);
        }
        assert!(b.normal_derivative(CellSide::Top, 3, 0.0, 1.0, &mut d).is_err());
        assert!(b.normal_derivative(CellSide::Top, 0, 0.0, 1.0, &mut d).is_err());
    }
}
