//! Element-local matrices and load vectors.
//!
//! Local DoF `2a + c` is component `c` of scalar shape function `a`.

use alloc::vec;
use alloc::vec::Vec;

use super::Material;
use crate::error::Result;
use crate::math::powi;
use crate::quadrature::{gauss_rule_1d, points_for_degree, QuadratureRule, SurfaceQuadratureRule};
use crate::space::{CellBox, CellSide, ElementBasis, ShapeValues};

/// Dense square element matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalMatrix {
    n: usize,
    data: Vec<f64>,
}

impl LocalMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![0.0; n * n] }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] += v;
    }

    pub fn scale(&mut self, s: f64) {
        self.data.iter_mut().for_each(|v| *v *= s);
    }

    /// `vᵀ K v`.
    pub fn energy(&self, v: &[f64]) -> f64 {
        (0..self.n)
            .map(|i| v[i] * (0..self.n).map(|j| self.get(i, j) * v[j]).sum::<f64>())
            .sum()
    }

    /// Largest `|K_ij − K_ji|` relative to the largest entry.
    pub fn asymmetry(&self) -> f64 {
        let max = self.data.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for j in 0..i {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        if max > 0.0 {
            worst / max
        } else {
            0.0
        }
    }
}

/// `(σ(N_a e_c) n)_d`.
#[inline]
fn shape_traction(g: [f64; 2], c: usize, d: usize, n: [f64; 2], m: &Material) -> f64 {
    let gn = g[0] * n[0] + g[1] * n[1];
    let delta = if c == d { gn } else { 0.0 };
    m.mu * (delta + g[d] * n[c]) + m.lambda * g[c] * n[d]
}

/// `∫ ρ u·v` over the rule.
pub fn local_mass(basis: &ElementBasis, cell: &CellBox, rule: &QuadratureRule, rho: f64) -> LocalMatrix {
    let nn = basis.node_count();
    let mut k = LocalMatrix::zeros(2 * nn);
    let mut s = ShapeValues::default();
    for (&x, &w) in rule.points.iter().zip(&rule.weights) {
        basis.eval(cell, x, &mut s);
        for a in 0..nn {
            for b in 0..nn {
                let m = w * rho * s.values[a] * s.values[b];
                k.add(2 * a, 2 * b, m);
                k.add(2 * a + 1, 2 * b + 1, m);
            }
        }
    }
    k
}

/// `∫ σ(u):ε(v)` over the rule.
pub fn local_bulk(basis: &ElementBasis, cell: &CellBox, rule: &QuadratureRule, m: &Material) -> LocalMatrix {
    let nn = basis.node_count();
    let mut k = LocalMatrix::zeros(2 * nn);
    let mut s = ShapeValues::default();
    for (&x, &w) in rule.points.iter().zip(&rule.weights) {
        basis.eval(cell, x, &mut s);
        for a in 0..nn {
            let ga = s.grads[a];
            for b in 0..nn {
                let gb = s.grads[b];
                let dot = ga[0] * gb[0] + ga[1] * gb[1];
                for c in 0..2 {
                    for d in 0..2 {
                        let mut v = m.mu * gb[c] * ga[d] + m.lambda * ga[c] * gb[d];
                        if c == d {
                            v += m.mu * dot;
                        }
                        k.add(2 * a + c, 2 * b + d, w * v);
                    }
                }
            }
        }
    }
    k
}

/// Symmetric Nitsche form for a Dirichlet condition on a curve:
/// `−⟨σ(u)n, v⟩ − ⟨u, σ(v)n⟩ + γ/h (2μ⟨u, v⟩ + λ⟨u·n, v·n⟩)`.
pub fn local_nitsche_dirichlet(
    basis: &ElementBasis,
    cell: &CellBox,
    rule: &SurfaceQuadratureRule,
    m: &Material,
    gamma: f64,
    h: f64,
) -> LocalMatrix {
    let nn = basis.node_count();
    let mut k = LocalMatrix::zeros(2 * nn);
    let mut s = ShapeValues::default();
    let pen = gamma / h;
    for ((&x, &w), &n) in rule.points.iter().zip(&rule.weights).zip(&rule.normals) {
        basis.eval(cell, x, &mut s);
        for a in 0..nn {
            for b in 0..nn {
                let nab = s.values[a] * s.values[b];
                for c in 0..2 {
                    for d in 0..2 {
                        // row (b, d) tests, column (a, c) is the trial function
                        let mut v = -shape_traction(s.grads[a], c, d, n, m) * s.values[b]
                            - s.values[a] * shape_traction(s.grads[b], d, c, n, m);
                        v += pen * m.lambda * n[c] * n[d] * nab;
                        if c == d {
                            v += pen * 2.0 * m.mu * nab;
                        }
                        k.add(2 * b + d, 2 * a + c, w * v);
                    }
                }
            }
        }
    }
    k
}

/// Load matching [`local_nitsche_dirichlet`] for boundary data `g`:
/// `−⟨g, σ(v)n⟩ + γ/h (2μ⟨g, v⟩ + λ⟨g·n, v·n⟩)`.
pub fn local_dirichlet_load(
    basis: &ElementBasis,
    cell: &CellBox,
    rule: &SurfaceQuadratureRule,
    m: &Material,
    gamma: f64,
    h: f64,
    g: impl Fn([f64; 2]) -> [f64; 2],
) -> Vec<f64> {
    let nn = basis.node_count();
    let mut out = vec![0.0; 2 * nn];
    let mut s = ShapeValues::default();
    let pen = gamma / h;
    for ((&x, &w), &n) in rule.points.iter().zip(&rule.weights).zip(&rule.normals) {
        basis.eval(cell, x, &mut s);
        let gv = g(x);
        let gn = gv[0] * n[0] + gv[1] * n[1];
        for b in 0..nn {
            for d in 0..2 {
                let mut v = -(0..2).map(|c| gv[c] * shape_traction(s.grads[b], d, c, n, m)).sum::<f64>();
                v += pen * (2.0 * m.mu * gv[d] + m.lambda * gn * n[d]) * s.values[b];
                out[2 * b + d] += w * v;
            }
        }
    }
    out
}

/// Interface coupling on one cut cell. Rows and columns are the domain 1
/// cell DoFs followed by the domain 2 cell DoFs; the rule normals must
/// point from domain 2 into domain 1 and the jump is `u₂ − u₁`:
/// `−⟨{σ(u)n}, ⟦v⟧⟩ − ⟨⟦u⟧, {σ(v)n}⟩ + γ/h ⟨⟦u⟧, ⟦v⟧⟩`.
#[allow(clippy::too_many_arguments)]
pub fn local_interface(
    basis: &ElementBasis,
    cell: &CellBox,
    rule: &SurfaceQuadratureRule,
    materials: [&Material; 2],
    kappa: [f64; 2],
    gamma: f64,
    h: f64,
) -> LocalMatrix {
    let nn = basis.node_count();
    let nd = 2 * nn;
    let mut k = LocalMatrix::zeros(2 * nd);
    let mut s = ShapeValues::default();
    let sign = [-1.0, 1.0];
    let pen = gamma / h;
    for ((&x, &w), &n) in rule.points.iter().zip(&rule.weights).zip(&rule.normals) {
        basis.eval(cell, x, &mut s);
        for si in 0..2 {
            for sj in 0..2 {
                let (mi, mj) = (materials[si], materials[sj]);
                for a in 0..nn {
                    for b in 0..nn {
                        let nab = s.values[a] * s.values[b];
                        for c in 0..2 {
                            for d in 0..2 {
                                // trial (si, a, c), test (sj, b, d)
                                let mut v = -kappa[si] * shape_traction(s.grads[a], c, d, n, mi) * sign[sj] * s.values[b]
                                    - sign[si] * s.values[a] * kappa[sj] * shape_traction(s.grads[b], d, c, n, mj);
                                if c == d {
                                    v += pen * sign[si] * sign[sj] * nab;
                                }
                                k.add(sj * nd + 2 * b + d, si * nd + 2 * a + c, w * v);
                            }
                        }
                    }
                }
            }
        }
    }
    k
}

/// Face weight `h^{2k+1} / ((2k+1)(k!)²)` of the `k`-th derivative jump.
pub fn ghost_penalty_weight(k: usize, h: f64) -> f64 {
    let fact: f64 = (1..=k).map(|i| i as f64).product();
    powi(h, 2 * k as i32 + 1) / ((2 * k + 1) as f64 * fact * fact)
}

/// Ghost penalty on the full face between `lower` and `upper` (cells of side
/// `h`), summing normal-derivative jumps of orders `1..=k_max`. Rows and
/// columns are the lower cell DoFs followed by the upper cell DoFs.
pub fn local_ghost_penalty(basis: &ElementBasis, normal_x: bool, h: f64, k_max: usize) -> Result<LocalMatrix> {
    let nn = basis.node_count();
    let nd = 2 * nn;
    let mut k = LocalMatrix::zeros(2 * nd);
    let (lower_side, upper_side) = if normal_x {
        (CellSide::Right, CellSide::Left)
    } else {
        (CellSide::Top, CellSide::Bottom)
    };
    let rule = gauss_rule_1d(points_for_degree(2 * basis.order()))?;
    let mut dl = vec![0.0; nn];
    let mut du = vec![0.0; nn];
    let mut jump = vec![0.0; 2 * nn];
    for order in 1..=k_max {
        let weight = ghost_penalty_weight(order, h);
        for (&t, &wt) in rule.nodes.iter().zip(&rule.weights) {
            basis.normal_derivative(lower_side, order, t, h, &mut dl)?;
            basis.normal_derivative(upper_side, order, t, h, &mut du)?;
            for a in 0..nn {
                jump[a] = -dl[a];
                jump[nn + a] = du[a];
            }
            let w = wt * h * weight;
            for (i, &ji) in jump.iter().enumerate() {
                if ji == 0.0 {
                    continue;
                }
                let (si, ai) = (i / nn, i % nn);
                for (j, &jj) in jump.iter().enumerate() {
                    let (sj, aj) = (j / nn, j % nn);
                    let v = w * ji * jj;
                    for c in 0..2 {
                        k.add(si * nd + 2 * ai + c, sj * nd + 2 * aj + c, v);
                    }
                }
            }
        }
    }
    Ok(k)
}

/// `∫ f·v` over the volume rule plus `∫ g·v` over the surface rule.
pub fn local_body_neumann_load(
    basis: &ElementBasis,
    cell: &CellBox,
    volume: &QuadratureRule,
    f: impl Fn([f64; 2]) -> [f64; 2],
    surface: &SurfaceQuadratureRule,
    g: impl Fn([f64; 2], [f64; 2]) -> [f64; 2],
) -> Vec<f64> {
    let nn = basis.node_count();
    let mut out = vec![0.0; 2 * nn];
    let mut s = ShapeValues::default();
    for (&x, &w) in volume.points.iter().zip(&volume.weights) {
        basis.eval(cell, x, &mut s);
        let fv = f(x);
        for b in 0..nn {
            out[2 * b] += w * fv[0] * s.values[b];
            out[2 * b + 1] += w * fv[1] * s.values[b];
        }
    }
    for ((&x, &w), &n) in surface.points.iter().zip(&surface.weights).zip(&surface.normals) {
        basis.eval(cell, x, &mut s);
        let gv = g(x, n);
        for b in 0..nn {
            out[2 * b] += w * gv[0] * s.values[b];
            out[2 * b + 1] += w * gv[1] * s.values[b];
        }
    }
    out
}
