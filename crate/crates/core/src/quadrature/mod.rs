//! Gaussian rules on full cells and faces, and high order rules on cells cut
//! by a level set.

mod cut;
mod gauss;

use alloc::vec::Vec;

pub use cut::{cut_cell_rules, cut_cell_surface_rule, cut_cell_volume_rule, height_axis, CutCellRules};
pub use gauss::{gauss_lobatto_nodes, gauss_rule_1d, points_for_degree, Rule1d};

use crate::geometry::{segment_roots, LevelSet, Side};
use crate::space::CellBox;

/// Volume rule with physical points and positive weights.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct QuadratureRule {
    pub points: Vec<[f64; 2]>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Sum of weights.
    pub fn measure(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn integrate(&self, f: impl Fn([f64; 2]) -> f64) -> f64 {
        self.points.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }

    pub fn push(&mut self, x: [f64; 2], w: f64) {
        self.points.push(x);
        self.weights.push(w);
    }

    pub fn append(&mut self, other: &QuadratureRule) {
        self.points.extend_from_slice(&other.points);
        self.weights.extend_from_slice(&other.weights);
    }
}

/// Curve rule with unit normals at every point.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SurfaceQuadratureRule {
    pub points: Vec<[f64; 2]>,
    pub weights: Vec<f64>,
    pub normals: Vec<[f64; 2]>,
}

impl SurfaceQuadratureRule {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Length of the curve piece.
    pub fn measure(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn integrate(&self, f: impl Fn([f64; 2], [f64; 2]) -> f64) -> f64 {
        self.points
            .iter()
            .zip(&self.weights)
            .zip(&self.normals)
            .map(|((&x, &w), &n)| w * f(x, n))
            .sum()
    }

    pub fn push(&mut self, x: [f64; 2], w: f64, n: [f64; 2]) {
        self.points.push(x);
        self.weights.push(w);
        self.normals.push(n);
    }

    /// Flips every normal.
    pub fn flipped(mut self) -> Self {
        for n in &mut self.normals {
            *n = [-n[0], -n[1]];
        }
        self
    }
}

/// Tensor Gauss rule on an uncut cell, exact for `Q_degree`.
pub fn full_cell_rule(cell: &CellBox, degree: usize) -> QuadratureRule {
    let rule = gauss_rule_1d(points_for_degree(degree)).expect("degree within range");
    let mut out = QuadratureRule::default();
    for (y, wy) in rule.mapped(cell.lo[1], cell.lo[1] + cell.h) {
        for (x, wx) in rule.mapped(cell.lo[0], cell.lo[0] + cell.h) {
            out.push([x, y], wx * wy);
        }
    }
    out
}

/// Gauss rule along the straight segment `a → b` with a constant normal.
pub fn aligned_face_rule(a: [f64; 2], b: [f64; 2], normal: [f64; 2], degree: usize) -> SurfaceQuadratureRule {
    let mut out = SurfaceQuadratureRule::default();
    push_segment(&mut out, a, b, 0.0, 1.0, normal, degree);
    out
}

/// Gauss rule along the part of segment `a → b` lying on `side` of `phi`.
pub fn clipped_face_rule(
    a: [f64; 2],
    b: [f64; 2],
    normal: [f64; 2],
    phi: &LevelSet,
    side: Side,
    degree: usize,
    h: f64,
) -> SurfaceQuadratureRule {
    let mut breaks = Vec::with_capacity(4);
    breaks.push(0.0);
    breaks.extend(segment_roots(phi, a, b, h, 8));
    breaks.push(1.0);
    let mut out = SurfaceQuadratureRule::default();
    for w in breaks.windows(2) {
        let mid = 0.5 * (w[0] + w[1]);
        let xm = [a[0] + mid * (b[0] - a[0]), a[1] + mid * (b[1] - a[1])];
        if w[1] > w[0] && side.contains(phi.sample(xm, h)) {
            push_segment(&mut out, a, b, w[0], w[1], normal, degree);
        }
    }
    out
}

fn push_segment(
    out: &mut SurfaceQuadratureRule,
    a: [f64; 2],
    b: [f64; 2],
    t0: f64,
    t1: f64,
    normal: [f64; 2],
    degree: usize,
) {
    let len = crate::math::hypot(b[0] - a[0], b[1] - a[1]);
    let rule = gauss_rule_1d(points_for_degree(degree)).expect("degree within range");
    for (t, w) in rule.mapped(t0, t1) {
        out.push([a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])], w * len, normal);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::powi;
    use crate::space::Axis;

    #[test]
    fn full_cell_basics() {
        let cell = CellBox { lo: [0.0, 0.0], h: 1.0 };
        let r = full_cell_rule(&cell, 1);
        assert_eq!(r.len(), 1);
        assert_eq!(r.weights[0], 1.0);
        let cell = CellBox { lo: [0.5, -0.25], h: 0.75 };
        let r = full_cell_rule(&cell, 2);
        assert!((r.measure() - 0.5625).abs() < 1e-15);
        let q = r.integrate(|x| x[0] * x[0] * x[1] * x[1]);
        let ix = (powi(1.25, 3) - powi(0.5, 3)) / 3.0;
        let iy = (powi(0.5, 3) - powi(-0.25, 3)) / 3.0;
        assert!((q - ix * iy).abs() < 1e-13);
    }

    #[test]
    fn face_rules() {
        let r = aligned_face_rule([0.0, 0.0], [0.0, 0.5], [-1.0, 0.0], 1);
        assert_eq!(r.points, [[0.0, 0.25]]);
        assert_eq!(r.measure(), 0.5);
        let r = aligned_face_rule([1.0, 2.0], [3.0, 2.0], [0.0, 1.0], 3);
        let q = r.integrate(|x, _| powi(x[0], 3));
        assert!((q - (81.0 - 1.0) / 4.0).abs() < 1e-12);

        let phi = LevelSet::half_plane(Axis::X, 0.3);
        let r = clipped_face_rule([0.0, 0.0], [1.0, 0.0], [0.0, -1.0], &phi, Side::Inside, 2, 1.0);
        assert!((r.measure() - 0.3).abs() < 1e-15);
        let r = clipped_face_rule([0.0, 0.0], [1.0, 0.0], [0.0, -1.0], &phi, Side::Outside, 2, 1.0);
        assert!((r.measure() - 0.7).abs() < 1e-15);
    }
}
