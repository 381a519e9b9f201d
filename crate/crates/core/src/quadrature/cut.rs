//! Quadrature on a cell cut by a level set whose zero set is a graph over
//! one coordinate axis within the cell.
//!
//! The base interval is split at the points where the zero set leaves the
//! cell through the edges parallel to it. Each base piece carries a Gauss
//! rule; through every base node runs a column in the height direction,
//! which is split at the roots of `φ` and covered by mapped Gauss rules on
//! each sign piece. Surface points are the column roots, weighted by the
//! arc-length factor `|∇φ| / |∂φ/∂height|`.

use alloc::vec::Vec;

use super::{gauss_rule_1d, points_for_degree, QuadratureRule, SurfaceQuadratureRule};
use crate::error::{Error, Result};
use crate::geometry::{segment_roots, LevelSet, Side};
use crate::math::hypot;
use crate::space::{Axis, CellBox};

/// Lines per direction used to sample the zero set when picking the height axis.
const ZERO_SET_LINES: usize = 20;

/// Sub-segments scanned per column or edge for sign changes.
const SCAN_SAMPLES: usize = 8;

/// Volume rules for both sides of the zero set and the surface rule on it.
///
/// Surface normals are `∇φ/|∇φ|`, i.e. they point out of the inside region.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CutCellRules {
    pub inside: QuadratureRule,
    pub outside: QuadratureRule,
    pub surface: SurfaceQuadratureRule,
}

impl CutCellRules {
    pub fn volume(&self, side: Side) -> &QuadratureRule {
        match side {
            Side::Inside => &self.inside,
            Side::Outside => &self.outside,
        }
    }

    /// Surface rule with normals pointing out of `side`.
    pub fn surface_from(&self, side: Side) -> SurfaceQuadratureRule {
        match side {
            Side::Inside => self.surface.clone(),
            Side::Outside => self.surface.clone().flipped(),
        }
    }
}

fn point(base: Axis, b: f64, hgt: f64) -> [f64; 2] {
    match base {
        Axis::X => [b, hgt],
        Axis::Y => [hgt, b],
    }
}

/// Height direction maximizing the smallest `|∂φ/∂axis| / |∇φ|` over sampled
/// points of the zero set inside the cell.
pub fn height_axis(cell: &CellBox, phi: &LevelSet, index: usize) -> Result<Axis> {
    let h = cell.h;
    let mut samples: Vec<[f64; 2]> = Vec::new();
    for line_axis in [Axis::X, Axis::Y] {
        let across = line_axis.other();
        for k in 0..ZERO_SET_LINES {
            let c = cell.lo[across.index()] + (k as f64 + 0.5) / ZERO_SET_LINES as f64 * h;
            let a = point(across, c, cell.lo[line_axis.index()]);
            let b = point(across, c, cell.lo[line_axis.index()] + h);
            for t in segment_roots(phi, a, b, h, SCAN_SAMPLES) {
                samples.push([a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]);
            }
        }
    }
    let corners = cell.corners();
    for e in 0..4 {
        let (a, b) = (corners[e], corners[(e + 1) % 4]);
        for t in segment_roots(phi, a, b, h, SCAN_SAMPLES) {
            samples.push([a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]);
        }
    }
    if samples.is_empty() {
        samples.push(cell.center());
    }
    let score = |axis: Axis| {
        samples
            .iter()
            .map(|&x| {
                let g = phi.gradient(x);
                let n = hypot(g[0], g[1]);
                if n > 0.0 {
                    g[axis.index()].abs() / n
                } else {
                    0.0
                }
            })
            .fold(f64::INFINITY, f64::min)
    };
    let (sx, sy) = (score(Axis::X), score(Axis::Y));
    if sx.max(sy) < 1e-10 {
        return Err(Error::NoHeightDirection { cell: index });
    }
    Ok(if sx > sy { Axis::X } else { Axis::Y })
}

/// Volume rules on both sides and the surface rule for one cut cell.
///
/// `degree` is the total polynomial degree integrated exactly when the zero
/// set is a straight line; `index` only labels errors.
pub fn cut_cell_rules(cell: &CellBox, phi: &LevelSet, degree: usize, index: usize) -> Result<CutCellRules> {
    let h = cell.h;
    let height = height_axis(cell, phi, index)?;
    let base = height.other();
    let (bi, hi) = (base.index(), height.index());
    let base_lo = cell.lo[bi];
    let height_lo = cell.lo[hi];

    let mut breaks: Vec<f64> = Vec::with_capacity(6);
    breaks.push(0.0);
    for level in [height_lo, height_lo + h] {
        let a = point(base, base_lo, level);
        let b = point(base, base_lo + h, level);
        breaks.extend(segment_roots(phi, a, b, h, SCAN_SAMPLES));
    }
    breaks.push(1.0);
    breaks.sort_by(|a, b| a.partial_cmp(b).unwrap());
    breaks.dedup_by(|a, b| (*a - *b).abs() < 1e-15);

    let base_rule = gauss_rule_1d(points_for_degree(degree) + 1)?;
    let height_rule = gauss_rule_1d(points_for_degree(degree))?;

    let mut out = CutCellRules::default();
    let mut column = Vec::with_capacity(4);
    for piece in breaks.windows(2) {
        if piece[1] <= piece[0] {
            continue;
        }
        for (t, wt) in base_rule.mapped(piece[0], piece[1]) {
            let b = base_lo + t * h;
            let wb = wt * h;
            let a = point(base, b, height_lo);
            let top = point(base, b, height_lo + h);
            column.clear();
            column.push(0.0);
            column.extend(segment_roots(phi, a, top, h, SCAN_SAMPLES));
            column.push(1.0);
            for seg in column.windows(2) {
                if seg[1] <= seg[0] {
                    continue;
                }
                let mid = point(base, b, height_lo + 0.5 * (seg[0] + seg[1]) * h);
                let target = if phi.evaluate(mid) < 0.0 { &mut out.inside } else { &mut out.outside };
                for (s, ws) in height_rule.mapped(height_lo + seg[0] * h, height_lo + seg[1] * h) {
                    target.push(point(base, b, s), wb * ws);
                }
            }
            for &s in &column[1..column.len() - 1] {
                let x = point(base, b, height_lo + s * h);
                let g = phi.gradient(x);
                let n = hypot(g[0], g[1]);
                out.surface.push(x, wb * n / g[hi].abs(), [g[0] / n, g[1] / n]);
            }
        }
    }
    Ok(out)
}

/// Rule for `T ∩ {side}`.
pub fn cut_cell_volume_rule(cell: &CellBox, phi: &LevelSet, side: Side, degree: usize) -> Result<QuadratureRule> {
    let rules = cut_cell_rules(cell, phi, degree, 0)?;
    Ok(match side {
        Side::Inside => rules.inside,
        Side::Outside => rules.outside,
    })
}

/// Rule on `Γ ∩ T` with normals pointing out of `side`.
pub fn cut_cell_surface_rule(
    cell: &CellBox,
    phi: &LevelSet,
    side: Side,
    degree: usize,
) -> Result<SurfaceQuadratureRule> {
    Ok(cut_cell_rules(cell, phi, degree, 0)?.surface_from(side))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::{powi, sqrt};

    #[test]
    fn half_plane_fraction() {
        let cell = CellBox { lo: [1.0, 2.0], h: 0.5 };
        for alpha in [0.5, 0.1, 1e-6, 1e-10] {
            let phi = LevelSet::half_plane(Axis::X, 1.0 + alpha * 0.5);
            let r = cut_cell_rules(&cell, &phi, 4, 0).unwrap();
            assert!((r.inside.measure() - alpha * 0.25).abs() < 1e-12 * 0.25 * alpha.max(1e-3));
            assert!((r.outside.measure() - (1.0 - alpha) * 0.25).abs() < 1e-12);
            assert!((r.surface.measure() - 0.5).abs() < 1e-12);
            assert!(r.surface.normals.iter().all(|n| n == &[1.0, 0.0]));
            assert!(r.inside.weights.iter().all(|&w| w > 0.0));
        }
    }

    #[test]
    fn diagonal_cut_moments() {
        // x + y < 1 on the unit cell: the lower-left triangle
        let phi = LevelSet::line([1.0, 1.0], 1.0).unwrap();
        let cell = CellBox { lo: [0.0, 0.0], h: 1.0 };
        let r = cut_cell_rules(&cell, &phi, 6, 0).unwrap();
        assert!((r.inside.measure() - 0.5).abs() < 1e-14);
        assert!((r.inside.integrate(|x| x[0]) - 1.0 / 6.0).abs() < 1e-14);
        // ∫ x^a y^b over the triangle = a! b! / (a + b + 2)!
        let exact = |a: u32, b: u32| {
            let f = |n: u32| (1..=n).map(|k| k as f64).product::<f64>();
            f(a) * f(b) / f(a + b + 2)
        };
        for a in 0..=6u32 {
            for b in 0..=(6 - a) {
                let q = r.inside.integrate(|x| powi(x[0], a as i32) * powi(x[1], b as i32));
                let e = exact(a, b);
                assert!(((q - e) / e).abs() < 1e-12, "a={a} b={b} q={q} e={e}");
            }
        }
        assert!((r.surface.measure() - sqrt(2.0)).abs() < 1e-14);
        let n = r.surface.normals[0];
        assert!((n[0] - 1.0 / sqrt(2.0)).abs() < 1e-15 && (n[1] - 1.0 / sqrt(2.0)).abs() < 1e-15);
    }

    #[test]
    fn complement_rules_add_up() {
        let phi = LevelSet::circle([0.1, -0.2], 1.0).unwrap();
        let cell = CellBox { lo: [0.75, 0.0], h: 0.25 };
        let r = cut_cell_rules(&cell, &phi, 8, 0).unwrap();
        assert!(!r.inside.is_empty() && !r.outside.is_empty());
        assert!((r.inside.measure() + r.outside.measure() - 0.0625).abs() < 1e-15);
        for (x, nrm) in r.surface.points.iter().zip(&r.surface.normals) {
            let q = [x[0] - 0.1, x[1] + 0.2];
            let len = sqrt(q[0] * q[0] + q[1] * q[1]);
            assert!((len - 1.0).abs() < 1e-13);
            assert!((nrm[0] - q[0] / len).abs() < 1e-12 && (nrm[1] - q[1] / len).abs() < 1e-12);
        }
        let flipped = r.surface_from(Side::Outside);
        assert_eq!(flipped.normals[0], [-r.surface.normals[0][0], -r.surface.normals[0][1]]);
    }

    #[test]
    fn reproducible() {
        let phi = LevelSet::circle([0.0, 0.0], 1.0).unwrap();
        let cell = CellBox { lo: [0.5, 0.5], h: 0.4 };
        assert_eq!(cut_cell_rules(&cell, &phi, 6, 0).unwrap(), cut_cell_rules(&cell, &phi, 6, 0).unwrap());
    }
}
