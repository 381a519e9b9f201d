//! Level-set geometry and classification of background cells.
//!
//! The sign convention is fixed: `φ < 0` is the inside (the domain of a
//! single-domain problem posed inside the curve, or `Ω₂` of an interface
//! problem) and `φ > 0` the outside.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math::hypot;
use crate::space::{Axis, BackgroundMesh, CellBox, Face};

/// Values with `|φ| < TIE_TOLERANCE * h` are treated as `+TIE_TOLERANCE * h`.
pub const TIE_TOLERANCE: f64 = 1e-12;

/// Bisection steps used when locating a root on a segment.
pub const BISECTION_STEPS: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq)]
enum Shape {
    Circle { center: [f64; 2], radius: f64 },
    Line { normal: [f64; 2], offset: f64 },
}

/// Built-in level sets with analytic gradients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelSet {
    shape: Shape,
    sign: f64,
}

impl LevelSet {
    /// Signed distance to a circle, negative inside.
    pub fn circle(center: [f64; 2], radius: f64) -> Result<Self> {
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(Error::InvalidParameter("circle radius must be positive"));
        }
        Ok(Self { shape: Shape::Circle { center, radius }, sign: 1.0 })
    }

    /// `φ = x_axis - offset`: negative below/left of the line.
    pub fn half_plane(axis: Axis, offset: f64) -> Self {
        Self { shape: Shape::Line { normal: axis.unit(), offset }, sign: 1.0 }
    }

    /// `φ = n·x - offset` with `n` normalized: a straight line of any slope.
    pub fn line(normal: [f64; 2], offset: f64) -> Result<Self> {
        let len = hypot(normal[0], normal[1]);
        if !(len > 0.0) || !len.is_finite() {
            return Err(Error::InvalidParameter("line normal must be nonzero"));
        }
        Ok(Self {
            shape: Shape::Line { normal: [normal[0] / len, normal[1] / len], offset: offset / len },
            sign: 1.0,
        })
    }

    /// Same zero set with inside and outside swapped.
    pub fn complement(self) -> Self {
        Self { sign: -self.sign, ..self }
    }

    pub fn evaluate(&self, x: [f64; 2]) -> f64 {
        let raw = match self.shape {
            Shape::Circle { center, radius } => hypot(x[0] - center[0], x[1] - center[1]) - radius,
            Shape::Line { normal, offset } => normal[0] * x[0] + normal[1] * x[1] - offset,
        };
        self.sign * raw
    }

    pub fn gradient(&self, x: [f64; 2]) -> [f64; 2] {
        let g = match self.shape {
            Shape::Circle { center, .. } => {
                let d = [x[0] - center[0], x[1] - center[1]];
                let r = hypot(d[0], d[1]);
                if r == 0.0 {
                    [0.0, 0.0]
                } else {
                    [d[0] / r, d[1] / r]
                }
            }
            Shape::Line { normal, .. } => normal,
        };
        [self.sign * g[0], self.sign * g[1]]
    }

    /// Unit normal `∇φ/|∇φ|`.
    pub fn unit_normal(&self, x: [f64; 2]) -> [f64; 2] {
        let g = self.gradient(x);
        let n = hypot(g[0], g[1]);
        [g[0] / n, g[1] / n]
    }

    /// Value with the tie-breaking perturbation applied.
    #[inline]
    pub(crate) fn sample(&self, x: [f64; 2], h: f64) -> f64 {
        let v = self.evaluate(x);
        if v.abs() < TIE_TOLERANCE * h {
            TIE_TOLERANCE * h
        } else {
            v
        }
    }
}

/// Which sign of the level set is the material region.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    /// `φ < 0`
    Inside,
    /// `φ > 0`
    Outside,
}

impl Side {
    pub fn contains(self, value: f64) -> bool {
        match self {
            Side::Inside => value < 0.0,
            Side::Outside => value > 0.0,
        }
    }

    pub fn opposite(self) -> Side {
        match self {
            Side::Inside => Side::Outside,
            Side::Outside => Side::Inside,
        }
    }

    /// Sign turning `∇φ/|∇φ|` into the normal pointing out of this side.
    pub fn outward_sign(self) -> f64 {
        match self {
            Side::Inside => 1.0,
            Side::Outside => -1.0,
        }
    }
}

/// Classification of one cell with respect to a material side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CellClass {
    Inside,
    Outside,
    Cut,
}

/// Sign pattern of `φ` over a cell, independent of the material side.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SignClass {
    Negative,
    Positive,
    Mixed,
}

impl SignClass {
    pub fn for_side(self, side: Side) -> CellClass {
        match (self, side) {
            (SignClass::Mixed, _) => CellClass::Cut,
            (SignClass::Negative, Side::Inside) | (SignClass::Positive, Side::Outside) => CellClass::Inside,
            _ => CellClass::Outside,
        }
    }
}

/// Sampling controls for classification and segment root finding.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sampling {
    /// Sub-segments per cell edge scanned for sign changes.
    pub edge_samples: usize,
}

impl Default for Sampling {
    fn default() -> Self {
        Self { edge_samples: 8 }
    }
}

/// Roots of `φ` on the segment `a → b`, as parameters in `(0, 1)`.
///
/// The segment is scanned at `samples` sub-segments using tie-broken signs;
/// every sign change is refined by bisection on the raw level-set values so
/// that tiny cuts keep their exact size.
pub fn segment_roots(phi: &LevelSet, a: [f64; 2], b: [f64; 2], h: f64, samples: usize) -> Vec<f64> {
    let samples = samples.max(1);
    let at = |t: f64| [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];
    let mut roots = Vec::new();
    let mut t0 = 0.0;
    let mut f0 = phi.sample(at(0.0), h);
    for k in 1..=samples {
        let t1 = k as f64 / samples as f64;
        let f1 = phi.sample(at(t1), h);
        if (f0 < 0.0) != (f1 < 0.0) {
            let (mut lo, mut hi) = (t0, t1);
            let neg_at_lo = f0 < 0.0;
            for _ in 0..BISECTION_STEPS {
                let mid = 0.5 * (lo + hi);
                if (phi.evaluate(at(mid)) < 0.0) == neg_at_lo {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
        t0 = t1;
        f0 = f1;
    }
    roots
}

/// Classifies one cell by sign sampling along its edges; a cell whose edges
/// all share one sign but whose interior does not is rejected as ambiguous.
pub fn classify_cell(phi: &LevelSet, cell: &CellBox, index: usize, sampling: &Sampling) -> Result<SignClass> {
    let m = sampling.edge_samples.max(1);
    let h = cell.h;
    let mut negative = false;
    let mut positive = false;
    let corners = cell.corners();
    for e in 0..4 {
        let a = corners[e];
        let b = corners[(e + 1) % 4];
        for k in 0..m {
            let t = k as f64 / m as f64;
            let v = phi.sample([a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])], h);
            if v < 0.0 {
                negative = true;
            } else {
                positive = true;
            }
        }
        if !segment_roots(phi, a, b, h, m).is_empty() {
            return Ok(SignClass::Mixed);
        }
    }
    if negative && positive {
        return Ok(SignClass::Mixed);
    }
    // interior scan for features enclosed by the cell
    for j in 1..m {
        for i in 1..m {
            let xi = [i as f64 / m as f64, j as f64 / m as f64];
            let v = phi.sample(cell.to_physical(xi), h);
            if (v < 0.0) != negative {
                return Err(Error::AmbiguousCell { cell: index });
            }
        }
    }
    Ok(if negative { SignClass::Negative } else { SignClass::Positive })
}

/// Sign classification of every background cell.
pub fn classify_signs(mesh: &BackgroundMesh, phi: &LevelSet, sampling: &Sampling) -> Result<Vec<SignClass>> {
    (0..mesh.cell_count())
        .map(|c| classify_cell(phi, &mesh.cell_box(c), c, sampling))
        .collect()
}

/// Per-cell classification with respect to `side`.
pub fn classify_cells(mesh: &BackgroundMesh, phi: &LevelSet, side: Side) -> Result<Vec<CellClass>> {
    Ok(classify_signs(mesh, phi, &Sampling::default())?
        .into_iter()
        .map(|s| s.for_side(side))
        .collect())
}

/// Active cells, cut cells and stabilized faces of one material side.
#[derive(Debug, Clone, PartialEq)]
pub struct CutTopology {
    side: Side,
    classes: Vec<CellClass>,
    active_cells: Vec<usize>,
    cut_cells: Vec<usize>,
    stabilized_faces: Vec<Face>,
}

impl CutTopology {
    pub fn new(mesh: &BackgroundMesh, phi: &LevelSet, side: Side) -> Result<Self> {
        let signs = classify_signs(mesh, phi, &Sampling::default())?;
        Ok(Self::from_signs(mesh, &signs, side))
    }

    pub fn from_signs(mesh: &BackgroundMesh, signs: &[SignClass], side: Side) -> Self {
        let classes: Vec<CellClass> = signs.iter().map(|s| s.for_side(side)).collect();
        let active_cells = (0..classes.len()).filter(|&c| classes[c] != CellClass::Outside).collect();
        let cut_cells = (0..classes.len()).filter(|&c| classes[c] == CellClass::Cut).collect();
        let stabilized_faces = stabilized_face_set(mesh, &classes);
        Self { side, classes, active_cells, cut_cells, stabilized_faces }
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn classes(&self) -> &[CellClass] {
        &self.classes
    }

    pub fn class(&self, cell: usize) -> CellClass {
        self.classes[cell]
    }

    pub fn is_active(&self, cell: usize) -> bool {
        self.classes[cell] != CellClass::Outside
    }

    /// Cells of the covering set: inside or cut.
    pub fn active_cells(&self) -> &[usize] {
        &self.active_cells
    }

    pub fn cut_cells(&self) -> &[usize] {
        &self.cut_cells
    }

    /// Interior faces between two active cells where at least one is cut.
    pub fn stabilized_faces(&self) -> &[Face] {
        &self.stabilized_faces
    }
}

/// Faces `F = T_a ∩ T_b` with both cells active and at least one cut.
pub fn stabilized_face_set(mesh: &BackgroundMesh, classes: &[CellClass]) -> Vec<Face> {
    let active = |c: usize| classes[c] != CellClass::Outside;
    let cut = |c: usize| classes[c] == CellClass::Cut;
    mesh.interior_faces()
        .into_iter()
        .filter(|f| active(f.lower) && active(f.upper) && (cut(f.lower) || cut(f.upper)))
        .collect()
}

/// Number of 4-connected components of a cell set.
pub fn connected_components(mesh: &BackgroundMesh, cells: &[usize]) -> usize {
    let mut member = vec![false; mesh.cell_count()];
    for &c in cells {
        member[c] = true;
    }
    let mut seen = vec![false; mesh.cell_count()];
    let mut count = 0;
    let mut stack = Vec::new();
    for &start in cells {
        if seen[start] {
            continue;
        }
        count += 1;
        seen[start] = true;
        stack.push(start);
        while let Some(c) = stack.pop() {
            for side in crate::space::CellSide::ALL {
                if let Some(n) = mesh.neighbor(c, side) {
                    if member[n] && !seen[n] {
                        seen[n] = true;
                        stack.push(n);
                    }
                }
            }
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    #[test]
    fn circle_values() {
        let phi = LevelSet::circle([0.0, 0.0], 1.0).unwrap();
        assert_eq!(phi.evaluate([1.0, 0.0]), 0.0);
        assert_eq!(phi.evaluate([2.0, 0.0]), 1.0);
        assert_eq!(phi.gradient([0.0, 3.0]), [0.0, 1.0]);
        assert!(LevelSet::circle([0.0, 0.0], 0.0).is_err());
        assert!(LevelSet::circle([0.0, 0.0], -1.0).is_err());
        let c = phi.complement();
        assert_eq!(c.evaluate([2.0, 0.0]), -1.0);
        assert_eq!(c.gradient([2.0, 0.0]), [-1.0, 0.0]);
    }

    #[test]
    fn mesh_inside_disc_is_all_inside() {
        let phi = LevelSet::circle([0.0, 0.0], 1.0).unwrap();
        let mesh = BackgroundMesh::square([-0.5, -0.5], 1.0, 4).unwrap();
        let classes = classify_cells(&mesh, &phi, Side::Inside).unwrap();
        assert!(classes.iter().all(|&c| c == CellClass::Inside));
        let outside = classify_cells(&mesh, &phi, Side::Outside).unwrap();
        assert!(outside.iter().all(|&c| c == CellClass::Outside));
    }

    #[test]
    fn half_plane_cuts_one_column() {
        let mesh = BackgroundMesh::square([0.0, 0.0], 9.0, 9).unwrap();
        let phi = LevelSet::half_plane(Axis::X, 3.4);
        let classes = classify_cells(&mesh, &phi, Side::Inside).unwrap();
        for c in 0..mesh.cell_count() {
            let (ix, _) = mesh.cell_coords(c);
            let expected = match ix {
                0..=2 => CellClass::Inside,
                3 => CellClass::Cut,
                _ => CellClass::Outside,
            };
            assert_eq!(classes[c], expected, "cell {c}");
        }
    }

    #[test]
    fn last_column_cut_of_size_hcut() {
        let h = 1.0 / 9.0;
        let mesh = BackgroundMesh::square([0.0, 0.0], 1.0, 9).unwrap();
        for frac in [1e-1, 1e-4, 1e-10] {
            let phi = LevelSet::half_plane(Axis::X, 8.0 * h + frac * h);
            let classes = classify_cells(&mesh, &phi, Side::Inside).unwrap();
            for c in 0..mesh.cell_count() {
                let (ix, _) = mesh.cell_coords(c);
                let expected = if ix == 8 { CellClass::Cut } else { CellClass::Inside };
                assert_eq!(classes[c], expected);
            }
        }
    }

    #[test]
    fn grid_aligned_zero_set_is_pushed_outside() {
        // x = 1 is a grid line; its corners count as outside, so the left
        // cells are cut with an empty outside part and the right cells are outside
        let mesh = BackgroundMesh::square([0.0, 0.0], 2.0, 2).unwrap();
        let phi = LevelSet::half_plane(Axis::X, 1.0);
        let classes = classify_cells(&mesh, &phi, Side::Inside).unwrap();
        assert_eq!(classes, [CellClass::Cut, CellClass::Outside, CellClass::Cut, CellClass::Outside]);
    }

    #[test]
    fn enclosed_feature_is_ambiguous() {
        let mesh = BackgroundMesh::square([-1.0, -1.0], 2.0, 1).unwrap();
        let phi = LevelSet::circle([0.0, 0.0], 0.2).unwrap();
        assert!(matches!(classify_cells(&mesh, &phi, Side::Inside), Err(Error::AmbiguousCell { cell: 0 })));
    }

    #[test]
    fn fitted_mesh_has_no_stabilized_faces() {
        let mesh = BackgroundMesh::square([0.0, 0.0], 1.0, 5).unwrap();
        let phi = LevelSet::half_plane(Axis::X, 10.0);
        let topo = CutTopology::new(&mesh, &phi, Side::Inside).unwrap();
        assert!(topo.stabilized_faces().is_empty());
        assert!(topo.cut_cells().is_empty());
        assert_eq!(topo.active_cells().len(), 25);
    }

    #[test]
    fn circle_cut_cells_form_one_ring() {
        let phi = LevelSet::circle([0.0, 0.0], 1.0).unwrap();
        for n in [12, 24, 48] {
            let mesh = BackgroundMesh::square([-PI, -PI], 2.0 * PI, n).unwrap();
            let topo = CutTopology::new(&mesh, &phi, Side::Outside).unwrap();
            assert_eq!(connected_components(&mesh, topo.cut_cells()), 1, "n={n}");
            // ring: the enclosed region is a separate component from the outside
            let inner: Vec<usize> = (0..mesh.cell_count())
                .filter(|&c| topo.class(c) == CellClass::Outside)
                .collect();
            assert_eq!(connected_components(&mesh, &inner), 1);
        }
    }
}
