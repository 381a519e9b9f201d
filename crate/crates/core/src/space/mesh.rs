use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Coordinate direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X,
    Y,
}

impl Axis {
    #[inline]
    pub fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
        }
    }

    #[inline]
    pub fn other(self) -> Axis {
        match self {
            Axis::X => Axis::Y,
            Axis::Y => Axis::X,
        }
    }

    pub fn unit(self) -> [f64; 2] {
        match self {
            Axis::X => [1.0, 0.0],
            Axis::Y => [0.0, 1.0],
        }
    }
}

/// Axis-aligned square cell `[lo, lo + h]²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellBox {
    pub lo: [f64; 2],
    pub h: f64,
}

impl CellBox {
    pub fn hi(&self) -> [f64; 2] {
        [self.lo[0] + self.h, self.lo[1] + self.h]
    }

    pub fn center(&self) -> [f64; 2] {
        [self.lo[0] + 0.5 * self.h, self.lo[1] + 0.5 * self.h]
    }

    /// Reference coordinates in `[0, 1]²`.
    #[inline]
    pub fn to_reference(&self, x: [f64; 2]) -> [f64; 2] {
        [(x[0] - self.lo[0]) / self.h, (x[1] - self.lo[1]) / self.h]
    }

    #[inline]
    pub fn to_physical(&self, xi: [f64; 2]) -> [f64; 2] {
        [self.lo[0] + xi[0] * self.h, self.lo[1] + xi[1] * self.h]
    }

    /// Corners in counter-clockwise order starting at `lo`.
    pub fn corners(&self) -> [[f64; 2]; 4] {
        let [x0, y0] = self.lo;
        let [x1, y1] = self.hi();
        [[x0, y0], [x1, y0], [x1, y1], [x0, y1]]
    }
}

/// One side of a cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CellSide {
    Left,
    Right,
    Bottom,
    Top,
}

impl CellSide {
    pub const ALL: [CellSide; 4] = [CellSide::Left, CellSide::Right, CellSide::Bottom, CellSide::Top];

    /// Outward unit normal of the side.
    pub fn outward_normal(self) -> [f64; 2] {
        match self {
            CellSide::Left => [-1.0, 0.0],
            CellSide::Right => [1.0, 0.0],
            CellSide::Bottom => [0.0, -1.0],
            CellSide::Top => [0.0, 1.0],
        }
    }

    /// Segment `(start, end)` of the side on the given cell.
    pub fn segment(self, cell: &CellBox) -> ([f64; 2], [f64; 2]) {
        let [x0, y0] = cell.lo;
        let [x1, y1] = cell.hi();
        match self {
            CellSide::Left => ([x0, y0], [x0, y1]),
            CellSide::Right => ([x1, y0], [x1, y1]),
            CellSide::Bottom => ([x0, y0], [x1, y0]),
            CellSide::Top => ([x0, y1], [x1, y1]),
        }
    }
}

/// Interior face shared by two cells. `lower` is the left (normal along x)
/// or bottom (normal along y) cell; the canonical normal points from
/// `lower` into `upper`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Face {
    pub lower: usize,
    pub upper: usize,
    pub normal_x: bool,
}

impl Face {
    pub fn normal_axis(&self) -> Axis {
        if self.normal_x {
            Axis::X
        } else {
            Axis::Y
        }
    }
}

/// Uniform background mesh of `nx × ny` square cells of side `h`.
///
/// Cells are numbered row by row: `cell = iy * nx + ix`.
#[derive(Debug, Clone, PartialEq)]
pub struct BackgroundMesh {
    origin: [f64; 2],
    h: f64,
    nx: usize,
    ny: usize,
}

impl BackgroundMesh {
    pub fn new(origin: [f64; 2], h: f64, nx: usize, ny: usize) -> Result<Self> {
        if !(h > 0.0) || !h.is_finite() {
            return Err(Error::InvalidParameter("mesh size h must be positive"));
        }
        if nx == 0 || ny == 0 {
            return Err(Error::InvalidParameter("mesh needs at least one cell per direction"));
        }
        Ok(Self { origin, h, nx, ny })
    }

    /// Square `[lo, lo + length]²` split into `n × n` cells.
    pub fn square(lo: [f64; 2], length: f64, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("mesh needs at least one cell per direction"));
        }
        Self::new(lo, length / n as f64, n, n)
    }

    pub fn origin(&self) -> [f64; 2] {
        self.origin
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn cell_count(&self) -> usize {
        self.nx * self.ny
    }

    #[inline]
    pub fn cell_index(&self, ix: usize, iy: usize) -> usize {
        iy * self.nx + ix
    }

    #[inline]
    pub fn cell_coords(&self, cell: usize) -> (usize, usize) {
        (cell % self.nx, cell / self.nx)
    }

    pub fn cell_box(&self, cell: usize) -> CellBox {
        let (ix, iy) = self.cell_coords(cell);
        CellBox {
            lo: [
                self.origin[0] + ix as f64 * self.h,
                self.origin[1] + iy as f64 * self.h,
            ],
            h: self.h,
        }
    }

    /// Cell containing `x`; points on shared edges go to the upper/right cell
    /// except on the outer boundary.
    pub fn locate(&self, x: [f64; 2]) -> Option<usize> {
        let fx = (x[0] - self.origin[0]) / self.h;
        let fy = (x[1] - self.origin[1]) / self.h;
        let tol = 1e-12;
        if fx < -tol || fy < -tol || fx > self.nx as f64 + tol || fy > self.ny as f64 + tol {
            return None;
        }
        let ix = (fx.max(0.0) as usize).min(self.nx - 1);
        let iy = (fy.max(0.0) as usize).min(self.ny - 1);
        Some(self.cell_index(ix, iy))
    }

    /// Neighbour across the given side, if any.
    pub fn neighbor(&self, cell: usize, side: CellSide) -> Option<usize> {
        let (ix, iy) = self.cell_coords(cell);
        match side {
            CellSide::Left if ix > 0 => Some(cell - 1),
            CellSide::Right if ix + 1 < self.nx => Some(cell + 1),
            CellSide::Bottom if iy > 0 => Some(cell - self.nx),
            CellSide::Top if iy + 1 < self.ny => Some(cell + self.nx),
            _ => None,
        }
    }

    /// All interior faces, each once.
    pub fn interior_faces(&self) -> Vec<Face> {
        let mut faces = Vec::with_capacity(2 * self.cell_count());
        for iy in 0..self.ny {
            for ix in 0..self.nx {
                let c = self.cell_index(ix, iy);
                if ix + 1 < self.nx {
                    faces.push(Face { lower: c, upper: c + 1, normal_x: true });
                }
                if iy + 1 < self.ny {
                    faces.push(Face { lower: c, upper: c + self.nx, normal_x: false });
                }
            }
        }
        faces
    }

    /// Sides of cells lying on the outer boundary of the mesh.
    pub fn boundary_sides(&self) -> Vec<(usize, CellSide)> {
        let mut out = Vec::new();
        for cell in 0..self.cell_count() {
            for side in CellSide::ALL {
                if self.neighbor(cell, side).is_none() {
                    out.push((cell, side));
                }
            }
        }
        out
    }
}
