use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::geometry::CutTopology;
use crate::space::{BackgroundMesh, ElementBasis, ShapeValues};

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq)]
struct DomainDofs {
    offset: usize,
    node_count: usize,
    /// Local node number per grid node, `NONE` where the domain has no DoF.
    node_number: Vec<u32>,
    active: Vec<bool>,
}

/// Global numbering of vector-valued DoFs for one or two domains.
///
/// Grid nodes of the whole background mesh are laid out row by row with
/// `nx * p + 1` nodes per row. A domain owns the nodes of its covering
/// cells, numbered contiguously in grid order; DoF `2 * k + c` is component
/// `c` of its `k`-th node. The second domain of an interface problem is
/// numbered after the first, so the global vector is `[domain 1 | domain 2]`
/// and cut cells carry two independent sets of DoFs.
#[derive(Debug, Clone, PartialEq)]
pub struct DofMap {
    p: usize,
    nx: usize,
    ny: usize,
    origin: [f64; 2],
    h: f64,
    grid_nodes_1d: Vec<f64>,
    domains: Vec<DomainDofs>,
}

impl DofMap {
    /// One domain per topology, in order.
    pub fn build(mesh: &BackgroundMesh, basis: &ElementBasis, topologies: &[&CutTopology]) -> Self {
        let p = basis.order();
        let gw = mesh.nx() * p + 1;
        let gh = mesh.ny() * p + 1;
        let mut domains = Vec::with_capacity(topologies.len());
        let mut offset = 0;
        for topo in topologies {
            let mut used = vec![false; gw * gh];
            let mut active = vec![false; mesh.cell_count()];
            for &cell in topo.active_cells() {
                active[cell] = true;
                let (ix, iy) = mesh.cell_coords(cell);
                for j in 0..=p {
                    for i in 0..=p {
                        used[(iy * p + j) * gw + ix * p + i] = true;
                    }
                }
            }
            let mut node_number = vec![NONE; gw * gh];
            let mut count = 0u32;
            for (g, &u) in used.iter().enumerate() {
                if u {
                    node_number[g] = count;
                    count += 1;
                }
            }
            domains.push(DomainDofs { offset, node_count: count as usize, node_number, active });
            offset += 2 * count as usize;
        }
        Self {
            p,
            nx: mesh.nx(),
            ny: mesh.ny(),
            origin: mesh.origin(),
            h: mesh.h(),
            grid_nodes_1d: basis.nodes_1d().to_vec(),
            domains,
        }
    }

    pub fn order(&self) -> usize {
        self.p
    }

    pub fn domain_count(&self) -> usize {
        self.domains.len()
    }

    pub fn total_dofs(&self) -> usize {
        self.domains.iter().map(|d| 2 * d.node_count).sum()
    }

    pub fn domain_offset(&self, domain: usize) -> usize {
        self.domains[domain].offset
    }

    pub fn domain_dofs(&self, domain: usize) -> usize {
        2 * self.domains[domain].node_count
    }

    pub fn is_active(&self, domain: usize, cell: usize) -> bool {
        self.domains[domain].active[cell]
    }

    fn grid_width(&self) -> usize {
        self.nx * self.p + 1
    }

    /// Grid node index of local node `k` of `cell`.
    #[inline]
    pub fn grid_node(&self, cell: usize, k: usize) -> usize {
        let n = self.p + 1;
        let (ix, iy) = (cell % self.nx, cell / self.nx);
        (iy * self.p + k / n) * self.grid_width() + ix * self.p + k % n
    }

    pub fn grid_node_position(&self, g: usize) -> [f64; 2] {
        let gw = self.grid_width();
        let (gx, gy) = (g % gw, g / gw);
        let coord = |gi: usize| (gi / self.p) as f64 * self.h + self.grid_nodes_1d[gi % self.p] * self.h;
        [self.origin[0] + coord(gx), self.origin[1] + coord(gy)]
    }

    /// Global DoF of component `c` at grid node `g`, if the domain owns it.
    pub fn node_dof(&self, domain: usize, g: usize, c: usize) -> Option<usize> {
        let d = &self.domains[domain];
        match d.node_number[g] {
            NONE => None,
            k => Some(d.offset + 2 * k as usize + c),
        }
    }

    /// Global DoFs of an active cell in local order; empty if inactive.
    pub fn cell_dofs(&self, domain: usize, cell: usize, out: &mut Vec<usize>) {
        out.clear();
        let d = &self.domains[domain];
        if !d.active[cell] {
            return;
        }
        let n = (self.p + 1) * (self.p + 1);
        for k in 0..n {
            let num = d.node_number[self.grid_node(cell, k)];
            debug_assert_ne!(num, NONE);
            let base = d.offset + 2 * num as usize;
            out.push(base);
            out.push(base + 1);
        }
    }

    /// Position of the node carrying each DoF pair, indexed by `dof / 2`.
    pub fn node_positions(&self) -> Vec<[f64; 2]> {
        let mut pos = vec![[0.0; 2]; self.total_dofs() / 2];
        for d in &self.domains {
            for (g, &num) in d.node_number.iter().enumerate() {
                if num != NONE {
                    pos[d.offset / 2 + num as usize] = self.grid_node_position(g);
                }
            }
        }
        pos
    }

    pub fn grid_node_count(&self) -> usize {
        self.grid_width() * (self.ny * self.p + 1)
    }
}

/// Nodal interpolant of `field(domain, x)` on every domain.
pub fn interpolate<F>(dofs: &DofMap, field: F) -> Vec<f64>
where
    F: Fn(usize, [f64; 2]) -> [f64; 2],
{
    let mut out = vec![0.0; dofs.total_dofs()];
    for domain in 0..dofs.domain_count() {
        for g in 0..dofs.grid_node_count() {
            if let Some(d0) = dofs.node_dof(domain, g, 0) {
                let v = field(domain, dofs.grid_node_position(g));
                out[d0] = v[0];
                out[d0 + 1] = v[1];
            }
        }
    }
    out
}

/// Displacement value and gradient `∂u_i/∂x_j` of a discrete field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSample {
    pub value: [f64; 2],
    pub gradient: [[f64; 2]; 2],
}

/// Evaluates the discrete field of `domain` at `x` using cell `cell`.
pub fn evaluate_in_cell(
    mesh: &BackgroundMesh,
    basis: &ElementBasis,
    dofs: &DofMap,
    coeffs: &[f64],
    domain: usize,
    cell: usize,
    x: [f64; 2],
    shapes: &mut ShapeValues,
    cell_dofs: &mut Vec<usize>,
) -> FieldSample {
    basis.eval(&mesh.cell_box(cell), x, shapes);
    dofs.cell_dofs(domain, cell, cell_dofs);
    combine(shapes, cell_dofs, coeffs)
}

pub(crate) fn combine(shapes: &ShapeValues, cell_dofs: &[usize], coeffs: &[f64]) -> FieldSample {
    let mut value = [0.0; 2];
    let mut gradient = [[0.0; 2]; 2];
    for (k, (&v, g)) in shapes.values.iter().zip(&shapes.grads).enumerate() {
        for c in 0..2 {
            let u = coeffs[cell_dofs[2 * k + c]];
            value[c] += u * v;
            gradient[c][0] += u * g[0];
            gradient[c][1] += u * g[1];
        }
    }
    FieldSample { value, gradient }
}

/// Evaluates the discrete field of `domain` at `x`, locating the cell.
pub fn evaluate_field(
    mesh: &BackgroundMesh,
    basis: &ElementBasis,
    dofs: &DofMap,
    coeffs: &[f64],
    domain: usize,
    x: [f64; 2],
) -> Result<FieldSample> {
    let outside = Error::PointOutsideMesh { x: x[0], y: x[1] };
    let cell = mesh.locate(x).ok_or(outside.clone())?;
    // on shared edges prefer any active neighbour
    let candidates = [
        cell,
        mesh.locate([x[0] - 1e-9 * mesh.h(), x[1]]).unwrap_or(cell),
        mesh.locate([x[0], x[1] - 1e-9 * mesh.h()]).unwrap_or(cell),
        mesh.locate([x[0] - 1e-9 * mesh.h(), x[1] - 1e-9 * mesh.h()]).unwrap_or(cell),
    ];
    let cell = candidates
        .into_iter()
        .find(|&c| dofs.is_active(domain, c))
        .ok_or(outside)?;
    let mut shapes = ShapeValues::default();
    let mut cd = Vec::new();
    Ok(evaluate_in_cell(mesh, basis, dofs, coeffs, domain, cell, x, &mut shapes, &mut cd))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{LevelSet, Side};
    use crate::space::Axis;

    fn full(mesh: &BackgroundMesh) -> CutTopology {
        CutTopology::new(mesh, &LevelSet::half_plane(Axis::X, 1e6), Side::Inside).unwrap()
    }

    #[test]
    fn full_mesh_counts() {
        let mesh = BackgroundMesh::square([0.0, 0.0], 1.0, 9).unwrap();
        let topo = full(&mesh);
        let basis = ElementBasis::new(1).unwrap();
        let dofs = DofMap::build(&mesh, &basis, &[&topo]);
        assert_eq!(dofs.total_dofs(), 200);

        let mesh = BackgroundMesh::square([0.0, 0.0], 1.0, 1).unwrap();
        let basis = ElementBasis::new(3).unwrap();
        let dofs = DofMap::build(&mesh, &basis, &[&full(&mesh)]);
        assert_eq!(dofs.total_dofs(), 32);
    }

    #[test]
    fn shared_nodes_share_dofs() {
        let mesh = BackgroundMesh::square([0.0, 0.0], 1.0, 2).unwrap();
        let basis = ElementBasis::new(2).unwrap();
        let dofs = DofMap::build(&mesh, &basis, &[&full(&mesh)]);
        let mut a = Vec::new();
        let mut b = Vec::new();
        dofs.cell_dofs(0, 0, &mut a);
        dofs.cell_dofs(0, 1, &mut b);
        // right column of cell 0 equals left column of cell 1
        for j in 0..3 {
            assert_eq!(a[2 * (j * 3 + 2)], b[2 * (j * 3)]);
        }
        let positions = dofs.node_positions();
        assert_eq!(positions[a[2 * 4] / 2], [0.25, 0.25]);
        assert_eq!(positions[b[2 * 8] / 2], [1.0, 0.5]);
    }

    #[test]
    fn polynomial_reproduction() {
        let mesh = BackgroundMesh::square([-1.0, -1.0], 2.0, 3).unwrap();
        for p in 1..=4 {
            let basis = ElementBasis::new(p).unwrap();
            let dofs = DofMap::build(&mesh, &basis, &[&full(&mesh)]);
            let pe = p as i32;
            let field = |x: [f64; 2]| {
                [
                    crate::math::powi(x[0], pe) * x[1] - 0.5,
                    crate::math::powi(x[1], pe) + x[0] * x[1],
                ]
            };
            let coeffs = interpolate(&dofs, |_, x| field(x));
            for x in [[0.13, -0.71], [0.99, 0.2], [-1.0, 1.0], [0.0, 0.0]] {
                let s = evaluate_field(&mesh, &basis, &dofs, &coeffs, 0, x).unwrap();
                let e = field(x);
                assert!((s.value[0] - e[0]).abs() < 1e-11 && (s.value[1] - e[1]).abs() < 1e-11, "p={p}");
            }
        }
        let basis = ElementBasis::new(1).unwrap();
        let dofs = DofMap::build(&mesh, &basis, &[&full(&mesh)]);
        let coeffs = interpolate(&dofs, |_, _| [1.0, 1.0]);
        assert!(matches!(
            evaluate_field(&mesh, &basis, &dofs, &coeffs, 0, [3.0, 0.0]),
            Err(Error::PointOutsideMesh { .. })
        ));
    }
}
