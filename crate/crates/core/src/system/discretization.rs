use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use super::problem::{BoundaryKind, Problem, ProblemData, Setting};
use super::sparse::{SparseSymmetricMatrix, TripletList};
use crate::error::{Error, Result};
use crate::forms::{
    local_body_neumann_load, local_bulk, local_dirichlet_load, local_ghost_penalty, local_interface, local_mass,
    local_nitsche_dirichlet, LocalMatrix,
};
use crate::geometry::{CellClass, CutTopology};
use crate::quadrature::{
    aligned_face_rule, clipped_face_rule, cut_cell_rules, full_cell_rule, CutCellRules, QuadratureRule,
    SurfaceQuadratureRule,
};
use crate::space::{evaluate_field, DofMap, ElementBasis, FieldSample};

/// Quadrature rule on the material part of one cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CellRule {
    pub cell: usize,
    pub rule: QuadratureRule,
}

/// Boundary piece of one domain inside one cell, with outward normals.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryPiece {
    pub domain: usize,
    pub cell: usize,
    pub kind: BoundaryKind,
    pub rule: SurfaceQuadratureRule,
}

/// Geometry, DoF numbering and quadrature of a [`Problem`].
#[derive(Debug, Clone)]
pub struct Discretization {
    problem: Problem,
    basis: ElementBasis,
    topologies: Vec<CutTopology>,
    dofs: DofMap,
    volume: Vec<Vec<CellRule>>,
    boundary: Vec<BoundaryPiece>,
    interface: Vec<(usize, SurfaceQuadratureRule)>,
    ghost: [LocalMatrix; 2],
}

impl Discretization {
    pub fn new(problem: Problem) -> Result<Self> {
        problem.penalty.validate()?;
        let basis = ElementBasis::new(problem.order)?;
        let mesh = &problem.mesh;
        let h = mesh.h();
        let phi = &problem.level_set;
        let degree = problem.quadrature_degree;
        let topologies = (0..problem.domain_count())
            .map(|d| CutTopology::new(mesh, phi, problem.side(d)))
            .collect::<Result<Vec<_>>>()?;
        let refs: Vec<&CutTopology> = topologies.iter().collect();
        let dofs = DofMap::build(mesh, &basis, &refs);

        let mut cut: BTreeMap<usize, CutCellRules> = BTreeMap::new();
        for topo in &topologies {
            for &cell in topo.cut_cells() {
                if !cut.contains_key(&cell) {
                    cut.insert(cell, cut_cell_rules(&mesh.cell_box(cell), phi, degree, cell)?);
                }
            }
        }

        let mut volume = Vec::with_capacity(topologies.len());
        for (d, topo) in topologies.iter().enumerate() {
            let side = problem.side(d);
            let rules = topo
                .active_cells()
                .iter()
                .map(|&cell| {
                    let rule = match topo.class(cell) {
                        CellClass::Cut => cut[&cell].volume(side).clone(),
                        _ => full_cell_rule(&mesh.cell_box(cell), degree),
                    };
                    CellRule { cell, rule }
                })
                .collect();
            volume.push(rules);
        }

        let mut boundary = Vec::new();
        for (cell, side) in mesh.boundary_sides() {
            let (a, b) = side.segment(&mesh.cell_box(cell));
            let normal = side.outward_normal();
            for (d, topo) in topologies.iter().enumerate() {
                let rule = match topo.class(cell) {
                    CellClass::Outside => continue,
                    CellClass::Inside => aligned_face_rule(a, b, normal, degree),
                    CellClass::Cut => clipped_face_rule(a, b, normal, phi, problem.side(d), degree, h),
                };
                if !rule.is_empty() {
                    boundary.push(BoundaryPiece { domain: d, cell, kind: problem.outer, rule });
                }
            }
        }

        let mut interface = Vec::new();
        match problem.setting {
            Setting::Single { side, immersed, .. } => {
                for (&cell, rules) in &cut {
                    if !rules.surface.is_empty() {
                        boundary.push(BoundaryPiece { domain: 0, cell, kind: immersed, rule: rules.surface_from(side) });
                    }
                }
            }
            Setting::Interface { .. } => {
                for (&cell, rules) in &cut {
                    if !rules.surface.is_empty() {
                        // normals point out of φ < 0, i.e. from domain 2 into domain 1
                        interface.push((cell, rules.surface.clone()));
                    }
                }
            }
        }

        let ghost = [
            local_ghost_penalty(&basis, true, h, problem.order)?,
            local_ghost_penalty(&basis, false, h, problem.order)?,
        ];
        Ok(Self { problem, basis, topologies, dofs, volume, boundary, interface, ghost })
    }

    pub fn problem(&self) -> &Problem {
        &self.problem
    }

    pub fn basis(&self) -> &ElementBasis {
        &self.basis
    }

    pub fn dofs(&self) -> &DofMap {
        &self.dofs
    }

    pub fn topology(&self, domain: usize) -> &CutTopology {
        &self.topologies[domain]
    }

    pub fn dim(&self) -> usize {
        self.dofs.total_dofs()
    }

    /// Volume rules of `domain`, one per covering cell.
    pub fn volume_rules(&self, domain: usize) -> &[CellRule] {
        &self.volume[domain]
    }

    pub fn boundary_pieces(&self) -> &[BoundaryPiece] {
        &self.boundary
    }

    pub fn interface_rules(&self) -> &[(usize, SurfaceQuadratureRule)] {
        &self.interface
    }

    /// Total length of the Dirichlet part of the boundary.
    pub fn dirichlet_measure(&self) -> f64 {
        self.boundary.iter().filter(|b| b.kind == BoundaryKind::Dirichlet).map(|b| b.rule.measure()).sum()
    }

    /// Node position per DoF pair, used for ordering.
    /// Domain containing `x` by the sign of the level set, or `None` if `x`
    /// lies outside every domain or outside the mesh.
    pub fn domain_at(&self, x: [f64; 2]) -> Option<usize> {
        self.problem.mesh.locate(x)?;
        let phi = self.problem.level_set.evaluate(x);
        (0..self.problem.domain_count()).find(|&d| self.problem.side(d).contains(phi))
    }

    /// Discrete field `coeffs` at `x` in the domain containing `x`.
    pub fn evaluate(&self, coeffs: &[f64], x: [f64; 2]) -> Option<(usize, FieldSample)> {
        let d = self.domain_at(x)?;
        let mesh = &self.problem.mesh;
        evaluate_field(mesh, &self.basis, &self.dofs, coeffs, d, x).ok().map(|s| (d, s))
    }

    pub fn node_positions(&self) -> Vec<[f64; 2]> {
        self.dofs.node_positions()
    }

    /// Mass and stiffness matrices.
    pub fn assemble_matrices(&self) -> (SparseSymmetricMatrix, SparseSymmetricMatrix) {
        let n = self.dim();
        let h = self.problem.mesh.h();
        let pen = &self.problem.penalty;
        let mut m = TripletList::new(n);
        let mut a = TripletList::new(n);
        let mut dofs = Vec::new();
        let mut other = Vec::new();
        let cell_box = |c: usize| self.problem.mesh.cell_box(c);

        for d in 0..self.topologies.len() {
            let mat = self.problem.material(d);
            for cr in &self.volume[d] {
                self.dofs.cell_dofs(d, cr.cell, &mut dofs);
                let cb = cell_box(cr.cell);
                let km = local_mass(&self.basis, &cb, &cr.rule, mat.rho);
                m.add_block(&dofs, &dofs, 1.0, |i, j| km.get(i, j));
                let ka = local_bulk(&self.basis, &cb, &cr.rule, mat);
                a.add_block(&dofs, &dofs, 1.0, |i, j| ka.get(i, j));
            }
            let (gm, ga) = (pen.gamma_m[d], pen.gamma_a[d] / (h * h));
            for face in self.topologies[d].stabilized_faces() {
                self.dofs.cell_dofs(d, face.lower, &mut dofs);
                self.dofs.cell_dofs(d, face.upper, &mut other);
                dofs.extend_from_slice(&other);
                let g = &self.ghost[if face.normal_x { 0 } else { 1 }];
                if gm != 0.0 {
                    m.add_block(&dofs, &dofs, gm, |i, j| g.get(i, j));
                }
                if ga != 0.0 {
                    a.add_block(&dofs, &dofs, ga, |i, j| g.get(i, j));
                }
            }
        }

        for piece in self.boundary.iter().filter(|b| b.kind == BoundaryKind::Dirichlet) {
            self.dofs.cell_dofs(piece.domain, piece.cell, &mut dofs);
            let mat = self.problem.material(piece.domain);
            let k = local_nitsche_dirichlet(&self.basis, &cell_box(piece.cell), &piece.rule, mat, pen.gamma_d, h);
            a.add_block(&dofs, &dofs, 1.0, |i, j| k.get(i, j));
        }

        if let Setting::Interface { materials } = &self.problem.setting {
            for (cell, rule) in &self.interface {
                self.dofs.cell_dofs(0, *cell, &mut dofs);
                self.dofs.cell_dofs(1, *cell, &mut other);
                dofs.extend_from_slice(&other);
                let k = local_interface(
                    &self.basis,
                    &cell_box(*cell),
                    rule,
                    [&materials[0], &materials[1]],
                    pen.kappa,
                    pen.gamma_i,
                    h,
                );
                a.add_block(&dofs, &dofs, 1.0, |i, j| k.get(i, j));
            }
        }

        (SparseSymmetricMatrix::from_triplets(m), SparseSymmetricMatrix::from_triplets(a))
    }

    /// Load vector `L(t)` for the given data, written into `out`.
    pub fn load<D: ProblemData + ?Sized>(&self, data: &D, t: f64, out: &mut [f64]) {
        out.iter_mut().for_each(|v| *v = 0.0);
        let h = self.problem.mesh.h();
        let pen = &self.problem.penalty;
        let mut dofs = Vec::new();
        let empty_volume = QuadratureRule::default();
        let empty_surface = SurfaceQuadratureRule::default();
        let scatter = |out: &mut [f64], dofs: &[usize], local: &[f64]| {
            for (&g, &v) in dofs.iter().zip(local) {
                out[g] += v;
            }
        };

        if data.has_body_force() {
            for d in 0..self.topologies.len() {
                for cr in &self.volume[d] {
                    self.dofs.cell_dofs(d, cr.cell, &mut dofs);
                    let l = local_body_neumann_load(
                        &self.basis,
                        &self.problem.mesh.cell_box(cr.cell),
                        &cr.rule,
                        |x| data.body_force(d, x, t),
                        &empty_surface,
                        |_, _| [0.0; 2],
                    );
                    scatter(out, &dofs, &l);
                }
            }
        }

        for piece in &self.boundary {
            self.dofs.cell_dofs(piece.domain, piece.cell, &mut dofs);
            let cb = self.problem.mesh.cell_box(piece.cell);
            let d = piece.domain;
            let l = match piece.kind {
                BoundaryKind::Dirichlet => local_dirichlet_load(
                    &self.basis,
                    &cb,
                    &piece.rule,
                    self.problem.material(d),
                    pen.gamma_d,
                    h,
                    |x| data.dirichlet(d, x, t),
                ),
                BoundaryKind::Neumann => local_body_neumann_load(
                    &self.basis,
                    &cb,
                    &empty_volume,
                    |_| [0.0; 2],
                    &piece.rule,
                    |x, n| data.traction(d, x, n, t),
                ),
            };
            scatter(out, &dofs, &l);
        }
    }

    /// `Σ_i ∫_{Ω_i} w_i u·v` for every basis function `v`, with `w_i = ρ_i`
    /// when `density` is set and 1 otherwise.
    pub fn volume_load(&self, field: impl Fn(usize, [f64; 2]) -> [f64; 2], density: bool) -> Vec<f64> {
        let mut out = vec![0.0; self.dim()];
        let mut dofs = Vec::new();
        let empty = SurfaceQuadratureRule::default();
        for d in 0..self.topologies.len() {
            let w = if density { self.problem.material(d).rho } else { 1.0 };
            for cr in &self.volume[d] {
                self.dofs.cell_dofs(d, cr.cell, &mut dofs);
                let l = local_body_neumann_load(
                    &self.basis,
                    &self.problem.mesh.cell_box(cr.cell),
                    &cr.rule,
                    |x| {
                        let u = field(d, x);
                        [w * u[0], w * u[1]]
                    },
                    &empty,
                    |_, _| [0.0; 2],
                );
                for (&g, &v) in dofs.iter().zip(&l) {
                    out[g] += v;
                }
            }
        }
        out
    }

    /// Ghost-penalty matrix `j` of `domain`, unscaled.
    pub fn ghost_penalty_matrix(&self, domain: usize) -> SparseSymmetricMatrix {
        let mut t = TripletList::new(self.dim());
        let mut dofs = Vec::new();
        let mut other = Vec::new();
        for face in self.topologies[domain].stabilized_faces() {
            self.dofs.cell_dofs(domain, face.lower, &mut dofs);
            self.dofs.cell_dofs(domain, face.upper, &mut other);
            dofs.extend_from_slice(&other);
            let g = &self.ghost[if face.normal_x { 0 } else { 1 }];
            t.add_block(&dofs, &dofs, 1.0, |i, j| g.get(i, j));
        }
        SparseSymmetricMatrix::from_triplets(t)
    }

    /// Errors unless some part of the boundary carries Dirichlet data.
    pub fn require_dirichlet(&self) -> Result<()> {
        if self.dirichlet_measure() > 0.0 {
            Ok(())
        } else {
            Err(Error::NoDirichletBoundary)
        }
    }
}
