use crate::forms::{Material, PenaltyConfig};
use crate::geometry::{LevelSet, Side};
use crate::space::BackgroundMesh;

/// How a boundary part is treated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryKind {
    /// Prescribed displacement, imposed with Nitsche's method.
    Dirichlet,
    /// Prescribed traction.
    Neumann,
}

/// Material layout of a problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Setting {
    /// One material occupying `side` of the level set. The immersed
    /// boundary is the zero set.
    Single { material: Material, side: Side, immersed: BoundaryKind },
    /// Two materials: domain 1 where `φ > 0`, domain 2 where `φ < 0`,
    /// coupled across the zero set.
    Interface { materials: [Material; 2] },
}

/// Everything needed to build a discretization.
///
/// The outer boundary is the boundary of the background mesh restricted to
/// the material region.
#[derive(Debug, Clone, PartialEq)]
pub struct Problem {
    pub mesh: BackgroundMesh,
    pub order: usize,
    pub level_set: LevelSet,
    pub setting: Setting,
    pub outer: BoundaryKind,
    pub penalty: PenaltyConfig,
    /// Polynomial degree integrated exactly by the quadrature rules.
    pub quadrature_degree: usize,
}

impl Problem {
    /// Single domain with Dirichlet data on the outer boundary, traction
    /// data on the immersed boundary and default penalties.
    pub fn single(mesh: BackgroundMesh, order: usize, level_set: LevelSet, side: Side, material: Material) -> Self {
        Self {
            mesh,
            order,
            level_set,
            setting: Setting::Single { material, side, immersed: BoundaryKind::Neumann },
            outer: BoundaryKind::Dirichlet,
            penalty: PenaltyConfig::scaled(order, &[material]),
            quadrature_degree: 2 * order + 2,
        }
    }

    /// Two materials with Dirichlet data on the outer boundary and default penalties.
    pub fn interface(mesh: BackgroundMesh, order: usize, level_set: LevelSet, materials: [Material; 2]) -> Self {
        Self {
            mesh,
            order,
            level_set,
            setting: Setting::Interface { materials },
            outer: BoundaryKind::Dirichlet,
            penalty: PenaltyConfig::scaled(order, &materials),
            quadrature_degree: 2 * order + 2,
        }
    }

    pub fn with_outer(mut self, kind: BoundaryKind) -> Self {
        self.outer = kind;
        self
    }

    /// Changes the immersed boundary condition of a single-domain problem.
    pub fn with_immersed(mut self, kind: BoundaryKind) -> Self {
        if let Setting::Single { immersed, .. } = &mut self.setting {
            *immersed = kind;
        }
        self
    }

    pub fn with_penalty(mut self, penalty: PenaltyConfig) -> Self {
        self.penalty = penalty;
        self
    }

    pub fn without_stabilization(mut self) -> Self {
        self.penalty = self.penalty.without_stabilization();
        self
    }

    pub fn domain_count(&self) -> usize {
        match self.setting {
            Setting::Single { .. } => 1,
            Setting::Interface { .. } => 2,
        }
    }

    /// Level-set side occupied by `domain`.
    pub fn side(&self, domain: usize) -> Side {
        match self.setting {
            Setting::Single { side, .. } => side,
            Setting::Interface { .. } if domain == 0 => Side::Outside,
            Setting::Interface { .. } => Side::Inside,
        }
    }

    pub fn material(&self, domain: usize) -> &Material {
        match &self.setting {
            Setting::Single { material, .. } => material,
            Setting::Interface { materials } => &materials[domain],
        }
    }

    /// Largest P-wave speed over all domains.
    pub fn max_wave_speed(&self) -> f64 {
        (0..self.domain_count()).map(|d| self.material(d).cp()).fold(0.0, f64::max)
    }
}

/// Data of the continuous problem. `domain` is 0 or 1, `n` the outward
/// normal of the domain.
pub trait ProblemData {
    fn body_force(&self, _domain: usize, _x: [f64; 2], _t: f64) -> [f64; 2] {
        [0.0; 2]
    }

    /// Whether the body force may be nonzero; skips the volume integral otherwise.
    fn has_body_force(&self) -> bool {
        false
    }

    fn dirichlet(&self, domain: usize, x: [f64; 2], t: f64) -> [f64; 2];

    fn traction(&self, domain: usize, x: [f64; 2], n: [f64; 2], t: f64) -> [f64; 2];
}

/// All data zero.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Homogeneous;

impl ProblemData for Homogeneous {
    fn dirichlet(&self, _: usize, _: [f64; 2], _: f64) -> [f64; 2] {
        [0.0; 2]
    }

    fn traction(&self, _: usize, _: [f64; 2], _: [f64; 2], _: f64) -> [f64; 2] {
        [0.0; 2]
    }
}
