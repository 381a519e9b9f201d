//! Materials, penalty parameters and element-local bilinear/linear forms.

mod local;

pub use local::{
    ghost_penalty_weight, local_body_neumann_load, local_bulk, local_dirichlet_load, local_ghost_penalty,
    local_interface, local_mass, local_nitsche_dirichlet, LocalMatrix,
};

use crate::error::{Error, Result};
use crate::math::sqrt;

/// Isotropic, homogeneous linear-elastic material.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Material {
    pub rho: f64,
    pub lambda: f64,
    pub mu: f64,
}

impl Material {
    pub fn new(rho: f64, lambda: f64, mu: f64) -> Result<Self> {
        if !(rho > 0.0) || !rho.is_finite() {
            return Err(Error::InvalidParameter("density must be positive"));
        }
        if !(mu > 0.0) || !mu.is_finite() {
            return Err(Error::InvalidParameter("shear modulus must be positive"));
        }
        if !(lambda >= 0.0) || !lambda.is_finite() {
            return Err(Error::InvalidParameter("lambda must be nonnegative"));
        }
        Ok(Self { rho, lambda, mu })
    }

    /// Sandstone: `ρ = 1, λ = 1.1429, μ = 1`.
    pub const SANDSTONE: Material = Material { rho: 1.0, lambda: 1.1429, mu: 1.0 };

    /// Granite: `ρ = 1.1154, λ = 2.6182, μ = 1.8`.
    pub const GRANITE: Material = Material { rho: 1.1154, lambda: 2.6182, mu: 1.8 };

    /// P-wave modulus `η = 2μ + λ`.
    pub fn eta(&self) -> f64 {
        2.0 * self.mu + self.lambda
    }

    pub fn cp(&self) -> f64 {
        sqrt(self.eta() / self.rho)
    }

    pub fn cs(&self) -> f64 {
        sqrt(self.mu / self.rho)
    }

    /// Acoustic impedance for P-waves, `ρ c_p`.
    pub fn impedance(&self) -> f64 {
        self.rho * self.cp()
    }
}

/// Nitsche, interface and ghost-penalty parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PenaltyConfig {
    pub gamma_d: f64,
    pub gamma_i: f64,
    pub gamma_m: [f64; 2],
    pub gamma_a: [f64; 2],
    pub kappa: [f64; 2],
}

impl PenaltyConfig {
    /// Default scalings for order `p` and the given domain materials (one
    /// material for a single domain, two for an interface problem):
    /// `γ_D = 5p²`, `γ_M = ρ/4`, `γ_A = η/2`, `κ₁ = η₂/(η₁+η₂)`,
    /// `κ₂ = η₁/(η₁+η₂)` and `γ_I = 20p² η₁η₂/(η₁+η₂)`.
    pub fn scaled(p: usize, materials: &[Material]) -> Self {
        let pp = (p * p) as f64;
        let m1 = materials[0];
        let m2 = *materials.get(1).unwrap_or(&m1);
        let (e1, e2) = (m1.eta(), m2.eta());
        Self {
            gamma_d: 5.0 * pp,
            gamma_i: 20.0 * pp * e1 * e2 / (e1 + e2),
            gamma_m: [m1.rho / 4.0, m2.rho / 4.0],
            gamma_a: [e1 / 2.0, e2 / 2.0],
            kappa: [e2 / (e1 + e2), e1 / (e1 + e2)],
        }
    }

    /// Same parameters with both ghost penalties switched off.
    pub fn without_stabilization(self) -> Self {
        Self { gamma_m: [0.0; 2], gamma_a: [0.0; 2], ..self }
    }

    pub fn validate(&self) -> Result<()> {
        let pos = |v: f64| v > 0.0 && v.is_finite();
        let nonneg = |v: f64| v >= 0.0 && v.is_finite();
        if !pos(self.gamma_d) || !pos(self.gamma_i) {
            return Err(Error::InvalidParameter("Nitsche penalties must be positive"));
        }
        if !self.gamma_m.iter().chain(&self.gamma_a).all(|&g| nonneg(g)) {
            return Err(Error::InvalidParameter("ghost penalties must be nonnegative"));
        }
        if !self.kappa.iter().all(|&k| pos(k)) || (self.kappa[0] + self.kappa[1] - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter("interface weights must be positive and sum to one"));
        }
        Ok(())
    }
}

/// User overrides of individual [`PenaltyConfig`] entries. Setting `kappa1`
/// sets `κ₂ = 1 − κ₁`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PenaltyOverrides {
    pub gamma_d: Option<f64>,
    pub gamma_i: Option<f64>,
    pub gamma_m: [Option<f64>; 2],
    pub gamma_a: [Option<f64>; 2],
    pub kappa1: Option<f64>,
}

impl PenaltyOverrides {
    pub fn is_empty(&self) -> bool {
        *self == Self::default()
    }

    pub fn apply(&self, mut p: PenaltyConfig) -> PenaltyConfig {
        p.gamma_d = self.gamma_d.unwrap_or(p.gamma_d);
        p.gamma_i = self.gamma_i.unwrap_or(p.gamma_i);
        for d in 0..2 {
            p.gamma_m[d] = self.gamma_m[d].unwrap_or(p.gamma_m[d]);
            p.gamma_a[d] = self.gamma_a[d].unwrap_or(p.gamma_a[d]);
        }
        if let Some(k) = self.kappa1 {
            p.kappa = [k, 1.0 - k];
        }
        p
    }
}

pub type Tensor2 = [[f64; 2]; 2];

/// Symmetric part of the displacement gradient `grad[i][j] = ∂u_i/∂x_j`.
pub fn strain(grad: &Tensor2) -> Tensor2 {
    let off = 0.5 * (grad[0][1] + grad[1][0]);
    [[grad[0][0], off], [off, grad[1][1]]]
}

/// `σ = 2με + λ tr(ε) I`.
pub fn stress(grad: &Tensor2, m: &Material) -> Tensor2 {
    let e = strain(grad);
    let tr = e[0][0] + e[1][1];
    [
        [2.0 * m.mu * e[0][0] + m.lambda * tr, 2.0 * m.mu * e[0][1]],
        [2.0 * m.mu * e[1][0], 2.0 * m.mu * e[1][1] + m.lambda * tr],
    ]
}

/// `σ·n`.
pub fn traction(grad: &Tensor2, m: &Material, n: [f64; 2]) -> [f64; 2] {
    let s = stress(grad, m);
    [s[0][0] * n[0] + s[0][1] * n[1], s[1][0] * n[0] + s[1][1] * n[1]]
}
