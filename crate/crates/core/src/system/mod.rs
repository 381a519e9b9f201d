//! Global assembly, sparse direct solves, projections and explicit time
//! stepping of `M ξ'' + A ξ = L(t)`.

mod discretization;
mod ldl;
mod ordering;
mod problem;
mod sparse;

use alloc::vec;
use alloc::vec::Vec;

pub use discretization::{BoundaryPiece, CellRule, Discretization};
pub use ldl::{LdlFactor, Pivots};
pub use ordering::{invert, nested_dissection};
pub use problem::{BoundaryKind, Homogeneous, Problem, ProblemData, Setting};
pub use sparse::{SparseSymmetricMatrix, TripletList};

use crate::error::{Error, Result};
use crate::math::ceil;

/// Mass and stiffness matrices with a factorization of the mass matrix.
#[derive(Debug, Clone)]
pub struct SemiDiscreteSystem {
    pub mass: SparseSymmetricMatrix,
    pub stiffness: SparseSymmetricMatrix,
    mass_factor: LdlFactor,
    coords: Vec<[f64; 2]>,
}

impl SemiDiscreteSystem {
    /// Factors `mass`; `coords` holds one point per pair of unknowns.
    pub fn new(mass: SparseSymmetricMatrix, stiffness: SparseSymmetricMatrix, coords: Vec<[f64; 2]>) -> Result<Self> {
        if stiffness.dim() != mass.dim() {
            return Err(Error::DimensionMismatch { expected: mass.dim(), got: stiffness.dim() });
        }
        let mass_factor = LdlFactor::new(&mass, &coords, 2, Pivots::Positive)?;
        Ok(Self { mass, stiffness, mass_factor, coords })
    }

    pub fn dim(&self) -> usize {
        self.mass.dim()
    }

    pub fn mass_factor(&self) -> &LdlFactor {
        &self.mass_factor
    }

    /// Unknown positions, one per pair of unknowns.
    pub fn coords(&self) -> &[[f64; 2]] {
        &self.coords
    }

    /// Factorization of the stiffness matrix; fails unless it is positive definite.
    pub fn factor_stiffness(&self) -> Result<LdlFactor> {
        LdlFactor::new(&self.stiffness, &self.coords, 2, Pivots::Positive)
    }

    /// `½ (ξ̇ᵀ M ξ̇ + ξᵀ A ξ)`.
    pub fn energy(&self, state: &State) -> f64 {
        0.5 * (self.mass.quadratic_form(&state.xi_dot) + self.stiffness.quadratic_form(&state.xi))
    }
}

/// Assembles and factors the system of a discretization.
pub fn assemble(disc: &Discretization) -> Result<SemiDiscreteSystem> {
    let (m, a) = disc.assemble_matrices();
    SemiDiscreteSystem::new(m, a, disc.node_positions())
}

/// Displacement and velocity coefficients at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct State {
    pub xi: Vec<f64>,
    pub xi_dot: Vec<f64>,
    pub t: f64,
}

impl State {
    pub fn zeros(n: usize, t: f64) -> Self {
        Self { xi: vec![0.0; n], xi_dot: vec![0.0; n], t }
    }
}

/// Right-hand side weighting of the stabilized L² projection.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProjectionWeight {
    /// `M(Π u, v) = (u, v)_Ω`. Reproduces polynomials only for unit density.
    Unit,
    /// `M(Π u, v) = (ρ u, v)_Ω`, a projection for any density.
    Density,
}

/// Stabilized L² projection of `field(domain, x)`, integrated over the
/// material region only.
pub fn l2_project(
    disc: &Discretization,
    sys: &SemiDiscreteSystem,
    field: impl Fn(usize, [f64; 2]) -> [f64; 2],
    weight: ProjectionWeight,
) -> Vec<f64> {
    let b = disc.volume_load(field, weight == ProjectionWeight::Density);
    sys.mass_factor.solve(&b)
}

/// Discrete static solution `A ξ = L(0)`: the Ritz projection of the
/// solution of the static problem with the given data.
pub fn ritz_project<D: ProblemData + ?Sized>(
    disc: &Discretization,
    stiffness: &SparseSymmetricMatrix,
    data: &D,
) -> Result<Vec<f64>> {
    disc.require_dirichlet()?;
    let factor = LdlFactor::new(stiffness, &disc.node_positions(), 2, Pivots::Positive)?;
    let mut b = vec![0.0; disc.dim()];
    disc.load(data, 0.0, &mut b);
    Ok(factor.solve(&b))
}

/// Initial state from displacement `u0` and velocity `w0` at time `t0`,
/// both projected with [`ProjectionWeight::Density`].
pub fn set_initial_conditions(
    disc: &Discretization,
    sys: &SemiDiscreteSystem,
    u0: impl Fn(usize, [f64; 2]) -> [f64; 2],
    w0: impl Fn(usize, [f64; 2]) -> [f64; 2],
    t0: f64,
) -> State {
    State {
        xi: l2_project(disc, sys, u0, ProjectionWeight::Density),
        xi_dot: l2_project(disc, sys, w0, ProjectionWeight::Density),
        t: t0,
    }
}

/// `τ = safety · h / (p² max c_p)`.
pub fn paper_time_step(h: f64, order: usize, max_wave_speed: f64, safety: f64) -> f64 {
    safety * h / ((order * order) as f64 * max_wave_speed)
}

/// Number of equal steps reaching `end_time` with steps no longer than
/// `max_step`, and the resulting step.
pub fn uniform_steps(end_time: f64, max_step: f64) -> (usize, f64) {
    let n = (ceil(end_time / max_step - 1e-9) as usize).max(1);
    (n, end_time / n as f64)
}

/// One classical fourth order Runge-Kutta step of the first order system
/// `ξ' = v`, `M v' = L(t) − A ξ`. `load(t, out)` writes `L(t)`; it is
/// called at `t`, `t + τ/2` (twice) and `t + τ`.
pub fn rk4_advance(
    sys: &SemiDiscreteSystem,
    load: &mut dyn FnMut(f64, &mut [f64]),
    state: &State,
    tau: f64,
) -> State {
    let n = sys.dim();
    let mut work = Vec::with_capacity(n);
    let mut rhs = vec![0.0; n];
    let mut ax = vec![0.0; n];
    let mut accel = |t: f64, xi: &[f64], out: &mut Vec<f64>| {
        load(t, &mut rhs);
        sys.stiffness.matvec(xi, &mut ax);
        out.clear();
        out.extend(rhs.iter().zip(&ax).map(|(l, a)| l - a));
        sys.mass_factor.solve_in_place(out, &mut work);
    };
    let t = state.t;
    let (x0, v0) = (&state.xi, &state.xi_dot);
    let shift = |base: &[f64], dir: &[f64], s: f64| -> Vec<f64> { base.iter().zip(dir).map(|(b, d)| b + s * d).collect() };

    let mut a1 = Vec::new();
    accel(t, x0, &mut a1);
    let x2 = shift(x0, v0, 0.5 * tau);
    let v2 = shift(v0, &a1, 0.5 * tau);
    let mut a2 = Vec::new();
    accel(t + 0.5 * tau, &x2, &mut a2);
    let x3 = shift(x0, &v2, 0.5 * tau);
    let v3 = shift(v0, &a2, 0.5 * tau);
    let mut a3 = Vec::new();
    accel(t + 0.5 * tau, &x3, &mut a3);
    let x4 = shift(x0, &v3, tau);
    let v4 = shift(v0, &a3, tau);
    let mut a4 = Vec::new();
    accel(t + tau, &x4, &mut a4);

    let w = tau / 6.0;
    let xi = (0..n).map(|i| x0[i] + w * (v0[i] + 2.0 * v2[i] + 2.0 * v3[i] + v4[i])).collect();
    let xi_dot = (0..n).map(|i| v0[i] + w * (a1[i] + 2.0 * a2[i] + 2.0 * a3[i] + a4[i])).collect();
    State { xi, xi_dot, t: t + tau }
}

/// Advances `steps` steps of size `tau`.
pub fn integrate(
    sys: &SemiDiscreteSystem,
    load: &mut dyn FnMut(f64, &mut [f64]),
    mut state: State,
    tau: f64,
    steps: usize,
) -> State {
    for _ in 0..steps {
        state = rk4_advance(sys, load, &state, tau);
    }
    state
}
