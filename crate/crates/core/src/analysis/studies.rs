use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;
use core::str::FromStr;

use super::exact::{fd_self_check, ExactData, ExactSolution, PlaneWave, Transmission};
use super::norms::error_norms;
use super::spectral::{cfl_number, condition_number_with};
use crate::error::{Error, Result};
use crate::forms::{Material, PenaltyOverrides};
use crate::geometry::{LevelSet, Side};
use crate::math::{ln, powi, sqrt};
use crate::space::{Axis, BackgroundMesh};
use crate::system::{
    assemble, integrate, paper_time_step, set_initial_conditions, uniform_steps, BoundaryKind, Discretization,
    LdlFactor, Pivots, Problem,
};

/// Time-dependent test case of a convergence study.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scenario {
    /// Plane wave in one material around a circular cavity, with exact
    /// traction data on the cavity and exact displacement on the outer boundary.
    PlaneWaveCavity,
    /// Plane wave crossing a flat material interface.
    Transmission,
}

impl Scenario {
    pub fn name(self) -> &'static str {
        match self {
            Scenario::PlaneWaveCavity => "single-planewave-circle-cavity",
            Scenario::Transmission => "interface-transmission",
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scenario {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "single" | "single-planewave-circle-cavity" => Ok(Scenario::PlaneWaveCavity),
            "interface" | "interface-transmission" => Ok(Scenario::Transmission),
            _ => Err(Error::InvalidParameter("unknown scenario")),
        }
    }
}

/// Physical and numerical parameters shared by the studies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StudyConfig {
    /// Material of the single domain and of domain 1; domain 2 uses the second entry.
    pub materials: [Material; 2],
    pub omega: f64,
    pub end_time: f64,
    /// Factor in `τ = safety · h / (p² max c_p)`.
    pub safety: f64,
    /// Side of the square `[−L/2, L/2]²`.
    pub length: f64,
    pub cavity_radius: f64,
    /// Cells per side on the coarsest level.
    pub coarse_cells: usize,
    pub penalty: PenaltyOverrides,
    /// Condition on the cut side of the single-domain sweep problem.
    pub sweep_cut_boundary: BoundaryKind,
}

impl Default for StudyConfig {
    fn default() -> Self {
        Self {
            materials: [Material::SANDSTONE, Material::GRANITE],
            omega: PI,
            end_time: 2.0,
            safety: 0.2,
            length: 2.0 * PI,
            cavity_radius: 1.0,
            coarse_cells: 12,
            penalty: PenaltyOverrides::default(),
            sweep_cut_boundary: BoundaryKind::Neumann,
        }
    }
}

impl StudyConfig {
    /// Interface position: offset from the centre by `h₀(√2 − 1)` with `h₀`
    /// the coarsest mesh size, so that no level fits the interface.
    pub fn interface_x(&self) -> f64 {
        self.length / self.coarse_cells as f64 * (sqrt(2.0) - 1.0)
    }

    pub fn mesh(&self, cells: usize) -> Result<BackgroundMesh> {
        BackgroundMesh::square([-0.5 * self.length, -0.5 * self.length], self.length, cells)
    }

    fn with_overrides(&self, problem: Problem) -> Problem {
        let penalty = self.penalty.apply(problem.penalty);
        problem.with_penalty(penalty)
    }

    /// Problem and exact solution of `scenario` on `cells × cells` cells.
    pub fn scenario(&self, scenario: Scenario, order: usize, cells: usize) -> Result<(Problem, Box<dyn ExactSolution>)> {
        let mesh = self.mesh(cells)?;
        let (problem, exact): (Problem, Box<dyn ExactSolution>) = match scenario {
            Scenario::PlaneWaveCavity => {
                let phi = LevelSet::circle([0.0, 0.0], self.cavity_radius)?;
                let m = self.materials[0];
                (Problem::single(mesh, order, phi, Side::Outside, m), Box::new(PlaneWave::new(m, self.omega)))
            }
            Scenario::Transmission => {
                let xi = self.interface_x();
                let phi = LevelSet::half_plane(Axis::X, xi).complement();
                (
                    Problem::interface(mesh, order, phi, self.materials),
                    Box::new(Transmission::new(self.materials, self.omega, xi)),
                )
            }
        };
        Ok((self.with_overrides(problem), exact))
    }

    /// Finite-difference check of the exact solution of `scenario` at 100
    /// points of the computational square.
    pub fn self_check(&self, scenario: Scenario) -> f64 {
        let lo = [-0.5 * self.length; 2];
        let hi = [0.5 * self.length; 2];
        match scenario {
            Scenario::PlaneWaveCavity => fd_self_check(&PlaneWave::new(self.materials[0], self.omega), lo, hi, 100, |_| 0),
            Scenario::Transmission => {
                let t = Transmission::new(self.materials, self.omega, self.interface_x());
                fd_self_check(&t, lo, hi, 100, |x| t.domain_at(x))
            }
        }
    }
}

/// Error of one `(p, h)` run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRecord {
    pub scenario: Scenario,
    pub p: usize,
    pub h: f64,
    pub dofs: usize,
    pub l2_error: f64,
    pub h1_error: f64,
    /// `log₂(e_{2h} / e_h)` against the previous level of the same order.
    pub fitted_order: Option<f64>,
}

/// Largest finite-difference residual an exact solution may show before a
/// study refuses to use it.
pub const SELF_CHECK_TOLERANCE: f64 = 1e-6;

/// Runs `scenario` to the end time and measures the error there.
pub fn run_level(cfg: &StudyConfig, scenario: Scenario, order: usize, cells: usize) -> Result<ConvergenceRecord> {
    if !(cfg.self_check(scenario) <= SELF_CHECK_TOLERANCE) {
        return Err(Error::NonFinite("exact solution fails its finite-difference self-check"));
    }
    let (problem, exact) = cfg.scenario(scenario, order, cells)?;
    let h = problem.mesh.h();
    let tau_max = paper_time_step(h, order, problem.max_wave_speed(), cfg.safety);
    let disc = Discretization::new(problem)?;
    let sys = assemble(&disc)?;
    let state = set_initial_conditions(
        &disc,
        &sys,
        |d, x| exact.displacement(d, x, 0.0),
        |d, x| exact.velocity(d, x, 0.0),
        0.0,
    );
    let (steps, tau) = uniform_steps(cfg.end_time, tau_max);
    let data = ExactData(&*exact);
    let end = integrate(&sys, &mut |t, out| disc.load(&data, t, out), state, tau, steps);
    let t = end.t;
    let (l2, h1) = error_norms(&disc, &end.xi, |d, x| (exact.displacement(d, x, t), exact.gradient(d, x, t)));
    if !(l2.is_finite() && h1.is_finite()) {
        return Err(Error::NonFinite("error norm"));
    }
    Ok(ConvergenceRecord { scenario, p: order, h, dofs: disc.dim(), l2_error: l2, h1_error: h1, fitted_order: None })
}

/// `log₂(coarse / fine)`.
pub fn fit_order(coarse: f64, fine: f64) -> f64 {
    ln(coarse / fine) / ln(2.0)
}

/// Fills `fitted_order` from consecutive levels of equal order.
pub fn fit_orders(records: &mut [ConvergenceRecord]) {
    for i in 1..records.len() {
        let (prev, cur) = (records[i - 1], records[i]);
        if prev.p == cur.p && prev.scenario == cur.scenario && cur.h < prev.h {
            records[i].fitted_order = Some(fit_order(prev.l2_error, cur.l2_error));
        }
    }
}

/// Levels `coarse_cells · 2^k` for `k < refinements` per order. A failed
/// level is recorded with NaN errors instead of aborting the study.
pub fn convergence_study(
    cfg: &StudyConfig,
    scenario: Scenario,
    orders: &[usize],
    refinements: usize,
) -> Vec<ConvergenceRecord> {
    let mut out = Vec::new();
    for &p in orders {
        for k in 0..refinements {
            let cells = cfg.coarse_cells << k;
            out.push(run_level(cfg, scenario, p, cells).unwrap_or(ConvergenceRecord {
                scenario,
                p,
                h: cfg.length / cells as f64,
                dofs: 0,
                l2_error: f64::NAN,
                h1_error: f64::NAN,
                fitted_order: None,
            }));
        }
    }
    fit_orders(&mut out);
    out
}

/// Geometry of the cut-size sweep on the 9×9 unit-square mesh.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepProblem {
    /// Material left of `x = 8h + h_cut`: the last column is cut. Dirichlet
    /// data on the aligned sides, traction data on the cut.
    Single,
    /// Material 1 left of `x = 4h + h_cut`, material 2 right of it:
    /// the middle column is cut. Dirichlet data on the outer boundary.
    Interface,
}

impl SweepProblem {
    pub fn name(self) -> &'static str {
        match self {
            SweepProblem::Single => "single",
            SweepProblem::Interface => "interface",
        }
    }
}

impl fmt::Display for SweepProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepProblem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "single" => Ok(SweepProblem::Single),
            "interface" => Ok(SweepProblem::Interface),
            _ => Err(Error::InvalidParameter("unknown sweep problem")),
        }
    }
}

/// Cells per side of the sweep mesh.
pub const SWEEP_CELLS: usize = 9;

/// `10⁻¹, …, 10⁻¹⁰`.
pub fn default_fractions() -> Vec<f64> {
    (1..=10).map(|k| powi(10.0, -k)).collect()
}

/// Sweep problem for cut fraction `h_cut / h`.
pub fn sweep_problem(cfg: &StudyConfig, kind: SweepProblem, order: usize, fraction: f64) -> Result<Problem> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(Error::InvalidParameter("cut fraction must lie in (0, 1)"));
    }
    let mesh = BackgroundMesh::square([0.0, 0.0], 1.0, SWEEP_CELLS)?;
    let h = mesh.h();
    let problem = match kind {
        SweepProblem::Single => {
            let phi = LevelSet::half_plane(Axis::X, (SWEEP_CELLS - 1) as f64 * h + fraction * h);
            Problem::single(mesh, order, phi, Side::Inside, cfg.materials[0]).with_immersed(cfg.sweep_cut_boundary)
        }
        SweepProblem::Interface => {
            let mid = (SWEEP_CELLS / 2) as f64;
            let phi = LevelSet::half_plane(Axis::X, mid * h + fraction * h).complement();
            Problem::interface(mesh, order, phi, cfg.materials)
        }
    };
    Ok(cfg.with_overrides(problem))
}

/// Abscissa `log₁₀(x) − log₁₀(1 − x)` for plotting interface sweeps, which
/// spreads fractions near both 0 and 1.
pub fn interface_axis(fraction: f64) -> f64 {
    libm::log10(fraction) - libm::log10(1.0 - fraction)
}

/// Spectral properties for one cut fraction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CutSweepRecord {
    pub problem: SweepProblem,
    pub p: usize,
    pub hcut_over_h: f64,
    pub stabilized: bool,
    pub cond_mass: f64,
    pub cond_stiffness: f64,
    pub cfl: f64,
}

/// Condition numbers of `M` and `A` and the CFL number of one problem.
/// Quantities that cannot be computed are NaN.
pub fn sweep_point(problem: Problem) -> Result<(f64, f64, f64)> {
    let h = problem.mesh.h();
    let disc = Discretization::new(problem)?;
    let (m, a) = disc.assemble_matrices();
    let coords = disc.node_positions();
    let (cond_m, cfl) = match LdlFactor::new(&m, &coords, 2, Pivots::Positive) {
        Ok(fm) => (
            condition_number_with(&m, &fm).unwrap_or(f64::NAN),
            cfl_number(&a, &fm, h).unwrap_or(f64::NAN),
        ),
        Err(_) => (f64::NAN, f64::NAN),
    };
    let cond_a = match LdlFactor::new(&a, &coords, 2, Pivots::Positive) {
        Ok(fa) => condition_number_with(&a, &fa).unwrap_or(f64::NAN),
        Err(_) => f64::NAN,
    };
    Ok((cond_m, cond_a, cfl))
}

/// Runs [`sweep_point`] for every fraction.
pub fn cut_sweep(
    cfg: &StudyConfig,
    kind: SweepProblem,
    order: usize,
    fractions: &[f64],
    stabilized: bool,
) -> Result<Vec<CutSweepRecord>> {
    let mut out = vec![];
    for &fraction in fractions {
        let mut problem = sweep_problem(cfg, kind, order, fraction)?;
        if !stabilized {
            problem = problem.without_stabilization();
        }
        let (cond_mass, cond_stiffness, cfl) = sweep_point(problem)?;
        out.push(CutSweepRecord { problem: kind, p: order, hcut_over_h: fraction, stabilized, cond_mass, cond_stiffness, cfl });
    }
    Ok(out)
}
