//! Exact solutions, error norms, spectral diagnostics and study drivers.

mod exact;
mod norms;
mod spectral;
mod studies;

pub use exact::{fd_residual, fd_self_check, ExactData, ExactSolution, PlaneWave, StaticManufactured, Transmission};
pub use norms::{error_norms, material_area};
pub use spectral::{
    cfl_number, condition_number, condition_number_with, dense_symmetric_eigenvalues, lanczos_largest,
    largest_generalized_eigenvalue, largest_tridiagonal_eigenvalue, LanczosOptions, XorShift,
};
pub use studies::{
    convergence_study, cut_sweep, default_fractions, fit_order, fit_orders, interface_axis, run_level, sweep_point,
    sweep_problem, ConvergenceRecord, CutSweepRecord, Scenario, StudyConfig, SweepProblem, SELF_CHECK_TOLERANCE,
    SWEEP_CELLS,
};
