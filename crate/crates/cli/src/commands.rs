use std::fs;
use std::path::{Path, PathBuf};
use std::sync::mpsc;

use rayon::prelude::*;
use rayon::ThreadPool;

use cutwave::analysis::{
    convergence_study, cut_sweep, error_norms, material_area, ExactData, ExactSolution, Scenario, SweepProblem,
};
use cutwave::quadrature::SurfaceQuadratureRule;
use cutwave::system::{
    assemble, integrate, paper_time_step, set_initial_conditions, uniform_steps, BoundaryKind, Discretization,
};

use crate::config::RunConfig;
use crate::error::{CliError, Result};
use crate::output::{
    convergence_row, cutsweep_row, write_triplets, write_vtk, CsvOut, GridField, CONVERGENCE_COLUMNS, CUTSWEEP_COLUMNS,
};

/// Worker pool and result ordering shared by the study commands.
pub struct Executor {
    pool: ThreadPool,
    deterministic: bool,
}

impl Executor {
    pub fn new(threads: Option<usize>, deterministic: bool) -> Result<Self> {
        if threads == Some(0) {
            return Err(CliError::Usage("--threads must be at least 1".into()));
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads.unwrap_or(0))
            .build()
            .map_err(|e| CliError::Usage(format!("cannot start worker pool: {e}")))?;
        Ok(Self { pool, deterministic })
    }

    /// Runs `work` on every job and hands the results to `sink`: in job
    /// order when deterministic, otherwise as soon as each job finishes.
    /// Each job is computed sequentially, so its result does not depend on
    /// the thread count either way.
    pub fn run<J, R>(
        &self,
        jobs: &[J],
        work: impl Fn(&J) -> R + Sync,
        mut sink: impl FnMut(R) -> Result<()>,
    ) -> Result<()>
    where
        J: Sync,
        R: Send,
    {
        if self.deterministic {
            let results: Vec<R> = self.pool.install(|| jobs.par_iter().map(&work).collect());
            return results.into_iter().try_for_each(sink);
        }
        let (tx, rx) = mpsc::channel();
        let (pool, work) = (&self.pool, &work);
        std::thread::scope(|s| {
            s.spawn(move || {
                pool.install(|| {
                    jobs.par_iter().for_each_with(tx, |tx, j| {
                        // the receiver only disappears after an error
                        let _ = tx.send(work(j));
                    })
                })
            });
            rx.into_iter().try_for_each(&mut sink)
        })
    }
}

fn prepare_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(CliError::io(dir))
}

pub fn converge(cfg: &RunConfig, exec: &Executor, out: &Path, scenarios: &[Scenario]) -> Result<PathBuf> {
    prepare_dir(out)?;
    let path = out.join("convergence.csv");
    let mut csv = CsvOut::create(&path, "convergence", &CONVERGENCE_COLUMNS)?;
    let study = cfg.study();
    let jobs: Vec<(Scenario, usize)> =
        scenarios.iter().flat_map(|&s| cfg.orders.iter().map(move |&p| (s, p))).collect();
    exec.run(
        &jobs,
        |&(s, p)| convergence_study(&study, s, &[p], cfg.refinements),
        |records| {
            for r in &records {
                csv.row(convergence_row(r))?;
            }
            csv.flush()
        },
    )?;
    Ok(path)
}

pub fn cutsweep(cfg: &RunConfig, exec: &Executor, out: &Path, stabilized: bool) -> Result<PathBuf> {
    prepare_dir(out)?;
    let name = if stabilized { "cutsweep.csv" } else { "cutsweep_unstabilized.csv" };
    let path = out.join(name);
    let mut csv = CsvOut::create(&path, "cutsweep", &CUTSWEEP_COLUMNS)?;
    let study = cfg.study();
    let jobs: Vec<(SweepProblem, usize)> =
        cfg.sweep_problems.iter().flat_map(|&k| cfg.orders.iter().map(move |&p| (k, p))).collect();
    exec.run(
        &jobs,
        |&(k, p)| cut_sweep(&study, k, p, &cfg.fractions, stabilized),
        |records| {
            for r in &records? {
                csv.row(cutsweep_row(r))?;
            }
            csv.flush()
        },
    )?;
    Ok(path)
}

fn discretization(cfg: &RunConfig) -> Result<(Discretization, Box<dyn ExactSolution>)> {
    let (mut problem, exact) = cfg.study().scenario(cfg.problem, cfg.order, cfg.cells)?;
    if let Some(q) = cfg.quadrature_degree {
        problem.quadrature_degree = q;
    }
    Ok((Discretization::new(problem)?, exact))
}

/// Displacement magnitude at cell-centred points of an `n × n` grid over the
/// background mesh; NaN where no domain contains the point.
pub fn sample_magnitude(disc: &Discretization, coeffs: &[f64], n: usize) -> GridField {
    let mesh = &disc.problem().mesh;
    let o = mesh.origin();
    let sx = mesh.nx() as f64 * mesh.h() / n as f64;
    let sy = mesh.ny() as f64 * mesh.h() / n as f64;
    let origin = [o[0] + 0.5 * sx, o[1] + 0.5 * sy];
    let mut values = Vec::with_capacity(n * n);
    for j in 0..n {
        for i in 0..n {
            let x = [origin[0] + i as f64 * sx, origin[1] + j as f64 * sy];
            values.push(disc.evaluate(coeffs, x).map_or(f64::NAN, |(_, s)| s.value[0].hypot(s.value[1])));
        }
    }
    GridField { origin, spacing: [sx, sy], dims: [n, n], values }
}

pub fn run(cfg: &RunConfig, out: &Path, export_matrices: bool) -> Result<Vec<PathBuf>> {
    prepare_dir(out)?;
    let (disc, exact) = discretization(cfg)?;
    let problem = disc.problem();
    let tau_max = paper_time_step(problem.mesh.h(), cfg.order, problem.max_wave_speed(), cfg.safety);
    let sys = assemble(&disc)?;
    let mut written = vec![];
    if export_matrices {
        for (name, m) in [("mass.csv", &sys.mass), ("stiffness.csv", &sys.stiffness)] {
            let path = out.join(name);
            write_triplets(&path, "triplets", m)?;
            written.push(path);
        }
    }
    let mut state = set_initial_conditions(
        &disc,
        &sys,
        |d, x| exact.displacement(d, x, 0.0),
        |d, x| exact.velocity(d, x, 0.0),
        0.0,
    );
    let data = ExactData(&*exact);
    let mut times = cfg.snapshot_times.clone();
    times.sort_by(f64::total_cmp);
    let summary_path = out.join("run.csv");
    let mut summary = CsvOut::create(&summary_path, "run", &["snapshot", "time", "steps", "energy", "l2_error", "file"])?;
    for (k, &t) in times.iter().enumerate() {
        let mut steps = 0;
        if t > state.t {
            let (n, tau) = uniform_steps(t - state.t, tau_max);
            state = integrate(&sys, &mut |s, b| disc.load(&data, s, b), state, tau, n);
            state.t = t;
            steps = n;
        }
        let field = sample_magnitude(&disc, &state.xi, cfg.samples);
        let path = out.join(format!("snapshot_{k:03}.vtk"));
        write_vtk(&path, &format!("cutwave {} p={} t={t}", cfg.problem, cfg.order), &field)?;
        let l2 = error_norms(&disc, &state.xi, |d, x| (exact.displacement(d, x, t), exact.gradient(d, x, t))).0;
        summary.row([
            k.to_string(),
            format!("{t}"),
            steps.to_string(),
            format!("{:.10e}", sys.energy(&state)),
            format!("{l2:.10e}"),
            path.file_name().unwrap().to_string_lossy().into_owned(),
        ])?;
        written.push(path);
    }
    summary.flush()?;
    written.push(summary_path);
    Ok(written)
}

/// Measures reported by `quadtest`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSummary {
    pub area: f64,
    pub dirichlet_length: f64,
    pub neumann_length: f64,
    pub interface_length: f64,
}

pub fn quadtest(cfg: &RunConfig, out: &Path) -> Result<(Vec<PathBuf>, QuadratureSummary)> {
    prepare_dir(out)?;
    let (disc, _) = discretization(cfg)?;
    let vol_path = out.join("quad_volume.csv");
    let mut vol = CsvOut::create(&vol_path, "quadrature-volume", &["domain", "cell", "x", "y", "weight"])?;
    for d in 0..disc.problem().domain_count() {
        for cr in disc.volume_rules(d) {
            for (x, w) in cr.rule.points.iter().zip(&cr.rule.weights) {
                vol.row([d.to_string(), cr.cell.to_string(), g(x[0]), g(x[1]), g(*w)])?;
            }
        }
    }
    vol.flush()?;

    let surf_path = out.join("quad_surface.csv");
    let mut surf =
        CsvOut::create(&surf_path, "quadrature-surface", &["domain", "cell", "kind", "x", "y", "weight", "nx", "ny"])?;
    let mut summary = QuadratureSummary { area: material_area(&disc), dirichlet_length: 0.0, neumann_length: 0.0, interface_length: 0.0 };
    let mut emit = |domain: usize, cell: usize, kind: &str, rule: &SurfaceQuadratureRule| {
        for ((x, w), n) in rule.points.iter().zip(&rule.weights).zip(&rule.normals) {
            surf.row([domain.to_string(), cell.to_string(), kind.to_string(), g(x[0]), g(x[1]), g(*w), g(n[0]), g(n[1])])?;
        }
        Ok::<_, CliError>(rule.measure())
    };
    for b in disc.boundary_pieces() {
        let (kind, acc) = match b.kind {
            BoundaryKind::Dirichlet => ("dirichlet", &mut summary.dirichlet_length),
            BoundaryKind::Neumann => ("neumann", &mut summary.neumann_length),
        };
        *acc += emit(b.domain, b.cell, kind, &b.rule)?;
    }
    // interface normals point out of the domain with index 1
    for (cell, rule) in disc.interface_rules() {
        summary.interface_length += emit(1, *cell, "interface", rule)?;
    }
    surf.flush()?;
    Ok((vec![vol_path, surf_path], summary))
}

fn g(v: f64) -> String {
    format!("{v:.17e}")
}
