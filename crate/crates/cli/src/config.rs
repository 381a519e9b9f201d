//! `key = value` run configuration.

use std::path::PathBuf;

use cutwave::analysis::{default_fractions, Scenario, StudyConfig, SweepProblem};
use cutwave::forms::{Material, PenaltyOverrides};
use cutwave::system::BoundaryKind;

use crate::error::{CliError, Result};

/// Everything a command needs. [`RunConfig::default`] is the paper setup.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// Time-dependent scenario for `run`, `quadtest` and `converge`.
    pub problem: Scenario,
    pub order: usize,
    /// Cells per side for `run` and `quadtest`.
    pub cells: usize,
    /// Cells per side on the coarsest `converge` level.
    pub coarse_cells: usize,
    pub refinements: usize,
    pub orders: Vec<usize>,
    pub materials: [Material; 2],
    pub penalty: PenaltyOverrides,
    pub omega: f64,
    pub end_time: f64,
    pub safety: f64,
    /// Overrides the default `2p + 2`.
    pub quadrature_degree: Option<usize>,
    pub sweep_problems: Vec<SweepProblem>,
    pub fractions: Vec<f64>,
    pub sweep_cut_boundary: BoundaryKind,
    pub snapshot_times: Vec<f64>,
    /// Sample points per side of the VTK grid.
    pub samples: usize,
    pub output: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            problem: Scenario::PlaneWaveCavity,
            order: 2,
            cells: 24,
            coarse_cells: 12,
            refinements: 3,
            orders: vec![1, 2, 3],
            materials: [Material::SANDSTONE, Material::GRANITE],
            penalty: PenaltyOverrides::default(),
            omega: std::f64::consts::PI,
            end_time: 2.0,
            safety: 0.2,
            quadrature_degree: None,
            sweep_problems: vec![SweepProblem::Single, SweepProblem::Interface],
            fractions: default_fractions(),
            sweep_cut_boundary: BoundaryKind::Neumann,
            snapshot_times: vec![0.0, 1.0, 2.0],
            samples: 200,
            output: PathBuf::from("out"),
        }
    }
}

impl RunConfig {
    pub fn study(&self) -> StudyConfig {
        StudyConfig {
            materials: self.materials,
            omega: self.omega,
            end_time: self.end_time,
            safety: self.safety,
            coarse_cells: self.coarse_cells,
            penalty: self.penalty,
            sweep_cut_boundary: self.sweep_cut_boundary,
            ..StudyConfig::default()
        }
    }
}

fn parse_list<T>(value: &str, item: impl Fn(&str) -> std::result::Result<T, String>) -> std::result::Result<Vec<T>, String> {
    let items: Vec<T> = value.split(',').map(|s| item(s.trim())).collect::<std::result::Result<_, _>>()?;
    if items.is_empty() {
        return Err("empty list".into());
    }
    Ok(items)
}

fn number(s: &str) -> std::result::Result<f64, String> {
    match s.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(format!("`{s}` is not a finite number")),
    }
}

fn count(s: &str) -> std::result::Result<usize, String> {
    s.parse::<usize>().map_err(|_| format!("`{s}` is not a nonnegative integer"))
}

pub fn parse_order(s: &str) -> std::result::Result<usize, String> {
    match count(s)? {
        p @ 1..=5 => Ok(p),
        p => Err(format!("order {p} outside 1..=5")),
    }
}

fn boundary(s: &str) -> std::result::Result<BoundaryKind, String> {
    match s {
        "dirichlet" => Ok(BoundaryKind::Dirichlet),
        "neumann" => Ok(BoundaryKind::Neumann),
        _ => Err(format!("`{s}` is not `dirichlet` or `neumann`")),
    }
}

/// Parses `key = value` lines. Blank lines and `#` comments are ignored,
/// unknown keys and malformed values are errors carrying the line number.
/// `origin` names the source in error messages.
pub fn parse_config(text: &str, origin: &str) -> Result<RunConfig> {
    let mut cfg = RunConfig::default();
    // material fields as given, validated together at the end
    let mut mat = [[cfg.materials[0].rho, cfg.materials[0].lambda, cfg.materials[0].mu], [
        cfg.materials[1].rho,
        cfg.materials[1].lambda,
        cfg.materials[1].mu,
    ]];
    let mut last_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let err = |message: String| CliError::Config { path: origin.to_string(), line, message };
        let (key, value) = content.split_once('=').ok_or_else(|| err(format!("expected `key = value`, got `{content}`")))?;
        let (key, value) = (key.trim(), value.trim());
        let set: std::result::Result<(), String> = (|| {
            match key {
                "problem" => cfg.problem = value.parse().map_err(|_| format!("unknown problem `{value}`"))?,
                "order" => cfg.order = parse_order(value)?,
                "cells" => cfg.cells = count(value)?,
                "coarse_cells" => cfg.coarse_cells = count(value)?,
                "refinements" => cfg.refinements = count(value)?,
                "orders" => cfg.orders = parse_list(value, parse_order)?,
                "rho1" => mat[0][0] = number(value)?,
                "lambda1" => mat[0][1] = number(value)?,
                "mu1" => mat[0][2] = number(value)?,
                "rho2" => mat[1][0] = number(value)?,
                "lambda2" => mat[1][1] = number(value)?,
                "mu2" => mat[1][2] = number(value)?,
                "gamma_d" => cfg.penalty.gamma_d = Some(number(value)?),
                "gamma_i" => cfg.penalty.gamma_i = Some(number(value)?),
                "gamma_m1" => cfg.penalty.gamma_m[0] = Some(number(value)?),
                "gamma_m2" => cfg.penalty.gamma_m[1] = Some(number(value)?),
                "gamma_a1" => cfg.penalty.gamma_a[0] = Some(number(value)?),
                "gamma_a2" => cfg.penalty.gamma_a[1] = Some(number(value)?),
                "kappa1" => cfg.penalty.kappa1 = Some(number(value)?),
                "omega" => cfg.omega = number(value)?,
                "end_time" => cfg.end_time = number(value)?,
                "safety" => cfg.safety = number(value)?,
                "quadrature_degree" => cfg.quadrature_degree = Some(count(value)?),
                "sweep_problems" => {
                    cfg.sweep_problems =
                        parse_list(value, |s| s.parse::<SweepProblem>().map_err(|_| format!("unknown sweep problem `{s}`")))?
                }
                "fractions" => cfg.fractions = parse_list(value, number)?,
                "sweep_cut_boundary" => cfg.sweep_cut_boundary = boundary(value)?,
                "snapshot_times" => cfg.snapshot_times = parse_list(value, number)?,
                "samples" => cfg.samples = count(value)?,
                "output" => cfg.output = PathBuf::from(value),
                _ => return Err(format!("unknown key `{key}`")),
            }
            Ok(())
        })();
        set.map_err(err)?;
    }
    let invalid = |message: String| CliError::Config { path: origin.to_string(), line: last_line, message };
    for (d, m) in mat.iter().enumerate() {
        cfg.materials[d] = Material::new(m[0], m[1], m[2]).map_err(|e| invalid(format!("material {}: {e}", d + 1)))?;
    }
    validate(&cfg).map_err(invalid)?;
    Ok(cfg)
}

fn validate(cfg: &RunConfig) -> std::result::Result<(), String> {
    if cfg.cells < 2 || cfg.coarse_cells < 2 {
        return Err("meshes need at least 2 cells per side".into());
    }
    if cfg.refinements == 0 {
        return Err("refinements must be at least 1".into());
    }
    if !(cfg.omega > 0.0 && cfg.end_time >= 0.0 && cfg.safety > 0.0) {
        return Err("omega and safety must be positive, end_time nonnegative".into());
    }
    if cfg.fractions.iter().any(|&f| !(f > 0.0 && f < 1.0)) {
        return Err("cut fractions must lie in (0, 1)".into());
    }
    if cfg.snapshot_times.iter().any(|&t| t < 0.0) {
        return Err("snapshot times must be nonnegative".into());
    }
    if cfg.samples < 2 {
        return Err("samples must be at least 2".into());
    }
    let probe = cutwave::forms::PenaltyConfig::scaled(1, &cfg.materials);
    cfg.penalty.apply(probe).validate().map_err(|e| e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_text_gives_defaults() {
        assert_eq!(parse_config("", "t").unwrap(), RunConfig::default());
        assert_eq!(parse_config("# only a comment\n\n", "t").unwrap(), RunConfig::default());
    }

    #[test]
    fn overrides_and_round_trip() {
        let c = parse_config("order = 3 # cubic\nlambda2 = 2.6182\nfractions = 0.5, 1e-3\n", "t").unwrap();
        assert_eq!(c.order, 3);
        assert_eq!(c.materials[1].lambda, 2.6182);
        assert_eq!(c.fractions, vec![0.5, 1e-3]);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = parse_config("order = 2\nbogus = 1\n", "cfg.txt").unwrap_err().to_string();
        assert_eq!(e, "cfg.txt:2: unknown key `bogus`");
        let e = parse_config("\n\norder = x", "c").unwrap_err().to_string();
        assert!(e.starts_with("c:3:"), "{e}");
        assert!(parse_config("order\n", "c").is_err());
        assert!(parse_config("rho1 = -1\n", "c").is_err());
        assert!(parse_config("kappa1 = 1.5\n", "c").is_err());
    }
}
