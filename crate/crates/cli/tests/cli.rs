use std::f64::consts::PI;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use cutwave_cli::commands::Executor;
use cutwave_cli::output::{write_vtk, GridField, CONVERGENCE_COLUMNS, CUTSWEEP_COLUMNS};

fn cutwave(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cutwave")).args(args).output().unwrap()
}

fn ok(args: &[&str]) -> String {
    let out = cutwave(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("run.cfg");
    fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

/// Rows after the schema comment and header, as split fields.
fn csv_rows(path: &Path, columns: &[&str]) -> Vec<Vec<String>> {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# cutwave "));
    assert_eq!(lines.next().unwrap(), columns.join(","));
    lines.map(|l| l.split(',').map(str::to_string).collect()).collect()
}

#[test]
fn unknown_key_fails_with_line_number() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "order = 1\n# fine\nspeed = 3\n");
    let out = cutwave(&["quadtest", "--config", &cfg]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.starts_with("cutwave: error: ") && err.contains(":3: unknown key `speed`"), "{err}");
}

#[test]
fn invalid_flags_fail() {
    assert!(!cutwave(&["converge", "--orders", "0"]).status.success());
    assert!(!cutwave(&["cutsweep", "--threads", "0"]).status.success());
    assert!(!cutwave(&["frobnicate"]).status.success());
}

#[test]
fn quadtest_rules_measure_the_cavity_domain() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("q");
    let cfg = write_config(dir.path(), "problem = single\norder = 1\ncells = 8\nquadrature_degree = 6\n");
    let stdout = ok(&["quadtest", "--config", &cfg, "--out", out.to_str().unwrap()]);
    let area: f64 = csv_rows(&out.join("quad_volume.csv"), &["domain", "cell", "x", "y", "weight"])
        .iter()
        .map(|r| r[4].parse::<f64>().unwrap())
        .sum();
    assert!((area - (4.0 * PI * PI - PI)).abs() < 1e-6, "{area}");
    let surface = csv_rows(&out.join("quad_surface.csv"), &["domain", "cell", "kind", "x", "y", "weight", "nx", "ny"]);
    let length = |kind: &str| -> f64 { surface.iter().filter(|r| r[2] == kind).map(|r| r[5].parse::<f64>().unwrap()).sum() };
    assert!((length("neumann") - 2.0 * PI).abs() < 1e-6);
    assert!((length("dirichlet") - 8.0 * PI).abs() < 1e-12);
    // cavity normals point into the hole
    for r in surface.iter().filter(|r| r[2] == "neumann") {
        let v: Vec<f64> = r[3..].iter().map(|s| s.parse().unwrap()).collect();
        assert!(v[0] * v[3] + v[1] * v[4] < 0.0);
    }
    assert!(stdout.contains("area "));
}

#[test]
fn cutsweep_is_reproducible_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "fractions = 0.1, 1e-4\nsweep_problems = single, interface\n");
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    ok(&["cutsweep", "--config", &cfg, "--orders", "1", "--threads", "1", "--deterministic", "--out", a.to_str().unwrap()]);
    ok(&["cutsweep", "--config", &cfg, "--orders", "1", "--threads", "2", "--deterministic", "--out", b.to_str().unwrap()]);
    let ta = fs::read(a.join("cutsweep.csv")).unwrap();
    assert_eq!(ta, fs::read(b.join("cutsweep.csv")).unwrap());
    let rows = csv_rows(&a.join("cutsweep.csv"), &CUTSWEEP_COLUMNS);
    assert_eq!(rows.len(), 4);
    assert_eq!((rows[0][0].as_str(), rows[2][0].as_str()), ("single", "interface"));
    for r in &rows {
        for v in &r[3..] {
            let v: f64 = v.parse().unwrap();
            assert!(v.is_finite() && v > 0.0);
        }
    }
}

#[test]
fn converge_writes_one_row_per_level() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "coarse_cells = 12\n");
    let out = dir.path().join("c");
    ok(&[
        "converge", "--config", &cfg, "--scenario", "single", "--orders", "1", "--refinements", "2", "--out",
        out.to_str().unwrap(),
    ]);
    let rows = csv_rows(&out.join("convergence.csv"), &CONVERGENCE_COLUMNS);
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0][0], "single-planewave-circle-cavity");
    assert_eq!(rows[0][6], "");
    let h: Vec<f64> = rows.iter().map(|r| r[2].parse().unwrap()).collect();
    assert!(h[1] < h[0]);
    let e: Vec<f64> = rows.iter().map(|r| r[4].parse().unwrap()).collect();
    assert!(e[1] < e[0]);
    let fitted: f64 = rows[1][6].parse().unwrap();
    assert!((fitted - (e[0] / e[1]).log2()).abs() < 1e-3);
}

#[test]
fn run_writes_masked_snapshots_and_matrices() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "order = 1\ncells = 8\nsnapshot_times = 0.5, 0\nsamples = 20\n");
    let out = dir.path().join("r");
    ok(&["run", "--config", &cfg, "--export-matrices", "--out", out.to_str().unwrap()]);
    let vtk = fs::read_to_string(out.join("snapshot_000.vtk")).unwrap();
    assert!(vtk.starts_with("# vtk DataFile Version 3.0\n"));
    assert!(vtk.contains("DATASET STRUCTURED_POINTS\nDIMENSIONS 20 20 1\n"));
    assert!(vtk.contains("POINT_DATA 400\n"));
    // the four samples nearest the origin lie in the cavity
    assert!(vtk.lines().filter(|l| *l == "nan").count() >= 4);
    let summary = csv_rows(&out.join("run.csv"), &["snapshot", "time", "steps", "energy", "l2_error", "file"]);
    assert_eq!(summary.len(), 2);
    assert_eq!((summary[0][1].as_str(), summary[1][1].as_str()), ("0", "0.5"));
    assert!(summary[1][2].parse::<usize>().unwrap() > 0);
    // the exact field has L2 norm near 4 on this domain
    for r in &summary {
        assert!(r[4].parse::<f64>().unwrap() < 1.0);
    }
    let mass = csv_rows(&out.join("mass.csv"), &["row", "col", "value"]);
    assert!(!mass.is_empty());
}

#[test]
fn executor_ordering() {
    let jobs: Vec<u64> = (0..20).collect();
    let mut ordered = vec![];
    Executor::new(Some(3), true)
        .unwrap()
        .run(&jobs, |&j| j * j, |r| {
            ordered.push(r);
            Ok(())
        })
        .unwrap();
    assert_eq!(ordered, jobs.iter().map(|j| j * j).collect::<Vec<_>>());
    let mut any = vec![];
    Executor::new(Some(3), false)
        .unwrap()
        .run(&jobs, |&j| j * j, |r| {
            any.push(r);
            Ok(())
        })
        .unwrap();
    any.sort();
    assert_eq!(any, ordered);
}

#[test]
fn vtk_marks_missing_values() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.vtk");
    let field = GridField { origin: [0.0, 0.0], spacing: [1.0, 1.0], dims: [2, 1], values: vec![1.5, f64::NAN] };
    write_vtk(&path, "t", &field).unwrap();
    let text = fs::read_to_string(path).unwrap();
    assert!(text.contains("LOOKUP_TABLE default\n1.500000000e0\nnan\nSCALARS inside int 1\nLOOKUP_TABLE default\n1\n0\n"));
}
