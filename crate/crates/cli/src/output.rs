//! CSV and legacy VTK writers.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use cutwave::analysis::{ConvergenceRecord, CutSweepRecord};
use cutwave::system::SparseSymmetricMatrix;

use crate::error::{CliError, Result};

/// Bumped whenever a column is added, removed or reinterpreted.
pub const SCHEMA_VERSION: u32 = 1;

pub const CONVERGENCE_COLUMNS: [&str; 7] = ["scenario", "p", "h", "dofs", "l2_error", "h1_error", "fitted_order"];
pub const CUTSWEEP_COLUMNS: [&str; 6] = ["problem", "p", "hcut_over_h", "cond_mass", "cond_stiffness", "cfl"];

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(CliError::io(path))
}

/// CSV file whose first line is `# cutwave <kind> schema v<N>`.
pub struct CsvOut {
    writer: csv::Writer<BufWriter<File>>,
    path: PathBuf,
}

impl CsvOut {
    pub fn create(path: &Path, kind: &str, columns: &[&str]) -> Result<Self> {
        let mut file = create(path)?;
        writeln!(file, "# cutwave {kind} schema v{SCHEMA_VERSION}").map_err(CliError::io(path))?;
        let mut writer = csv::Writer::from_writer(file);
        writer.write_record(columns)?;
        Ok(Self { writer, path: path.to_path_buf() })
    }

    pub fn row<I, S>(&mut self, fields: I) -> Result<()>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<[u8]>,
    {
        self.writer.write_record(fields)?;
        Ok(())
    }

    /// Flushes so that rows reach the file as they are produced.
    pub fn flush(&mut self) -> Result<()> {
        self.writer.flush().map_err(CliError::io(&self.path))
    }
}

fn float(v: f64) -> String {
    format!("{v:.10e}")
}

pub fn convergence_row(r: &ConvergenceRecord) -> [String; 7] {
    [
        r.scenario.name().to_string(),
        r.p.to_string(),
        float(r.h),
        r.dofs.to_string(),
        float(r.l2_error),
        float(r.h1_error),
        r.fitted_order.map(|o| format!("{o:.4}")).unwrap_or_default(),
    ]
}

pub fn cutsweep_row(r: &CutSweepRecord) -> [String; 6] {
    [
        r.problem.name().to_string(),
        r.p.to_string(),
        format!("{:e}", r.hcut_over_h),
        float(r.cond_mass),
        float(r.cond_stiffness),
        float(r.cfl),
    ]
}

/// Scalar field on a uniform `nx × ny` grid, stored row by row.
#[derive(Debug, Clone, PartialEq)]
pub struct GridField {
    pub origin: [f64; 2],
    pub spacing: [f64; 2],
    pub dims: [usize; 2],
    /// NaN outside the domain.
    pub values: Vec<f64>,
}

/// Legacy ASCII VTK `STRUCTURED_POINTS` with the displacement magnitude
/// (`nan` outside the domain) and a 0/1 `inside` mask.
pub fn write_vtk(path: &Path, title: &str, field: &GridField) -> Result<()> {
    let io = CliError::io(path);
    let mut out = create(path)?;
    let [nx, ny] = field.dims;
    let text = (|| -> std::io::Result<()> {
        writeln!(out, "# vtk DataFile Version 3.0")?;
        writeln!(out, "{title}")?;
        writeln!(out, "ASCII")?;
        writeln!(out, "DATASET STRUCTURED_POINTS")?;
        writeln!(out, "DIMENSIONS {nx} {ny} 1")?;
        writeln!(out, "ORIGIN {} {} 0", field.origin[0], field.origin[1])?;
        writeln!(out, "SPACING {} {} 1", field.spacing[0], field.spacing[1])?;
        writeln!(out, "POINT_DATA {}", nx * ny)?;
        writeln!(out, "SCALARS displacement_magnitude double 1")?;
        writeln!(out, "LOOKUP_TABLE default")?;
        for v in &field.values {
            if v.is_nan() {
                writeln!(out, "nan")?;
            } else {
                writeln!(out, "{v:.9e}")?;
            }
        }
        writeln!(out, "SCALARS inside int 1")?;
        writeln!(out, "LOOKUP_TABLE default")?;
        for v in &field.values {
            writeln!(out, "{}", u8::from(!v.is_nan()))?;
        }
        out.flush()
    })();
    text.map_err(io)
}

/// `row,col,value` triplets of a matrix, both triangles.
pub fn write_triplets(path: &Path, kind: &str, matrix: &SparseSymmetricMatrix) -> Result<()> {
    let mut csv = CsvOut::create(path, kind, &["row", "col", "value"])?;
    for (i, j, v) in matrix.triplets() {
        csv.row([i.to_string(), j.to_string(), format!("{v:.17e}")])?;
    }
    csv.flush()
}
