//! CSV emission with `#`-prefixed metadata headers and round-trip-safe
//! float formatting.

use std::io::Write;
use std::path::{Path, PathBuf};

use crate::config::RunConfig;
use crate::CliError;

/// 17 significant digits: parses back to the identical f64.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Column description carrying units for the header.
#[derive(Debug, Clone)]
pub struct Column {
    pub name: &'static str,
    pub unit: &'static str,
}

pub fn col(name: &'static str, unit: &'static str) -> Column {
    Column { name, unit }
}

pub struct CsvWriter {
    out: std::io::BufWriter<std::fs::File>,
    path: PathBuf,
    columns: usize,
}

impl CsvWriter {
    pub fn create(
        dir: &Path,
        file_name: &str,
        command: &str,
        config: &RunConfig,
        columns: &[Column],
        extra_meta: &[(String, String)],
    ) -> Result<Self, CliError> {
        std::fs::create_dir_all(dir)
            .map_err(|e| CliError::Io(format!("cannot create {}: {e}", dir.display())))?;
        let path = dir.join(file_name);
        let file = std::fs::File::create(&path)
            .map_err(|e| CliError::Io(format!("cannot create {}: {e}", path.display())))?;
        let mut out = std::io::BufWriter::new(file);
        let mut emit = |line: String| -> Result<(), CliError> {
            writeln!(out, "{line}").map_err(|e| CliError::Io(e.to_string()))
        };
        emit(format!("# workstats {}", env!("CARGO_PKG_VERSION")))?;
        emit(format!("# command = {command}"))?;
        for (k, v) in extra_meta {
            emit(format!("# {k} = {v}"))?;
        }
        for line in config.header_lines() {
            emit(line)?;
        }
        let described: Vec<String> = columns
            .iter()
            .map(|c| format!("{} [{}]", c.name, c.unit))
            .collect();
        emit(format!("# columns: {}", described.join(", ")))?;
        let names: Vec<&str> = columns.iter().map(|c| c.name).collect();
        emit(names.join(","))?;
        Ok(Self {
            out,
            path,
            columns: columns.len(),
        })
    }

    /// One data row; `None` cells are left empty (level-set gaps).
    pub fn row(&mut self, cells: &[Option<f64>]) -> Result<(), CliError> {
        assert_eq!(cells.len(), self.columns, "row width mismatch");
        let rendered: Vec<String> = cells
            .iter()
            .map(|c| c.map(fmt_float).unwrap_or_default())
            .collect();
        writeln!(self.out, "{}", rendered.join(","))
            .map_err(|e| CliError::Io(e.to_string()))
    }

    pub fn row_values(&mut self, cells: &[f64]) -> Result<(), CliError> {
        let wrapped: Vec<Option<f64>> = cells.iter().map(|&c| Some(c)).collect();
        self.row(&wrapped)
    }

    pub fn finish(mut self) -> Result<PathBuf, CliError> {
        self.out
            .flush()
            .map_err(|e| CliError::Io(e.to_string()))?;
        Ok(self.path)
    }
}

/// Row-major 2-D grid file: a `u` axis row, then one row per lambda0.
pub fn write_grid(
    dir: &Path,
    file_name: &str,
    command: &str,
    config: &RunConfig,
    grid: &workstats_core::tfim::ChiGrid,
    extra_meta: &[(String, String)],
) -> Result<PathBuf, CliError> {
    std::fs::create_dir_all(dir)
        .map_err(|e| CliError::Io(format!("cannot create {}: {e}", dir.display())))?;
    let path = dir.join(file_name);
    let file = std::fs::File::create(&path)
        .map_err(|e| CliError::Io(format!("cannot create {}: {e}", path.display())))?;
    let mut out = std::io::BufWriter::new(file);
    let mut emit = |line: String| -> Result<(), CliError> {
        writeln!(out, "{line}").map_err(|e| CliError::Io(e.to_string()))
    };
    emit(format!("# workstats {}", env!("CARGO_PKG_VERSION")))?;
    emit(format!("# command = {command}"))?;
    for (k, v) in extra_meta {
        emit(format!("# {k} = {v}"))?;
    }
    for line in config.header_lines() {
        emit(line)?;
    }
    emit("# layout: first data row is the u axis [1/J]; following rows are".into())?;
    emit("#   lambda0 [dimensionless] then Re chi [dimensionless] per u".into())?;
    let mut axis = vec!["u_axis".to_string()];
    axis.extend(grid.u.iter().map(|&u| fmt_float(u)));
    emit(axis.join(","))?;
    for (i, &l0) in grid.lambda0.iter().enumerate() {
        let mut row = vec![fmt_float(l0)];
        row.extend(grid.re_chi[i].iter().map(|&v| fmt_float(v)));
        emit(row.join(","))?;
    }
    out.flush().map_err(|e| CliError::Io(e.to_string()))?;
    Ok(path)
}
