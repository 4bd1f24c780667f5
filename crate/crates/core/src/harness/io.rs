//! Result persistence: raw and aggregated CSV plus a JSON run manifest.
//!
//! Files are written with CRLF terminators and a mandatory header row, floats
//! carry 12 significant digits, and nothing in the output depends on wall
//! time, so re-running a manifest reproduces the files byte for byte.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::sweep::SweepResult;
use super::HarnessError;

/// Paths of the files written for one sweep.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WrittenFiles {
    pub raw_csv: PathBuf,
    pub aggregate_csv: PathBuf,
    pub manifest: PathBuf,
}

/// Run provenance: config, sweep axis, and code version.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub version: String,
    pub sweep: super::sweep::SweepAxis,
    pub config: super::config::ScenarioConfig,
}

/// Formats a float with 12 significant digits.
pub fn format_float(value: f64) -> String {
    format!("{value:.11e}")
}

fn io_error(path: &Path) -> impl FnOnce(std::io::Error) -> HarnessError + '_ {
    move |source| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Writes `<stem>_raw.csv`, `<stem>_aggregate.csv`, and `<stem>_manifest.json`
/// into `out_dir`, which must already exist.
pub fn write_results(result: &SweepResult, out_dir: &Path) -> Result<WrittenFiles, HarnessError> {
    if !out_dir.is_dir() {
        return Err(HarnessError::MissingOutputDir {
            path: out_dir.to_path_buf(),
        });
    }
    let stem = result.axis.stem();
    let files = WrittenFiles {
        raw_csv: out_dir.join(format!("{stem}_raw.csv")),
        aggregate_csv: out_dir.join(format!("{stem}_aggregate.csv")),
        manifest: out_dir.join(format!("{stem}_manifest.json")),
    };
    write_raw_csv(result, &files.raw_csv)?;
    write_aggregate_csv(result, &files.aggregate_csv)?;
    write_manifest(result, &files.manifest)?;
    Ok(files)
}

fn csv_writer(path: &Path) -> Result<csv::Writer<fs::File>, HarnessError> {
    let file = fs::File::create(path).map_err(io_error(path))?;
    Ok(csv::WriterBuilder::new()
        .terminator(csv::Terminator::CRLF)
        .from_writer(file))
}

fn write_raw_csv(result: &SweepResult, path: &Path) -> Result<(), HarnessError> {
    let mut writer = csv_writer(path)?;
    let to_harness = |source: csv::Error| HarnessError::Csv {
        path: path.to_path_buf(),
        source: Box::new(source),
    };
    writer
        .write_record([
            "scheme",
            "realization",
            "seed",
            "p_max_dbm",
            "r_min",
            "sum_rate",
            "feasible",
            "outer_iterations",
            "x_pin",
        ])
        .map_err(to_harness)?;
    for record in &result.raw {
        writer
            .write_record([
                record.scheme.label().to_string(),
                record.realization.to_string(),
                record.seed.to_string(),
                format_float(record.p_max_dbm),
                format_float(record.r_min),
                format_float(record.sum_rate),
                record.feasible.to_string(),
                record.outer_iterations.to_string(),
                format_float(record.x_pin),
            ])
            .map_err(to_harness)?;
    }
    writer.flush().map_err(io_error(path))
}

fn write_aggregate_csv(result: &SweepResult, path: &Path) -> Result<(), HarnessError> {
    let mut writer = csv_writer(path)?;
    let to_harness = |source: csv::Error| HarnessError::Csv {
        path: path.to_path_buf(),
        source: Box::new(source),
    };
    let mut header = vec![result.axis.label().to_string()];
    for scheme in &result.config.schemes {
        header.push(format!("{}_mean_sum_rate", scheme.label()));
        header.push(format!("{}_outages", scheme.label()));
    }
    writer.write_record(&header).map_err(to_harness)?;
    for point in &result.points {
        let mut row = vec![format_float(point.value)];
        for scheme_point in &point.per_scheme {
            row.push(format_float(scheme_point.mean_sum_rate));
            row.push(scheme_point.outages.to_string());
        }
        writer.write_record(&row).map_err(to_harness)?;
    }
    writer.flush().map_err(io_error(path))
}

fn write_manifest(result: &SweepResult, path: &Path) -> Result<(), HarnessError> {
    let manifest = RunManifest {
        version: env!("CARGO_PKG_VERSION").to_string(),
        sweep: result.axis,
        config: result.config.clone(),
    };
    let mut file = fs::File::create(path).map_err(io_error(path))?;
    let text = serde_json::to_string_pretty(&manifest).map_err(HarnessError::Json)?;
    file.write_all(text.as_bytes()).map_err(io_error(path))?;
    file.write_all(b"\n").map_err(io_error(path))
}

/// Loads a manifest written by [`write_results`].
pub fn read_manifest(path: &Path) -> Result<RunManifest, HarnessError> {
    let text = fs::read_to_string(path).map_err(io_error(path))?;
    serde_json::from_str(&text).map_err(HarnessError::Json)
}
