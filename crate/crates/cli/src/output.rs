//! CSV tables and the JSON run summary.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use adpt_core::experiments::Report;
use serde_json::{json, Map, Value};

use crate::registry::Job;

/// Bumped on any breaking change to the summary layout (see SCHEMA.md).
pub const SCHEMA_VERSION: u32 = 1;

pub fn csv_name(experiment: &str, table: &str) -> String {
    format!("{experiment}_{table}.csv")
}

/// Writes one CSV per table and `summary.json`; returns the paths written.
pub fn write_bundle(dir: &Path, job: &Job, config: &[(&str, &str)], report: &Report) -> std::io::Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let mut tables = Vec::new();
    for t in &report.tables {
        let name = csv_name(job.name(), &t.name);
        let path = dir.join(&name);
        let mut w = BufWriter::new(File::create(&path)?);
        t.write_csv(&mut w).map_err(std::io::Error::other)?;
        w.flush()?;
        written.push(path);
        tables.push(json!({ "name": t.name, "file": name, "columns": t.columns, "rows": t.rows.len() }));
    }
    let summary = summary(job, config, report, tables);
    let path = dir.join("summary.json");
    let mut w = BufWriter::new(File::create(&path)?);
    serde_json::to_writer_pretty(&mut w, &summary)?;
    writeln!(w)?;
    w.flush()?;
    written.push(path);
    Ok(written)
}

fn summary(job: &Job, config: &[(&str, &str)], report: &Report, tables: Vec<Value>) -> Value {
    let cfg: Map<String, Value> = config.iter().map(|(k, v)| (k.to_string(), Value::from(*v))).collect();
    json!({
        "schema_version": SCHEMA_VERSION,
        "generator": format!("adpt {}", env!("CARGO_PKG_VERSION")),
        "experiment": job.name(),
        "passed": report.passed(),
        "seed": job.seed(),
        "time_mode": job.time_mode(),
        "config": cfg,
        "parameters": job.params_json(),
        "checks": report.checks,
        "fits": report.fits,
        "tables": tables,
    })
}
