//! Result documents and where they go.

use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use lempert_core::verify::VerificationReport;
use lempert_core::DomainPoint;
use serde::Serialize;
use serde_json::Value;

pub const SCHEMA_VERSION: u32 = 1;

/// Relative `--output` paths are resolved against this directory when set.
pub const OUTPUT_DIR_ENV: &str = "LEMPERT_OUTPUT_DIR";

#[derive(Debug, Serialize)]
pub struct Document {
    pub schema: u32,
    pub command: String,
    pub config: Value,
    pub reports: Vec<VerificationReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub details: Option<Value>,
    pub pass: bool,
}

impl Document {
    pub fn new(command: &str, config: Value, reports: Vec<VerificationReport>) -> Self {
        let pass = !reports.is_empty() && reports.iter().all(|r| r.pass);
        Self {
            schema: SCHEMA_VERSION,
            command: command.into(),
            config,
            reports,
            details: None,
            pass,
        }
    }
}

pub fn resolve_output(path: Option<&Path>) -> Option<PathBuf> {
    let path = path?;
    match std::env::var_os(OUTPUT_DIR_ENV) {
        Some(dir) if path.is_relative() => Some(Path::new(&dir).join(path)),
        _ => Some(path.to_path_buf()),
    }
}

pub fn open(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => {
            if let Some(parent) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(parent)?;
            }
            Box::new(io::BufWriter::new(File::create(p)?))
        }
        None => Box::new(io::stdout().lock()),
    })
}

pub fn write_json(out: &mut dyn Write, doc: &Document) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *out, doc)?;
    writeln!(out)?;
    out.flush()
}

/// Per-point series of every report: `check,x,re,im`.
pub fn write_series_csv(out: &mut dyn Write, reports: &[VerificationReport]) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["check", "x", "re", "im"])?;
    for r in reports {
        for p in &r.series {
            w.serialize((&r.check_name, p.x, p.re, p.im))?;
        }
    }
    w.flush()
}

#[derive(Serialize)]
pub struct SampleRow<'a> {
    pub domain: &'a str,
    pub re_z1: f64,
    pub im_z1: f64,
    pub re_z2: Option<f64>,
    pub im_z2: Option<f64>,
}

impl<'a> SampleRow<'a> {
    pub fn new(domain: &'a str, z: &DomainPoint) -> Self {
        let second = (z.dim() == 2).then(|| z.z2());
        Self {
            domain,
            re_z1: z.z1().re,
            im_z1: z.z1().im,
            re_z2: second.map(|c| c.re),
            im_z2: second.map(|c| c.im),
        }
    }
}

pub fn write_samples_csv(out: &mut dyn Write, rows: &[SampleRow<'_>]) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    if rows.is_empty() {
        w.write_record(["domain", "re_z1", "im_z1", "re_z2", "im_z2"])?;
    }
    w.flush()
}
