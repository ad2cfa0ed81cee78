//! CSV, JSON and manifest emission.
//!
//! Numbers are written with Rust's shortest round-trip formatting, so the
//! files carry full double precision and are byte-identical across runs.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::sweep::{RunManifest, SweepResult};
use crate::{Error, Result};

pub const CSV_HEADER: [&str; 9] = ["scenario", "m", "w", "K", "nu", "T0", "q_abs", "N", "I"];

pub fn write_csv<W: Write>(out: W, result: &SweepResult) -> Result<()> {
    if result.points().next().is_none() {
        return Err(Error::InvalidParameter("no points to write".into()));
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for (c, p) in result.points() {
        let s = &c.scenario;
        w.write_record([
            c.index.to_string(),
            s.m.to_string(),
            s.w.to_string(),
            s.k.to_string(),
            c.nu.to_string(),
            p.t0.to_string(),
            p.q_abs.to_string(),
            p.negativity.to_string(),
            p.mutual_info.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct JsonRow {
    scenario: usize,
    m: f64,
    w: f64,
    #[serde(rename = "K")]
    k: f64,
    nu: f64,
    #[serde(rename = "T0")]
    t0: f64,
    q_abs: f64,
    #[serde(rename = "N")]
    negativity: f64,
    #[serde(rename = "I")]
    mutual_info: f64,
}

#[derive(Serialize)]
struct JsonDoc<'a> {
    points: Vec<JsonRow>,
    manifest: &'a RunManifest,
}

/// Points plus the manifest, without the wall time.
pub fn write_json<W: Write>(out: W, result: &SweepResult) -> Result<()> {
    let manifest = RunManifest {
        wall_time_s: None,
        ..result.manifest.clone()
    };
    let doc = JsonDoc {
        points: result
            .points()
            .map(|(c, p)| JsonRow {
                scenario: c.index,
                m: c.scenario.m,
                w: c.scenario.w,
                k: c.scenario.k,
                nu: c.nu,
                t0: p.t0,
                q_abs: p.q_abs,
                negativity: p.negativity,
                mutual_info: p.mutual_info,
            })
            .collect(),
        manifest: &manifest,
    };
    let mut out = BufWriter::new(out);
    serde_json::to_writer_pretty(&mut out, &doc)?;
    out.write_all(b"\n")?;
    out.flush()?;
    Ok(())
}

pub fn write_manifest<W: Write>(out: W, manifest: &RunManifest) -> Result<()> {
    let mut out = BufWriter::new(out);
    serde_json::to_writer_pretty(&mut out, manifest)?;
    out.write_all(b"\n")?;
    out.flush()?;
    Ok(())
}

/// `<path>.manifest.json`.
pub fn manifest_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".manifest.json");
    PathBuf::from(s)
}

pub fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}
