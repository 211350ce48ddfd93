//! CSV and JSON persistence of runs and certificates.
//!
//! A run directory holds exactly:
//!
//! ```text
//! timeseries.csv
//! snapshots/snapshot_00000.csv …   one per record
//! certificate.csv                  when a certificate was computed
//! certificate_summary.json         when a certificate was computed
//! ```

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::evolution::{Series, Snapshot};
use crate::monitor::{BoundCertificate, SeriesRow, Verdict};

pub const SERIES_HEADER: &str = "t,S,alpha_min,sup_f2,sup_g2,curvature_max,chord_arc,C_mon,envelope";
pub const TIMESERIES_FILE: &str = "timeseries.csv";
pub const CERTIFICATE_FILE: &str = "certificate.csv";
pub const SUMMARY_FILE: &str = "certificate_summary.json";
pub const SNAPSHOT_DIR: &str = "snapshots";

/// 17 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn row_fields(r: &SeriesRow) -> String {
    [
        r.t,
        r.s,
        r.alpha_min,
        r.sup_f2,
        r.sup_g2,
        r.curvature_max,
        r.chord_arc,
        r.c_mon,
        r.envelope,
    ]
    .map(num)
    .join(",")
}

pub fn timeseries_csv(rows: &[SeriesRow], status: &str) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{SERIES_HEADER}");
    for r in rows {
        let _ = writeln!(s, "{}", row_fields(r));
    }
    let _ = writeln!(s, "#status: {status}");
    s
}

pub fn snapshot_csv(snap: &Snapshot) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{}", snap.header);
    for j in 0..snap.alpha.len() {
        let _ = writeln!(s, "{},{},{}", num(snap.alpha[j]), num(snap.a[j]), num(snap.b[j]));
    }
    s
}

pub fn certificate_csv(cert: &BoundCertificate) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{SERIES_HEADER},ineq_margin,applicable");
    for r in &cert.rows {
        let _ = writeln!(
            s,
            "{},{},{}",
            row_fields(&r.row),
            num(r.ineq_margin),
            u8::from(r.applicable)
        );
    }
    s
}

#[derive(Serialize)]
struct Summary<'a> {
    verdict_envelope: Verdict,
    verdict_inequality: Verdict,
    first_violation_t: Option<f64>,
    min_margin: Option<f64>,
    tol_rate: f64,
    records: usize,
    applicable_records: usize,
    status: &'a str,
}

pub fn certificate_summary(cert: &BoundCertificate, status: &str) -> String {
    let summary = Summary {
        verdict_envelope: cert.verdict_envelope,
        verdict_inequality: cert.verdict_inequality,
        first_violation_t: cert.first_violation_t,
        min_margin: cert.min_margin.is_finite().then_some(cert.min_margin),
        tol_rate: cert.tol_rate,
        records: cert.rows.len(),
        applicable_records: cert.rows.iter().filter(|r| r.applicable).count(),
        status,
    };
    let mut s = serde_json::to_string_pretty(&summary).expect("summary serializes");
    s.push('\n');
    s
}

pub fn snapshot_name(index: usize) -> String {
    format!("{SNAPSHOT_DIR}/snapshot_{index:05}.csv")
}

/// Relative paths written for a series with `records` records.
pub fn manifest(records: usize, with_certificate: bool) -> Vec<String> {
    let mut files = vec![TIMESERIES_FILE.to_string()];
    files.extend((0..records).map(snapshot_name));
    if with_certificate {
        files.push(CERTIFICATE_FILE.to_string());
        files.push(SUMMARY_FILE.to_string());
    }
    files
}

fn write(dir: &Path, rel: &str, content: &str) -> Result<PathBuf> {
    let path = dir.join(rel);
    fs::write(&path, content).map_err(|e| Error::io(&path, e))?;
    Ok(path)
}

/// Writes the manifest files for `series` into `dir`, creating it if needed.
pub fn write_outputs(
    series: &Series,
    certificate: Option<&BoundCertificate>,
    dir: &Path,
) -> Result<Vec<PathBuf>> {
    let snaps = dir.join(SNAPSHOT_DIR);
    fs::create_dir_all(&snaps).map_err(|e| Error::io(&snaps, e))?;
    let status = series.status.tag();
    let mut written = vec![write(dir, TIMESERIES_FILE, &timeseries_csv(&series.rows(), &status))?];
    for (i, rec) in series.records.iter().enumerate() {
        written.push(write(dir, &snapshot_name(i), &snapshot_csv(&rec.snapshot))?);
    }
    if let Some(cert) = certificate {
        written.push(write(dir, CERTIFICATE_FILE, &certificate_csv(cert))?);
        written.push(write(dir, SUMMARY_FILE, &certificate_summary(cert, &status))?);
    }
    Ok(written)
}

/// Parses a time-series CSV back into rows and its status tag.
pub fn parse_series(text: &str) -> Result<(Vec<SeriesRow>, Option<String>)> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim() == SERIES_HEADER => {}
        Some(h) => return Err(Error::MalformedSeries(format!("unexpected header `{h}`"))),
        None => return Err(Error::MalformedSeries("empty file".into())),
    }
    let mut rows = Vec::new();
    let mut status = None;
    for (i, line) in lines.enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            if let Some(tag) = rest.trim().strip_prefix("status:") {
                status = Some(tag.trim().to_string());
            }
            continue;
        }
        let v: Vec<f64> = line
            .split(',')
            .map(|f| f.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::MalformedSeries(format!("bad number on line {}", i + 2)))?;
        if v.len() != 9 {
            return Err(Error::MalformedSeries(format!(
                "line {} has {} fields, expected 9",
                i + 2,
                v.len()
            )));
        }
        rows.push(SeriesRow {
            t: v[0],
            s: v[1],
            alpha_min: v[2],
            sup_f2: v[3],
            sup_g2: v[4],
            curvature_max: v[5],
            chord_arc: v[6],
            c_mon: v[7],
            envelope: v[8],
        });
    }
    Ok((rows, status))
}

pub fn read_series(path: &Path) -> Result<(Vec<SeriesRow>, Option<String>)> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_series(&text)
}
