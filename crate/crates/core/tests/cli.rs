use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use nosplash::output::{manifest, timeseries_csv};
use nosplash::monitor::SeriesRow;

fn nosplash(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nosplash"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn files_under(dir: &Path) -> Vec<String> {
    let mut out = Vec::new();
    for e in fs::read_dir(dir).unwrap() {
        let p = e.unwrap().path();
        if p.is_dir() {
            let name = p.file_name().unwrap().to_string_lossy().to_string();
            out.extend(files_under(&p).into_iter().map(|f| format!("{name}/{f}")));
        } else {
            out.push(p.file_name().unwrap().to_string_lossy().to_string());
        }
    }
    out.sort();
    out
}

const FLAT: &str = "system = muskat_multiphase\nscenario = flat_pair\nn = 32\ndt = 0.01\nt_end = 0.05\nrecord_every = 1\n";

#[test]
fn version_prints() {
    let out = nosplash(&["version"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("nosplash "));
}

#[test]
fn run_writes_exactly_the_manifest() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("flat.conf");
    fs::write(&cfg, FLAT).unwrap();
    let out_dir = tmp.path().join("out");
    let out = nosplash(&["run", "--config", cfg.to_str().unwrap(), "--out", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let mut expected = manifest(6, true);
    expected.sort();
    assert_eq!(files_under(&out_dir), expected);

    let series = fs::read_to_string(out_dir.join("timeseries.csv")).unwrap();
    assert!(series.ends_with("#status: ok\n"));
    let s_column: Vec<&str> = series
        .lines()
        .skip(1)
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').nth(1).unwrap())
        .collect();
    assert!(s_column.iter().all(|s| *s == "1.0000000000000000e0"));

    let snap = fs::read_to_string(out_dir.join("snapshots/snapshot_00000.csv")).unwrap();
    assert!(snap.starts_with("alpha,f,g\n"));
    assert_eq!(snap.lines().count(), 33);

    let cert = nosplash(&["certify", "--series", out_dir.join("timeseries.csv").to_str().unwrap()]);
    assert_eq!(cert.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&cert.stdout).contains("\"verdict_envelope\""));
}

#[test]
fn certify_reports_a_violation() {
    let tmp = tempfile::tempdir().unwrap();
    let rows: Vec<SeriesRow> = (0..=20)
        .map(|i| {
            let t = i as f64 * 0.05;
            SeriesRow {
                t,
                s: 0.05 * (-10.0 * t * t).exp(),
                alpha_min: 0.0,
                sup_f2: 0.0,
                sup_g2: 0.0,
                curvature_max: 0.0,
                chord_arc: 1.0,
                c_mon: 1.0,
                envelope: 0.0,
            }
        })
        .collect();
    let path = tmp.path().join("series.csv");
    fs::write(&path, timeseries_csv(&rows, "ok")).unwrap();
    let out = nosplash(&["certify", "--series", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("\"verdict_envelope\": \"fail\""), "{text}");
}

#[test]
fn exit_codes_for_bad_input() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("bad.conf");
    fs::write(&cfg, "system = muskat_multiphase\nscenario = flat_pair\ndt = 0\n").unwrap();
    assert_eq!(nosplash(&["run", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
    let missing = tmp.path().join("missing.conf");
    assert_eq!(nosplash(&["run", "--config", missing.to_str().unwrap()]).status.code(), Some(5));
    assert_eq!(nosplash(&["scenario", "--name", "spiral"]).status.code(), Some(2));
}

#[test]
fn scenario_dump() {
    let out = nosplash(&["scenario", "--name", "circle", "--dump", "--n", "16"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.starts_with("alpha,x1,x2\n"));
    assert_eq!(text.lines().count(), 17);
    let out = nosplash(&["scenario", "--name", "bump_pair", "--dump", "--param", "h1=-0.1"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("alpha,f,g\n"));
}
