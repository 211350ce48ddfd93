use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use nosplash::config::{SimConfig, SystemKind};
use nosplash::evolution::{run_simulation, RunStatus, Snapshot};
use nosplash::monitor::{
    certify, CertifySettings, DEFAULT_SMALL_SEP_FRAC, DEFAULT_TOL_ENV, DEFAULT_TOL_RATE_FRAC,
};
use nosplash::output::{certificate_summary, read_series, snapshot_csv, write_outputs};
use nosplash::scenario::{make_scenario, ScenarioGrid};
use nosplash::Error;

#[derive(Parser)]
#[command(name = "nosplash", about = "Contour dynamics runs and separation certificates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a configured simulation and write its outputs.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output directory (overrides `output` in the config).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Certify a time-series CSV against the envelope and the rate inequality.
    Certify {
        #[arg(long)]
        series: PathBuf,
        /// Far-field gap f∞ − g∞ of the run (the regime scale is min{gap, 1}).
        #[arg(long, default_value_t = 1.0)]
        far_gap: f64,
        #[arg(long, default_value_t = DEFAULT_SMALL_SEP_FRAC)]
        small_sep_frac: f64,
        #[arg(long, default_value_t = DEFAULT_TOL_ENV)]
        tol_env: f64,
        #[arg(long, default_value_t = DEFAULT_TOL_RATE_FRAC)]
        tol_rate_frac: f64,
    },
    /// Build a scenario's initial data.
    Scenario {
        #[arg(long)]
        name: String,
        /// Print the samples as CSV.
        #[arg(long)]
        dump: bool,
        /// muskat_multiphase, sqg_multiphase or sqg_contour.
        #[arg(long)]
        system: Option<String>,
        #[arg(long)]
        n: Option<usize>,
        /// Scenario parameter as `key=value`; repeatable.
        #[arg(long = "param", value_parser = parse_param)]
        params: Vec<(String, f64)>,
    },
    /// Print the version.
    Version,
}

fn parse_param(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or("expected key=value")?;
    let v = v.trim().parse().map_err(|_| format!("bad number `{v}`"))?;
    Ok((k.trim().to_string(), v))
}

const EXIT_FAILURE: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_SPLASH: u8 = 3;
const EXIT_CERTIFICATION: u8 = 4;
const EXIT_IO: u8 = 5;

fn exit_for(e: &Error) -> u8 {
    match e {
        Error::Io { .. } => EXIT_IO,
        e if e.is_splash() => EXIT_SPLASH,
        _ => EXIT_CONFIG,
    }
}

fn run(config: PathBuf, out: Option<PathBuf>) -> Result<u8, Error> {
    let cfg = SimConfig::load(&config)?;
    let series = run_simulation(&cfg)?;
    let settings = CertifySettings {
        separation_scale: series.separation_scale,
        small_sep_frac: cfg.small_sep_frac,
        tol_env: cfg.tol_env,
        tol_rate_frac: cfg.tol_rate_frac,
    };
    let rows = series.rows();
    let cert = if rows.len() >= 3 {
        Some(certify(&rows, &settings)?)
    } else {
        None
    };
    let dir = out.unwrap_or_else(|| cfg.output.clone());
    let files = write_outputs(&series, cert.as_ref(), &dir)?;
    println!(
        "{} records, status {}, {} files in {}",
        series.records.len(),
        series.status.tag(),
        files.len(),
        dir.display()
    );
    if let Some(c) = &cert {
        println!(
            "envelope: {}, inequality: {}",
            c.verdict_envelope.as_str(),
            c.verdict_inequality.as_str()
        );
    }
    Ok(match &series.status {
        RunStatus::Splash(msg) => {
            eprintln!("splash: {msg}");
            EXIT_SPLASH
        }
        RunStatus::Error { code, message } => {
            eprintln!("run stopped: {message}");
            if code == "step_rejected" {
                EXIT_CONFIG
            } else {
                EXIT_FAILURE
            }
        }
        RunStatus::Ok if cert.as_ref().is_some_and(|c| !c.passed()) => EXIT_CERTIFICATION,
        RunStatus::Ok => 0,
    })
}

fn certify_file(path: PathBuf, settings: CertifySettings) -> Result<u8, Error> {
    let (rows, status) = read_series(&path)?;
    let cert = certify(&rows, &settings)?;
    print!("{}", certificate_summary(&cert, status.as_deref().unwrap_or("unknown")));
    Ok(if cert.passed() { 0 } else { EXIT_CERTIFICATION })
}

fn scenario(
    name: String,
    dump: bool,
    system: Option<String>,
    n: Option<usize>,
    params: Vec<(String, f64)>,
) -> Result<u8, Error> {
    let mut grid = ScenarioGrid::default_for(&name);
    if let Some(s) = system {
        grid.system = s.parse::<SystemKind>()?;
    }
    if let Some(n) = n {
        grid.n = n;
    }
    let params: BTreeMap<String, f64> = params.into_iter().collect();
    let sc = make_scenario(&name, &params, &grid)?;
    if dump {
        print!("{}", snapshot_csv(&Snapshot::of(&sc.state)));
    } else {
        println!("{name}: {} nodes, system {}", sc.state.len(), grid.system.as_str());
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run { config, out } => run(config, out),
        Command::Certify {
            series,
            far_gap,
            small_sep_frac,
            tol_env,
            tol_rate_frac,
        } => certify_file(
            series,
            CertifySettings {
                separation_scale: far_gap.min(1.0),
                small_sep_frac,
                tol_env,
                tol_rate_frac,
            },
        ),
        Command::Scenario {
            name,
            dump,
            system,
            n,
            params,
        } => scenario(name, dump, system, n, params),
        Command::Version => {
            println!("nosplash {}", env!("CARGO_PKG_VERSION"));
            Ok(0)
        }
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_for(&e))
        }
    }
}
