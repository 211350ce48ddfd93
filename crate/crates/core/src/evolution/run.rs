use crate::config::{DomainKind, SimConfig};
use crate::error::{Error, Result};
use crate::geometry::{
    chord_arc_constant, curvature, graph_chord_arc, graph_curvature_max, min_separation_windowed,
    sup_norms, ClosedContour, Diagnostics, PhasePair, Separation,
};
use crate::monitor::{envelope_series, monitor_constant, monitor_constant_contour, SeriesRow};
use crate::quadrature::QuadRule;
use crate::scenario::{make_scenario, ScenarioGrid};

use super::branch::{extract_charts, Ball};
use super::stepping::{step, State, StepSettings};

/// Samples of the state at one recorded time.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub header: &'static str,
    pub alpha: Vec<f64>,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl Snapshot {
    pub fn of(state: &State) -> Self {
        match state {
            State::Muskat(p) | State::SqgPair(p) => Snapshot {
                header: "alpha,f,g",
                alpha: p.f.nodes(),
                a: p.f.values().to_vec(),
                b: p.g.values().to_vec(),
            },
            State::Contour(c) => Snapshot {
                header: "alpha,x1,x2",
                alpha: (0..c.len()).map(|j| c.param(j)).collect(),
                a: c.x1().to_vec(),
                b: c.x2().to_vec(),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Record {
    pub step: usize,
    pub row: SeriesRow,
    pub diagnostics: Diagnostics,
    /// `|f′ − g′|` at the argmin of a graph pair; NaN for contours.
    pub slope_gap: f64,
    pub snapshot: Snapshot,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RunStatus {
    Ok,
    Splash(String),
    Error { code: String, message: String },
}

impl RunStatus {
    pub fn from_error(e: &Error) -> Self {
        if e.is_splash() {
            RunStatus::Splash(e.to_string())
        } else {
            RunStatus::Error {
                code: e.code().to_string(),
                message: e.to_string(),
            }
        }
    }

    /// `ok`, `splash` or `error:<code>`.
    pub fn tag(&self) -> String {
        match self {
            RunStatus::Ok => "ok".into(),
            RunStatus::Splash(_) => "splash".into(),
            RunStatus::Error { code, .. } => format!("error:{code}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub records: Vec<Record>,
    pub status: RunStatus,
    /// `min{f∞ − g∞, 1}` for graph pairs, 1 otherwise.
    pub separation_scale: f64,
    pub h: f64,
}

impl Series {
    pub fn rows(&self) -> Vec<SeriesRow> {
        self.records.iter().map(|r| r.row).collect()
    }
}

/// How diagnostics are measured for one run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagnosticSettings {
    /// Compact window for the argmin on the real line.
    pub window: Option<f64>,
    pub c0: f64,
    pub eps0: f64,
    pub ball: Option<Ball>,
    /// Truncation half-width of the real-line quadrature.
    pub quad_half_width: Option<f64>,
}

fn pair_diagnostics(p: &PhasePair, ds: &DiagnosticSettings) -> Result<(Diagnostics, f64)> {
    let sep: Separation = min_separation_windowed(&p.f, &p.g, ds.window)?;
    let nf = sup_norms(&p.f)?;
    let ng = sup_norms(&p.g)?;
    let mut d = Diagnostics {
        s: sep.s,
        alpha_min: sep.alpha_min,
        sup_f: nf.value,
        sup_g: ng.value,
        sup_f2: nf.second,
        sup_g2: ng.second,
        curvature_max: graph_curvature_max(&p.f)?.max(graph_curvature_max(&p.g)?),
        chord_arc: graph_chord_arc(&p.f).min(graph_chord_arc(&p.g)),
        monitor_c: 0.0,
        quadrature_tail: 0.0,
    };
    d.monitor_c = monitor_constant(&d, &p.densities, ds.c0);
    if let Some(l) = ds.quad_half_width {
        let z = p.densities.zeta21().abs() + p.densities.zeta32().abs();
        d.quadrature_tail = 2.0 * z * (nf.first + ng.first) * (nf.value + ng.value + 1.0) / l;
    }
    let fp = p.f.first_derivative()?;
    let gp = p.g.first_derivative()?;
    Ok((d, (fp[sep.index] - gp[sep.index]).abs()))
}

/// Smallest distance between nodes at least a quarter turn apart in parameter.
fn opposite_distance(x: &ClosedContour) -> (f64, usize) {
    let n = x.len();
    let mut best = (f64::INFINITY, 0);
    for i in 0..n {
        for j in i + 1..n {
            if x.param_distance(i, j) < 0.5 * std::f64::consts::PI {
                continue;
            }
            let d = (x.point(i) - x.point(j)).norm();
            if d < best.0 {
                best = (d, i);
            }
        }
    }
    best
}

fn contour_diagnostics(x: &ClosedContour, ds: &DiagnosticSettings) -> Result<Diagnostics> {
    let sup_x2 = x.sup_second_derivative()?;
    let kmax = curvature(x)?.into_iter().fold(0.0, f64::max);
    let (s, at, chord_arc) = match &ds.ball {
        Some(ball) => {
            let charts = extract_charts(x, ball)?;
            let (gap, node) = charts.gap(ball.eps0)?;
            (gap, node, charts.chord_arc(x, ball.eps0)?)
        }
        None => {
            let (d, node) = opposite_distance(x);
            (d, node, chord_arc_constant(x, ds.eps0)?)
        }
    };
    if !(s > 0.0) {
        return Err(Error::SplashDetected(format!("branches meet at node {at}")));
    }
    Ok(Diagnostics {
        s,
        alpha_min: x.param(at),
        sup_f: 0.0,
        sup_g: 0.0,
        sup_f2: sup_x2,
        sup_g2: 0.0,
        curvature_max: kmax,
        chord_arc,
        monitor_c: monitor_constant_contour(sup_x2, chord_arc, ds.eps0, ds.c0),
        quadrature_tail: 0.0,
    })
}

/// Diagnostics of `state` plus `|f′ − g′|` at the argmin (NaN for contours).
pub fn diagnose(state: &State, ds: &DiagnosticSettings) -> Result<(Diagnostics, f64)> {
    match state {
        State::Muskat(p) | State::SqgPair(p) => pair_diagnostics(p, ds),
        State::Contour(x) => Ok((contour_diagnostics(x, ds)?, f64::NAN)),
    }
}

/// Everything [`simulate`] needs besides the initial state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunSettings {
    pub dt: f64,
    pub t_end: f64,
    pub record_every: usize,
    pub step: StepSettings,
    pub diagnostics: DiagnosticSettings,
}

impl RunSettings {
    pub fn from_config(cfg: &SimConfig, ball: Option<Ball>) -> Result<Self> {
        let real_line = cfg.domain == DomainKind::RealLine;
        let rule = if real_line {
            QuadRule::real_line(cfg.quad_half_width, cfg.quad_nodes)?
        } else {
            QuadRule::periodic(cfg.quad_nodes)?
        };
        Ok(RunSettings {
            dt: cfg.dt,
            t_end: cfg.t_end,
            record_every: cfg.record_every,
            step: StepSettings {
                rule,
                cfl: cfg.cfl,
                filter: cfg.filter,
            },
            diagnostics: DiagnosticSettings {
                window: real_line.then_some(cfg.window),
                c0: cfg.c0,
                eps0: cfg.eps0,
                ball,
                quad_half_width: real_line.then_some(cfg.quad_half_width),
            },
        })
    }

    pub fn steps(&self) -> usize {
        // tolerate t_end/dt landing a hair above an integer
        (self.t_end / self.dt - 1e-9).ceil().max(0.0) as usize
    }
}

fn separation_scale(state: &State) -> f64 {
    match state {
        State::Muskat(p) | State::SqgPair(p) => p.separation_scale(),
        State::Contour(_) => 1.0,
    }
}

/// Steps `initial` to `t_end`, recording every `record_every` steps and at the end.
///
/// The initial diagnostics must succeed; later failures end the run and are
/// reported in [`Series::status`].
pub fn simulate(initial: State, settings: &RunSettings) -> Result<Series> {
    let (d0, slope0) = diagnose(&initial, &settings.diagnostics)?;
    let mut series = Series {
        records: Vec::new(),
        status: RunStatus::Ok,
        separation_scale: separation_scale(&initial),
        h: initial.h(),
    };
    let mut times = Vec::new();
    let mut rates = Vec::new();
    let s0 = d0.s;
    let mut push = |series: &mut Series, k: usize, state: &State, d: Diagnostics, slope: f64| {
        let t = k as f64 * settings.dt;
        times.push(t);
        rates.push(d.monitor_c);
        let envelope = envelope_series(s0, &times, &rates)
            .map(|e| e[e.len() - 1])
            .unwrap_or(f64::NAN);
        series.records.push(Record {
            step: k,
            row: SeriesRow {
                t,
                s: d.s,
                alpha_min: d.alpha_min,
                sup_f2: d.sup_f2,
                sup_g2: d.sup_g2,
                curvature_max: d.curvature_max,
                chord_arc: d.chord_arc,
                c_mon: d.monitor_c,
                envelope,
            },
            diagnostics: d,
            slope_gap: slope,
            snapshot: Snapshot::of(state),
        });
    };
    push(&mut series, 0, &initial, d0, slope0);

    let total = settings.steps();
    let mut state = initial;
    for k in 1..=total {
        state = match step(&state, settings.dt, &settings.step) {
            Ok(s) => s,
            Err(e) => {
                series.status = RunStatus::from_error(&e);
                return Ok(series);
            }
        };
        if k % settings.record_every == 0 || k == total {
            match diagnose(&state, &settings.diagnostics) {
                Ok((d, slope)) => push(&mut series, k, &state, d, slope),
                Err(e) => {
                    series.status = RunStatus::from_error(&e);
                    return Ok(series);
                }
            }
        }
    }
    Ok(series)
}

/// Builds the configured scenario and runs it.
pub fn run_simulation(cfg: &SimConfig) -> Result<Series> {
    cfg.validate()?;
    let scenario = make_scenario(&cfg.scenario, &cfg.params, &ScenarioGrid::from_config(cfg))?;
    let settings = RunSettings::from_config(cfg, scenario.ball)?;
    simulate(scenario.state, &settings)
}
