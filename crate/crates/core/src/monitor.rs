//! Monitor constant, double-exponential envelope and certification of measured
//! separation histories.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{Densities, Diagnostics};

pub const DEFAULT_C0: f64 = 16.0;
pub const DEFAULT_SMALL_SEP_FRAC: f64 = 0.1;
pub const DEFAULT_TOL_ENV: f64 = 1e-3;
pub const DEFAULT_TOL_RATE_FRAC: f64 = 1e-3;

/// `c₀·(|ζ²¹| + |ζ³²|)·(‖f″‖ + ‖g″‖)·(‖f‖ + ‖g‖ + 1)` for a pair of graphs.
pub fn monitor_constant(diag: &Diagnostics, densities: &Densities, c0: f64) -> f64 {
    c0 * (densities.zeta21().abs() + densities.zeta32().abs())
        * (diag.sup_f2 + diag.sup_g2)
        * (diag.sup_f + diag.sup_g + 1.0)
}

/// `c₀·‖x″‖·(1 + 1/c_CA)·(1 + 1/ε₀)` for a closed front.
pub fn monitor_constant_contour(sup_x2: f64, chord_arc: f64, eps0: f64, c0: f64) -> f64 {
    c0 * sup_x2 * (1.0 + 1.0 / chord_arc) * (1.0 + 1.0 / eps0)
}

fn check_s0(s0: f64) -> Result<f64> {
    if s0 > 0.0 && s0 < 1.0 {
        Ok(s0.ln())
    } else {
        Err(Error::EnvelopeDomain(s0))
    }
}

/// `exp(ln S₀ · exp(∫₀ᵗ C))` at the last sample, trapezoidal in time.
pub fn envelope(s0: f64, times: &[f64], c: &[f64]) -> Result<f64> {
    Ok(envelope_series(s0, times, c)?.last().copied().unwrap_or(s0))
}

/// The envelope at every sample time.
pub fn envelope_series(s0: f64, times: &[f64], c: &[f64]) -> Result<Vec<f64>> {
    let ln_s0 = check_s0(s0)?;
    if times.len() != c.len() {
        return Err(Error::MalformedSeries("time and rate columns differ in length".into()));
    }
    let mut out = Vec::with_capacity(times.len());
    let mut integral = 0.0;
    for i in 0..times.len() {
        if i > 0 {
            integral += 0.5 * (c[i] + c[i - 1]) * (times[i] - times[i - 1]);
        }
        out.push(if integral == 0.0 {
            s0
        } else {
            (ln_s0 * integral.exp()).exp()
        });
    }
    Ok(out)
}

/// One record of a diagnostics time series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesRow {
    pub t: f64,
    pub s: f64,
    pub alpha_min: f64,
    pub sup_f2: f64,
    pub sup_g2: f64,
    pub curvature_max: f64,
    pub chord_arc: f64,
    pub c_mon: f64,
    pub envelope: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertifySettings {
    /// `min{f∞ − g∞, 1}`
    pub separation_scale: f64,
    pub small_sep_frac: f64,
    pub tol_env: f64,
    pub tol_rate_frac: f64,
}

impl Default for CertifySettings {
    fn default() -> Self {
        CertifySettings {
            separation_scale: 1.0,
            small_sep_frac: DEFAULT_SMALL_SEP_FRAC,
            tol_env: DEFAULT_TOL_ENV,
            tol_rate_frac: DEFAULT_TOL_RATE_FRAC,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    /// No record lies in the small-separation regime.
    NotApplicable,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::NotApplicable => "not_applicable",
        }
    }

    pub fn is_failure(self) -> bool {
        self == Verdict::Fail
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertRow {
    pub row: SeriesRow,
    pub ds_dt: f64,
    /// `dS/dt + C·S·|ln S|`; the inequality holds where this is `≥ −tol_rate`.
    pub ineq_margin: f64,
    pub applicable: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundCertificate {
    pub rows: Vec<CertRow>,
    pub verdict_envelope: Verdict,
    pub verdict_inequality: Verdict,
    pub min_margin: f64,
    pub tol_rate: f64,
    pub first_violation_t: Option<f64>,
}

impl BoundCertificate {
    pub fn passed(&self) -> bool {
        !self.verdict_envelope.is_failure() && !self.verdict_inequality.is_failure()
    }
}

/// Centered differences inside, one-sided at the two ends.
pub fn time_derivative(t: &[f64], s: &[f64]) -> Vec<f64> {
    let n = t.len();
    (0..n)
        .map(|i| {
            let (a, b) = match i {
                0 => (0, 1),
                _ if i == n - 1 => (n - 2, n - 1),
                _ => (i - 1, i + 1),
            };
            (s[b] - s[a]) / (t[b] - t[a])
        })
        .collect()
}

/// Checks a separation history against the envelope and the differential inequality.
///
/// The envelope column is recomputed from `S(0)` and the `C_mon` column.
pub fn certify(series: &[SeriesRow], settings: &CertifySettings) -> Result<BoundCertificate> {
    if series.len() < 3 {
        return Err(Error::MalformedSeries(format!(
            "need at least 3 records, got {}",
            series.len()
        )));
    }
    if let Some(i) = series.windows(2).position(|w| !(w[1].t > w[0].t)) {
        return Err(Error::MalformedSeries(format!(
            "time column is not increasing at record {}",
            i + 1
        )));
    }
    if let Some(r) = series.iter().find(|r| !(r.s.is_finite() && r.c_mon.is_finite())) {
        return Err(Error::MalformedSeries(format!("non-finite entry at t = {}", r.t)));
    }
    let t: Vec<f64> = series.iter().map(|r| r.t).collect();
    let s: Vec<f64> = series.iter().map(|r| r.s).collect();
    let c: Vec<f64> = series.iter().map(|r| r.c_mon).collect();
    let env = envelope_series(s[0], &t, &c).ok();
    let ds = time_derivative(&t, &s);
    let tol_rate = settings.tol_rate_frac * ds.iter().fold(0.0, |m: f64, v| m.max(v.abs()));
    let threshold = settings.small_sep_frac * settings.separation_scale.min(1.0);

    let mut rows = Vec::with_capacity(series.len());
    let mut first_violation: Option<f64> = None;
    let mut env_fail = false;
    let mut ineq_fail = false;
    let mut any_applicable = false;
    let mut min_margin = f64::INFINITY;
    for i in 0..series.len() {
        let mut row = series[i];
        let si = s[i];
        let margin = ds[i] + c[i] * si * si.ln().abs();
        let applicable = si > 0.0 && si < threshold;
        let mut violated = false;
        if let Some(env) = &env {
            row.envelope = env[i];
            if si < env[i] * (1.0 - settings.tol_env) {
                env_fail = true;
                violated = true;
            }
        } else {
            row.envelope = f64::NAN;
        }
        if applicable {
            any_applicable = true;
            min_margin = min_margin.min(margin);
            if margin < -tol_rate {
                ineq_fail = true;
                violated = true;
            }
        }
        if violated && first_violation.is_none() {
            first_violation = Some(t[i]);
        }
        rows.push(CertRow {
            row,
            ds_dt: ds[i],
            ineq_margin: margin,
            applicable,
        });
    }
    let verdict = |fail: bool, applies: bool| match (applies, fail) {
        (false, _) => Verdict::NotApplicable,
        (true, true) => Verdict::Fail,
        (true, false) => Verdict::Pass,
    };
    Ok(BoundCertificate {
        rows,
        verdict_envelope: verdict(env_fail, env.is_some()),
        verdict_inequality: verdict(ineq_fail, any_applicable),
        min_margin,
        tol_rate,
        first_violation_t: first_violation,
    })
}
