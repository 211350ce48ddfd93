//! Run configuration in a flat `key = value` text format.
//!
//! Blank lines and everything after `#` are ignored. Scenario parameters use
//! `param.<name>` keys. Unknown keys and repeated keys are rejected.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::geometry::{Densities, DEFAULT_DECAY_TOL, MIN_NODES};
use crate::monitor::{DEFAULT_C0, DEFAULT_SMALL_SEP_FRAC, DEFAULT_TOL_ENV, DEFAULT_TOL_RATE_FRAC};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SystemKind {
    MuskatMultiphase,
    SqgContour,
    SqgMultiphase,
}

impl SystemKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SystemKind::MuskatMultiphase => "muskat_multiphase",
            SystemKind::SqgContour => "sqg_contour",
            SystemKind::SqgMultiphase => "sqg_multiphase",
        }
    }

    pub fn default_domain(self) -> DomainKind {
        match self {
            SystemKind::MuskatMultiphase => DomainKind::RealLine,
            _ => DomainKind::Periodic,
        }
    }
}

impl FromStr for SystemKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "muskat_multiphase" => Ok(SystemKind::MuskatMultiphase),
            "sqg_contour" => Ok(SystemKind::SqgContour),
            "sqg_multiphase" => Ok(SystemKind::SqgMultiphase),
            _ => Err(invalid("system", format!("unknown system `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DomainKind {
    Periodic,
    RealLine,
}

impl DomainKind {
    pub fn as_str(self) -> &'static str {
        match self {
            DomainKind::Periodic => "periodic",
            DomainKind::RealLine => "real_line",
        }
    }
}

impl FromStr for DomainKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "periodic" => Ok(DomainKind::Periodic),
            "real_line" => Ok(DomainKind::RealLine),
            _ => Err(invalid("domain", format!("unknown domain `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub system: SystemKind,
    pub scenario: String,
    pub params: BTreeMap<String, f64>,
    pub n: usize,
    pub domain: DomainKind,
    /// `A` of the truncated line `[−A, A)`; ignored on periodic domains.
    pub half_width: f64,
    pub densities: Densities,
    pub dt: f64,
    pub t_end: f64,
    pub record_every: usize,
    pub quad_nodes: usize,
    /// `L` of the quadrature interval; π on periodic domains.
    pub quad_half_width: f64,
    pub cfl: f64,
    pub c0: f64,
    pub small_sep_frac: f64,
    pub tol_env: f64,
    pub tol_rate_frac: f64,
    pub decay_tol: f64,
    /// Compact window `[−W, W]` that must contain the minimum separation.
    pub window: f64,
    pub eps0: f64,
    pub filter: bool,
    pub output: PathBuf,
}

fn invalid(field: &str, reason: impl Into<String>) -> Error {
    Error::InvalidField {
        field: field.into(),
        reason: reason.into(),
    }
}

const KEYS: &[&str] = &[
    "system",
    "scenario",
    "n",
    "domain",
    "half_width",
    "zeta1",
    "zeta2",
    "zeta3",
    "dt",
    "t_end",
    "record_every",
    "quad_nodes",
    "quad_half_width",
    "cfl",
    "c0",
    "small_sep_frac",
    "tol_env",
    "tol_rate_frac",
    "decay_tol",
    "window",
    "eps0",
    "filter",
    "output",
];

struct Raw {
    entries: BTreeMap<String, (usize, String)>,
}

impl Raw {
    fn take(&mut self, key: &str) -> Option<(usize, String)> {
        self.entries.remove(key)
    }

    fn parsed<T: FromStr>(&mut self, key: &str, default: T) -> Result<T> {
        match self.take(key) {
            None => Ok(default),
            Some((line, v)) => v.parse().map_err(|_| Error::Parse {
                line,
                reason: format!("cannot parse `{v}` for `{key}`"),
            }),
        }
    }
}

fn parse_lines(text: &str) -> Result<Raw> {
    let mut entries = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((k, v)) = content.split_once('=') else {
            return Err(Error::Parse {
                line,
                reason: "expected `key = value`".into(),
            });
        };
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() || v.is_empty() {
            return Err(Error::Parse {
                line,
                reason: "empty key or value".into(),
            });
        }
        let known = KEYS.contains(&k) || (k.starts_with("param.") && k.len() > 6);
        if !known {
            return Err(Error::Parse {
                line,
                reason: format!("unknown key `{k}`"),
            });
        }
        if entries.insert(k.to_string(), (line, v.to_string())).is_some() {
            return Err(Error::Parse {
                line,
                reason: format!("duplicate key `{k}`"),
            });
        }
    }
    Ok(Raw { entries })
}

fn positive(field: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(invalid(field, format!("must be positive, got {v}")))
    }
}

fn non_negative(field: &str, v: f64) -> Result<()> {
    if v >= 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(invalid(field, format!("must be non-negative, got {v}")))
    }
}

impl SimConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut raw = parse_lines(text)?;
        let system: SystemKind = match raw.take("system") {
            Some((_, v)) => v.parse()?,
            None => return Err(invalid("system", "missing")),
        };
        let scenario = match raw.take("scenario") {
            Some((_, v)) => v,
            None => return Err(invalid("scenario", "missing")),
        };
        let domain: DomainKind = match raw.take("domain") {
            Some((_, v)) => v.parse()?,
            None => system.default_domain(),
        };
        let n: usize = raw.parsed("n", 256)?;
        let half_width: f64 = raw.parsed("half_width", 8.0)?;
        let densities = Densities::new(
            raw.parsed("zeta1", 0.0)?,
            raw.parsed("zeta2", 1.0)?,
            raw.parsed("zeta3", 2.0)?,
        );
        let dt = raw.parsed("dt", 1e-3)?;
        let t_end = raw.parsed("t_end", 0.1)?;
        let record_every = raw.parsed("record_every", 10)?;
        let quad_nodes = raw.parsed("quad_nodes", 2 * n)?;
        let default_l = match domain {
            DomainKind::Periodic => PI,
            DomainKind::RealLine => half_width,
        };
        let quad_half_width = raw.parsed("quad_half_width", default_l)?;
        let cfl = raw.parsed("cfl", crate::evolution::DEFAULT_CFL)?;
        let c0 = raw.parsed("c0", DEFAULT_C0)?;
        let small_sep_frac = raw.parsed("small_sep_frac", DEFAULT_SMALL_SEP_FRAC)?;
        let tol_env = raw.parsed("tol_env", DEFAULT_TOL_ENV)?;
        let tol_rate_frac = raw.parsed("tol_rate_frac", DEFAULT_TOL_RATE_FRAC)?;
        let decay_tol = raw.parsed("decay_tol", DEFAULT_DECAY_TOL)?;
        let window = raw.parsed("window", 0.5 * half_width)?;
        let eps0 = raw.parsed("eps0", 0.4)?;
        let filter = raw.parsed("filter", system == SystemKind::SqgContour)?;
        let output = PathBuf::from(raw.take("output").map_or("out".to_string(), |(_, v)| v));
        let mut params = BTreeMap::new();
        for (k, (line, v)) in std::mem::take(&mut raw.entries) {
            let name = k.trim_start_matches("param.").to_string();
            let value = v.parse::<f64>().map_err(|_| Error::Parse {
                line,
                reason: format!("cannot parse `{v}` for `{k}`"),
            })?;
            params.insert(name, value);
        }
        let cfg = SimConfig {
            system,
            scenario,
            params,
            n,
            domain,
            half_width,
            densities,
            dt,
            t_end,
            record_every,
            quad_nodes,
            quad_half_width,
            cfl,
            c0,
            small_sep_frac,
            tol_env,
            tol_rate_frac,
            decay_tol,
            window,
            eps0,
            filter,
            output,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < MIN_NODES {
            return Err(invalid("n", format!("must be at least {MIN_NODES}, got {}", self.n)));
        }
        if self.domain != self.system.default_domain() {
            return Err(invalid(
                "domain",
                format!(
                    "{} requires a {} domain",
                    self.system.as_str(),
                    self.system.default_domain().as_str()
                ),
            ));
        }
        positive("dt", self.dt)?;
        positive("t_end", self.t_end)?;
        if self.record_every == 0 {
            return Err(invalid("record_every", "must be at least 1"));
        }
        if self.quad_nodes < 2 || self.quad_nodes % 2 != 0 {
            return Err(invalid("quad_nodes", format!("must be even and at least 2, got {}", self.quad_nodes)));
        }
        positive("quad_half_width", self.quad_half_width)?;
        positive("cfl", self.cfl)?;
        non_negative("c0", self.c0)?;
        positive("small_sep_frac", self.small_sep_frac)?;
        if self.small_sep_frac > 1.0 {
            return Err(invalid("small_sep_frac", "must not exceed 1"));
        }
        non_negative("tol_env", self.tol_env)?;
        non_negative("tol_rate_frac", self.tol_rate_frac)?;
        positive("decay_tol", self.decay_tol)?;
        positive("eps0", self.eps0)?;
        if self.eps0 >= PI {
            return Err(invalid("eps0", "must be below pi"));
        }
        let d = self.densities;
        if [d.zeta1, d.zeta2, d.zeta3].iter().any(|v| !v.is_finite()) {
            return Err(invalid("zeta1", "densities must be finite"));
        }
        if self.domain == DomainKind::RealLine {
            positive("half_width", self.half_width)?;
            positive("window", self.window)?;
            if self.window > self.half_width {
                return Err(invalid("window", "must not exceed half_width"));
            }
        } else if self.quad_half_width != PI {
            return Err(invalid("quad_half_width", "is fixed to pi on periodic domains"));
        }
        if self.system == SystemKind::MuskatMultiphase {
            if !(d.zeta1 < d.zeta2 && d.zeta2 < d.zeta3) {
                return Err(invalid("zeta2", "Muskat runs need zeta1 < zeta2 < zeta3"));
            }
            if self.quad_half_width <= 1.0 {
                return Err(invalid("quad_half_width", "must exceed 1 on the real line"));
            }
        }
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    /// Canonical text: every key in a fixed order, parameters last.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let mut put = |k: &str, v: &dyn std::fmt::Display| {
            let _ = writeln!(s, "{k} = {v}");
        };
        put("system", &self.system.as_str());
        put("scenario", &self.scenario);
        put("n", &self.n);
        put("domain", &self.domain.as_str());
        put("half_width", &self.half_width);
        put("zeta1", &self.densities.zeta1);
        put("zeta2", &self.densities.zeta2);
        put("zeta3", &self.densities.zeta3);
        put("dt", &self.dt);
        put("t_end", &self.t_end);
        put("record_every", &self.record_every);
        put("quad_nodes", &self.quad_nodes);
        put("quad_half_width", &self.quad_half_width);
        put("cfl", &self.cfl);
        put("c0", &self.c0);
        put("small_sep_frac", &self.small_sep_frac);
        put("tol_env", &self.tol_env);
        put("tol_rate_frac", &self.tol_rate_frac);
        put("decay_tol", &self.decay_tol);
        put("window", &self.window);
        put("eps0", &self.eps0);
        put("filter", &self.filter);
        put("output", &self.output.display());
        for (k, v) in &self.params {
            put(&format!("param.{k}"), v);
        }
        s
    }
}

pub fn load_config(path: &Path) -> Result<SimConfig> {
    SimConfig::load(path)
}
