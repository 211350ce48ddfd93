//! Classical RK4 with a fixed step and a CFL guard.

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::geometry::{ClosedContour, PhasePair};
use crate::quadrature::QuadRule;

use super::velocity::{muskat_velocity, sqg_contour_velocity, sqg_multiphase_velocity};

pub const DEFAULT_CFL: f64 = 0.5;
/// Modes below this fraction of the largest modal amplitude are removed.
pub const FILTER_THRESHOLD: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub enum State {
    Muskat(PhasePair),
    SqgPair(PhasePair),
    Contour(ClosedContour),
}

impl State {
    pub fn h(&self) -> f64 {
        match self {
            State::Muskat(p) | State::SqgPair(p) => p.f.h(),
            State::Contour(c) => c.h(),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            State::Muskat(p) | State::SqgPair(p) => p.f.len(),
            State::Contour(c) => c.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The two sample arrays laid end to end: `[f, g]` or `[x₁, x₂]`.
    pub fn pack(&self) -> Vec<f64> {
        let (a, b) = match self {
            State::Muskat(p) | State::SqgPair(p) => (p.f.values(), p.g.values()),
            State::Contour(c) => (c.x1(), c.x2()),
        };
        let mut v = Vec::with_capacity(2 * a.len());
        v.extend_from_slice(a);
        v.extend_from_slice(b);
        v
    }

    /// A state of the same kind and grid holding `packed`.
    pub fn unpack(&self, packed: &[f64]) -> Result<State> {
        let n = self.len();
        if packed.len() != 2 * n {
            return Err(Error::Config("packed state has the wrong length".into()));
        }
        let (a, b) = (packed[..n].to_vec(), packed[n..].to_vec());
        let splash = |e: Error| {
            if e.is_splash() {
                Error::SplashDetected(e.to_string())
            } else {
                e
            }
        };
        Ok(match self {
            State::Muskat(p) => State::Muskat(p.with_values(a, b).map_err(splash)?),
            State::SqgPair(p) => State::SqgPair(p.with_values(a, b).map_err(splash)?),
            State::Contour(_) => State::Contour(ClosedContour::new(a, b).map_err(splash)?),
        })
    }
}

/// Packed velocity of `state`.
pub fn velocity(state: &State, rule: &QuadRule) -> Result<Vec<f64>> {
    let (a, b) = match state {
        State::Muskat(p) => muskat_velocity(p, rule)?,
        State::SqgPair(p) => sqg_multiphase_velocity(p, rule)?,
        State::Contour(c) => sqg_contour_velocity(c, rule)?
            .into_iter()
            .map(|v| (v.x, v.y))
            .unzip(),
    };
    let mut v = a;
    v.extend(b);
    Ok(v)
}

fn axpy(y: &[f64], a: f64, k: &[f64]) -> Vec<f64> {
    y.iter().zip(k).map(|(y, k)| y + a * k).collect()
}

/// One RK4 step of `y' = rhs(y)` given the first stage `k1 = rhs(y)`.
pub fn rk4_with_first_stage(
    y: &[f64],
    dt: f64,
    k1: &[f64],
    mut rhs: impl FnMut(&[f64]) -> Result<Vec<f64>>,
) -> Result<Vec<f64>> {
    let k2 = rhs(&axpy(y, 0.5 * dt, k1))?;
    let k3 = rhs(&axpy(y, 0.5 * dt, &k2))?;
    let k4 = rhs(&axpy(y, dt, &k3))?;
    let w = dt / 6.0;
    Ok((0..y.len())
        .map(|i| y[i] + w * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]))
        .collect())
}

pub fn rk4(
    y: &[f64],
    dt: f64,
    mut rhs: impl FnMut(&[f64]) -> Result<Vec<f64>>,
) -> Result<Vec<f64>> {
    let k1 = rhs(y)?;
    rk4_with_first_stage(y, dt, &k1, rhs)
}

/// Removes Fourier modes of `v` below `FILTER_THRESHOLD` times the largest amplitude.
pub fn spectral_filter(v: &[f64]) -> Vec<f64> {
    let n = v.len();
    let mut planner = FftPlanner::<f64>::new();
    let mut buf: Vec<Complex<f64>> = v.iter().map(|&x| Complex::new(x, 0.0)).collect();
    planner.plan_fft_forward(n).process(&mut buf);
    let peak = buf.iter().fold(0.0, |m: f64, c| m.max(c.norm()));
    let cut = FILTER_THRESHOLD * peak;
    for c in &mut buf {
        if c.norm() < cut {
            *c = Complex::new(0.0, 0.0);
        }
    }
    planner.plan_fft_inverse(n).process(&mut buf);
    let scale = 1.0 / n as f64;
    buf.iter().map(|c| c.re * scale).collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepSettings {
    pub rule: QuadRule,
    pub cfl: f64,
    pub filter: bool,
}

/// Advances `state` by `dt`. The filter only acts on closed contours.
pub fn step(state: &State, dt: f64, settings: &StepSettings) -> Result<State> {
    if !(dt > 0.0) {
        return Err(Error::InvalidField {
            field: "dt".into(),
            reason: format!("must be positive, got {dt}"),
        });
    }
    let y = state.pack();
    let k1 = velocity(state, &settings.rule)?;
    let vmax = k1.iter().fold(0.0, |m: f64, v| m.max(v.abs()));
    if vmax > 0.0 {
        let limit = settings.cfl * state.h() / vmax;
        if dt > limit {
            return Err(Error::StepRejected { dt, limit });
        }
    }
    let rhs = |v: &[f64]| velocity(&state.unpack(v)?, &settings.rule);
    let mut next = rk4_with_first_stage(&y, dt, &k1, rhs)?;
    if settings.filter && matches!(state, State::Contour(_)) {
        let n = state.len();
        let mut out = spectral_filter(&next[..n]);
        out.extend(spectral_filter(&next[n..]));
        next = out;
    }
    state.unpack(&next)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Densities, GraphInterface, PairMode, Vec2};

    #[test]
    fn rk4_matches_exponential() {
        let (lambda, dt) = (-1.3, 0.05);
        let y = rk4(&[2.0], dt, |v| Ok(vec![lambda * v[0]])).unwrap();
        let exact = 2.0 * (lambda * dt).exp();
        assert!((y[0] - exact).abs() < 2.0 * (lambda * dt).powi(5).abs());
    }

    #[test]
    fn zero_velocity_leaves_state_bitwise() {
        let f = GraphInterface::real_line_from_fn(64, 8.0, Some(1.0), |_| 1.0).unwrap();
        let g = GraphInterface::real_line_from_fn(64, 8.0, Some(0.0), |_| 0.0).unwrap();
        let p = PhasePair::new(f, g, Densities::new(0.0, 1.0, 2.0), PairMode::Muskat).unwrap();
        let s = State::Muskat(p);
        let settings = StepSettings {
            rule: QuadRule::real_line(8.0, 256).unwrap(),
            cfl: DEFAULT_CFL,
            filter: false,
        };
        assert_eq!(step(&s, 0.1, &settings).unwrap(), s);
    }

    #[test]
    fn cfl_violation_is_rejected() {
        let c = ClosedContour::circle(64, 1.0, Vec2::ZERO).unwrap();
        let settings = StepSettings {
            rule: QuadRule::periodic(256).unwrap(),
            cfl: DEFAULT_CFL,
            filter: true,
        };
        assert!(matches!(
            step(&State::Contour(c), 1.0, &settings),
            Err(Error::StepRejected { .. })
        ));
    }

    #[test]
    fn filter_keeps_resolved_modes() {
        let v: Vec<f64> = (0..64)
            .map(|j| {
                let a = j as f64 * std::f64::consts::TAU / 64.0;
                1.0 + a.cos() + 1e-14 * (7.0 * a).sin()
            })
            .collect();
        let w = spectral_filter(&v);
        for (j, (a, b)) in v.iter().zip(&w).enumerate() {
            let a0 = j as f64 * std::f64::consts::TAU / 64.0;
            assert!((b - (1.0 + a0.cos())).abs() < 1e-14, "{a} {b}");
        }
    }
}
