//! Initial data for the shipped scenarios.

use std::collections::BTreeMap;

use crate::config::{SimConfig, SystemKind};
use crate::error::{Error, Result};
use crate::evolution::{Ball, State};
use crate::geometry::{ClosedContour, Densities, GraphInterface, PairMode, PhasePair, Vec2};

pub const SCENARIOS: &[&str] = &[
    "flat_pair",
    "bump_pair",
    "tilted_stable",
    "circle",
    "ellipse",
    "pinch_contour",
];

/// Grid and physical settings a scenario is sampled with.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioGrid {
    pub system: SystemKind,
    pub n: usize,
    pub half_width: f64,
    pub densities: Densities,
    pub decay_tol: f64,
    pub eps0: f64,
}

impl ScenarioGrid {
    pub fn from_config(cfg: &SimConfig) -> Self {
        ScenarioGrid {
            system: cfg.system,
            n: cfg.n,
            half_width: cfg.half_width,
            densities: cfg.densities,
            decay_tol: cfg.decay_tol,
            eps0: cfg.eps0,
        }
    }

    /// Defaults for dumping a scenario without a config file.
    pub fn default_for(name: &str) -> Self {
        let system = if matches!(name, "circle" | "ellipse" | "pinch_contour") {
            SystemKind::SqgContour
        } else {
            SystemKind::MuskatMultiphase
        };
        ScenarioGrid {
            system,
            n: 256,
            half_width: 8.0,
            densities: Densities::new(0.0, 1.0, 2.0),
            decay_tol: crate::geometry::DEFAULT_DECAY_TOL,
            eps0: 0.4,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub state: State,
    /// The pinch ball, for contours built around one.
    pub ball: Option<Ball>,
}

struct Params<'a> {
    given: &'a BTreeMap<String, f64>,
    known: Vec<&'static str>,
}

impl Params<'_> {
    fn get(&mut self, key: &'static str, default: f64) -> Result<f64> {
        self.known.push(key);
        let v = self.given.get(key).copied().unwrap_or(default);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::InvalidField {
                field: format!("param.{key}"),
                reason: "must be finite".into(),
            })
        }
    }

    fn positive(&mut self, key: &'static str, default: f64) -> Result<f64> {
        let v = self.get(key, default)?;
        if v > 0.0 {
            Ok(v)
        } else {
            Err(Error::InvalidField {
                field: format!("param.{key}"),
                reason: format!("must be positive, got {v}"),
            })
        }
    }

    fn finish(self) -> Result<()> {
        match self.given.keys().find(|k| !self.known.contains(&k.as_str())) {
            Some(k) => Err(Error::InvalidField {
                field: format!("param.{k}"),
                reason: "not a parameter of this scenario".into(),
            }),
            None => Ok(()),
        }
    }
}

fn pair(
    grid: &ScenarioGrid,
    f: impl Fn(f64) -> f64,
    g: impl Fn(f64) -> f64,
    far: Option<(f64, f64)>,
) -> Result<State> {
    match grid.system {
        SystemKind::MuskatMultiphase => {
            let (f_inf, g_inf) = far.ok_or_else(|| {
                Error::Config("scenario has no far field for the real line".into())
            })?;
            let a = grid.half_width;
            let fi = GraphInterface::real_line(
                a,
                sample_line(grid.n, a, &f),
                Some(f_inf),
                grid.decay_tol,
            )?;
            let gi = GraphInterface::real_line(
                a,
                sample_line(grid.n, a, &g),
                Some(g_inf),
                grid.decay_tol,
            )?;
            Ok(State::Muskat(PhasePair::new(fi, gi, grid.densities, PairMode::Muskat)?))
        }
        SystemKind::SqgMultiphase => {
            let fi = GraphInterface::periodic_from_fn(grid.n, &f)?;
            let gi = GraphInterface::periodic_from_fn(grid.n, &g)?;
            Ok(State::SqgPair(PhasePair::new(fi, gi, grid.densities, PairMode::Sqg)?))
        }
        SystemKind::SqgContour => Err(Error::Config(
            "graph-pair scenarios need a two-interface system".into(),
        )),
    }
}

fn sample_line(n: usize, a: f64, f: &impl Fn(f64) -> f64) -> Vec<f64> {
    let h = 2.0 * a / n as f64;
    (0..n).map(|j| f(-a + j as f64 * h)).collect()
}

fn contour_only(grid: &ScenarioGrid, name: &str) -> Result<()> {
    if grid.system == SystemKind::SqgContour {
        Ok(())
    } else {
        Err(Error::Config(format!("scenario `{name}` needs the sqg_contour system")))
    }
}

/// Builds a scenario and checks its invariants at `t = 0`.
///
/// * `flat_pair` (`a`, `b`): `f ≡ a`, `g ≡ b`.
/// * `bump_pair` (`d`, `h1`, `h2`, `w`): `f = d/2 + h1·e^{−α²/w}`,
///   `g = −d/2 − h2·e^{−α²/w}`. Negative heights point the bumps inward.
/// * `tilted_stable` (`d`, `slope`, `w`): odd small-slope perturbations of a
///   flat pair, `α·e^{−α²/w}` on the line and `sin α` on the circle.
/// * `circle` (`r`, `cx`, `cy`), `ellipse` (`a`, `b`).
/// * `pinch_contour` (`a`, `b`, `d`, `w`): the dumbbell
///   `(a cos α, sin α·(b − (b − d/2)e^{−(a cos α)²/w²}))` whose two branches
///   pass at distance `d` through the ball of radius `ε₀/2` at the origin.
pub fn make_scenario(
    name: &str,
    params: &BTreeMap<String, f64>,
    grid: &ScenarioGrid,
) -> Result<Scenario> {
    let mut p = Params {
        given: params,
        known: Vec::new(),
    };
    let periodic = grid.system != SystemKind::MuskatMultiphase;
    let mut ball = None;
    let state = match name {
        "flat_pair" => {
            let (a, b) = (p.get("a", 1.0)?, p.get("b", 0.0)?);
            pair(grid, |_| a, |_| b, Some((a, b)))?
        }
        "bump_pair" => {
            let d = p.positive("d", 1.0)?;
            let h1 = p.get("h1", -0.4)?;
            let h2 = p.get("h2", -0.4)?;
            let w = p.positive("w", 1.0)?;
            let bump = move |x: f64| (-x * x / w).exp();
            pair(
                grid,
                |x| 0.5 * d + h1 * bump(x),
                |x| -0.5 * d - h2 * bump(x),
                Some((0.5 * d, -0.5 * d)),
            )?
        }
        "tilted_stable" => {
            let d = p.positive("d", 1.0)?;
            let slope = p.get("slope", 0.1)?;
            let w = p.positive("w", 1.0)?;
            let tilt = move |x: f64| {
                if periodic {
                    x.sin()
                } else {
                    x * (-x * x / w).exp()
                }
            };
            pair(
                grid,
                |x| 0.5 * d + slope * tilt(x),
                |x| -0.5 * d + 0.5 * slope * tilt(x),
                Some((0.5 * d, -0.5 * d)),
            )?
        }
        "circle" => {
            contour_only(grid, name)?;
            let r = p.positive("r", 1.0)?;
            let c = Vec2::new(p.get("cx", 0.0)?, p.get("cy", 0.0)?);
            State::Contour(ClosedContour::circle(grid.n, r, c)?)
        }
        "ellipse" => {
            contour_only(grid, name)?;
            let (a, b) = (p.positive("a", 2.0)?, p.positive("b", 1.0)?);
            State::Contour(ClosedContour::ellipse(grid.n, a, b)?)
        }
        "pinch_contour" => {
            contour_only(grid, name)?;
            let a = p.positive("a", 2.0)?;
            let b = p.positive("b", 1.0)?;
            let d = p.positive("d", 0.1)?;
            let w = p.positive("w", 0.5)?;
            let eps0 = grid.eps0;
            if d >= eps0 || 2.0 * eps0 >= a || 0.5 * d >= b {
                return Err(Error::Config(format!(
                    "pinch_contour needs d < eps0, 2 eps0 < a and d/2 < b (d = {d}, eps0 = {eps0}, a = {a}, b = {b})"
                )));
            }
            let x = ClosedContour::from_fn(grid.n, |t| {
                let x1 = a * t.cos();
                let pinch = (-(x1 * x1) / (w * w)).exp();
                Vec2::new(x1, t.sin() * (b - (b - 0.5 * d) * pinch))
            })?;
            let bl = Ball {
                center: Vec2::ZERO,
                eps0,
            };
            crate::evolution::extract_charts(&x, &bl)?;
            ball = Some(bl);
            State::Contour(x)
        }
        other => return Err(Error::UnknownScenario(other.to_string())),
    };
    p.finish()?;
    Ok(Scenario { state, ball })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{chord_arc_constant, curvature, min_separation};

    fn params(kv: &[(&str, f64)]) -> BTreeMap<String, f64> {
        kv.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    fn graphs(s: &Scenario) -> &PhasePair {
        match &s.state {
            State::Muskat(p) | State::SqgPair(p) => p,
            State::Contour(_) => panic!("expected a pair"),
        }
    }

    #[test]
    fn flat_pair_gap() {
        let grid = ScenarioGrid::default_for("flat_pair");
        let s = make_scenario("flat_pair", &params(&[("a", 1.0), ("b", 0.0)]), &grid).unwrap();
        let p = graphs(&s);
        assert_eq!(min_separation(&p.f, &p.g).unwrap().s, 1.0);
    }

    #[test]
    fn bump_pair_minimum() {
        // inward bumps: grid-scan oracle for d − |h1| − |h2| at α = 0
        let grid = ScenarioGrid::default_for("bump_pair");
        let s = make_scenario("bump_pair", &BTreeMap::new(), &grid).unwrap();
        let p = graphs(&s);
        let sep = min_separation(&p.f, &p.g).unwrap();
        let scan = p
            .f
            .nodes()
            .iter()
            .map(|&a| 1.0 - 0.8 * (-a * a).exp())
            .fold(f64::INFINITY, f64::min);
        assert!((sep.s - 0.2).abs() < 1e-15 && (sep.s - scan).abs() < 1e-15);
        assert_eq!(sep.alpha_min, 0.0);

        // outward bumps on the circle: the gap is smallest where the bumps are smallest
        let grid = ScenarioGrid {
            system: SystemKind::SqgMultiphase,
            ..grid
        };
        let kv = params(&[("d", 0.2), ("h1", 0.4), ("h2", 0.4)]);
        let s = make_scenario("bump_pair", &kv, &grid).unwrap();
        let p = graphs(&s);
        let sep = min_separation(&p.f, &p.g).unwrap();
        let pi = std::f64::consts::PI;
        assert!((sep.s - (0.2 + 0.8 * (-pi * pi).exp())).abs() < 1e-15);
        assert_eq!(sep.alpha_min, -pi);
    }

    #[test]
    fn circle_matches_geometry() {
        let grid = ScenarioGrid {
            n: 512,
            ..ScenarioGrid::default_for("circle")
        };
        let s = make_scenario("circle", &BTreeMap::new(), &grid).unwrap();
        let State::Contour(x) = &s.state else { panic!() };
        let c = chord_arc_constant(x, 0.1).unwrap();
        assert!((c - 2.0 / std::f64::consts::PI).abs() < 1e-4);
        assert!(curvature(x).unwrap().iter().all(|k| (k - 1.0).abs() < 1e-6));
    }

    #[test]
    fn rejects_bad_requests() {
        let grid = ScenarioGrid::default_for("bump_pair");
        assert!(matches!(
            make_scenario("spiral", &BTreeMap::new(), &grid),
            Err(Error::UnknownScenario(_))
        ));
        assert!(matches!(
            make_scenario("bump_pair", &params(&[("h1", -0.6), ("h2", -0.6)]), &grid),
            Err(Error::PhaseOverlap { .. })
        ));
        assert!(make_scenario("flat_pair", &params(&[("q", 1.0)]), &grid).is_err());
        assert!(make_scenario("circle", &BTreeMap::new(), &grid).is_err());
    }

    #[test]
    fn pinch_contour_has_a_ball() {
        let grid = ScenarioGrid::default_for("pinch_contour");
        let s = make_scenario("pinch_contour", &BTreeMap::new(), &grid).unwrap();
        assert!(s.ball.is_some());
        assert!(
            make_scenario("pinch_contour", &params(&[("d", 0.5)]), &grid).is_err()
        );
    }
}
