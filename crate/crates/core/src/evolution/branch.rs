//! Two-branch chart decomposition of a closed SQG front near a pinch.
//!
//! Inside a vertical strip around the ball the contour is two graphs over the
//! horizontal coordinate `s = x₁ − c₁`: `f` (upper) and `g` (lower). Their chart
//! velocities are the near-field integrals over `(−ε₀, ε₀)` plus a remainder
//! `R` that collects everything else the full contour velocity contains.

use crate::error::{Error, Result};
use crate::geometry::{chord_arc_restricted, ClosedContour, Stencil, Vec2};
use crate::kernels::{sqg_contour_integrand_node, ContourSamples, CurveSampler};
use crate::quadrature::QuadRule;

/// Ball `B` of radius `ε₀/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Ball {
    pub center: Vec2,
    pub eps0: f64,
}

impl Ball {
    pub fn radius(&self) -> f64 {
        0.5 * self.eps0
    }
}

/// One branch as a graph `y(s)` on its own (nonuniform) chart nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct Chart {
    pub s: Vec<f64>,
    pub y: Vec<f64>,
    pub dy: Vec<f64>,
    /// Contour node behind each chart node.
    pub nodes: Vec<usize>,
}

fn lagrange4(xs: &[f64], t: f64) -> [f64; 4] {
    let mut w = [1.0; 4];
    for (i, wi) in w.iter_mut().enumerate() {
        for (k, &xk) in xs.iter().enumerate() {
            if k != i {
                *wi *= (t - xk) / (xs[i] - xk);
            }
        }
    }
    w
}

impl Chart {
    /// Value and slope at `s` by cubic interpolation.
    pub fn eval(&self, s: f64) -> Result<(f64, f64)> {
        let n = self.s.len();
        let i = self.s.partition_point(|&v| v <= s);
        if i < 2 || i + 1 >= n {
            return Err(Error::Chart(format!(
                "offset {s} leaves the chart range [{}, {}]",
                self.s[0],
                self.s[n - 1]
            )));
        }
        let lo = i - 2;
        let w = lagrange4(&self.s[lo..lo + 4], s);
        let mut v = 0.0;
        let mut d = 0.0;
        for k in 0..4 {
            v += w[k] * self.y[lo + k];
            d += w[k] * self.dy[lo + k];
        }
        Ok((v, d))
    }

    fn targets(&self, half: f64) -> impl Iterator<Item = usize> + '_ {
        (0..self.s.len()).filter(move |&k| self.s[k].abs() <= half)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Charts {
    pub upper: Chart,
    pub lower: Chart,
}

/// Splits the part of `x` inside the strip `|x₁ − c₁| ≤ 2ε₀` into two graphs.
pub fn extract_charts(x: &ClosedContour, ball: &Ball) -> Result<Charts> {
    let n = x.len();
    let (xp, _) = x.derivatives()?;
    let strip = 2.0 * ball.eps0;
    let inside: Vec<bool> = (0..n)
        .map(|j| (x.x1()[j] - ball.center.x).abs() <= strip)
        .collect();
    let Some(start) = (0..n).find(|&j| !inside[j]) else {
        return Err(Error::Chart("the whole contour lies in the strip".into()));
    };
    let mut runs: Vec<Vec<usize>> = Vec::new();
    let mut current: Vec<usize> = Vec::new();
    for k in 1..=n {
        let j = (start + k) % n;
        if inside[j] {
            current.push(j);
        } else if !current.is_empty() {
            runs.push(std::mem::take(&mut current));
        }
    }
    if runs.len() != 2 {
        return Err(Error::Chart(format!(
            "expected two branches in the strip, found {}",
            runs.len()
        )));
    }
    let mut charts = Vec::with_capacity(2);
    for run in runs {
        let mut nodes = run;
        if x.x1()[nodes[0]] > x.x1()[nodes[nodes.len() - 1]] {
            nodes.reverse();
        }
        let s: Vec<f64> = nodes.iter().map(|&j| x.x1()[j] - ball.center.x).collect();
        if s.windows(2).any(|p| p[1] <= p[0]) {
            return Err(Error::Chart("branch is not a graph over x1".into()));
        }
        let y = nodes.iter().map(|&j| x.x2()[j]).collect();
        let dy = nodes.iter().map(|&j| xp[j].y / xp[j].x).collect();
        charts.push(Chart { s, y, dy, nodes });
    }
    let lower = charts.pop().unwrap();
    let upper = charts.pop().unwrap();
    let (upper, lower) = if upper.y.iter().sum::<f64>() / upper.y.len() as f64
        >= lower.y.iter().sum::<f64>() / lower.y.len() as f64
    {
        (upper, lower)
    } else {
        (lower, upper)
    };
    let c2 = ball.center.y;
    if upper.y.iter().any(|&v| v <= c2) || lower.y.iter().any(|&v| v >= c2) {
        return Err(Error::Chart("branches cross the ball's horizontal axis".into()));
    }
    for (name, c) in [("upper", &upper), ("lower", &lower)] {
        let (v, _) = c.eval(0.0)?;
        if (v - c2).abs() >= ball.eps0 {
            return Err(Error::Chart(format!("{name} branch misses the ball")));
        }
    }
    Ok(Charts { upper, lower })
}

impl Charts {
    /// Smallest gap `f − g` at upper chart nodes with `|s| ≤ ε₀`, and the
    /// contour node where it occurs.
    pub fn gap(&self, eps0: f64) -> Result<(f64, usize)> {
        let mut best = (f64::INFINITY, usize::MAX);
        for k in self.upper.targets(eps0) {
            let s = self.upper.s[k];
            let (g, _) = self.lower.eval(s)?;
            let gap = self.upper.y[k] - g;
            if gap < best.0 {
                best = (gap, self.upper.nodes[k]);
            }
        }
        if best.1 == usize::MAX {
            return Err(Error::Chart("no chart nodes inside the ball window".into()));
        }
        if best.0 <= 0.0 {
            return Err(Error::SplashDetected(format!("branches touch at node {}", best.1)));
        }
        Ok(best)
    }

    /// Chord-arc constant over the chart window `|s| ≤ ε₀/2`, with the two
    /// chart pieces `|s| < ε₀` excluded as partners.
    pub fn chord_arc(&self, x: &ClosedContour, eps0: f64) -> Result<f64> {
        let mut targets: Vec<usize> = Vec::new();
        let mut piece = vec![false; x.len()];
        for c in [&self.upper, &self.lower] {
            targets.extend(c.targets(0.5 * eps0).map(|k| c.nodes[k]));
            for (k, &j) in c.nodes.iter().enumerate() {
                if c.s[k].abs() < eps0 {
                    piece[j] = true;
                }
            }
        }
        chord_arc_restricted(x, &targets, |_, j| piece[j])
    }
}

/// Decomposed velocity at one chart node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChartVelocity {
    pub node: usize,
    pub s: f64,
    /// Same-branch integral over `(−ε₀, ε₀)`.
    pub near: f64,
    /// Cross-branch integral over `(−ε₀, ε₀)`.
    pub cross: f64,
    pub remainder: f64,
    /// Second component of the full contour velocity at the node.
    pub full: f64,
}

impl ChartVelocity {
    pub fn chart_value(&self) -> f64 {
        self.near + self.cross + self.remainder
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BranchVelocity {
    pub upper: Vec<ChartVelocity>,
    pub lower: Vec<ChartVelocity>,
    pub sup_x2: f64,
    pub chord_arc: f64,
    /// `(‖x″‖∞ / c_CA)·(2π − 2ε₀)`
    pub bound: f64,
}

impl BranchVelocity {
    pub fn max_remainder(&self) -> f64 {
        self.upper
            .iter()
            .chain(&self.lower)
            .fold(0.0, |m, c| m.max(c.remainder.abs()))
    }

    pub fn bound_holds(&self) -> bool {
        self.max_remainder() <= self.bound
    }

    pub fn max_chart_mismatch(&self) -> f64 {
        self.upper
            .iter()
            .chain(&self.lower)
            .fold(0.0, |m, c| m.max((c.chart_value() - c.full).abs()))
    }
}

fn sigma(dy0: f64, y0: f64, beta: f64, y: f64, dy: f64) -> f64 {
    (dy0 - dy) / (beta * beta + (y0 - y) * (y0 - y)).sqrt()
}

/// Chart velocities of both branches at every node with `|s| ≤ ε₀/2`.
///
/// `rule` is the periodic rule for the full contour velocity; `chart_nodes`
/// midpoint cells are used on `(−ε₀, ε₀)`.
pub fn sqg_branch_velocity(
    x: &ClosedContour,
    ball: &Ball,
    rule: &QuadRule,
    chart_nodes: usize,
) -> Result<BranchVelocity> {
    let eps0 = ball.eps0;
    if !(eps0 > 0.0 && eps0 < std::f64::consts::PI) {
        return Err(Error::InvalidField {
            field: "eps0".into(),
            reason: format!("must lie in (0, pi), got {eps0}"),
        });
    }
    let charts = extract_charts(x, ball)?;
    let samples = ContourSamples::new(x)?;
    let local = QuadRule::real_line(eps0, chart_nodes)?;
    let h = samples.h();

    let full_at = |j: usize| -> Result<f64> {
        rule.integrate(|b| sqg_contour_integrand_node(&samples, j, b, &Stencil::for_offset(b, h)))
            .map(|v| v.y)
    };

    let branch = |own: &Chart, other: &Chart, sign: f64| -> Result<Vec<ChartVelocity>> {
        own.targets(0.5 * eps0)
            .map(|k| {
                let (s0, y0, dy0) = (own.s[k], own.y[k], own.dy[k]);
                let near = local.integrate(|b| {
                    let (y, dy) = own.eval(s0 - b)?;
                    Ok(sigma(dy0, y0, b, y, dy))
                })?;
                let cross = local.integrate(|b| {
                    let (y, dy) = other.eval(s0 - b)?;
                    Ok(sigma(dy0, y0, b, y, dy))
                })?;
                // the cross term enters with opposite orientation
                let (near, cross) = (sign * near, -sign * cross);
                let full = full_at(own.nodes[k])?;
                Ok(ChartVelocity {
                    node: own.nodes[k],
                    s: s0,
                    near,
                    cross,
                    remainder: full - near - cross,
                    full,
                })
            })
            .collect()
    };

    let upper = branch(&charts.upper, &charts.lower, 1.0)?;
    let lower = branch(&charts.lower, &charts.upper, -1.0)?;
    let sup_x2 = x.sup_second_derivative()?;
    let chord_arc = charts.chord_arc(x, eps0)?;
    let bound = sup_x2 / chord_arc * (2.0 * std::f64::consts::PI - 2.0 * eps0);
    Ok(BranchVelocity {
        upper,
        lower,
        sup_x2,
        chord_arc,
        bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dumbbell(n: usize, d: f64) -> ClosedContour {
        let (a, b, w) = (2.0, 1.0, 0.5);
        ClosedContour::from_fn(n, |t| {
            let x1 = a * t.cos();
            let pinch = (-(x1 * x1) / (w * w)).exp();
            Vec2::new(x1, t.sin() * (b - (b - 0.5 * d) * pinch))
        })
        .unwrap()
    }

    const BALL: Ball = Ball {
        center: Vec2::ZERO,
        eps0: 0.4,
    };

    #[test]
    fn charts_of_a_dumbbell() {
        let c = extract_charts(&dumbbell(512, 0.1), &BALL).unwrap();
        let (f0, df0) = c.upper.eval(0.0).unwrap();
        let (g0, _) = c.lower.eval(0.0).unwrap();
        assert!((f0 - 0.05).abs() < 1e-8 && (g0 + 0.05).abs() < 1e-8);
        assert!(df0.abs() < 1e-8);
        let (gap, at) = c.gap(0.4).unwrap();
        assert!((gap - 0.1).abs() < 1e-8);
        // the neck of the upper branch sits at parameter π/2
        assert_eq!(at, 3 * 512 / 4);
    }

    #[test]
    fn circle_has_no_two_branch_chart() {
        let c = ClosedContour::circle(256, 1.0, Vec2::ZERO).unwrap();
        assert!(matches!(extract_charts(&c, &BALL), Err(Error::Chart(_))));
    }

    #[test]
    fn decomposition_is_consistent_and_bounded() {
        let x = dumbbell(256, 0.1);
        let v = sqg_branch_velocity(&x, &BALL, &QuadRule::periodic(1024).unwrap(), 256).unwrap();
        assert!(!v.upper.is_empty() && v.upper.len() == v.lower.len());
        assert!(v.max_chart_mismatch() <= 1e-12);
        assert!(v.bound_holds(), "{} > {}", v.max_remainder(), v.bound);
    }

    #[test]
    fn mirror_branches_move_oppositely_at_the_symmetry_point() {
        let x = dumbbell(256, 0.1);
        let v = sqg_branch_velocity(&x, &BALL, &QuadRule::periodic(1024).unwrap(), 256).unwrap();
        let up = v.upper.iter().find(|c| c.s.abs() < 1e-12).unwrap();
        let lo = v.lower.iter().find(|c| c.s.abs() < 1e-12).unwrap();
        assert!((up.chart_value() + lo.chart_value()).abs() < 1e-9);
    }
}
