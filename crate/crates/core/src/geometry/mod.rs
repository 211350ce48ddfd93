//! Interfaces, closed contours and the geometric diagnostics computed on them.

pub mod fd;
pub mod sample;

use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use fd::Boundary;
pub use sample::{Sampled, Stencil};

/// Smallest node count accepted for an interface or contour.
pub const MIN_NODES: usize = 16;
pub const DEFAULT_DECAY_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dot(self, o: Vec2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: Vec2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    fn mul(self, s: f64) -> Vec2 {
        Vec2::new(self.x * s, self.y * s)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    /// Nodes `α_j = −π + j·2π/N`.
    Periodic,
    /// Nodes `α_j = −A + j·2A/N` on the truncated line `[−A, A)`.
    RealLine { half_width: f64 },
}

/// A graph `x₂ = f(x₁)` sampled on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphInterface {
    domain: Domain,
    h: f64,
    values: Vec<f64>,
    far_field: Option<f64>,
}

fn check_samples(values: &[f64]) -> Result<()> {
    if values.len() < MIN_NODES {
        return Err(Error::InsufficientResolution {
            needed: MIN_NODES,
            got: values.len(),
        });
    }
    if let Some(j) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::Config(format!("non-finite sample at node {j}")));
    }
    Ok(())
}

impl GraphInterface {
    pub fn periodic(values: Vec<f64>) -> Result<Self> {
        check_samples(&values)?;
        let h = 2.0 * PI / values.len() as f64;
        Ok(GraphInterface {
            domain: Domain::Periodic,
            h,
            values,
            far_field: None,
        })
    }

    /// Truncated real-line interface. With a far-field limit, the two outermost
    /// nodes must lie within `decay_tol` of it.
    pub fn real_line(
        half_width: f64,
        values: Vec<f64>,
        far_field: Option<f64>,
        decay_tol: f64,
    ) -> Result<Self> {
        check_samples(&values)?;
        if !(half_width > 0.0 && half_width.is_finite()) {
            return Err(Error::InvalidField {
                field: "half_width".into(),
                reason: "must be positive".into(),
            });
        }
        if let Some(far) = far_field {
            let n = values.len();
            for j in [0, n - 1] {
                if (values[j] - far).abs() > decay_tol {
                    return Err(Error::Config(format!(
                        "interface has not decayed to its far-field value {far} at node {j} (value {})",
                        values[j]
                    )));
                }
            }
        }
        let h = 2.0 * half_width / values.len() as f64;
        Ok(GraphInterface {
            domain: Domain::RealLine { half_width },
            h,
            values,
            far_field,
        })
    }

    pub fn periodic_from_fn(n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        let h = 2.0 * PI / n as f64;
        Self::periodic((0..n).map(|j| f(-PI + j as f64 * h)).collect())
    }

    pub fn real_line_from_fn(
        n: usize,
        half_width: f64,
        far_field: Option<f64>,
        f: impl Fn(f64) -> f64,
    ) -> Result<Self> {
        let h = 2.0 * half_width / n as f64;
        let values = (0..n).map(|j| f(-half_width + j as f64 * h)).collect();
        Self::real_line(half_width, values, far_field, DEFAULT_DECAY_TOL)
    }

    /// Same grid, new samples. The far-field decay check is not repeated.
    pub fn with_values(&self, values: Vec<f64>) -> Result<Self> {
        if values.len() != self.values.len() {
            return Err(Error::Config("sample count changed".into()));
        }
        check_samples(&values)?;
        Ok(GraphInterface {
            values,
            ..self.clone()
        })
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn far_field(&self) -> Option<f64> {
        self.far_field
    }

    pub fn origin(&self) -> f64 {
        match self.domain {
            Domain::Periodic => -PI,
            Domain::RealLine { half_width } => -half_width,
        }
    }

    pub fn node(&self, j: usize) -> f64 {
        self.origin() + j as f64 * self.h
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.len()).map(|j| self.node(j)).collect()
    }

    pub fn same_grid(&self, other: &GraphInterface) -> bool {
        self.domain == other.domain && self.values.len() == other.values.len()
    }

    fn boundary(&self) -> Boundary {
        match self.domain {
            Domain::Periodic => Boundary::Periodic,
            Domain::RealLine { .. } => Boundary::OneSided,
        }
    }

    pub fn first_derivative(&self) -> Result<Vec<f64>> {
        fd::first_derivative(&self.values, self.h, self.boundary())
    }

    pub fn second_derivative(&self) -> Result<Vec<f64>> {
        fd::second_derivative(&self.values, self.h, self.boundary())
    }
}

/// A closed curve sampled at `α_j = −π + j·2π/N`, counterclockwise.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosedContour {
    x1: Vec<f64>,
    x2: Vec<f64>,
    h: f64,
}

impl ClosedContour {
    pub fn new(x1: Vec<f64>, x2: Vec<f64>) -> Result<Self> {
        if x1.len() != x2.len() {
            return Err(Error::Config("contour coordinate arrays differ in length".into()));
        }
        check_samples(&x1)?;
        check_samples(&x2)?;
        let h = 2.0 * PI / x1.len() as f64;
        let c = ClosedContour { x1, x2, h };
        c.check_simple()?;
        if c.signed_area() <= 0.0 {
            return Err(Error::Config("contour must be counterclockwise".into()));
        }
        Ok(c)
    }

    pub fn from_fn(n: usize, x: impl Fn(f64) -> Vec2) -> Result<Self> {
        let h = 2.0 * PI / n as f64;
        let (x1, x2) = (0..n).map(|j| x(-PI + j as f64 * h)).map(|p| (p.x, p.y)).unzip();
        Self::new(x1, x2)
    }

    pub fn circle(n: usize, radius: f64, center: Vec2) -> Result<Self> {
        Self::from_fn(n, |a| center + Vec2::new(a.cos(), a.sin()) * radius)
    }

    pub fn ellipse(n: usize, a: f64, b: f64) -> Result<Self> {
        Self::from_fn(n, |t| Vec2::new(a * t.cos(), b * t.sin()))
    }

    pub fn len(&self) -> usize {
        self.x1.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x1.is_empty()
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn x1(&self) -> &[f64] {
        &self.x1
    }

    pub fn x2(&self) -> &[f64] {
        &self.x2
    }

    pub fn point(&self, j: usize) -> Vec2 {
        Vec2::new(self.x1[j], self.x2[j])
    }

    pub fn param(&self, j: usize) -> f64 {
        -PI + j as f64 * self.h
    }

    /// Shortest periodic parameter distance between nodes `i` and `j`.
    pub fn param_distance(&self, i: usize, j: usize) -> f64 {
        let n = self.len();
        let d = i.abs_diff(j) % n;
        d.min(n - d) as f64 * self.h
    }

    pub fn signed_area(&self) -> f64 {
        let n = self.len();
        let mut a = 0.0;
        for i in 0..n {
            let k = (i + 1) % n;
            a += self.x1[i] * self.x2[k] - self.x1[k] * self.x2[i];
        }
        0.5 * a
    }

    pub fn transformed(&self, f: impl Fn(Vec2) -> Vec2) -> Result<Self> {
        let (x1, x2) = (0..self.len()).map(|j| f(self.point(j))).map(|p| (p.x, p.y)).unzip();
        Self::new(x1, x2)
    }

    fn check_simple(&self) -> Result<()> {
        let n = self.len();
        for i in 0..n {
            let pi = self.point(i);
            for j in i + 2..n {
                if i == 0 && j == n - 1 {
                    continue;
                }
                let d = (pi - self.point(j)).norm();
                if d <= 0.0 {
                    return Err(Error::SelfIntersection {
                        chord: d,
                        beta: self.param_distance(i, j),
                    });
                }
            }
        }
        Ok(())
    }

    /// Tangents `x′` and second derivatives `x″` by periodic finite differences.
    pub fn derivatives(&self) -> Result<(Vec<Vec2>, Vec<Vec2>)> {
        let d1x = fd::first_derivative(&self.x1, self.h, Boundary::Periodic)?;
        let d1y = fd::first_derivative(&self.x2, self.h, Boundary::Periodic)?;
        let d2x = fd::second_derivative(&self.x1, self.h, Boundary::Periodic)?;
        let d2y = fd::second_derivative(&self.x2, self.h, Boundary::Periodic)?;
        let t = d1x.iter().zip(&d1y).map(|(&a, &b)| Vec2::new(a, b)).collect();
        let c = d2x.iter().zip(&d2y).map(|(&a, &b)| Vec2::new(a, b)).collect();
        Ok((t, c))
    }

    pub fn sup_second_derivative(&self) -> Result<f64> {
        let (_, xpp) = self.derivatives()?;
        Ok(xpp.iter().map(|v| v.norm()).fold(0.0, f64::max))
    }
}

/// Densities of the upper, middle and lower fluid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Densities {
    pub zeta1: f64,
    pub zeta2: f64,
    pub zeta3: f64,
}

impl Densities {
    pub fn new(zeta1: f64, zeta2: f64, zeta3: f64) -> Self {
        Densities { zeta1, zeta2, zeta3 }
    }

    /// `ζ²¹ = (ζ² − ζ¹)/2π`
    pub fn zeta21(&self) -> f64 {
        (self.zeta2 - self.zeta1) / (2.0 * PI)
    }

    /// `ζ³² = (ζ³ − ζ²)/2π`
    pub fn zeta32(&self) -> f64 {
        (self.zeta3 - self.zeta2) / (2.0 * PI)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairMode {
    /// Porous-media interfaces; requires `ζ¹ < ζ² < ζ³`.
    Muskat,
    /// SQG fronts; any densities.
    Sqg,
}

/// Two interfaces `f > g` on a shared grid with the three densities.
#[derive(Debug, Clone, PartialEq)]
pub struct PhasePair {
    pub f: GraphInterface,
    pub g: GraphInterface,
    pub densities: Densities,
    pub mode: PairMode,
}

impl PhasePair {
    pub fn new(
        f: GraphInterface,
        g: GraphInterface,
        densities: Densities,
        mode: PairMode,
    ) -> Result<Self> {
        if !f.same_grid(&g) {
            return Err(Error::Config("interfaces are not on the same grid".into()));
        }
        if let Some(j) = f.values().iter().zip(g.values()).position(|(a, b)| a <= b) {
            return Err(Error::PhaseOverlap {
                index: j,
                f: f.values()[j],
                g: g.values()[j],
            });
        }
        let d = densities;
        if mode == PairMode::Muskat && !(d.zeta1 < d.zeta2 && d.zeta2 < d.zeta3) {
            return Err(Error::Config(format!(
                "Muskat densities must satisfy zeta1 < zeta2 < zeta3 (got {}, {}, {})",
                d.zeta1, d.zeta2, d.zeta3
            )));
        }
        Ok(PhasePair {
            f,
            g,
            densities,
            mode,
        })
    }

    /// New samples on the same grid; only the ordering `f > g` is rechecked.
    pub fn with_values(&self, f: Vec<f64>, g: Vec<f64>) -> Result<Self> {
        let f = self.f.with_values(f)?;
        let g = self.g.with_values(g)?;
        if let Some(j) = f.values().iter().zip(g.values()).position(|(a, b)| a <= b) {
            return Err(Error::PhaseOverlap {
                index: j,
                f: f.values()[j],
                g: g.values()[j],
            });
        }
        Ok(PhasePair {
            f,
            g,
            densities: self.densities,
            mode: self.mode,
        })
    }

    /// `min{f∞ − g∞, 1}`, or 1 without far-field limits.
    pub fn separation_scale(&self) -> f64 {
        match (self.f.far_field(), self.g.far_field()) {
            (Some(a), Some(b)) => (a - b).min(1.0),
            _ => 1.0,
        }
    }
}

/// Minimum vertical gap between two graphs and the node attaining it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Separation {
    pub s: f64,
    pub alpha_min: f64,
    pub index: usize,
}

/// `S = min_j (f_j − g_j)`; ties go to the smallest `α_j`.
///
/// On a truncated real line the minimum value must also be attained inside
/// `[−W, W]` with the default `W = A/2`.
pub fn min_separation(f: &GraphInterface, g: &GraphInterface) -> Result<Separation> {
    let window = match f.domain() {
        Domain::Periodic => None,
        Domain::RealLine { half_width } => Some(0.5 * half_width),
    };
    min_separation_windowed(f, g, window)
}

pub fn min_separation_windowed(
    f: &GraphInterface,
    g: &GraphInterface,
    window: Option<f64>,
) -> Result<Separation> {
    if !f.same_grid(g) {
        return Err(Error::Config("interfaces are not on the same grid".into()));
    }
    let mut best = Separation {
        s: f64::INFINITY,
        alpha_min: f.node(0),
        index: 0,
    };
    for (j, (&fv, &gv)) in f.values().iter().zip(g.values()).enumerate() {
        let gap = fv - gv;
        if gap <= 0.0 {
            return Err(Error::PhaseOverlap { index: j, f: fv, g: gv });
        }
        if gap < best.s {
            best = Separation {
                s: gap,
                alpha_min: f.node(j),
                index: j,
            };
        }
    }
    if let Some(w) = window {
        let attained = f
            .values()
            .iter()
            .zip(g.values())
            .enumerate()
            .any(|(j, (&fv, &gv))| f.node(j).abs() <= w && fv - gv == best.s);
        if !attained {
            return Err(Error::MinimumOutsideWindow { value: best.s, window: w });
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupNorms {
    pub value: f64,
    pub first: f64,
    pub second: f64,
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// `(‖f‖∞, ‖f′‖∞, ‖f″‖∞)` over the samples, derivatives by fourth-order differences.
pub fn sup_norms(iface: &GraphInterface) -> Result<SupNorms> {
    Ok(SupNorms {
        value: max_abs(iface.values()),
        first: max_abs(&iface.first_derivative()?),
        second: max_abs(&iface.second_derivative()?),
    })
}

/// Largest graph curvature `|f″| / (1 + f′²)^{3/2}`.
pub fn graph_curvature_max(iface: &GraphInterface) -> Result<f64> {
    let d1 = iface.first_derivative()?;
    let d2 = iface.second_derivative()?;
    Ok(d1
        .iter()
        .zip(&d2)
        .map(|(a, b)| b.abs() / (1.0 + a * a).powf(1.5))
        .fold(0.0, f64::max))
}

/// `min |x(α) − x(α − β)| / |β|` over all nodes `α` and node offsets with `|β| > excluded`.
pub fn chord_arc_constant(x: &ClosedContour, excluded: f64) -> Result<f64> {
    let targets: Vec<usize> = (0..x.len()).collect();
    chord_arc_restricted(x, &targets, |i, j| x.param_distance(i, j) <= excluded)
}

/// Chord-arc ratio over the given target nodes, skipping pairs for which `skip` holds.
pub fn chord_arc_restricted(
    x: &ClosedContour,
    targets: &[usize],
    skip: impl Fn(usize, usize) -> bool,
) -> Result<f64> {
    let mut best = f64::INFINITY;
    let mut at_beta = 0.0;
    for &i in targets {
        let pi = x.point(i);
        for j in 0..x.len() {
            if j == i || skip(i, j) {
                continue;
            }
            let beta = x.param_distance(i, j);
            let ratio = (pi - x.point(j)).norm() / beta;
            if ratio < best {
                best = ratio;
                at_beta = beta;
            }
        }
    }
    if best <= 0.0 {
        return Err(Error::SelfIntersection {
            chord: 0.0,
            beta: at_beta,
        });
    }
    Ok(best)
}

/// Chord-arc constant of a graph viewed as the curve `(α, f(α))`.
pub fn graph_chord_arc(iface: &GraphInterface) -> f64 {
    let v = iface.values();
    let n = v.len();
    let mut best = f64::INFINITY;
    for i in 0..n {
        for j in i + 1..n {
            let beta = match iface.domain() {
                Domain::Periodic => {
                    let d = j - i;
                    d.min(n - d) as f64 * iface.h()
                }
                Domain::RealLine { .. } => (j - i) as f64 * iface.h(),
            };
            let slope = (v[i] - v[j]) / beta;
            best = best.min((1.0 + slope * slope).sqrt());
        }
    }
    best
}

/// Unsigned curvature `|x′ ∧ x″| / |x′|³` at every node.
pub fn curvature(x: &ClosedContour) -> Result<Vec<f64>> {
    let (xp, xpp) = x.derivatives()?;
    xp.iter()
        .zip(&xpp)
        .enumerate()
        .map(|(j, (&t, &c))| {
            let speed = t.norm();
            if speed <= f64::EPSILON {
                return Err(Error::DegenerateParametrization { index: j });
            }
            Ok(t.cross(c).abs() / (speed * speed * speed))
        })
        .collect()
}

/// Snapshot of the monitored quantities at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diagnostics {
    pub s: f64,
    pub alpha_min: f64,
    pub sup_f: f64,
    pub sup_g: f64,
    pub sup_f2: f64,
    pub sup_g2: f64,
    pub curvature_max: f64,
    pub chord_arc: f64,
    pub monitor_c: f64,
    /// `O(1/L)` magnitude of the truncated quadrature tail (zero for periodic domains).
    pub quadrature_tail: f64,
}
