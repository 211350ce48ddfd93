//! Velocity assembly for the three contour systems.
//!
//! Every target node runs the same symmetric pair sum as [`QuadRule::integrate`]
//! in the same order, so results do not depend on how nodes are spread over
//! worker threads.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{ClosedContour, GraphInterface, PairMode, PhasePair, Sampled, Stencil, Vec2};
use crate::kernels::{
    muskat_contour_integrand_node, muskat_pair_node, sigma_pair_node, sqg_contour_integrand_node,
    ContourSamples, CurveSampler,
};
use crate::quadrature::{QuadRule, QuadValue};

struct Offsets {
    beta: Vec<f64>,
    plus: Vec<Stencil>,
    minus: Vec<Stencil>,
}

impl Offsets {
    fn new(rule: &QuadRule, h: f64) -> Self {
        let beta: Vec<f64> = rule.positive_nodes().collect();
        let plus = beta.iter().map(|&b| Stencil::for_offset(b, h)).collect();
        let minus = beta.iter().map(|&b| Stencil::for_offset(-b, h)).collect();
        Offsets { beta, plus, minus }
    }
}

fn finite<T: QuadValue>(beta: f64, v: T) -> Result<T> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite { beta })
    }
}

/// Integrates `integrand(j, β, stencil)` over `rule` at every node `j < n`.
fn assemble<T, F>(n: usize, h: f64, rule: &QuadRule, integrand: F) -> Result<Vec<T>>
where
    T: QuadValue + Send,
    F: Fn(usize, f64, &Stencil) -> Result<T> + Sync,
{
    let offsets = Offsets::new(rule, h);
    let w = rule.weight();
    (0..n)
        .into_par_iter()
        .map(|j| {
            let mut acc = T::zero();
            for (k, &b) in offsets.beta.iter().enumerate() {
                let a = finite(b, integrand(j, b, &offsets.plus[k])?)?;
                let c = finite(-b, integrand(j, -b, &offsets.minus[k])?)?;
                acc = acc.add(a.add(c));
            }
            Ok(acc.scale(w))
        })
        .collect()
}

fn check_ordered(f: &GraphInterface, g: &GraphInterface) -> Result<()> {
    if !f.same_grid(g) {
        return Err(Error::Config("interfaces are not on the same grid".into()));
    }
    match f.values().iter().zip(g.values()).position(|(a, b)| a <= b) {
        Some(j) => Err(Error::SplashDetected(format!(
            "phases touch at node {j} (alpha = {})",
            f.node(j)
        ))),
        None => Ok(()),
    }
}

/// Multi-phase Muskat velocities for explicit jump coefficients `ζ²¹`, `ζ³²`:
///
/// `f_t = ∫ ζ²¹K(f,f) + ζ³²K(f,g) dβ`, `g_t = ∫ ζ³²K(g,g) + ζ²¹K(g,f) dβ`.
pub fn muskat_graph_velocity(
    f: &GraphInterface,
    g: &GraphInterface,
    z21: f64,
    z32: f64,
    rule: &QuadRule,
) -> Result<(Vec<f64>, Vec<f64>)> {
    check_ordered(f, g)?;
    let fs = Sampled::from_graph(f)?;
    let gs = Sampled::from_graph(g)?;
    let v = assemble(f.len(), f.h(), rule, |j, beta, st| {
        let [ff, fg, gg, gf] = muskat_pair_node(&fs, &gs, j, beta, st)?;
        Ok(Vec2::new(z21 * ff + z32 * fg, z32 * gg + z21 * gf))
    })?;
    Ok(v.into_iter().map(|p| (p.x, p.y)).unzip())
}

pub fn muskat_velocity(pair: &PhasePair, rule: &QuadRule) -> Result<(Vec<f64>, Vec<f64>)> {
    let d = pair.densities;
    muskat_graph_velocity(&pair.f, &pair.g, d.zeta21(), d.zeta32(), rule)
}

/// Single-interface Muskat velocity `x_t = ζ ∫ δ_β x₁ δ_β x′ / |δ_β x|² dβ`
/// with `ζ = (ζ² − ζ¹)/2π`.
pub fn muskat_contour_velocity<C: CurveSampler>(
    curve: &C,
    jump: f64,
    rule: &QuadRule,
) -> Result<Vec<Vec2>> {
    assemble(curve.len(), curve.h(), rule, |j, beta, st| {
        muskat_contour_integrand_node(curve, j, beta, st)
    })
    .map(|v| v.into_iter().map(|p| p * jump).collect())
}

/// SQG front velocity `x_t = ∫ δ_β x′ / |δ_β x| dβ` (density jump normalized to 2π).
pub fn sqg_contour_velocity(x: &ClosedContour, rule: &QuadRule) -> Result<Vec<Vec2>> {
    let samples = ContourSamples::new(x)?;
    sqg_curve_velocity(&samples, rule)
}

pub fn sqg_curve_velocity<C: CurveSampler>(curve: &C, rule: &QuadRule) -> Result<Vec<Vec2>> {
    assemble(curve.len(), curve.h(), rule, |j, beta, st| {
        sqg_contour_integrand_node(curve, j, beta, st).map_err(|e| match e {
            Error::SelfIntersection { .. } => Error::SplashDetected(format!(
                "contour self-intersects at node {j}, offset {beta}"
            )),
            other => other,
        })
    })
}

/// Multi-phase SQG velocities with explicit jump coefficients.
pub fn sqg_graph_velocity(
    f: &GraphInterface,
    g: &GraphInterface,
    z21: f64,
    z32: f64,
    rule: &QuadRule,
) -> Result<(Vec<f64>, Vec<f64>)> {
    check_ordered(f, g)?;
    let fs = Sampled::from_graph(f)?;
    let gs = Sampled::from_graph(g)?;
    let v = assemble(f.len(), f.h(), rule, |j, beta, st| {
        let [ff, fg, gg, gf] = sigma_pair_node(&fs, &gs, j, beta, st)?;
        Ok(Vec2::new(z21 * ff + z32 * fg, z32 * gg + z21 * gf))
    })?;
    Ok(v.into_iter().map(|p| (p.x, p.y)).unzip())
}

pub fn sqg_multiphase_velocity(
    pair: &PhasePair,
    rule: &QuadRule,
) -> Result<(Vec<f64>, Vec<f64>)> {
    if pair.mode != PairMode::Sqg {
        return Err(Error::Config("pair is not in SQG mode".into()));
    }
    let d = pair.densities;
    sqg_graph_velocity(&pair.f, &pair.g, d.zeta21(), d.zeta32(), rule)
}
