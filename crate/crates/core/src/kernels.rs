//! Pointwise integrands of the contour equations.
//!
//! Graph kernels, with `δ_β(f, g)(α) = f(α) − g(α − β)`:
//!
//! * Muskat: `K(f,g)(α,β) = β·δ_β(f′,g′)(α) / (β² + δ_β(f,g)(α)²)`
//! * multi-phase SQG: `Σ(f,g)(α,β) = δ_β(f′,g′)(α) / √(β² + δ_β(f,g)(α)²)`
//!
//! Contour integrands, with `δ_β x(α) = x(α) − x(α − β)`:
//!
//! * SQG front: `δ_β x′(α) / |δ_β x(α)|`
//! * Muskat: `δ_β x₁(α) · δ_β x′(α) / |δ_β x(α)|²`
//!
//! Every function comes in two flavors: at an arbitrary coordinate `α`, and at a
//! grid node `j` with a precomputed [`Stencil`] for the offset (used by velocity
//! assembly so that all nodes see identical interpolation weights).

use crate::error::{Error, Result};
use crate::geometry::{ClosedContour, Sampled, Stencil, Vec2};

/// Denominators below this are treated as touching phases.
pub const SINGULAR_DENOMINATOR: f64 = 1e-30;

#[inline]
fn muskat_formula(alpha: f64, beta: f64, df: f64, dfp: f64) -> Result<f64> {
    let den = beta * beta + df * df;
    if den < SINGULAR_DENOMINATOR {
        return Err(Error::SingularEvaluation { alpha, beta });
    }
    Ok(beta * dfp / den)
}

#[inline]
fn sigma_formula(alpha: f64, beta: f64, df: f64, dfp: f64) -> Result<f64> {
    let den = beta * beta + df * df;
    if den < SINGULAR_DENOMINATOR {
        return Err(Error::SingularEvaluation { alpha, beta });
    }
    Ok(dfp / den.sqrt())
}

/// β → 0 limit of `K(f,f)`: `f″/(1 + f′²)`.
#[inline]
pub fn muskat_removable_limit(slope: f64, curvature: f64) -> f64 {
    curvature / (1.0 + slope * slope)
}

/// `K(f,g)(α,β)` at an arbitrary coordinate. When `f` and `g` are the same
/// object and `|β| < h/2`, the removable limit is returned instead.
pub fn muskat_kernel(f: &Sampled, g: &Sampled, alpha: f64, beta: f64) -> Result<f64> {
    let (fa, fpa, fppa) = f.eval3_at(alpha);
    if std::ptr::eq(f, g) && beta.abs() < 0.5 * f.h {
        return Ok(muskat_removable_limit(fpa, fppa));
    }
    let (gb, gpb) = g.eval_at(alpha - beta);
    muskat_formula(alpha, beta, fa - gb, fpa - gpb)
}

/// `K(f,g)(α_j,β)`; `same` marks `K(f,f)`, which gets the removable-limit guard.
#[inline]
pub fn muskat_kernel_node(
    f: &Sampled,
    g: &Sampled,
    same: bool,
    j: usize,
    beta: f64,
    st: &Stencil,
) -> Result<f64> {
    let fpa = f.d1[j];
    if same && beta.abs() < 0.5 * f.h {
        return Ok(muskat_removable_limit(fpa, f.d2[j]));
    }
    let (gb, gpb) = g.eval(j, st);
    muskat_formula(f.origin + j as f64 * f.h, beta, f.values[j] - gb, fpa - gpb)
}

/// `[K(f,f), K(f,g), K(g,g), K(g,f)]` at `(α_j, β)`, sharing the off-grid
/// samples between the four kernels. Equal bitwise to four
/// [`muskat_kernel_node`] calls.
#[inline]
pub fn muskat_pair_node(
    f: &Sampled,
    g: &Sampled,
    j: usize,
    beta: f64,
    st: &Stencil,
) -> Result<[f64; 4]> {
    let alpha = f.origin + j as f64 * f.h;
    let (fb, fpb) = f.eval(j, st);
    let (gb, gpb) = g.eval(j, st);
    let (fa, fpa, ga, gpa) = (f.values[j], f.d1[j], g.values[j], g.d1[j]);
    let near = beta.abs() < 0.5 * f.h;
    let ff = if near {
        muskat_removable_limit(fpa, f.d2[j])
    } else {
        muskat_formula(alpha, beta, fa - fb, fpa - fpb)?
    };
    let gg = if near {
        muskat_removable_limit(gpa, g.d2[j])
    } else {
        muskat_formula(alpha, beta, ga - gb, gpa - gpb)?
    };
    Ok([
        ff,
        muskat_formula(alpha, beta, fa - gb, fpa - gpb)?,
        gg,
        muskat_formula(alpha, beta, ga - fb, gpa - fpb)?,
    ])
}

/// `[Σ(f,f), Σ(f,g), Σ(g,g), Σ(g,f)]` at `(α_j, β)` with shared samples.
#[inline]
pub fn sigma_pair_node(
    f: &Sampled,
    g: &Sampled,
    j: usize,
    beta: f64,
    st: &Stencil,
) -> Result<[f64; 4]> {
    let alpha = f.origin + j as f64 * f.h;
    let (fb, fpb) = f.eval(j, st);
    let (gb, gpb) = g.eval(j, st);
    let (fa, fpa, ga, gpa) = (f.values[j], f.d1[j], g.values[j], g.d1[j]);
    Ok([
        sigma_formula(alpha, beta, fa - fb, fpa - fpb)?,
        sigma_formula(alpha, beta, fa - gb, fpa - gpb)?,
        sigma_formula(alpha, beta, ga - gb, gpa - gpb)?,
        sigma_formula(alpha, beta, ga - fb, gpa - fpb)?,
    ])
}

/// `Σ(f,g)(α,β)` at an arbitrary coordinate.
pub fn sqg_sigma_kernel(f: &Sampled, g: &Sampled, alpha: f64, beta: f64) -> Result<f64> {
    let (fa, fpa) = f.eval_at(alpha);
    let (gb, gpb) = g.eval_at(alpha - beta);
    sigma_formula(alpha, beta, fa - gb, fpa - gpb)
}

#[inline]
pub fn sqg_sigma_kernel_node(
    f: &Sampled,
    g: &Sampled,
    j: usize,
    beta: f64,
    st: &Stencil,
) -> Result<f64> {
    let (gb, gpb) = g.eval(j, st);
    sigma_formula(
        f.origin + j as f64 * f.h,
        beta,
        f.values[j] - gb,
        f.d1[j] - gpb,
    )
}

/// Position, tangent and second derivative of a curve at one parameter value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub x: Vec2,
    pub dx: Vec2,
    pub ddx: Vec2,
}

/// A parametrized curve that can be evaluated at nodes and at node offsets.
pub trait CurveSampler: Sync {
    fn len(&self) -> usize;
    fn h(&self) -> f64;
    fn node(&self, j: usize) -> CurvePoint;
    /// Position and tangent at `α_j − β`.
    fn offset(&self, j: usize, beta: f64, st: &Stencil) -> (Vec2, Vec2);
    fn at(&self, alpha: f64) -> CurvePoint;
}

/// Interpolating sampler for a closed contour.
#[derive(Debug, Clone)]
pub struct ContourSamples {
    pub x1: Sampled,
    pub x2: Sampled,
}

impl ContourSamples {
    pub fn new(c: &ClosedContour) -> Result<Self> {
        let origin = c.param(0);
        Ok(ContourSamples {
            x1: Sampled::periodic(c.x1().to_vec(), c.h(), origin)?,
            x2: Sampled::periodic(c.x2().to_vec(), c.h(), origin)?,
        })
    }
}

impl CurveSampler for ContourSamples {
    fn len(&self) -> usize {
        self.x1.len()
    }

    fn h(&self) -> f64 {
        self.x1.h
    }

    fn node(&self, j: usize) -> CurvePoint {
        CurvePoint {
            x: Vec2::new(self.x1.values[j], self.x2.values[j]),
            dx: Vec2::new(self.x1.d1[j], self.x2.d1[j]),
            ddx: Vec2::new(self.x1.d2[j], self.x2.d2[j]),
        }
    }

    #[inline]
    fn offset(&self, j: usize, _beta: f64, st: &Stencil) -> (Vec2, Vec2) {
        let (a, da) = self.x1.eval(j, st);
        let (b, db) = self.x2.eval(j, st);
        (Vec2::new(a, b), Vec2::new(da, db))
    }

    fn at(&self, alpha: f64) -> CurvePoint {
        let (a, da, dda) = self.x1.eval3_at(alpha);
        let (b, db, ddb) = self.x2.eval3_at(alpha);
        CurvePoint {
            x: Vec2::new(a, b),
            dx: Vec2::new(da, db),
            ddx: Vec2::new(dda, ddb),
        }
    }
}

/// The graph `x(α) = (α, f(α))` seen as a curve.
#[derive(Debug, Clone)]
pub struct GraphCurve {
    pub f: Sampled,
}

impl CurveSampler for GraphCurve {
    fn len(&self) -> usize {
        self.f.len()
    }

    fn h(&self) -> f64 {
        self.f.h
    }

    fn node(&self, j: usize) -> CurvePoint {
        CurvePoint {
            x: Vec2::new(self.f.origin + j as f64 * self.f.h, self.f.values[j]),
            dx: Vec2::new(1.0, self.f.d1[j]),
            ddx: Vec2::new(0.0, self.f.d2[j]),
        }
    }

    #[inline]
    fn offset(&self, j: usize, beta: f64, st: &Stencil) -> (Vec2, Vec2) {
        let (v, d) = self.f.eval(j, st);
        let a = self.f.origin + j as f64 * self.f.h - beta;
        (Vec2::new(a, v), Vec2::new(1.0, d))
    }

    fn at(&self, alpha: f64) -> CurvePoint {
        let (v, d, dd) = self.f.eval3_at(alpha);
        CurvePoint {
            x: Vec2::new(alpha, v),
            dx: Vec2::new(1.0, d),
            ddx: Vec2::new(0.0, dd),
        }
    }
}

#[inline]
fn sqg_contour_formula(beta: f64, a: &CurvePoint, xb: Vec2, dxb: Vec2) -> Result<Vec2> {
    let chord = (a.x - xb).norm();
    if chord == 0.0 {
        return Err(Error::SelfIntersection { chord, beta });
    }
    Ok((a.dx - dxb) * (1.0 / chord))
}

#[inline]
fn muskat_contour_formula(
    beta: f64,
    h: f64,
    a: &CurvePoint,
    xb: Vec2,
    dxb: Vec2,
) -> Result<Vec2> {
    if beta.abs() < 0.5 * h {
        let speed2 = a.dx.x * a.dx.x + a.dx.y * a.dx.y;
        return Ok(a.ddx * (a.dx.x / speed2));
    }
    let d = a.x - xb;
    let chord2 = d.x * d.x + d.y * d.y;
    if chord2 == 0.0 {
        return Err(Error::SelfIntersection { chord: 0.0, beta });
    }
    let s = d.x / chord2;
    Ok(Vec2::new(s * (a.dx.x - dxb.x), s * (a.dx.y - dxb.y)))
}

/// `δ_β x′(α) / |δ_β x(α)|`.
pub fn sqg_contour_integrand<C: CurveSampler>(x: &C, alpha: f64, beta: f64) -> Result<Vec2> {
    let a = x.at(alpha);
    let b = x.at(alpha - beta);
    sqg_contour_formula(beta, &a, b.x, b.dx)
}

#[inline]
pub fn sqg_contour_integrand_node<C: CurveSampler>(
    x: &C,
    j: usize,
    beta: f64,
    st: &Stencil,
) -> Result<Vec2> {
    let a = x.node(j);
    let (xb, dxb) = x.offset(j, beta, st);
    sqg_contour_formula(beta, &a, xb, dxb)
}

/// `δ_β x₁(α)·δ_β x′(α) / |δ_β x(α)|²`, with the removable limit `x₁′ x″/|x′|²`
/// for `|β| < h/2`.
pub fn muskat_contour_integrand<C: CurveSampler>(x: &C, alpha: f64, beta: f64) -> Result<Vec2> {
    let a = x.at(alpha);
    let b = x.at(alpha - beta);
    muskat_contour_formula(beta, x.h(), &a, b.x, b.dx)
}

#[inline]
pub fn muskat_contour_integrand_node<C: CurveSampler>(
    x: &C,
    j: usize,
    beta: f64,
    st: &Stencil,
) -> Result<Vec2> {
    let a = x.node(j);
    let (xb, dxb) = x.offset(j, beta, st);
    muskat_contour_formula(beta, x.h(), &a, xb, dxb)
}
