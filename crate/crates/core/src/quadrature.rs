//! Symmetric midpoint quadrature for principal-value integrals, and the
//! three-region split of the minimum-separation rate.
//!
//! Nodes sit at `β_k = ±(k + ½)Δ`, so `β = 0` is never evaluated and the two
//! members of each pair are summed before being accumulated. An exactly odd
//! integrand therefore integrates to exactly zero.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::geometry::{PhasePair, Sampled, Stencil, Vec2};
use crate::kernels::muskat_pair_node;

/// Values that can be accumulated by the quadrature rules.
pub trait QuadValue: Copy {
    fn zero() -> Self;
    fn add(self, other: Self) -> Self;
    fn scale(self, s: f64) -> Self;
    fn is_finite(&self) -> bool;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn scale(self, s: f64) -> Self {
        self * s
    }
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
}

impl QuadValue for Vec2 {
    fn zero() -> Self {
        Vec2::ZERO
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn scale(self, s: f64) -> Self {
        self * s
    }
    fn is_finite(&self) -> bool {
        Vec2::is_finite(*self)
    }
}

/// Midpoint rule on `[−L, L]` with `n` (even) cells.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadRule {
    pub half_width: f64,
    pub n: usize,
}

impl QuadRule {
    pub fn periodic(n: usize) -> Result<Self> {
        Self::real_line(PI, n)
    }

    pub fn real_line(half_width: f64, n: usize) -> Result<Self> {
        if n < 2 || n % 2 != 0 {
            return Err(Error::InvalidField {
                field: "quad_nodes".into(),
                reason: format!("must be even and at least 2, got {n}"),
            });
        }
        if !(half_width > 0.0 && half_width.is_finite()) {
            return Err(Error::InvalidField {
                field: "quad_half_width".into(),
                reason: format!("must be positive, got {half_width}"),
            });
        }
        Ok(QuadRule { half_width, n })
    }

    pub fn weight(&self) -> f64 {
        2.0 * self.half_width / self.n as f64
    }

    /// The positive nodes `(k + ½)Δ`, `k = 0 … n/2 − 1`.
    pub fn positive_nodes(&self) -> impl Iterator<Item = f64> + '_ {
        let d = self.weight();
        (0..self.n / 2).map(move |k| (k as f64 + 0.5) * d)
    }

    pub fn integrate<T: QuadValue>(&self, mut f: impl FnMut(f64) -> Result<T>) -> Result<T> {
        let mut acc = T::zero();
        for beta in self.positive_nodes() {
            let a = checked(beta, f(beta)?)?;
            let b = checked(-beta, f(-beta)?)?;
            acc = acc.add(a.add(b));
        }
        Ok(acc.scale(self.weight()))
    }
}

fn checked<T: QuadValue>(beta: f64, v: T) -> Result<T> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite { beta })
    }
}

/// Principal-value integral over `[−π, π)` with `n` midpoint nodes.
pub fn pv_integrate_periodic<T: QuadValue>(n: usize, f: impl FnMut(f64) -> Result<T>) -> Result<T> {
    QuadRule::periodic(n)?.integrate(f)
}

/// Midpoint integral over `[−L, L] ∖ {0}`. For integrands decaying like `|β|⁻²`
/// the neglected tail is `O(1/L)`.
pub fn integrate_realline<T: QuadValue>(
    half_width: f64,
    n: usize,
    f: impl FnMut(f64) -> Result<T>,
) -> Result<T> {
    QuadRule::real_line(half_width, n)?.integrate(f)
}

/// The rate `f_t(α_t) − g_t(α_t)` split over `|β| < S`, `S ≤ |β| < 1` and `|β| ≥ 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitTerms {
    pub near: f64,
    pub middle: f64,
    pub far: f64,
    /// The same rate from a single unsplit sum.
    pub unsplit: f64,
    pub s: f64,
    /// `|I| / S`
    pub c_near: f64,
    /// `|II| / (S·|ln S|)`
    pub c_middle: f64,
    /// `|III| / S`
    pub c_far: f64,
}

impl SplitTerms {
    pub fn total(&self) -> f64 {
        self.near + self.middle + self.far
    }

    pub fn relative_mismatch(&self) -> f64 {
        let scale = self.unsplit.abs().max(self.near.abs() + self.middle.abs() + self.far.abs());
        if scale == 0.0 {
            0.0
        } else {
            (self.total() - self.unsplit).abs() / scale
        }
    }
}

/// Splits the Muskat separation rate at node `index` (the argmin of `f − g`).
pub fn split_terms(pair: &PhasePair, s: f64, index: usize, rule: &QuadRule) -> Result<SplitTerms> {
    if !(s > 0.0 && s < 1.0) {
        return Err(Error::SplitUndefined(s));
    }
    if rule.half_width <= 1.0 {
        return Err(Error::Config(format!(
            "quadrature half-width {} must exceed 1 for the region split",
            rule.half_width
        )));
    }
    let f = Sampled::from_graph(&pair.f)?;
    let g = Sampled::from_graph(&pair.g)?;
    let (z21, z32) = (pair.densities.zeta21(), pair.densities.zeta32());
    let h = f.h;
    let rate = |beta: f64| -> Result<f64> {
        let st = Stencil::for_offset(beta, h);
        let [ff, fg, gg, gf] = muskat_pair_node(&f, &g, index, beta, &st)?;
        Ok((z21 * ff + z32 * fg) - (z32 * gg + z21 * gf))
    };

    let mut parts = [0.0f64; 3];
    for beta in rule.positive_nodes() {
        let pair_sum = checked(beta, rate(beta)?)? + checked(-beta, rate(-beta)?)?;
        let region = if beta < s {
            0
        } else if beta < 1.0 {
            1
        } else {
            2
        };
        parts[region] += pair_sum;
    }
    let w = rule.weight();
    let [near, middle, far] = parts.map(|p| p * w);
    let unsplit = rule.integrate(rate)?;
    let log = s.ln().abs();
    Ok(SplitTerms {
        near,
        middle,
        far,
        unsplit,
        s,
        c_near: near.abs() / s,
        c_middle: middle.abs() / (s * log),
        c_far: far.abs() / s,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{ClosedContour, Densities, GraphInterface, PairMode};
    use crate::kernels::{sqg_contour_integrand, ContourSamples};
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn odd_integrands_vanish_exactly() {
        let v = pv_integrate_periodic(64, |b: f64| Ok(b.powi(3) - 2.0 * b.sin())).unwrap();
        assert_eq!(v, 0.0);
        let v = integrate_realline(5.0, 100, |b: f64| Ok(b / (1.0 + b * b))).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn constants_integrate_to_length() {
        let v = pv_integrate_periodic(128, |_| Ok(1.5)).unwrap();
        assert_abs_diff_eq!(v, 3.0 * PI, epsilon = 1e-13);
    }

    #[test]
    fn gaussian_and_lorentzian() {
        let v = integrate_realline(8.0, 4096, |b: f64| Ok((-b * b).exp())).unwrap();
        assert_abs_diff_eq!(v, PI.sqrt(), epsilon = 1e-8);
        let l = 100.0;
        let v = integrate_realline(l, 20000, |b: f64| Ok(1.0 / (1.0 + b * b))).unwrap();
        // closed form 2·atan(L), within the documented tail bound of π
        assert_abs_diff_eq!(v, 2.0 * l.atan(), epsilon = 1e-6);
        assert!((v - PI).abs() <= 2.0 / l + 1e-6);
    }

    #[test]
    fn unit_circle_sqg_integral() {
        let c = ClosedContour::circle(512, 1.0, Vec2::ZERO).unwrap();
        let s = ContourSamples::new(&c).unwrap();
        let v = pv_integrate_periodic(2048, |b| sqg_contour_integrand(&s, 0.0, b)).unwrap();
        assert_abs_diff_eq!(v.x, 0.0, epsilon = 1e-3);
        assert_abs_diff_eq!(v.y, 4.0, epsilon = 1e-3);
    }

    #[test]
    fn errors() {
        assert!(pv_integrate_periodic(7, |_| Ok(1.0)).is_err());
        let e = pv_integrate_periodic(8, |b: f64| Ok(if b > 2.0 { f64::NAN } else { 1.0 }));
        assert!(matches!(e, Err(Error::NonFinite { beta }) if beta > 2.0));
    }

    fn bump_pair(n: usize) -> PhasePair {
        let f = GraphInterface::real_line_from_fn(n, 8.0, Some(1.0), |a| {
            1.0 + 0.1 * (-a * a).exp()
        })
        .unwrap();
        let g = GraphInterface::real_line_from_fn(n, 8.0, Some(-1.0), |_| -1.0).unwrap();
        PhasePair::new(f, g, Densities::new(0.0, 1.0, 2.0), PairMode::Muskat).unwrap()
    }

    #[test]
    fn flat_pair_splits_to_zero() {
        let f = GraphInterface::real_line_from_fn(64, 8.0, Some(1.0), |_| 1.0).unwrap();
        let g = GraphInterface::real_line_from_fn(64, 8.0, Some(0.5), |_| 0.5).unwrap();
        let p = PhasePair::new(f, g, Densities::new(0.0, 1.0, 2.0), PairMode::Muskat).unwrap();
        let t = split_terms(&p, 0.5, 20, &QuadRule::real_line(8.0, 256).unwrap()).unwrap();
        assert_eq!((t.near, t.middle, t.far), (0.0, 0.0, 0.0));
    }

    #[test]
    fn split_sum_identity_and_bounds() {
        let p = bump_pair(256);
        let rule = QuadRule::real_line(8.0, 1024).unwrap();
        // S = 2 over the whole line; use the node at α = 0 with a nominal S
        let t = split_terms(&p, 0.3, 128, &rule).unwrap();
        assert!(t.relative_mismatch() < 1e-8, "{t:?}");
        assert!(t.c_near.is_finite() && t.c_middle.is_finite() && t.c_far.is_finite());
        assert!(matches!(
            split_terms(&p, 1.0, 128, &rule),
            Err(Error::SplitUndefined(_))
        ));
    }

    #[test]
    fn midpoint_converges_at_second_order() {
        let c = ClosedContour::circle(1024, 1.0, Vec2::ZERO).unwrap();
        let s = ContourSamples::new(&c).unwrap();
        let q = |n| pv_integrate_periodic(n, |b| sqg_contour_integrand(&s, 0.3, b)).unwrap();
        let (a, b, c) = (q(256), q(512), q(1024));
        let order = ((a - b).norm() / (b - c).norm()).log2();
        assert!(order >= 1.9, "{order}");
    }

    proptest! {
        #[test]
        fn exact_odd_symmetry_gives_bitwise_zero(c1 in -5.0f64..5.0, c3 in -2.0f64..2.0, half in 1usize..200) {
            let v = pv_integrate_periodic(2 * half, |b: f64| Ok(c1 * b + c3 * b * b * b)).unwrap();
            prop_assert_eq!(v, 0.0);
        }
    }
}
