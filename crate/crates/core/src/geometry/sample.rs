//! Off-grid evaluation of sampled fields by four-point Lagrange interpolation.

use super::fd::{self, Boundary};
use super::{Domain, GraphInterface};
use crate::error::Result;

/// Interpolation weights for the point `α_j − β`, expressed relative to node `j`.
///
/// The weights depend on `β / h` only, so every target node sees bitwise the same
/// stencil for a given offset.
#[derive(Debug, Clone, Copy)]
pub struct Stencil {
    shift: isize,
    weights: [f64; 4],
}

impl Stencil {
    pub fn for_offset(beta: f64, h: f64) -> Self {
        let s = beta / h;
        let k = s.floor();
        let frac = s - k;
        // α_j − β sits at index (j − k − 1) + (1 − frac)
        Self::from_parts(-(k as isize) - 1, 1.0 - frac)
    }

    /// Stencil for an absolute fractional index `pos` (with `j = 0`).
    pub fn for_position(pos: f64) -> Self {
        let b = pos.floor();
        Self::from_parts(b as isize, pos - b)
    }

    fn from_parts(shift: isize, t: f64) -> Self {
        let weights = [
            -t * (t - 1.0) * (t - 2.0) / 6.0,
            (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0,
            -(t + 1.0) * t * (t - 2.0) / 2.0,
            (t + 1.0) * t * (t - 1.0) / 6.0,
        ];
        Stencil { shift, weights }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Extension {
    Periodic,
    /// Constant extension beyond the sampled window.
    Clamped { left: f64, right: f64 },
}

/// A sampled scalar field with its first and second derivatives.
#[derive(Debug, Clone)]
pub struct Sampled {
    pub values: Vec<f64>,
    pub d1: Vec<f64>,
    pub d2: Vec<f64>,
    pub h: f64,
    pub origin: f64,
    ext: Extension,
}

impl Sampled {
    pub fn periodic(values: Vec<f64>, h: f64, origin: f64) -> Result<Self> {
        let d1 = fd::first_derivative(&values, h, Boundary::Periodic)?;
        let d2 = fd::second_derivative(&values, h, Boundary::Periodic)?;
        Ok(Sampled {
            values,
            d1,
            d2,
            h,
            origin,
            ext: Extension::Periodic,
        })
    }

    /// Non-periodic samples; outside the window the field takes `far` (or the edge
    /// values when `far` is `None`) with zero slope.
    pub fn clamped(values: Vec<f64>, h: f64, origin: f64, far: Option<f64>) -> Result<Self> {
        let d1 = fd::first_derivative(&values, h, Boundary::OneSided)?;
        let d2 = fd::second_derivative(&values, h, Boundary::OneSided)?;
        let (left, right) = match far {
            Some(v) => (v, v),
            None => (values[0], values[values.len() - 1]),
        };
        Ok(Sampled {
            values,
            d1,
            d2,
            h,
            origin,
            ext: Extension::Clamped { left, right },
        })
    }

    pub fn from_graph(iface: &GraphInterface) -> Result<Self> {
        let values = iface.values().to_vec();
        match iface.domain() {
            Domain::Periodic => Self::periodic(values, iface.h(), iface.node(0)),
            Domain::RealLine { .. } => {
                Self::clamped(values, iface.h(), iface.node(0), iface.far_field())
            }
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    #[inline]
    fn gather(&self, arr: &[f64], base: isize, far: bool) -> [f64; 4] {
        let n = arr.len() as isize;
        if base >= 0 && base + 3 < n {
            let b = base as usize;
            return [arr[b], arr[b + 1], arr[b + 2], arr[b + 3]];
        }
        let mut out = [0.0; 4];
        for (i, o) in out.iter_mut().enumerate() {
            let idx = base + i as isize;
            *o = match self.ext {
                Extension::Periodic => arr[idx.rem_euclid(n) as usize],
                Extension::Clamped { left, right } => {
                    if idx < 0 {
                        if far {
                            left
                        } else {
                            0.0
                        }
                    } else if idx >= n {
                        if far {
                            right
                        } else {
                            0.0
                        }
                    } else {
                        arr[idx as usize]
                    }
                }
            };
        }
        out
    }

    #[inline]
    fn combine(w: &[f64; 4], v: [f64; 4]) -> f64 {
        w[0] * v[0] + w[1] * v[1] + w[2] * v[2] + w[3] * v[3]
    }

    /// Value and slope at `α_j − β` for the stencil built from `β`.
    #[inline]
    pub fn eval(&self, j: usize, st: &Stencil) -> (f64, f64) {
        let base = j as isize + st.shift - 1;
        let v = Self::combine(&st.weights, self.gather(&self.values, base, true));
        let d = Self::combine(&st.weights, self.gather(&self.d1, base, false));
        (v, d)
    }

    /// Value, slope and second derivative at `α_j − β`.
    pub fn eval3(&self, j: usize, st: &Stencil) -> (f64, f64, f64) {
        let (v, d) = self.eval(j, st);
        let base = j as isize + st.shift - 1;
        let d2 = Self::combine(&st.weights, self.gather(&self.d2, base, false));
        (v, d, d2)
    }

    /// Value and slope at an arbitrary coordinate.
    pub fn eval_at(&self, alpha: f64) -> (f64, f64) {
        let st = Stencil::for_position((alpha - self.origin) / self.h);
        self.eval(0, &st)
    }

    /// Value, slope and second derivative at an arbitrary coordinate.
    pub fn eval3_at(&self, alpha: f64) -> (f64, f64, f64) {
        let st = Stencil::for_position((alpha - self.origin) / self.h);
        self.eval3(0, &st)
    }
}
