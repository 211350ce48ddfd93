//! Fourth-order finite differences on a uniform grid.
//!
//! Periodic data wraps around. Non-periodic data switches to shifted one-sided
//! stencils at the two nodes nearest each edge.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    Periodic,
    OneSided,
}

pub fn first_derivative(values: &[f64], h: f64, boundary: Boundary) -> Result<Vec<f64>> {
    let n = values.len();
    if n < 5 {
        return Err(Error::InsufficientResolution { needed: 5, got: n });
    }
    let inv = 1.0 / (12.0 * h);
    let mut out = vec![0.0; n];
    match boundary {
        Boundary::Periodic => {
            for (j, o) in out.iter_mut().enumerate() {
                let m2 = values[(j + n - 2) % n];
                let m1 = values[(j + n - 1) % n];
                let p1 = values[(j + 1) % n];
                let p2 = values[(j + 2) % n];
                *o = (8.0 * (p1 - m1) - (p2 - m2)) * inv;
            }
        }
        Boundary::OneSided => {
            for j in 2..n - 2 {
                out[j] = (8.0 * (values[j + 1] - values[j - 1]) - (values[j + 2] - values[j - 2]))
                    * inv;
            }
            let v = values;
            // stencils written as differences so that constants give exact zeros
            let fwd0 = |v: [f64; 5]| {
                48.0 * (v[1] - v[0]) - 36.0 * (v[2] - v[0]) + 16.0 * (v[3] - v[0])
                    - 3.0 * (v[4] - v[0])
            };
            let fwd1 = |v: [f64; 5]| {
                -3.0 * (v[0] - v[1]) + 18.0 * (v[2] - v[1]) - 6.0 * (v[3] - v[1]) + (v[4] - v[1])
            };
            let l = n - 1;
            let head = [v[0], v[1], v[2], v[3], v[4]];
            let tail = [v[l], v[l - 1], v[l - 2], v[l - 3], v[l - 4]];
            out[0] = fwd0(head) * inv;
            out[1] = fwd1(head) * inv;
            out[l] = -fwd0(tail) * inv;
            out[l - 1] = -fwd1(tail) * inv;
        }
    }
    Ok(out)
}

pub fn second_derivative(values: &[f64], h: f64, boundary: Boundary) -> Result<Vec<f64>> {
    let n = values.len();
    let needed = match boundary {
        Boundary::Periodic => 5,
        // the one-sided edge stencil spans six nodes
        Boundary::OneSided => 6,
    };
    if n < needed {
        return Err(Error::InsufficientResolution { needed, got: n });
    }
    let inv = 1.0 / (12.0 * h * h);
    let mut out = vec![0.0; n];
    match boundary {
        Boundary::Periodic => {
            for (j, o) in out.iter_mut().enumerate() {
                let m2 = values[(j + n - 2) % n];
                let m1 = values[(j + n - 1) % n];
                let c = values[j];
                let p1 = values[(j + 1) % n];
                let p2 = values[(j + 2) % n];
                *o = (16.0 * ((m1 - c) + (p1 - c)) - ((m2 - c) + (p2 - c))) * inv;
            }
        }
        Boundary::OneSided => {
            let v = values;
            for j in 2..n - 2 {
                let c = v[j];
                out[j] = (16.0 * ((v[j - 1] - c) + (v[j + 1] - c))
                    - ((v[j - 2] - c) + (v[j + 2] - c)))
                    * inv;
            }
            let edge0 = |v: [f64; 6]| {
                -154.0 * (v[1] - v[0]) + 214.0 * (v[2] - v[0]) - 156.0 * (v[3] - v[0])
                    + 61.0 * (v[4] - v[0])
                    - 10.0 * (v[5] - v[0])
            };
            let edge1 = |v: [f64; 6]| {
                10.0 * (v[0] - v[1]) - 4.0 * (v[2] - v[1]) + 14.0 * (v[3] - v[1])
                    - 6.0 * (v[4] - v[1])
                    + (v[5] - v[1])
            };
            let l = n - 1;
            let head = [v[0], v[1], v[2], v[3], v[4], v[5]];
            let tail = [v[l], v[l - 1], v[l - 2], v[l - 3], v[l - 4], v[l - 5]];
            out[0] = edge0(head) * inv;
            out[1] = edge1(head) * inv;
            out[l] = edge0(tail) * inv;
            out[l - 1] = edge1(tail) * inv;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize, a: f64, b: f64) -> (Vec<f64>, f64) {
        let h = (b - a) / (n - 1) as f64;
        ((0..n).map(|j| a + j as f64 * h).collect(), h)
    }

    #[test]
    fn one_sided_stencils_are_exact_on_quartics() {
        let (x, h) = grid(12, -1.0, 2.0);
        let p = |t: f64| 1.0 - 2.0 * t + 0.5 * t * t - 0.3 * t.powi(3) + 0.1 * t.powi(4);
        let dp = |t: f64| -2.0 + t - 0.9 * t * t + 0.4 * t.powi(3);
        let d2p = |t: f64| 1.0 - 1.8 * t + 1.2 * t * t;
        let v: Vec<f64> = x.iter().map(|&t| p(t)).collect();
        let d1 = first_derivative(&v, h, Boundary::OneSided).unwrap();
        let d2 = second_derivative(&v, h, Boundary::OneSided).unwrap();
        for (j, &t) in x.iter().enumerate() {
            assert!((d1[j] - dp(t)).abs() < 1e-11, "d1 at {j}");
            assert!((d2[j] - d2p(t)).abs() < 1e-9, "d2 at {j}");
        }
    }

    #[test]
    fn too_few_nodes() {
        let v = [1.0, 2.0, 3.0, 4.0];
        assert!(matches!(
            first_derivative(&v, 0.1, Boundary::Periodic),
            Err(Error::InsufficientResolution { needed: 5, got: 4 })
        ));
        let v5 = [1.0, 2.0, 3.0, 4.0, 5.0];
        assert!(second_derivative(&v5, 0.1, Boundary::Periodic).is_ok());
        assert!(second_derivative(&v5, 0.1, Boundary::OneSided).is_err());
    }
}
