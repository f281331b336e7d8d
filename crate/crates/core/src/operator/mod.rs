//! Truncated kernel operators on `L²(μ)`.
//!
//! Kernels:
//! * `cauchy`: `1/(z−w)` (complex, planar),
//! * `riesz(n, d)`: `(z−w)/|z−w|^{n+1}` (vector valued, `ℝ^d`),
//! * `im_cauchy`: `Im(z−w)/|z−w|²` (real, planar).
//!
//! Operator matrices never contain diagonal entries: the measures being
//! approximated have no atoms, so self-interaction is excluded (the discrete
//! principal value). Truncation keeps pairs with `|z−w| > ε` strictly.

mod matrix;
mod norm;
mod probes;
mod shells;

use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};

pub use matrix::{build_band, build_truncated, OperatorMatrix};
pub use norm::{operator_norm, truncation_gap, NormEstimate, NormOptions};
pub use probes::{indicator_image_norm, pair_correlation, t1_quantities, T1Quantities};
pub use shells::{partial_sum_operator, remainder_operator, shell_operator};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelId {
    Cauchy,
    Riesz { n: u32, d: usize },
    ImCauchy,
}

impl KernelId {
    pub fn riesz(n: u32, d: usize) -> Result<Self> {
        let k = KernelId::Riesz { n, d };
        if n < 1 || n as usize > d {
            return Err(Error::KernelDimensionMismatch {
                kernel: k.to_string(),
                dim: d,
            });
        }
        Ok(k)
    }

    /// Dimension of the ambient space the kernel lives in.
    pub fn dim(&self) -> usize {
        match *self {
            KernelId::Cauchy | KernelId::ImCauchy => 2,
            KernelId::Riesz { d, .. } => d,
        }
    }

    /// Number of output components per row (1 for scalar kernels).
    pub fn components(&self) -> usize {
        match *self {
            KernelId::Cauchy | KernelId::ImCauchy => 1,
            KernelId::Riesz { d, .. } => d,
        }
    }

    pub fn check_dim(&self, dim: usize) -> Result<()> {
        let ok = match *self {
            KernelId::Riesz { n, d } => n >= 1 && n as usize <= d && d == dim,
            _ => dim == 2,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::KernelDimensionMismatch {
                kernel: self.to_string(),
                dim,
            })
        }
    }

    /// Writes `K(z, w)` into `out` (`components()` values). `z ≠ w` is the
    /// caller's responsibility.
    #[inline]
    pub(crate) fn eval_into(&self, z: &[f64], w: &[f64], out: &mut [Complex64]) {
        match *self {
            KernelId::Cauchy => {
                let dx = z[0] - w[0];
                let dy = z[1] - w[1];
                let r2 = dx * dx + dy * dy;
                out[0] = Complex64::new(dx / r2, -dy / r2);
            }
            KernelId::ImCauchy => {
                let dx = z[0] - w[0];
                let dy = z[1] - w[1];
                let r2 = dx * dx + dy * dy;
                out[0] = Complex64::new(dy / r2, 0.0);
            }
            KernelId::Riesz { n, .. } => {
                let r2: f64 = z.iter().zip(w).map(|(a, b)| (a - b) * (a - b)).sum();
                let denom = r2.sqrt().powi(n as i32 + 1);
                for (o, (a, b)) in out.iter_mut().zip(z.iter().zip(w)) {
                    *o = Complex64::new((a - b) / denom, 0.0);
                }
            }
        }
    }
}

impl fmt::Display for KernelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KernelId::Cauchy => write!(f, "cauchy"),
            KernelId::ImCauchy => write!(f, "im_cauchy"),
            KernelId::Riesz { n, d } => write!(f, "riesz({n},{d})"),
        }
    }
}

/// Value of a kernel at one pair of points.
#[derive(Debug, Clone, PartialEq)]
pub enum KernelValue {
    Complex(Complex64),
    Real(f64),
    Vector(Vec<f64>),
}

/// `K(z, w)` for `z ≠ w`.
pub fn kernel_eval(kernel: KernelId, z: &[f64], w: &[f64]) -> Result<KernelValue> {
    kernel.check_dim(z.len())?;
    kernel.check_dim(w.len())?;
    if z == w {
        return Err(Error::CoincidentPoints);
    }
    let mut out = vec![Complex64::new(0.0, 0.0); kernel.components()];
    kernel.eval_into(z, w, &mut out);
    Ok(match kernel {
        KernelId::Cauchy => KernelValue::Complex(out[0]),
        KernelId::ImCauchy => KernelValue::Real(out[0].re),
        KernelId::Riesz { .. } => KernelValue::Vector(out.iter().map(|c| c.re).collect()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cauchy_unit() {
        let v = kernel_eval(KernelId::Cauchy, &[1.0, 0.0], &[0.0, 0.0]).unwrap();
        assert_eq!(v, KernelValue::Complex(Complex64::new(1.0, 0.0)));
        // 1/i = −i
        let v = kernel_eval(KernelId::Cauchy, &[0.0, 1.0], &[0.0, 0.0]).unwrap();
        assert_eq!(v, KernelValue::Complex(Complex64::new(0.0, -1.0)));
    }

    #[test]
    fn im_cauchy_vanishes_on_real_axis() {
        let v = kernel_eval(KernelId::ImCauchy, &[0.3, 0.0], &[-2.0, 0.0]).unwrap();
        assert_eq!(v, KernelValue::Real(0.0));
    }

    #[test]
    fn riesz_by_hand() {
        let k = KernelId::riesz(1, 2).unwrap();
        let v = kernel_eval(k, &[2.0, 0.0], &[0.0, 0.0]).unwrap();
        assert_eq!(v, KernelValue::Vector(vec![0.5, 0.0]));
        let k = KernelId::riesz(2, 3).unwrap();
        let v = kernel_eval(k, &[0.0, 0.0, 2.0], &[0.0, 0.0, 0.0]).unwrap();
        assert_eq!(v, KernelValue::Vector(vec![0.0, 0.0, 0.25]));
    }

    #[test]
    fn dimension_and_coincidence_errors() {
        assert!(matches!(
            kernel_eval(KernelId::Cauchy, &[0.0; 3], &[1.0; 3]),
            Err(Error::KernelDimensionMismatch { .. })
        ));
        assert!(KernelId::riesz(3, 2).is_err());
        assert!(KernelId::riesz(0, 2).is_err());
        assert!(matches!(
            kernel_eval(KernelId::Cauchy, &[1.0, 1.0], &[1.0, 1.0]),
            Err(Error::CoincidentPoints)
        ));
    }

    #[test]
    fn cauchy_is_riesz_combination() {
        // 1/(z−w) = R₁ − i R₂ for the planar 1-Riesz kernel
        let (z, w) = ([0.3, -1.2], [2.0, 0.7]);
        let KernelValue::Complex(c) = kernel_eval(KernelId::Cauchy, &z, &w).unwrap() else {
            unreachable!()
        };
        let KernelValue::Vector(r) = kernel_eval(KernelId::riesz(1, 2).unwrap(), &z, &w).unwrap()
        else {
            unreachable!()
        };
        assert!((c.re - r[0]).abs() < 1e-15 && (c.im + r[1]).abs() < 1e-15);
    }
}
