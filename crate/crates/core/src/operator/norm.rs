use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::matrix::{build_band, OperatorMatrix};
use super::KernelId;
use crate::error::{Error, Result};
use crate::measure::DiscreteMeasure;

const SEED: u64 = 0x5eed_cafe;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormOptions {
    /// Relative change of successive Rayleigh quotients that stops the iteration.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for NormOptions {
    fn default() -> Self {
        NormOptions {
            tol: 1e-10,
            max_iter: 10_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormEstimate {
    pub value: f64,
    pub iterations: usize,
    /// False when `max_iter` was reached first; `value` is the last estimate.
    pub converged: bool,
}

impl NormEstimate {
    fn exact_zero() -> Self {
        NormEstimate {
            value: 0.0,
            iterations: 0,
            converged: true,
        }
    }
}

fn norm2(v: &[Complex64]) -> f64 {
    v.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt()
}

/// Unit start vector: all ones with a fixed pseudo-random perturbation, so it
/// is not trapped in a symmetry-invariant subspace.
fn start_vector(n: usize) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut v: Vec<Complex64> = (0..n)
        .map(|_| {
            let re = 1.0 + rng.gen_range(-0.5..0.5);
            let im = rng.gen_range(-0.5..0.5);
            Complex64::new(re, im)
        })
        .collect();
    let s = norm2(&v);
    v.iter_mut().for_each(|x| *x /= s);
    v
}

/// `‖T‖` on `L²(μ)`: the largest singular value of `B = S K S`,
/// `S = diag(√w)`, by power iteration on `B*B`.
pub fn operator_norm(t: &OperatorMatrix, opts: &NormOptions) -> Result<NormEstimate> {
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance {}", opts.tol)));
    }
    if opts.max_iter == 0 {
        return Err(Error::InvalidParameter("max_iter must be positive".into()));
    }
    let n = t.len();
    if n == 0 || t.stored_entries() == 0 {
        return Ok(NormEstimate::exact_zero());
    }
    let nc = t.components();
    let sw: Vec<f64> = t.weights().iter().map(|w| w.sqrt()).collect();

    let mut v = start_vector(n);
    let mut lambda_prev = f64::NAN;
    for iter in 1..=opts.max_iter {
        let x: Vec<Complex64> = v.iter().zip(&sw).map(|(a, s)| a * s).collect();
        let mut y = t.kernel_mul(&x);
        for (i, s) in sw.iter().enumerate() {
            y[i * nc..(i + 1) * nc].iter_mut().for_each(|c| *c *= s);
        }
        // Rayleigh quotient of B*B at the unit vector v
        let lambda = y.iter().map(Complex64::norm_sqr).sum::<f64>();
        if lambda == 0.0 {
            return Ok(NormEstimate {
                value: 0.0,
                iterations: iter,
                converged: true,
            });
        }
        if (lambda - lambda_prev).abs() <= opts.tol * lambda {
            return Ok(NormEstimate {
                value: lambda.sqrt(),
                iterations: iter,
                converged: true,
            });
        }
        lambda_prev = lambda;
        for (i, s) in sw.iter().enumerate() {
            y[i * nc..(i + 1) * nc].iter_mut().for_each(|c| *c *= s);
        }
        let mut u = t.kernel_adjoint_mul(&y);
        u.iter_mut().zip(&sw).for_each(|(a, s)| *a *= s);
        let s = norm2(&u);
        if s == 0.0 {
            return Ok(NormEstimate {
                value: 0.0,
                iterations: iter,
                converged: true,
            });
        }
        u.iter_mut().for_each(|a| *a /= s);
        v = u;
    }
    Ok(NormEstimate {
        value: lambda_prev.sqrt(),
        iterations: opts.max_iter,
        converged: false,
    })
}

/// `‖T_{eps1} − T_{eps2}‖`; the difference only holds the pairs with
/// `eps1 < |x_i − x_j| ≤ eps2`.
pub fn truncation_gap(
    mu: &DiscreteMeasure,
    kernel: KernelId,
    eps1: f64,
    eps2: f64,
    opts: &NormOptions,
) -> Result<NormEstimate> {
    if !(eps1 >= 0.0 && eps1 <= eps2) {
        return Err(Error::InvalidRange(format!(
            "need 0 <= eps1 <= eps2, got eps1 = {eps1}, eps2 = {eps2}"
        )));
    }
    kernel.check_dim(mu.dim())?;
    if eps1 == eps2 {
        return Ok(NormEstimate::exact_zero());
    }
    operator_norm(&build_band(mu, kernel, eps1, eps2)?, opts)
}
