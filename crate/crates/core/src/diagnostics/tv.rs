use std::f64::consts::PI;

use serde::Serialize;

use super::DEFAULT_TRIPLE_BUDGET;
use crate::curvature::{check_budget, menger_c2, ordered_triples};
use crate::error::{Error, Result};
use crate::measure::{Cube, DiscreteMeasure};
use crate::operator::{indicator_image_norm, KernelId};
use crate::reduce::pairwise_sum;

/// Both sides of `‖C χ_Q‖²_{L²(μ⌊Q)} = (π²/3) ∫_Q θ² dμ + c²(μ⌊Q)/6`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TvResidual {
    pub lhs: f64,
    pub rhs: f64,
    pub density_term: f64,
    pub curvature_term: f64,
    /// `|lhs − rhs| / max(lhs, rhs)`, 0 when both vanish.
    pub relative_residual: f64,
    pub warning: Option<String>,
}

pub fn tv_identity_residual(
    mu: &DiscreteMeasure,
    q: &Cube,
    density: Option<&dyn Fn(&[f64]) -> f64>,
) -> Result<TvResidual> {
    tv_identity_residual_with(mu, q, density, DEFAULT_TRIPLE_BUDGET)
}

/// `density` is the pointwise linear density of the continuous measure `μ`
/// approximates; without it the density term is taken as 0.
pub fn tv_identity_residual_with(
    mu: &DiscreteMeasure,
    q: &Cube,
    density: Option<&dyn Fn(&[f64]) -> f64>,
    budget: u64,
) -> Result<TvResidual> {
    KernelId::Cauchy.check_dim(mu.dim())?;
    let nu = mu.restrict(q)?;
    if nu.is_empty() {
        return Err(Error::EmptyCube);
    }
    check_budget(ordered_triples(nu.len()), budget)?;
    let lhs = indicator_image_norm(&nu, q, KernelId::Cauchy)?.powi(2);
    let c2 = menger_c2(&nu)?.total;
    let (theta_sq, warning) = match density {
        Some(theta) => {
            let terms: Vec<f64> = nu
                .points()
                .zip(nu.weights())
                .map(|(p, &w)| theta(p).powi(2) * w)
                .collect();
            (pairwise_sum(&terms), None)
        }
        None => (
            0.0,
            Some("no pointwise density supplied; density term set to 0".to_string()),
        ),
    };
    let density_term = PI * PI / 3.0 * theta_sq;
    let curvature_term = c2 / 6.0;
    let rhs = density_term + curvature_term;
    let scale = lhs.max(rhs);
    let relative_residual = if scale > 0.0 {
        (lhs - rhs).abs() / scale
    } else {
        0.0
    };
    Ok(TvResidual {
        lhs,
        rhs,
        density_term,
        curvature_term,
        relative_residual,
        warning,
    })
}
