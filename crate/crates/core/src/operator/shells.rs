//! Shell decomposition around each evaluation point.
//!
//! `Q_j(z)` is the half-open cube centered at `z` with side `2^{-j} l`, where
//! `l` is the side of the base cube. Membership is decided on the offset
//! `w − z` against `±2^{-j} l / 2`, so the shells `Q_j(z) \ Q_{j+1}(z)` of one
//! row are disjoint and each off-diagonal pair lands in exactly one of them.

use super::matrix::{build_masked, OperatorMatrix};
use super::KernelId;
use crate::error::{Error, Result};
use crate::measure::{Cube, DiscreteMeasure};

const MAX_LEVEL: u32 = 1000;

fn half_side(base: &Cube, j: u32) -> Result<f64> {
    if j > MAX_LEVEL {
        return Err(Error::InvalidLevel(format!("level {j} exceeds {MAX_LEVEL}")));
    }
    let h = base.side() * 0.5f64.powi(j as i32 + 1);
    if h == 0.0 {
        return Err(Error::InvalidLevel(format!("level {j} underflows the base side")));
    }
    Ok(h)
}

/// The base must be planar and wide enough that `Q_0(z)` holds the whole
/// support for every atom `z`.
fn check_base(mu: &DiscreteMeasure, base: &Cube) -> Result<()> {
    KernelId::Cauchy.check_dim(mu.dim())?;
    if base.dim() != mu.dim() {
        return Err(Error::DimensionError {
            required: mu.dim(),
            found: base.dim(),
        });
    }
    let extent = mu.extent();
    if !(extent < base.side() / 2.0) {
        return Err(Error::InvalidParameter(format!(
            "base side {} must exceed twice the support extent {extent}",
            base.side()
        )));
    }
    Ok(())
}

fn inside(mu: &DiscreteMeasure, i: usize, j: usize, h: f64) -> bool {
    let (z, w) = (mu.point(i), mu.point(j));
    z.iter().zip(w).all(|(a, b)| {
        let d = b - a;
        -h <= d && d < h
    })
}

/// `T_j`: Cauchy interactions with `x_j ∈ Q_j(x_i) \ Q_{j+1}(x_i)`.
pub fn shell_operator(mu: &DiscreteMeasure, base: &Cube, j: u32) -> Result<OperatorMatrix> {
    check_base(mu, base)?;
    let outer = half_side(base, j)?;
    let inner = half_side(base, j + 1)?;
    build_masked(mu, KernelId::Cauchy, |a, b| {
        inside(mu, a, b, outer) && !inside(mu, a, b, inner)
    })
}

/// `Cᴺ = Σ_{j<N} T_j`, built directly from the mask `x_j ∉ Q_N(x_i)`.
pub fn partial_sum_operator(mu: &DiscreteMeasure, base: &Cube, n: u32) -> Result<OperatorMatrix> {
    check_base(mu, base)?;
    let h = half_side(base, n)?;
    let outer = half_side(base, 0)?;
    build_masked(mu, KernelId::Cauchy, |a, b| {
        inside(mu, a, b, outer) && !inside(mu, a, b, h)
    })
}

/// Full operator minus `Cᴺ`: the interactions with `x_j ∈ Q_N(x_i)`.
pub fn remainder_operator(mu: &DiscreteMeasure, base: &Cube, n: u32) -> Result<OperatorMatrix> {
    check_base(mu, base)?;
    let h = half_side(base, n)?;
    build_masked(mu, KernelId::Cauchy, |a, b| inside(mu, a, b, h))
}
