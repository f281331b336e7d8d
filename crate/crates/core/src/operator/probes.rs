use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::KernelId;
use crate::error::{Error, Result};
use crate::measure::lattice::{occupied_cells, LatticeShift};
use crate::measure::{Cube, DiscreteMeasure};
use crate::reduce::{pairwise_sum, par_sum_indexed};

const MAX_LEVEL: u32 = 1000;
const MAX_SCAN_LEVELS: usize = 64;

/// `‖T χ‖_{L²(ν)}` with `ν = μ⌊Q`, `T` the untruncated operator of `ν`.
fn indicator_norm_of(nu: &DiscreteMeasure, kernel: KernelId) -> f64 {
    let n = nu.len();
    let nc = kernel.components();
    let sq = par_sum_indexed(n, |i| {
        let z = nu.point(i);
        let mut acc = vec![Complex64::new(0.0, 0.0); nc];
        let mut buf = acc.clone();
        for j in 0..n {
            if j != i {
                kernel.eval_into(z, nu.point(j), &mut buf);
                let w = nu.weights()[j];
                acc.iter_mut().zip(&buf).for_each(|(a, b)| *a += b * w);
            }
        }
        acc.iter().map(Complex64::norm_sqr).sum::<f64>() * nu.weights()[i]
    });
    sq.sqrt()
}

/// `‖T_{μ⌊Q} χ_Q‖_{L²(μ⌊Q)}` for the untruncated kernel.
pub fn indicator_image_norm(mu: &DiscreteMeasure, q: &Cube, kernel: KernelId) -> Result<f64> {
    kernel.check_dim(mu.dim())?;
    let nu = mu.restrict(q)?;
    if nu.is_empty() {
        return Err(Error::EmptyCube);
    }
    Ok(indicator_norm_of(&nu, kernel))
}

/// `|⟨C_μ φ_{Q′}, φ_{Q″}⟩|` with `φ_Q = χ_Q / μ(Q)^{1/2}`.
pub fn pair_correlation(mu: &DiscreteMeasure, qp: &Cube, qpp: &Cube) -> Result<f64> {
    KernelId::Cauchy.check_dim(mu.dim())?;
    if qp.overlaps(qpp) {
        return Err(Error::OverlappingCubes);
    }
    let a = mu.restrict(qp)?;
    let b = mu.restrict(qpp)?;
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyCube);
    }
    let terms: Vec<(f64, f64)> = (0..b.len())
        .into_par_iter()
        .map(|i| {
            let z = b.point(i);
            let mut re = Vec::with_capacity(a.len());
            let mut im = Vec::with_capacity(a.len());
            let mut buf = [Complex64::new(0.0, 0.0)];
            for j in 0..a.len() {
                let w = a.point(j);
                if z == w {
                    continue;
                }
                KernelId::Cauchy.eval_into(z, w, &mut buf);
                re.push(buf[0].re * a.weights()[j]);
                im.push(buf[0].im * a.weights()[j]);
            }
            let wi = b.weights()[i];
            (pairwise_sum(&re) * wi, pairwise_sum(&im) * wi)
        })
        .collect();
    let re: Vec<f64> = terms.iter().map(|t| t.0).collect();
    let im: Vec<f64> = terms.iter().map(|t| t.1).collect();
    let pairing = Complex64::new(pairwise_sum(&re), pairwise_sum(&im));
    Ok(pairing.norm() / (a.total_mass() * b.total_mass()).sqrt())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct T1Quantities {
    pub level: u32,
    /// Sup of `μ(Q̃)/l(Q̃)` over the admissible cubes.
    pub i_n: f64,
    /// Sup of `‖C χ_{Q̃}‖_{L²(μ⌊Q̃)} / μ(Q̃)^{1/2}`.
    pub ii_n: f64,
    /// Dyadic levels that held at least one admissible cube.
    pub levels_scanned: usize,
    pub cubes: usize,
}

/// Suprema over origin-anchored dyadic cubes `Q̃` of side `≤ 2^{-N} l(base)`
/// holding at least `min_atoms` atoms. Any such cube contains an atom `z`
/// and therefore meets `Q_N(z)`, so the sup over `z` is implicit.
pub fn t1_quantities(
    mu: &DiscreteMeasure,
    base: &Cube,
    n: u32,
    min_atoms: usize,
) -> Result<T1Quantities> {
    KernelId::Cauchy.check_dim(mu.dim())?;
    if min_atoms < 2 {
        return Err(Error::InvalidParameter(format!(
            "min_atoms = {min_atoms}; single-atom cubes have no interactions"
        )));
    }
    if n > MAX_LEVEL {
        return Err(Error::InvalidLevel(format!("level {n} exceeds {MAX_LEVEL}")));
    }
    let target = base.side() * 0.5f64.powi(n as i32);
    if !(target > 0.0) {
        return Err(Error::InvalidLevel(format!("level {n} underflows the base side")));
    }
    // smallest m with 2^{-m} <= target
    let mut m = (-target.log2()).ceil() as i32;
    while 2f64.powi(-m) > target {
        m += 1;
    }
    while 2f64.powi(-(m - 1)) <= target {
        m -= 1;
    }

    let mut out = T1Quantities {
        level: n,
        i_n: 0.0,
        ii_n: 0.0,
        levels_scanned: 0,
        cubes: 0,
    };
    for _ in 0..MAX_SCAN_LEVELS {
        let side = 2f64.powi(-m);
        let cells: Vec<_> = occupied_cells(mu, side, LatticeShift::Origin)
            .into_iter()
            .filter(|c| c.atoms.len() >= min_atoms)
            .collect();
        if cells.is_empty() {
            break;
        }
        out.levels_scanned += 1;
        out.cubes += cells.len();
        for c in &cells {
            out.i_n = out.i_n.max(c.mass / side);
            let nu = mu.select(&c.atoms);
            let ratio = indicator_norm_of(&nu, KernelId::Cauchy) / c.mass.sqrt();
            out.ii_n = out.ii_n.max(ratio);
        }
        m += 1;
    }
    Ok(out)
}
