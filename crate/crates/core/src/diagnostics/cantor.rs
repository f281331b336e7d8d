//! Generalized planar Cantor sets: `θ_k` series, curvature-vs-`Σθ_k²`
//! comparison and the generation-matched verdict.

use serde::Serialize;

use super::{check_thresholds, conditions, gap_ladder, DiagnosticsReport, VerdictConfig};
use crate::curvature::{c2_of_subset, check_budget, menger_c2, ordered_triples, RatioEntry};
use crate::density::density_profile;
use crate::error::{Error, Result};
use crate::measure::{generate_cantor, CantorSpec, Cube, Point};
use crate::operator::t1_quantities;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ThetaConvention {
    /// `θ_k = 4^{-k}/σ_k`, the linear density of a generation-`k` square.
    #[default]
    Density,
    /// `θ_k = 2^{-k}/σ_k`.
    HalfScale,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThetaEntry {
    pub k: usize,
    pub theta: f64,
    /// `Σ_{j ≤ k} θ_j²`.
    pub partial_sum: f64,
}

/// `θ_0, …, θ_depth` with running sums of squares.
pub fn cantor_theta_series(spec: &CantorSpec, convention: ThetaConvention) -> Result<Vec<ThetaEntry>> {
    spec.validate()?;
    let base: f64 = match convention {
        ThetaConvention::Density => 0.25,
        ThetaConvention::HalfScale => 0.5,
    };
    let mut partial = 0.0;
    Ok((0..=spec.depth)
        .map(|k| {
            let theta = base.powi(k as i32) / spec.sigma(k);
            partial += theta * theta;
            ThetaEntry {
                k,
                theta,
                partial_sum: partial,
            }
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvatureCheck {
    pub depth: usize,
    /// `c²(p_depth)/p_depth(ℝ²)`, the mean of `c²_p(x)`.
    pub c2_density_ratio: f64,
    pub theta_partial_sum: f64,
    /// `c2_density_ratio / theta_partial_sum`.
    pub ratio_of_ratios: f64,
}

/// Mean pointwise curvature of the depth-`depth` approximation against
/// `Σ_{k ≤ depth} θ_k²`.
pub fn cantor_curvature_check(
    spec: &CantorSpec,
    depth: usize,
    convention: ThetaConvention,
    budget: u64,
) -> Result<CurvatureCheck> {
    let spec = spec.with_depth(depth)?;
    let n = 4usize.pow(depth as u32);
    check_budget(ordered_triples(n), budget)?;
    let approx = generate_cantor(&spec)?;
    let mu = &approx.measure;
    let c2 = menger_c2(mu)?.total / mu.total_mass();
    let theta = cantor_theta_series(&spec, convention)?;
    let partial = theta.last().expect("k = 0 is always present").partial_sum;
    Ok(CurvatureCheck {
        depth,
        c2_density_ratio: c2,
        theta_partial_sum: partial,
        ratio_of_ratios: c2 / partial,
    })
}

/// For `k = 1..=spec.depth`: the max over generation-`k` squares `Q` of
/// `c²(p⌊Q)/p(Q)`, with `p` approximated at depth `k + resolution` so every
/// square is resolved by the same `4^resolution` atoms.
pub fn cantor_curvature_ratios(
    spec: &CantorSpec,
    resolution: usize,
    budget: u64,
) -> Result<Vec<RatioEntry>> {
    spec.validate()?;
    let needed = spec.depth + resolution;
    if spec.lambdas.len() < needed {
        return Err(Error::InvalidSpec(format!(
            "the curvature scan at generation {} needs {needed} scaling factors, {} given",
            spec.depth,
            spec.lambdas.len()
        )));
    }
    let per_cube = 4usize.pow(resolution as u32);
    let estimate: u64 = (1..=spec.depth)
        .map(|k| 4u64.pow(k as u32) * ordered_triples(per_cube) / 6)
        .sum();
    check_budget(estimate, budget)?;

    let mut out = Vec::with_capacity(spec.depth);
    for k in 1..=spec.depth {
        let fine = spec.with_depth(k + resolution)?;
        let mu = generate_cantor(&fine)?.measure;
        // atoms of generation-k square j are the consecutive block j·4^r..(j+1)·4^r
        let mut max_ratio = 0.0f64;
        let squares = 4usize.pow(k as u32);
        let mut block: Vec<usize> = Vec::with_capacity(per_cube);
        for j in 0..squares {
            block.clear();
            block.extend(j * per_cube..(j + 1) * per_cube);
            let mass: f64 = block.iter().map(|&i| mu.weights()[i]).sum();
            max_ratio = max_ratio.max(c2_of_subset(&mu, &block) / mass);
        }
        out.push(RatioEntry {
            scale: spec.sigma(k),
            max_ratio,
            cubes: squares,
        });
    }
    Ok(out)
}

/// Verdict for `E(λ)` probed at generations `1..=spec.depth`: densities and
/// truncation gaps on the depth-`spec.depth` approximation at the scales
/// `σ_k`, curvature ratios from [`cantor_curvature_ratios`].
pub fn cantor_verdict(spec: &CantorSpec, config: &VerdictConfig) -> Result<DiagnosticsReport> {
    check_thresholds(&config.thresholds)?;
    let approx = generate_cantor(spec)?;
    let mu = &approx.measure;
    let scales: Vec<f64> = (1..=spec.depth).map(|k| spec.sigma(k)).collect();
    let density = density_profile(mu, &scales, 1)?;
    let ratios = cantor_curvature_ratios(spec, config.cantor_resolution, config.budget)?;
    let (gaps, warnings) = gap_ladder(mu, &scales, &config.norm)?;
    let verdict = conditions(&density, &ratios, &gaps, &config.thresholds);
    let base = Cube::new(Point::xy(0.5, 0.5), 1.0)?;
    let t1 = (0..=spec.depth as u32)
        .map(|n| t1_quantities(mu, &base, n, 2))
        .collect::<Result<Vec<_>>>()?;
    Ok(DiagnosticsReport {
        atoms: mu.len(),
        total_mass: mu.total_mass(),
        density_profile: density,
        curvature_ratios: ratios,
        truncation_gaps: gaps,
        theta_series: Some(cantor_theta_series(spec, ThetaConvention::Density)?),
        t1: Some(t1),
        verdict,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagnostics::Verdict;

    #[test]
    fn theta_half_is_geometric() {
        let spec = CantorSpec::constant(0.5, crate::measure::MAX_CANTOR_DEPTH).unwrap();
        let s = cantor_theta_series(&spec, ThetaConvention::Density).unwrap();
        for e in &s {
            assert_eq!(e.theta, 0.5f64.powi(e.k as i32));
            let closed = (4.0 / 3.0) * (1.0 - 0.25f64.powi(e.k as i32 + 1));
            assert!((e.partial_sum - closed).abs() < 1e-12);
        }
    }

    #[test]
    fn theta_quarter_conventions() {
        let spec = CantorSpec::constant(0.25, 6).unwrap();
        let d = cantor_theta_series(&spec, ThetaConvention::Density).unwrap();
        assert!(d.iter().all(|e| e.theta == 1.0));
        assert_eq!(d.last().unwrap().partial_sum, 7.0);
        let p = cantor_theta_series(&spec, ThetaConvention::HalfScale).unwrap();
        assert_eq!(p[3].theta, 8.0);
        assert_eq!(p[0].theta, 1.0);
    }

    #[test]
    fn depth_zero_check() {
        let spec = CantorSpec::constant(0.5, 3).unwrap();
        let c = cantor_curvature_check(&spec, 0, ThetaConvention::Density, u64::MAX).unwrap();
        assert_eq!((c.c2_density_ratio, c.theta_partial_sum, c.ratio_of_ratios), (0.0, 1.0, 0.0));
    }

    #[test]
    fn budget_is_enforced() {
        let spec = CantorSpec::constant(0.5, 5).unwrap();
        assert!(matches!(
            cantor_curvature_check(&spec, 5, ThetaConvention::Density, 1000),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn quarter_ratios_are_flat_and_half_ratios_decay() {
        let quarter = CantorSpec::constant(0.25, 6).unwrap().with_depth(3).unwrap();
        let r = cantor_curvature_ratios(&quarter, 3, u64::MAX).unwrap();
        for e in &r {
            assert!((e.max_ratio / r[0].max_ratio - 1.0).abs() < 1e-9);
        }
        let half = CantorSpec::constant(0.5, 6).unwrap().with_depth(3).unwrap();
        let r = cantor_curvature_ratios(&half, 3, u64::MAX).unwrap();
        for w in r.windows(2) {
            assert!((w[1].max_ratio / w[0].max_ratio - 0.25).abs() < 1e-9);
        }
        assert!(cantor_curvature_ratios(&CantorSpec::constant(0.5, 3).unwrap(), 3, u64::MAX).is_err());
    }

    #[test]
    fn small_cantor_verdicts() {
        let cfg = VerdictConfig::default();
        let half = CantorSpec::constant(0.5, 8).unwrap().with_depth(5).unwrap();
        let r = cantor_verdict(&half, &cfg).unwrap();
        assert_eq!(r.verdict.verdict, Verdict::CompactConsistent, "{:#?}", r.verdict);
        let quarter = CantorSpec::constant(0.25, 7).unwrap().with_depth(4).unwrap();
        let r = cantor_verdict(&quarter, &cfg).unwrap();
        assert_eq!(r.verdict.verdict, Verdict::NotCompact);
        assert_eq!(r.verdict.condition("curvature").unwrap().decayed, Some(false));
    }
}
