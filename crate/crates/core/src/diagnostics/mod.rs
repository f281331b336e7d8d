//! Compactness evidence assembled from densities, curvature ratios and
//! truncation gaps, plus the identity and Cantor-set checks.
//!
//! A condition counts as "decayed" when its finest-scale value is at most
//! `threshold × coarsest-scale value`. The verdict is `not_compact` as soon as
//! one computed condition fails to decay, `compact_consistent` when all three
//! decay, and `inconclusive` when some condition has fewer than two samples
//! and none failed.

mod cantor;
mod tv;

use serde::Serialize;
use serde_json::Value;

use crate::curvature::{check_budget, curvature_ratio_scan, scan_cost, RatioEntry};
use crate::density::{density_profile, DensityProfile};
use crate::error::Result;
use crate::measure::io::fmt17;
use crate::measure::DiscreteMeasure;
use crate::operator::{truncation_gap, KernelId, NormOptions, T1Quantities};

pub use cantor::{
    cantor_curvature_check, cantor_curvature_ratios, cantor_theta_series, cantor_verdict,
    CurvatureCheck, ThetaConvention, ThetaEntry,
};
pub use tv::{tv_identity_residual, tv_identity_residual_with, TvResidual};

/// Default cap on triple evaluations for curvature sums.
pub const DEFAULT_TRIPLE_BUDGET: u64 = 10_000_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Thresholds {
    pub density: f64,
    pub curvature: f64,
    pub gap: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            density: 0.2,
            curvature: 0.2,
            gap: 0.2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerdictConfig {
    pub thresholds: Thresholds,
    pub norm: NormOptions,
    /// Cap on triple evaluations in the curvature scan.
    pub budget: u64,
    /// Extra generations used to resolve each cube in the Cantor curvature scan.
    pub cantor_resolution: usize,
}

impl Default for VerdictConfig {
    fn default() -> Self {
        VerdictConfig {
            thresholds: Thresholds::default(),
            norm: NormOptions {
                tol: 1e-6,
                max_iter: 500,
            },
            budget: DEFAULT_TRIPLE_BUDGET,
            cantor_resolution: 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    CompactConsistent,
    NotCompact,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::CompactConsistent => "compact_consistent",
            Verdict::NotCompact => "not_compact",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// Trend of one condition across the probed scales.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionOutcome {
    pub name: &'static str,
    pub coarsest: Option<f64>,
    pub finest: Option<f64>,
    pub threshold: f64,
    /// `None` when fewer than two samples exist.
    pub decayed: Option<bool>,
}

impl ConditionOutcome {
    pub fn from_series(name: &'static str, series: &[f64], threshold: f64) -> Self {
        let coarsest = series.first().copied();
        let finest = series.last().copied();
        let decayed = match (coarsest, finest) {
            (Some(c), Some(f)) if series.len() >= 2 => Some(f <= threshold * c),
            _ => None,
        };
        ConditionOutcome {
            name,
            coarsest,
            finest,
            threshold,
            decayed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerdictSummary {
    pub verdict: Verdict,
    pub conditions: Vec<ConditionOutcome>,
    pub thresholds: Thresholds,
}

impl VerdictSummary {
    pub fn from_conditions(conditions: Vec<ConditionOutcome>, thresholds: Thresholds) -> Self {
        let verdict = if conditions.iter().any(|c| c.decayed == Some(false)) {
            Verdict::NotCompact
        } else if conditions.iter().all(|c| c.decayed == Some(true)) {
            Verdict::CompactConsistent
        } else {
            Verdict::Inconclusive
        };
        VerdictSummary {
            verdict,
            conditions,
            thresholds,
        }
    }

    pub fn condition(&self, name: &str) -> Option<&ConditionOutcome> {
        self.conditions.iter().find(|c| c.name == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GapEntry {
    pub eps1: f64,
    pub eps2: f64,
    pub gap: f64,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiagnosticsReport {
    pub atoms: usize,
    pub total_mass: f64,
    pub density_profile: DensityProfile,
    pub curvature_ratios: Vec<RatioEntry>,
    pub truncation_gaps: Vec<GapEntry>,
    pub theta_series: Option<Vec<ThetaEntry>>,
    pub t1: Option<Vec<T1Quantities>>,
    pub verdict: VerdictSummary,
    pub warnings: Vec<String>,
}

/// Every float becomes a 17-significant-digit string; integers, booleans and
/// strings are kept.
fn stringify_floats(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => Value::String(fmt17(n.as_f64().expect("f64"))),
        Value::Array(items) => Value::Array(items.into_iter().map(stringify_floats).collect()),
        Value::Object(map) => Value::Object(
            map.into_iter()
                .map(|(k, v)| (k, stringify_floats(v)))
                .collect(),
        ),
        other => other,
    }
}

/// Pretty JSON of any result type in the report convention: fields in
/// declaration order, floats as 17-significant-digit strings.
pub fn to_report_json<T: Serialize>(value: &T) -> String {
    let value = serde_json::to_value(value).expect("result types serialize");
    let mut s = serde_json::to_string_pretty(&stringify_floats(value)).expect("valid JSON");
    s.push('\n');
    s
}

impl DiagnosticsReport {
    /// JSON with fields in declaration order and floats as decimal strings.
    pub fn to_json(&self) -> String {
        to_report_json(self)
    }

    /// Flat `quantity,param1,param2,value` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("quantity,param1,param2,value\n");
        let mut row = |q: &str, p1: String, p2: String, v: String| {
            out.push_str(&format!("{q},{p1},{p2},{v}\n"));
        };
        for e in &self.density_profile.entries {
            row("density", fmt17(e.scale), String::new(), fmt17(e.sup_density));
        }
        for e in &self.curvature_ratios {
            row("curvature_ratio", fmt17(e.scale), String::new(), fmt17(e.max_ratio));
        }
        for g in &self.truncation_gaps {
            row("truncation_gap", fmt17(g.eps1), fmt17(g.eps2), fmt17(g.gap));
        }
        for t in self.theta_series.iter().flatten() {
            row("theta", t.k.to_string(), fmt17(t.theta), fmt17(t.partial_sum));
        }
        for t in self.t1.iter().flatten() {
            row("t1", t.level.to_string(), fmt17(t.i_n), fmt17(t.ii_n));
        }
        for c in &self.verdict.conditions {
            let d = match c.decayed {
                Some(true) => "decayed",
                Some(false) => "not_decayed",
                None => "undetermined",
            };
            row("condition", c.name.to_string(), fmt17(c.threshold), d.to_string());
        }
        row("verdict", String::new(), String::new(), self.verdict.verdict.as_str().to_string());
        out
    }
}

/// Gaps `‖T_{ε_{i+1}} − T_{ε_i}‖` over consecutive ladder entries.
pub fn gap_ladder(
    mu: &DiscreteMeasure,
    eps_ladder: &[f64],
    opts: &NormOptions,
) -> Result<(Vec<GapEntry>, Vec<String>)> {
    crate::curvature::validate_scales(eps_ladder)?;
    let mut gaps = Vec::new();
    let mut warnings = Vec::new();
    for w in eps_ladder.windows(2) {
        let est = truncation_gap(mu, KernelId::Cauchy, w[1], w[0], opts)?;
        if !est.converged {
            warnings.push(format!(
                "norm for band ({}, {}] unconverged after {} iterations",
                w[1], w[0], est.iterations
            ));
        }
        gaps.push(GapEntry {
            eps1: w[1],
            eps2: w[0],
            gap: est.value,
            iterations: est.iterations,
            converged: est.converged,
        });
    }
    Ok((gaps, warnings))
}

fn conditions(
    density: &DensityProfile,
    ratios: &[RatioEntry],
    gaps: &[GapEntry],
    t: &Thresholds,
) -> VerdictSummary {
    let d: Vec<f64> = density.entries.iter().map(|e| e.sup_density).collect();
    let c: Vec<f64> = ratios.iter().map(|e| e.max_ratio).collect();
    let g: Vec<f64> = gaps.iter().map(|e| e.gap).collect();
    VerdictSummary::from_conditions(
        vec![
            ConditionOutcome::from_series("density", &d, t.density),
            ConditionOutcome::from_series("curvature", &c, t.curvature),
            ConditionOutcome::from_series("truncation_gap", &g, t.gap),
        ],
        *t,
    )
}

/// Density profile, lattice curvature ratios and consecutive truncation
/// gaps of a planar measure, with the verdict they imply.
pub fn compactness_verdict(
    mu: &DiscreteMeasure,
    scales: &[f64],
    eps_ladder: &[f64],
    config: &VerdictConfig,
) -> Result<DiagnosticsReport> {
    check_thresholds(&config.thresholds)?;
    KernelId::Cauchy.check_dim(mu.dim())?;
    let density = density_profile(mu, scales, 1)?;
    check_budget(scan_cost(mu, scales), config.budget)?;
    let ratios = curvature_ratio_scan(mu, scales)?;
    let (gaps, warnings) = gap_ladder(mu, eps_ladder, &config.norm)?;
    let verdict = conditions(&density, &ratios, &gaps, &config.thresholds);
    Ok(DiagnosticsReport {
        atoms: mu.len(),
        total_mass: mu.total_mass(),
        density_profile: density,
        curvature_ratios: ratios,
        truncation_gaps: gaps,
        theta_series: None,
        t1: None,
        verdict,
        warnings,
    })
}

pub(crate) fn check_thresholds(t: &Thresholds) -> Result<()> {
    for (name, v) in [("density", t.density), ("curvature", t.curvature), ("gap", t.gap)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(crate::Error::InvalidParameter(format!(
                "{name} threshold {v} must be positive"
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::{generate_disc, generate_segment};

    fn dyadic(from: i32, to: i32) -> Vec<f64> {
        (from..=to).map(|k| 0.5f64.powi(k)).collect()
    }

    #[test]
    fn verdict_rule() {
        let t = Thresholds::default();
        let ok = ConditionOutcome::from_series("a", &[1.0, 0.1], 0.2);
        let bad = ConditionOutcome::from_series("b", &[1.0, 0.5], 0.2);
        let none = ConditionOutcome::from_series("c", &[1.0], 0.2);
        assert_eq!(none.decayed, None);
        let v = |c: Vec<ConditionOutcome>| VerdictSummary::from_conditions(c, t).verdict;
        assert_eq!(v(vec![ok.clone(), ok.clone()]), Verdict::CompactConsistent);
        assert_eq!(v(vec![ok.clone(), bad.clone()]), Verdict::NotCompact);
        assert_eq!(v(vec![ok.clone(), none.clone()]), Verdict::Inconclusive);
        assert_eq!(v(vec![bad, none]), Verdict::NotCompact);
        // growing series never decays
        let up = ConditionOutcome::from_series("d", &[1.0, 2.0], 0.2);
        assert_eq!(up.decayed, Some(false));
    }

    #[test]
    fn segment_is_not_compact_through_density() {
        let mu = generate_segment(0.0, 1.0, 512).unwrap();
        let r = compactness_verdict(&mu, &dyadic(1, 6), &dyadic(1, 4), &VerdictConfig::default())
            .unwrap();
        assert_eq!(r.verdict.verdict, Verdict::NotCompact);
        assert_eq!(r.verdict.condition("density").unwrap().decayed, Some(false));
        assert_eq!(r.verdict.condition("curvature").unwrap().decayed, Some(true));
    }

    #[test]
    fn disc_is_compact_consistent() {
        // spacing 1/32: the finest band (1/32, 1/16] skips nearest neighbours
        let mu = generate_disc(1.0, 64).unwrap();
        let r = compactness_verdict(&mu, &dyadic(1, 5), &dyadic(1, 5), &VerdictConfig::default())
            .unwrap();
        assert_eq!(r.verdict.verdict, Verdict::CompactConsistent, "{:#?}", r.verdict);
    }

    #[test]
    fn report_serialization() {
        let mu = generate_segment(0.0, 1.0, 16).unwrap();
        let r = compactness_verdict(&mu, &dyadic(1, 3), &dyadic(1, 2), &VerdictConfig::default())
            .unwrap();
        let json = r.to_json();
        let v: Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["atoms"], 16);
        assert_eq!(v["total_mass"], "1.0000000000000000e0");
        assert_eq!(v["verdict"]["verdict"], "not_compact");
        let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
        assert_eq!(keys[0], "atoms");
        assert_eq!(keys[2], "density_profile");
        assert!(r.to_csv().ends_with("verdict,,,not_compact\n"));
    }

    #[test]
    fn rejects_bad_thresholds() {
        let mu = generate_segment(0.0, 1.0, 8).unwrap();
        let mut cfg = VerdictConfig::default();
        cfg.thresholds.gap = 0.0;
        assert!(compactness_verdict(&mu, &[0.5], &[0.5], &cfg).is_err());
    }
}
