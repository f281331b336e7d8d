use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Levels of geometric refinement toward a singular panel endpoint.
const GRADING_LEVELS: usize = 24;
const GRADING_RATIO: f64 = 0.25;

/// Nodes and weights of an `n`-point Gauss–Legendre rule on `[−1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Legendre `P_n(x)` and `P_n'(x)` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Roots by Newton iteration from the Chebyshev-like initial guesses.
pub fn gauss_legendre(n: usize) -> GaussRule {
    assert!(n >= 1, "Gauss–Legendre rule needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    GaussRule { nodes, weights }
}

fn panel_sq(f: &dyn Fn(f64) -> f64, rule: &GaussRule, a: f64, b: f64) -> f64 {
    let (mid, half) = ((a + b) / 2.0, (b - a) / 2.0);
    rule.nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&t, &w)| {
            let v = f(mid + half * t);
            w * v * v
        })
        .sum::<f64>()
        * half
}

/// `∫ |f|²` over `[a, b]`, graded geometrically toward the flagged endpoints.
fn graded_sq(
    f: &dyn Fn(f64) -> f64,
    rule: &GaussRule,
    a: f64,
    b: f64,
    sing_a: bool,
    sing_b: bool,
) -> f64 {
    if sing_a && sing_b {
        let m = (a + b) / 2.0;
        return graded_sq(f, rule, a, m, true, false) + graded_sq(f, rule, m, b, false, true);
    }
    if !sing_a && !sing_b {
        return panel_sq(f, rule, a, b);
    }
    // cut points a + (b−a)·r^k (or mirrored), k = 1..levels
    let h = b - a;
    let mut total = 0.0;
    let mut outer = 1.0;
    for _ in 0..GRADING_LEVELS {
        let inner = outer * GRADING_RATIO;
        let (lo, hi) = if sing_a {
            (a + h * inner, a + h * outer)
        } else {
            (b - h * outer, b - h * inner)
        };
        total += panel_sq(f, rule, lo, hi);
        outer = inner;
    }
    let (lo, hi) = if sing_a {
        (a, a + h * outer)
    } else {
        (b - h * outer, b)
    };
    total + panel_sq(f, rule, lo, hi)
}

/// `(∫_a^b |f|²)^{1/2}` with `panels` uniform 8-point Gauss–Legendre panels.
pub fn l2_norm_interval(f: &dyn Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> Result<f64> {
    l2_norm_interval_split(f, a, b, panels, &[])
}

/// As [`l2_norm_interval`], with panel edges pinned at `breakpoints` and the
/// panels touching a breakpoint graded toward it, so no node sits on a
/// (logarithmic) singularity.
pub fn l2_norm_interval_split(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    panels: usize,
    breakpoints: &[f64],
) -> Result<f64> {
    if !(a < b && a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidRange(format!("interval [{a}, {b}]")));
    }
    if panels == 0 {
        return Err(Error::InvalidParameter("panels must be at least 1".into()));
    }
    let rule = gauss_legendre(8);
    let singular = |x: f64| breakpoints.contains(&x);
    let mut cuts = vec![a];
    let mut inner: Vec<f64> = breakpoints.iter().copied().filter(|&x| a < x && x < b).collect();
    inner.sort_by(f64::total_cmp);
    inner.dedup();
    cuts.extend(inner);
    cuts.push(b);

    let mut total = 0.0;
    for seg in cuts.windows(2) {
        let (s, e) = (seg[0], seg[1]);
        let count = ((panels as f64 * (e - s) / (b - a)).round() as usize).max(1);
        let h = (e - s) / count as f64;
        for p in 0..count {
            let lo = s + h * p as f64;
            let hi = if p + 1 == count { e } else { s + h * (p + 1) as f64 };
            let sa = p == 0 && singular(s);
            let sb = p + 1 == count && singular(e);
            total += graded_sq(f, &rule, lo, hi, sa, sb);
        }
    }
    Ok(total.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_integrates_degree_fifteen_exactly() {
        let rule = gauss_legendre(8);
        assert!((rule.weights.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        for deg in 0..=15 {
            let q: f64 = rule
                .nodes
                .iter()
                .zip(&rule.weights)
                .map(|(x, w)| w * x.powi(deg))
                .sum();
            let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
            assert!((q - exact).abs() < 1e-14, "degree {deg}");
        }
    }

    #[test]
    fn constant_on_unit_interval() {
        let v = l2_norm_interval(&|_| 1.0, 0.0, 1.0, 1).unwrap();
        assert!((v - 1.0).abs() < 1e-15);
        assert!(l2_norm_interval(&|_| 1.0, 1.0, 0.0, 1).is_err());
        assert!(l2_norm_interval(&|_| 1.0, 0.0, 1.0, 0).is_err());
    }

    #[test]
    fn log_singularity_at_breakpoint() {
        // ∫_0^1 ln²x dx = 2
        let f = |x: f64| x.ln();
        let v = l2_norm_interval_split(&f, 0.0, 1.0, 4, &[0.0]).unwrap();
        assert!((v * v - 2.0).abs() < 1e-8, "{}", v * v);
    }

    #[test]
    fn panel_doubling_on_smooth_integrand() {
        let f = |x: f64| (3.0 * x).sin() * (-x).exp();
        let a = l2_norm_interval(&f, -2.0, 5.0, 50).unwrap();
        let b = l2_norm_interval(&f, -2.0, 5.0, 100).unwrap();
        assert!((a - b).abs() < 1e-8);
    }
}
