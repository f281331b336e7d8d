//! Closed-form Hilbert transforms of step functions on the line.
//!
//! The transform uses the unnormalized kernel, `Hf(x) = p.v. ∫ f(y)/(x−y) dy`,
//! so `‖Hf‖_{L²(ℝ)} = π ‖f‖_{L²(ℝ)}`.

mod quadrature;

use crate::error::{Error, Result};

pub use quadrature::{gauss_legendre, l2_norm_interval, l2_norm_interval_split, GaussRule};

/// Piecewise constant function: `values[i]` on `(breakpoints[i], breakpoints[i+1])`,
/// zero outside `[breakpoints[0], breakpoints[last]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFunction {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

impl StepFunction {
    pub fn new(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if breakpoints.len() < 2 || values.len() + 1 != breakpoints.len() {
            return Err(Error::InvalidParameter(format!(
                "{} breakpoints need {} values, got {}",
                breakpoints.len(),
                breakpoints.len().saturating_sub(1),
                values.len()
            )));
        }
        if breakpoints.iter().chain(&values).any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("non-finite breakpoint or value".into()));
        }
        if breakpoints.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParameter(
                "breakpoints must be strictly increasing".into(),
            ));
        }
        Ok(StepFunction { breakpoints, values })
    }

    /// Indicator of `[a, b]`.
    pub fn indicator(a: f64, b: f64) -> Result<Self> {
        Self::new(vec![a, b], vec![1.0])
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn intervals(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        self.breakpoints
            .windows(2)
            .zip(&self.values)
            .map(|(w, &v)| (w[0], w[1], v))
    }

    /// Value at `x`; breakpoints themselves take the value 0 (a null set).
    pub fn eval(&self, x: f64) -> f64 {
        self.intervals()
            .find(|&(a, b, _)| a < x && x < b)
            .map_or(0.0, |(_, _, v)| v)
    }

    pub fn integral(&self) -> f64 {
        self.intervals().map(|(a, b, v)| v * (b - a)).sum()
    }

    /// `‖f‖²_{L²(ℝ)}`, exact piecewise.
    pub fn l2_norm_sq(&self) -> f64 {
        self.intervals().map(|(a, b, v)| v * v * (b - a)).sum()
    }
}

/// `f_k = 2^{(k−1)/2} (χ_{(1/2−2^{-k}, 1/2)} − χ_{(1/2, 1/2+2^{-k})})`, `k ≥ 1`.
pub fn make_fk(k: u32) -> Result<StepFunction> {
    if k == 0 || k > 1000 {
        return Err(Error::InvalidK(k));
    }
    let h = 0.5f64.powi(k as i32);
    let a = 2f64.powf((k as f64 - 1.0) / 2.0);
    StepFunction::new(vec![0.5 - h, 0.5, 0.5 + h], vec![a, -a])
}

/// `∫_a^b dy/(x−y) = ln|x−a| − ln|x−b|` for `x ∉ [a, b]` or inside as a
/// principal value. Near an endpoint the ratio of distances is formed
/// directly; far away `ln_1p` keeps the small result accurate.
fn log_ratio(x: f64, a: f64, b: f64) -> f64 {
    let len = b - a;
    if x > b {
        let d = x - b;
        if d > len { (len / d).ln_1p() } else { ((x - a) / d).ln() }
    } else if x < a {
        let d = a - x;
        if d > len { -(len / d).ln_1p() } else { (d / (b - x)).ln() }
    } else {
        ((x - a) / (b - x)).ln()
    }
}

/// `Hf(x)` in closed form.
pub fn hilbert_step(f: &StepFunction, x: f64) -> Result<f64> {
    if f.breakpoints.contains(&x) {
        return Err(Error::BreakpointSingularity(x));
    }
    if !x.is_finite() {
        return Err(Error::InvalidParameter(format!("evaluation point {x}")));
    }
    Ok(f.intervals().map(|(a, b, v)| v * log_ratio(x, a, b)).sum())
}

/// `‖Hf‖_{L²([a, b])}` by composite quadrature, with panel edges pinned at
/// the breakpoints of `f`.
pub fn hilbert_l2_norm(f: &StepFunction, a: f64, b: f64, panels: usize) -> Result<f64> {
    let h = |x: f64| hilbert_step(f, x).unwrap_or(0.0);
    l2_norm_interval_split(&h, a, b, panels, f.breakpoints())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fk_shape() {
        let f1 = make_fk(1).unwrap();
        assert_eq!(f1.breakpoints(), &[0.0, 0.5, 1.0]);
        assert_eq!(f1.values(), &[1.0, -1.0]);
        assert!(matches!(make_fk(0), Err(Error::InvalidK(0))));
        for k in 1..=20 {
            let f = make_fk(k).unwrap();
            assert_eq!(f.integral(), 0.0);
            assert!((f.l2_norm_sq() - 1.0).abs() < 1e-14, "k = {k}");
        }
    }

    #[test]
    fn indicator_transform() {
        let chi = StepFunction::indicator(0.0, 1.0).unwrap();
        assert!((hilbert_step(&chi, 2.0).unwrap() - 2f64.ln()).abs() < 1e-15);
        assert_eq!(hilbert_step(&chi, 0.5).unwrap(), 0.0);
        assert!(matches!(
            hilbert_step(&chi, 1.0),
            Err(Error::BreakpointSingularity(_))
        ));
    }

    #[test]
    fn f1_at_three_halves() {
        let v = hilbert_step(&make_fk(1).unwrap(), 1.5).unwrap();
        assert!((v - 0.75f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn far_field_keeps_precision() {
        // ln(1 + 1/(x−1)) for large x, no cancellation
        let chi = StepFunction::indicator(0.0, 1.0).unwrap();
        let x: f64 = 1e12;
        let expect = (1.0 / (x - 1.0)).ln_1p();
        assert_eq!(hilbert_step(&chi, x).unwrap(), expect);
    }

    #[test]
    fn finite_next_to_breakpoints() {
        let f = make_fk(1).unwrap();
        for x in [-1e-18, 1e-18, 0.5 - 1e-16, 0.5 + 1e-16, 1.0 + 3e-16, 1.0 - 1e-16] {
            assert!(hilbert_step(&f, x).unwrap().is_finite(), "x = {x}");
        }
    }

    #[test]
    fn even_data_gives_odd_transform() {
        let f = StepFunction::new(vec![-1.0, -0.25, 0.25, 1.0], vec![2.0, -1.0, 2.0]).unwrap();
        for x in [0.1, 0.3, 0.77, 1.5, 40.0] {
            let (p, m) = (hilbert_step(&f, x).unwrap(), hilbert_step(&f, -x).unwrap());
            assert!((p + m).abs() < 1e-12, "x = {x}");
        }
    }

    #[test]
    fn invalid_steps() {
        assert!(StepFunction::new(vec![0.0, 0.0], vec![1.0]).is_err());
        assert!(StepFunction::new(vec![0.0, 1.0], vec![1.0, 2.0]).is_err());
        assert!(StepFunction::new(vec![0.0, 1.0], vec![f64::NAN]).is_err());
    }
}
