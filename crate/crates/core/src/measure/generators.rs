//! Example measures: generalized planar Cantor sets, segment, circle and disc.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::{Cube, DiscreteMeasure};
use crate::error::{Error, Result};

/// Deepest Cantor generation we are willing to materialize (4^11 ≈ 4.2M atoms).
pub const MAX_CANTOR_DEPTH: usize = 11;

/// Scaling sequence `λ_1, λ_2, …` and the generation depth to build.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CantorSpec {
    pub lambdas: Vec<f64>,
    pub depth: usize,
}

impl CantorSpec {
    pub fn new(lambdas: Vec<f64>, depth: usize) -> Result<Self> {
        let spec = CantorSpec { lambdas, depth };
        spec.validate()?;
        Ok(spec)
    }

    /// `λ_n = lambda` for `n = 1..=depth`.
    pub fn constant(lambda: f64, depth: usize) -> Result<Self> {
        Self::new(vec![lambda; depth], depth)
    }

    pub fn validate(&self) -> Result<()> {
        if let Some((n, l)) = self
            .lambdas
            .iter()
            .enumerate()
            .find(|(_, &l)| !(l > 0.0 && l <= 0.5))
        {
            return Err(Error::InvalidSpec(format!(
                "lambda_{} = {l} is outside (0, 1/2]",
                n + 1
            )));
        }
        if self.depth > self.lambdas.len() {
            return Err(Error::InvalidSpec(format!(
                "depth {} exceeds the {} scaling factors given",
                self.depth,
                self.lambdas.len()
            )));
        }
        if self.depth > MAX_CANTOR_DEPTH {
            return Err(Error::InvalidSpec(format!(
                "depth {} exceeds the memory budget (max {MAX_CANTOR_DEPTH})",
                self.depth
            )));
        }
        Ok(())
    }

    /// Side `σ_k = λ_1 ⋯ λ_k` of a generation-`k` square (`σ_0 = 1`).
    pub fn sigma(&self, k: usize) -> f64 {
        self.lambdas[..k].iter().product()
    }

    /// The same scaling sequence truncated or kept at another depth.
    pub fn with_depth(&self, depth: usize) -> Result<Self> {
        Self::new(self.lambdas.clone(), depth)
    }

    /// The `4^k` generation-`k` squares as half-open cubes, in construction order.
    pub fn generation_squares(&self, k: usize) -> Result<Vec<Cube>> {
        if k > self.lambdas.len() {
            return Err(Error::InvalidSpec(format!("generation {k} beyond the given factors")));
        }
        Ok(corner_squares(&self.lambdas[..k])
            .into_iter()
            .map(|(x, y, s)| Cube::from_lower(&[x, y], s).expect("positive side"))
            .collect())
    }
}

/// Lower corners and sides of the squares after applying `lambdas` in turn.
/// Children are pushed in quadrant order: lower-left, lower-right, upper-left,
/// upper-right.
fn corner_squares(lambdas: &[f64]) -> Vec<(f64, f64, f64)> {
    let mut squares = vec![(0.0, 0.0, 1.0)];
    for &lambda in lambdas {
        let mut next = Vec::with_capacity(squares.len() * 4);
        for &(x, y, s) in &squares {
            let t = s * lambda;
            let far = s - t;
            for (dx, dy) in [(0.0, 0.0), (far, 0.0), (0.0, far), (far, far)] {
                next.push((x + dx, y + dy, t));
            }
        }
        squares = next;
    }
    squares
}

/// Depth-`n` approximation of the Cantor measure together with its squares.
#[derive(Debug, Clone)]
pub struct CantorApprox {
    pub spec: CantorSpec,
    pub measure: DiscreteMeasure,
    /// Generation-`depth` squares, one per atom, same order as the atoms.
    pub squares: Vec<Cube>,
}

/// One atom of weight `4^{-n}` at the center of every generation-`n` square.
pub fn generate_cantor(spec: &CantorSpec) -> Result<CantorApprox> {
    spec.validate()?;
    let raw = corner_squares(&spec.lambdas[..spec.depth]);
    let weight = 0.25f64.powi(spec.depth as i32);
    let mut coords = Vec::with_capacity(raw.len() * 2);
    let mut squares = Vec::with_capacity(raw.len());
    for &(x, y, s) in &raw {
        coords.push(x + s / 2.0);
        coords.push(y + s / 2.0);
        squares.push(Cube::from_lower(&[x, y], s)?);
    }
    let measure = DiscreteMeasure::assemble(2, coords, vec![weight; raw.len()]);
    Ok(CantorApprox {
        spec: spec.clone(),
        measure,
        squares,
    })
}

/// Midpoint rule for arclength on `[a, b] × {0}`.
pub fn generate_segment(a: f64, b: f64, n: usize) -> Result<DiscreteMeasure> {
    if !(a < b && a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidRange(format!("segment [{a}, {b}]")));
    }
    if n == 0 {
        return Err(Error::InvalidRange("segment needs at least one atom".into()));
    }
    let h = (b - a) / n as f64;
    let mut coords = Vec::with_capacity(2 * n);
    for i in 0..n {
        coords.push(a + (i as f64 + 0.5) * h);
        coords.push(0.0);
    }
    DiscreteMeasure::from_flat(2, coords, vec![h; n])
}

/// `n` equally spaced atoms on the circle of radius `radius`, weight `2πr/n`.
pub fn generate_circle(radius: f64, n: usize) -> Result<DiscreteMeasure> {
    if !(radius > 0.0 && radius.is_finite()) || n < 3 {
        return Err(Error::InvalidParameter(format!(
            "circle needs radius > 0 and at least 3 atoms (radius {radius}, n {n})"
        )));
    }
    let mut coords = Vec::with_capacity(2 * n);
    for i in 0..n {
        let t = 2.0 * PI * i as f64 / n as f64;
        coords.push(radius * t.cos());
        coords.push(radius * t.sin());
    }
    DiscreteMeasure::from_flat(2, coords, vec![2.0 * PI * radius / n as f64; n])
}

/// Cell centers of the `m × m` grid on `[−r, r]²` that fall in the open disc,
/// each carrying the cell area `(2r/m)²`.
pub fn generate_disc(radius: f64, m: usize) -> Result<DiscreteMeasure> {
    if !(radius > 0.0 && radius.is_finite()) || m == 0 {
        return Err(Error::InvalidParameter(format!(
            "disc needs radius > 0 and m >= 1 (radius {radius}, m {m})"
        )));
    }
    let h = 2.0 * radius / m as f64;
    let centers: Vec<f64> = (0..m).map(|i| -radius + (i as f64 + 0.5) * h).collect();
    let mut coords = Vec::new();
    for &x in &centers {
        for &y in &centers {
            if x * x + y * y < radius * radius {
                coords.push(x);
                coords.push(y);
            }
        }
    }
    let n = coords.len() / 2;
    if n == 0 {
        return Err(Error::InvalidParameter(format!("disc grid m = {m} keeps no cell")));
    }
    DiscreteMeasure::from_flat(2, coords, vec![h * h; n])
}
