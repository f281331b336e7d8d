//! Menger curvature of discrete planar measures.
//!
//! For three points the squared Menger curvature is
//! `c(a,b,c)² = 1/R² = 4·cross² / (|a−b|²·|b−c|²·|a−c|²)`, where `cross` is
//! the 2D cross product of `b−a` and `c−a` (twice the signed area). No square
//! roots are needed.
//!
//! All sums run over ordered triples of pairwise distinct atom indices; a
//! triple with a repeated index is never summed. The total `c²(μ)` therefore
//! counts each geometric triangle `3! = 6` times, matching the iterated
//! integral `∫∫∫ R⁻² dμ dμ dμ`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::measure::lattice::{occupied_cells, LatticeShift};
use crate::measure::DiscreteMeasure;
use crate::reduce::{pairwise_sum, par_sum_indexed};

/// Triangles with area below `COLLINEAR_TOL · (longest side)²` count as collinear.
pub const COLLINEAR_TOL: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvatureResult {
    /// `c²(μ)`.
    pub total: f64,
    /// `c²_μ(x_i)` per atom, the other atoms only.
    pub pointwise: Option<Vec<f64>>,
    /// Ordered triples of distinct indices summed (collinear ones included).
    pub triple_count: u64,
}

/// One row of [`curvature_ratio_scan`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RatioEntry {
    pub scale: f64,
    /// `max_Q c²(μ⌊Q)/μ(Q)` over the scanned cubes of this side.
    pub max_ratio: f64,
    /// Cubes that entered the maximum.
    pub cubes: usize,
}

/// Number of ordered triples of distinct indices among `n` atoms.
pub fn ordered_triples(n: usize) -> u64 {
    let n = n as u64;
    n * n.saturating_sub(1) * n.saturating_sub(2)
}

/// Fail with [`Error::BudgetExceeded`] when `estimated > budget`.
pub fn check_budget(estimated: u64, budget: u64) -> Result<()> {
    if estimated > budget {
        Err(Error::BudgetExceeded { estimated, budget })
    } else {
        Ok(())
    }
}

#[inline(always)]
fn inv_r2_from_offsets(ax: f64, ay: f64, a2: f64, bx: f64, by: f64, b2: f64) -> f64 {
    // offsets of two vertices from the third one
    let cross = ax * by - ay * bx;
    let ex = ax - bx;
    let ey = ay - by;
    let e2 = ex * ex + ey * ey;
    let longest = a2.max(b2).max(e2);
    let cross2 = cross * cross;
    let tol = 2.0 * COLLINEAR_TOL * longest;
    if cross2 <= tol * tol {
        0.0
    } else {
        4.0 * cross2 / (a2 * b2 * e2)
    }
}

fn require_planar(mu_dim: usize) -> Result<()> {
    if mu_dim != 2 {
        return Err(Error::DimensionError {
            required: 2,
            found: mu_dim,
        });
    }
    Ok(())
}

/// Lexicographically sorted copy of a triple; makes the floating-point
/// evaluation independent of argument order.
fn canonical<'a>(a: &'a [f64], b: &'a [f64], c: &'a [f64]) -> [&'a [f64]; 3] {
    let mut t = [a, b, c];
    t.sort_by(|x, y| x.partial_cmp(y).expect("finite coordinates"));
    t
}

/// `1/R(a,b,c)²`, zero for collinear points.
pub fn inverse_radius_sq(a: &[f64], b: &[f64], c: &[f64]) -> Result<f64> {
    if a.len() != 2 || b.len() != 2 || c.len() != 2 {
        return Err(Error::DimensionError {
            required: 2,
            found: a.len().max(b.len()).max(c.len()),
        });
    }
    if a == b || b == c || a == c {
        return Err(Error::DegenerateTriple);
    }
    let [p, q, r] = canonical(a, b, c);
    let (ax, ay) = (q[0] - p[0], q[1] - p[1]);
    let (bx, by) = (r[0] - p[0], r[1] - p[1]);
    Ok(inv_r2_from_offsets(
        ax,
        ay,
        ax * ax + ay * ay,
        bx,
        by,
        bx * bx + by * by,
    ))
}

/// Radius of the circle through three distinct planar points; `+∞` when
/// they are collinear.
pub fn circumradius(a: &[f64], b: &[f64], c: &[f64]) -> Result<f64> {
    let k = inverse_radius_sq(a, b, c)?;
    Ok(if k == 0.0 {
        f64::INFINITY
    } else {
        1.0 / k.sqrt()
    })
}

struct Soa {
    xs: Vec<f64>,
    ys: Vec<f64>,
    ws: Vec<f64>,
}

impl Soa {
    fn of(mu: &DiscreteMeasure, indices: Option<&[usize]>) -> Soa {
        let all: Vec<usize>;
        let idx = match indices {
            Some(idx) => idx,
            None => {
                all = (0..mu.len()).collect();
                &all
            }
        };
        Soa {
            xs: idx.iter().map(|&i| mu.point(i)[0]).collect(),
            ys: idx.iter().map(|&i| mu.point(i)[1]).collect(),
            ws: idx.iter().map(|&i| mu.weights()[i]).collect(),
        }
    }

    fn len(&self) -> usize {
        self.ws.len()
    }

    /// `Σ_{j<k<n}` over `j ≥ first` of `w_j w_k / R(x_i, x_j, x_k)²`: the unordered
    /// pairs after `i` when `first = i + 1`.
    fn tail_pairs(&self, i: usize) -> f64 {
        let n = self.len();
        let (xi, yi) = (self.xs[i], self.ys[i]);
        let m = n - i - 1;
        let mut dx = Vec::with_capacity(m);
        let mut dy = Vec::with_capacity(m);
        let mut d2 = Vec::with_capacity(m);
        for k in (i + 1)..n {
            let x = self.xs[k] - xi;
            let y = self.ys[k] - yi;
            dx.push(x);
            dy.push(y);
            d2.push(x * x + y * y);
        }
        let ws = &self.ws[i + 1..];
        let mut partial = Vec::with_capacity(m);
        for j in 0..m {
            let (ax, ay, a2) = (dx[j], dy[j], d2[j]);
            let mut acc = 0.0;
            for k in (j + 1)..m {
                acc += inv_r2_from_offsets(ax, ay, a2, dx[k], dy[k], d2[k]) * ws[k];
            }
            partial.push(acc * ws[j]);
        }
        pairwise_sum(&partial)
    }

    /// `Σ_{j<k}` over atoms different from `z` of `w_j w_k / R(z, x_j, x_k)²`.
    fn pairs_about(&self, zx: f64, zy: f64, skip: Option<usize>) -> f64 {
        let mut dx = Vec::with_capacity(self.len());
        let mut dy = Vec::with_capacity(self.len());
        let mut d2 = Vec::with_capacity(self.len());
        let mut ws = Vec::with_capacity(self.len());
        for k in 0..self.len() {
            if Some(k) == skip || (self.xs[k] == zx && self.ys[k] == zy) {
                continue;
            }
            let x = self.xs[k] - zx;
            let y = self.ys[k] - zy;
            dx.push(x);
            dy.push(y);
            d2.push(x * x + y * y);
            ws.push(self.ws[k]);
        }
        let m = ws.len();
        par_sum_indexed(m, |j| {
            let (ax, ay, a2) = (dx[j], dy[j], d2[j]);
            let mut acc = 0.0;
            for k in (j + 1)..m {
                acc += inv_r2_from_offsets(ax, ay, a2, dx[k], dy[k], d2[k]) * ws[k];
            }
            acc * ws[j]
        })
    }

    fn total(&self) -> f64 {
        let n = self.len();
        6.0 * par_sum_indexed(n, |i| self.ws[i] * self.tail_pairs(i))
    }
}

/// `c²_μ(z) = Σ_{j≠k} w_j w_k / R(z, x_j, x_k)²` over atoms distinct from `z`
/// (ordered pairs). `z` need not be an atom.
pub fn menger_c2_point(mu: &DiscreteMeasure, z: &[f64]) -> Result<f64> {
    require_planar(mu.dim())?;
    if z.len() != 2 {
        return Err(Error::DimensionError {
            required: 2,
            found: z.len(),
        });
    }
    Ok(2.0 * Soa::of(mu, None).pairs_about(z[0], z[1], None))
}

/// `c²(μ) = Σ w_i w_j w_k / R(x_i, x_j, x_k)²` over ordered triples of
/// distinct indices. Parallel over the outer index; bit-reproducible for
/// any thread count.
pub fn menger_c2(mu: &DiscreteMeasure) -> Result<CurvatureResult> {
    require_planar(mu.dim())?;
    Ok(CurvatureResult {
        total: Soa::of(mu, None).total(),
        pointwise: None,
        triple_count: ordered_triples(mu.len()),
    })
}

/// As [`menger_c2`], also materializing `c²_μ(x_i)` (three times the work).
/// The total is `Σ_i w_i c²_μ(x_i)`.
pub fn menger_c2_pointwise(mu: &DiscreteMeasure) -> Result<CurvatureResult> {
    require_planar(mu.dim())?;
    let soa = Soa::of(mu, None);
    let pointwise: Vec<f64> = (0..soa.len())
        .map(|i| 2.0 * soa.pairs_about(soa.xs[i], soa.ys[i], Some(i)))
        .collect();
    let weighted: Vec<f64> = pointwise.iter().zip(&soa.ws).map(|(p, w)| p * w).collect();
    Ok(CurvatureResult {
        total: pairwise_sum(&weighted),
        pointwise: Some(pointwise),
        triple_count: ordered_triples(mu.len()),
    })
}

/// `c²` of the sub-measure on `indices`.
pub(crate) fn c2_of_subset(mu: &DiscreteMeasure, indices: &[usize]) -> f64 {
    if indices.len() < 3 {
        return 0.0;
    }
    Soa::of(mu, Some(indices)).total()
}

pub(crate) fn validate_scales(scales: &[f64]) -> Result<()> {
    if scales.iter().any(|&s| !(s > 0.0 && s.is_finite())) {
        return Err(Error::InvalidScales("scales must be positive and finite".into()));
    }
    if scales.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidScales("scales must be strictly decreasing".into()));
    }
    Ok(())
}

/// For each side `δ`, the maximum of `c²(μ⌊Q)/μ(Q)` over the origin-anchored
/// lattice cubes of side `δ` holding at least one atom.
pub fn curvature_ratio_scan(mu: &DiscreteMeasure, scales: &[f64]) -> Result<Vec<RatioEntry>> {
    curvature_ratio_scan_with(mu, scales, 1)
}

/// As [`curvature_ratio_scan`], skipping cubes with fewer than `min_atoms` atoms.
pub fn curvature_ratio_scan_with(
    mu: &DiscreteMeasure,
    scales: &[f64],
    min_atoms: usize,
) -> Result<Vec<RatioEntry>> {
    require_planar(mu.dim())?;
    if mu.is_empty() {
        return Err(Error::EmptyMeasure);
    }
    validate_scales(scales)?;
    Ok(scales
        .iter()
        .map(|&scale| {
            let cells = occupied_cells(mu, scale, LatticeShift::Origin);
            let mut max_ratio = 0.0f64;
            let mut cubes = 0;
            for cell in cells.iter().filter(|c| c.atoms.len() >= min_atoms.max(1)) {
                cubes += 1;
                max_ratio = max_ratio.max(c2_of_subset(mu, &cell.atoms) / cell.mass);
            }
            RatioEntry {
                scale,
                max_ratio,
                cubes,
            }
        })
        .collect())
}

/// Triple evaluations a [`curvature_ratio_scan`] would perform.
pub fn scan_cost(mu: &DiscreteMeasure, scales: &[f64]) -> u64 {
    scales
        .iter()
        .map(|&s| {
            occupied_cells(mu, s, LatticeShift::Origin)
                .iter()
                .map(|c| ordered_triples(c.atoms.len()) / 6)
                .sum::<u64>()
        })
        .sum()
}
