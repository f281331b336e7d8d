//! Discrete measures, axis-aligned cubes and the example generators.

mod generators;
pub(crate) mod io;
pub(crate) mod lattice;

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::reduce::pairwise_sum;

pub use generators::{
    generate_cantor, generate_circle, generate_disc, generate_segment, CantorApprox, CantorSpec,
    MAX_CANTOR_DEPTH,
};
pub use io::{load_measure, save_measure, MeasureFormat};
pub use lattice::{LatticeCell, LatticeShift};

/// A point of `ℝ^d`. In the plane the coordinates are read as `(Re z, Im z)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(pub Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Self {
        Point(coords)
    }

    pub fn xy(x: f64, y: f64) -> Self {
        Point(vec![x, y])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }
}

impl From<(f64, f64)> for Point {
    fn from((x, y): (f64, f64)) -> Self {
        Point::xy(x, y)
    }
}

/// A finite weighted point set with positive weights and pairwise distinct atoms.
///
/// Coordinates are stored flat (`dim` values per atom) so the hot loops of
/// the curvature and operator modules can stream over them.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteMeasure {
    dim: usize,
    coords: Vec<f64>,
    weights: Vec<f64>,
    total_mass: f64,
}

impl DiscreteMeasure {
    /// Validate and build a measure.
    pub fn new(points: Vec<Point>, weights: Vec<f64>) -> Result<Self> {
        if points.len() != weights.len() {
            return Err(Error::LengthMismatch {
                points: points.len(),
                weights: weights.len(),
            });
        }
        let dim = points.first().map(Point::dim).ok_or(Error::EmptyMeasure)?;
        let mut coords = Vec::with_capacity(points.len() * dim);
        for p in &points {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: p.dim(),
                });
            }
            coords.extend_from_slice(p.coords());
        }
        Self::from_flat(dim, coords, weights)
    }

    /// Build from flat coordinates (`dim` values per atom).
    pub fn from_flat(dim: usize, coords: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter("dimension must be at least 1".into()));
        }
        if coords.len() != dim * weights.len() {
            return Err(Error::LengthMismatch {
                points: coords.len() / dim,
                weights: weights.len(),
            });
        }
        if weights.is_empty() {
            return Err(Error::EmptyMeasure);
        }
        for (i, &w) in weights.iter().enumerate() {
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::NonpositiveWeight { index: i, value: w });
            }
        }
        for (i, p) in coords.chunks_exact(dim).enumerate() {
            if p.iter().any(|c| !c.is_finite()) {
                return Err(Error::NonFiniteCoordinate { index: i });
            }
        }
        let measure = Self::assemble(dim, coords, weights);
        measure.check_distinct()?;
        Ok(measure)
    }

    /// Skips validation; callers guarantee the invariants (sub-measures of a
    /// valid measure, generators with distinct atoms by construction).
    pub(crate) fn assemble(dim: usize, coords: Vec<f64>, weights: Vec<f64>) -> Self {
        let total_mass = pairwise_sum(&weights);
        DiscreteMeasure {
            dim,
            coords,
            weights,
            total_mass,
        }
    }

    fn check_distinct(&self) -> Result<()> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by(|&a, &b| {
            self.point(a)
                .partial_cmp(self.point(b))
                .unwrap_or(Ordering::Equal)
        });
        for pair in order.windows(2) {
            if self.point(pair[0]) == self.point(pair[1]) {
                let (first, second) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
                return Err(Error::DuplicatePoint { first, second });
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of atoms.
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn total_mass(&self) -> f64 {
        self.total_mass
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    /// Sub-measure on the given atom indices, in the given order.
    pub fn select(&self, indices: &[usize]) -> DiscreteMeasure {
        let mut coords = Vec::with_capacity(indices.len() * self.dim);
        let mut weights = Vec::with_capacity(indices.len());
        for &i in indices {
            coords.extend_from_slice(self.point(i));
            weights.push(self.weights[i]);
        }
        Self::assemble(self.dim, coords, weights)
    }

    /// The same atoms with every weight multiplied by `t > 0`.
    pub fn scale_weights(&self, t: f64) -> Result<DiscreteMeasure> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::InvalidParameter(format!("weight scale {t}")));
        }
        let weights = self.weights.iter().map(|w| w * t).collect();
        Ok(Self::assemble(self.dim, self.coords.clone(), weights))
    }

    /// Restriction `μ⌊Q`: atoms inside `cube` under its membership convention.
    /// The result may hold no atoms.
    pub fn restrict(&self, cube: &Cube) -> Result<DiscreteMeasure> {
        if cube.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: cube.dim(),
            });
        }
        let inside: Vec<usize> = (0..self.len())
            .filter(|&i| cube.contains(self.point(i)))
            .collect();
        Ok(self.select(&inside))
    }

    /// Mass of `μ⌊Q`.
    pub fn mass_in(&self, cube: &Cube) -> Result<f64> {
        Ok(self.restrict(cube)?.total_mass())
    }

    /// Per-coordinate `(min, max)` of the atoms.
    pub fn bounding_box(&self) -> Vec<(f64, f64)> {
        let mut bounds = vec![(f64::INFINITY, f64::NEG_INFINITY); self.dim];
        for p in self.points() {
            for (b, &c) in bounds.iter_mut().zip(p) {
                b.0 = b.0.min(c);
                b.1 = b.1.max(c);
            }
        }
        bounds
    }

    /// Largest per-coordinate extent `max_k (max x_k − min x_k)`.
    pub fn extent(&self) -> f64 {
        self.bounding_box()
            .iter()
            .map(|(lo, hi)| hi - lo)
            .fold(0.0, f64::max)
    }

    /// Euclidean diameter of the support (O(N²)).
    pub fn diameter(&self) -> f64 {
        let mut best = 0.0f64;
        for i in 0..self.len() {
            for j in (i + 1)..self.len() {
                best = best.max(dist2(self.point(i), self.point(j)));
            }
        }
        best.sqrt()
    }

    /// Smallest Euclidean distance between two distinct atoms (O(N²));
    /// `+∞` for a single atom.
    pub fn min_separation(&self) -> f64 {
        let mut best = f64::INFINITY;
        for i in 0..self.len() {
            for j in (i + 1)..self.len() {
                best = best.min(dist2(self.point(i), self.point(j)));
            }
        }
        best.sqrt()
    }
}

pub(crate) fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Boundary convention of a [`Cube`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Membership {
    /// `c_i − l/2 ≤ x_i < c_i + l/2`; lattices of such cubes count every atom once.
    HalfOpen,
    /// `c_i − l/2 ≤ x_i ≤ c_i + l/2`.
    Closed,
}

/// Axis-aligned cube with center and side length `l(Q)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cube {
    center: Point,
    side: f64,
    membership: Membership,
}

impl Cube {
    /// Half-open cube.
    pub fn new(center: Point, side: f64) -> Result<Self> {
        Self::with_membership(center, side, Membership::HalfOpen)
    }

    pub fn closed(center: Point, side: f64) -> Result<Self> {
        Self::with_membership(center, side, Membership::Closed)
    }

    pub fn with_membership(center: Point, side: f64, membership: Membership) -> Result<Self> {
        if !(side > 0.0 && side.is_finite()) {
            return Err(Error::InvalidParameter(format!("cube side {side}")));
        }
        if center.0.is_empty() || center.0.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter("cube center".into()));
        }
        Ok(Cube {
            center,
            side,
            membership,
        })
    }

    /// Half-open cube from its lower corner; the bounds are computed as
    /// `lower` and `lower + side`.
    pub fn from_lower(lower: &[f64], side: f64) -> Result<Self> {
        let center = lower.iter().map(|&c| c + side / 2.0).collect();
        Self::new(Point(center), side)
    }

    /// Smallest closed cube, centered on the bounding box, containing every atom.
    /// A single atom yields a cube of side `1`.
    pub fn bounding(mu: &DiscreteMeasure) -> Cube {
        let bounds = mu.bounding_box();
        let side = mu.extent();
        let side = if side > 0.0 { side } else { 1.0 };
        let center = bounds.iter().map(|(lo, hi)| 0.5 * (lo + hi)).collect();
        Cube {
            center: Point(center),
            side,
            membership: Membership::Closed,
        }
    }

    /// Half-open cube centered on the bounding box whose side is `factor`
    /// times the extent, so that squares of that side centered at any atom
    /// cover the support when `factor > 2`.
    pub fn enclosing(mu: &DiscreteMeasure, factor: f64) -> Result<Cube> {
        let bounding = Self::bounding(mu);
        Cube::new(bounding.center, bounding.side * factor)
    }

    pub fn dim(&self) -> usize {
        self.center.dim()
    }

    pub fn center(&self) -> &Point {
        &self.center
    }

    pub fn side(&self) -> f64 {
        self.side
    }

    pub fn membership(&self) -> Membership {
        self.membership
    }

    pub fn lower(&self) -> Vec<f64> {
        self.center.0.iter().map(|c| c - self.side / 2.0).collect()
    }

    pub fn upper(&self) -> Vec<f64> {
        self.center.0.iter().map(|c| c + self.side / 2.0).collect()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        let h = self.side / 2.0;
        self.center.0.iter().zip(x).all(|(&c, &xi)| {
            let lo = c - h;
            let hi = c + h;
            match self.membership {
                Membership::HalfOpen => lo <= xi && xi < hi,
                Membership::Closed => lo <= xi && xi <= hi,
            }
        })
    }

    /// The `2^d` half-open children of side `l/2`, ordered by quadrant index
    /// (bit `k` set means the upper half along axis `k`).
    pub fn dyadic_children(&self) -> Vec<Cube> {
        let d = self.dim();
        let q = self.side / 4.0;
        (0..1usize << d)
            .map(|mask| {
                let center = (0..d)
                    .map(|k| {
                        if mask >> k & 1 == 1 {
                            self.center.0[k] + q
                        } else {
                            self.center.0[k] - q
                        }
                    })
                    .collect();
                Cube {
                    center: Point(center),
                    side: self.side / 2.0,
                    membership: Membership::HalfOpen,
                }
            })
            .collect()
    }

    /// True when the interiors intersect (touching faces do not count).
    pub fn overlaps(&self, other: &Cube) -> bool {
        let reach = 0.5 * (self.side + other.side);
        self.center
            .0
            .iter()
            .zip(&other.center.0)
            .all(|(a, b)| (a - b).abs() < reach)
    }

    /// Euclidean distance between the closed cubes.
    pub fn distance(&self, other: &Cube) -> f64 {
        let reach = 0.5 * (self.side + other.side);
        self.center
            .0
            .iter()
            .zip(&other.center.0)
            .map(|(a, b)| ((a - b).abs() - reach).max(0.0).powi(2))
            .sum::<f64>()
            .sqrt()
    }
}
