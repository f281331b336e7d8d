//! Cube densities `Θⁿ_μ(Q) = μ(Q)/l(Q)ⁿ`, multiscale density profiles, the
//! empirical linear-growth constant and the cube-splitting search used in the
//! necessity argument.

use serde::Serialize;

use crate::curvature::validate_scales;
use crate::error::{Error, Result};
use crate::measure::lattice::{occupied_cells, LatticeShift};
use crate::measure::{Cube, DiscreteMeasure, Point};
use crate::reduce::pairwise_sum;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DensityEntry {
    pub scale: f64,
    pub sup_density: f64,
}

/// Sup of `Θⁿ_μ` over the nonempty lattice cubes of each probed side.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityProfile {
    pub exponent: u32,
    pub entries: Vec<DensityEntry>,
}

impl DensityProfile {
    pub fn coarsest(&self) -> Option<f64> {
        self.entries.first().map(|e| e.sup_density)
    }

    pub fn finest(&self) -> Option<f64> {
        self.entries.last().map(|e| e.sup_density)
    }

    /// `scale,sup_density` rows with a header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("scale,sup_density\n");
        for e in &self.entries {
            out.push_str(&format!("{:.16e},{:.16e}\n", e.scale, e.sup_density));
        }
        out
    }
}

fn check_exponent(n: u32) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter("density exponent must be >= 1".into()));
    }
    Ok(())
}

/// `Θⁿ_μ(Q) = μ(Q) / l(Q)ⁿ`.
pub fn theta(mu: &DiscreteMeasure, cube: &Cube, n: u32) -> Result<f64> {
    check_exponent(n)?;
    if cube.dim() != mu.dim() {
        return Err(Error::DimensionError {
            required: mu.dim(),
            found: cube.dim(),
        });
    }
    Ok(mu.mass_in(cube)? / cube.side().powi(n as i32))
}

/// Two-lattice profile: for each side `δ` the sup over the origin-anchored
/// lattice and the lattice shifted by `δ/2`. Every cube of side `δ/2`
/// centered at an atom lies inside one of the enumerated cubes.
pub fn density_profile(mu: &DiscreteMeasure, scales: &[f64], n: u32) -> Result<DensityProfile> {
    density_profile_with(mu, scales, n, &[LatticeShift::Origin, LatticeShift::Half])
}

/// Profile over an explicit set of lattice copies.
pub fn density_profile_with(
    mu: &DiscreteMeasure,
    scales: &[f64],
    n: u32,
    shifts: &[LatticeShift],
) -> Result<DensityProfile> {
    check_exponent(n)?;
    validate_scales(scales)?;
    let entries = scales
        .iter()
        .map(|&scale| {
            let max_mass = shifts
                .iter()
                .flat_map(|&shift| occupied_cells(mu, scale, shift))
                .map(|c| c.mass)
                .fold(0.0, f64::max);
            DensityEntry {
                scale,
                sup_density: max_mass / scale.powi(n as i32),
            }
        })
        .collect();
    Ok(DensityProfile { exponent: n, entries })
}

/// Empirical `C₀` in `μ(Q) ≤ C₀ l(Q)`: the largest linear density over the
/// probed scales and the closed bounding cube of the support.
pub fn growth_constant(mu: &DiscreteMeasure, scales: &[f64]) -> Result<f64> {
    let profile = density_profile(mu, scales, 1)?;
    let lattice = profile
        .entries
        .iter()
        .map(|e| e.sup_density)
        .fold(0.0, f64::max);
    let extent = mu.extent();
    let whole = if extent > 0.0 {
        mu.total_mass() / extent
    } else {
        0.0
    };
    Ok(lattice.max(whole))
}

/// Split `Q` into the `c1^d` grid of subcubes of side `l(Q)/c1` and return the
/// first pair, in lexicographic grid order, of non-touching cells (grid
/// distance ≥ one cell side) whose masses are both at least `l(Q)/c1p`.
pub fn find_separated_pair(
    mu: &DiscreteMeasure,
    q: &Cube,
    c1: usize,
    c1p: f64,
) -> Result<Option<(Cube, Cube)>> {
    if q.dim() != mu.dim() {
        return Err(Error::DimensionError {
            required: mu.dim(),
            found: q.dim(),
        });
    }
    if c1 < 3 {
        return Err(Error::InvalidParameter(format!("C1 = {c1} must be at least 3")));
    }
    if !(c1p > 0.0 && c1p.is_finite()) {
        return Err(Error::InvalidParameter(format!("C1' = {c1p} must be positive")));
    }
    let d = mu.dim();
    let cells = c1
        .checked_pow(d as u32)
        .ok_or_else(|| Error::InvalidParameter("grid too large".into()))?;
    let lower = q.lower();
    let sub = q.side() / c1 as f64;

    let mut weights: Vec<Vec<f64>> = vec![Vec::new(); cells];
    for (p, &w) in mu.points().zip(mu.weights()) {
        if !q.contains(p) {
            continue;
        }
        let mut linear = 0;
        for k in 0..d {
            let idx = (((p[k] - lower[k]) / sub).floor().max(0.0) as usize).min(c1 - 1);
            linear = linear * c1 + idx;
        }
        weights[linear].push(w);
    }

    let threshold = q.side() / c1p;
    let heavy: Vec<usize> = (0..cells)
        .filter(|&c| !weights[c].is_empty() && pairwise_sum(&weights[c]) >= threshold)
        .collect();
    let unravel = |mut linear: usize| {
        let mut idx = vec![0usize; d];
        for k in (0..d).rev() {
            idx[k] = linear % c1;
            linear /= c1;
        }
        idx
    };
    let cube_of = |idx: &[usize]| {
        let center = (0..d)
            .map(|k| lower[k] + (idx[k] as f64 + 0.5) * sub)
            .collect();
        Cube::new(Point(center), sub).expect("positive side")
    };
    for (pos, &a) in heavy.iter().enumerate() {
        let ia = unravel(a);
        for &b in &heavy[pos + 1..] {
            let ib = unravel(b);
            let apart = ia.iter().zip(&ib).map(|(x, y)| x.abs_diff(*y)).max().unwrap_or(0);
            if apart >= 2 {
                return Ok(Some((cube_of(&ia), cube_of(&ib))));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::{generate_cantor, generate_segment, CantorSpec};

    fn grid(m: usize) -> DiscreteMeasure {
        // uniform mass-1 measure on the unit square
        generate_cantor(&CantorSpec::constant(0.5, m.trailing_zeros() as usize).unwrap())
            .unwrap()
            .measure
    }

    #[test]
    fn theta_basics() {
        let mu = grid(4);
        let unit = Cube::new(Point::xy(0.5, 0.5), 1.0).unwrap();
        assert_eq!(theta(&mu, &unit, 1).unwrap(), 1.0);
        let empty = Cube::new(Point::xy(5.0, 5.0), 1.0).unwrap();
        assert_eq!(theta(&mu, &empty, 1).unwrap(), 0.0);
        assert!(theta(&mu, &unit, 0).is_err());
    }

    #[test]
    fn cantor_quarter_generation_squares_have_unit_density() {
        let spec = CantorSpec::constant(0.25, 4).unwrap();
        let mu = generate_cantor(&spec).unwrap().measure;
        for k in 0..=4 {
            for q in spec.generation_squares(k).unwrap() {
                assert!((theta(&mu, &q, 1).unwrap() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn empty_scale_list() {
        let p = density_profile(&grid(4), &[], 1).unwrap();
        assert!(p.entries.is_empty());
    }

    #[test]
    fn segment_profile_is_flat() {
        let seg = generate_segment(0.0, 1.0, 1024).unwrap();
        let scales: Vec<f64> = (1..=8).map(|k| 0.5f64.powi(k)).collect();
        let p = density_profile(&seg, &scales, 1).unwrap();
        for e in &p.entries {
            assert!((1.0..=2.0).contains(&e.sup_density), "{e:?}");
        }
        let c0 = growth_constant(&seg, &scales).unwrap();
        assert!((1.0..=2.0).contains(&c0));
    }

    #[test]
    fn growth_constant_of_two_atoms_at_coarse_scale() {
        let mu = DiscreteMeasure::new(vec![Point::xy(0.1, 0.1), Point::xy(0.3, 0.1)], vec![1.0, 2.0])
            .unwrap();
        // both atoms share the unit lattice cube; the bounding cube has side 0.2
        let c0 = growth_constant(&mu, &[1.0]).unwrap();
        assert!((c0 - 3.0 / 0.2).abs() < 1e-12);
        let c0_scaled = growth_constant(&mu.scale_weights(2.5).unwrap(), &[1.0]).unwrap();
        assert!((c0_scaled - 2.5 * c0).abs() <= 1e-14 * c0_scaled);
    }

    #[test]
    fn separated_pair_on_uniform_square() {
        let mu = grid(16);
        let q = Cube::new(Point::xy(0.5, 0.5), 1.0).unwrap();
        let (a, b) = find_separated_pair(&mu, &q, 4, 16.0).unwrap().expect("pair");
        assert_eq!(a.center().coords(), &[0.125, 0.125]);
        assert_eq!(b.center().coords(), &[0.125, 0.625]);
        assert!(a.distance(&b) >= 0.25);
        assert!(mu.mass_in(&a).unwrap() >= 1.0 / 16.0);
    }

    #[test]
    fn separated_pair_absent_for_concentrated_mass() {
        let mu = DiscreteMeasure::new(
            vec![Point::xy(0.01, 0.01), Point::xy(0.02, 0.02)],
            vec![1.0, 1.0],
        )
        .unwrap();
        let q = Cube::new(Point::xy(0.5, 0.5), 1.0).unwrap();
        assert!(find_separated_pair(&mu, &q, 4, 100.0).unwrap().is_none());
        let far = Cube::new(Point::xy(10.0, 10.0), 1.0).unwrap();
        assert!(find_separated_pair(&mu, &far, 4, 1.0).unwrap().is_none());
        assert!(find_separated_pair(&mu, &q, 2, 1.0).is_err());
    }
}
