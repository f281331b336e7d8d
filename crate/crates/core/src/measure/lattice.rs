//! Origin-anchored cube lattices.
//!
//! Atoms are binned by `floor((x − offset) / δ)` per coordinate, which is the
//! half-open convention `[offset + jδ, offset + (j+1)δ)`. Binning never goes
//! through [`Cube::contains`], so every atom lands in exactly one cell even
//! when `δ` is not a power of two.

use std::collections::BTreeMap;

use super::{Cube, DiscreteMeasure, Point};
use crate::reduce::pairwise_sum;

/// Which copy of the lattice of side `δ` to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LatticeShift {
    /// Cells `[jδ, (j+1)δ)`.
    Origin,
    /// Cells shifted by `δ/2` in every coordinate.
    Half,
}

/// A nonempty lattice cell with its atoms (in increasing index order).
#[derive(Debug, Clone)]
pub struct LatticeCell {
    pub index: Vec<i64>,
    pub side: f64,
    pub offset: f64,
    pub atoms: Vec<usize>,
    pub mass: f64,
}

impl LatticeCell {
    pub fn cube(&self) -> Cube {
        let center = self
            .index
            .iter()
            .map(|&j| self.offset + (j as f64 + 0.5) * self.side)
            .collect();
        Cube::new(Point(center), self.side).expect("lattice side is positive")
    }
}

/// Nonempty cells of the lattice of side `side`, sorted by cell index.
pub fn occupied_cells(mu: &DiscreteMeasure, side: f64, shift: LatticeShift) -> Vec<LatticeCell> {
    let offset = match shift {
        LatticeShift::Origin => 0.0,
        LatticeShift::Half => side / 2.0,
    };
    let mut cells: BTreeMap<Vec<i64>, Vec<usize>> = BTreeMap::new();
    for (i, p) in mu.points().enumerate() {
        let index: Vec<i64> = p
            .iter()
            .map(|&x| ((x - offset) / side).floor() as i64)
            .collect();
        cells.entry(index).or_default().push(i);
    }
    cells
        .into_iter()
        .map(|(index, atoms)| {
            let w: Vec<f64> = atoms.iter().map(|&i| mu.weights()[i]).collect();
            LatticeCell {
                index,
                side,
                offset,
                mass: pairwise_sum(&w),
                atoms,
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cells_partition_atoms() {
        let pts: Vec<Point> = (0..50)
            .map(|i| Point::xy(0.013 * i as f64, (0.37 * i as f64).sin()))
            .collect();
        let mu = DiscreteMeasure::new(pts, vec![1.0; 50]).unwrap();
        for shift in [LatticeShift::Origin, LatticeShift::Half] {
            let cells = occupied_cells(&mu, 0.1, shift);
            let mut seen: Vec<usize> = cells.iter().flat_map(|c| c.atoms.clone()).collect();
            seen.sort_unstable();
            assert_eq!(seen, (0..50).collect::<Vec<_>>());
            let total: f64 = cells.iter().map(|c| c.mass).sum();
            assert_eq!(total, 50.0);
        }
    }

    #[test]
    fn dyadic_cells_agree_with_cube_membership() {
        let pts: Vec<Point> = (0..16)
            .map(|i| Point::xy((i % 4) as f64 * 0.25, (i / 4) as f64 * 0.25))
            .collect();
        let mu = DiscreteMeasure::new(pts, vec![1.0; 16]).unwrap();
        for cell in occupied_cells(&mu, 0.5, LatticeShift::Origin) {
            let cube = cell.cube();
            let inside: Vec<usize> = (0..16).filter(|&i| cube.contains(mu.point(i))).collect();
            assert_eq!(inside, cell.atoms);
        }
    }
}
