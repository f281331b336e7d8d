use num_complex::Complex64;
use rayon::prelude::*;

use super::KernelId;
use crate::error::{Error, Result};
use crate::measure::{dist2, DiscreteMeasure};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Row blocks used by the adjoint product; fixed so the reduction order does
/// not depend on the thread count.
const ADJOINT_BLOCKS: usize = 32;

#[derive(Debug, Clone, PartialEq)]
enum Storage {
    /// Row-major `n × n × components`.
    Dense(Vec<Complex64>),
    /// Compressed rows; `vals` holds `components` values per stored entry.
    Sparse {
        row_ptr: Vec<usize>,
        cols: Vec<u32>,
        vals: Vec<Complex64>,
    },
}

/// Kernel values `K(x_i, x_j)` of a truncated operator together with the
/// measure weights. The operator acts on `f ∈ L²(μ)` as
/// `(Tf)_i = Σ_j K(x_i, x_j) f_j w_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    kernel: KernelId,
    epsilon: f64,
    n: usize,
    storage: Storage,
    weights: Vec<f64>,
}

/// Full truncated matrix: entries for `i ≠ j` with `|x_i − x_j| > eps`.
/// `eps = 0` keeps every off-diagonal pair.
pub fn build_truncated(mu: &DiscreteMeasure, kernel: KernelId, eps: f64) -> Result<OperatorMatrix> {
    if !(eps >= 0.0) {
        return Err(Error::InvalidParameter(format!("truncation radius {eps}")));
    }
    kernel.check_dim(mu.dim())?;
    let n = mu.len();
    let nc = kernel.components();
    let eps2 = eps * eps;
    let mut data = vec![ZERO; n * n * nc];
    data.par_chunks_mut(n * nc)
        .enumerate()
        .for_each(|(i, row)| {
            let z = mu.point(i);
            for j in 0..n {
                if j == i {
                    continue;
                }
                let w = mu.point(j);
                if dist2(z, w) > eps2 {
                    kernel.eval_into(z, w, &mut row[j * nc..(j + 1) * nc]);
                }
            }
        });
    Ok(OperatorMatrix {
        kernel,
        epsilon: eps,
        n,
        storage: Storage::Dense(data),
        weights: mu.weights().to_vec(),
    })
}

/// Sparse matrix holding the pairs with `eps1 < |x_i − x_j| ≤ eps2`; this is
/// `build_truncated(eps1) − build_truncated(eps2)` entry for entry.
/// `eps2 = ∞` is allowed.
pub fn build_band(
    mu: &DiscreteMeasure,
    kernel: KernelId,
    eps1: f64,
    eps2: f64,
) -> Result<OperatorMatrix> {
    if !(eps1 >= 0.0 && eps1 <= eps2) {
        return Err(Error::InvalidRange(format!("band ({eps1}, {eps2}]")));
    }
    let (lo, hi) = (eps1 * eps1, eps2 * eps2);
    let mut m = build_masked(mu, kernel, |i, j| {
        let d = dist2(mu.point(i), mu.point(j));
        d > lo && d <= hi
    })?;
    m.epsilon = eps1;
    Ok(m)
}

/// Sparse matrix with the off-diagonal pairs selected by `keep(i, j)`.
pub(crate) fn build_masked<F>(mu: &DiscreteMeasure, kernel: KernelId, keep: F) -> Result<OperatorMatrix>
where
    F: Fn(usize, usize) -> bool + Sync,
{
    kernel.check_dim(mu.dim())?;
    let n = mu.len();
    if n > u32::MAX as usize {
        return Err(Error::InvalidParameter("too many atoms for sparse storage".into()));
    }
    let nc = kernel.components();
    let rows: Vec<(Vec<u32>, Vec<Complex64>)> = (0..n)
        .into_par_iter()
        .map(|i| {
            let z = mu.point(i);
            let mut cols = Vec::new();
            let mut vals = Vec::new();
            let mut buf = vec![ZERO; nc];
            for j in 0..n {
                if j != i && keep(i, j) {
                    kernel.eval_into(z, mu.point(j), &mut buf);
                    cols.push(j as u32);
                    vals.extend_from_slice(&buf);
                }
            }
            (cols, vals)
        })
        .collect();
    let mut row_ptr = Vec::with_capacity(n + 1);
    row_ptr.push(0);
    let nnz: usize = rows.iter().map(|r| r.0.len()).sum();
    let mut cols = Vec::with_capacity(nnz);
    let mut vals = Vec::with_capacity(nnz * nc);
    for (c, v) in rows {
        cols.extend(c);
        vals.extend(v);
        row_ptr.push(cols.len());
    }
    Ok(OperatorMatrix {
        kernel,
        epsilon: 0.0,
        n,
        storage: Storage::Sparse { row_ptr, cols, vals },
        weights: mu.weights().to_vec(),
    })
}

impl OperatorMatrix {
    pub fn kernel(&self) -> KernelId {
        self.kernel
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Number of atoms.
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn components(&self) -> usize {
        self.kernel.components()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Stored entries (all `n²` for dense storage).
    pub fn stored_entries(&self) -> usize {
        match &self.storage {
            Storage::Dense(_) => self.n * self.n,
            Storage::Sparse { cols, .. } => cols.len(),
        }
    }

    /// Component `c` of the entry `(i, j)`.
    pub fn entry(&self, i: usize, j: usize, c: usize) -> Complex64 {
        let nc = self.components();
        match &self.storage {
            Storage::Dense(data) => data[(i * self.n + j) * nc + c],
            Storage::Sparse { row_ptr, cols, vals } => {
                let range = row_ptr[i]..row_ptr[i + 1];
                match cols[range.clone()].binary_search(&(j as u32)) {
                    Ok(pos) => vals[(range.start + pos) * nc + c],
                    Err(_) => ZERO,
                }
            }
        }
    }

    /// Dense copy of the entries, row-major `n × n × components`.
    pub fn to_dense_entries(&self) -> Vec<Complex64> {
        let nc = self.components();
        match &self.storage {
            Storage::Dense(data) => data.clone(),
            Storage::Sparse { row_ptr, cols, vals } => {
                let mut out = vec![ZERO; self.n * self.n * nc];
                for i in 0..self.n {
                    for p in row_ptr[i]..row_ptr[i + 1] {
                        let j = cols[p] as usize;
                        out[(i * self.n + j) * nc..(i * self.n + j + 1) * nc]
                            .copy_from_slice(&vals[p * nc..(p + 1) * nc]);
                    }
                }
                out
            }
        }
    }

    fn same_shape(&self, other: &OperatorMatrix) -> Result<()> {
        if self.n != other.n || self.kernel != other.kernel || self.weights != other.weights {
            return Err(Error::InvalidParameter(
                "operators act on different measures or kernels".into(),
            ));
        }
        Ok(())
    }

    /// Entrywise sum, stored densely.
    pub fn add(&self, other: &OperatorMatrix) -> Result<OperatorMatrix> {
        self.combine(other, |a, b| a + b)
    }

    /// Entrywise difference, stored densely.
    pub fn sub(&self, other: &OperatorMatrix) -> Result<OperatorMatrix> {
        self.combine(other, |a, b| a - b)
    }

    fn combine(
        &self,
        other: &OperatorMatrix,
        op: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<OperatorMatrix> {
        self.same_shape(other)?;
        let a = self.to_dense_entries();
        let b = other.to_dense_entries();
        let data = a.iter().zip(&b).map(|(&x, &y)| op(x, y)).collect();
        Ok(OperatorMatrix {
            kernel: self.kernel,
            epsilon: self.epsilon.min(other.epsilon),
            n: self.n,
            storage: Storage::Dense(data),
            weights: self.weights.clone(),
        })
    }

    /// Zero operator with the same kernel and weights.
    pub fn zeros_like(&self) -> OperatorMatrix {
        OperatorMatrix {
            kernel: self.kernel,
            epsilon: self.epsilon,
            n: self.n,
            storage: Storage::Sparse {
                row_ptr: vec![0; self.n + 1],
                cols: Vec::new(),
                vals: Vec::new(),
            },
            weights: self.weights.clone(),
        }
    }

    /// `(Tf)_{i,c} = Σ_j K_c(x_i, x_j) f_j w_j`; the result has
    /// `len() · components()` entries, row-major.
    pub fn apply(&self, f: &[Complex64]) -> Result<Vec<Complex64>> {
        if f.len() != self.n {
            return Err(Error::LengthMismatch {
                points: self.n,
                weights: f.len(),
            });
        }
        let fw: Vec<Complex64> = f.iter().zip(&self.weights).map(|(v, w)| v * w).collect();
        Ok(self.kernel_mul(&fw))
    }

    /// `y = K x` (no weights).
    pub(crate) fn kernel_mul(&self, x: &[Complex64]) -> Vec<Complex64> {
        let n = self.n;
        let nc = self.components();
        let mut out = vec![ZERO; n * nc];
        match &self.storage {
            Storage::Dense(data) => {
                out.par_chunks_mut(nc).enumerate().for_each(|(i, o)| {
                    let row = &data[i * n * nc..(i + 1) * n * nc];
                    for c in 0..nc {
                        let mut acc = ZERO;
                        for (j, xj) in x.iter().enumerate() {
                            acc += row[j * nc + c] * xj;
                        }
                        o[c] = acc;
                    }
                });
            }
            Storage::Sparse { row_ptr, cols, vals } => {
                out.par_chunks_mut(nc).enumerate().for_each(|(i, o)| {
                    for c in 0..nc {
                        let mut acc = ZERO;
                        for p in row_ptr[i]..row_ptr[i + 1] {
                            acc += vals[p * nc + c] * x[cols[p] as usize];
                        }
                        o[c] = acc;
                    }
                });
            }
        }
        out
    }

    /// `x = K* y` (conjugate transpose, no weights).
    pub(crate) fn kernel_adjoint_mul(&self, y: &[Complex64]) -> Vec<Complex64> {
        let n = self.n;
        let nc = self.components();
        let block = n.div_ceil(ADJOINT_BLOCKS).max(1);
        let partials: Vec<Vec<Complex64>> = (0..n.div_ceil(block))
            .into_par_iter()
            .map(|b| {
                let mut acc = vec![ZERO; n];
                for i in b * block..((b + 1) * block).min(n) {
                    let yi = &y[i * nc..(i + 1) * nc];
                    match &self.storage {
                        Storage::Dense(data) => {
                            let row = &data[i * n * nc..(i + 1) * n * nc];
                            for (j, a) in acc.iter_mut().enumerate() {
                                for c in 0..nc {
                                    *a += row[j * nc + c].conj() * yi[c];
                                }
                            }
                        }
                        Storage::Sparse { row_ptr, cols, vals } => {
                            for p in row_ptr[i]..row_ptr[i + 1] {
                                let a = &mut acc[cols[p] as usize];
                                for c in 0..nc {
                                    *a += vals[p * nc + c].conj() * yi[c];
                                }
                            }
                        }
                    }
                }
                acc
            })
            .collect();
        let mut out = vec![ZERO; n];
        for part in &partials {
            for (o, p) in out.iter_mut().zip(part) {
                *o += p;
            }
        }
        out
    }

    /// `‖g‖_{L²(μ)}` for a vector in the range layout (`components()` values per atom).
    pub fn l2_norm_range(&self, g: &[Complex64]) -> f64 {
        let nc = self.components();
        g.chunks_exact(nc)
            .zip(&self.weights)
            .map(|(gi, w)| gi.iter().map(|v| v.norm_sqr()).sum::<f64>() * w)
            .sum::<f64>()
            .sqrt()
    }

    /// `‖f‖_{L²(μ)}` for a vector on the atoms.
    pub fn l2_norm_domain(&self, f: &[Complex64]) -> f64 {
        f.iter()
            .zip(&self.weights)
            .map(|(v, w)| v.norm_sqr() * w)
            .sum::<f64>()
            .sqrt()
    }
}
