//! Independent reference implementations used by the integration tests.
#![allow(dead_code)]

use cauchylab::operator::OperatorMatrix;
use cauchylab::{DiscreteMeasure, Point};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Eigenvalues of a dense symmetric matrix (row-major) by cyclic Jacobi rotations.
pub fn jacobi_eigenvalues(mut a: Vec<f64>, n: usize) -> Vec<f64> {
    let frob: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    if frob == 0.0 {
        return vec![0.0; n];
    }
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j].powi(2))
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * frob {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i * n + i]).collect()
}

/// Largest singular value of `B = S K S` from the eigenvalues of `B*B`,
/// taken through its real symmetric embedding `[[Re, −Im], [Im, Re]]`.
pub fn svd_norm(t: &OperatorMatrix) -> f64 {
    let n = t.len();
    let nc = t.components();
    let k = t.to_dense_entries();
    let sw: Vec<f64> = t.weights().iter().map(|w| w.sqrt()).collect();
    let b = |row: usize, c: usize, col: usize| k[(row * n + col) * nc + c] * (sw[row] * sw[col]);
    let m = 2 * n;
    let mut g = vec![0.0; m * m];
    for j in 0..n {
        for l in 0..n {
            let mut acc = num_complex::Complex64::new(0.0, 0.0);
            for i in 0..n {
                for c in 0..nc {
                    acc += b(i, c, j).conj() * b(i, c, l);
                }
            }
            g[j * m + l] = acc.re;
            g[(j + n) * m + (l + n)] = acc.re;
            g[j * m + (l + n)] = -acc.im;
            g[(j + n) * m + l] = acc.im;
        }
    }
    let top = jacobi_eigenvalues(g, m).into_iter().fold(0.0f64, f64::max);
    top.max(0.0).sqrt()
}

/// `1/R²` from the side lengths via Kahan's stable Heron formula.
pub fn heron_inv_r2(p: &[f64], q: &[f64], r: &[f64]) -> f64 {
    let d = |u: &[f64], v: &[f64]| ((u[0] - v[0]).powi(2) + (u[1] - v[1]).powi(2)).sqrt();
    let mut s = [d(p, q), d(q, r), d(p, r)];
    s.sort_by(|x, y| y.total_cmp(x));
    let [a, b, c] = s;
    let prod = (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c));
    if prod <= 0.0 {
        return 0.0;
    }
    let area = 0.25 * prod.sqrt();
    let inv_r = 4.0 * area / (a * b * c);
    inv_r * inv_r
}

/// `c²(μ)` over ordered triples, innermost index first, sequential.
pub fn brute_c2(mu: &DiscreteMeasure) -> f64 {
    let n = mu.len();
    let w = mu.weights();
    let mut total = 0.0;
    for k in (0..n).rev() {
        for j in (0..n).rev() {
            if j == k {
                continue;
            }
            for i in (0..n).rev() {
                if i == j || i == k {
                    continue;
                }
                total += heron_inv_r2(mu.point(i), mu.point(j), mu.point(k)) * w[i] * w[j] * w[k];
            }
        }
    }
    total
}

/// `n` random atoms in the unit square with weights in `[0.1, 2)`.
pub fn random_measure(seed: u64, n: usize) -> DiscreteMeasure {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = (0..n)
        .map(|_| Point::xy(rng.gen::<f64>(), rng.gen::<f64>()))
        .collect();
    let weights = (0..n).map(|_| rng.gen_range(0.1..2.0)).collect();
    DiscreteMeasure::new(points, weights).expect("distinct random points")
}

pub fn dyadic(from: i32, to: i32) -> Vec<f64> {
    (from..=to).map(|k| 0.5f64.powi(k)).collect()
}

/// Relative difference; infinite when either side is not finite.
pub fn rel(a: f64, b: f64) -> f64 {
    if !(a.is_finite() && b.is_finite()) {
        return f64::INFINITY;
    }
    let s = a.abs().max(b.abs());
    if s == 0.0 {
        0.0
    } else {
        (a - b).abs() / s
    }
}
