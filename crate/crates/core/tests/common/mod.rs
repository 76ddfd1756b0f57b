#![allow(dead_code)]

use eigenseq::complexmat::c;
use eigenseq::{Matrix, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the phases
/// of R's diagonal pushed back into Q.
pub fn haar_unitary(rng: &mut impl Rng, n: usize) -> Matrix {
    let mut cols: Vec<Vec<C64>> = (0..n)
        .map(|_| {
            (0..n)
                .map(|_| c(rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal)))
                .collect()
        })
        .collect();
    for j in 0..n {
        for i in 0..j {
            let (done, rest) = cols.split_at_mut(j);
            let q = &done[i];
            let r: C64 = q.iter().zip(&rest[0]).map(|(a, b)| a.conj() * b).sum();
            for (x, y) in rest[0].iter_mut().zip(q) {
                *x -= r * y;
            }
        }
        let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for x in cols[j].iter_mut() {
            *x /= norm;
        }
    }
    Matrix::from_columns(&cols)
}

pub fn random_phase(rng: &mut impl Rng) -> f64 {
    rng.random_range(0.0..std::f64::consts::TAU)
}

/// exp(A) by scaling and squaring with a truncated Taylor series.
pub fn expm(a: &Matrix) -> Matrix {
    let n = a.dim();
    let norm = eigenseq::hs_norm(a);
    let s = if norm > 0.5 { (norm / 0.5).log2().ceil() as i32 } else { 0 };
    let scaled = a.scale(c(0.5f64.powi(s), 0.0));
    let mut term = Matrix::identity(n);
    let mut sum = Matrix::identity(n);
    for k in 1..=30 {
        term = (&term * &scaled).scale(c(1.0 / k as f64, 0.0));
        sum = &sum + &term;
    }
    for _ in 0..s {
        sum = &sum * &sum;
    }
    sum
}

/// min over a uniform φ-grid of ‖e^{iφ}U − V‖ / √(2n).
pub fn grid_distance(u: &Matrix, v: &Matrix, points: usize) -> f64 {
    let n = u.dim() as f64;
    (0..points)
        .map(|k| {
            let phi = std::f64::consts::TAU * k as f64 / points as f64;
            eigenseq::hs_distance(&u.scale(C64::from_polar(1.0, phi)), v).unwrap()
        })
        .fold(f64::INFINITY, f64::min)
        / (2.0 * n).sqrt()
}

pub fn max_diff(a: &Matrix, b: &Matrix) -> f64 {
    a.max_abs_diff(b)
}
