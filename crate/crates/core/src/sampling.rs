//! Seeded random samplers shared by the batch checks.

use std::f64::consts::TAU;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::scalar::Matrix;

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rotation(t: f64) -> Matrix {
    let (s, c) = t.sin_cos();
    Matrix::from_rows(vec![vec![c, s], vec![-s, c]]).expect("2x2")
}

/// `rot(θ)·diag(eᵗ, e⁻ᵗ)·[[1,u],[0,1]]` with θ ∈ [0, 2π), t ∈ [−1, 1], u ∈ [−2, 2].
pub fn sample_sl2<R: Rng + ?Sized>(rng: &mut R) -> Matrix {
    let theta = rng.random_range(0.0..TAU);
    let t: f64 = rng.random_range(-1.0..1.0);
    let u = rng.random_range(-2.0..2.0);
    let a = Matrix::diag(&[t.exp(), (-t).exp()]);
    let n = Matrix::from_rows(vec![vec![1.0, u], vec![0.0, 1.0]]).expect("2x2");
    &(&rotation(theta) * &a) * &n
}

/// Random element of SL(n,ℝ) built from a random rotation-like orthogonal
/// factor, a positive diagonal and an upper unipotent factor.
pub fn sample_sln<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Matrix {
    let mut k = Matrix::identity(n);
    for i in 0..n {
        for j in i + 1..n {
            let (s, c) = rng.random_range(0.0..TAU).sin_cos();
            let mut g = Matrix::identity(n);
            g[(i, i)] = c;
            g[(j, j)] = c;
            g[(i, j)] = s;
            g[(j, i)] = -s;
            k = &k * &g;
        }
    }
    let mut logs: Vec<f64> = (0..n).map(|_| rng.random_range(-0.8..0.8)).collect();
    let mean = logs.iter().sum::<f64>() / n as f64;
    logs.iter_mut().for_each(|l| *l -= mean);
    let a = Matrix::diag(&logs.iter().map(|l| l.exp()).collect::<Vec<_>>());
    let nn = Matrix::from_fn(n, n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Equal => 1.0,
        std::cmp::Ordering::Less => rng.random_range(-1.5..1.5),
        std::cmp::Ordering::Greater => 0.0,
    });
    &(&k * &a) * &nn
}
