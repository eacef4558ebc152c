//! Independent checks of the engine: random-matrix Monte Carlo for `μ^⊞n`,
//! Kolmogorov–Smirnov distances and closed-form reference laws.

mod reference;

pub use reference::ReferenceLaw;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::{AtomicMeasure, Error, Result};

pub const MIN_DIM: usize = 50;

/// Sorted sample with its right-continuous distribution function.
#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalCdf {
    samples: Vec<f64>,
}

impl EmpiricalCdf {
    /// `None` for an empty sample.
    pub fn new(mut samples: Vec<f64>) -> Option<Self> {
        if samples.is_empty() {
            return None;
        }
        samples.sort_by(f64::total_cmp);
        Some(EmpiricalCdf { samples })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn count(&self) -> usize {
        self.samples.len()
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.samples.partition_point(|&s| s <= x) as f64 / self.count() as f64
    }
}

/// Haar-distributed orthogonal matrix: QR of a Gaussian matrix with the signs
/// of `diag(R)` moved into `Q`.
pub fn haar_orthogonal<R: Rng>(dim: usize, rng: &mut R) -> DMatrix<f64> {
    let g = DMatrix::from_fn(dim, dim, |_, _| rng.sample::<f64, _>(StandardNormal));
    let qr = g.qr();
    let r = qr.r();
    let mut q = qr.q();
    for k in 0..dim {
        if r[(k, k)] < 0.0 {
            q.column_mut(k).neg_mut();
        }
    }
    q
}

fn sample_atoms<R: Rng>(cumulative: &[f64], positions: &[f64], rng: &mut R) -> f64 {
    let u = rng.random::<f64>() * cumulative[cumulative.len() - 1];
    let i = cumulative
        .partition_point(|&c| c <= u)
        .min(positions.len() - 1);
    positions[i]
}

/// Eigenvalues of `Σ_k Q_k D_k Q_kᵀ` over `trials` independent draws, where the
/// `D_k` are `dim × dim` diagonal with i.i.d. `μ` entries and the `Q_k` are
/// independent Haar orthogonal. Trial `i` uses seed `seed + i`.
pub fn rmt_sample(
    mu: &AtomicMeasure,
    n: usize,
    dim: usize,
    trials: usize,
    seed: u64,
) -> Result<EmpiricalCdf> {
    if dim < MIN_DIM {
        return Err(Error::BadDimension(dim));
    }
    if n < 2 || trials == 0 {
        return Err(Error::InvalidParameter(format!(
            "need n >= 2 and trials >= 1, got n={n}, trials={trials}"
        )));
    }
    if mu.is_empty() {
        return Err(Error::EmptyMeasure);
    }
    let positions: Vec<f64> = mu.positions().collect();
    let cumulative: Vec<f64> = mu
        .atoms()
        .iter()
        .scan(0.0, |acc, a| {
            *acc += a.mass;
            Some(*acc)
        })
        .collect();

    let mut eigenvalues = Vec::with_capacity(dim * trials);
    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(trial as u64));
        let mut sum = DMatrix::<f64>::zeros(dim, dim);
        for _ in 0..n {
            let diag: Vec<f64> = (0..dim)
                .map(|_| sample_atoms(&cumulative, &positions, &mut rng))
                .collect();
            let q = haar_orthogonal(dim, &mut rng);
            let mut qd = q.clone();
            for (k, d) in diag.iter().enumerate() {
                qd.column_mut(k).scale_mut(*d);
            }
            sum.gemm(1.0, &qd, &q.transpose(), 1.0);
        }
        // rounding leaves sum a hair off symmetric; use the lower triangle
        eigenvalues.extend(sum.symmetric_eigenvalues().iter());
    }
    Ok(EmpiricalCdf::new(eigenvalues).expect("dim * trials > 0"))
}

/// `sup_x |F_emp(x) − F(x)|`, checking both sides of every jump of `F_emp`.
///
/// `cdf` is taken right-continuous, so an empirical jump that coincides with a
/// jump of `cdf` contributes nothing.
pub fn ks_distance<F: Fn(f64) -> f64>(emp: &EmpiricalCdf, cdf: F) -> f64 {
    let s = emp.samples();
    let n = s.len() as f64;
    let mut d: f64 = 0.0;
    let mut i = 0;
    while i < s.len() {
        let x = s[i];
        let j = i + s[i..].partition_point(|&v| v <= x);
        d = d
            .max((j as f64 / n - cdf(x)).abs())
            .max((i as f64 / n - cdf(x.next_down())).abs());
        i = j;
    }
    d
}
