#![allow(dead_code)]

use freeconv::{Atom, AtomicMeasure, Complex, MeasureModel, PowerResult};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn atomic(atoms: &[(f64, f64)]) -> AtomicMeasure {
    AtomicMeasure::new(atoms.iter().map(|&(x, w)| Atom::new(x, w))).unwrap()
}

pub fn model(atoms: &[(f64, f64)]) -> MeasureModel {
    MeasureModel::from_atomic(atomic(atoms))
}

pub fn bernoulli() -> MeasureModel {
    model(&[(-1.0, 0.5), (1.0, 0.5)])
}

/// `(ε/2)(δ_{-1} + δ_1) + (1 − ε)δ_0`
pub fn mu_eps(eps: f64) -> MeasureModel {
    model(&[(-1.0, eps / 2.0), (0.0, 1.0 - eps), (1.0, eps / 2.0)])
}

/// `ν = Σ_{n ≤ n_max} 2^{-n} δ_{2^n}`, renormalised.
pub fn dyadic_nu(n_max: i32) -> AtomicMeasure {
    let total: f64 = (1..=n_max).map(|n| 0.5f64.powi(n)).sum();
    AtomicMeasure::new((1..=n_max).map(|n| Atom::new(2f64.powi(n), 0.5f64.powi(n) / total)))
        .unwrap()
}

/// Probability measure with 2 to 8 atoms in `[-3, 3]`, at least 0.05 apart.
pub fn random_measure(rng: &mut ChaCha8Rng) -> MeasureModel {
    let k = rng.random_range(2..=8);
    let mut xs: Vec<f64> = Vec::with_capacity(k);
    while xs.len() < k {
        let x = rng.random_range(-3.0..3.0);
        if xs.iter().all(|&y: &f64| (x - y).abs() >= 0.05) {
            xs.push(x);
        }
    }
    let ws: Vec<f64> = (0..k).map(|_| rng.random_range(0.05..1.0)).collect();
    let total: f64 = ws.iter().sum();
    MeasureModel::from_atomic(
        AtomicMeasure::new(xs.iter().zip(&ws).map(|(&x, &w)| Atom::new(x, w / total))).unwrap(),
    )
}

pub fn random_measures(seed: u64, count: usize) -> Vec<MeasureModel> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_measure(&mut rng)).collect()
}

/// `n` points evenly spaced over `[lo, hi]`.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

/// `G_{μ^⊞t}(z)` from subordination: `ω = z + (t − 1)(F(ω) − ω)` by fixed-point
/// iteration, then `G = 1/F(ω)`. `F(ω) − ω` maps the upper half-plane into its
/// closure, so the iteration is a strict self-map of `{Im ω ≥ Im z}`.
pub fn subordination_cauchy(m: &MeasureModel, t: f64, z: Complex) -> Complex {
    let mut w = z;
    for _ in 0..20000 {
        let next = z + (t - 1.0) * (m.rep.eval_f(w).unwrap() - w);
        if (next - w).norm() < 1e-15 * (1.0 + w.norm()) {
            w = next;
            break;
        }
        w = next;
    }
    1.0 / m.rep.eval_f(w).unwrap()
}

/// `G(z)` of a computed power: atoms plus trapezoid quadrature of the density samples.
pub fn engine_cauchy(res: &PowerResult, z: Complex) -> Complex {
    let mut g: Complex = res.atoms.iter().map(|a| a.mass / (z - a.position)).sum();
    for w in res.density.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        g += 0.5 * (a.pdf / (z - a.u) + b.pdf / (z - b.u)) * (b.u - a.u);
    }
    g
}

/// Unit-variance semicircle sampled on a grid, renormalised so the trapezoid rule gives mass one.
pub fn semicircle_grid(points: usize) -> (Vec<f64>, Vec<f64>) {
    let xs = linspace(-2.0, 2.0, points);
    let pdf: Vec<f64> = xs
        .iter()
        .map(|x| (4.0 - x * x).max(0.0).sqrt() / (2.0 * std::f64::consts::PI))
        .collect();
    let mass: f64 = xs
        .windows(2)
        .zip(pdf.windows(2))
        .map(|(x, p)| 0.5 * (p[0] + p[1]) * (x[1] - x[0]))
        .sum();
    (xs, pdf.iter().map(|p| p / mass).collect())
}
