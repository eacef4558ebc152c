//! Nevanlinna representation of the reciprocal Cauchy transform.
//!
//! Every `F_μ = 1/G_μ` can be written as
//!
//! ```text
//! F(z) = a + z + Σ ρ_j (1 + s_j z) / (s_j − z)
//! ```
//!
//! with `a = Re F(i)` and a finite positive measure `ρ`. For atomic `μ` the
//! transform is rational and `ρ` sits exactly on the real zeros of `G_μ`, so
//! the representation is computed without quadrature.

use crate::measure::{check_grid, trapezoid, Atom, AtomicMeasure, ValidatedMeasure};
use crate::roots::{bisect, expand_until};
use crate::{Complex, Error, Result};

/// Which construction produced a representation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RepSource {
    /// Exact, from the zeros of `G_μ` of an atomic `μ`.
    Rational,
    /// From `F_μ(z) = z − G_ν(z)`.
    Maassen,
    /// Rational route applied to a discretized continuous input.
    Discretized,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NevanlinnaRep {
    pub a: f64,
    pub rho: AtomicMeasure,
    pub source: RepSource,
}

impl NevanlinnaRep {
    /// Representation of an atomic probability measure.
    ///
    /// `ρ` has mass `−1/((x₀² + 1) G'(x₀))` at each real zero `x₀` of `G_μ`.
    pub fn from_atomic(m: &AtomicMeasure) -> Self {
        if m.len() == 1 {
            // F = z − c exactly
            return NevanlinnaRep {
                a: -m.atoms()[0].position,
                rho: AtomicMeasure::empty(),
                source: RepSource::Rational,
            };
        }
        let rho = m.zeros_of_cauchy().into_iter().map(|x0| {
            let dg: f64 = -m
                .atoms()
                .iter()
                .map(|a| a.mass / (x0 - a.position).powi(2))
                .sum::<f64>();
            Atom::new(x0, -1.0 / ((x0 * x0 + 1.0) * dg))
        });
        let rho = AtomicMeasure::new(rho).expect("zeros are finite and masses positive");
        let g_i = m.cauchy_transform(Complex::i()).expect("i is never a pole");
        NevanlinnaRep {
            a: (1.0 / g_i).re,
            rho,
            source: RepSource::Rational,
        }
    }

    /// Representation for `F_μ(z) = z − G_ν(z)`: `(s² + 1) dρ(s) = dν(s)`.
    ///
    /// The constant is `a = Re F_μ(i) = Σ ρ_j s_j`, which vanishes for
    /// symmetric `ν`.
    pub fn from_nu(nu: &AtomicMeasure) -> Self {
        let rho = AtomicMeasure::new(
            nu.atoms()
                .iter()
                .map(|a| Atom::new(a.position, a.mass / (a.position * a.position + 1.0))),
        )
        .expect("ν atoms are valid");
        let a = rho.atoms().iter().map(|r| r.mass * r.position).sum();
        NevanlinnaRep {
            a,
            rho,
            source: RepSource::Maassen,
        }
    }

    /// `F(z)` from the representation, for `Im z ≥ 0`.
    pub fn eval_f(&self, z: Complex) -> Result<Complex> {
        if z.im == 0.0 && self.rho.positions().any(|s| s == z.re) {
            return Err(Error::PoleHit(z.re));
        }
        Ok(self.eval_f_unchecked(z))
    }

    pub(crate) fn eval_f_unchecked(&self, z: Complex) -> Complex {
        let sum: Complex = self
            .rho
            .atoms()
            .iter()
            .map(|r| r.mass * (1.0 + r.position * z) / (r.position - z))
            .sum();
        self.a + z + sum
    }

    pub(crate) fn eval_f_real(&self, x: f64) -> f64 {
        let sum: f64 = self
            .rho
            .atoms()
            .iter()
            .map(|r| r.mass * (1.0 + r.position * x) / (r.position - x))
            .sum();
        self.a + x + sum
    }

    /// `(s_j, ρ_j (s_j² + 1))` pairs, the weights behind `g` and `f_t`.
    pub(crate) fn weights(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.rho
            .atoms()
            .iter()
            .map(|r| (r.position, r.mass * (r.position * r.position + 1.0)))
    }

    /// Recovers the probability measure whose reciprocal Cauchy transform this is.
    ///
    /// With `k` atoms in `ρ`, `F` is increasing from `−∞` to `+∞` on each of
    /// the `k + 1` intervals cut out by them, so `μ` has exactly one atom `α`
    /// per interval, with mass `1/F'(α) = 1/(1 + g(α))`.
    pub fn measure(&self) -> AtomicMeasure {
        if self.rho.is_empty() {
            return AtomicMeasure::dirac(-self.a).expect("finite position");
        }
        let poles: Vec<f64> = self.rho.positions().collect();
        let f = |x: f64| self.eval_f_real(x);
        let first = poles[0];
        let last = poles[poles.len() - 1];
        let mut zeros = Vec::with_capacity(poles.len() + 1);
        let lo = expand_until(first, -1.0, 1.0, |x| f(x) < 0.0).expect("F → −∞ on the left");
        zeros.push(bisect(lo, first, true, 0.0, f));
        for w in poles.windows(2) {
            zeros.push(bisect(w[0], w[1], true, 0.0, f));
        }
        let hi = expand_until(last, 1.0, 1.0, |x| f(x) > 0.0).expect("F → +∞ on the right");
        zeros.push(bisect(last, hi, true, 0.0, f));
        let atoms = zeros.into_iter().map(|alpha| {
            let g: f64 = self.weights().map(|(s, w)| w / (s - alpha).powi(2)).sum();
            Atom::new(alpha, 1.0 / (1.0 + g))
        });
        AtomicMeasure::new(atoms).expect("recovered atoms are valid")
    }
}

/// Equal-mass quantile discretization of a piecewise-linear density.
///
/// The density is normalized by its trapezoid mass, cut into `n_atoms` slices
/// of mass `1/n_atoms` at its quantiles, and each slice is replaced by an atom
/// at its conditional mean. All integrals are exact for the piecewise-linear
/// interpolant.
pub fn discretize_continuous(xs: &[f64], pdf: &[f64], n_atoms: usize) -> Result<AtomicMeasure> {
    check_grid(xs, pdf)?;
    if n_atoms == 0 {
        return Err(Error::InvalidParameter("n_atoms must be positive".into()));
    }
    let total = trapezoid(xs, pdf);
    if total.is_nan() || total <= 0.0 {
        return Err(Error::DegenerateDensity("density has zero mass".into()));
    }
    let pw = PiecewiseLinear::new(xs, pdf, total);
    let n = n_atoms as f64;
    let mut bounds = Vec::with_capacity(n_atoms + 1);
    for k in 0..=n_atoms {
        bounds.push(pw.moment_at_quantile(k as f64 / n));
    }
    let positions: Vec<f64> = bounds.windows(2).map(|b| n * (b[1] - b[0])).collect();
    if positions
        .windows(2)
        .any(|p| p[0].partial_cmp(&p[1]) != Some(std::cmp::Ordering::Less))
    {
        return Err(Error::DegenerateDensity(format!(
            "cannot place {n_atoms} distinct quantile atoms"
        )));
    }
    AtomicMeasure::new(positions.into_iter().map(|x| Atom::new(x, 1.0 / n)))
}

struct PiecewiseLinear<'a> {
    xs: &'a [f64],
    pdf: &'a [f64],
    norm: f64,
    /// mass and first moment accumulated up to each grid point
    cum_mass: Vec<f64>,
    cum_moment: Vec<f64>,
}

impl<'a> PiecewiseLinear<'a> {
    fn new(xs: &'a [f64], pdf: &'a [f64], norm: f64) -> Self {
        let mut pw = PiecewiseLinear {
            xs,
            pdf,
            norm,
            cum_mass: vec![0.0],
            cum_moment: vec![0.0],
        };
        for i in 0..xs.len() - 1 {
            let h = xs[i + 1] - xs[i];
            let (m, mom) = pw.partial(i, h);
            pw.cum_mass.push(pw.cum_mass[i] + m);
            pw.cum_moment.push(pw.cum_moment[i] + mom);
        }
        pw
    }

    /// Mass and first moment of segment `i` over `[x_i, x_i + u]`.
    fn partial(&self, i: usize, u: f64) -> (f64, f64) {
        let h = self.xs[i + 1] - self.xs[i];
        let p0 = self.pdf[i] / self.norm;
        let dp = (self.pdf[i + 1] - self.pdf[i]) / self.norm;
        let mass = p0 * u + dp * u * u / (2.0 * h);
        let moment = self.xs[i] * mass + p0 * u * u / 2.0 + dp * u * u * u / (3.0 * h);
        (mass, moment)
    }

    /// First moment `∫_{−∞}^{X(q)} x dP` where `X(q)` is the `q`-quantile.
    fn moment_at_quantile(&self, q: f64) -> f64 {
        let nseg = self.xs.len() - 1;
        let last = self.cum_mass[nseg];
        if q >= last {
            return self.cum_moment[nseg];
        }
        let seg = self
            .cum_mass
            .partition_point(|&c| c < q)
            .saturating_sub(1)
            .min(nseg - 1);
        let target = q - self.cum_mass[seg];
        let h = self.xs[seg + 1] - self.xs[seg];
        let u = bisect(0.0, h, true, 0.0, |u| self.partial(seg, u).0 - target);
        self.cum_moment[seg] + self.partial(seg, u).1
    }
}

/// A probability measure together with its Nevanlinna representation.
///
/// This is the unit the rest of the engine operates on.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureModel {
    pub mu: AtomicMeasure,
    pub rep: NevanlinnaRep,
}

impl MeasureModel {
    pub fn from_atomic(mu: AtomicMeasure) -> Self {
        let rep = NevanlinnaRep::from_atomic(&mu);
        MeasureModel { mu, rep }
    }

    pub fn from_nu(nu: &AtomicMeasure) -> Self {
        let rep = NevanlinnaRep::from_nu(nu);
        MeasureModel {
            mu: rep.measure(),
            rep,
        }
    }

    pub fn from_validated(v: ValidatedMeasure) -> Self {
        match v {
            ValidatedMeasure::Atomic(m) => Self::from_atomic(m),
            ValidatedMeasure::Nu(nu) => Self::from_nu(&nu),
            ValidatedMeasure::Discretized(m) => {
                let mut model = Self::from_atomic(m);
                model.rep.source = RepSource::Discretized;
                model
            }
        }
    }

    pub fn is_dirac(&self) -> bool {
        self.rep.rho.is_empty()
    }

    pub fn scale(&self) -> f64 {
        self.mu.scale().max(self.rep.rho.scale())
    }
}
