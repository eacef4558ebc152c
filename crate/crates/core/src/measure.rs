//! Finite atomic measures and their Cauchy transforms.
//!
//! An [`AtomicMeasure`] holds both the probability measures `μ` fed into the
//! engine and the finite Nevanlinna measures `ρ` derived from them, so it does
//! not insist on unit mass. Probability checks live in [`validate_measure`].

use crate::nevanlinna::discretize_continuous;
use crate::roots::bisect;
use crate::{Complex, Error, Result};

/// Allowed deviation of an atomic or `ν` input from total mass one.
pub const PROBABILITY_TOL: f64 = 1e-9;
/// Allowed deviation of a continuous input's trapezoid mass from one.
pub const DENSITY_MASS_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub position: f64,
    pub mass: f64,
}

impl Atom {
    pub fn new(position: f64, mass: f64) -> Self {
        Atom { position, mass }
    }
}

/// Finite positive measure with finitely many atoms, sorted by position.
///
/// Positions are strictly increasing; atoms given at the same position are
/// merged by adding their masses.
#[derive(Debug, Clone, PartialEq)]
pub struct AtomicMeasure {
    atoms: Vec<Atom>,
    total_mass: f64,
}

impl AtomicMeasure {
    pub fn new<I: IntoIterator<Item = Atom>>(atoms: I) -> Result<Self> {
        let mut atoms: Vec<Atom> = atoms.into_iter().collect();
        for a in &atoms {
            if !a.position.is_finite() {
                return Err(Error::NonFinitePosition(a.position));
            }
            if !(a.mass.is_finite() && a.mass > 0.0) {
                return Err(Error::InvalidMass(a.mass));
            }
        }
        atoms.sort_by(|a, b| a.position.total_cmp(&b.position));
        let mut merged: Vec<Atom> = Vec::with_capacity(atoms.len());
        for a in atoms {
            match merged.last_mut() {
                Some(last) if last.position == a.position => last.mass += a.mass,
                _ => merged.push(a),
            }
        }
        let total_mass = merged.iter().map(|a| a.mass).sum();
        Ok(AtomicMeasure {
            atoms: merged,
            total_mass,
        })
    }

    /// The zero measure.
    pub fn empty() -> Self {
        AtomicMeasure {
            atoms: Vec::new(),
            total_mass: 0.0,
        }
    }

    pub fn dirac(position: f64) -> Result<Self> {
        Self::new([Atom::new(position, 1.0)])
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn total_mass(&self) -> f64 {
        self.total_mass
    }

    pub fn positions(&self) -> impl Iterator<Item = f64> + '_ {
        self.atoms.iter().map(|a| a.position)
    }

    /// `max(1, max |s_j|)`; all positional tolerances are taken relative to it.
    pub fn scale(&self) -> f64 {
        self.positions().fold(1.0, |acc, s| acc.max(s.abs()))
    }

    /// Largest atom mass, zero for the empty measure.
    pub fn max_mass(&self) -> f64 {
        self.atoms.iter().fold(0.0, |acc, a| acc.max(a.mass))
    }

    /// Mass of the atom within `tol` of `x`, if any.
    pub fn mass_near(&self, x: f64, tol: f64) -> Option<f64> {
        self.atoms
            .iter()
            .find(|a| (a.position - x).abs() <= tol)
            .map(|a| a.mass)
    }

    pub fn mean(&self) -> f64 {
        self.atoms.iter().map(|a| a.mass * a.position).sum::<f64>() / self.total_mass
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.atoms
            .iter()
            .map(|a| a.mass * (a.position - m).powi(2))
            .sum::<f64>()
            / self.total_mass
    }

    /// `G(z) = Σ w_j / (z − s_j)` for `Im z ≥ 0`.
    pub fn cauchy_transform(&self, z: Complex) -> Result<Complex> {
        if z.im == 0.0 && self.atoms.iter().any(|a| a.position == z.re) {
            return Err(Error::PoleHit(z.re));
        }
        Ok(self.atoms.iter().map(|a| a.mass / (z - a.position)).sum())
    }

    /// `G'(x) = −Σ w_j / (x − s_j)²` at a real point off the atoms.
    pub fn cauchy_derivative(&self, x: f64) -> Result<f64> {
        if self.atoms.iter().any(|a| a.position == x) {
            return Err(Error::PoleHit(x));
        }
        Ok(-self
            .atoms
            .iter()
            .map(|a| a.mass / (x - a.position).powi(2))
            .sum::<f64>())
    }

    /// `G` restricted to the real line (no pole check).
    pub(crate) fn cauchy_real(&self, x: f64) -> f64 {
        self.atoms.iter().map(|a| a.mass / (x - a.position)).sum()
    }

    /// The `n − 1` real zeros of `G`, one in each gap between consecutive atoms.
    ///
    /// `G` decreases strictly from `+∞` to `−∞` across every gap, so plain
    /// bisection on the open gap brackets the zero; it is run to machine
    /// precision.
    pub fn zeros_of_cauchy(&self) -> Vec<f64> {
        self.atoms
            .windows(2)
            .map(|w| {
                bisect(w[0].position, w[1].position, false, 0.0, |x| {
                    self.cauchy_real(x)
                })
            })
            .collect()
    }
}

/// Raw input measure as read from a measure file.
#[derive(Debug, Clone, PartialEq)]
pub enum MeasureSpec {
    /// Atoms of `μ` itself.
    Atomic(Vec<Atom>),
    /// Atoms of a probability `ν` with `F_μ(z) = z − G_ν(z)`.
    Nu(Vec<Atom>),
    /// A density sampled on a strictly increasing grid.
    Continuous { xs: Vec<f64>, pdf: Vec<f64> },
}

/// A validated input, tagged by the route it takes into the engine.
#[derive(Debug, Clone, PartialEq)]
pub enum ValidatedMeasure {
    Atomic(AtomicMeasure),
    /// The measure `ν`; `μ` is recovered from `F_μ = z − G_ν`.
    Nu(AtomicMeasure),
    /// Quantile discretization of a continuous input.
    Discretized(AtomicMeasure),
}

/// Checks an input measure and normalizes it into atomic form.
///
/// Continuous inputs are discretized into `n_atoms` equal-mass atoms.
pub fn validate_measure(spec: &MeasureSpec, n_atoms: usize) -> Result<ValidatedMeasure> {
    match spec {
        MeasureSpec::Atomic(atoms) => Ok(ValidatedMeasure::Atomic(probability(atoms)?)),
        MeasureSpec::Nu(atoms) => Ok(ValidatedMeasure::Nu(probability(atoms)?)),
        MeasureSpec::Continuous { xs, pdf } => {
            check_grid(xs, pdf)?;
            let mass = trapezoid(xs, pdf);
            if (mass - 1.0).abs() > DENSITY_MASS_TOL {
                return Err(Error::NotProbability(mass));
            }
            Ok(ValidatedMeasure::Discretized(discretize_continuous(
                xs, pdf, n_atoms,
            )?))
        }
    }
}

fn probability(atoms: &[Atom]) -> Result<AtomicMeasure> {
    if atoms.is_empty() {
        return Err(Error::EmptyMeasure);
    }
    let m = AtomicMeasure::new(atoms.iter().copied())?;
    if (m.total_mass() - 1.0).abs() > PROBABILITY_TOL {
        return Err(Error::NotProbability(m.total_mass()));
    }
    Ok(m)
}

pub(crate) fn check_grid(xs: &[f64], pdf: &[f64]) -> Result<()> {
    if xs.len() != pdf.len() {
        return Err(Error::InvalidGrid(format!(
            "{} grid points but {} density values",
            xs.len(),
            pdf.len()
        )));
    }
    if xs.len() < 2 {
        return Err(Error::InvalidGrid("need at least two grid points".into()));
    }
    if let Some(x) = xs.iter().find(|x| !x.is_finite()) {
        return Err(Error::NonFinitePosition(*x));
    }
    if xs.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidGrid(
            "grid must be strictly increasing".into(),
        ));
    }
    if let Some(p) = pdf.iter().find(|p| !(p.is_finite() && **p >= 0.0)) {
        return Err(Error::InvalidGrid(format!(
            "density value {p} is not a finite nonnegative number"
        )));
    }
    Ok(())
}

pub(crate) fn trapezoid(xs: &[f64], ys: &[f64]) -> f64 {
    xs.windows(2)
        .zip(ys.windows(2))
        .map(|(x, y)| 0.5 * (y[0] + y[1]) * (x[1] - x[0]))
        .sum()
}
