//! Boundary functions of the subordination domain and the law of `μ^⊞t`.
//!
//! With `(a, ρ)` the Nevanlinna data of `F_μ` and `c_t = 1/(t − 1)`:
//!
//! * `g(x) = Σ ρ_j (s_j² + 1)/(s_j − x)²` splits the line into
//!   `V_t^+ = {g > c_t}`, `V_t = {g = c_t}` and `V_t^- = {g < c_t}`.
//! * `f_t(x)` is the height of the boundary of `Ω_t = {Im H_t > 0}` above `x`;
//!   it is positive exactly on `V_t^+`.
//! * `H_t(z) = t z − (t − 1) F_μ(z)` maps the boundary curve `x + i f_t(x)`
//!   onto the real line; `ψ_t(x)` is that real value and is strictly increasing.
//!
//! The absolutely continuous part of `μ^⊞t` lives on `ψ_t(V_t^+)` with density
//! `t(t − 1) f_t(x) / (π |t x − ψ_t(x) + i t f_t(x)|²)` at `ψ_t(x)`, and `μ^⊞t`
//! has an atom at `tα` of mass `t μ({α}) − (t − 1)` whenever that is positive.

use std::f64::consts::PI;

use crate::nevanlinna::{MeasureModel, NevanlinnaRep};
use crate::roots::bisect;
use crate::support::{support, ComponentInterval, ComponentKind, Interval, SupportReport};
use crate::{AtomicMeasure, Complex, Error, Result};

/// Relative half-width of the band around `c_t` that classifies as [`PointClass::Zero`].
pub const ZERO_BAND: f64 = 1e-12;
/// Atoms of `μ^⊞t` lighter than this are treated as the equality case (no atom).
pub const ATOM_MASS_EPS: f64 = 1e-12;

/// Membership of a point in `V_t^+`, `V_t` or `V_t^-`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PointClass {
    Plus,
    Zero,
    Minus,
}

/// One sample of the boundary curve of `Ω_t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryPoint {
    pub x: f64,
    pub f: f64,
    pub psi: f64,
    pub class: PointClass,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerAtom {
    pub position: f64,
    pub mass: f64,
}

pub(crate) fn check_t(t: f64) -> Result<f64> {
    if t > 1.0 && t.is_finite() {
        Ok(1.0 / (t - 1.0))
    } else {
        Err(Error::BadT(t))
    }
}

/// `g(x)`; `+∞` exactly at atoms of `ρ`.
pub fn g_value(rep: &NevanlinnaRep, x: f64) -> f64 {
    let mut sum = 0.0;
    for (s, w) in rep.weights() {
        if s == x {
            return f64::INFINITY;
        }
        sum += w / (s - x).powi(2);
    }
    sum
}

pub(crate) fn g_prime(rep: &NevanlinnaRep, x: f64) -> f64 {
    2.0 * rep.weights().map(|(s, w)| w / (s - x).powi(3)).sum::<f64>()
}

pub(crate) fn classify_g(g: f64, t: f64) -> PointClass {
    let c = 1.0 / (t - 1.0);
    if (g - c).abs() <= ZERO_BAND * c {
        PointClass::Zero
    } else if g > c {
        PointClass::Plus
    } else {
        PointClass::Minus
    }
}

pub fn classify_point(rep: &NevanlinnaRep, t: f64, x: f64) -> Result<PointClass> {
    check_t(t)?;
    Ok(classify_g(g_value(rep, x), t))
}

/// `f_t(x)`: zero off `V_t^+`, otherwise the unique `y > 0` with
/// `Σ ρ_j (s_j² + 1)/((x − s_j)² + y²) = 1/(t − 1)`.
///
/// The left side is below `Σ ρ_j (s_j² + 1)/y²`, so the root lies in
/// `[0, sqrt((t − 1) Σ ρ_j (s_j² + 1))]`; bisection runs to machine precision.
pub fn f_t_value(rep: &NevanlinnaRep, t: f64, x: f64) -> Result<f64> {
    check_t(t)?;
    Ok(f_t_unchecked(rep, t, x, g_value(rep, x)))
}

fn f_t_unchecked(rep: &NevanlinnaRep, t: f64, x: f64, g: f64) -> f64 {
    if classify_g(g, t) != PointClass::Plus {
        return 0.0;
    }
    let tm1 = t - 1.0;
    let y_hi = (tm1 * rep.weights().map(|(_, w)| w).sum::<f64>()).sqrt();
    bisect(0.0, y_hi, false, 0.0, |y| {
        let y2 = y * y;
        tm1 * rep
            .weights()
            .map(|(s, w)| w / ((x - s).powi(2) + y2))
            .sum::<f64>()
            - 1.0
    })
}

/// `H_t(z) = t z − (t − 1) F(z)` on the closure of `Ω_t`.
pub fn h_t(rep: &NevanlinnaRep, t: f64, z: Complex) -> Result<Complex> {
    let c = check_t(t)?;
    let load: f64 = rep.weights().map(|(s, w)| w / (z - s).norm_sqr()).sum();
    if load.is_nan() || load > c + 1e-9 * c.max(1.0) {
        return Err(Error::OutsideOmega(z));
    }
    Ok(t * z - (t - 1.0) * rep.eval_f_unchecked(z))
}

/// `ψ_t` where `f_t = 0`: there `H_t(x)` is real.
pub(crate) fn psi_on_real(rep: &NevanlinnaRep, t: f64, x: f64) -> f64 {
    t * x - (t - 1.0) * rep.eval_f_real(x)
}

fn residual_scale(rep: &NevanlinnaRep, x: f64) -> f64 {
    rep.rho.scale().max(x.abs())
}

/// Samples the boundary curve at `x`: `f_t(x)`, `ψ_t(x) = H_t(x + i f_t(x))` and the class.
pub fn psi_t_value(rep: &NevanlinnaRep, t: f64, x: f64) -> Result<BoundaryPoint> {
    check_t(t)?;
    let g = g_value(rep, x);
    let class = classify_g(g, t);
    let f = f_t_unchecked(rep, t, x, g);
    if f == 0.0 {
        return Ok(BoundaryPoint {
            x,
            f,
            psi: psi_on_real(rep, t, x),
            class,
        });
    }
    let h = t * Complex::new(x, f) - (t - 1.0) * rep.eval_f_unchecked(Complex::new(x, f));
    if h.im.abs() >= 1e-9 * residual_scale(rep, x) {
        return Err(Error::BoundaryResidual { x, residual: h.im });
    }
    Ok(BoundaryPoint {
        x,
        f,
        psi: h.re,
        class,
    })
}

fn density_formula(t: f64, x: f64, f: f64, psi: f64) -> f64 {
    t * (t - 1.0) * f / (PI * Complex::new(t * x - psi, t * f).norm_sqr())
}

/// Density of `μ^⊞t` at `u = ψ_t(x)` for `x ∈ V_t^+`; returns `(u, pdf)`.
pub fn density_at(rep: &NevanlinnaRep, t: f64, x: f64) -> Result<(f64, f64)> {
    let bp = psi_t_value(rep, t, x)?;
    if bp.class != PointClass::Plus || bp.f <= 0.0 {
        return Err(Error::NotInVPlus(x));
    }
    Ok((bp.psi, density_formula(t, x, bp.f, bp.psi)))
}

/// Atoms of `μ^⊞t`: `tα` with mass `t μ({α}) − (t − 1)` for each atom `α` with
/// `μ({α}) > 1 − 1/t`.
pub fn atoms_of_power(m: &AtomicMeasure, t: f64) -> Result<Vec<PowerAtom>> {
    check_t(t)?;
    Ok(power_atoms(m, t).map(|(_, a)| a).collect())
}

/// `(α, atom at tα)` pairs.
pub(crate) fn power_atoms(
    m: &AtomicMeasure,
    t: f64,
) -> impl Iterator<Item = (f64, PowerAtom)> + '_ {
    m.atoms().iter().filter_map(move |a| {
        let mass = t * a.mass - (t - 1.0);
        (mass > ATOM_MASS_EPS).then_some((
            a.position,
            PowerAtom {
                position: t * a.position,
                mass,
            },
        ))
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplingOptions {
    /// Density samples per component of `V_t^+`.
    pub points_per_component: usize,
    /// Allowed deviation of atoms plus integrated density from total mass one.
    pub mass_tol: f64,
}

impl Default for SamplingOptions {
    fn default() -> Self {
        SamplingOptions {
            points_per_component: 512,
            mass_tol: 1e-3,
        }
    }
}

/// A density sample: `pdf` is the density of `μ^⊞t` at `u = ψ_t(x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensitySample {
    pub x: f64,
    pub u: f64,
    pub pdf: f64,
}

/// Atoms, sampled density and support of `μ^⊞t`.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerResult {
    pub t: f64,
    pub atoms: Vec<PowerAtom>,
    /// Sorted by `u`. Endpoints where the density is infinite are left out.
    pub density: Vec<DensitySample>,
    pub support: SupportReport,
    /// Integrated mass of the absolutely continuous part.
    pub ac_mass: f64,
    pub mass_tol: f64,
    /// `(u, cumulative AC mass)` knots for the distribution function.
    cdf_knots: Vec<(f64, f64)>,
}

impl PowerResult {
    pub fn atom_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.mass).sum()
    }

    pub fn total_mass(&self) -> f64 {
        self.atom_mass() + self.ac_mass
    }

    /// Whether atoms plus integrated density sum to one within `mass_tol`.
    pub fn mass_ok(&self) -> bool {
        (self.total_mass() - 1.0).abs() <= self.mass_tol
    }

    /// Distribution function of `μ^⊞t`, piecewise linear in the density part.
    pub fn cdf(&self, u: f64) -> f64 {
        let atoms: f64 = self
            .atoms
            .iter()
            .filter(|a| a.position <= u)
            .map(|a| a.mass)
            .sum();
        atoms + interpolate(&self.cdf_knots, u)
    }
}

fn interpolate(knots: &[(f64, f64)], u: f64) -> f64 {
    let (Some(first), Some(last)) = (knots.first(), knots.last()) else {
        return 0.0;
    };
    if u <= first.0 {
        return 0.0;
    }
    if u >= last.0 {
        return last.1;
    }
    let i = knots.partition_point(|k| k.0 <= u);
    let (u0, c0) = knots[i - 1];
    let (u1, c1) = knots[i];
    if u1 == u0 {
        c1
    } else {
        c0 + (c1 - c0) * (u - u0) / (u1 - u0)
    }
}

/// `μ^⊞t` for `t ≥ 1`; `t = 1` returns `μ` itself.
pub fn convolve_power(model: &MeasureModel, t: f64, opts: &SamplingOptions) -> Result<PowerResult> {
    if !(t >= 1.0 && t.is_finite()) {
        return Err(Error::BadT(t));
    }
    if t == 1.0 {
        let components = model
            .mu
            .atoms()
            .iter()
            .map(|a| ComponentInterval {
                lo: a.position,
                hi: a.position,
                kind: ComponentKind::AtomPoint,
            })
            .collect::<Vec<_>>();
        return Ok(PowerResult {
            t,
            atoms: model
                .mu
                .atoms()
                .iter()
                .map(|a| PowerAtom {
                    position: a.position,
                    mass: a.mass,
                })
                .collect(),
            density: Vec::new(),
            support: SupportReport {
                t,
                n: components.len(),
                components,
                vplus: Vec::new(),
            },
            ac_mass: 0.0,
            mass_tol: opts.mass_tol,
            cdf_knots: Vec::new(),
        });
    }

    let report = support(model, t)?;
    let mut density = Vec::new();
    let mut knots = Vec::new();
    let mut ac_mass = 0.0;
    for comp in &report.vplus {
        let samples = sample_component(model, t, *comp, opts.points_per_component.max(2))?;
        for pair in samples.windows(2) {
            let (a, b) = (&pair[0], &pair[1]);
            ac_mass += segment_mass(a, b);
            if knots.is_empty() {
                knots.push((a.u, 0.0));
            }
            knots.push((b.u, ac_mass));
        }
        density.extend(
            samples
                .iter()
                .filter(|s| !s.singular)
                .map(|s| DensitySample {
                    x: s.x,
                    u: s.u,
                    pdf: s.pdf,
                }),
        );
    }

    Ok(PowerResult {
        t,
        atoms: atoms_of_power(&model.mu, t)?,
        density,
        support: report,
        ac_mass,
        mass_tol: opts.mass_tol,
        cdf_knots: knots,
    })
}

#[derive(Debug, Clone, Copy)]
struct Sample {
    x: f64,
    u: f64,
    pdf: f64,
    singular: bool,
}

/// Mass of one sampling segment in `u`.
fn segment_mass(a: &Sample, b: &Sample) -> f64 {
    let du = b.u - a.u;
    // an infinite endpoint density behaves like |u − u_e|^{-1/2}
    if a.singular {
        2.0 * b.pdf * du
    } else if b.singular {
        2.0 * a.pdf * du
    } else {
        0.5 * (a.pdf + b.pdf) * du
    }
}

/// Per-segment mass change below which a segment is not split further.
const REFINE_TOL: f64 = 1e-9;
const MAX_REFINE_DEPTH: u32 = 40;

fn interior_sample(rep: &NevanlinnaRep, t: f64, x: f64) -> Result<Sample> {
    let bp = psi_t_value(rep, t, x)?;
    let pdf = if bp.f > 0.0 {
        density_formula(t, x, bp.f, bp.psi)
    } else {
        0.0
    };
    Ok(Sample {
        x,
        u: bp.psi,
        pdf,
        singular: false,
    })
}

/// Appends samples strictly inside `(a, b)` followed by `b`, halving the segment
/// until its mass estimate settles. Near-critical atoms of `μ` put narrow peaks
/// in the density that the fixed grid alone can miss.
fn refine(
    rep: &NevanlinnaRep,
    t: f64,
    a: Sample,
    b: Sample,
    depth: u32,
    out: &mut Vec<Sample>,
) -> Result<()> {
    let xm = 0.5 * (a.x + b.x);
    if depth < MAX_REFINE_DEPTH && xm > a.x && xm < b.x {
        let m = interior_sample(rep, t, xm)?;
        let whole = segment_mass(&a, &b);
        let halves = segment_mass(&a, &m) + segment_mass(&m, &b);
        if (whole - halves).abs() > REFINE_TOL {
            refine(rep, t, a, m, depth + 1, out)?;
            return refine(rep, t, m, b, depth + 1, out);
        }
    }
    out.push(b);
    Ok(())
}

/// Chebyshev–Lobatto samples over one component of `V_t^+`, with the
/// component split at the atoms of `μ` it contains so that nodes cluster at
/// every place the density can vanish or spike.
fn sample_component(
    model: &MeasureModel,
    t: f64,
    comp: Interval,
    points: usize,
) -> Result<Vec<Sample>> {
    let rep = &model.rep;
    let tol = 1e-9 * model.scale();
    let mut breaks = vec![comp.lo];
    breaks.extend(
        model
            .mu
            .positions()
            .filter(|&s| s > comp.lo + tol && s < comp.hi - tol),
    );
    breaks.push(comp.hi);
    let width = comp.hi - comp.lo;

    let mut xs = Vec::with_capacity(points + breaks.len() * 8);
    for (i, w) in breaks.windows(2).enumerate() {
        let (a, b) = (w[0], w[1]);
        let n = ((points as f64 * (b - a) / width).round() as usize).max(8);
        let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
        for k in usize::from(i > 0)..n {
            let x = if k == 0 {
                a
            } else if k == n - 1 {
                b
            } else {
                mid - half * (PI * k as f64 / (n - 1) as f64).cos()
            };
            xs.push(x);
        }
    }

    let mut grid = Vec::with_capacity(xs.len());
    for &x in &xs {
        if x == comp.lo || x == comp.hi {
            // f_t vanishes at the ends; the density is infinite there only at a
            // critical atom of μ, where F_μ(x) = 0.
            let singular = model.mu.mass_near(x, tol).is_some();
            let pdf = if singular { f64::INFINITY } else { 0.0 };
            grid.push(Sample {
                x,
                u: psi_on_real(rep, t, x),
                pdf,
                singular,
            });
        } else {
            grid.push(interior_sample(rep, t, x)?);
        }
    }
    let mut out = vec![grid[0]];
    for w in grid.windows(2) {
        refine(rep, t, w[0], w[1], 0, &mut out)?;
    }
    Ok(out)
}
