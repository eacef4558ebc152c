//! Support of `μ^⊞t`: components of `V_t^+`, their images under `ψ_t`, the
//! component count `n(t)` and the merge threshold `t₀`.
//!
//! All topology is computed in the `x` variable. `ψ_t` is an increasing
//! homeomorphism, so two pieces of the support touch exactly when their
//! preimages touch, and deciding that in `x` avoids the flat stretch of `ψ_t`
//! near a tangency where `u`-space gaps shrink below any fixed tolerance.

use crate::nevanlinna::{MeasureModel, NevanlinnaRep};
use crate::roots::{bisect, expand_until};
use crate::semigroup::{
    check_t, classify_g, g_prime, g_value, power_atoms, psi_on_real, psi_t_value, PointClass,
};
use crate::{Error, Result};

/// An interval `(lo, hi)`; open or closed depending on context.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn contains(&self, x: f64, tol: f64) -> bool {
        x >= self.lo - tol && x <= self.hi + tol
    }

    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComponentKind {
    AcComponent,
    AtomPoint,
}

impl ComponentKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ComponentKind::AcComponent => "ac_component",
            ComponentKind::AtomPoint => "atom_point",
        }
    }
}

/// A connected component of `supp(μ^⊞t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComponentInterval {
    pub lo: f64,
    pub hi: f64,
    pub kind: ComponentKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SupportReport {
    pub t: f64,
    /// Sorted and pairwise disjoint.
    pub components: Vec<ComponentInterval>,
    pub n: usize,
    /// Components of `V_t^+` in `x`, sorted. Neighbours may share an endpoint
    /// (a tangency of `g` with `1/(t − 1)`).
    pub vplus: Vec<Interval>,
}

/// Components of `V_t^+ = {g > 1/(t − 1)}`.
///
/// Between consecutive atoms of `ρ`, `g` is strictly convex and blows up at both
/// ends, so its sublevel set there is one interval, possibly empty or a single
/// tangent point. Outside the atoms `g` decreases to zero, giving one crossing
/// per side.
pub fn vplus_components(rep: &NevanlinnaRep, t: f64) -> Result<Vec<Interval>> {
    let c = check_t(t)?;
    let poles: Vec<f64> = rep.rho.positions().collect();
    let (Some(&first), Some(&last)) = (poles.first(), poles.last()) else {
        return Err(Error::EmptyRho);
    };
    let excess = |x: f64| g_value(rep, x) - c;

    let far_left =
        expand_until(first, -1.0, 1.0, |x| excess(x) < 0.0).ok_or(Error::NoConvergence)?;
    let mut start = bisect(far_left, first, true, 0.0, excess);
    let mut comps = Vec::new();
    for w in poles.windows(2) {
        let (a, b) = (w[0], w[1]);
        let xmin = bisect(a, b, true, 0.0, |x| g_prime(rep, x));
        match classify_g(g_value(rep, xmin), t) {
            PointClass::Plus => {}
            PointClass::Zero => {
                comps.push(Interval {
                    lo: start,
                    hi: xmin,
                });
                start = xmin;
            }
            PointClass::Minus => {
                comps.push(Interval {
                    lo: start,
                    hi: bisect(a, xmin, false, 0.0, excess),
                });
                start = bisect(xmin, b, true, 0.0, excess);
            }
        }
    }
    let far_right =
        expand_until(last, 1.0, 1.0, |x| excess(x) < 0.0).ok_or(Error::NoConvergence)?;
    comps.push(Interval {
        lo: start,
        hi: bisect(last, far_right, false, 0.0, excess),
    });
    Ok(comps)
}

/// Closures of `V_t^+` components, joined where they touch.
fn closure_groups(vplus: &[Interval], tol: f64) -> Vec<Interval> {
    let mut groups: Vec<Interval> = Vec::new();
    for iv in vplus {
        match groups.last_mut() {
            Some(g) if iv.lo - g.hi <= tol => g.hi = iv.hi,
            _ => groups.push(*iv),
        }
    }
    groups
}

/// Support components of `μ^⊞t` for `t > 1`.
pub fn support(model: &MeasureModel, t: f64) -> Result<SupportReport> {
    check_t(t)?;
    if model.is_dirac() {
        let u = t * model.mu.atoms()[0].position;
        let components = vec![ComponentInterval {
            lo: u,
            hi: u,
            kind: ComponentKind::AtomPoint,
        }];
        return Ok(SupportReport {
            t,
            components,
            n: 1,
            vplus: Vec::new(),
        });
    }
    let rep = &model.rep;
    let scale = model.scale();
    let vplus = vplus_components(rep, t)?;
    let groups = closure_groups(&vplus, 1e-12 * scale);

    let mut components: Vec<ComponentInterval> = groups
        .iter()
        .map(|g| ComponentInterval {
            lo: psi_on_real(rep, t, g.lo),
            hi: psi_on_real(rep, t, g.hi),
            kind: ComponentKind::AcComponent,
        })
        .collect();
    // an atom on the closure of an AC piece belongs to that piece
    let absorb = 1e-9 * scale;
    for (alpha, atom) in power_atoms(&model.mu, t) {
        if !groups.iter().any(|g| g.contains(alpha, absorb)) {
            components.push(ComponentInterval {
                lo: atom.position,
                hi: atom.position,
                kind: ComponentKind::AtomPoint,
            });
        }
    }
    components.sort_by(|a, b| a.lo.total_cmp(&b.lo));
    Ok(SupportReport {
        t,
        n: components.len(),
        components,
        vplus,
    })
}

/// `(t, n(t))` along `grid`.
pub fn n_curve(model: &MeasureModel, grid: &[f64]) -> Result<Vec<(f64, usize)>> {
    grid.iter()
        .map(|&t| Ok((t, support(model, t)?.n)))
        .collect()
}

/// A change of `n(t)` located between grid points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Breakpoint {
    pub t: f64,
    pub before: usize,
    pub after: usize,
}

/// Evenly spaced `t` grid, inclusive of both ends.
pub fn linear_grid(t_min: f64, t_max: f64, steps: usize) -> Vec<f64> {
    match steps {
        0 => Vec::new(),
        1 => vec![t_min],
        _ => (0..steps)
            .map(|i| t_min + (t_max - t_min) * i as f64 / (steps - 1) as f64)
            .collect(),
    }
}

/// Scans `n(t)` on a linear grid and refines every change by bisection in `t`.
/// The reported `t` is where the new count starts, to about machine precision.
pub fn n_breakpoints(
    model: &MeasureModel,
    t_min: f64,
    t_max: f64,
    steps: usize,
) -> Result<Vec<Breakpoint>> {
    let curve = n_curve(model, &linear_grid(t_min, t_max, steps))?;
    let mut out = Vec::new();
    for w in curve.windows(2) {
        let ((mut lo, before), (mut hi, after)) = (w[0], w[1]);
        if before == after {
            continue;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if support(model, mid)?.n == before {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        out.push(Breakpoint {
            t: hi,
            before,
            after,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MergeThreshold {
    /// Infimum of `g` over the bounded gaps of `supp(μ)`; `+∞` when there are none.
    pub m_inf: f64,
    /// `max(1 + 1/m_inf, 1/(1 − max atom mass))`.
    pub t0: f64,
}

/// Beyond `t₀` the support of `μ^⊞t` is a single interval.
pub fn merge_threshold(model: &MeasureModel) -> Result<MergeThreshold> {
    if model.is_dirac() {
        return Err(Error::DiracMeasure);
    }
    let rep = &model.rep;
    let poles: Vec<f64> = rep.rho.positions().collect();
    let mu: Vec<f64> = model.mu.positions().collect();
    let mut m_inf = f64::INFINITY;
    for gap in mu.windows(2) {
        let (lo, hi) = (gap[0], gap[1]);
        let mut breaks = vec![(lo, false)];
        breaks.extend(
            poles
                .iter()
                .filter(|&&s| s > lo && s < hi)
                .map(|&s| (s, true)),
        );
        breaks.push((hi, false));
        for piece in breaks.windows(2) {
            let x = convex_argmin(rep, piece[0], piece[1]);
            m_inf = m_inf.min(g_value(rep, x));
        }
    }
    let atom_term = 1.0 / (1.0 - model.mu.max_mass());
    Ok(MergeThreshold {
        m_inf,
        t0: (1.0 + 1.0 / m_inf).max(atom_term),
    })
}

/// Minimiser of the convex `g` on `[u, v]`; endpoints flagged as `ρ` atoms are poles.
/// `g` is continuous up to the non-pole endpoints, so the closed piece is used.
fn convex_argmin(rep: &NevanlinnaRep, (u, u_pole): (f64, bool), (v, v_pole): (f64, bool)) -> f64 {
    if !u_pole && g_prime(rep, u) >= 0.0 {
        u
    } else if !v_pole && g_prime(rep, v) <= 0.0 {
        v
    } else {
        bisect(u, v, true, 0.0, |x| g_prime(rep, x))
    }
}

/// Outcome of one structural check. `Vacuous` means the hypothesis never applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Check {
    Pass,
    Vacuous,
    Fail,
}

impl Check {
    fn from_bool(ok: bool) -> Self {
        if ok {
            Check::Pass
        } else {
            Check::Fail
        }
    }

    pub fn ok(self) -> bool {
        self != Check::Fail
    }
}

/// Self-test of the qualitative support results at one `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StructuralReport {
    pub t: f64,
    /// (a) `ψ_t(supp μ) ⊆ supp μ^⊞t`.
    pub image_of_support: Check,
    /// (b) the `ψ_t` image of each bounded gap of `supp μ` holds at most two gaps of `supp μ^⊞t`.
    pub gap_images: Check,
    /// (c) between heavy atoms `α < β` (mass `≥ 1 − 1/t`), `(tα, tβ)` has positive mass.
    pub heavy_atoms_separated: Check,
    /// (d) `supp μ` bounded iff `supp μ^⊞t` bounded.
    pub boundedness: Check,
    /// (e) each maximal `f_t`-null interval carrying mass holds exactly one atom, and it is heavy.
    pub null_intervals: Check,
}

impl StructuralReport {
    pub fn checks(&self) -> [(&'static str, Check); 5] {
        [
            ("image_of_support", self.image_of_support),
            ("gap_images", self.gap_images),
            ("heavy_atoms_separated", self.heavy_atoms_separated),
            ("boundedness", self.boundedness),
            ("null_intervals", self.null_intervals),
        ]
    }

    pub fn all_ok(&self) -> bool {
        self.checks().iter().all(|(_, c)| c.ok())
    }
}

pub fn structural_checks(model: &MeasureModel, t: f64) -> Result<StructuralReport> {
    check_t(t)?;
    if model.is_dirac() {
        return Ok(StructuralReport {
            t,
            image_of_support: Check::Vacuous,
            gap_images: Check::Vacuous,
            heavy_atoms_separated: Check::Vacuous,
            boundedness: Check::Vacuous,
            null_intervals: Check::Vacuous,
        });
    }
    let rep = &model.rep;
    let report = support(model, t)?;
    let comps = &report.components;
    let scale = model.scale();
    let utol = 1e-9 * scale * t;
    let heavy = 1.0 - 1.0 / t - 1e-12;
    let atoms = model.mu.atoms();

    let images = atoms
        .iter()
        .map(|a| Ok(psi_t_value(rep, t, a.position)?.psi))
        .collect::<Result<Vec<f64>>>()?;
    let image_of_support = Check::from_bool(
        images
            .iter()
            .all(|&u| comps.iter().any(|c| u >= c.lo - utol && u <= c.hi + utol)),
    );

    let support_gaps: Vec<Interval> = comps
        .windows(2)
        .map(|w| Interval {
            lo: w[0].hi,
            hi: w[1].lo,
        })
        .collect();
    let gap_images = Check::from_bool(images.windows(2).all(|w| {
        support_gaps
            .iter()
            .filter(|g| g.lo >= w[0] - utol && g.hi <= w[1] + utol)
            .count()
            <= 2
    }));

    let heavy_atoms: Vec<f64> = atoms
        .iter()
        .filter(|a| a.mass >= heavy)
        .map(|a| a.position)
        .collect();
    let heavy_atoms_separated = if heavy_atoms.len() < 2 {
        Check::Vacuous
    } else {
        Check::from_bool(heavy_atoms.windows(2).all(|w| {
            let (lo, hi) = (t * w[0], t * w[1]);
            comps.iter().any(|c| match c.kind {
                ComponentKind::AcComponent => c.hi.min(hi) - c.lo.max(lo) > utol,
                ComponentKind::AtomPoint => c.lo > lo + utol && c.lo < hi - utol,
            })
        }))
    };

    let boundedness = Check::from_bool(comps.iter().all(|c| c.lo.is_finite() && c.hi.is_finite()));

    let xtol = 1e-9 * scale;
    let groups = closure_groups(&report.vplus, 1e-12 * scale);
    let mut null = vec![Interval {
        lo: f64::NEG_INFINITY,
        hi: groups[0].lo,
    }];
    null.extend(groups.windows(2).map(|w| Interval {
        lo: w[0].hi,
        hi: w[1].lo,
    }));
    for w in report.vplus.windows(2).filter(|w| w[0].hi == w[1].lo) {
        null.push(Interval {
            lo: w[0].hi,
            hi: w[0].hi,
        });
    }
    null.push(Interval {
        lo: groups[groups.len() - 1].hi,
        hi: f64::INFINITY,
    });
    let mut loaded = 0;
    let mut all_single = true;
    for iv in &null {
        let inside: Vec<_> = atoms
            .iter()
            .filter(|a| iv.contains(a.position, xtol))
            .collect();
        if !inside.is_empty() {
            loaded += 1;
            all_single &= inside.len() == 1 && inside[0].mass >= heavy;
        }
    }
    let null_intervals = if loaded == 0 {
        Check::Vacuous
    } else {
        Check::from_bool(all_single)
    };

    Ok(StructuralReport {
        t,
        image_of_support,
        gap_images,
        heavy_atoms_separated,
        boundedness,
        null_intervals,
    })
}
