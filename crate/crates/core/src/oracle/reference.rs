use std::f64::consts::PI;

use crate::{Atom, Error, Result};

/// Closed-form laws used as references.
///
/// For `μ_ε = (ε/2)(δ_{-1} + δ_1) + (1 − ε)δ_0`, `MuEpsG` is its `g` function and
/// `MuEpsRho` its Nevanlinna measure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ReferenceLaw {
    /// Semicircle of variance `t`, radius `2√t`.
    Semicircle {
        t: f64,
    },
    /// `(½δ_{-1} + ½δ_1)^⊞2`.
    BernoulliArcsine,
    MuEpsG {
        eps: f64,
    },
    MuEpsRho {
        eps: f64,
    },
}

impl ReferenceLaw {
    /// `semicircle_t` takes `t ≥ 1`; `mu_eps_g` and `mu_eps_rho` take `0 < ε < 1`.
    pub fn from_name(name: &str, params: &[f64]) -> Result<Self> {
        let param = |what: &str| {
            params
                .first()
                .copied()
                .ok_or_else(|| Error::InvalidParameter(format!("{name} needs {what}")))
        };
        let eps = |e: f64| {
            if e > 0.0 && e < 1.0 {
                Ok(e)
            } else {
                Err(Error::InvalidParameter(format!(
                    "epsilon must lie in (0, 1), got {e}"
                )))
            }
        };
        match name {
            "semicircle_t" => {
                let t = param("t")?;
                if t >= 1.0 && t.is_finite() {
                    Ok(ReferenceLaw::Semicircle { t })
                } else {
                    Err(Error::BadT(t))
                }
            }
            "bernoulli_arcsine" => Ok(ReferenceLaw::BernoulliArcsine),
            "mu_eps_g" => Ok(ReferenceLaw::MuEpsG {
                eps: eps(param("epsilon")?)?,
            }),
            "mu_eps_rho" => Ok(ReferenceLaw::MuEpsRho {
                eps: eps(param("epsilon")?)?,
            }),
            _ => Err(Error::UnknownLaw(name.to_string())),
        }
    }

    /// Density for the two distributions, `g_ε(x)` for `MuEpsG` (`+∞` at its poles)
    /// and the `ρ_ε` mass at `x` for `MuEpsRho`.
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            ReferenceLaw::Semicircle { t } => {
                let r2 = 4.0 * t;
                if x * x < r2 {
                    (r2 - x * x).sqrt() / (2.0 * PI * t)
                } else {
                    0.0
                }
            }
            ReferenceLaw::BernoulliArcsine => {
                if x.abs() < 2.0 {
                    1.0 / (PI * (4.0 - x * x).sqrt())
                } else {
                    0.0
                }
            }
            ReferenceLaw::MuEpsG { eps } => {
                let den = (x * x - 1.0 + eps).powi(2);
                if den == 0.0 {
                    f64::INFINITY
                } else {
                    (eps * x * x + eps * (1.0 - eps)) / den
                }
            }
            ReferenceLaw::MuEpsRho { .. } => self
                .atoms()
                .iter()
                .filter(|a| a.position == x)
                .map(|a| a.mass)
                .sum(),
        }
    }

    /// Distribution function, for the two distributions only.
    pub fn cdf(&self, u: f64) -> Option<f64> {
        match *self {
            ReferenceLaw::Semicircle { t } => {
                let r = 2.0 * t.sqrt();
                let v = u.clamp(-r, r);
                Some(0.5 + v * (r * r - v * v).sqrt() / (PI * r * r) + (v / r).asin() / PI)
            }
            ReferenceLaw::BernoulliArcsine => Some(0.5 + (u.clamp(-2.0, 2.0) / 2.0).asin() / PI),
            _ => None,
        }
    }

    /// Atoms of `ρ_ε` at `±√(1 − ε)`, each of mass `ε/(2(2 − ε))`; empty otherwise.
    pub fn atoms(&self) -> Vec<Atom> {
        match *self {
            ReferenceLaw::MuEpsRho { eps } => {
                let s = (1.0 - eps).sqrt();
                let m = eps / (2.0 * (2.0 - eps));
                vec![Atom::new(-s, m), Atom::new(s, m)]
            }
            _ => Vec::new(),
        }
    }
}
