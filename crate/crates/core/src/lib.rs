//! Free additive convolution powers `μ^⊞t` of probability measures on the real line.
//!
//! The engine works from the Nevanlinna representation `(a, ρ)` of the reciprocal
//! Cauchy transform `F_μ`. From `ρ` it builds the level-set function `g`, the
//! boundary height `f_t` of the subordination domain and the boundary map `ψ_t`,
//! and from those the atoms, absolutely continuous density and support of
//! `μ^⊞t` for every `t > 1`.
//!
//! Modules, bottom-up:
//!
//! * [`measure`]: atomic measures, `G_μ` and its real zeros.
//! * [`nevanlinna`]: the representation `(a, ρ)` and the measure model used downstream.
//! * [`semigroup`]: `g`, `f_t`, `H_t`, `ψ_t`, the density formula and atoms of `μ^⊞t`.
//! * [`support`](mod@support): components of `V_t^+` and of `supp μ^⊞t`, `n(t)` and the merge threshold.
//! * [`oracle`]: random-matrix Monte Carlo and closed-form reference laws.
//! * [`cli`]: measure files, command dispatch and CSV/JSON output.

pub mod cli;
pub mod measure;
pub mod nevanlinna;
pub mod oracle;
pub mod semigroup;
pub mod support;

mod error;
mod roots;

pub use error::{Error, Result};
pub use measure::{validate_measure, Atom, AtomicMeasure, MeasureSpec, ValidatedMeasure};
pub use nevanlinna::{discretize_continuous, MeasureModel, NevanlinnaRep, RepSource};
pub use semigroup::{
    atoms_of_power, classify_point, convolve_power, density_at, f_t_value, g_value, h_t,
    psi_t_value, BoundaryPoint, DensitySample, PointClass, PowerAtom, PowerResult, SamplingOptions,
};
pub use support::{
    linear_grid, merge_threshold, n_breakpoints, n_curve, structural_checks, support,
    vplus_components, Breakpoint, Check, ComponentInterval, ComponentKind, Interval,
    MergeThreshold, StructuralReport, SupportReport,
};

/// Complex numbers used throughout.
pub type Complex = num_complex::Complex64;
