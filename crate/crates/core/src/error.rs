use crate::Complex;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("measure has no atoms")]
    EmptyMeasure,
    #[error("total mass {0} is not 1")]
    NotProbability(f64),
    #[error("atom position {0} is not finite")]
    NonFinitePosition(f64),
    #[error("atom mass {0} must be positive and finite")]
    InvalidMass(f64),
    #[error("{0} is a pole")]
    PoleHit(f64),
    #[error("invalid density grid: {0}")]
    InvalidGrid(String),
    #[error("degenerate density: {0}")]
    DegenerateDensity(String),
    #[error("t = {0} is out of range")]
    BadT(f64),
    #[error("{0} lies outside the closure of the subordination domain")]
    OutsideOmega(Complex),
    #[error("x = {0} is not in V_t^+")]
    NotInVPlus(f64),
    #[error("the Nevanlinna measure is empty (the input is a point mass)")]
    EmptyRho,
    #[error("the measure is a point mass")]
    DiracMeasure,
    #[error("boundary residual {residual:e} at x = {x}")]
    BoundaryResidual { x: f64, residual: f64 },
    #[error("matrix dimension {0} is too small (need at least 50)")]
    BadDimension(usize),
    #[error("eigensolver did not converge")]
    NoConvergence,
    #[error("unknown reference law `{0}`")]
    UnknownLaw(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("{path}: {msg}")]
    Parse { path: String, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
