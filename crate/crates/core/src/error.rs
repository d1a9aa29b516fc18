use std::fmt;

/// Errors shared by all modules of the crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Evaluation requested exactly at a dispersion branch point
    /// (Ω = 0 non-relativistic, |Ω| = mc² relativistic).
    Threshold { omega: f64 },
    /// Ω lies exactly on a branch cut and no sheet was specified.
    OnBranchCut { omega: f64 },
    /// Relativistic quantity requested outside the causal region x < ct.
    CausalRegion { x: f64, ct: f64 },
    /// Argument outside the domain of the operation.
    Domain(String),
    /// Operation called outside its validity regime (band condition,
    /// near-front window, short/long-time tail window).
    Regime(String),
    /// Invalid model, source or settings parameters.
    InvalidInput(String),
    /// Adaptive quadrature failed to reach the requested tolerance.
    NonConvergence {
        context: String,
        est_error: f64,
        subdivisions: u32,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Threshold { omega } => {
                write!(
                    f,
                    "kinetic frequency {omega} is at a dispersion branch point"
                )
            }
            Error::OnBranchCut { omega } => {
                write!(f, "Ω = {omega} lies on a branch cut and no sheet was given")
            }
            Error::CausalRegion { x, ct } => {
                write!(f, "point x = {x} outside the causal region (ct = {ct})")
            }
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Regime(msg) => write!(f, "regime error: {msg}"),
            Error::InvalidInput(msg) => write!(f, "invalid input: {msg}"),
            Error::NonConvergence {
                context,
                est_error,
                subdivisions,
            } => write!(
                f,
                "quadrature did not converge in {context} after {subdivisions} subdivisions \
                 (estimated error {est_error:.3e})"
            ),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
