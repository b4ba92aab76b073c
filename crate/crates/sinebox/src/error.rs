use thiserror::Error;

/// Everything that can go wrong between defining a potential and reading
/// off diagnostics. Numerical failures (a rejected eigendecomposition, a
/// missing minimum) are kept distinct from plain bad input so callers can
/// map them to different exit paths.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid basis: {0}")]
    InvalidBasis(String),

    #[error("invalid potential: {0}")]
    InvalidPotential(String),

    #[error(
        "potential is defined on a {found:?} box but the operator uses {expected:?}; \
         rebuild the potential for the operator's domain"
    )]
    DomainMismatch { expected: (f64, f64), found: (f64, f64) },

    #[error("could not parse potential: {0}")]
    ParsePotential(String),

    #[error("could not parse curve file: {0}")]
    ParseCurve(String),

    #[error("invalid curve samples: {0}")]
    InvalidCurve(String),

    #[error("eigendecomposition failed: {0}")]
    Eigen(String),

    #[error("eigendecomposition rejected: {0}")]
    Verification(String),

    #[error("no interior minimum of the ground energy in [{lo}, {hi}]; widen the bracket")]
    NoInteriorMinimum { lo: f64, hi: f64 },

    #[error("iteration failed to converge: {0}")]
    NoConvergence(String),

    #[error("length optimization failed at N={n_basis}: {source}")]
    CurvePoint {
        n_basis: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("point ({x}, {y}) lies outside the box")]
    OutOfDomain { x: f64, y: f64 },

    #[error("state {state} out of range ({count} states available)")]
    StateOutOfRange { state: usize, count: usize },

    #[error("reference value is zero; relative error is undefined")]
    ZeroReference,

    #[error(
        "state {state} sits in a degenerate cluster of size {size}; a pointwise \
         comparison against a single reference state is not meaningful there"
    )]
    DegenerateState { state: usize, size: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// True for failures of the numerics themselves, as opposed to
    /// malformed input or configuration.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Eigen(_)
                | Error::Verification(_)
                | Error::NoInteriorMinimum { .. }
                | Error::NoConvergence(_)
                | Error::CurvePoint { .. }
        )
    }
}
