use core::fmt;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A constructor or operation received a parameter outside its domain.
    InvalidParameter(&'static str),
    /// Two objects that must share a Hilbert-space dimension do not.
    DimensionMismatch { expected: usize, found: usize },
    /// NaN or infinite matrix input.
    NonFinite,
    /// The QL sweep for `index` did not deflate within the iteration cap.
    NoConvergence { index: usize, fingerprint: u64 },
    /// `|z| >= 1`: coherent states at the poles are basis states.
    Pole,
    /// The energy is not reached on the requested phase line.
    Unreachable { energy: f64, phi: f64 },
    /// Both roots of the energy equation are complex.
    ComplexRoots { energy: f64, phi: f64 },
    /// Energy outside the band a classical quantity is defined on.
    OutOfBand { energy: f64 },
    /// The linearized energy landscape is flat (a fixed point).
    FixedPoint,
    /// An asymptotic formula was asked for outside its regime.
    OutOfRegime(&'static str),
    /// A root could not be bracketed.
    Bracketing { target: f64 },
    /// An energy window selected no eigenstates.
    EmptyWindow,
    /// A time window is not covered by the sampled range.
    RangeViolation,
}

pub type Result<T> = core::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::NonFinite => f.write_str("matrix contains NaN or infinite entries"),
            Error::NoConvergence { index, fingerprint } => write!(
                f,
                "QL iteration did not converge for eigenvalue {index} (matrix {fingerprint:016x})"
            ),
            Error::Pole => f.write_str("|z| >= 1: pole states are basis states"),
            Error::Unreachable { energy, phi } => {
                write!(f, "energy {energy} is not reachable at phase {phi}")
            }
            Error::ComplexRoots { energy, phi } => {
                write!(f, "energy equation has complex roots at E = {energy}, phi = {phi}")
            }
            Error::OutOfBand { energy } => write!(f, "energy {energy} is outside the band"),
            Error::FixedPoint => f.write_str("degenerate linearization at a classical fixed point"),
            Error::OutOfRegime(what) => write!(f, "out of regime: {what}"),
            Error::Bracketing { target } => write!(f, "could not bracket root for target {target}"),
            Error::EmptyWindow => f.write_str("energy window contains no eigenstates"),
            Error::RangeViolation => f.write_str("time window outside the sampled range"),
        }
    }
}

impl core::error::Error for Error {}
