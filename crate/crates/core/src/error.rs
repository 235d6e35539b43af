//! Crate-wide error type.

use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A parameter fell outside its allowed interval.
    OutOfRange {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },
    /// A quantity that must be strictly positive was not.
    NonPositive { name: &'static str, value: f64 },
    /// Modes owned by different `Network`s were mixed in one expression.
    NetworkMismatch,
    /// A physicality check failed: the bosonic commutator norm of a
    /// constructed mode drifted from unity.
    InvariantViolation { context: &'static str, value: f64 },
    /// An operation that divides by a variance received a zero-variance
    /// observable.
    ZeroVariance { context: &'static str },
    /// SNR requested for a zero-variance observable with a nonzero mean.
    InfiniteSnr,
    /// Monte Carlo sampling requires real quadrature coefficients at the
    /// measured phases.
    ComplexCoefficients { imag: f64 },
    /// Monte Carlo sampling needs at least one sample.
    ZeroSamples,
    /// Two lists that must be aligned had different lengths.
    LengthMismatch { expected: usize, actual: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::OutOfRange {
                name,
                value,
                lo,
                hi,
            } => {
                if hi.is_infinite() {
                    write!(f, "{name} = {value} is out of range (must be >= {lo})")
                } else {
                    write!(f, "{name} = {value} is out of range [{lo}, {hi}]")
                }
            }
            Error::NonPositive { name, value } => {
                write!(f, "{name} = {value} must be strictly positive")
            }
            Error::NetworkMismatch => {
                write!(f, "modes from different networks cannot be combined")
            }
            Error::InvariantViolation { context, value } => write!(
                f,
                "{context}: commutator norm {value} deviates from 1 beyond tolerance"
            ),
            Error::ZeroVariance { context } => {
                write!(f, "{context}: observable has zero variance")
            }
            Error::InfiniteSnr => {
                write!(f, "SNR is infinite: nonzero mean with zero variance")
            }
            Error::ComplexCoefficients { imag } => write!(
                f,
                "observable has complex quadrature coefficients (|Im| = {imag:e}); \
                 the Gaussian sampling oracle only covers real coefficient vectors"
            ),
            Error::ZeroSamples => write!(f, "sample count must be at least 1"),
            Error::LengthMismatch { expected, actual } => {
                write!(f, "length mismatch: expected {expected}, got {actual}")
            }
        }
    }
}

impl std::error::Error for Error {}
