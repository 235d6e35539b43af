//! Exact simulation of Gaussian quantum-optical networks.
//!
//! Optical modes are tracked as linear expressions over an expanding basis of
//! independent vacuum inputs, so beam splitters, squeezers and parametric
//! amplifiers propagate quadrature means and (co)variances in closed form.
//! On top of that sit homodyne observables with electronic subtraction
//! ([`detection`]), builders for the beam-splitter / amplifier signal-tapping
//! circuits and their figure-of-merit reports ([`schemes`]), and a seeded
//! Monte Carlo oracle that re-derives every analytic moment stochastically
//! ([`montecarlo`]).

pub mod detection;
pub mod error;
pub mod gaussian;
pub mod montecarlo;
pub mod schemes;

pub use error::{Error, Result};
