//! Quantum Otto and Stirling heat-engine cycles with a pair of coupled
//! harmonic oscillators as the working medium, in commutative,
//! non-commutative, and generalized non-commutative phase space.
//!
//! The crate keeps two computation routes side by side throughout: the
//! printed closed-form thermodynamics of each phase-space structure, and an
//! exact spectral route built from the geometric-series partition function
//! of the two-mode spectrum. Their quantified disagreement is a first-class
//! output (see [`verify`]).
//!
//! Natural units: hbar = k_B = 1.

pub mod cycles;
pub mod error;
pub mod runner;
pub mod spectra;
pub mod thermo;
pub mod verify;

pub use error::{EngineError, Result};
