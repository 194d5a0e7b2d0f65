//! Hamiltonian-hierarchy spectra for Morse and Pöschl-Teller potentials.
//!
//! The crate covers six potential families with real or complex couplings,
//! builds their superpotentials and partner potentials, evaluates closed-form
//! spectra and ground states, and checks them against a finite-difference
//! discretization of the Schrödinger operator.

pub mod cli;
pub mod error;
pub mod expr;
pub mod grid;
pub mod hierarchy;
pub mod numeric;
pub mod potential;
pub mod spectra;

pub use error::{Error, Result};
pub use expr::{PotentialExpr, SuperpotentialExpr};
pub use grid::Grid;
pub use hierarchy::{DerivativeScale, Mode};
pub use num_complex::Complex64;
pub use potential::{Family, PotentialModel, SymmetryClass, UnitSystem};
pub use spectra::{EnergyRecord, Formula, QuantumNumbers};
