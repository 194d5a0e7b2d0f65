//! Finite-difference oracle for the analytic spectra.

pub mod hamiltonian;
pub mod scan;
pub mod spectrum;
pub mod tridiag;
pub mod verify;

pub use hamiltonian::{build_hamiltonian, DiscretizedHamiltonian};
pub use scan::{
    conjugate_pairing, reality_scan, summarize, PairingReport, ScanAxis, ScanPoint, ScanSummary,
};
pub use spectrum::{
    bound_spectrum, bound_states, eigen_spectrum, richardson_spectrum, NumericSpectrum,
};
pub use verify::{compare, verify, ComparisonReport, MatchedPair, Verdict, Verification};
