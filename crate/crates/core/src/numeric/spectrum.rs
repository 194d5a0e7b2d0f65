//! Eigenvalues of discretized Hamiltonians, bound-state extraction and the
//! Richardson certificate.

use num_complex::Complex64;

use super::hamiltonian::{build_hamiltonian, DiscretizedHamiltonian};
use super::tridiag::{inverse_iteration, sort_spectrum, tridiagonal_eigenvalues};
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::potential::{Potential, UnitSystem};

/// Dense fallback is only attempted below this dimension.
const DENSE_FALLBACK_MAX: usize = 600;

/// Relative edge amplitude below which an eigenvector counts as decayed.
pub const EDGE_DECAY: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct NumericSpectrum {
    /// Sorted by real part, then imaginary part.
    pub eigenvalues: Vec<Complex64>,
    /// Unit-norm eigenvectors on the interior nodes, one per eigenvalue.
    pub eigenvectors: Option<Vec<Vec<Complex64>>>,
    pub grid: Grid,
    /// Set by the Richardson certificate; `false` for a single-grid solve.
    pub converged: bool,
    /// `max |E(h) - E(h/2)|` over the certified levels (infinite until
    /// certified).
    pub richardson_delta: f64,
    /// `(4 E(h/2) - E(h)) / 3` for the certified levels.
    pub extrapolated: Option<Vec<Complex64>>,
    /// Continuum threshold of the underlying potential.
    pub threshold: f64,
}

fn all_eigenvalues(h: &DiscretizedHamiltonian) -> Result<Vec<Complex64>> {
    let n = h.dimension();
    let t = h.off_diagonal();
    let mut values = if h.is_hermitian() {
        let d: Vec<f64> = h.diagonal().iter().map(|z| z.re).collect();
        tridiagonal_eigenvalues(&d, &vec![t; n - 1])?
            .into_iter()
            .map(Complex64::from)
            .collect()
    } else {
        let off = vec![Complex64::from(t); n - 1];
        match tridiagonal_eigenvalues(h.diagonal(), &off) {
            Ok(v) => v,
            Err(err) if n <= DENSE_FALLBACK_MAX => {
                match nalgebra::Schur::new(h.to_dense()).eigenvalues() {
                    Some(v) => v.iter().copied().collect(),
                    None => return Err(err),
                }
            }
            Err(err) => return Err(err),
        }
    };
    sort_spectrum(&mut values);
    Ok(values)
}

/// The `k` lowest eigenvalues by real part (`k` is clamped to the
/// dimension). No eigenvectors.
pub fn eigen_spectrum(h: &DiscretizedHamiltonian, k: usize) -> Result<NumericSpectrum> {
    let mut values = all_eigenvalues(h)?;
    values.truncate(k);
    Ok(NumericSpectrum {
        eigenvalues: values,
        eigenvectors: None,
        grid: *h.grid(),
        converged: false,
        richardson_delta: f64::INFINITY,
        extrapolated: None,
        threshold: h.threshold(),
    })
}

/// As [`eigen_spectrum`] keeping only eigenvalues with `Re E` below the
/// threshold, each with its eigenvector.
pub fn below_threshold_with_vectors(h: &DiscretizedHamiltonian) -> Result<NumericSpectrum> {
    let mut spec = eigen_spectrum(h, h.dimension())?;
    spec.eigenvalues.retain(|e| e.re < h.threshold());
    attach_eigenvectors(h, &mut spec)?;
    Ok(spec)
}

pub fn attach_eigenvectors(h: &DiscretizedHamiltonian, spec: &mut NumericSpectrum) -> Result<()> {
    let off = vec![Complex64::from(h.off_diagonal()); h.dimension() - 1];
    let vectors = spec
        .eigenvalues
        .iter()
        .map(|&e| inverse_iteration(h.diagonal(), &off, e))
        .collect::<Result<Vec<_>>>()?;
    spec.eigenvectors = Some(vectors);
    Ok(())
}

fn decays_at_edges(v: &[Complex64]) -> bool {
    let peak = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let (first, last) = (v[0].norm(), v[v.len() - 1].norm());
    peak > 0.0 && first < EDGE_DECAY * peak && last < EDGE_DECAY * peak
}

/// Eigenvalues below the continuum threshold whose eigenvectors, when
/// present, decay at both boundaries.
pub fn bound_states(spec: &NumericSpectrum) -> Vec<Complex64> {
    bound_state_indices(spec)
        .into_iter()
        .map(|i| spec.eigenvalues[i])
        .collect()
}

pub fn bound_state_indices(spec: &NumericSpectrum) -> Vec<usize> {
    (0..spec.eigenvalues.len())
        .filter(|&i| {
            spec.eigenvalues[i].re < spec.threshold
                && spec
                    .eigenvectors
                    .as_ref()
                    .is_none_or(|vs| decays_at_edges(&vs[i]))
        })
        .collect()
}

/// Bound states of a potential on a grid, with eigenvectors.
pub fn bound_spectrum<P: Potential + ?Sized>(
    potential: &P,
    grid: &Grid,
    units: &UnitSystem,
) -> Result<NumericSpectrum> {
    let h = build_hamiltonian(potential, grid, units)?;
    let mut spec = below_threshold_with_vectors(&h)?;
    let keep = bound_state_indices(&spec);
    let vectors = spec.eigenvectors.take().unwrap();
    spec.eigenvalues = keep.iter().map(|&i| spec.eigenvalues[i]).collect();
    spec.eigenvectors = Some(keep.iter().map(|&i| vectors[i].clone()).collect());
    Ok(spec)
}

/// Bound states on `grid` and on its refinement. The returned spectrum
/// carries the fine-grid eigenvalues; it is `converged` when both grids
/// find the same number of bound states and every level moves by less than
/// `tol_abs / 2`.
pub fn richardson_spectrum<P: Potential + Sync + ?Sized>(
    potential: &P,
    grid: &Grid,
    units: &UnitSystem,
    tol_abs: f64,
) -> Result<NumericSpectrum> {
    if !(tol_abs > 0.0) {
        return Err(Error::InvalidGrid(format!(
            "tolerance must be positive, got {tol_abs}"
        )));
    }
    let fine_grid = grid.refined();
    let (coarse, fine) = rayon::join(
        || bound_spectrum(potential, grid, units),
        || bound_spectrum(potential, &fine_grid, units),
    );
    let (coarse, mut fine) = (coarse?, fine?);
    if coarse.eigenvalues.len() == fine.eigenvalues.len() {
        let delta = coarse
            .eigenvalues
            .iter()
            .zip(&fine.eigenvalues)
            .map(|(c, f)| (c - f).norm())
            .fold(0.0, f64::max);
        fine.richardson_delta = delta;
        fine.converged = delta < tol_abs / 2.0;
        fine.extrapolated = Some(
            coarse
                .eigenvalues
                .iter()
                .zip(&fine.eigenvalues)
                .map(|(c, f)| (4.0 * f - c) / 3.0)
                .collect(),
        );
    }
    Ok(fine)
}
