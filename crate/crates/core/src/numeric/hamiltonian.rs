//! Finite-difference Schrödinger operators.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::potential::{Potential, UnitSystem};

/// Smallest grid accepted for a discretization.
pub const MIN_POINTS: usize = 16;

/// `-(ħ²/2m) d²/dx² + V(x)` on the interior nodes of a grid, three-point
/// stencil, Dirichlet conditions at both endpoints.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscretizedHamiltonian {
    grid: Grid,
    diagonal: Vec<Complex64>,
    off_diagonal: f64,
    threshold: f64,
}

impl DiscretizedHamiltonian {
    pub fn dimension(&self) -> usize {
        self.diagonal.len()
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn diagonal(&self) -> &[Complex64] {
        &self.diagonal
    }

    /// Common value of the sub- and super-diagonal.
    pub fn off_diagonal(&self) -> f64 {
        self.off_diagonal
    }

    /// Continuum threshold of the sampled potential.
    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn is_hermitian(&self) -> bool {
        self.diagonal.iter().all(|z| z.im == 0.0)
    }

    /// Dense copy, mainly for tests and small problems.
    pub fn to_dense(&self) -> nalgebra::DMatrix<Complex64> {
        let n = self.dimension();
        nalgebra::DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                self.diagonal[i]
            } else if i.abs_diff(j) == 1 {
                self.off_diagonal.into()
            } else {
                Complex64::default()
            }
        })
    }

    /// `H v`.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        let n = self.dimension();
        let t = self.off_diagonal;
        (0..n)
            .map(|i| {
                let mut acc = self.diagonal[i] * v[i];
                if i > 0 {
                    acc += t * v[i - 1];
                }
                if i + 1 < n {
                    acc += t * v[i + 1];
                }
                acc
            })
            .collect()
    }
}

pub fn build_hamiltonian<P: Potential + ?Sized>(
    potential: &P,
    grid: &Grid,
    units: &UnitSystem,
) -> Result<DiscretizedHamiltonian> {
    if grid.n_points() < MIN_POINTS {
        return Err(Error::GridTooCoarse {
            n_points: grid.n_points(),
            min: MIN_POINTS,
        });
    }
    let h = grid.spacing();
    let t = units.kinetic_factor() / (h * h);
    let diagonal = grid
        .interior()
        .map(|x| potential.value(x).map(|v| v + 2.0 * t))
        .collect::<Result<Vec<_>>>()?;
    Ok(DiscretizedHamiltonian {
        grid: *grid,
        diagonal,
        off_diagonal: -t,
        threshold: potential.continuum_threshold(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::{FnPotential, PotentialModel};

    #[test]
    fn rejects_coarse_grid() {
        let g = Grid::new(0.0, 1.0, 15).unwrap();
        let err = build_hamiltonian(&FnPotential(|_| 0.0.into()), &g, &UnitSystem::default())
            .unwrap_err();
        assert_eq!(
            err,
            Error::GridTooCoarse {
                n_points: 15,
                min: 16
            }
        );
    }

    #[test]
    fn hermitian_model_gives_self_adjoint_matrix() {
        let m = PotentialModel::morse_general(25.0.into(), 50.0.into(), 1.0).unwrap();
        let h = build_hamiltonian(
            &m,
            &Grid::new(-3.0, 30.0, 200).unwrap(),
            &UnitSystem::default(),
        )
        .unwrap();
        assert!(h.is_hermitian());
        let dense = h.to_dense();
        assert_eq!(dense, dense.adjoint());
    }

    #[test]
    fn complex_potential_keeps_real_off_diagonal() {
        let m = PotentialModel::morse_non_pt(1.0, 1.0).unwrap();
        let h = build_hamiltonian(
            &m,
            &Grid::new(-3.0, 30.0, 200).unwrap(),
            &UnitSystem::default(),
        )
        .unwrap();
        assert!(!h.is_hermitian());
        assert!(h.diagonal().iter().any(|z| z.im != 0.0));
        let dense = h.to_dense();
        assert_eq!(dense, dense.transpose());
        assert!(h.off_diagonal() < 0.0);
    }

    #[test]
    fn pole_is_reported() {
        let m = PotentialModel::poschl_teller((-1.0).into(), (-1.0).into(), 1.0).unwrap();
        let g = Grid::symmetric(2.0, 101).unwrap();
        assert!(matches!(
            build_hamiltonian(&m, &g, &UnitSystem::default()),
            Err(Error::PoleOnDomain { .. })
        ));
    }
}
