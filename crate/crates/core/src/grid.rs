//! Uniform real-coordinate grids.

use crate::error::{Error, Result};

/// Uniform grid on `[x_min, x_max]` including both endpoints.
///
/// When used for a finite-difference Hamiltonian the endpoints carry the
/// Dirichlet condition and only the interior points are unknowns.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    x_min: f64,
    x_max: f64,
    n_points: usize,
}

impl Grid {
    pub fn new(x_min: f64, x_max: f64, n_points: usize) -> Result<Self> {
        if !(x_min.is_finite() && x_max.is_finite()) {
            return Err(Error::InvalidGrid("bounds must be finite".into()));
        }
        if x_min >= x_max {
            return Err(Error::InvalidGrid(format!(
                "x_min ({x_min}) must be below x_max ({x_max})"
            )));
        }
        if n_points < 2 {
            return Err(Error::InvalidGrid("need at least two points".into()));
        }
        Ok(Self {
            x_min,
            x_max,
            n_points,
        })
    }

    /// Grid on `[-half_width, half_width]`.
    pub fn symmetric(half_width: f64, n_points: usize) -> Result<Self> {
        Self::new(-half_width, half_width, n_points)
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn spacing(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n_points - 1) as f64
    }

    pub fn point(&self, i: usize) -> f64 {
        if i + 1 == self.n_points {
            self.x_max
        } else if self.x_min == -self.x_max && 2 * i > self.n_points - 1 {
            // mirror the lower half so that nodes are exactly symmetric
            -self.point(self.n_points - 1 - i)
        } else {
            self.x_min + i as f64 * self.spacing()
        }
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.n_points).map(move |i| self.point(i))
    }

    /// Points strictly inside the interval.
    pub fn interior(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (1..self.n_points - 1).map(move |i| self.point(i))
    }

    /// Same interval at half the spacing (`2N - 1` points).
    pub fn refined(&self) -> Self {
        Self {
            n_points: 2 * (self.n_points - 1) + 1,
            ..*self
        }
    }

    /// True when the grid is mirror-symmetric about `x = 0`, so that every
    /// node `x_i` has its partner `-x_i = x_{N-1-i}`.
    pub fn is_symmetric(&self) -> bool {
        let scale = self.x_max.abs().max(self.x_min.abs());
        (self.x_min + self.x_max).abs() <= 1e-12 * scale
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spacing_and_endpoints() {
        let g = Grid::new(0.0, 1.0, 11).unwrap();
        assert!((g.spacing() - 0.1).abs() < 1e-15);
        assert_eq!(g.point(0), 0.0);
        assert_eq!(g.point(10), 1.0);
        assert_eq!(g.interior().len(), 9);
    }

    #[test]
    fn refinement_halves_spacing() {
        let g = Grid::new(-3.0, 30.0, 4000).unwrap();
        let r = g.refined();
        assert_eq!(r.n_points(), 7999);
        assert!((2.0 * r.spacing() - g.spacing()).abs() < 1e-15);
        // every coarse node is a fine node
        assert!((r.point(2 * 17) - g.point(17)).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_bounds() {
        assert!(Grid::new(1.0, 1.0, 10).is_err());
        assert!(Grid::new(2.0, 1.0, 10).is_err());
        assert!(Grid::new(0.0, f64::NAN, 10).is_err());
        assert!(Grid::new(0.0, 1.0, 1).is_err());
    }

    #[test]
    fn symmetry_detection() {
        assert!(Grid::symmetric(5.0, 101).unwrap().is_symmetric());
        assert!(!Grid::new(-3.0, 30.0, 101).unwrap().is_symmetric());
    }
}
