//! Symmetric tridiagonal eigenproblems.
//!
//! Eigenvalues come from the implicit QL iteration with Wilkinson shifts.
//! The same iteration runs over complex entries with complex orthogonal
//! rotations (`c² + s² = 1`), which handles complex-symmetric matrices such
//! as a Schrödinger operator with a complex potential. Eigenvectors are
//! obtained on request by inverse iteration.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Scalar field for the QL iteration.
pub trait TridiagScalar:
    Copy
    + PartialEq
    + std::fmt::Debug
    + std::ops::Add<Output = Self>
    + std::ops::Sub<Output = Self>
    + std::ops::Mul<Output = Self>
    + std::ops::Div<Output = Self>
    + std::ops::Neg<Output = Self>
    + std::ops::AddAssign
    + std::ops::SubAssign
    + Send
    + Sync
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_f64(v: f64) -> Self;
    fn abs(self) -> f64;
    /// `sqrt(a² + b²)`, avoiding overflow for real inputs.
    fn hypot(a: Self, b: Self) -> Self;
    /// `r` or `-r`, whichever makes `|g + r|` larger.
    fn sign_like(r: Self, g: Self) -> Self;
    fn to_complex(self) -> Complex64;
    fn is_finite(self) -> bool;
}

impl TridiagScalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_f64(v: f64) -> Self {
        v
    }
    fn abs(self) -> f64 {
        f64::abs(self)
    }
    fn hypot(a: Self, b: Self) -> Self {
        a.hypot(b)
    }
    fn sign_like(r: Self, g: Self) -> Self {
        if g >= 0.0 {
            r.abs()
        } else {
            -r.abs()
        }
    }
    fn to_complex(self) -> Complex64 {
        self.into()
    }
    fn is_finite(self) -> bool {
        f64::is_finite(self)
    }
}

impl TridiagScalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn from_f64(v: f64) -> Self {
        v.into()
    }
    fn abs(self) -> f64 {
        self.norm()
    }
    fn hypot(a: Self, b: Self) -> Self {
        let scale = a.norm().max(b.norm());
        if scale == 0.0 {
            return Self::zero();
        }
        let (a, b) = (a / scale, b / scale);
        (a * a + b * b).sqrt() * scale
    }
    fn sign_like(r: Self, g: Self) -> Self {
        if (g + r).norm() >= (g - r).norm() {
            r
        } else {
            -r
        }
    }
    fn to_complex(self) -> Complex64 {
        self
    }
    fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }
}

const MAX_SWEEPS: usize = 60;

/// Eigenvalues of the symmetric tridiagonal matrix with diagonal `d` and
/// off-diagonal `e` (`e[i]` couples `i` and `i + 1`). Unsorted.
pub fn tridiagonal_eigenvalues<T: TridiagScalar>(diag: &[T], off: &[T]) -> Result<Vec<T>> {
    let n = diag.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    if off.len() + 1 != n {
        return Err(Error::InvalidGrid(format!(
            "off-diagonal has length {}, expected {}",
            off.len(),
            n - 1
        )));
    }
    let mut d = diag.to_vec();
    let mut e = off.to_vec();
    e.push(T::zero());

    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_SWEEPS {
                return Err(Error::ConvergenceFailure(format!(
                    "QL iteration stalled at index {l} after {MAX_SWEEPS} sweeps"
                )));
            }
            let mut g = (d[l + 1] - d[l]) / (T::from_f64(2.0) * e[l]);
            let mut r = T::hypot(g, T::one());
            g = d[m] - d[l] + e[l] / (g + T::sign_like(r, g));
            let (mut s, mut c, mut p) = (T::one(), T::one(), T::zero());
            let mut deflated = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = T::hypot(f, g);
                e[i + 1] = r;
                if r.abs() == 0.0 {
                    d[i + 1] -= p;
                    e[m] = T::zero();
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + T::from_f64(2.0) * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = T::zero();
            if !d[l].is_finite() {
                return Err(Error::ConvergenceFailure(format!(
                    "QL iteration produced a non-finite value at index {l}"
                )));
            }
        }
    }
    Ok(d)
}

/// Eigenvector of the tridiagonal matrix for an eigenvalue estimate `shift`,
/// by inverse iteration. Returned with unit Euclidean norm and its largest
/// component real and positive.
pub fn inverse_iteration(
    diag: &[Complex64],
    off: &[Complex64],
    shift: Complex64,
) -> Result<Vec<Complex64>> {
    let n = diag.len();
    let scale = diag
        .iter()
        .chain(off)
        .map(|z| z.norm())
        .fold(0.0, f64::max)
        .max(1.0);
    // nudge off the exact eigenvalue so the factorization stays regular
    let sigma = shift + Complex64::new(1e-13 * scale, 1e-13 * scale);
    let lu = TridiagLu::factor(diag, off, sigma)?;
    // deterministic, non-symmetric start so no eigenvector is orthogonal to it
    let mut v: Vec<Complex64> = (0..n)
        .map(|i| Complex64::new(1.0 + 0.1 * ((i * 7919) % 13) as f64, 0.0))
        .collect();
    for _ in 0..3 {
        v = lu.solve(&v);
        normalize(&mut v)?;
    }
    Ok(v)
}

fn normalize(v: &mut [Complex64]) -> Result<()> {
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if !(norm.is_finite() && norm > 0.0) {
        return Err(Error::ConvergenceFailure(
            "inverse iteration produced a degenerate vector".into(),
        ));
    }
    let peak = v
        .iter()
        .copied()
        .max_by(|a, b| a.norm().total_cmp(&b.norm()))
        .unwrap();
    let phase = peak.conj() / peak.norm();
    for z in v.iter_mut() {
        *z = *z * phase / norm;
    }
    Ok(())
}

/// LU factorization of `T - σI` with partial pivoting.
struct TridiagLu {
    // row i of U has entries at i, i+1, i+2
    u0: Vec<Complex64>,
    u1: Vec<Complex64>,
    u2: Vec<Complex64>,
    mult: Vec<Complex64>,
    swapped: Vec<bool>,
}

impl TridiagLu {
    fn factor(diag: &[Complex64], off: &[Complex64], sigma: Complex64) -> Result<Self> {
        let n = diag.len();
        let mut u0 = vec![Complex64::default(); n];
        let mut u1 = vec![Complex64::default(); n];
        let mut u2 = vec![Complex64::default(); n];
        let mut mult = vec![Complex64::default(); n];
        let mut swapped = vec![false; n];

        let tiny = 1e-300;
        // current pivot row, held as (entry at i, entry at i+1, entry at i+2)
        let mut row = (
            diag[0] - sigma,
            off.first().copied().unwrap_or_default(),
            Complex64::default(),
        );
        for i in 0..n {
            if i + 1 == n {
                u0[i] = if row.0.norm() < tiny {
                    Complex64::new(tiny, 0.0)
                } else {
                    row.0
                };
                break;
            }
            let below = (
                off[i],
                diag[i + 1] - sigma,
                off.get(i + 1).copied().unwrap_or_default(),
            );
            let (pivot, other) = if below.0.norm() > row.0.norm() {
                swapped[i] = true;
                (below, (row.0, row.1, row.2))
            } else {
                (row, below)
            };
            let p0 = if pivot.0.norm() < tiny {
                Complex64::new(tiny, 0.0)
            } else {
                pivot.0
            };
            let m = other.0 / p0;
            u0[i] = p0;
            u1[i] = pivot.1;
            u2[i] = pivot.2;
            mult[i] = m;
            row = (
                other.1 - m * pivot.1,
                other.2 - m * pivot.2,
                Complex64::default(),
            );
        }
        if u0.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::ConvergenceFailure("singular shifted matrix".into()));
        }
        Ok(Self {
            u0,
            u1,
            u2,
            mult,
            swapped,
        })
    }

    fn solve(&self, rhs: &[Complex64]) -> Vec<Complex64> {
        let n = rhs.len();
        let mut y = rhs.to_vec();
        for i in 0..n.saturating_sub(1) {
            if self.swapped[i] {
                y.swap(i, i + 1);
            }
            let yi = y[i];
            y[i + 1] -= self.mult[i] * yi;
        }
        let mut x = vec![Complex64::default(); n];
        for i in (0..n).rev() {
            let mut acc = y[i];
            if i + 1 < n {
                acc -= self.u1[i] * x[i + 1];
            }
            if i + 2 < n {
                acc -= self.u2[i] * x[i + 2];
            }
            x[i] = acc / self.u0[i];
        }
        x
    }
}

/// Sorts by real part, then imaginary part.
pub fn sort_spectrum(values: &mut [Complex64]) {
    values.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}
