//! Parameter sweeps for spectral reality, and the conjugate-pairing check.

use num_complex::Complex64;
use rayon::prelude::*;

use super::hamiltonian::build_hamiltonian;
use super::spectrum::{bound_spectrum, eigen_spectrum};
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::potential::{reality_condition, PotentialModel, UnitSystem};

/// One lattice direction: a named model parameter (see
/// [`PotentialModel::with_param`]) and the values it takes.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanAxis {
    pub name: String,
    pub values: Vec<f64>,
}

impl ScanAxis {
    pub fn new(name: impl Into<String>, values: Vec<f64>) -> Self {
        Self {
            name: name.into(),
            values,
        }
    }

    /// `count` values `start, start + step, ...`.
    pub fn linear(name: impl Into<String>, start: f64, step: f64, count: usize) -> Self {
        Self::new(name, (0..count).map(|i| start + step * i as f64).collect())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanPoint {
    pub param1: f64,
    pub param2: f64,
    /// Largest `|Im E|` over the retained bound states.
    pub max_im: f64,
    pub is_real: bool,
    /// Reality condition on `(V0, q)`; `None` for families without those
    /// couplings.
    pub condition_holds: Option<bool>,
    pub retained: usize,
    /// `Ok` or the message of the error that stopped this point.
    pub status: std::result::Result<(), String>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanSummary {
    pub points: usize,
    pub failed: usize,
    pub real: usize,
    pub condition_true: usize,
    /// Successful points where `is_real` equals `condition_holds`.
    pub agree: usize,
    /// `agree / compared`, where `compared` counts successful points with a
    /// defined condition.
    pub agreement_rate: f64,
}

/// Evaluates every lattice point `(a, b)` of `axes.0 × axes.1` (first axis
/// outermost). A point is real when every retained bound state has
/// `|Im E| < tol_imag`. Points run in parallel; the output is in lattice
/// order.
pub fn reality_scan(
    base: &PotentialModel,
    axes: (&ScanAxis, &ScanAxis),
    grid: &Grid,
    tol_imag: f64,
    units: &UnitSystem,
) -> Vec<ScanPoint> {
    let lattice: Vec<(f64, f64)> = axes
        .0
        .values
        .iter()
        .flat_map(|&a| axes.1.values.iter().map(move |&b| (a, b)))
        .collect();
    lattice
        .into_par_iter()
        .map(|(a, b)| scan_point(base, axes, (a, b), grid, tol_imag, units))
        .collect()
}

fn scan_point(
    base: &PotentialModel,
    axes: (&ScanAxis, &ScanAxis),
    (a, b): (f64, f64),
    grid: &Grid,
    tol_imag: f64,
    units: &UnitSystem,
) -> ScanPoint {
    let mut point = ScanPoint {
        param1: a,
        param2: b,
        max_im: 0.0,
        is_real: false,
        condition_holds: None,
        retained: 0,
        status: Ok(()),
    };
    let model = match base
        .with_param(&axes.0.name, a)
        .and_then(|m| m.with_param(&axes.1.name, b))
    {
        Ok(m) => m,
        Err(e) => {
            point.status = Err(e.to_string());
            return point;
        }
    };
    point.condition_holds = model
        .poschl_teller_couplings()
        .map(|(v0, q)| reality_condition(v0, q));
    match bound_spectrum(&model, grid, units) {
        Ok(spec) => {
            point.retained = spec.eigenvalues.len();
            point.max_im = spec
                .eigenvalues
                .iter()
                .map(|e| e.im.abs())
                .fold(0.0, f64::max);
            point.is_real = point.max_im < tol_imag;
        }
        Err(e) => point.status = Err(e.to_string()),
    }
    point
}

pub fn summarize(points: &[ScanPoint]) -> ScanSummary {
    let ok: Vec<&ScanPoint> = points.iter().filter(|p| p.status.is_ok()).collect();
    let compared: Vec<&&ScanPoint> = ok.iter().filter(|p| p.condition_holds.is_some()).collect();
    let agree = compared
        .iter()
        .filter(|p| p.condition_holds == Some(p.is_real))
        .count();
    ScanSummary {
        points: points.len(),
        failed: points.len() - ok.len(),
        real: ok.iter().filter(|p| p.is_real).count(),
        condition_true: ok
            .iter()
            .filter(|p| p.condition_holds == Some(true))
            .count(),
        agree,
        agreement_rate: if compared.is_empty() {
            f64::NAN
        } else {
            agree as f64 / compared.len() as f64
        },
    }
}

/// Outcome of the conjugate-pairing check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairingReport {
    /// Eigenvalues with `|Im E| > tol`.
    pub complex_count: usize,
    /// Of those, how many have a partner within `tol` of their conjugate.
    pub paired: usize,
    /// Largest distance from an eigenvalue's conjugate to its nearest
    /// partner.
    pub worst_gap: f64,
}

impl PairingReport {
    pub fn holds(&self) -> bool {
        self.paired == self.complex_count
    }
}

/// For every `E` with `|Im E| > tol`, looks for another eigenvalue within
/// `tol` of `conj(E)`.
pub fn conjugate_pairing(eigenvalues: &[Complex64], tol: f64) -> PairingReport {
    let mut sorted = eigenvalues.to_vec();
    super::tridiag::sort_spectrum(&mut sorted);
    let mut report = PairingReport {
        complex_count: 0,
        paired: 0,
        worst_gap: 0.0,
    };
    for (i, e) in sorted.iter().enumerate() {
        if e.im.abs() <= tol {
            continue;
        }
        report.complex_count += 1;
        let target = e.conj();
        // candidates have nearby real parts; the list is sorted by real part
        let lo = sorted.partition_point(|z| z.re < target.re - tol);
        let gap = sorted[lo..]
            .iter()
            .enumerate()
            .take_while(|(_, z)| z.re <= target.re + tol)
            .filter(|(j, _)| lo + j != i)
            .map(|(_, z)| (z - target).norm())
            .fold(f64::INFINITY, f64::min);
        if gap <= tol {
            report.paired += 1;
        }
        report.worst_gap = report.worst_gap.max(gap);
    }
    report
}

/// Full discrete spectrum of a model, used for the pairing check. The grid
/// must be symmetric so that parity maps nodes onto nodes.
pub fn full_spectrum(
    model: &PotentialModel,
    grid: &Grid,
    units: &UnitSystem,
) -> Result<Vec<Complex64>> {
    if !grid.is_symmetric() {
        return Err(Error::InvalidGrid(
            "pairing check needs a grid symmetric about 0".into(),
        ));
    }
    let h = build_hamiltonian(model, grid, units)?;
    Ok(eigen_spectrum(&h, h.dimension())?.eigenvalues)
}
