//! Matching analytic levels against numeric eigenvalues.

use num_complex::Complex64;

use super::spectrum::{richardson_spectrum, NumericSpectrum};
use crate::error::Result;
use crate::grid::Grid;
use crate::potential::{PotentialModel, SymmetryClass, UnitSystem};
use crate::spectra::EnergyRecord;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    Match,
    PartialMatch,
    Mismatch,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Match => "match",
            Verdict::PartialMatch => "partial_match",
            Verdict::Mismatch => "mismatch",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchedPair {
    pub analytic: EnergyRecord,
    pub numeric: Complex64,
    pub abs_error: f64,
    pub rel_error: f64,
    pub within_tol: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonReport {
    /// Ordered by `(l, n)` of the analytic record.
    pub pairs: Vec<MatchedPair>,
    pub unmatched_analytic: Vec<EnergyRecord>,
    /// Sorted by real part, then imaginary part.
    pub unmatched_numeric: Vec<Complex64>,
    pub verdict: Verdict,
    pub tol_abs: f64,
}

impl ComparisonReport {
    pub fn max_abs_error(&self) -> f64 {
        self.pairs.iter().map(|p| p.abs_error).fold(0.0, f64::max)
    }
}

fn record_key(r: &EnergyRecord) -> (u32, u32) {
    (r.l, r.n)
}

/// Greedy nearest matching of the admissible analytic levels to `numeric`.
///
/// Candidate pairs are taken in order of increasing `|ΔE|`; ties are broken
/// by the analytic quantum numbers and the numeric value, never by input
/// position, so the result does not depend on the order of `analytic`.
pub fn compare(analytic: &[EnergyRecord], numeric: &[Complex64], tol_abs: f64) -> ComparisonReport {
    let mut levels: Vec<EnergyRecord> = analytic.iter().filter(|r| r.admissible).copied().collect();
    levels.sort_by_key(record_key);
    levels.dedup_by_key(|r| record_key(r));
    let mut nums = numeric.to_vec();
    super::tridiag::sort_spectrum(&mut nums);

    let mut candidates: Vec<(f64, usize, usize)> = Vec::with_capacity(levels.len() * nums.len());
    for (i, a) in levels.iter().enumerate() {
        for (j, e) in nums.iter().enumerate() {
            candidates.push(((a.energy - e).norm(), i, j));
        }
    }
    candidates.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));

    let mut level_used = vec![false; levels.len()];
    let mut num_used = vec![false; nums.len()];
    let mut pairs = Vec::new();
    for (dist, i, j) in candidates {
        if level_used[i] || num_used[j] {
            continue;
        }
        level_used[i] = true;
        num_used[j] = true;
        let a = levels[i];
        let scale = a.energy.norm();
        pairs.push(MatchedPair {
            analytic: a,
            numeric: nums[j],
            abs_error: dist,
            rel_error: if scale > 0.0 { dist / scale } else { dist },
            within_tol: dist <= tol_abs,
        });
    }
    pairs.sort_by_key(|p| record_key(&p.analytic));

    let unmatched_analytic: Vec<EnergyRecord> = levels
        .iter()
        .zip(&level_used)
        .filter(|(_, used)| !**used)
        .map(|(r, _)| *r)
        .collect();
    let unmatched_numeric = nums
        .iter()
        .zip(&num_used)
        .filter(|(_, used)| !**used)
        .map(|(e, _)| *e)
        .collect();

    let good = pairs.iter().filter(|p| p.within_tol).count();
    let verdict = if good == levels.len() {
        Verdict::Match
    } else if good > 0 {
        Verdict::PartialMatch
    } else {
        Verdict::Mismatch
    };
    ComparisonReport {
        pairs,
        unmatched_analytic,
        unmatched_numeric,
        verdict,
        tol_abs,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verification {
    pub report: ComparisonReport,
    pub spectrum: NumericSpectrum,
    /// Non-Hermitian models are compared for information only.
    pub diagnostic: bool,
}

/// Certified bound-state spectrum of `model` on `grid`, compared with the
/// analytic records. Matching uses the Richardson-extrapolated eigenvalues
/// when both grids agree on the bound-state count.
pub fn verify(
    model: &PotentialModel,
    analytic: &[EnergyRecord],
    grid: &Grid,
    tol_abs: f64,
    units: &UnitSystem,
) -> Result<Verification> {
    let spectrum = richardson_spectrum(model, grid, units, tol_abs)?;
    let numeric = spectrum
        .extrapolated
        .as_ref()
        .unwrap_or(&spectrum.eigenvalues);
    let report = compare(analytic, numeric, tol_abs);
    let diagnostic = model.symmetry_class()? != SymmetryClass::Hermitian;
    Ok(Verification {
        report,
        spectrum,
        diagnostic,
    })
}
