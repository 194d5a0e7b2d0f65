//! Superpotentials, the Riccati map and the Hamiltonian hierarchy.
//!
//! Everything here lives in reduced units where the Schrödinger operator is
//! `-d²/dx² + U(x)` with `U = (2m/ħ²) V`; the identity tying a hierarchy
//! member to its superpotential is
//!
//! ```text
//! U_l(x) - e_l = W_l(x)² - s W_l'(x)
//! ```
//!
//! with `s = 1`, or `s = 1/α` for the scaled variant used with the Morse
//! ansatz. With the default unit system reduced and physical values agree.
//!
//! Two modes coexist. [`Mode::PaperLiteral`] uses the literal ansätze and
//! partner potentials verbatim, so their residuals measure how consistent the
//! literal formulas are. [`Mode::SelfConsistent`] derives the superpotential
//! coefficients from the target potential, so the identity holds exactly.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::expr::{PotentialExpr, SuperpotentialExpr};
use crate::grid::Grid;
use crate::potential::{PotentialModel, UnitSystem, I};
use crate::spectra;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    PaperLiteral,
    SelfConsistent,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::PaperLiteral => "paper_literal",
            Mode::SelfConsistent => "self_consistent",
        }
    }
}

/// Prefactor of `W'` in the Riccati map.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DerivativeScale {
    /// `W² - W'`.
    Unit,
    /// `W² - W'/α`.
    InverseAlpha,
}

impl DerivativeScale {
    pub fn name(self) -> &'static str {
        match self {
            DerivativeScale::Unit => "unit",
            DerivativeScale::InverseAlpha => "inverse_alpha",
        }
    }

    fn factor(self, rate: Complex64) -> Complex64 {
        match self {
            DerivativeScale::Unit => 1.0.into(),
            DerivativeScale::InverseAlpha => 1.0 / rate,
        }
    }
}

/// `W² - s W'`, returned as the non-constant part and the constant.
///
/// Rational expressions are first brought to partial fractions so the
/// constant is unambiguous.
pub fn riccati_apply(w: &SuperpotentialExpr, scale: DerivativeScale) -> (PotentialExpr, Complex64) {
    let s = scale.factor(w.rate());
    let full = w
        .square()
        .sub(&w.derivative().scaled(s))
        .partial_fractions();
    full.split_constant()
}

fn pt_constants(l: u32, units: &UnitSystem) -> (f64, f64) {
    let n = (l + 1) as f64;
    let amplitude = units.hbar() / (2.0 * units.mass()).sqrt();
    let constant = (units.mass() / 2.0).sqrt() * units.e_sq() / units.hbar()
        * (1.0 / n - n * units.beta() / 2.0);
    (amplitude, constant)
}

/// The literal ansatz `W_{l+1}` for the model's family.
pub fn superpotential(
    model: &PotentialModel,
    l: u32,
    units: &UnitSystem,
) -> Result<SuperpotentialExpr> {
    let rate = model.exponent_rate();
    let shift = (2 * l + 1) as f64 / 2.0;
    let derived = model.derived(units);
    let w = match *model {
        PotentialModel::MorseGeneral { .. } => {
            let lambda = derived.lambda.unwrap();
            let q = derived.q.unwrap();
            SuperpotentialExpr::zero(rate)
                .exp(-lambda, 1)
                .constant(lambda * q - shift)
        }
        PotentialModel::MorseNonPt { .. } => {
            let lambda = derived.lambda.unwrap();
            SuperpotentialExpr::zero(rate)
                .exp(-I * lambda, 1)
                .constant(lambda - shift)
        }
        PotentialModel::MorsePt1 { .. } => {
            let lambda = derived.lambda.unwrap();
            SuperpotentialExpr::zero(rate)
                .exp(-lambda, 1)
                .constant(lambda - shift)
        }
        PotentialModel::MorsePt2 { omega, d, .. } => SuperpotentialExpr::zero(rate)
            .exp((-1.0).into(), 1)
            .constant(((2 * l + 1) as f64 + d / (2.0 * omega)).into()),
        PotentialModel::PoschlTeller { v0, q, .. } => {
            let (amp, constant) = pt_constants(l, units);
            let n = (l + 1) as f64;
            if v0.re == 0.0 && q.re == 0.0 && q.im != 0.0 {
                // pure-imaginary couplings: written with Im q
                let w = q.im;
                SuperpotentialExpr::with_denominator(rate, (w * w).into(), 4)
                    .rational((-amp * n * w).into(), 4, 2)
                    .constant(constant.into())
            } else {
                SuperpotentialExpr::with_denominator(rate, q, 2)
                    .rational((-amp * n).into(), 2, 2)
                    .constant(constant.into())
            }
        }
        PotentialModel::PoschlTellerPt { q, .. } => {
            let (amp, constant) = pt_constants(l, units);
            let n = (l + 1) as f64;
            SuperpotentialExpr::with_denominator(rate, (q * q).into(), 4)
                .rational((-amp * n * q).into(), 4, 2)
                .constant(constant.into())
        }
    };
    Ok(w)
}

/// The literal `(l+1)`-th hierarchy member.
pub fn partner_potential(
    model: &PotentialModel,
    l: u32,
    units: &UnitSystem,
) -> Result<PotentialExpr> {
    let rate = model.exponent_rate();
    let lf = l as f64;
    let derived = model.derived(units);
    let v = match *model {
        PotentialModel::MorseGeneral { .. } => {
            let lambda = derived.lambda.unwrap();
            let q = derived.q.unwrap();
            SuperpotentialExpr::zero(rate)
                .exp(lambda * lambda, 2)
                .exp(-lambda * lambda * q + 2.0 * lf * lambda, 1)
        }
        PotentialModel::MorseNonPt { .. } => {
            let lambda = derived.lambda.unwrap();
            SuperpotentialExpr::zero(rate)
                .exp(-lambda * lambda, 2)
                .exp(-2.0 * I * lambda * lambda + 2.0 * I * lf * lambda, 1)
        }
        PotentialModel::MorsePt1 { .. } => {
            let lambda = derived.lambda.unwrap();
            SuperpotentialExpr::zero(rate)
                .exp(lambda * lambda, 2)
                .exp(-lambda * lambda + 2.0 * lf * lambda, 1)
        }
        PotentialModel::MorsePt2 { omega, d, alpha } => {
            let bracket = (2 * l + 1) as f64 + d / (2.0 * omega) + I * alpha / 2.0;
            SuperpotentialExpr::zero(rate)
                .exp(1.0.into(), 2)
                .exp(-2.0 * bracket, 1)
        }
        PotentialModel::PoschlTeller { .. } | PotentialModel::PoschlTellerPt { .. } => {
            let (_, q) = model.poschl_teller_couplings().unwrap();
            let ll = lf * (lf + 1.0);
            SuperpotentialExpr::with_denominator(rate, q, 2)
                .rational((units.kinetic_factor() * ll).into(), 4, 4)
                .rational(
                    (-units.e_sq() * (1.0 - ll * units.beta() / 2.0)).into(),
                    2,
                    2,
                )
        }
    };
    Ok(v)
}

/// Exact Morse-type superpotential `W = -b e^{-r x} + a` solving
/// `W² - W' = c2 e^{-2rx} + c1 e^{-rx} - e0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelfConsistentSolution {
    /// Coefficient of `-e^{-r x}`.
    pub b: Complex64,
    /// Constant term at level 0.
    pub a: Complex64,
    /// Ground energy `-a²` (reduced units).
    pub e0: Complex64,
    pub rate: Complex64,
}

impl SelfConsistentSolution {
    /// Constant term at level `l`: `a_l = a - l r`.
    pub fn a_at(&self, l: u32) -> Complex64 {
        self.a - self.rate * l as f64
    }

    pub fn e0_at(&self, l: u32) -> Complex64 {
        let a = self.a_at(l);
        Complex64::default() - a * a
    }

    pub fn superpotential(&self, l: u32) -> SuperpotentialExpr {
        SuperpotentialExpr::zero(self.rate)
            .exp(-self.b, 1)
            .constant(self.a_at(l))
    }

    /// `U_l = b² e^{-2rx} - (2 a_l + r) b e^{-rx}`.
    pub fn partner(&self, l: u32) -> PotentialExpr {
        SuperpotentialExpr::zero(self.rate)
            .exp(self.b * self.b, 2)
            .exp(-(2.0 * self.a_at(l) + self.rate) * self.b, 1)
    }
}

/// Solves for `b = √c2` (principal branch), `a = -c1/(2b) - r/2`,
/// `e0 = -a²`.
pub fn solve_selfconsistent_morse(
    c2: Complex64,
    c1: Complex64,
    rate: Complex64,
) -> Result<SelfConsistentSolution> {
    if c2 == Complex64::new(0.0, 0.0) {
        return Err(Error::DegenerateQuadratic);
    }
    let b = c2.sqrt();
    let a = -c1 / (2.0 * b) - rate / 2.0;
    Ok(SelfConsistentSolution {
        b,
        a,
        e0: Complex64::default() - a * a,
        rate,
    })
}

/// Exact Pöschl-Teller superpotential `W = s r (1 - q u)/(1 + q u)`,
/// `u = e^{-2rx}`, for `U = -4 g0 u/(1 + q u)²`. This is the shifted
/// `-s(s+1) r² sech²` well, with `s(s+1) = g0/(q r²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SechSolution {
    pub s: Complex64,
    pub q: Complex64,
    pub rate: Complex64,
}

impl SechSolution {
    pub fn s_at(&self, l: u32) -> Complex64 {
        self.s - l as f64
    }

    pub fn e0_at(&self, l: u32) -> Complex64 {
        let s = self.s_at(l);
        Complex64::default() - s * s * self.rate * self.rate
    }

    pub fn superpotential(&self, l: u32) -> SuperpotentialExpr {
        let amp = self.s_at(l) * self.rate;
        SuperpotentialExpr::with_denominator(self.rate, self.q, 2)
            .rational(amp, 0, 1)
            .rational(-amp * self.q, 2, 1)
    }

    pub fn partner(&self, l: u32) -> PotentialExpr {
        let s = self.s_at(l);
        SuperpotentialExpr::with_denominator(self.rate, self.q, 2).rational(
            -4.0 * s * (s + 1.0) * self.rate * self.rate * self.q,
            2,
            2,
        )
    }
}

pub fn solve_selfconsistent_sech(
    g0: Complex64,
    q: Complex64,
    rate: Complex64,
) -> Result<SechSolution> {
    if q == Complex64::new(0.0, 0.0) || g0 == Complex64::new(0.0, 0.0) {
        return Err(Error::DegenerateQuadratic);
    }
    let g = g0 / (q * rate * rate);
    let s = -0.5 + (0.25 + g).sqrt();
    Ok(SechSolution { s, q, rate })
}

/// Self-consistent solution for any family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SelfConsistent {
    Morse(SelfConsistentSolution),
    Sech(SechSolution),
}

impl SelfConsistent {
    pub fn for_model(model: &PotentialModel, units: &UnitSystem) -> Result<Self> {
        let eps = units.reduced_factor();
        let rate = model.exponent_rate();
        if let Some((v1, v2)) = model.morse_couplings() {
            return solve_selfconsistent_morse(eps * v1, -eps * v2, rate).map(Self::Morse);
        }
        let (v0, q) = model
            .poschl_teller_couplings()
            .expect("Pöschl-Teller family");
        solve_selfconsistent_sech(eps * v0, q, rate).map(Self::Sech)
    }

    pub fn superpotential(&self, l: u32) -> SuperpotentialExpr {
        match self {
            Self::Morse(s) => s.superpotential(l),
            Self::Sech(s) => s.superpotential(l),
        }
    }

    pub fn partner(&self, l: u32) -> PotentialExpr {
        match self {
            Self::Morse(s) => s.partner(l),
            Self::Sech(s) => s.partner(l),
        }
    }

    /// Ground energy of member `l` (reduced units).
    pub fn e0_at(&self, l: u32) -> Complex64 {
        match self {
            Self::Morse(s) => s.e0_at(l),
            Self::Sech(s) => s.e0_at(l),
        }
    }

    /// Quantity whose real part must stay positive for member `l` to have a
    /// normalizable ground state.
    pub fn decay_at(&self, l: u32) -> Complex64 {
        match self {
            Self::Morse(s) => s.a_at(l),
            Self::Sech(s) => s.s_at(l),
        }
    }
}

/// Superpotential, partner potential and ground energy of member `l` in the
/// given mode. The ground energy is in reduced units.
pub fn level(
    model: &PotentialModel,
    l: u32,
    mode: Mode,
    units: &UnitSystem,
) -> Result<HierarchyLevel> {
    match mode {
        Mode::PaperLiteral => Ok(HierarchyLevel {
            l,
            superpotential: superpotential(model, l, units)?,
            partner: partner_potential(model, l, units)?,
            e0: spectra::literal_params(model, units)?.energy(spectra::QuantumNumbers { n: 0, l }),
        }),
        Mode::SelfConsistent => {
            let sol = SelfConsistent::for_model(model, units)?;
            Ok(HierarchyLevel {
                l,
                superpotential: sol.superpotential(l),
                partner: sol.partner(l),
                e0: sol.e0_at(l),
            })
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HierarchyLevel {
    pub l: u32,
    pub superpotential: SuperpotentialExpr,
    pub partner: PotentialExpr,
    pub e0: Complex64,
}

/// Members `0..=l_max`, computed in parallel and returned in `l` order.
pub fn hierarchy(
    model: &PotentialModel,
    l_max: u32,
    mode: Mode,
    units: &UnitSystem,
) -> Result<Vec<HierarchyLevel>> {
    (0..=l_max)
        .into_par_iter()
        .map(|l| level(model, l, mode, units))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiccatiResidualReport {
    pub l: u32,
    pub max_abs_residual: f64,
    pub argmax_x: f64,
    pub mode: Mode,
    pub derivative_scale: DerivativeScale,
}

/// `max_x |W² - s W' - (U_l(x) - e0)|` over the grid, with `W'` taken from
/// the expression structure.
pub fn riccati_residual(
    model: &PotentialModel,
    l: u32,
    e0: Complex64,
    grid: &Grid,
    mode: Mode,
    scale: DerivativeScale,
    units: &UnitSystem,
) -> Result<RiccatiResidualReport> {
    let lvl = level(model, l, mode, units)?;
    let (lhs, constant) = riccati_apply(&lvl.superpotential, scale);
    let mut report = RiccatiResidualReport {
        l,
        max_abs_residual: 0.0,
        argmax_x: grid.x_min(),
        mode,
        derivative_scale: scale,
    };
    for x in grid.points() {
        let r = (lhs.eval(x)? + constant - (lvl.partner.eval(x)? - e0)).norm();
        if r > report.max_abs_residual {
            report.max_abs_residual = r;
            report.argmax_x = x;
        }
    }
    Ok(report)
}
