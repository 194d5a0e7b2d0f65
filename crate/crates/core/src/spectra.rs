//! Closed-form energies, bound-state admissibility and ground states.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::expr::SuperpotentialExpr;
use crate::grid::Grid;
use crate::hierarchy::{self, Mode, SelfConsistent};
use crate::potential::{Family, PotentialModel, SymmetryClass, UnitSystem};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuantumNumbers {
    pub n: u32,
    pub l: u32,
}

impl QuantumNumbers {
    pub fn new(n: u32, l: u32) -> Self {
        Self { n, l }
    }
}

/// Which closed form produced an energy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Formula {
    /// `-(λq - (2l+n+1)/2)²`.
    MorseGeneral,
    /// `-(λ - (n+2l+1)/2)²`, shared by the first PT Morse case.
    MorseNonPt,
    /// `-(2l+n+1 + D/2ω)²`.
    MorsePt2,
    /// `-(q² m e⁴/2ħ²) [1/(n+l+1) - (n+l+1)β/2]²`.
    PoschlTeller,
    /// `-(a0 - (l+n) r)²` from the exact Morse superpotential.
    SelfConsistentMorse,
    /// `-(s0 - l - n)² r²` from the exact sech² superpotential.
    SelfConsistentSech,
}

impl Formula {
    pub fn name(self) -> &'static str {
        match self {
            Formula::MorseGeneral => "morse_general",
            Formula::MorseNonPt => "morse_non_pt",
            Formula::MorsePt2 => "morse_pt2",
            Formula::PoschlTeller => "poschl_teller",
            Formula::SelfConsistentMorse => "self_consistent_morse",
            Formula::SelfConsistentSech => "self_consistent_sech",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyRecord {
    pub n: u32,
    pub l: u32,
    pub energy: Complex64,
    pub formula: Formula,
    pub admissible: bool,
}

pub fn energy_morse_general(lambda: Complex64, q: Complex64, nq: QuantumNumbers) -> Complex64 {
    let b = lambda * q - (2 * nq.l + nq.n + 1) as f64 / 2.0;
    Complex64::default() - b * b
}

pub fn energy_morse_nonpt(lambda: Complex64, nq: QuantumNumbers) -> Complex64 {
    let b = lambda - (nq.n + 2 * nq.l + 1) as f64 / 2.0;
    Complex64::default() - b * b
}

pub fn energy_morse_pt2(d: f64, omega: f64, nq: QuantumNumbers) -> Result<f64> {
    if omega == 0.0 {
        return Err(Error::ZeroOmega);
    }
    let b = (2 * nq.l + nq.n + 1) as f64 + d / (2.0 * omega);
    Ok(-b * b)
}

fn poschl_teller_bracket(level: u32, beta: f64) -> f64 {
    let n = level as f64;
    1.0 / n - n * beta / 2.0
}

pub fn energy_poschl_teller(q: Complex64, units: &UnitSystem, nq: QuantumNumbers) -> Complex64 {
    let b = poschl_teller_bracket(nq.n + nq.l + 1, units.beta());
    let prefactor =
        units.mass() * units.e_sq() * units.e_sq() / (2.0 * units.hbar() * units.hbar());
    Complex64::default() - q * q * prefactor * b * b
}

/// Parameters of one spectrum formula, bundled with its admissibility rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpectrumParams {
    MorseGeneral {
        lambda: Complex64,
        q: Complex64,
    },
    MorseNonPt {
        lambda: Complex64,
    },
    MorsePt2 {
        d: f64,
        omega: f64,
    },
    PoschlTeller {
        q: Complex64,
        units: UnitSystem,
    },
    /// Energies are converted to physical units by `to_physical = ħ²/2m`.
    SelfConsistent {
        solution: SelfConsistent,
        to_physical: f64,
    },
}

impl SpectrumParams {
    pub fn formula(&self) -> Formula {
        match self {
            Self::MorseGeneral { .. } => Formula::MorseGeneral,
            Self::MorseNonPt { .. } => Formula::MorseNonPt,
            Self::MorsePt2 { .. } => Formula::MorsePt2,
            Self::PoschlTeller { .. } => Formula::PoschlTeller,
            Self::SelfConsistent {
                solution: SelfConsistent::Morse(_),
                ..
            } => Formula::SelfConsistentMorse,
            Self::SelfConsistent {
                solution: SelfConsistent::Sech(_),
                ..
            } => Formula::SelfConsistentSech,
        }
    }

    pub fn energy(&self, nq: QuantumNumbers) -> Complex64 {
        match *self {
            Self::MorseGeneral { lambda, q } => energy_morse_general(lambda, q, nq),
            Self::MorseNonPt { lambda } => energy_morse_nonpt(lambda, nq),
            Self::MorsePt2 { d, omega } => energy_morse_pt2(d, omega, nq)
                .expect("omega checked at construction")
                .into(),
            Self::PoschlTeller { q, ref units } => energy_poschl_teller(q, units, nq),
            // the n-th level of member l is the ground state of member l + n
            Self::SelfConsistent {
                solution,
                to_physical,
            } => solution.e0_at(nq.l + nq.n) * to_physical,
        }
    }

    /// Bound-state admissibility.
    ///
    /// Exponential families require the linear coefficient of the ground
    /// state's exponent to stay positive. The Pöschl-Teller formula admits
    /// the prefix of `n` over which the bracket magnitude strictly decreases.
    pub fn admissible(&self, nq: QuantumNumbers) -> bool {
        let order = (2 * nq.l + nq.n + 1) as f64 / 2.0;
        match *self {
            Self::MorseGeneral { lambda, q } => (lambda * q).re - order > 0.0,
            Self::MorseNonPt { lambda } => lambda.re - order > 0.0,
            Self::MorsePt2 { d, omega } => (2 * nq.l + nq.n + 1) as f64 + d / (2.0 * omega) > 0.0,
            Self::PoschlTeller { ref units, .. } => {
                let beta = units.beta();
                let start = nq.l + 1;
                (start..start + nq.n).all(|k| {
                    poschl_teller_bracket(k + 1, beta).abs() < poschl_teller_bracket(k, beta).abs()
                })
            }
            Self::SelfConsistent { solution, .. } => solution.decay_at(nq.l + nq.n).re > 0.0,
        }
    }

    pub fn record(&self, nq: QuantumNumbers) -> EnergyRecord {
        EnergyRecord {
            n: nq.n,
            l: nq.l,
            energy: self.energy(nq),
            formula: self.formula(),
            admissible: self.admissible(nq),
        }
    }
}

/// Closed-form spectrum parameters in literal mode for a model.
pub fn literal_params(model: &PotentialModel, units: &UnitSystem) -> Result<SpectrumParams> {
    let derived = model.derived(units);
    Ok(match *model {
        PotentialModel::MorseGeneral { .. } => SpectrumParams::MorseGeneral {
            lambda: derived.lambda.unwrap(),
            q: derived.q.unwrap(),
        },
        PotentialModel::MorseNonPt { .. } | PotentialModel::MorsePt1 { .. } => {
            SpectrumParams::MorseNonPt {
                lambda: derived.lambda.unwrap(),
            }
        }
        PotentialModel::MorsePt2 { omega, d, .. } => {
            if omega == 0.0 {
                return Err(Error::ZeroOmega);
            }
            SpectrumParams::MorsePt2 { d, omega }
        }
        PotentialModel::PoschlTeller { .. } | PotentialModel::PoschlTellerPt { .. } => {
            SpectrumParams::PoschlTeller {
                q: derived.q.unwrap(),
                units: *units,
            }
        }
    })
}

pub fn spectrum_params(
    model: &PotentialModel,
    mode: Mode,
    units: &UnitSystem,
) -> Result<SpectrumParams> {
    match mode {
        Mode::PaperLiteral => literal_params(model, units),
        Mode::SelfConsistent => Ok(SpectrumParams::SelfConsistent {
            solution: SelfConsistent::for_model(model, units)?,
            to_physical: units.kinetic_factor(),
        }),
    }
}

/// Records for every `(l, n)` with `l <= l_max`, `n <= n_max`, ordered by
/// `(l, n)`.
pub fn analytic_spectrum(
    model: &PotentialModel,
    mode: Mode,
    l_max: u32,
    n_max: u32,
    units: &UnitSystem,
) -> Result<Vec<EnergyRecord>> {
    let params = spectrum_params(model, mode, units)?;
    Ok((0..=l_max)
        .flat_map(|l| (0..=n_max).map(move |n| QuantumNumbers::new(n, l)))
        .map(|nq| params.record(nq))
        .collect())
}

/// Ground state `Ψ = N exp(φ(x))` in closed form.
#[derive(Debug, Clone, PartialEq)]
pub enum GroundState {
    /// `φ = -∫W` for a purely exponential superpotential.
    Exponential {
        primitive: SuperpotentialExpr,
        linear: Complex64,
    },
    /// `φ = (l+1) ln(1 + q e^{-2rx}) - κ x`.
    PoschlTeller {
        q: Complex64,
        rate: Complex64,
        power: f64,
        kappa: f64,
    },
    /// `φ = -s r x - s ln(1 + q e^{-2rx})`, i.e. `cosh^{-s}` of the shifted
    /// argument.
    Sech {
        s: Complex64,
        q: Complex64,
        rate: Complex64,
    },
}

impl GroundState {
    pub fn for_model(
        model: &PotentialModel,
        l: u32,
        mode: Mode,
        units: &UnitSystem,
    ) -> Result<Self> {
        match (mode, model.family()) {
            (Mode::SelfConsistent, f) if !f.is_morse() => {
                let SelfConsistent::Sech(sol) = SelfConsistent::for_model(model, units)? else {
                    unreachable!("Pöschl-Teller families solve to the sech form")
                };
                Ok(Self::Sech {
                    s: sol.s_at(l),
                    q: sol.q,
                    rate: sol.rate,
                })
            }
            (Mode::PaperLiteral, f) if !f.is_morse() => {
                let (_, q) = model.poschl_teller_couplings().unwrap();
                let n = (l + 1) as f64;
                let kappa = units.mass() * units.e_sq() / (units.hbar() * units.hbar())
                    * (1.0 / n - n * units.beta() / 2.0);
                Ok(Self::PoschlTeller {
                    q,
                    rate: model.exponent_rate(),
                    power: n,
                    kappa,
                })
            }
            _ => {
                let w = hierarchy::level(model, l, mode, units)?.superpotential;
                let (primitive, linear) = w
                    .antiderivative()
                    .expect("Morse superpotentials are exponential");
                Ok(Self::Exponential {
                    primitive: primitive.scaled((-1.0).into()),
                    linear: -linear,
                })
            }
        }
    }

    /// `φ(x) = ln Ψ(x)` up to the normalization constant.
    pub fn exponent(&self, x: f64) -> Result<Complex64> {
        match self {
            Self::Exponential { primitive, linear } => Ok(primitive.eval(x)? + linear * x),
            Self::PoschlTeller {
                q,
                rate,
                power,
                kappa,
            } => {
                let d = 1.0 + q * (-2.0 * rate * x).exp();
                if d.norm() < crate::potential::POLE_TOLERANCE * (1.0 + q.norm()) {
                    return Err(Error::PoleOnDomain { x });
                }
                Ok(*power * d.ln() - kappa * x)
            }
            Self::Sech { s, q, rate } => {
                let d = 1.0 + q * (-2.0 * rate * x).exp();
                if d.norm() < crate::potential::POLE_TOLERANCE * (1.0 + q.norm()) {
                    return Err(Error::PoleOnDomain { x });
                }
                Ok(-s * rate * x - s * d.ln())
            }
        }
    }

    pub fn value(&self, x: f64) -> Result<Complex64> {
        Ok(self.exponent(x)?.exp())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WavefunctionSample {
    pub grid: Grid,
    pub values: Vec<Complex64>,
    pub norm_constant: f64,
    pub normalized: bool,
    pub level: QuantumNumbers,
}

fn trapezoid(grid: &Grid, f: &[f64]) -> f64 {
    let h = grid.spacing();
    let inner: f64 = f[1..f.len() - 1].iter().sum();
    h * (inner + 0.5 * (f[0] + f[f.len() - 1]))
}

/// Samples the `n = 0` state of member `l` on the grid. Hermitian models are
/// normalized by trapezoid quadrature of `|Ψ|²`; other models are returned
/// unnormalized with `norm_constant = 1`.
pub fn groundstate_wavefunction(
    model: &PotentialModel,
    l: u32,
    grid: &Grid,
    mode: Mode,
    units: &UnitSystem,
) -> Result<WavefunctionSample> {
    let nq = QuantumNumbers::new(0, l);
    let params = spectrum_params(model, mode, units)?;
    if !params.admissible(nq) {
        return Err(Error::NotNormalizable(format!(
            "member l = {l} of {} has no admissible ground state",
            model.family()
        )));
    }
    let state = GroundState::for_model(model, l, mode, units)?;
    if let GroundState::PoschlTeller { kappa, .. } = state {
        if kappa <= 0.0 {
            return Err(Error::NotNormalizable(format!(
                "decay constant {kappa} is not positive"
            )));
        }
    }
    let exponents = grid
        .points()
        .map(|x| state.exponent(x))
        .collect::<Result<Vec<_>>>()?;

    let hermitian = model.symmetry_class()? == SymmetryClass::Hermitian;
    if !hermitian {
        let values = exponents.iter().map(|p| p.exp()).collect();
        return Ok(WavefunctionSample {
            grid: *grid,
            values,
            norm_constant: 1.0,
            normalized: false,
            level: nq,
        });
    }

    // shift by the largest real exponent before exponentiating
    let shift = exponents
        .iter()
        .map(|p| p.re)
        .fold(f64::NEG_INFINITY, f64::max);
    let shifted: Vec<Complex64> = exponents.iter().map(|p| (p - shift).exp()).collect();
    let density: Vec<f64> = shifted.iter().map(|v| v.norm_sqr()).collect();
    let integral = trapezoid(grid, &density);
    let scale = 1.0 / integral.sqrt();
    Ok(WavefunctionSample {
        grid: *grid,
        values: shifted.iter().map(|v| v * scale).collect(),
        norm_constant: scale * (-shift).exp(),
        normalized: true,
        level: nq,
    })
}

/// `∫|Ψ|² dx` by the trapezoid rule.
pub fn norm_squared(sample: &WavefunctionSample) -> f64 {
    let density: Vec<f64> = sample.values.iter().map(|v| v.norm_sqr()).collect();
    trapezoid(&sample.grid, &density)
}

impl Family {
    /// Spectrum formula used in paper-literal mode.
    pub fn literal_formula(self) -> Formula {
        match self {
            Family::MorseGeneral => Formula::MorseGeneral,
            Family::MorseNonPt | Family::MorsePt1 => Formula::MorseNonPt,
            Family::MorsePt2 => Formula::MorsePt2,
            Family::PoschlTeller | Family::PoschlTellerPt => Formula::PoschlTeller,
        }
    }
}
