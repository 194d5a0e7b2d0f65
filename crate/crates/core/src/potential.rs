//! Morse and Pöschl-Teller potential families.
//!
//! Six families are modelled, all built from the two shapes
//!
//! ```text
//! V(x) = V1 exp(-2αx) - V2 exp(-αx)                     (Morse)
//! V(x) = -4 V0 exp(-2αx) / (1 + q exp(-2αx))^2          (Pöschl-Teller)
//! ```
//!
//! with real or complex couplings. The PT-symmetric variants replace the
//! decay constant α by iα (or set α = i), which turns the exponentials into
//! phases on the real line.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::Grid;

pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// Relative size below which `1 + q u` counts as a pole.
pub const POLE_TOLERANCE: f64 = 1e-12;

/// Physical constants fixing every dimensionful group.
///
/// The default (`ħ = 1`, `m = 1/2`, `e² = 1`) makes `2m/ħ² = 1`, so the
/// kinetic operator is plain `-d²/dx²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnitSystem {
    hbar: f64,
    mass: f64,
    e_sq: f64,
    beta: f64,
}

impl UnitSystem {
    pub fn new(hbar: f64, mass: f64, e_sq: f64) -> Result<Self> {
        for (name, v) in [("hbar", hbar), ("mass", mass), ("e_sq", e_sq)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidModel(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        Ok(Self {
            hbar,
            mass,
            e_sq,
            beta: hbar * hbar / (mass * e_sq),
        })
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn e_sq(&self) -> f64 {
        self.e_sq
    }

    /// `β = ħ² / (m e²)`.
    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// `2m/ħ²`: multiplies potentials and energies into the units in which
    /// the Schrödinger operator reads `-d²/dx² + U`.
    pub fn reduced_factor(&self) -> f64 {
        2.0 * self.mass / (self.hbar * self.hbar)
    }

    /// `ħ²/2m`, the kinetic prefactor.
    pub fn kinetic_factor(&self) -> f64 {
        1.0 / self.reduced_factor()
    }
}

impl Default for UnitSystem {
    fn default() -> Self {
        Self::new(1.0, 0.5, 1.0).expect("default units are valid")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    MorseGeneral,
    MorseNonPt,
    MorsePt1,
    MorsePt2,
    PoschlTeller,
    PoschlTellerPt,
}

impl Family {
    pub const ALL: [Family; 6] = [
        Family::MorseGeneral,
        Family::MorseNonPt,
        Family::MorsePt1,
        Family::MorsePt2,
        Family::PoschlTeller,
        Family::PoschlTellerPt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::MorseGeneral => "morse_general",
            Family::MorseNonPt => "morse_non_pt",
            Family::MorsePt1 => "morse_pt1",
            Family::MorsePt2 => "morse_pt2",
            Family::PoschlTeller => "poschl_teller",
            Family::PoschlTellerPt => "poschl_teller_pt",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.name() == name)
    }

    pub fn is_morse(self) -> bool {
        matches!(
            self,
            Family::MorseGeneral | Family::MorseNonPt | Family::MorsePt1 | Family::MorsePt2
        )
    }

    /// Families whose exponentials become phases (α → iα or α = i).
    pub fn has_imaginary_rate(self) -> bool {
        matches!(
            self,
            Family::MorsePt1 | Family::MorsePt2 | Family::PoschlTellerPt
        )
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// One of the six potential families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PotentialModel {
    /// `V1 e^{-2αx} - V2 e^{-αx}`.
    MorseGeneral {
        v1: Complex64,
        v2: Complex64,
        alpha: f64,
    },
    /// `-D [e^{-2x} + iP e^{-x}]`.
    MorseNonPt { d: f64, p: f64 },
    /// `V1 e^{-2ix} - V2 e^{-ix}` (α = i).
    MorsePt1 { v1: Complex64, v2: Complex64 },
    /// `-ω² e^{-2iαx} - D e^{-iαx}` (V1 = -ω², V2 = D, α → iα).
    MorsePt2 { omega: f64, d: f64, alpha: f64 },
    /// `-4 V0 e^{-2αx} / (1 + q e^{-2αx})²`.
    PoschlTeller {
        v0: Complex64,
        q: Complex64,
        alpha: f64,
    },
    /// Pöschl-Teller with real couplings and α → iα.
    PoschlTellerPt { v0: f64, q: f64, alpha: f64 },
}

fn finite(name: &str, z: Complex64) -> Result<()> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidModel(format!(
            "{name} must be finite, got {z}"
        )))
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidModel(format!(
            "{name} must be positive, got {v}"
        )))
    }
}

impl PotentialModel {
    pub fn morse_general(v1: Complex64, v2: Complex64, alpha: f64) -> Result<Self> {
        Self::MorseGeneral { v1, v2, alpha }.validated()
    }

    /// Morse model specified through `λ` and `q = V2/V1` instead of the couplings.
    pub fn morse_general_from_lambda(
        lambda: Complex64,
        q: Complex64,
        alpha: f64,
        units: &UnitSystem,
    ) -> Result<Self> {
        let v1 = lambda * lambda * alpha * alpha / units.reduced_factor();
        Self::morse_general(v1, q * v1, alpha)
    }

    pub fn morse_non_pt(d: f64, p: f64) -> Result<Self> {
        Self::MorseNonPt { d, p }.validated()
    }

    /// Builds the compact non-PT Morse model from `V1 = (A+iB)²`,
    /// `V2 = (2C+1)(A+iB)`. The compact couplings must come out real,
    /// which requires `A = 0`.
    pub fn morse_non_pt_from_abc(a: f64, b: f64, c: f64) -> Result<Self> {
        let chain = DerivedParams::from_abc(a, b, c)?;
        let (d, p) = (chain.d.unwrap(), chain.p.unwrap());
        let tol = 1e-12 * (1.0 + d.norm() + p.norm());
        if d.im.abs() > tol || p.im.abs() > tol {
            return Err(Error::InvalidModel(format!(
                "A = {a} gives complex compact couplings D = {d}, P = {p}"
            )));
        }
        Self::morse_non_pt(d.re, p.re)
    }

    pub fn morse_pt1(v1: Complex64, v2: Complex64) -> Result<Self> {
        Self::MorsePt1 { v1, v2 }.validated()
    }

    pub fn morse_pt2(omega: f64, d: f64, alpha: f64) -> Result<Self> {
        Self::MorsePt2 { omega, d, alpha }.validated()
    }

    pub fn poschl_teller(v0: Complex64, q: Complex64, alpha: f64) -> Result<Self> {
        Self::PoschlTeller { v0, q, alpha }.validated()
    }

    pub fn poschl_teller_pt(v0: f64, q: f64, alpha: f64) -> Result<Self> {
        Self::PoschlTellerPt { v0, q, alpha }.validated()
    }

    /// Checks the per-family invariants.
    pub fn validated(self) -> Result<Self> {
        match self {
            Self::MorseGeneral { v1, v2, alpha } => {
                finite("V1", v1)?;
                finite("V2", v2)?;
                positive("alpha", alpha)?;
            }
            Self::MorseNonPt { d, p } => {
                finite("D", d.into())?;
                finite("P", p.into())?;
            }
            Self::MorsePt1 { v1, v2 } => {
                finite("V1", v1)?;
                finite("V2", v2)?;
            }
            Self::MorsePt2 { omega, d, alpha } => {
                finite("omega", omega.into())?;
                finite("D", d.into())?;
                positive("alpha", alpha)?;
                if omega == 0.0 {
                    return Err(Error::ZeroOmega);
                }
            }
            Self::PoschlTeller { v0, q, alpha } => {
                finite("V0", v0)?;
                finite("q", q)?;
                positive("alpha", alpha)?;
            }
            Self::PoschlTellerPt { v0, q, alpha } => {
                finite("V0", v0.into())?;
                finite("q", q.into())?;
                positive("alpha", alpha)?;
            }
        }
        Ok(self)
    }

    pub fn family(&self) -> Family {
        match self {
            Self::MorseGeneral { .. } => Family::MorseGeneral,
            Self::MorseNonPt { .. } => Family::MorseNonPt,
            Self::MorsePt1 { .. } => Family::MorsePt1,
            Self::MorsePt2 { .. } => Family::MorsePt2,
            Self::PoschlTeller { .. } => Family::PoschlTeller,
            Self::PoschlTellerPt { .. } => Family::PoschlTellerPt,
        }
    }

    /// The rate `r` appearing in every exponential `e^{-k r x}`.
    pub fn exponent_rate(&self) -> Complex64 {
        match *self {
            Self::MorseGeneral { alpha, .. } | Self::PoschlTeller { alpha, .. } => alpha.into(),
            Self::MorseNonPt { .. } => 1.0.into(),
            Self::MorsePt1 { .. } => I,
            Self::MorsePt2 { alpha, .. } | Self::PoschlTellerPt { alpha, .. } => I * alpha,
        }
    }

    /// Length scale `1/|rate|` used for default domains.
    pub fn length_scale(&self) -> f64 {
        1.0 / self.exponent_rate().norm()
    }

    /// Morse couplings `(V1, V2)` of `V1 e^{-2rx} - V2 e^{-rx}`.
    pub fn morse_couplings(&self) -> Option<(Complex64, Complex64)> {
        match *self {
            Self::MorseGeneral { v1, v2, .. } | Self::MorsePt1 { v1, v2 } => Some((v1, v2)),
            Self::MorseNonPt { d, p } => Some((Complex64::from(-d), I * d * p)),
            Self::MorsePt2 { omega, d, .. } => Some(((-omega * omega).into(), d.into())),
            _ => None,
        }
    }

    /// Pöschl-Teller couplings `(V0, q)`.
    pub fn poschl_teller_couplings(&self) -> Option<(Complex64, Complex64)> {
        match *self {
            Self::PoschlTeller { v0, q, .. } => Some((v0, q)),
            Self::PoschlTellerPt { v0, q, .. } => Some((v0.into(), q.into())),
            _ => None,
        }
    }

    /// `V(x)` from the family's closed form.
    pub fn eval(&self, x: f64) -> Result<Complex64> {
        let rate = self.exponent_rate();
        if let Some((v1, v2)) = self.morse_couplings() {
            let e1 = (-rate * x).exp();
            return Ok(v1 * e1 * e1 - v2 * e1);
        }
        let (v0, q) = self
            .poschl_teller_couplings()
            .expect("Pöschl-Teller family");
        let u = (-2.0 * rate * x).exp();
        let denom = 1.0 + q * u;
        if denom.norm() < POLE_TOLERANCE * (1.0 + q.norm()) {
            return Err(Error::PoleOnDomain { x });
        }
        Ok(-4.0 * v0 * u / (denom * denom))
    }

    /// PT image `conj(V(-x))`.
    pub fn pt_reflect(&self, x: f64) -> Result<Complex64> {
        pt_reflect(self, x)
    }

    /// Derived parameter chain for this model.
    pub fn derived(&self, units: &UnitSystem) -> DerivedParams {
        DerivedParams::for_model(self, units)
    }

    /// Symmetry class from a grid check on `[-5L, 5L]` with `L = 1/|rate|`.
    pub fn symmetry_class(&self) -> Result<SymmetryClass> {
        let grid = Grid::symmetric(5.0 * self.length_scale(), 201)?;
        classify_symmetry(self, &grid, 1e-10)
    }

    /// Default numerical domain: Morse-type `[-3L, 30L]`, Pöschl-Teller-type
    /// `[-20L, 20L]`, with `N = 4000`. The phase-type Morse families use the
    /// symmetric `[-30L, 30L]` so that the discretization stays PT-symmetric.
    pub fn default_grid(&self) -> Grid {
        let l = self.length_scale();
        let (lo, hi) = match self.family() {
            Family::MorseGeneral | Family::MorseNonPt => (-3.0 * l, 30.0 * l),
            Family::MorsePt1 | Family::MorsePt2 => (-30.0 * l, 30.0 * l),
            Family::PoschlTeller | Family::PoschlTellerPt => (-20.0 * l, 20.0 * l),
        };
        Grid::new(lo, hi, 4000).expect("default grid is valid")
    }

    /// Returns the model with one named scalar parameter replaced. Complex
    /// couplings are addressed by component, e.g. `V0.re` or `q.im`.
    pub fn with_param(&self, name: &str, value: f64) -> Result<Self> {
        fn set(z: &mut Complex64, part: &str, value: f64) -> bool {
            match part {
                "re" => z.re = value,
                "im" => z.im = value,
                _ => return false,
            }
            true
        }
        let (head, part) = match name.split_once('.') {
            Some((h, p)) => (h, Some(p)),
            None => (name, None),
        };
        let mut m = *self;
        let ok = match (&mut m, head, part) {
            (Self::MorseGeneral { v1, .. }, "V1", Some(p))
            | (Self::MorsePt1 { v1, .. }, "V1", Some(p)) => set(v1, p, value),
            (Self::MorseGeneral { v2, .. }, "V2", Some(p))
            | (Self::MorsePt1 { v2, .. }, "V2", Some(p)) => set(v2, p, value),
            (Self::PoschlTeller { v0, .. }, "V0", Some(p)) => set(v0, p, value),
            (Self::PoschlTeller { q, .. }, "q", Some(p)) => set(q, p, value),
            (Self::MorseGeneral { alpha, .. }, "alpha", None)
            | (Self::MorsePt2 { alpha, .. }, "alpha", None)
            | (Self::PoschlTeller { alpha, .. }, "alpha", None)
            | (Self::PoschlTellerPt { alpha, .. }, "alpha", None) => {
                *alpha = value;
                true
            }
            (Self::MorseNonPt { d, .. }, "D", None) | (Self::MorsePt2 { d, .. }, "D", None) => {
                *d = value;
                true
            }
            (Self::MorseNonPt { p, .. }, "P", None) => {
                *p = value;
                true
            }
            (Self::MorsePt2 { omega, .. }, "omega", None) => {
                *omega = value;
                true
            }
            (Self::PoschlTellerPt { v0, .. }, "V0", None) => {
                *v0 = value;
                true
            }
            (Self::PoschlTellerPt { q, .. }, "q", None) => {
                *q = value;
                true
            }
            _ => false,
        };
        if !ok {
            return Err(Error::InvalidModel(format!(
                "family {} has no parameter {name}",
                self.family()
            )));
        }
        m.validated()
    }
}

/// Anything that can be sampled as a (complex) potential on the real line.
pub trait Potential {
    fn value(&self, x: f64) -> Result<Complex64>;

    /// Limit of `Re V(x)` as `x → +∞`; eigenvalues below it are bound-state
    /// candidates.
    fn continuum_threshold(&self) -> f64 {
        0.0
    }
}

impl Potential for PotentialModel {
    fn value(&self, x: f64) -> Result<Complex64> {
        self.eval(x)
    }
}

impl<P: Potential + ?Sized> Potential for &P {
    fn value(&self, x: f64) -> Result<Complex64> {
        (**self).value(x)
    }

    fn continuum_threshold(&self) -> f64 {
        (**self).continuum_threshold()
    }
}

/// Wraps a closure as a potential.
pub struct FnPotential<F>(pub F);

impl<F: Fn(f64) -> Complex64> Potential for FnPotential<F> {
    fn value(&self, x: f64) -> Result<Complex64> {
        Ok((self.0)(x))
    }
}

/// `conj(V(-x))`.
pub fn pt_reflect<P: Potential + ?Sized>(potential: &P, x: f64) -> Result<Complex64> {
    Ok(potential.value(-x)?.conj())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SymmetryClass {
    Hermitian,
    PtSymmetric,
    NonPtNonHermitian,
}

impl SymmetryClass {
    pub fn name(self) -> &'static str {
        match self {
            SymmetryClass::Hermitian => "hermitian",
            SymmetryClass::PtSymmetric => "pt_symmetric",
            SymmetryClass::NonPtNonHermitian => "non_pt_non_hermitian",
        }
    }
}

/// Grid test of reality and PT symmetry. A real potential is both; it is
/// reported as [`SymmetryClass::Hermitian`].
pub fn classify_symmetry<P: Potential + ?Sized>(
    potential: &P,
    grid: &Grid,
    tol: f64,
) -> Result<SymmetryClass> {
    if !grid.is_symmetric() {
        return Err(Error::InvalidGrid(
            "symmetry classification needs a grid symmetric about 0".into(),
        ));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidGrid(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let mut max_im = 0.0_f64;
    let mut max_pt = 0.0_f64;
    for x in grid.points() {
        let v = potential.value(x)?;
        max_im = max_im.max(v.im.abs());
        max_pt = max_pt.max((v - pt_reflect(potential, x)?).norm());
    }
    Ok(if max_im < tol {
        SymmetryClass::Hermitian
    } else if max_pt < tol {
        SymmetryClass::PtSymmetric
    } else {
        SymmetryClass::NonPtNonHermitian
    })
}

/// Reality condition for complex Pöschl-Teller couplings:
/// `Im V0 · Re q = Re V0 · Im q`, compared with relative tolerance 1e-12.
pub fn reality_condition(v0: Complex64, q: Complex64) -> bool {
    let lhs = v0.im * q.re;
    let rhs = v0.re * q.im;
    let scale = lhs.abs().max(rhs.abs());
    (lhs - rhs).abs() <= 1e-12 * scale
}

/// Compact form of the Pöschl-Teller potential for pure-imaginary couplings,
/// written in terms of their imaginary parts `v = Im V0`, `w = Im q`:
///
/// ```text
/// V(x) = -4 v [2 w u² + i (1 - w² u²)] / (1 + w² u²)²,   u = e^{-2αx}
/// ```
///
/// Expanding `-4iv u / (1 + iwu)²` directly gives an `i u (1 - w² u²)`
/// numerator instead, so the two agree only where `u = 1` (see
/// [`poschl_teller_imaginary_expanded`]).
pub fn poschl_teller_imaginary_compact(v_im: f64, w_im: f64, alpha: f64, x: f64) -> Complex64 {
    let u2 = (-4.0 * alpha * x).exp();
    let num = Complex64::new(2.0 * w_im * u2, 1.0 - w_im * w_im * u2);
    let den = 1.0 + w_im * w_im * u2;
    -4.0 * v_im * num / (den * den)
}

/// Exact rationalization of `-4 (iv) u / (1 + iwu)²`.
pub fn poschl_teller_imaginary_expanded(v_im: f64, w_im: f64, alpha: f64, x: f64) -> Complex64 {
    let u = (-2.0 * alpha * x).exp();
    let num = Complex64::new(2.0 * w_im * u * u, u * (1.0 - w_im * w_im * u * u));
    let den = 1.0 + w_im * w_im * u * u;
    -4.0 * v_im * num / (den * den)
}

/// Derived parameters of a model.
///
/// `lambda` solves `λ² = 2mV1/(α²ħ²)` for the Morse families (principal
/// branch, with `α` the complex rate for the phase families). The non-PT
/// chain is `ω² = -(A+iB)²`, `K = 2C+1`, `G = ω²/K`, `t = K²/ω`, `D = GK`,
/// `P = t/K`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DerivedParams {
    pub lambda: Option<Complex64>,
    pub q: Option<Complex64>,
    pub omega: Option<Complex64>,
    pub k: Option<Complex64>,
    pub g: Option<Complex64>,
    pub t: Option<Complex64>,
    pub d: Option<Complex64>,
    pub p: Option<Complex64>,
}

impl DerivedParams {
    pub fn lambda_from(v1: Complex64, rate: Complex64, units: &UnitSystem) -> Complex64 {
        (units.reduced_factor() * v1 / (rate * rate)).sqrt()
    }

    /// Chain from `A`, `B`, `C` with `A + iB = iω`.
    pub fn from_abc(a: f64, b: f64, c: f64) -> Result<Self> {
        let omega = Complex64::new(a, b) / I;
        let k = Complex64::from(2.0 * c + 1.0);
        if omega.norm() == 0.0 || k.norm() == 0.0 {
            return Err(Error::InvalidModel("A+iB and 2C+1 must be nonzero".into()));
        }
        Ok(Self::chain(omega, k))
    }

    fn chain(omega: Complex64, k: Complex64) -> Self {
        let g = omega * omega / k;
        let t = k * k / omega;
        Self {
            omega: Some(omega),
            k: Some(k),
            g: Some(g),
            t: Some(t),
            d: Some(g * k),
            p: Some(t / k),
            ..Self::default()
        }
    }

    pub fn for_model(model: &PotentialModel, units: &UnitSystem) -> Self {
        let rate = model.exponent_rate();
        match *model {
            PotentialModel::MorseGeneral { v1, v2, .. } | PotentialModel::MorsePt1 { v1, v2 } => {
                Self {
                    lambda: Some(Self::lambda_from(v1, rate, units)),
                    q: Some(v2 / v1),
                    ..Self::default()
                }
            }
            PotentialModel::MorseNonPt { d, p } => {
                let omega = Complex64::from(d).sqrt();
                let chain = if omega.norm() > 0.0 && p != 0.0 {
                    Self::chain(omega, p * omega)
                } else {
                    Self {
                        d: Some(d.into()),
                        p: Some(p.into()),
                        ..Self::default()
                    }
                };
                Self {
                    lambda: Some(Self::lambda_from(d.into(), rate, units)),
                    ..chain
                }
            }
            PotentialModel::MorsePt2 { omega, d, .. } => Self {
                lambda: Some(Self::lambda_from((-omega * omega).into(), rate, units)),
                omega: Some(omega.into()),
                d: Some(d.into()),
                ..Self::default()
            },
            PotentialModel::PoschlTeller { q, .. } => Self {
                q: Some(q),
                ..Self::default()
            },
            PotentialModel::PoschlTellerPt { q, .. } => Self {
                q: Some(q.into()),
                ..Self::default()
            },
        }
    }
}
