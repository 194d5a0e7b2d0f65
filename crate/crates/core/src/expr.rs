//! Structured exponential-rational expressions.
//!
//! An expression is a finite sum of terms
//!
//! ```text
//! c · e^{-k r x} / (1 + Q e^{-m r x})^p
//! ```
//!
//! sharing one rate `r` (complex-capable) and at most one denominator
//! `(Q, m)`. Plain exponentials are the `p = 0` terms; `k = p = 0` is the
//! constant. The set is closed under products and `d/dx`, which is all the
//! Riccati map `W² - s W'` needs.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::potential::{Potential, POLE_TOLERANCE};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Denominator {
    pub q: Complex64,
    /// `u = e^{-m r x}` inside `1 + Q u`.
    pub m: u32,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub coeff: Complex64,
    pub k: u32,
    pub p: u32,
}

/// Superpotential or potential in exponential-rational form.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperpotentialExpr {
    rate: Complex64,
    denom: Option<Denominator>,
    terms: Vec<Term>,
}

/// Partner potentials share the representation.
pub type PotentialExpr = SuperpotentialExpr;

impl SuperpotentialExpr {
    pub fn zero(rate: Complex64) -> Self {
        Self {
            rate,
            denom: None,
            terms: Vec::new(),
        }
    }

    pub fn with_denominator(rate: Complex64, q: Complex64, m: u32) -> Self {
        Self {
            rate,
            denom: Some(Denominator { q, m }),
            terms: Vec::new(),
        }
    }

    /// Adds `c e^{-k r x}`.
    pub fn exp(mut self, coeff: Complex64, k: u32) -> Self {
        self.push(Term { coeff, k, p: 0 });
        self.canonicalize();
        self
    }

    /// Adds `c e^{-k r x} / (1 + Q e^{-m r x})^p`.
    pub fn rational(mut self, coeff: Complex64, k: u32, p: u32) -> Self {
        assert!(
            p == 0 || self.denom.is_some(),
            "rational term needs a denominator"
        );
        self.push(Term { coeff, k, p });
        self.canonicalize();
        self
    }

    pub fn constant(self, coeff: Complex64) -> Self {
        self.exp(coeff, 0)
    }

    fn push(&mut self, t: Term) {
        self.terms.push(t);
    }

    /// Sorts by `(p, k)` and merges like terms; exact zeros are dropped.
    fn canonicalize(&mut self) {
        let mut merged: BTreeMap<(u32, u32), Complex64> = BTreeMap::new();
        for t in &self.terms {
            *merged.entry((t.p, t.k)).or_default() += t.coeff;
        }
        self.terms = merged
            .into_iter()
            .filter(|(_, c)| *c != Complex64::new(0.0, 0.0))
            .map(|((p, k), coeff)| Term { coeff, k, p })
            .collect();
    }

    pub fn rate(&self) -> Complex64 {
        self.rate
    }

    pub fn denominator(&self) -> Option<Denominator> {
        self.denom
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// Coefficient of `e^{-k r x} / D^p` (zero when absent).
    pub fn coefficient(&self, k: u32, p: u32) -> Complex64 {
        self.terms
            .iter()
            .find(|t| t.k == k && t.p == p)
            .map_or(Complex64::new(0.0, 0.0), |t| t.coeff)
    }

    pub fn constant_term(&self) -> Complex64 {
        self.coefficient(0, 0)
    }

    /// True when every term is a plain exponential.
    pub fn is_exponential(&self) -> bool {
        self.terms.iter().all(|t| t.p == 0)
    }

    /// Splits off the constant: `self = rest + constant`.
    pub fn split_constant(&self) -> (Self, Complex64) {
        let c = self.constant_term();
        let mut rest = self.clone();
        rest.terms.retain(|t| !(t.k == 0 && t.p == 0));
        (rest, c)
    }

    /// Rewrites every rational term with `k >= m` through
    /// `e^{-kr x}/D^p = (e^{-(k-m) r x}/D^{p-1} - e^{-(k-m) r x}/D^p) / Q`
    /// until all rational numerators are below `e^{-m r x}`. In that basis
    /// the representation is unique, so constants and coefficients can be
    /// compared exactly.
    pub fn partial_fractions(&self) -> Self {
        let Some(d) = self.denom else {
            return self.clone();
        };
        if d.q == Complex64::new(0.0, 0.0) || d.m == 0 {
            return self.clone();
        }
        let mut pending: BTreeMap<(u32, u32), Complex64> = BTreeMap::new();
        for t in &self.terms {
            *pending.entry((t.k, t.p)).or_default() += t.coeff;
        }
        let mut done: Vec<Term> = Vec::new();
        // highest k first so each rewrite only feeds lower keys
        while let Some(((k, p), coeff)) = pending.pop_last() {
            if p == 0 || k < d.m {
                done.push(Term { coeff, k, p });
                continue;
            }
            let c = coeff / d.q;
            *pending.entry((k - d.m, p - 1)).or_default() += c;
            *pending.entry((k - d.m, p)).or_default() -= c;
        }
        let mut out = Self {
            terms: done,
            ..self.clone()
        };
        out.canonicalize();
        out
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        let mut out = self.clone();
        for t in &mut out.terms {
            t.coeff *= factor;
        }
        out.canonicalize();
        out
    }

    fn compatible(&self, other: &Self) {
        assert_eq!(self.rate, other.rate, "expressions have different rates");
        if let (Some(a), Some(b)) = (self.denom, other.denom) {
            assert_eq!(a, b, "expressions have different denominators");
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.compatible(other);
        let mut out = self.clone();
        out.denom = self.denom.or(other.denom);
        out.terms.extend_from_slice(&other.terms);
        out.canonicalize();
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scaled((-1.0).into()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.compatible(other);
        let mut out = Self {
            rate: self.rate,
            denom: self.denom.or(other.denom),
            terms: Vec::with_capacity(self.terms.len() * other.terms.len()),
        };
        for a in &self.terms {
            for b in &other.terms {
                out.terms.push(Term {
                    coeff: a.coeff * b.coeff,
                    k: a.k + b.k,
                    p: a.p + b.p,
                });
            }
        }
        out.canonicalize();
        out
    }

    pub fn square(&self) -> Self {
        self.mul(self)
    }

    /// Exact `d/dx`:
    /// `d/dx [e^{-kr x} D^{-p}] = -k r e^{-kr x} D^{-p} + p m r Q e^{-(k+m) r x} D^{-(p+1)}`.
    pub fn derivative(&self) -> Self {
        let r = self.rate;
        let mut out = Self {
            terms: Vec::with_capacity(2 * self.terms.len()),
            ..self.clone()
        };
        for t in &self.terms {
            if t.k > 0 {
                out.terms.push(Term {
                    coeff: -t.coeff * r * t.k as f64,
                    k: t.k,
                    p: t.p,
                });
            }
            if t.p > 0 {
                let d = self.denom.expect("rational term without denominator");
                out.terms.push(Term {
                    coeff: t.coeff * r * d.q * (t.p * d.m) as f64,
                    k: t.k + d.m,
                    p: t.p + 1,
                });
            }
        }
        out.canonicalize();
        out
    }

    /// Antiderivative of a purely exponential expression, returned as the
    /// exponential part plus the coefficient of the linear term `x`
    /// (coming from the constant).
    pub fn antiderivative(&self) -> Option<(Self, Complex64)> {
        if !self.is_exponential() {
            return None;
        }
        let mut out = Self::zero(self.rate);
        let mut linear = Complex64::new(0.0, 0.0);
        for t in &self.terms {
            if t.k == 0 {
                linear += t.coeff;
            } else {
                out.terms.push(Term {
                    coeff: -t.coeff / (self.rate * t.k as f64),
                    k: t.k,
                    p: 0,
                });
            }
        }
        out.canonicalize();
        Some((out, linear))
    }

    pub fn eval(&self, x: f64) -> Result<Complex64> {
        let r = self.rate;
        let denom = match self.denom {
            Some(d) if self.terms.iter().any(|t| t.p > 0) => {
                let v = 1.0 + d.q * (-(d.m as f64) * r * x).exp();
                if v.norm() < POLE_TOLERANCE * (1.0 + d.q.norm()) {
                    return Err(Error::PoleOnDomain { x });
                }
                v
            }
            _ => Complex64::new(1.0, 0.0),
        };
        let mut sum = Complex64::new(0.0, 0.0);
        for t in &self.terms {
            let mut v = t.coeff;
            if t.k > 0 {
                v *= (-(t.k as f64) * r * x).exp();
            }
            if t.p > 0 {
                v /= denom.powu(t.p);
            }
            sum += v;
        }
        Ok(sum)
    }
}

impl Potential for SuperpotentialExpr {
    fn value(&self, x: f64) -> Result<Complex64> {
        self.eval(x)
    }
}

impl std::fmt::Display for SuperpotentialExpr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({})", t.coeff)?;
            if t.k > 0 {
                write!(f, "·e^(-{}·{}x)", t.k, self.rate)?;
            }
            if t.p > 0 {
                let d = self.denom.unwrap();
                write!(f, "/(1+({})e^(-{}·{}x))^{}", d.q, d.m, self.rate, t.p)?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn central_difference(e: &SuperpotentialExpr, x: f64, h: f64) -> Complex64 {
        (e.eval(x + h).unwrap() - e.eval(x - h).unwrap()) / (2.0 * h)
    }

    #[test]
    fn canonical_order_and_merging() {
        let e = SuperpotentialExpr::zero(1.0.into())
            .exp(c(2.0, 0.0), 2)
            .constant(c(1.0, 0.0))
            .exp(c(3.0, 0.0), 2)
            .exp(c(-1.0, 0.0), 0);
        assert_eq!(e.terms().len(), 1);
        assert_eq!(e.coefficient(2, 0), c(5.0, 0.0));
    }

    #[test]
    fn eval_matches_direct_formula() {
        let e = SuperpotentialExpr::with_denominator(c(0.7, 0.0), c(0.5, 0.2), 2)
            .constant(c(1.5, 0.0))
            .exp(c(-2.0, 1.0), 1)
            .rational(c(0.3, 0.0), 2, 2);
        for x in [-1.0_f64, 0.0, 0.4, 2.5] {
            let u = (-1.4 * x).exp();
            let direct =
                1.5 + c(-2.0, 1.0) * (-0.7 * x).exp() + 0.3 * u / (1.0 + c(0.5, 0.2) * u).powu(2);
            assert!((e.eval(x).unwrap() - direct).norm() < 1e-13);
        }
    }

    #[test]
    fn derivative_matches_richardson_differences() {
        // O(h^2) central differences at h and h/2, combined to O(h^4).
        let exprs = [
            SuperpotentialExpr::zero(1.0.into())
                .exp((-5.0).into(), 1)
                .constant(4.5.into()),
            SuperpotentialExpr::zero(c(0.0, 1.3))
                .exp(c(1.0, 0.5), 1)
                .exp(c(0.2, 0.0), 2),
            SuperpotentialExpr::with_denominator(c(1.1, 0.0), c(0.8, 0.3), 2)
                .rational((-1.0).into(), 2, 2)
                .constant(0.25.into()),
            SuperpotentialExpr::with_denominator(c(0.6, 0.0), c(1.5, 0.0), 4).rational(
                c(0.0, 2.0),
                4,
                2,
            ),
        ];
        let h = 1e-3;
        for e in &exprs {
            let d = e.derivative();
            for x in [-1.2, -0.1, 0.3, 1.7] {
                let d1 = central_difference(e, x, h);
                let d2 = central_difference(e, x, h / 2.0);
                let err1 = (d1 - d.eval(x).unwrap()).norm();
                let err2 = (d2 - d.eval(x).unwrap()).norm();
                let extrap = (4.0 * d2 - d1) / 3.0;
                assert!((extrap - d.eval(x).unwrap()).norm() < 1e-8, "{e} at {x}");
                // O(h²): halving h divides the error by about four
                if err1 > 1e-9 {
                    let ratio = err1 / err2;
                    assert!((3.5..4.5).contains(&ratio), "ratio {ratio} for {e} at {x}");
                }
            }
        }
    }

    #[test]
    fn antiderivative_inverts_derivative() {
        let e = SuperpotentialExpr::zero(c(0.0, 2.0))
            .exp(c(1.0, -1.0), 1)
            .exp(c(3.0, 0.0), 2)
            .constant(c(0.5, 0.0));
        let (prim, linear) = e.antiderivative().unwrap();
        assert_eq!(linear, c(0.5, 0.0));
        let back = prim.derivative().constant(linear);
        for x in [-0.7, 0.2, 1.1] {
            assert!((back.eval(x).unwrap() - e.eval(x).unwrap()).norm() < 1e-13);
        }
        let rational = SuperpotentialExpr::with_denominator(1.0.into(), 1.0.into(), 2).rational(
            1.0.into(),
            2,
            2,
        );
        assert!(rational.antiderivative().is_none());
    }

    #[test]
    fn pole_reported() {
        let e = SuperpotentialExpr::with_denominator(1.0.into(), (-1.0).into(), 2).rational(
            1.0.into(),
            2,
            2,
        );
        assert!(matches!(e.eval(0.0), Err(Error::PoleOnDomain { .. })));
    }

    #[test]
    fn partial_fractions_preserve_values() {
        let e = SuperpotentialExpr::with_denominator(c(0.9, 0.0), c(0.4, 0.3), 2)
            .rational(c(1.0, 0.0), 4, 4)
            .rational(c(-2.0, 0.5), 2, 2)
            .rational(c(0.3, 0.0), 5, 1)
            .exp(c(1.0, 0.0), 3);
        let r = e.partial_fractions();
        assert!(r.terms().iter().all(|t| t.p == 0 || t.k < 2));
        for x in [-0.8, 0.0, 0.5, 1.9] {
            let (a, b) = (e.eval(x).unwrap(), r.eval(x).unwrap());
            assert!((a - b).norm() < 1e-12 * (1.0 + a.norm()));
        }
    }

    proptest! {
        #[test]
        fn product_evaluates_pointwise(
            a in -3.0..3.0f64, b in -3.0..3.0f64, cc in -3.0..3.0f64,
            qi in -0.5..0.5f64, x in -1.0..2.0f64,
        ) {
            let e1 = SuperpotentialExpr::with_denominator(1.0.into(), c(0.7, qi), 2)
                .exp(a.into(), 1).constant(b.into());
            let e2 = SuperpotentialExpr::with_denominator(1.0.into(), c(0.7, qi), 2)
                .rational(cc.into(), 2, 2).constant(1.0.into());
            let prod = e1.mul(&e2).eval(x).unwrap();
            let direct = e1.eval(x).unwrap() * e2.eval(x).unwrap();
            prop_assert!((prod - direct).norm() <= 1e-11 * (1.0 + direct.norm()));
        }
    }
}
