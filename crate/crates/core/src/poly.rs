//! Dense univariate polynomials with exact rational coefficients.
//!
//! `RatPoly` stores coefficients in ascending degree order; the representation
//! is canonical: empty vector for the zero polynomial, nonzero leading
//! coefficient otherwise. Every operation is exact — no rounding anywhere.

use crate::rat::{rat_int, Rat};
use num::traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("inexact polynomial division (nonzero remainder)")]
    InexactDivision,
}

/// Univariate polynomial over the rationals, canonical dense form.
#[derive(Clone, PartialEq, Eq)]
pub struct RatPoly {
    coeffs: Vec<Rat>,
}

impl RatPoly {
    // ---- Constructors ----

    pub fn zero() -> Self {
        RatPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        RatPoly::constant(rat_int(1))
    }

    pub fn constant(c: Rat) -> Self {
        RatPoly::from_coeffs(vec![c])
    }

    /// The indeterminate.
    pub fn x() -> Self {
        RatPoly::from_coeffs(vec![rat_int(0), rat_int(1)])
    }

    /// `c * x^deg`.
    pub fn monomial(c: Rat, deg: usize) -> Self {
        let mut coeffs = vec![rat_int(0); deg + 1];
        coeffs[deg] = c;
        RatPoly::from_coeffs(coeffs)
    }

    /// From ascending coefficients; trailing zeros stripped.
    pub fn from_coeffs(coeffs: Vec<Rat>) -> Self {
        let mut p = RatPoly { coeffs };
        p.normalize();
        p
    }

    /// From ascending machine-integer coefficients.
    pub fn from_ints(coeffs: &[i64]) -> Self {
        RatPoly::from_coeffs(coeffs.iter().map(|&c| rat_int(c)).collect())
    }

    fn normalize(&mut self) {
        while self.coeffs.last().map_or(false, |c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    // ---- Inspection ----

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> Option<&Rat> {
        self.coeffs.last()
    }

    /// Coefficient of `x^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(|| rat_int(0))
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    // ---- Evaluation ----

    /// Exact Horner evaluation.
    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = rat_int(0);
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Floating-point Horner evaluation (for quadrature integrands).
    pub fn eval_f64(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + crate::rat::rat_to_f64(c);
        }
        acc
    }

    /// Interval Horner evaluation: the result encloses `p(x)` for every
    /// `x` in the input interval (exact rational endpoint arithmetic).
    pub fn eval_interval(&self, x: &crate::interval::Interval) -> crate::interval::Interval {
        let mut acc = crate::interval::Interval::point(rat_int(0));
        for c in self.coeffs.iter().rev() {
            let shifted = &acc * x;
            acc = &shifted + &crate::interval::Interval::point(c.clone());
        }
        acc
    }

    // ---- Arithmetic ----

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return RatPoly::zero();
        }
        RatPoly::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Substitute `inner` for the indeterminate (exact composition by Horner).
    pub fn compose(&self, inner: &RatPoly) -> RatPoly {
        let mut acc = RatPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * inner) + &RatPoly::constant(c.clone());
        }
        acc
    }

    /// Composition with an affine polynomial `a + b*x`.
    ///
    /// The general `compose` accepts any inner polynomial; this entry point
    /// asserts the degree-≤1 contract of affine substitutions.
    pub fn compose_affine(&self, affine: &RatPoly) -> RatPoly {
        assert!(
            affine.degree().map_or(true, |d| d <= 1),
            "compose_affine requires an inner polynomial of degree <= 1"
        );
        self.compose(affine)
    }

    /// Exact formal derivative.
    pub fn derivative(&self) -> RatPoly {
        if self.coeffs.len() <= 1 {
            return RatPoly::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * rat_int(k as i64))
            .collect();
        RatPoly::from_coeffs(coeffs)
    }

    /// Antiderivative with zero constant term.
    pub fn antiderivative(&self) -> RatPoly {
        if self.is_zero() {
            return RatPoly::zero();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(rat_int(0));
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs.push(c / rat_int(k as i64 + 1));
        }
        RatPoly::from_coeffs(coeffs)
    }

    /// Exact definite integral over `[a, b]`.
    pub fn definite_integral(&self, a: &Rat, b: &Rat) -> Rat {
        let f = self.antiderivative();
        f.eval(b) - f.eval(a)
    }

    // ---- Division and gcd ----

    /// Euclidean division: `self = q * divisor + r` with `deg r < deg divisor`.
    pub fn div_rem(&self, divisor: &RatPoly) -> Result<(RatPoly, RatPoly), PolyError> {
        let d_deg = divisor.degree().ok_or(PolyError::DivisionByZero)?;
        let d_lead = divisor.leading_coeff().unwrap().clone();
        let mut rem = self.coeffs.clone();
        let mut quot: Vec<Rat> = Vec::new();
        while rem.len() > d_deg {
            let r_deg = rem.len() - 1;
            let factor = rem.last().unwrap() / &d_lead;
            let shift = r_deg - d_deg;
            if quot.len() < shift + 1 {
                quot.resize(shift + 1, rat_int(0));
            }
            quot[shift] = factor.clone();
            for (k, c) in divisor.coeffs.iter().enumerate() {
                let idx = shift + k;
                let v = &rem[idx] - c * &factor;
                rem[idx] = v;
            }
            while rem.last().map_or(false, |c| c.is_zero()) {
                rem.pop();
            }
        }
        Ok((RatPoly::from_coeffs(quot), RatPoly::from_coeffs(rem)))
    }

    /// Division known to be exact; errors if a remainder survives.
    pub fn div_exact(&self, divisor: &RatPoly) -> Result<RatPoly, PolyError> {
        let (q, r) = self.div_rem(divisor)?;
        if r.is_zero() {
            Ok(q)
        } else {
            Err(PolyError::InexactDivision)
        }
    }

    /// Monic gcd by the Euclidean algorithm.
    pub fn gcd(&self, other: &RatPoly) -> RatPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.into_monic()
    }

    /// Scale so the leading coefficient is 1 (zero polynomial unchanged).
    pub fn into_monic(self) -> RatPoly {
        match self.leading_coeff() {
            Some(lc) if !lc.is_one() => {
                let inv = lc.clone().recip();
                self.scale(&inv)
            }
            _ => self,
        }
    }

    /// Square-free decomposition (Yun): returns `(factor, multiplicity)` pairs
    /// with pairwise-coprime square-free factors, product of powers = monic self.
    pub fn squarefree_decomposition(&self) -> Vec<(RatPoly, usize)> {
        let p = self.clone().into_monic();
        match p.degree() {
            None | Some(0) => return Vec::new(),
            _ => {}
        }
        let dp = p.derivative();
        let a0 = p.gcd(&dp);
        if a0.degree() == Some(0) {
            return vec![(p, 1)];
        }
        let mut out = Vec::new();
        let mut b = p.div_exact(&a0).expect("gcd divides");
        let mut c = dp.div_exact(&a0).expect("gcd divides derivative");
        let mut i = 1usize;
        loop {
            let d = &c - &b.derivative();
            let f = b.gcd(&d);
            if f.degree().map_or(false, |deg| deg >= 1) {
                out.push((f.clone(), i));
            }
            b = b.div_exact(&f).expect("factor divides");
            c = d.div_exact(&f).expect("factor divides");
            if b.degree() == Some(0) {
                break;
            }
            i += 1;
        }
        out
    }

    /// Product of the distinct irreducible factors (radical), monic.
    pub fn squarefree_part(&self) -> RatPoly {
        let mut acc = RatPoly::one();
        for (f, _) in self.squarefree_decomposition() {
            acc = &acc * &f;
        }
        acc
    }

    /// Largest absolute coefficient (zero for the zero polynomial).
    pub fn max_coeff_abs(&self) -> Rat {
        self.coeffs
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_else(|| rat_int(0))
    }
}

impl Add for &RatPoly {
    type Output = RatPoly;
    fn add(self, rhs: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect();
        RatPoly::from_coeffs(coeffs)
    }
}

impl Sub for &RatPoly {
    type Output = RatPoly;
    fn sub(self, rhs: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect();
        RatPoly::from_coeffs(coeffs)
    }
}

impl Mul for &RatPoly {
    type Output = RatPoly;
    fn mul(self, rhs: &RatPoly) -> RatPoly {
        if self.is_zero() || rhs.is_zero() {
            return RatPoly::zero();
        }
        let mut coeffs = vec![rat_int(0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                let v = &coeffs[i + j] + a * b;
                coeffs[i + j] = v;
            }
        }
        RatPoly::from_coeffs(coeffs)
    }
}

impl Neg for &RatPoly {
    type Output = RatPoly;
    fn neg(self) -> RatPoly {
        RatPoly::from_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Debug for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| match k {
                0 => format!("{c}"),
                1 => format!("{c}*x"),
                _ => format!("{c}*x^{k}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}
