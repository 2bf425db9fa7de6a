//! The Sharipov counterexample family: construction, transforms, and shape checks.
//!
//! Each family member is a piecewise function
//! `scale·x^power·(1 − ε·P(coord(x)))` on `[0, knot)` and `scale·x^power`
//! beyond, where `coord` is either `τ = (knot−x)/knot` or `θ = x/knot`.
//! Keeping the perturbation polynomial in the normalized coordinate keeps all
//! coefficients rational — expanding in `x` would inject powers of the
//! irrational knot — so every structural check below is an exact computation.

use crate::certificate::{certify_sign, SignCertificate, SignVerdict};
use crate::constants::{AlgebraicConstant, ConstantError};
use crate::interval::Interval;
use crate::poly::RatPoly;
use crate::rat::{rat, rat_from_f64, rat_from_str, rat_int, rat_pow, rat_to_f64, rat_to_string, Rat};
use num::traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum FamilyError {
    #[error("operation requires role {expected:?}, function has {found:?}")]
    RoleMismatch {
        expected: Role,
        found: Option<Role>,
    },
    #[error("antiderivative is not of the family shape: {0}")]
    NotFamilyShape(String),
    #[error("power must be at least {0} for this transform")]
    PowerTooSmall(u32),
    #[error("transform defined for {0:?}-normalized functions only")]
    WrongNormalization(Normalization),
    #[error("knot construction failed: {0}")]
    Knot(#[from] ConstantError),
    #[error("invalid function definition: {0}")]
    Definition(String),
}

/// Which member of the counterexample chain a function plays.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Role {
    Q,
    H,
    S,
}

/// Normalized coordinate convention for the perturbation polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Normalization {
    /// τ = (knot − x)/knot; the knot maps to τ = 0, the origin to τ = 1.
    #[serde(rename = "TAU")]
    Tau,
    /// θ = x/knot; the origin maps to θ = 0, the knot to θ = 1.
    #[serde(rename = "THETA")]
    Theta,
}

/// Construction parameter ε. Values in (0, 1] are paper-conformant; anything
/// else is accepted for exploration but watermarked non-conformant.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyParams {
    pub epsilon: Rat,
}

impl FamilyParams {
    pub fn new(epsilon: Rat) -> Self {
        FamilyParams { epsilon }
    }

    pub fn is_conformant(&self) -> bool {
        self.epsilon.is_positive() && self.epsilon <= rat_int(1)
    }
}

/// A piecewise family function. Immutable after construction.
#[derive(Debug, Clone)]
pub struct FamilyFunction {
    role: Option<Role>,
    scale: Rat,
    power: u32,
    knot: AlgebraicConstant,
    normalization: Normalization,
    perturbation: RatPoly,
    epsilon: Rat,
}

impl PartialEq for FamilyFunction {
    fn eq(&self, other: &Self) -> bool {
        self.scale == other.scale
            && self.power == other.power
            && self.knot == other.knot
            && self.normalization == other.normalization
            && self.perturbation == other.perturbation
            && self.epsilon == other.epsilon
    }
}

/// R(τ) = (21τ³ − 34τ² + 16τ − 2)τ, the degree-4 perturbation of q.
pub fn perturbation_r() -> RatPoly {
    RatPoly::from_ints(&[0, -2, 16, -34, 21])
}

/// U(τ) = (7τ² − 8τ + 2)τ², the degree-4 perturbation of h.
pub fn perturbation_u() -> RatPoly {
    RatPoly::from_ints(&[0, 0, 2, -8, 7])
}

/// V(θ) = (7θ² − 3)(θ² − 1)³ / 3, the degree-8 perturbation of S,
/// expanded to the monomial basis.
pub fn perturbation_v() -> RatPoly {
    let factor1 = RatPoly::from_ints(&[-3, 0, 7]);
    let theta2_minus_1 = RatPoly::from_ints(&[-1, 0, 1]);
    let cubed = &(&theta2_minus_1 * &theta2_minus_1) * &theta2_minus_1;
    (&factor1 * &cubed).scale(&rat(1, 3))
}

/// q(x) = 12x(1 − ε·R(τ)) on [0, x0), 12x beyond.
pub fn build_q(params: &FamilyParams) -> FamilyFunction {
    FamilyFunction {
        role: Some(Role::Q),
        scale: rat_int(12),
        power: 1,
        knot: AlgebraicConstant::knot_x0(),
        normalization: Normalization::Tau,
        perturbation: perturbation_r(),
        epsilon: params.epsilon.clone(),
    }
}

/// h(x) = 6x²(1 − ε·U(τ)) on [0, x0), 6x² beyond.
pub fn build_h(params: &FamilyParams) -> FamilyFunction {
    FamilyFunction {
        role: Some(Role::H),
        scale: rat_int(6),
        power: 2,
        knot: AlgebraicConstant::knot_x0(),
        normalization: Normalization::Tau,
        perturbation: perturbation_u(),
        epsilon: params.epsilon.clone(),
    }
}

/// S(x) = 6x⁴(1 − ε·V(θ)) on [0, x1), 6x⁴ beyond.
pub fn build_s(params: &FamilyParams) -> FamilyFunction {
    FamilyFunction {
        role: Some(Role::S),
        scale: rat_int(6),
        power: 4,
        knot: AlgebraicConstant::knot_x1(),
        normalization: Normalization::Theta,
        perturbation: perturbation_v(),
        epsilon: params.epsilon.clone(),
    }
}

impl FamilyFunction {
    pub fn role(&self) -> Option<Role> {
        self.role
    }

    pub fn scale(&self) -> &Rat {
        &self.scale
    }

    pub fn power(&self) -> u32 {
        self.power
    }

    pub fn knot(&self) -> &AlgebraicConstant {
        &self.knot
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    pub fn perturbation(&self) -> &RatPoly {
        &self.perturbation
    }

    pub fn epsilon(&self) -> &Rat {
        &self.epsilon
    }

    pub fn is_conformant(&self) -> bool {
        FamilyParams::new(self.epsilon.clone()).is_conformant()
    }

    /// Same function with a different ε (the family is affine in ε).
    pub fn with_epsilon(&self, epsilon: Rat) -> FamilyFunction {
        FamilyFunction {
            epsilon,
            ..self.clone()
        }
    }

    /// Exact continuity test at the knot: the perturbation must vanish at the
    /// knot's normalized coordinate (τ = 0 resp. θ = 1).
    pub fn is_continuous_at_knot(&self) -> bool {
        let at_knot = match self.normalization {
            Normalization::Tau => self.perturbation.eval(&rat_int(0)),
            Normalization::Theta => self.perturbation.eval(&rat_int(1)),
        };
        at_knot.is_zero()
    }

    /// d/dx of the perturbed branch, expressed in the normalized coordinate:
    /// f'(x) = scale·x^(power−1)·(power − ε·G(coord)).
    fn derivative_coordinate_poly(&self) -> RatPoly {
        let p = rat_int(self.power as i64);
        let pi = &self.perturbation;
        let dpi = pi.derivative();
        match self.normalization {
            Normalization::Tau => {
                // G = p·Π(τ) − (1−τ)·Π'(τ)
                let one_minus_tau = RatPoly::from_ints(&[1, -1]);
                &pi.scale(&p) - &(&one_minus_tau * &dpi)
            }
            Normalization::Theta => {
                // G = p·Π(θ) + θ·Π'(θ)
                let theta = RatPoly::x();
                &pi.scale(&p) + &(&theta * &dpi)
            }
        }
    }

    /// Polynomial whose nonnegativity on [0,1] certifies that f is
    /// nondecreasing on [0, knot): `power − ε·G`.
    pub fn monotonicity_polynomial(&self) -> RatPoly {
        let g = self.derivative_coordinate_poly();
        &RatPoly::constant(rat_int(self.power as i64)) - &g.scale(&self.epsilon)
    }

    /// Polynomial whose nonnegativity on [0,1] certifies that x·f'(x) is
    /// nondecreasing on [0, knot), the smooth reduction of log-convexity:
    /// `power² − ε·G₂` with `G₂` one more coordinate differentiation deep.
    pub fn log_convexity_polynomial(&self) -> RatPoly {
        let p = rat_int(self.power as i64);
        let g = self.derivative_coordinate_poly();
        let dg = g.derivative();
        let g2 = match self.normalization {
            Normalization::Tau => {
                let one_minus_tau = RatPoly::from_ints(&[1, -1]);
                &g.scale(&p) - &(&one_minus_tau * &dg)
            }
            Normalization::Theta => {
                let theta = RatPoly::x();
                &g.scale(&p) + &(&theta * &dg)
            }
        };
        &RatPoly::constant(&p * &p) - &g2.scale(&self.epsilon)
    }

    /// Polynomial whose nonnegativity on [0,1] certifies f ≥ 0 on [0, knot):
    /// `1 − ε·Π`.
    pub fn nonnegativity_polynomial(&self) -> RatPoly {
        &RatPoly::one() - &self.perturbation.scale(&self.epsilon)
    }

    /// Which side of the knot a rational abscissa lies on, decided exactly.
    pub fn branch_at(&self, x: &Rat) -> Branch {
        let (lo, hi) = self.knot.bracket();
        if x < lo {
            return Branch::Perturbed;
        }
        if x > hi {
            return Branch::Tail;
        }
        let v = self.knot.defining_polynomial().eval(x);
        if v.is_zero() {
            return Branch::AtKnot;
        }
        let below_sign = self.knot.defining_polynomial().eval(lo);
        if below_sign.is_zero() || v.is_positive() == below_sign.is_positive() {
            Branch::Perturbed
        } else {
            Branch::Tail
        }
    }

    /// Enclose f(x) for rational x ≥ 0 to the requested width.
    ///
    /// Branch selection is exact; the perturbed branch threads the knot
    /// enclosure through interval arithmetic and refines until the result is
    /// tight enough. On the tail the value is an exact rational point.
    pub fn eval(&self, x: &Rat, width: f64) -> Interval {
        assert!(!x.is_negative(), "family functions live on [0, +inf)");
        let pure = &self.scale * rat_pow(x, self.power as i64);
        match self.branch_at(x) {
            Branch::Tail | Branch::AtKnot => Interval::point(pure),
            Branch::Perturbed => {
                if pure.is_zero() {
                    return Interval::point(rat_int(0));
                }
                let target = rat_from_f64(width);
                let mut knot_width = rat_from_f64(width.min(1e-6));
                loop {
                    let enc = self.knot.enclose_rat(&knot_width);
                    let coord = self.coordinate_interval(x, &enc);
                    let pert = self.perturbation.eval_interval(&coord);
                    let factor = &Interval::point(rat_int(1)) - &pert.scale(&self.epsilon);
                    let value = factor.scale(&pure);
                    if value.width() <= target {
                        return value;
                    }
                    knot_width = knot_width / rat_int(64);
                }
            }
        }
    }

    fn coordinate_interval(&self, x: &Rat, knot_enc: &Interval) -> Interval {
        let over_knot = &Interval::point(x.clone()) * &knot_enc.recip();
        match self.normalization {
            Normalization::Tau => &Interval::point(rat_int(1)) - &over_knot,
            Normalization::Theta => over_knot,
        }
    }

    /// Fast floating-point evaluation for quadrature integrands.
    /// `knot_f64` should be a tight approximation of the knot.
    pub fn eval_f64(&self, x: f64, knot_f64: f64) -> f64 {
        let pure = rat_to_f64(&self.scale) * x.powi(self.power as i32);
        if x >= knot_f64 {
            return pure;
        }
        pure * self.perturbed_factor_f64(x, knot_f64)
    }

    /// f(x)/x in floating point, finite at the origin (power ≥ 1).
    pub fn eval_div_x_f64(&self, x: f64, knot_f64: f64) -> f64 {
        let pure = rat_to_f64(&self.scale) * x.powi(self.power as i32 - 1);
        if x >= knot_f64 {
            return pure;
        }
        pure * self.perturbed_factor_f64(x, knot_f64)
    }

    fn perturbed_factor_f64(&self, x: f64, knot_f64: f64) -> f64 {
        let coord = match self.normalization {
            Normalization::Tau => (knot_f64 - x) / knot_f64,
            Normalization::Theta => x / knot_f64,
        };
        1.0 - rat_to_f64(&self.epsilon) * self.perturbation.eval_f64(coord)
    }

    /// Differentiate a role-H function; reproduces the role-Q construction
    /// coefficient-exactly for the built-in family.
    pub fn differentiate(&self) -> Result<FamilyFunction, FamilyError> {
        if self.role != Some(Role::H) {
            return Err(FamilyError::RoleMismatch {
                expected: Role::H,
                found: self.role,
            });
        }
        if self.power < 2 {
            return Err(FamilyError::PowerTooSmall(2));
        }
        let p = rat_int(self.power as i64);
        // f' = scale·p·x^(p−1)·(1 − ε·(Π − coord-adjusted Π'/p))
        let g_over_p = self.derivative_coordinate_poly().scale(&p.clone().recip());
        Ok(FamilyFunction {
            role: Some(Role::Q),
            scale: &self.scale * &p,
            power: self.power - 1,
            knot: self.knot.clone(),
            normalization: self.normalization,
            perturbation: g_over_p,
            epsilon: self.epsilon.clone(),
        })
    }

    /// Integrate a role-Q function from 0, fixing the integration constant to
    /// zero; the antiderivative is of the family shape exactly when the
    /// design condition ∫₀¹(1−σ)^power·Π(σ)dσ = 0 holds.
    pub fn integrate(&self) -> Result<FamilyFunction, FamilyError> {
        if self.role != Some(Role::Q) {
            return Err(FamilyError::RoleMismatch {
                expected: Role::Q,
                found: self.role,
            });
        }
        if self.normalization != Normalization::Tau {
            return Err(FamilyError::WrongNormalization(Normalization::Tau));
        }
        let p = self.power as i64;
        // M = antiderivative of (1−σ)^p·Π(σ); the tail is a pure power iff
        // M(1) − M(0) = 0.
        let one_minus = RatPoly::from_ints(&[1, -1]);
        let mut weight = RatPoly::one();
        for _ in 0..p {
            weight = &weight * &one_minus;
        }
        let m = (&weight * &self.perturbation).antiderivative();
        let m1 = m.eval(&rat_int(1));
        let moment = &m1 - &m.eval(&rat_int(0));
        if !moment.is_zero() {
            return Err(FamilyError::NotFamilyShape(format!(
                "perturbed area below the knot is off by {} times the knot power",
                rat_to_string(&moment)
            )));
        }
        // Π_new(τ) = (p+1)·(M(1) − M(τ)) / (1−τ)^(p+1), an exact division.
        let numerator = (&RatPoly::constant(m1) - &m).scale(&rat_int(p + 1));
        let mut divisor = RatPoly::one();
        for _ in 0..=p {
            divisor = &divisor * &one_minus;
        }
        let perturbation = numerator
            .div_exact(&divisor)
            .expect("numerator vanishes to order power+1 at tau = 1");
        Ok(FamilyFunction {
            role: Some(Role::H),
            scale: &self.scale / rat_int(p + 1),
            power: self.power + 1,
            knot: self.knot.clone(),
            normalization: Normalization::Tau,
            perturbation,
            epsilon: self.epsilon.clone(),
        })
    }

    /// Lift a role-H function to role S via s(x) = 4·h(x²) and
    /// S(x) = ∫₀ˣ s(t)/t dt. The knot maps to its square root.
    pub fn lift_to_s(&self) -> Result<FamilyFunction, FamilyError> {
        if self.role != Some(Role::H) {
            return Err(FamilyError::RoleMismatch {
                expected: Role::H,
                found: self.role,
            });
        }
        if self.normalization != Normalization::Tau {
            return Err(FamilyError::WrongNormalization(Normalization::Tau));
        }
        let p = self.power as i64;
        // On [0, knot'): x·S'(x) = 4h(x²) and τ(x²) = 1 − θ², so
        // S(x) = (4·scale/2p)·x^(2p)·(1 − ε·Π_S(θ)) with
        // Π_S(θ) = 2p·∫₀^θ u^(2p−1)·Π(1−u²) du / θ^(2p).
        let inner = self
            .perturbation
            .compose(&RatPoly::from_ints(&[1, 0, -1]));
        let integrand = &RatPoly::monomial(rat_int(1), (2 * p - 1) as usize) * &inner;
        let antider = integrand.antiderivative();
        if !antider.eval(&rat_int(1)).is_zero() {
            return Err(FamilyError::NotFamilyShape(
                "lifted tail is not a pure power (nonzero odd moment)".into(),
            ));
        }
        let numerator = antider.scale(&rat_int(2 * p));
        let divisor = RatPoly::monomial(rat_int(1), (2 * p) as usize);
        let perturbation = numerator
            .div_exact(&divisor)
            .expect("integral vanishes to order 2·power at the origin");
        let knot = sqrt_knot(&self.knot)?;
        Ok(FamilyFunction {
            role: Some(Role::S),
            scale: &self.scale * rat(2, p),
            power: 2 * self.power,
            knot,
            normalization: Normalization::Theta,
            perturbation,
            epsilon: self.epsilon.clone(),
        })
    }

    /// Exact structural checks behind each conjecture's admissibility class.
    pub fn check_shape(&self) -> ShapeReport {
        let continuous = self.is_continuous_at_knot();
        let zero = rat_int(0);
        let one = rat_int(1);
        let nonnegative = certify_sign(&self.nonnegativity_polynomial(), &zero, &one);
        let nondecreasing = certify_sign(&self.monotonicity_polynomial(), &zero, &one);
        let log_convex_cert = certify_sign(&self.log_convexity_polynomial(), &zero, &one);
        let log_convex_sampled = self.midpoint_convexity_sample();
        ShapeReport {
            continuous,
            nonnegative_ok: self.scale.is_positive()
                && nonnegative.verdict == SignVerdict::Nonnegative,
            nonnegative,
            nondecreasing_ok: self.scale.is_positive()
                && nondecreasing.verdict == SignVerdict::Nonnegative,
            nondecreasing,
            log_convex_ok: self.scale.is_positive()
                && log_convex_cert.verdict == SignVerdict::Nonnegative
                && log_convex_sampled,
            log_convex: log_convex_cert,
            log_convex_note: "x·f'(x) nondecreasing on [0,1] in normalized coordinates \
                              (exact certificate); midpoint convexity of f(e^y) sampled \
                              on a geometric grid"
                .into(),
            conformant_epsilon: self.is_conformant(),
        }
    }

    /// Numeric validation of the log-convexity reduction: midpoint convexity
    /// of σ(y) = f(e^y) on a geometric grid (rational abscissas, so the
    /// midpoint in log scale is exact).
    fn midpoint_convexity_sample(&self) -> bool {
        // x_i = (1/8)·(3/2)^i spans well below and above the knot.
        let ratio = rat(3, 2);
        let mut xs = Vec::new();
        let mut x = rat(1, 8);
        for _ in 0..14 {
            xs.push(x.clone());
            x = &x * &ratio;
        }
        let values: Vec<Interval> = xs.iter().map(|x| self.eval(x, 1e-12)).collect();
        for w in values.windows(3) {
            let mid = w[1].midpoint();
            let avg = (w[0].midpoint() + w[2].midpoint()) / rat_int(2);
            // Validation, not proof: allow the interval slack.
            if mid > avg + rat_from_f64(1e-9) {
                return false;
            }
        }
        true
    }
}

/// Branch of the piecewise definition at a given abscissa.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Perturbed,
    AtKnot,
    Tail,
}

/// Square root of a positive algebraic constant with binomial defining
/// polynomial a·t^d − b: the root of a·t^(2d) − b.
fn sqrt_knot(knot: &AlgebraicConstant) -> Result<AlgebraicConstant, FamilyError> {
    let p = knot.defining_polynomial();
    let d = p
        .degree()
        .ok_or_else(|| FamilyError::NotFamilyShape("knot with constant defining polynomial".into()))?;
    let mut coeffs = vec![rat_int(0); 2 * d + 1];
    coeffs[0] = p.coeff(0);
    coeffs[2 * d] = p.coeff(d);
    for k in 1..d {
        if !p.coeff(k).is_zero() {
            return Err(FamilyError::NotFamilyShape(
                "knot square root needs a two-term defining polynomial".into(),
            ));
        }
    }
    let defining = RatPoly::from_coeffs(coeffs);
    let hi = knot.bracket().1.clone().max(rat_int(1));
    AlgebraicConstant::new(defining, (rat_int(0), hi)).map_err(FamilyError::from)
}

/// Outcome of the exact structural checks.
#[derive(Debug, Clone)]
pub struct ShapeReport {
    pub continuous: bool,
    pub nonnegative_ok: bool,
    pub nonnegative: SignCertificate,
    pub nondecreasing_ok: bool,
    pub nondecreasing: SignCertificate,
    pub log_convex_ok: bool,
    pub log_convex: SignCertificate,
    pub log_convex_note: String,
    pub conformant_epsilon: bool,
}

impl ShapeReport {
    /// Admissibility for a conjecture class: C1 needs log-convexity on top of
    /// monotone nonnegativity; C2 drops log-convexity; C3 only needs a
    /// nonnegative continuous function.
    pub fn admissible_for(&self, formulation: crate::hypothesis::Conjecture) -> bool {
        use crate::hypothesis::Conjecture::*;
        match formulation {
            C1 => {
                self.continuous && self.nonnegative_ok && self.nondecreasing_ok && self.log_convex_ok
            }
            C2 => self.continuous && self.nonnegative_ok && self.nondecreasing_ok,
            C3 => self.continuous && self.nonnegative_ok,
        }
    }
}

/// JSON schema for user-supplied family functions (role-free).
#[derive(Debug, Serialize, Deserialize)]
pub struct FamilyDefinition {
    pub scale: String,
    pub power: u32,
    pub knot: KnotDefinition,
    pub normalization: Normalization,
    pub perturbation: Vec<String>,
    pub epsilon: String,
}

/// JSON schema for an algebraic knot.
#[derive(Debug, Serialize, Deserialize)]
pub struct KnotDefinition {
    pub defining_poly: Vec<String>,
    pub bracket: [String; 2],
}

impl FamilyDefinition {
    pub fn to_function(&self) -> Result<FamilyFunction, FamilyError> {
        let parse = |s: &str| {
            rat_from_str(s).map_err(|e| FamilyError::Definition(format!("{e} in `{s}`")))
        };
        let scale = parse(&self.scale)?;
        let epsilon = parse(&self.epsilon)?;
        let coeffs: Result<Vec<Rat>, _> =
            self.knot.defining_poly.iter().map(|s| parse(s)).collect();
        let defining = RatPoly::from_coeffs(coeffs?);
        let bracket = (parse(&self.knot.bracket[0])?, parse(&self.knot.bracket[1])?);
        let knot = AlgebraicConstant::new(defining, bracket)?;
        let pert: Result<Vec<Rat>, _> = self.perturbation.iter().map(|s| parse(s)).collect();
        Ok(FamilyFunction {
            role: None,
            scale,
            power: self.power,
            knot,
            normalization: self.normalization,
            perturbation: RatPoly::from_coeffs(pert?),
            epsilon,
        })
    }

    pub fn from_function(f: &FamilyFunction) -> FamilyDefinition {
        FamilyDefinition {
            scale: rat_to_string(&f.scale),
            power: f.power,
            knot: KnotDefinition {
                defining_poly: f
                    .knot
                    .defining_polynomial()
                    .coeffs()
                    .iter()
                    .map(rat_to_string)
                    .collect(),
                bracket: [
                    rat_to_string(&f.knot.bracket().0),
                    rat_to_string(&f.knot.bracket().1),
                ],
            },
            normalization: f.normalization,
            perturbation: f.perturbation.coeffs().iter().map(rat_to_string).collect(),
            epsilon: rat_to_string(&f.epsilon),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(eps_num: i64, eps_den: i64) -> FamilyParams {
        FamilyParams::new(rat(eps_num, eps_den))
    }

    #[test]
    fn construction_identity_derivative() {
        // R(τ) = U(τ) − ((1−τ)/2)·U'(τ) as exact polynomials.
        let u = perturbation_u();
        let correction = (&RatPoly::from_ints(&[1, -1]) * &u.derivative()).scale(&rat(1, 2));
        assert_eq!(&u - &correction, perturbation_r());
    }

    #[test]
    fn construction_identity_lift() {
        // V(θ) + (θ/4)·V'(θ) = U(1 − θ²) as exact polynomials.
        let v = perturbation_v();
        let lhs = &v + &(&RatPoly::x() * &v.derivative()).scale(&rat(1, 4));
        let rhs = perturbation_u().compose(&RatPoly::from_ints(&[1, 0, -1]));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn boundary_values_exact() {
        // Continuity: R(0) = 0, U(0) = 0, V(1) = 0; origin side: R(1) = 1,
        // U(1) = 1, V(0) = 1.
        let zero = rat_int(0);
        let one = rat_int(1);
        assert_eq!(perturbation_r().eval(&zero), zero);
        assert_eq!(perturbation_u().eval(&zero), zero);
        assert_eq!(perturbation_v().eval(&one), zero);
        assert_eq!(perturbation_r().eval(&one), one);
        assert_eq!(perturbation_u().eval(&one), one);
        assert_eq!(perturbation_v().eval(&zero), one);
    }

    #[test]
    fn vanishing_moments_exact() {
        let zero = rat_int(0);
        let one = rat_int(1);
        let u = perturbation_u();
        let v = perturbation_v();
        let one_minus = RatPoly::from_ints(&[1, -1]);
        assert_eq!((&one_minus * &u).definite_integral(&zero, &one), zero);
        let sq = &one_minus * &one_minus;
        assert_eq!((&sq * &u).definite_integral(&zero, &one), zero);
        let y5 = RatPoly::monomial(rat_int(1), 5);
        assert_eq!((&y5 * &v).definite_integral(&zero, &one), zero);
        // Plain moment of U is 1/15.
        assert_eq!(u.definite_integral(&zero, &one), rat(1, 15));
    }

    #[test]
    fn differentiate_reproduces_q() {
        for (n, d) in [(1i64, 4i64), (1, 2), (1, 1)] {
            let h = build_h(&params(n, d));
            let q = h.differentiate().unwrap();
            assert_eq!(q, build_q(&params(n, d)));
            assert_eq!(q.role(), Some(Role::Q));
        }
    }

    #[test]
    fn differentiate_random_epsilons() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(41);
        for _ in 0..20 {
            let eps = rat(rng.gen_range(1..=100), 100);
            let h = build_h(&FamilyParams::new(eps.clone()));
            assert_eq!(h.differentiate().unwrap(), build_q(&FamilyParams::new(eps)));
        }
    }

    #[test]
    fn integrate_reproduces_h() {
        for (n, d) in [(1i64, 4i64), (1, 2), (1, 1)] {
            let q = build_q(&params(n, d));
            let h = q.integrate().unwrap();
            assert_eq!(h, build_h(&params(n, d)));
            // Round trip through the fundamental theorem.
            assert_eq!(h.differentiate().unwrap(), q);
        }
    }

    #[test]
    fn lift_reproduces_s() {
        for (n, d) in [(1i64, 4i64), (1, 2), (1, 1)] {
            let h = build_h(&params(n, d));
            let s = h.lift_to_s().unwrap();
            assert_eq!(s, build_s(&params(n, d)));
            assert_eq!(s.role(), Some(Role::S));
        }
    }

    #[test]
    fn role_mismatch_rejected() {
        let q = build_q(&params(1, 1));
        assert!(matches!(
            q.differentiate(),
            Err(FamilyError::RoleMismatch { .. })
        ));
        let h = build_h(&params(1, 1));
        assert!(matches!(h.integrate(), Err(FamilyError::RoleMismatch { .. })));
    }

    #[test]
    fn eval_known_points() {
        // h(0) = 0 exactly.
        let h = build_h(&params(1, 1));
        let at0 = h.eval(&rat_int(0), 1e-12);
        assert_eq!(at0, Interval::point(rat_int(0)));
        // q(1) = 12 exactly (tail branch).
        let q = build_q(&params(1, 1));
        assert_eq!(q.eval(&rat_int(1), 1e-12), Interval::point(rat_int(12)));
        // h(1/2) with ε = 1: τ = 1 − 1/(2·x0), value 1.5418061882451627...
        let at_half = h.eval(&rat(1, 2), 1e-9);
        assert!(at_half.contains(&rat_from_str("1.541806188245162731").unwrap()));
        assert!(at_half.width() <= rat_from_f64(1e-9));
    }

    #[test]
    fn values_at_knot_fractions() {
        // The characteristic values live at irrational abscissas (fractions of
        // the knot), so they are checked through the exact prefactor algebra:
        //   q(x0)   = 12·x0              = 10.5613408415207...
        //   q(x0/2) = 6·x0·(15/16)       =  4.9506285194628...   (R(1/2) = 1/16)
        //   h(x0/2) = (3/2)x0²·(17/16)   =  1.2345134416036...   (U(1/2) = -1/16)
        //   h(x0)   = 6·x0²              =  4.6475800154489...
        //   S(x1/2) = (3/8)√0.6·(211/256)=  0.2394139119286...   (V(1/2) = 45/256)
        assert_eq!(perturbation_r().eval(&rat(1, 2)), rat(1, 16));
        assert_eq!(perturbation_u().eval(&rat(1, 2)), rat(-1, 16));
        assert_eq!(perturbation_v().eval(&rat(1, 2)), rat(45, 256));

        let x0 = AlgebraicConstant::knot_x0();
        let enc = x0.enclose(1e-12);
        assert!(enc
            .scale(&rat_int(12))
            .contains(&rat_from_str("10.561340841520720767").unwrap()));
        assert!(enc
            .scale(&(rat_int(6) * rat(15, 16)))
            .contains(&rat_from_str("4.950628519462837860").unwrap()));

        let x0_sq = match x0.exact_power(2).unwrap() {
            crate::constants::PowerValue::Algebraic(c) => c,
            other => panic!("x0^2 should stay algebraic, got {other:?}"),
        };
        let enc_sq = x0_sq.enclose(1e-12);
        assert!(enc_sq
            .scale(&rat(51, 32))
            .contains(&rat_from_str("1.234513441603614132").unwrap()));
        assert!(enc_sq
            .scale(&rat_int(6))
            .contains(&rat_from_str("4.647580015448900262").unwrap()));
        assert!(enc_sq
            .scale(&(rat(3, 8) * rat(211, 256)))
            .contains(&rat_from_str("0.239413911928642079").unwrap()));
    }

    #[test]
    fn eval_s_at_half_knot_point() {
        // S(x1/2) has no rational abscissa, but θ = 1/2 corresponds to
        // x = x1/2; instead evaluate at the rational 0.469 (close to x1/2)
        // and check against a loose numeric bound, plus the exact tail value
        // S(1) = 6.
        let s = build_s(&params(1, 1));
        assert_eq!(s.eval(&rat_int(1), 1e-12), Interval::point(rat_int(6)));
        let v = s.eval(&rat(469, 1000), 1e-10);
        assert!(v.width() <= rat_from_f64(1e-10));
        // S(0.469) ≈ 6·0.469⁴·(1 − V(0.469/x1)) ≈ 0.2395...
        assert!(v.lo() > &rat(22, 100) && v.hi() < &rat(26, 100));
    }

    #[test]
    fn shape_checks_conformant_epsilons() {
        for eps in [rat(1, 4), rat(1, 2), rat_int(1)] {
            for f in [
                build_q(&FamilyParams::new(eps.clone())),
                build_h(&FamilyParams::new(eps.clone())),
                build_s(&FamilyParams::new(eps.clone())),
            ] {
                let report = f.check_shape();
                assert!(report.continuous);
                assert!(report.nonnegative_ok, "nonnegativity at eps={eps}");
                assert!(report.conformant_epsilon);
            }
            // Monotonicity is required of h and S (their conjecture classes);
            // q only needs to be nonnegative and continuous — and indeed
            // q'(x0-) = 12(1 − 2ε) goes negative for ε > 1/2.
            for f in [
                build_h(&FamilyParams::new(eps.clone())),
                build_s(&FamilyParams::new(eps.clone())),
            ] {
                assert!(f.check_shape().nondecreasing_ok, "monotonicity at eps={eps}");
            }
        }
        let q1 = build_q(&params(1, 1));
        assert!(!q1.check_shape().nondecreasing_ok);
        let q_small = build_q(&params(1, 4));
        assert!(q_small.check_shape().nondecreasing_ok);
        // Log-convexity specifically for the S member.
        let s = build_s(&params(1, 1));
        assert!(s.check_shape().log_convex_ok);
    }

    #[test]
    fn shape_fails_for_epsilon_two() {
        // ε = 2: R(1) = 1 makes 1 − 2R(τ) < 0 near τ = 1, i.e. near x = 0.
        let q = build_q(&params(2, 1));
        let report = q.check_shape();
        assert!(!report.conformant_epsilon);
        assert!(!report.nonnegative_ok);
        assert_eq!(report.nonnegative.verdict, SignVerdict::Indefinite);
        let (witness, value) = report.nonnegative.negativity_witness.clone().unwrap();
        assert!(value.is_negative());
        assert!(witness.lo() > &rat(1, 2), "refutation sits near tau = 1");
    }

    #[test]
    fn epsilon_zero_trivially_admissible() {
        for f in [build_q(&params(0, 1)), build_h(&params(0, 1)), build_s(&params(0, 1))] {
            let report = f.check_shape();
            assert!(report.continuous && report.nonnegative_ok && report.nondecreasing_ok);
            // ε = 0 is outside (0,1]: exploratory (pure powers).
            assert!(!report.conformant_epsilon);
        }
    }

    #[test]
    fn affine_dependence_on_epsilon() {
        // f(x; ε1) − f(x; ε2) = (ε2 − ε1)·scale·x^p·Π(coord(x)) below the knot.
        let h1 = build_h(&params(1, 4));
        let h2 = build_h(&params(3, 4));
        for x in [rat(1, 10), rat(1, 2), rat(4, 5)] {
            let v1 = h1.eval(&x, 1e-15);
            let v2 = h2.eval(&x, 1e-15);
            let diff = &v1 - &v2;
            // (ε2 − ε1)·6x²·U(coord): evaluate the same way.
            let pure = rat_int(6) * rat_pow(&x, 2);
            let enc = h1.knot().enclose(1e-18);
            let coord = h1.coordinate_interval(&x, &enc);
            let u = perturbation_u().eval_interval(&coord);
            let expected = u.scale(&(&rat(3, 4) - &rat(1, 4))).scale(&pure);
            assert!(diff.intersects(&expected), "x = {x}");
        }
        // Beyond the knot the difference is exactly zero.
        assert_eq!(
            &h1.eval(&rat_int(2), 1e-15) - &h2.eval(&rat_int(2), 1e-15),
            Interval::point(rat_int(0))
        );
    }

    #[test]
    fn definition_round_trip() {
        let s = build_s(&params(2, 3));
        let def = FamilyDefinition::from_function(&s);
        let json = serde_json::to_string_pretty(&def).unwrap();
        let parsed: FamilyDefinition = serde_json::from_str(&json).unwrap();
        let back = parsed.to_function().unwrap();
        assert_eq!(back, s);
        assert_eq!(back.role(), None); // user-loaded functions are role-free
    }

    #[test]
    fn knot_definition_schema_shape() {
        let def = FamilyDefinition::from_function(&build_q(&params(1, 1)));
        assert_eq!(def.knot.defining_poly, vec!["-3", "0", "0", "0", "5"]);
        assert_eq!(def.knot.bracket, ["0".to_string(), "1".to_string()]);
    }
}
