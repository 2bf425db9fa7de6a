//! Exact certification of the hypothesis-side integral inequality.
//!
//! For a family function f and formulation parameters, the hypothesis side is
//! `LHS(t) = ∫₀¹ kernel(x)·f(tx) dx ≤ t^exponent for all t ≥ 0`. For the
//! normalized families (tail achieving baseline equality) the margin
//! `M(t) = (t^exponent − LHS(t))/ε` is ε-independent and splits into
//!
//!   * an inner piece `scale·knot^p·s^p·P(s)` with `s = t/knot ∈ [0,1]` and
//!     `P` a rational polynomial, and
//!   * an outer piece `scale·knot^p·(A − B·(knot/t)^j)` for `t ≥ knot`,
//!
//! with every irrational factor confined to a provably positive prefactor.
//! Certification therefore reduces to exact sign computations on rational
//! polynomials; the third formulation goes through the exact reduction
//! `t·LHS₃(t) = LHS₂(t)` (valid since q = h' and h(0) = 0) rather than
//! integrating its logarithmic kernel symbolically.

use crate::certificate::{certify_sign, SignCertificate, SignVerdict};
use crate::constants::AlgebraicConstant;
use crate::family::{FamilyError, FamilyFunction, Normalization, Role};
use crate::interval::Interval;
use crate::poly::RatPoly;
use crate::quadrature::{integrate_adaptive, integrate_log_endpoint, QuadratureResult};
use crate::rat::{rat, rat_from_f64, rat_int, rat_pow, rat_to_f64, rat_to_string, Rat};
use num::traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum HypothesisError {
    #[error("formulation C1 requires n >= 2, got n = {0}")]
    C1NeedsN2(u32),
    #[error("n must be >= 1")]
    InvalidN,
    #[error("exponent must be positive")]
    InvalidExponent,
    #[error("family transform failed: {0}")]
    Family(#[from] FamilyError),
}

/// The three formulations of the conjecture.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Conjecture {
    C1,
    C2,
    C3,
}

/// Formulation, integer n, and the positive exponent (λ for C1, α for C2/C3).
#[derive(Debug, Clone, PartialEq)]
pub struct ConjectureParams {
    pub formulation: Conjecture,
    pub n: u32,
    pub exponent: Rat,
}

impl ConjectureParams {
    pub fn new(formulation: Conjecture, n: u32, exponent: Rat) -> Result<Self, HypothesisError> {
        if n < 1 {
            return Err(HypothesisError::InvalidN);
        }
        if formulation == Conjecture::C1 && n < 2 {
            return Err(HypothesisError::C1NeedsN2(n));
        }
        if !exponent.is_positive() {
            return Err(HypothesisError::InvalidExponent);
        }
        Ok(ConjectureParams {
            formulation,
            n,
            exponent,
        })
    }

    /// The parameters of the published counterexample: n = 2 with α = 2
    /// (equivalently λ = 4 for the first formulation).
    pub fn counterexample_default(formulation: Conjecture) -> Self {
        let exponent = match formulation {
            Conjecture::C1 => rat_int(4),
            Conjecture::C2 | Conjecture::C3 => rat_int(2),
        };
        ConjectureParams {
            formulation,
            n: 2,
            exponent,
        }
    }

    /// α in the C2/C3 scale: the C1 parameter maps by α = λ/2.
    pub fn alpha(&self) -> Rat {
        match self.formulation {
            Conjecture::C1 => &self.exponent / rat_int(2),
            _ => self.exponent.clone(),
        }
    }

    /// Translate to an equivalent formulation (same n, exponent mapped).
    pub fn equivalent(&self, target: Conjecture) -> Result<Self, HypothesisError> {
        let alpha = self.alpha();
        let exponent = match target {
            Conjecture::C1 => &alpha * rat_int(2),
            _ => alpha,
        };
        ConjectureParams::new(target, self.n, exponent)
    }

    /// Power of t on the hypothesis right-hand side: λ, α, or α − 1.
    pub fn hypothesis_rhs_power(&self) -> Rat {
        match self.formulation {
            Conjecture::C1 | Conjecture::C2 => self.exponent.clone(),
            Conjecture::C3 => &self.exponent - rat_int(1),
        }
    }
}

/// Closed-form descriptor of the hypothesis kernel.
#[derive(Debug, Clone)]
pub enum HypothesisKernel {
    /// C1: (1−x²)^(n−2)·x, a polynomial.
    Poly(RatPoly),
    /// C2: numerator (1−x)^(n−1) of the kernel (1−x)^(n−1)/x.
    PolyOverX(RatPoly),
    /// C3: K_n(x) = log_coeff·ln x + poly(x).
    LogPlusPoly { log_coeff: Rat, poly: RatPoly },
}

impl HypothesisKernel {
    pub fn eval_f64(&self, x: f64) -> f64 {
        match self {
            HypothesisKernel::Poly(p) => p.eval_f64(x),
            HypothesisKernel::PolyOverX(num) => num.eval_f64(x) / x,
            HypothesisKernel::LogPlusPoly { log_coeff, poly } => {
                rat_to_f64(log_coeff) * x.ln() + poly.eval_f64(x)
            }
        }
    }
}

/// The kernel of the chosen formulation, in closed form.
///
/// For C3 the inner integral ∫ₓ¹(1−y)^(n−1) dy/y is expanded termwise into
/// `−ln x` plus a polynomial; for n = 2 this is K₂(x) = x − 1 − ln x.
pub fn hypothesis_kernel(params: &ConjectureParams) -> Result<HypothesisKernel, HypothesisError> {
    match params.formulation {
        Conjecture::C1 => {
            if params.n < 2 {
                return Err(HypothesisError::C1NeedsN2(params.n));
            }
            let base = RatPoly::from_ints(&[1, 0, -1]); // 1 − x²
            let mut kernel = RatPoly::x();
            for _ in 0..(params.n - 2) {
                kernel = &kernel * &base;
            }
            Ok(HypothesisKernel::Poly(kernel))
        }
        Conjecture::C2 => {
            let base = RatPoly::from_ints(&[1, -1]); // 1 − x
            let mut num = RatPoly::one();
            for _ in 0..(params.n - 1) {
                num = &num * &base;
            }
            Ok(HypothesisKernel::PolyOverX(num))
        }
        Conjecture::C3 => {
            // ∫ₓ¹ (1−y)^(n−1)/y dy = −ln x + Σ_{j=1}^{n−1} C(n−1,j)(−1)^j (1−x^j)/j
            let mut poly = RatPoly::zero();
            let mut binom = rat_int(1);
            for j in 1..params.n as i64 {
                binom = binom * rat(params.n as i64 - j, j); // C(n−1, j)
                let sign = if j % 2 == 0 { rat_int(1) } else { rat_int(-1) };
                let coeff = &sign * &binom / rat_int(j);
                // (1 − x^j)/j · sign · binom
                let term = &RatPoly::constant(coeff.clone())
                    - &RatPoly::monomial(coeff, j as usize);
                poly = &poly + &term;
            }
            Ok(HypothesisKernel::LogPlusPoly {
                log_coeff: rat_int(-1),
                poly,
            })
        }
    }
}

/// Moment ∫₀¹ kernel(x)·x^m dx, exact, for the two polynomial-kernel cases.
fn kernel_moment(params: &ConjectureParams, m: u32) -> Rat {
    let kernel = hypothesis_kernel(params).expect("validated params");
    let x_m = RatPoly::monomial(rat_int(1), m as usize);
    match kernel {
        HypothesisKernel::Poly(p) => (&p * &x_m).definite_integral(&rat_int(0), &rat_int(1)),
        HypothesisKernel::PolyOverX(num) => {
            assert!(m >= 1, "C2 kernel moments need m >= 1");
            let x_m1 = RatPoly::monomial(rat_int(1), (m - 1) as usize);
            (&num * &x_m1).definite_integral(&rat_int(0), &rat_int(1))
        }
        HypothesisKernel::LogPlusPoly { .. } => {
            unreachable!("C3 margins go through the Fubini reduction")
        }
    }
}

/// Positive prefactor `scale·knot^knot_power` multiplying both margin pieces.
#[derive(Debug, Clone)]
pub struct MarginPrefactor {
    pub scale: Rat,
    pub knot: AlgebraicConstant,
    pub knot_power: u32,
    pub s_power: u32,
}

/// The ε-independent hypothesis margin M with LHS(t; ε) = t^exp − ε·M(t).
#[derive(Debug, Clone)]
pub struct HypothesisMargin {
    pub params: ConjectureParams,
    /// P(s) on s = t/knot ∈ [0, 1].
    pub inner: RatPoly,
    pub prefactor: MarginPrefactor,
    /// Outer margin A − B·(knot/t)^decay for t ≥ knot (prefactor stripped).
    pub outer_constant: Rat,
    pub outer_decay_coeff: Rat,
    pub outer_decay_power: u32,
    /// Whether the ε = 0 function achieves LHS ≡ t^exponent exactly.
    pub baseline_exact: bool,
    /// C3 margins equal the C2 margin divided by t (exact reduction).
    pub divided_by_t: bool,
}

impl HypothesisMargin {
    /// Evaluate M(t) for rational t ≥ 0 as a width-controlled enclosure.
    pub fn evaluate(&self, t: &Rat, width: f64) -> Interval {
        assert!(!t.is_negative());
        if t.is_zero() {
            return Interval::point(rat_int(0));
        }
        let target = rat_from_f64(width);
        let mut knot_width = 1e-8f64;
        loop {
            let enc = self.prefactor.knot.enclose(knot_width);
            let pref = enc
                .powi(self.prefactor.knot_power)
                .scale(&self.prefactor.scale);
            let below = t < enc.lo();
            let above = t >= enc.hi();
            let raw = if below {
                let s = &Interval::point(t.clone()) * &enc.recip();
                let p_val = self.inner.eval_interval(&s);
                &(&s.powi(self.prefactor.s_power) * &p_val) * &pref
            } else if above {
                let u = &enc * &Interval::point(t.clone().recip()); // knot/t in (0,1]
                let decay = u.powi(self.outer_decay_power);
                let stripped = &Interval::point(self.outer_constant.clone())
                    - &decay.scale(&self.outer_decay_coeff);
                &stripped * &pref
            } else {
                // t inside the knot enclosure: both forms converge to the same
                // value; use the hull for safety and refine.
                let s = &Interval::point(t.clone()) * &enc.recip();
                let p_val = self.inner.eval_interval(&s);
                let inner_val = &(&s.powi(self.prefactor.s_power) * &p_val) * &pref;
                let u = &enc * &Interval::point(t.clone().recip());
                let decay = u.powi(self.outer_decay_power);
                let outer_val = &(&Interval::point(self.outer_constant.clone())
                    - &decay.scale(&self.outer_decay_coeff))
                    * &pref;
                inner_val.hull(&outer_val)
            };
            let raw = if self.divided_by_t {
                raw.scale(&t.clone().recip())
            } else {
                raw
            };
            if raw.width() <= target {
                return raw;
            }
            knot_width /= 256.0;
        }
    }
}

/// Verdict of hypothesis certification.
#[derive(Debug, Clone)]
pub enum CertVerdict {
    Certified,
    Refuted { witness_t: Interval, detail: String },
    NotApplicable { reason: String },
}

impl CertVerdict {
    pub fn is_certified(&self) -> bool {
        matches!(self, CertVerdict::Certified)
    }
}

/// Certificate that `ε·M(t) ≥ 0` for all t ≥ 0 (hypothesis holds), or a
/// refutation witness, or a statement that the exact path does not apply.
#[derive(Debug, Clone)]
pub struct MarginCertificate {
    pub params: ConjectureParams,
    pub margin: Option<HypothesisMargin>,
    /// Sign certificate on the ε-scaled inner polynomial ε·P over [0, 1].
    pub inner: Option<SignCertificate>,
    pub outer_limit_ok: bool,
    pub outer_knot_ok: bool,
    pub verdict: CertVerdict,
}

/// Compute the exact symbolic margin of `f` under `params`.
///
/// `Err(NotApplicable)`-style outcomes are reported through the returned
/// `Result`'s error string: callers fall back to `numeric_lhs`.
pub fn symbolic_margin(
    f: &FamilyFunction,
    params: &ConjectureParams,
) -> Result<HypothesisMargin, String> {
    match params.formulation {
        Conjecture::C3 => {
            let role = f.role();
            if role != Some(Role::Q) && role.is_some() {
                return Err(format!(
                    "C3 takes the q member (continuous class), found role {role:?}"
                ));
            }
            let h = f
                .integrate()
                .map_err(|e| format!("C3 reduction needs the exact antiderivative: {e}"))?;
            fubini_reduction(&h, params)
        }
        Conjecture::C1 | Conjecture::C2 => direct_margin(f, params),
    }
}

fn direct_margin(f: &FamilyFunction, params: &ConjectureParams) -> Result<HypothesisMargin, String> {
    if params.n != 2 {
        return Err(format!(
            "exact certification is restricted to n = 2 (the counterexample case); \
             n = {} is supported numerically via numeric_lhs",
            params.n
        ));
    }
    if let Some(role) = f.role() {
        let ok = matches!(
            (params.formulation, role),
            (Conjecture::C1, Role::S) | (Conjecture::C2, Role::H)
        );
        if !ok {
            return Err(format!(
                "formulation {:?} is incompatible with role {:?}",
                params.formulation, role
            ));
        }
    }
    let p = f.power();
    if p < 1 {
        return Err("family power must be >= 1".into());
    }
    // Baseline normalization: LHS(t; 0) = scale·κ(p)·t^p must equal t^exponent.
    if params.exponent != rat_int(p as i64) {
        return Err(format!(
            "tail power {} does not match the hypothesis exponent {}; baseline not exact",
            p,
            rat_to_string(&params.exponent)
        ));
    }
    let baseline = f.scale() * &kernel_moment(params, p);
    if !baseline.is_one() {
        return Err(format!(
            "baseline integral is {} instead of 1; use numeric_lhs",
            rat_to_string(&baseline)
        ));
    }

    // Coefficients of w(y) with Π(coord(tx)) = w(sx)|…: for τ-normalized
    // functions w = Π∘(1−y), for θ-normalized w = Π itself.
    let w = match f.normalization() {
        Normalization::Tau => f.perturbation().compose(&RatPoly::from_ints(&[1, -1])),
        Normalization::Theta => f.perturbation().clone(),
    };

    // Inner piece: P(s) = Σ_j w_j · κ(p + j) · s^j.
    let mut inner_coeffs = Vec::with_capacity(w.coeffs().len());
    for (j, wj) in w.coeffs().iter().enumerate() {
        inner_coeffs.push(wj * &kernel_moment(params, p + j as u32));
    }
    let inner = RatPoly::from_coeffs(inner_coeffs);

    // Outer piece.
    let (outer_constant, outer_decay_coeff, outer_decay_power) = match params.formulation {
        Conjecture::C2 => {
            let y_pm1 = RatPoly::monomial(rat_int(1), (p - 1) as usize);
            let y_p = RatPoly::monomial(rat_int(1), p as usize);
            let a = (&y_pm1 * &w).definite_integral(&rat_int(0), &rat_int(1));
            let b = (&y_p * &w).definite_integral(&rat_int(0), &rat_int(1));
            (a, b, 1u32)
        }
        Conjecture::C1 => {
            let y_pp1 = RatPoly::monomial(rat_int(1), (p + 1) as usize);
            let m = (&y_pp1 * &w).definite_integral(&rat_int(0), &rat_int(1));
            (rat_int(0), -m, 2u32)
        }
        Conjecture::C3 => unreachable!(),
    };

    // Continuity of the margin across t = knot: inner at s = 1 must equal the
    // stripped outer value A − B there.
    debug_assert_eq!(
        inner.eval(&rat_int(1)),
        &outer_constant - &outer_decay_coeff,
        "margin pieces disagree at the knot"
    );

    Ok(HypothesisMargin {
        params: params.clone(),
        inner,
        prefactor: MarginPrefactor {
            scale: f.scale().clone(),
            knot: f.knot().clone(),
            knot_power: p,
            s_power: p,
        },
        outer_constant,
        outer_decay_coeff,
        outer_decay_power,
        baseline_exact: true,
        divided_by_t: false,
    })
}

/// The exact C3 → C2 reduction: with q = h' and h(0) = 0, exchanging the
/// order of integration gives t·LHS₃(t) = LHS₂(t), so the C3 margin is the
/// C2 margin divided by t. The reduction is additionally validated
/// numerically by the cross-check tests; it is never trusted blindly.
pub fn fubini_reduction(
    h: &FamilyFunction,
    params: &ConjectureParams,
) -> Result<HypothesisMargin, String> {
    assert_eq!(params.formulation, Conjecture::C3);
    if h.power() < 1 {
        return Err("reduction requires h(0) = 0, which needs power >= 1".into());
    }
    let c2 = params
        .equivalent(Conjecture::C2)
        .map_err(|e| e.to_string())?;
    let mut margin = direct_margin(h, &c2)?;
    margin.params = params.clone();
    margin.divided_by_t = true;
    Ok(margin)
}

/// Certify the hypothesis inequality for `f`: exact sign certification of the
/// ε-scaled margin on both pieces.
pub fn certify_hypothesis(f: &FamilyFunction, params: &ConjectureParams) -> MarginCertificate {
    let margin = match symbolic_margin(f, params) {
        Ok(m) => m,
        Err(reason) => {
            return MarginCertificate {
                params: params.clone(),
                margin: None,
                inner: None,
                outer_limit_ok: false,
                outer_knot_ok: false,
                verdict: CertVerdict::NotApplicable { reason },
            }
        }
    };
    let eps = f.epsilon();
    let scaled_inner = margin.inner.scale(eps);
    let inner_cert = certify_sign(&scaled_inner, &rat_int(0), &rat_int(1));
    let outer_limit = eps * &margin.outer_constant; // t → ∞ limit, stripped
    let outer_at_knot = eps * &(&margin.outer_constant - &margin.outer_decay_coeff);
    let outer_limit_ok = !outer_limit.is_negative();
    let outer_knot_ok = !outer_at_knot.is_negative();

    let verdict = if inner_cert.verdict == SignVerdict::Nonnegative && outer_limit_ok && outer_knot_ok
    {
        CertVerdict::Certified
    } else if inner_cert.verdict != SignVerdict::Nonnegative {
        // Witness in s, mapped to t = knot·s.
        let (witness_s, value) = match &inner_cert.negativity_witness {
            Some((w, v)) => (w.clone(), v.clone()),
            None => (Interval::point(rat(1, 2)), scaled_inner.eval(&rat(1, 2))),
        };
        let knot_enc = margin.prefactor.knot.enclose(1e-12);
        let witness_t = &knot_enc * &witness_s;
        CertVerdict::Refuted {
            witness_t,
            detail: format!(
                "inner margin is negative near s in {witness_s:?} (ε-scaled value {})",
                rat_to_string(&value)
            ),
        }
    } else if !outer_knot_ok {
        let knot_enc = margin.prefactor.knot.enclose(1e-12);
        CertVerdict::Refuted {
            witness_t: knot_enc,
            detail: format!(
                "outer margin at t = knot is {} < 0 (prefactor stripped)",
                rat_to_string(&outer_at_knot)
            ),
        }
    } else {
        // Outer limit negative: find an explicit rational ratio u = knot/t
        // with ε·(A − B·u^decay) < 0, then report t = knot/u.
        let mut u = rat(1, 2);
        let value = loop {
            let v = eps
                * &(&margin.outer_constant
                    - &(&margin.outer_decay_coeff
                        * rat_pow(&u, margin.outer_decay_power as i64)));
            if v.is_negative() {
                break v;
            }
            u = u / rat_int(2);
        };
        let knot_enc = margin.prefactor.knot.enclose(1e-12);
        let witness_t = knot_enc.scale(&u.clone().recip());
        CertVerdict::Refuted {
            witness_t,
            detail: format!(
                "outer margin approaches {} < 0 for large t (witness value {})",
                rat_to_string(&outer_limit),
                rat_to_string(&value)
            ),
        }
    };

    MarginCertificate {
        params: params.clone(),
        margin: Some(margin),
        inner: Some(inner_cert),
        outer_limit_ok,
        outer_knot_ok,
        verdict,
    }
}

/// Exact moments ∫₀¹ w_i(z)·p(z) dz for a batch of polynomial weights.
pub fn vanishing_moments(p: &RatPoly, weights: &[RatPoly]) -> Vec<Rat> {
    weights
        .iter()
        .map(|w| (w * p).definite_integral(&rat_int(0), &rat_int(1)))
        .collect()
}

/// Direct quadrature evaluation of the hypothesis LHS at rational t.
///
/// Cross-checks the symbolic path; the C3 logarithmic kernel is handled by
/// the log-endpoint rule. The integration domain is split at the branch
/// point x = knot/t so each piece is smooth.
pub fn numeric_lhs(
    f: &FamilyFunction,
    params: &ConjectureParams,
    t: &Rat,
    tol: f64,
) -> Interval {
    assert!(!t.is_negative());
    if t.is_zero() {
        return Interval::point(rat_int(0));
    }
    let kernel = hypothesis_kernel(params).expect("validated params");
    let t_f = rat_to_f64(t);
    let knot_f = f.knot().to_f64();
    let split = (knot_f / t_f).min(1.0);
    let mut result = QuadratureResult {
        value: 0.0,
        error_bound: 0.0,
        evaluations: 0,
        max_depth_hit: false,
    };
    match &kernel {
        HypothesisKernel::Poly(poly) => {
            let g = |x: f64| poly.eval_f64(x) * f.eval_f64(t_f * x, knot_f);
            integrate_pieces(&g, split, tol, &mut result);
        }
        HypothesisKernel::PolyOverX(num) => {
            // kernel·f(tx) = (1−x)^(n−1)·t·(f(tx)/(tx)); finite at x = 0.
            let g = |x: f64| num.eval_f64(x) * t_f * f.eval_div_x_f64(t_f * x, knot_f);
            integrate_pieces(&g, split, tol, &mut result);
        }
        HypothesisKernel::LogPlusPoly { log_coeff, poly } => {
            let lc = rat_to_f64(log_coeff);
            let g = |x: f64| (lc * x.ln() + poly.eval_f64(x)) * f.eval_f64(t_f * x, knot_f);
            // Log singularity at the left endpoint only.
            if split < 1.0 && split > 0.0 {
                let left = integrate_log_endpoint(&g, split, tol * 0.5);
                result.value += left.value;
                result.error_bound += left.error_bound;
                result.evaluations += left.evaluations;
                result.max_depth_hit |= left.max_depth_hit;
                let right = integrate_adaptive(&g, split, 1.0, tol * 0.5);
                result.value += right.value;
                result.error_bound += right.error_bound;
                result.evaluations += right.evaluations;
                result.max_depth_hit |= right.max_depth_hit;
            } else {
                let whole = integrate_log_endpoint(&g, 1.0, tol);
                result.value += whole.value;
                result.error_bound += whole.error_bound;
                result.evaluations += whole.evaluations;
                result.max_depth_hit |= whole.max_depth_hit;
            }
        }
    }
    result.to_interval()
}

fn integrate_pieces<F: Fn(f64) -> f64>(
    g: &F,
    split: f64,
    tol: f64,
    result: &mut QuadratureResult,
) {
    if split > 0.0 && split < 1.0 {
        for (a, b) in [(0.0, split), (split, 1.0)] {
            let piece = integrate_adaptive(g, a, b, tol * 0.5);
            result.value += piece.value;
            result.error_bound += piece.error_bound;
            result.evaluations += piece.evaluations;
            result.max_depth_hit |= piece.max_depth_hit;
        }
    } else {
        let whole = integrate_adaptive(g, 0.0, 1.0, tol);
        result.value += whole.value;
        result.error_bound += whole.error_bound;
        result.evaluations += whole.evaluations;
        result.max_depth_hit |= whole.max_depth_hit;
    }
}
