//! Adaptive numerical integration with conservative error bounds.
//!
//! The engine drives an embedded Gauss–Legendre 7/15 pair over a
//! deterministic left-to-right subdivision. The reported `error_bound` is the
//! inter-rule difference scaled by a 10x safety multiplier plus a
//! machine-roundoff term; it is an empirically validated conservative bound
//! (see `validate_error_model`), not a formal enclosure — that rigor level is
//! deliberate and documented. Integrable logarithmic endpoint singularities
//! at the left endpoint are handled by a dyadic graded mesh with an explicit
//! remainder bound.

use std::sync::OnceLock;

/// Safety multiplier applied to the embedded-rule error estimate.
const SAFETY: f64 = 10.0;
/// Maximum bisection depth before a panel is accepted with its residual.
const MAX_DEPTH: u32 = 52;

/// Result of a quadrature run.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_bound: f64,
    pub evaluations: usize,
    pub max_depth_hit: bool,
}

impl QuadratureResult {
    fn zero() -> Self {
        QuadratureResult {
            value: 0.0,
            error_bound: 0.0,
            evaluations: 0,
            max_depth_hit: false,
        }
    }

    fn accumulate(&mut self, other: &QuadratureResult) {
        self.value += other.value;
        self.error_bound += other.error_bound;
        self.evaluations += other.evaluations;
        self.max_depth_hit |= other.max_depth_hit;
    }

    pub fn to_interval(&self) -> crate::interval::Interval {
        crate::interval::Interval::from_value_error(self.value, self.error_bound)
    }
}

/// Gauss–Legendre nodes and weights on [-1, 1], computed once by Newton
/// iteration on the Legendre recurrence.
fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push((x, w));
    }
    out
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

fn rule_7() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(7))
}

fn rule_15() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(15))
}

/// One panel: both rules plus an absolute-value estimate for roundoff.
fn apply_pair<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64, f64, usize) {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut g7 = 0.0;
    for &(x, w) in rule_7() {
        g7 += w * f(mid + half * x);
    }
    g7 *= half;
    let mut g15 = 0.0;
    let mut resabs = 0.0;
    for &(x, w) in rule_15() {
        let v = f(mid + half * x);
        g15 += w * v;
        resabs += w * v.abs();
    }
    g15 *= half;
    resabs *= half.abs();
    (g15, (g15 - g7).abs(), resabs, 22)
}

/// Adaptive integration of `f` over the finite interval `[a, b]`.
///
/// The target `tol` is an absolute tolerance on the accumulated error bound;
/// if the subdivision depth limit is hit the result is flagged and carries
/// the achieved bound instead.
pub fn integrate_adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> QuadratureResult {
    assert!(a < b, "integration interval must be nonempty");
    assert!(tol > 0.0);
    let total_len = b - a;
    let mut result = QuadratureResult::zero();
    // Depth-first, left to right: deterministic accumulation order.
    let mut stack: Vec<(f64, f64, u32)> = vec![(a, b, 0)];
    let mut compensation = 0.0f64;
    while let Some((pa, pb, depth)) = stack.pop() {
        let (value, err, resabs, evals) = apply_pair(f, pa, pb);
        result.evaluations += evals;
        let share = tol * ((pb - pa) / total_len);
        let converged = SAFETY * err <= share;
        if converged || depth >= MAX_DEPTH || (pb - pa) < 1e-300 {
            if !converged {
                result.max_depth_hit = true;
            }
            // Kahan-compensated value accumulation.
            let y = value - compensation;
            let t = result.value + y;
            compensation = (t - result.value) - y;
            result.value = t;
            result.error_bound += SAFETY * err + 50.0 * f64::EPSILON * resabs;
        } else {
            let mid = 0.5 * (pa + pb);
            stack.push((mid, pb, depth + 1));
            stack.push((pa, mid, depth + 1));
        }
    }
    result
}

/// Integration of `f` over `[0, b]` where `f(x) = g(x)·ln x + smooth` with
/// bounded `g`: dyadic graded mesh toward the origin plus an explicit
/// remainder bound for the last sliver.
pub fn integrate_log_endpoint<F: Fn(f64) -> f64>(f: &F, b: f64, tol: f64) -> QuadratureResult {
    assert!(b > 0.0);
    assert!(tol > 0.0);
    // Estimate the log-growth constant C with |f(x)| <= C(1 + |ln x|) from
    // samples near the origin, with a safety factor.
    let mut c_est: f64 = 0.0;
    let mut probe = b * 0.5;
    for _ in 0..40 {
        let v = f(probe).abs() / (1.0 + probe.ln().abs());
        c_est = c_est.max(v);
        probe *= 0.25;
    }
    let c_est = 4.0 * c_est.max(1e-300);

    // Grow the mesh until the remainder over [0, delta] is negligible.
    let mut levels = 8u32;
    let mut delta = b * 0.5f64.powi(levels as i32);
    let remainder_bound = |d: f64| c_est * d * (2.0 + d.ln().abs());
    while remainder_bound(delta) > tol * 0.1 && levels < 900 {
        levels += 1;
        delta *= 0.5;
    }

    let mut result = QuadratureResult::zero();
    result.error_bound += remainder_bound(delta);
    let per_panel = tol * 0.8 / (levels as f64);
    // Panels [b/2^(k+1), b/2^k] from the origin side upward, then accumulate.
    let mut upper = b;
    let mut panels = Vec::with_capacity(levels as usize);
    for _ in 0..levels {
        let lower = upper * 0.5;
        panels.push((lower, upper));
        upper = lower;
    }
    for &(lo, hi) in panels.iter().rev() {
        let piece = integrate_adaptive(f, lo, hi, per_panel);
        result.accumulate(&piece);
    }
    result
}

/// One validation case: a closed-form integral the engine must enclose.
pub struct ValidationCase {
    pub name: &'static str,
    pub value: f64,
    pub truth: f64,
    pub error_bound: f64,
    pub pass: bool,
}

/// Run the built-in validation suite: every claimed bound must cover the true
/// error (with a few ulps of slack for the f64 reference values themselves).
pub fn validate_error_model() -> Vec<ValidationCase> {
    let tol = 1e-12;
    let mut cases = Vec::new();
    let mut push = |name: &'static str, r: QuadratureResult, truth: f64| {
        let slack = 8.0 * f64::EPSILON * (1.0 + truth.abs());
        cases.push(ValidationCase {
            name,
            value: r.value,
            truth,
            error_bound: r.error_bound,
            pass: (r.value - truth).abs() <= r.error_bound + slack,
        });
    };

    push(
        "linear x over [0,1]",
        integrate_adaptive(&|x| x, 0.0, 1.0, tol),
        0.5,
    );
    push(
        "quintic x^5 over [0,1]",
        integrate_adaptive(&|x: f64| x.powi(5), 0.0, 1.0, tol),
        1.0 / 6.0,
    );
    push(
        "degree-20 polynomial over [-1,1]",
        integrate_adaptive(&|x: f64| x.powi(20), -1.0, 1.0, tol),
        2.0 / 21.0,
    );
    push(
        "exp over [0,1]",
        integrate_adaptive(&|x: f64| x.exp(), 0.0, 1.0, tol),
        std::f64::consts::E - 1.0,
    );
    push(
        "6t/(1+t^4) over [0,1] (arctan family)",
        integrate_adaptive(&|t: f64| 6.0 * t / (1.0 + t.powi(4)), 0.0, 1.0, tol),
        3.0 * std::f64::consts::FRAC_PI_4,
    );
    push(
        "6t/(1+t^4) over [1,100] (C2 tail at T=1 minus tail at 100)",
        integrate_adaptive(&|t: f64| 6.0 * t / (1.0 + t.powi(4)), 1.0, 100.0, tol),
        3.0 * ((100.0f64 * 100.0).atan() - std::f64::consts::FRAC_PI_4),
    );
    push(
        "t^11/(1+t^8)^2 over [0,1] (C1 weight family)",
        integrate_adaptive(
            &|t: f64| {
                let t8 = t.powi(8);
                t.powi(11) / ((1.0 + t8) * (1.0 + t8))
            },
            0.0,
            1.0,
            tol,
        ),
        // substitute u = t^8: (1/8)∫0^1 u^(1/2)/(1+u)^2 du = (1/8)(π/2 − arctan 1 − 1/2 + ...)
        // direct antiderivative check value computed below
        c1_kernel_reference(),
    );
    push(
        "t/(1+t^4) over [2,50]",
        integrate_adaptive(&|t: f64| t / (1.0 + t.powi(4)), 2.0, 50.0, tol),
        0.5 * ((2500.0f64).atan() - (4.0f64).atan()),
    );
    push(
        "-ln x over [0,1]",
        integrate_log_endpoint(&|x: f64| -x.ln(), 1.0, tol),
        1.0,
    );
    push(
        "x·K2(x) = x(x-1-ln x) over [0,1]",
        integrate_log_endpoint(&|x: f64| x * (x - 1.0 - x.ln()), 1.0, tol),
        1.0 / 12.0,
    );
    for n in 1..=6u32 {
        let truth = -1.0 / ((n as f64 + 1.0) * (n as f64 + 1.0));
        let name: &'static str = match n {
            1 => "x^1 ln x over [0,1]",
            2 => "x^2 ln x over [0,1]",
            3 => "x^3 ln x over [0,1]",
            4 => "x^4 ln x over [0,1]",
            5 => "x^5 ln x over [0,1]",
            _ => "x^6 ln x over [0,1]",
        };
        push(
            name,
            integrate_log_endpoint(&move |x: f64| x.powi(n as i32) * x.ln(), 1.0, tol),
            truth,
        );
    }
    push(
        "ln(1+x) over [0,1]",
        integrate_adaptive(&|x: f64| x.ln_1p(), 0.0, 1.0, tol),
        2.0 * (2.0f64).ln() - 1.0,
    );
    push(
        "12 t ln(1+1/t^4) over [1/100, 2] (C3 weight family)",
        integrate_adaptive(
            &|t: f64| 12.0 * t * (1.0 + t.powi(-4)).ln(),
            0.01,
            2.0,
            tol,
        ),
        c3_weight_reference(),
    );
    cases
}

/// ∫0^1 t^11/(1+t^8)^2 dt via the exact antiderivative
/// (1/8)(arctan t^4 − t^4/(1+t^8)), evaluated with f64 transcendentals.
fn c1_kernel_reference() -> f64 {
    let at = |t: f64| {
        let t4 = t.powi(4);
        let t8 = t4 * t4;
        0.125 * (t4.atan() - t4 / (1.0 + t8))
    };
    at(1.0) - at(0.0)
}

/// ∫ 12 t ln(1+t^-4) dt = 6t² ln(1+t^-4) + 12 arctan(t²) evaluated at the bounds.
fn c3_weight_reference() -> f64 {
    let anti = |t: f64| 6.0 * t * t * (1.0 + t.powi(-4)).ln() + 12.0 * (t * t).atan();
    anti(2.0) - anti(0.01)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact_within_bound() {
        let r = integrate_adaptive(&|x| x, 0.0, 1.0, 1e-14);
        assert!((r.value - 0.5).abs() <= r.error_bound + 1e-15);
        assert!(r.error_bound < 1e-13);
        assert!(!r.max_depth_hit);
    }

    #[test]
    fn arctan_integrand() {
        // ∫0^1 6t/(1+t^4) dt = 3 arctan 1 = 3π/4 ≈ 2.356194490192345
        let r = integrate_adaptive(&|t: f64| 6.0 * t / (1.0 + t.powi(4)), 0.0, 1.0, 1e-12);
        assert!((r.value - 2.356194490192345).abs() < 1e-12);
        assert!((r.value - 2.356194490192345).abs() <= r.error_bound + 1e-15);
    }

    #[test]
    fn log_endpoint_basic() {
        let r = integrate_log_endpoint(&|x: f64| -x.ln(), 1.0, 1e-12);
        assert!((r.value - 1.0).abs() < 1e-11, "value {} bound {}", r.value, r.error_bound);
        assert!((r.value - 1.0).abs() <= r.error_bound);
    }

    #[test]
    fn validation_suite_all_pass() {
        let cases = validate_error_model();
        assert!(cases.len() >= 10);
        for case in &cases {
            assert!(
                case.pass,
                "{}: value {} truth {} bound {}",
                case.name, case.value, case.truth, case.error_bound
            );
        }
    }

    #[test]
    fn determinism_bit_identical() {
        let f = |t: f64| (1.0 + t * t).recip();
        let r1 = integrate_adaptive(&f, 0.0, 10.0, 1e-11);
        let r2 = integrate_adaptive(&f, 0.0, 10.0, 1e-11);
        assert_eq!(r1.value.to_bits(), r2.value.to_bits());
        assert_eq!(r1.error_bound.to_bits(), r2.error_bound.to_bits());
        assert_eq!(r1.evaluations, r2.evaluations);
    }

    #[test]
    fn tolerance_scaling_tightens_error() {
        let f = |t: f64| (t.sin() + 2.0) / (1.0 + t * t);
        let truth = integrate_adaptive(&f, 0.0, 5.0, 1e-14).value;
        let coarse = integrate_adaptive(&f, 0.0, 5.0, 1e-6);
        let fine = integrate_adaptive(&f, 0.0, 5.0, 1e-12);
        assert!((fine.value - truth).abs() <= (coarse.value - truth).abs() + 1e-13);
        assert!(fine.error_bound < coarse.error_bound);
    }

    #[test]
    fn max_depth_flag_on_hard_singularity() {
        // 1/sqrt(x) is integrable but not of the supported singularity type;
        // the engine must not claim convergence silently.
        let r = integrate_adaptive(&|x: f64| x.max(1e-280).powf(-0.5), 0.0, 1.0, 1e-13);
        assert!(r.max_depth_hit || r.error_bound > 1e-13);
    }
}
