//! Exact handles for the algebraic knots and a rigorous π enclosure.
//!
//! An `AlgebraicConstant` is a defining polynomial plus an isolating rational
//! bracket; enclosures are refined by bisection with exact sign evaluations,
//! so every returned interval provably contains the root. π comes from the
//! Machin formula with alternating-series brackets — also exact rationals.

use crate::interval::Interval;
use crate::poly::RatPoly;
use crate::rat::{rat_from_f64, rat_int, rat_pow, Rat};
use crate::roots::isolate_roots;
use num::traits::{Signed, Zero};
use num::BigInt;
use std::sync::{Arc, Mutex};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ConstantError {
    #[error("defining polynomial has no root in the bracket")]
    NoRootInBracket,
    #[error("defining polynomial has {0} roots in the bracket, need exactly one")]
    MultipleRootsInBracket(usize),
    #[error("bracket must lie in [0, +inf) (only positive constants are supported)")]
    NegativeBracket,
    #[error("exact powers require a two-term defining polynomial a*t^d - b")]
    UnsupportedForm,
    #[error("power exponent must be >= 1")]
    InvalidExponent,
}

/// A positive real algebraic number: defining polynomial + isolating bracket,
/// with a shared refinement cache so repeated enclosure requests are monotone.
#[derive(Debug, Clone)]
pub struct AlgebraicConstant {
    defining: RatPoly,
    bracket: (Rat, Rat),
    /// Binomial shape `a*t^d - b` when the defining polynomial has two terms;
    /// enables exact integer-power relations.
    binomial: Option<(Rat, Rat, u32)>,
    cache: Arc<Mutex<(Rat, Rat)>>,
}

impl PartialEq for AlgebraicConstant {
    fn eq(&self, other: &Self) -> bool {
        // Same defining data describes the same number; the cache is ignored.
        self.defining == other.defining && self.bracket == other.bracket
    }
}

impl AlgebraicConstant {
    /// Validate that the polynomial isolates exactly one root in the bracket.
    pub fn new(defining: RatPoly, bracket: (Rat, Rat)) -> Result<Self, ConstantError> {
        if bracket.0.is_negative() {
            return Err(ConstantError::NegativeBracket);
        }
        let roots = isolate_roots(&defining, &bracket.0, &bracket.1)
            .map_err(|_| ConstantError::NoRootInBracket)?;
        match roots.len() {
            0 => return Err(ConstantError::NoRootInBracket),
            1 => {}
            n => return Err(ConstantError::MultipleRootsInBracket(n)),
        }
        // Start the refinement cache from the root's own isolating interval,
        // so the cached bracket always contains exactly one root.
        let enc = roots[0].enclosure();
        let cache = (enc.lo().clone(), enc.hi().clone());
        let binomial = binomial_form(&defining);
        Ok(AlgebraicConstant {
            defining,
            bracket,
            binomial,
            cache: Arc::new(Mutex::new(cache)),
        })
    }

    /// The knot x0 = (3/5)^(1/4), the positive root of 5t^4 - 3 in [0, 1].
    pub fn knot_x0() -> Self {
        let p = RatPoly::from_ints(&[-3, 0, 0, 0, 5]);
        AlgebraicConstant::new(p, (rat_int(0), rat_int(1))).expect("x0 is well-defined")
    }

    /// The knot x1 = sqrt(x0) = (3/5)^(1/8), the positive root of 5t^8 - 3 in [0, 1].
    pub fn knot_x1() -> Self {
        let p = RatPoly::from_ints(&[-3, 0, 0, 0, 0, 0, 0, 0, 5]);
        AlgebraicConstant::new(p, (rat_int(0), rat_int(1))).expect("x1 is well-defined")
    }

    pub fn defining_polynomial(&self) -> &RatPoly {
        &self.defining
    }

    pub fn bracket(&self) -> &(Rat, Rat) {
        &self.bracket
    }

    /// Enclosure of width at most `width`, by bisection with exact signs.
    ///
    /// Refinement is monotone: later calls return subintervals of earlier
    /// ones. Concurrent readers may see a wider (still valid) enclosure.
    pub fn enclose(&self, width: f64) -> Interval {
        assert!(width > 0.0, "enclosure width must be positive");
        self.enclose_rat(&rat_from_f64(width))
    }

    pub fn enclose_rat(&self, width: &Rat) -> Interval {
        assert!(width.is_positive());
        let mut cache = self.cache.lock().expect("enclosure cache poisoned");
        let (mut lo, mut hi) = cache.clone();
        if lo != hi {
            let sign_lo = self.defining.eval(&lo).is_positive();
            while &(&hi - &lo) > width {
                let mid = (&lo + &hi) / rat_int(2);
                let v = self.defining.eval(&mid);
                if v.is_zero() {
                    lo = mid.clone();
                    hi = mid;
                    break;
                }
                if v.is_positive() == sign_lo {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            *cache = (lo.clone(), hi.clone());
        }
        Interval::new(lo, hi)
    }

    /// Midpoint of a tight enclosure, for floating-point consumers.
    pub fn to_f64(&self) -> f64 {
        self.enclose(1e-17).midpoint_f64()
    }

    /// Exact integer power: a `Rat` when `c^k` is rational, otherwise a
    /// derived `AlgebraicConstant`. Requires the binomial defining shape.
    pub fn exact_power(&self, k: u32) -> Result<PowerValue, ConstantError> {
        if k == 0 {
            return Err(ConstantError::InvalidExponent);
        }
        let (a, b, d) = self.binomial.clone().ok_or(ConstantError::UnsupportedForm)?;
        // c = (b/a)^(1/d) with c > 0; c^k = (b/a)^(k/d).
        let g = gcd_u32(k, d);
        let (k_red, d_red) = (k / g, d / g);
        let ratio_pow = rat_pow(&(&b / &a), k_red as i64);
        if d_red == 1 {
            return Ok(PowerValue::Rational(ratio_pow));
        }
        // Defining polynomial t^d_red - (b/a)^k_red, bracket = old bracket^k.
        let mut coeffs = vec![rat_int(0); d_red as usize + 1];
        coeffs[0] = -ratio_pow.clone();
        // Clear denominators for a tidy integer polynomial.
        let denom = Rat::from_integer(ratio_pow.denom().clone());
        coeffs[0] = &coeffs[0] * &denom;
        coeffs[d_red as usize] = denom;
        let defining = RatPoly::from_coeffs(coeffs);
        let lo = rat_pow(&self.bracket.0, k as i64);
        let hi = rat_pow(&self.bracket.1, k as i64);
        AlgebraicConstant::new(defining, (lo, hi)).map(PowerValue::Algebraic)
    }
}

/// Result of an exact power computation.
#[derive(Debug, Clone, PartialEq)]
pub enum PowerValue {
    Rational(Rat),
    Algebraic(AlgebraicConstant),
}

fn binomial_form(p: &RatPoly) -> Option<(Rat, Rat, u32)> {
    let d = p.degree()?;
    if d < 1 {
        return None;
    }
    for k in 1..d {
        if !p.coeff(k).is_zero() {
            return None;
        }
    }
    let a = p.coeff(d);
    let b = -p.coeff(0);
    if a.is_zero() || !(&b / &a).is_positive() {
        return None;
    }
    Some((a, b, d as u32))
}

fn gcd_u32(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd_u32(b, a % b)
    }
}

/// Rigorous enclosure of π.
#[derive(Debug, Clone)]
pub struct PiEnclosure {
    enclosure: Interval,
}

impl PiEnclosure {
    pub fn interval(&self) -> &Interval {
        &self.enclosure
    }
}

/// Bracket π to width at most `width` (allowed down to 1e-30 and below).
///
/// Machin's formula π = 16·atan(1/5) − 4·atan(1/239) with alternating-series
/// partial sums gives exact rational lower/upper bounds for each arctangent.
pub fn pi_enclosure(width: f64) -> PiEnclosure {
    assert!(width > 0.0);
    pi_enclosure_rat(&rat_from_f64(width))
}

pub fn pi_enclosure_rat(width: &Rat) -> PiEnclosure {
    assert!(width.is_positive());
    // Split the width budget across the two series (16x + 4x weights).
    let per_term = width / rat_int(64);
    let a5 = atan_inv_bracket(5, &per_term);
    let a239 = atan_inv_bracket(239, &per_term);
    let lo = rat_int(16) * &a5.0 - rat_int(4) * &a239.1;
    let hi = rat_int(16) * &a5.1 - rat_int(4) * &a239.0;
    let enclosure = Interval::new(lo, hi);
    debug_assert!(&enclosure.width() <= width);
    PiEnclosure { enclosure }
}

/// Alternating-series bracket of atan(1/m): consecutive partial sums.
fn atan_inv_bracket(m: u32, term_bound: &Rat) -> (Rat, Rat) {
    let m = BigInt::from(m);
    let m2 = Rat::from_integer(&m * &m);
    let mut power = Rat::from_integer(m).recip(); // 1/m^(2k+1)
    let mut sum = rat_int(0);
    let mut k: i64 = 0;
    loop {
        let contribution = &power / rat_int(2 * k + 1);
        if &contribution <= term_bound {
            // Truth lies between consecutive partial sums.
            return if k % 2 == 0 {
                (sum.clone(), sum + contribution)
            } else {
                (&sum - &contribution, sum)
            };
        }
        if k % 2 == 0 {
            sum = sum + contribution;
        } else {
            sum = sum - contribution;
        }
        power = power / &m2;
        k += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_from_str};

    #[test]
    fn x0_enclosure_matches_known_digits() {
        // x0 = 0.6^(1/4) = 0.88011173679339338...
        let x0 = AlgebraicConstant::knot_x0();
        let enc = x0.enclose(1e-6);
        assert!(enc.width() <= rat(1, 1_000_000));
        assert!(enc.contains(&rat_from_str("0.880111736793393").unwrap()));
        assert!(enc.lo() >= &rat_from_str("0.880111").unwrap());
        assert!(enc.hi() <= &rat_from_str("0.880113").unwrap());
    }

    #[test]
    fn x1_enclosure_matches_known_digits() {
        // x1 = 0.6^(1/8) = 0.93814270598528...
        let x1 = AlgebraicConstant::knot_x1();
        let enc = x1.enclose(1e-6);
        assert!(enc.width() <= rat(1, 1_000_000));
        assert!(enc.contains(&rat_from_str("0.938142705985285").unwrap()));
        // A tighter request pins the six-digit bracket [0.938142, 0.938143].
        let tight = x1.enclose(1e-7);
        assert!(tight.lo() >= &rat_from_str("0.938142").unwrap());
        assert!(tight.hi() <= &rat_from_str("0.938143").unwrap());
    }

    #[test]
    fn refinement_is_monotone() {
        let x0 = AlgebraicConstant::knot_x0();
        let wide = x0.enclose(1e-3);
        let tight = x0.enclose(1e-12);
        assert!(wide.contains_interval(&tight));
        // A later wide request still returns the tight cached bracket.
        let after = x0.enclose(1e-3);
        assert!(wide.contains_interval(&after));
    }

    #[test]
    fn degenerate_rational_root_collapses() {
        // t^2 - 1 on [0, 2]: the "constant 1" handle.
        let one = AlgebraicConstant::new(
            RatPoly::from_ints(&[-1, 0, 1]),
            (rat_int(0), rat_int(2)),
        )
        .unwrap();
        let enc = one.enclose(1e-9);
        assert!(enc.contains(&rat_int(1)));
        assert!(enc.width() <= rat(1, 1_000_000_000));
    }

    #[test]
    fn rejects_bad_brackets() {
        let p = RatPoly::from_ints(&[-3, 0, 0, 0, 5]);
        assert_eq!(
            AlgebraicConstant::new(p.clone(), (rat_int(2), rat_int(3))).unwrap_err(),
            ConstantError::NoRootInBracket
        );
        // (t-1/4)(t-3/4) has two roots in [0,1]
        let two = &RatPoly::from_coeffs(vec![rat(-1, 4), rat_int(1)])
            * &RatPoly::from_coeffs(vec![rat(-3, 4), rat_int(1)]);
        assert_eq!(
            AlgebraicConstant::new(two, (rat_int(0), rat_int(1))).unwrap_err(),
            ConstantError::MultipleRootsInBracket(2)
        );
    }

    #[test]
    fn exact_power_relations() {
        let x0 = AlgebraicConstant::knot_x0();
        let x1 = AlgebraicConstant::knot_x1();
        // x0^4 = 3/5 and x1^8 = 3/5 exactly.
        assert_eq!(x0.exact_power(4).unwrap(), PowerValue::Rational(rat(3, 5)));
        assert_eq!(x1.exact_power(8).unwrap(), PowerValue::Rational(rat(3, 5)));
        // x1^2 = x0 with identical defining data.
        match x1.exact_power(2).unwrap() {
            PowerValue::Algebraic(c) => assert_eq!(c, x0),
            other => panic!("expected algebraic value, got {other:?}"),
        }
        // x0^2 and x1^4 agree (both are sqrt(3/5)).
        let a = x0.exact_power(2).unwrap();
        let b = x1.exact_power(4).unwrap();
        assert_eq!(a, b);
        // x0^8 = (3/5)^2
        assert_eq!(x0.exact_power(8).unwrap(), PowerValue::Rational(rat(9, 25)));
    }

    #[test]
    fn power_enclosure_consistency() {
        // enclose(x1)^2 must be contained in a slightly widened enclose(x0).
        let x0 = AlgebraicConstant::knot_x0();
        let x1 = AlgebraicConstant::knot_x1();
        let e1 = x1.enclose(1e-9);
        let e0 = x0.enclose(1e-9);
        let squared = &e1 * &e1;
        let widened = Interval::new(
            e0.lo() - rat(1, 100_000_000),
            e0.hi() + rat(1, 100_000_000),
        );
        assert!(widened.contains_interval(&squared));
    }

    #[test]
    fn pi_first_thirty_digits() {
        // π = 3.141592653589793238462643383279502884197...
        let lo30 = rat_from_str("3.141592653589793238462643383279").unwrap();
        let hi30 = rat_from_str("3.141592653589793238462643383280").unwrap();
        let pi = pi_enclosure(1e-31);
        assert!(pi.interval().width() <= rat_from_str("0.0000000000000000000000000000001").unwrap());
        assert!(pi.interval().lo() >= &lo30);
        assert!(pi.interval().hi() <= &hi30);
    }

    #[test]
    fn pi_coarse_contains_pi() {
        let pi = pi_enclosure(1e-2);
        assert!(pi.interval().contains(&rat_from_str("3.14159265").unwrap()));
    }

    #[test]
    fn three_halves_pi_product() {
        // 3π/2 via interval scaling contains 4.712388980...
        let pi = pi_enclosure(1e-12);
        let x = pi.interval().scale(&rat(3, 2));
        assert!(x.contains(&rat_from_str("4.71238898038469").unwrap()));
    }
}
