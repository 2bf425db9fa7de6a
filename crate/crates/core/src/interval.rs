//! Enclosure intervals with exact rational endpoints.
//!
//! Endpoints are arbitrary-precision rationals, so interval arithmetic here is
//! exact: no outward rounding step is needed for the true value to stay
//! contained, and enclosures of any requested width (down to 1e-30 and below)
//! are representable. Floating-point results enter through
//! [`Interval::from_value_error`], which converts the `f64` pair exactly.

use crate::rat::{rat_from_f64, rat_to_decimal, rat_to_f64, Rat, Round};
use num::traits::Signed;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Closed interval `[lo, hi]` guaranteed to contain the value it encloses.
#[derive(Clone, PartialEq, Eq)]
pub struct Interval {
    lo: Rat,
    hi: Rat,
}

impl Interval {
    pub fn new(lo: Rat, hi: Rat) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        Interval { lo, hi }
    }

    /// Degenerate interval containing exactly one rational.
    pub fn point(v: Rat) -> Self {
        Interval { lo: v.clone(), hi: v }
    }

    /// `value ± error`, both converted exactly from `f64`.
    pub fn from_value_error(value: f64, error: f64) -> Self {
        assert!(value.is_finite() && error.is_finite() && error >= 0.0);
        let v = rat_from_f64(value);
        let e = rat_from_f64(error);
        Interval::new(&v - &e, &v + &e)
    }

    pub fn lo(&self) -> &Rat {
        &self.lo
    }

    pub fn hi(&self) -> &Rat {
        &self.hi
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rat {
        (&self.lo + &self.hi) / crate::rat::rat_int(2)
    }

    pub fn contains(&self, v: &Rat) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn intersects(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    /// Smallest interval containing both.
    pub fn hull(&self, other: &Interval) -> Interval {
        Interval::new(
            self.lo.clone().min(other.lo.clone()),
            self.hi.clone().max(other.hi.clone()),
        )
    }

    pub fn scale(&self, c: &Rat) -> Interval {
        let a = &self.lo * c;
        let b = &self.hi * c;
        if c.is_negative() {
            Interval::new(b, a)
        } else {
            Interval::new(a, b)
        }
    }

    /// Reciprocal; the interval must not contain zero.
    pub fn recip(&self) -> Interval {
        assert!(
            self.lo.is_positive() || self.hi.is_negative(),
            "reciprocal of an interval containing zero"
        );
        Interval::new(self.hi.clone().recip(), self.lo.clone().recip())
    }

    /// Integer power with correct monotonicity handling.
    pub fn powi(&self, k: u32) -> Interval {
        let mut acc = Interval::point(crate::rat::rat_int(1));
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Nearest-outward `f64` endpoints: `lo` rounded down, `hi` rounded up.
    pub fn to_f64_outward(&self) -> (f64, f64) {
        let mut lo = rat_to_f64(&self.lo);
        if rat_from_f64(lo) > self.lo {
            lo = next_down(lo);
        }
        let mut hi = rat_to_f64(&self.hi);
        if rat_from_f64(hi) < self.hi {
            hi = next_up(hi);
        }
        (lo, hi)
    }

    pub fn midpoint_f64(&self) -> f64 {
        rat_to_f64(&self.midpoint())
    }

    /// Decimal endpoints with directed rounding (lo down, hi up), `digits`
    /// places after the point. The printed pair always encloses the interval.
    pub fn to_decimal_pair(&self, digits: usize) -> (String, String) {
        (
            rat_to_decimal(&self.lo, digits, Round::Down),
            rat_to_decimal(&self.hi, digits, Round::Up),
        )
    }
}

fn next_up(x: f64) -> f64 {
    if x.is_nan() || x == f64::INFINITY {
        return x;
    }
    let bits = if x == 0.0 { 1 } else if x > 0.0 { x.to_bits() + 1 } else { x.to_bits() - 1 };
    f64::from_bits(bits)
}

fn next_down(x: f64) -> f64 {
    -next_up(-x)
}

impl Add for &Interval {
    type Output = Interval;
    fn add(self, rhs: &Interval) -> Interval {
        Interval::new(&self.lo + &rhs.lo, &self.hi + &rhs.hi)
    }
}

impl Sub for &Interval {
    type Output = Interval;
    fn sub(self, rhs: &Interval) -> Interval {
        Interval::new(&self.lo - &rhs.hi, &self.hi - &rhs.lo)
    }
}

impl Mul for &Interval {
    type Output = Interval;
    fn mul(self, rhs: &Interval) -> Interval {
        let candidates = [
            &self.lo * &rhs.lo,
            &self.lo * &rhs.hi,
            &self.hi * &rhs.lo,
            &self.hi * &rhs.hi,
        ];
        let lo = candidates.iter().min().unwrap().clone();
        let hi = candidates.iter().max().unwrap().clone();
        Interval::new(lo, hi)
    }
}

impl Neg for &Interval {
    type Output = Interval;
    fn neg(self) -> Interval {
        Interval::new(-self.hi.clone(), -self.lo.clone())
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (lo, hi) = self.to_decimal_pair(17);
        write!(f, "[{lo}, {hi}]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_int};

    #[test]
    fn arithmetic_contains_true_values() {
        let a = Interval::new(rat(1, 3), rat(1, 2));
        let b = Interval::new(rat(-1, 4), rat(2, 1));
        let sum = &a + &b;
        assert!(sum.contains(&(rat(1, 3) + rat(-1, 4))));
        assert!(sum.contains(&(rat(1, 2) + rat(2, 1))));
        let prod = &a * &b;
        assert!(prod.contains(&(rat(1, 3) * rat(2, 1))));
        assert!(prod.contains(&(rat(1, 2) * rat(-1, 4))));
        assert_eq!(prod.lo(), &rat(-1, 8));
        assert_eq!(prod.hi(), &rat_int(1));
    }

    #[test]
    fn recip_flips_endpoints() {
        let a = Interval::new(rat(1, 2), rat(2, 1));
        let r = a.recip();
        assert_eq!(r.lo(), &rat(1, 2));
        assert_eq!(r.hi(), &rat(2, 1));
        let neg = Interval::new(rat(-4, 1), rat(-1, 2));
        let rn = neg.recip();
        assert_eq!(rn.lo(), &rat(-2, 1));
        assert_eq!(rn.hi(), &rat(-1, 4));
    }

    #[test]
    #[should_panic(expected = "containing zero")]
    fn recip_rejects_zero_spanning() {
        Interval::new(rat(-1, 2), rat(1, 2)).recip();
    }

    #[test]
    fn outward_f64_conversion_encloses() {
        let third = Interval::point(rat(1, 3));
        let (lo, hi) = third.to_f64_outward();
        assert!(crate::rat::rat_from_f64(lo) <= rat(1, 3));
        assert!(crate::rat::rat_from_f64(hi) >= rat(1, 3));
        assert!(lo < hi);
    }

    #[test]
    fn from_value_error_is_exact() {
        let iv = Interval::from_value_error(0.1, 1e-12);
        assert!(iv.contains(&crate::rat::rat_from_f64(0.1)));
        assert!(iv.width() <= rat(3, 1_000_000_000_000));
    }

    #[test]
    fn powi_of_mixed_sign() {
        let a = Interval::new(rat(-2, 1), rat(3, 1));
        let sq = a.powi(2);
        // Naive product form gives [-6, 9]; still a valid enclosure of squares.
        assert!(sq.contains(&rat_int(0)));
        assert!(sq.contains(&rat_int(9)));
        assert!(sq.contains(&rat_int(4)));
    }

    #[test]
    fn decimal_pair_encloses() {
        let iv = Interval::new(rat(1, 3), rat(2, 3));
        let (lo, hi) = iv.to_decimal_pair(6);
        assert_eq!(lo, "0.333333");
        assert_eq!(hi, "0.666667");
    }
}
