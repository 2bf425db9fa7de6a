//! Rigorous rational enclosures of arctangent and logarithm values.
//!
//! These back the closed-form integral tails: every bound is an exact
//! rational from a truncated series plus an explicit remainder bracket, so
//! no floating-point constant ever enters a verdict.

use crate::constants::pi_enclosure_rat;
use crate::interval::Interval;
use crate::rat::{rat, rat_int, Rat};
use num::traits::{Signed, Zero};

/// Enclosure of atan(x) for rational `x`, width at most `width`.
pub fn atan_enclosure(x: &Rat, width: &Rat) -> Interval {
    assert!(width.is_positive());
    if x.is_negative() {
        return -&atan_enclosure(&-x.clone(), width);
    }
    if x > &rat_int(1) {
        // atan(x) = π/2 - atan(1/x), with 1/x in (0, 1).
        let half = width / rat_int(2);
        let pi = pi_enclosure_rat(&half).interval().scale(&rat(1, 2));
        let inner = atan_enclosure(&x.clone().recip(), &half);
        return &pi - &inner;
    }
    if x > &rat(1, 2) {
        // atan(x) = π/4 - atan((1-x)/(1+x)); the argument lands in [0, 1/3).
        let half = width / rat_int(2);
        let pi = pi_enclosure_rat(&half).interval().scale(&rat(1, 4));
        let reduced = (rat_int(1) - x) / (rat_int(1) + x);
        let inner = atan_enclosure(&reduced, &half);
        return &pi - &inner;
    }
    atan_series(x, width)
}

/// Alternating Maclaurin series for |x| <= 1/2; consecutive partial sums bracket.
fn atan_series(x: &Rat, width: &Rat) -> Interval {
    debug_assert!(!x.is_negative() && x <= &rat(1, 2));
    if x.is_zero() {
        return Interval::point(rat_int(0));
    }
    let x2 = x * x;
    let mut power = x.clone(); // x^(2k+1)
    let mut sum = rat_int(0);
    let mut k: i64 = 0;
    loop {
        let term = &power / rat_int(2 * k + 1);
        if &term <= width {
            return if k % 2 == 0 {
                Interval::new(sum.clone(), sum + term)
            } else {
                Interval::new(&sum - &term, sum)
            };
        }
        if k % 2 == 0 {
            sum = sum + term;
        } else {
            sum = sum - term;
        }
        power = power * &x2;
        k += 1;
    }
}

/// Enclosure of ln(y) for rational `y > 0`, width at most `width`.
pub fn ln_enclosure(y: &Rat, width: &Rat) -> Interval {
    assert!(y.is_positive(), "logarithm requires a positive argument");
    assert!(width.is_positive());
    // Range-reduce by powers of two so the atanh series converges fast.
    let mut y = y.clone();
    let mut twos: i64 = 0;
    while y > rat_int(2) {
        y = y / rat_int(2);
        twos += 1;
    }
    while y < rat(1, 2) {
        y = y * rat_int(2);
        twos -= 1;
    }
    if twos == 0 {
        return ln_series(&y, width);
    }
    let half = width / rat_int(2);
    let body = ln_series(&y, &half);
    let ln2 = ln_series(&rat_int(2), &(&half / rat_int(2 * twos.abs())));
    &body + &ln2.scale(&rat_int(twos))
}

/// ln(y) = 2 atanh((y-1)/(y+1)) with a geometric remainder bracket.
fn ln_series(y: &Rat, width: &Rat) -> Interval {
    let w = (y - rat_int(1)) / (y + rat_int(1));
    if w.is_zero() {
        return Interval::point(rat_int(0));
    }
    let w2 = &w * &w;
    debug_assert!(w2 < rat_int(1));
    let geom = (rat_int(1) - &w2).recip();
    let half_width = width / rat_int(2); // series is doubled at the end
    let mut power = w.clone(); // w^(2k+1)
    let mut sum = rat_int(0);
    let mut k: i64 = 0;
    loop {
        // Tail after adding terms < k+1: |sum_{j>=k}| <= |w|^(2k+1)/((2k+1)(1-w^2))
        let tail_bound = power.abs() / rat_int(2 * k + 1) * &geom;
        if tail_bound <= half_width {
            let atanh = if w.is_positive() {
                Interval::new(sum.clone(), sum + tail_bound)
            } else {
                Interval::new(&sum - &tail_bound, sum)
            };
            return atanh.scale(&rat_int(2));
        }
        sum = sum + &power / rat_int(2 * k + 1);
        power = power * &w2;
        k += 1;
    }
}
