//! Exact real-root isolation on an interval.
//!
//! Multiplicities come from Yun's square-free decomposition; each square-free
//! factor is isolated by Sturm-chain bisection with exact rational sign
//! evaluations throughout. Enclosures are rational brackets, refinable to any
//! requested width.

use crate::interval::Interval;
use crate::poly::RatPoly;
use crate::rat::{rat_int, Rat};
use num::traits::{Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RootError {
    #[error("cannot isolate roots of the zero polynomial (every point is a root)")]
    ZeroPolynomial,
    #[error("isolation interval is empty or reversed")]
    EmptyInterval,
}

/// One real root of a polynomial: a rational bracket plus the square-free
/// factor it is a simple root of, which makes the bracket refinable.
#[derive(Debug, Clone)]
pub struct IsolatedRoot {
    enclosure: Interval,
    multiplicity: usize,
    factor: RatPoly,
}

impl IsolatedRoot {
    pub fn enclosure(&self) -> &Interval {
        &self.enclosure
    }

    pub fn multiplicity(&self) -> usize {
        self.multiplicity
    }

    /// Bisect until the bracket width is at most `width`.
    pub fn refine(&self, width: &Rat) -> IsolatedRoot {
        let mut root = self.clone();
        root.refine_in_place(width);
        root
    }

    fn refine_in_place(&mut self, width: &Rat) {
        if self.enclosure.lo() == self.enclosure.hi() {
            return;
        }
        let (mut lo, mut hi) = (self.enclosure.lo().clone(), self.enclosure.hi().clone());
        let sign_lo = self.factor.eval(&lo).is_positive();
        debug_assert!(
            {
                let flo = self.factor.eval(&lo);
                let fhi = self.factor.eval(&hi);
                !flo.is_zero() && !fhi.is_zero() && flo.is_positive() != fhi.is_positive()
            },
            "refinable bracket must change sign"
        );
        while &(&hi - &lo) > width {
            let mid = (&lo + &hi) / rat_int(2);
            let fm = self.factor.eval(&mid);
            if fm.is_zero() {
                lo = mid.clone();
                hi = mid;
                break;
            }
            if fm.is_positive() == sign_lo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        self.enclosure = Interval::new(lo, hi);
    }

    fn halve(&mut self) {
        let w = self.enclosure.width() / rat_int(2);
        self.refine_in_place(&w);
    }
}

/// Sturm chain of a square-free polynomial.
struct SturmChain {
    chain: Vec<RatPoly>,
}

impl SturmChain {
    fn new(f: &RatPoly) -> Self {
        let mut chain = vec![f.clone(), f.derivative()];
        loop {
            let n = chain.len();
            if chain[n - 1].is_zero() {
                chain.pop();
                break;
            }
            let (_, r) = chain[n - 2].div_rem(&chain[n - 1]).expect("nonzero divisor");
            if r.is_zero() {
                break;
            }
            chain.push(-&r);
        }
        SturmChain { chain }
    }

    /// Sign variations at `x`, zeros skipped.
    fn variations(&self, x: &Rat) -> usize {
        let mut count = 0;
        let mut prev: Option<bool> = None;
        for p in &self.chain {
            let v = p.eval(x);
            if v.is_zero() {
                continue;
            }
            let sign = v.is_positive();
            if let Some(ps) = prev {
                if ps != sign {
                    count += 1;
                }
            }
            prev = Some(sign);
        }
        count
    }

    /// Number of distinct real roots in the open interval `(a, b)`;
    /// requires the head polynomial to be nonzero at both endpoints.
    fn count_roots(&self, a: &Rat, b: &Rat) -> usize {
        self.variations(a) - self.variations(b)
    }
}

/// Isolate every real root of `p` in the closed interval `[a, b]`.
///
/// Returns pairwise-disjoint enclosures sorted by position, with
/// multiplicities from the square-free decomposition. Roots landing exactly
/// on a rational point (including the interval endpoints) come back as
/// degenerate point enclosures.
pub fn isolate_roots(p: &RatPoly, a: &Rat, b: &Rat) -> Result<Vec<IsolatedRoot>, RootError> {
    if p.is_zero() {
        return Err(RootError::ZeroPolynomial);
    }
    if a >= b {
        return Err(RootError::EmptyInterval);
    }
    let mut roots: Vec<IsolatedRoot> = Vec::new();
    for (factor, multiplicity) in p.squarefree_decomposition() {
        for (enclosure, refiner) in isolate_squarefree(&factor, a, b) {
            roots.push(IsolatedRoot {
                enclosure,
                multiplicity,
                factor: refiner,
            });
        }
    }
    roots.sort_by(|r, s| r.enclosure.lo().cmp(s.enclosure.lo()));
    separate(&mut roots);
    Ok(roots)
}

/// Refine until all enclosures are pairwise disjoint with strict gaps.
fn separate(roots: &mut [IsolatedRoot]) {
    loop {
        let mut overlapping = false;
        for i in 1..roots.len() {
            if roots[i - 1].enclosure.hi() >= roots[i].enclosure.lo() {
                overlapping = true;
                roots[i - 1].halve();
                roots[i].halve();
            }
        }
        if !overlapping {
            return;
        }
        roots.sort_by(|r, s| r.enclosure.lo().cmp(s.enclosure.lo()));
    }
}

/// Roots of a square-free factor inside `[a, b]`, endpoint roots deflated out.
///
/// Each enclosure is paired with the polynomial its bracket is a sign-change
/// isolator for — the deflated factor, so endpoint roots of the original
/// factor cannot poison later refinements.
fn isolate_squarefree(f: &RatPoly, a: &Rat, b: &Rat) -> Vec<(Interval, RatPoly)> {
    let mut f = f.clone();
    let mut out = Vec::new();
    if f.degree().map_or(true, |d| d == 0) {
        return out;
    }
    for endpoint in [a, b] {
        if f.eval(endpoint).is_zero() {
            out.push((Interval::point(endpoint.clone()), f.clone()));
            let linear = RatPoly::from_coeffs(vec![-endpoint.clone(), rat_int(1)]);
            f = f.div_exact(&linear).expect("rational root divides");
        }
    }
    if f.degree().map_or(false, |d| d >= 1) {
        isolate_open(&f, a, b, &mut out);
    }
    out
}

/// Recursive Sturm bisection on `(a, b)` with `f(a) != 0 != f(b)`.
fn isolate_open(f: &RatPoly, a: &Rat, b: &Rat, out: &mut Vec<(Interval, RatPoly)>) {
    let chain = SturmChain::new(f);
    isolate_open_with_chain(f, &chain, a, b, out);
}

fn isolate_open_with_chain(
    f: &RatPoly,
    chain: &SturmChain,
    a: &Rat,
    b: &Rat,
    out: &mut Vec<(Interval, RatPoly)>,
) {
    match chain.count_roots(a, b) {
        0 => {}
        1 => out.push((Interval::new(a.clone(), b.clone()), f.clone())),
        _ => {
            let mid = (a + b) / rat_int(2);
            if f.eval(&mid).is_zero() {
                // Exact rational root at the split point: record it, deflate,
                // and restart on the reduced polynomial.
                out.push((Interval::point(mid.clone()), f.clone()));
                let linear = RatPoly::from_coeffs(vec![-mid, rat_int(1)]);
                let reduced = f.div_exact(&linear).expect("rational root divides");
                isolate_open(&reduced, a, b, out);
            } else {
                isolate_open_with_chain(f, chain, a, &mid, out);
                isolate_open_with_chain(f, chain, &mid, b, out);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    #[test]
    fn quadratic_with_two_roots() {
        // 7z^2 - 8z + 2: roots (4 ± sqrt 2)/7 ≈ 0.369398, 0.773459
        let p = RatPoly::from_ints(&[2, -8, 7]);
        let roots = isolate_roots(&p, &rat_int(0), &rat_int(1)).unwrap();
        assert_eq!(roots.len(), 2);
        let r0 = roots[0].refine(&rat(1, 1_000_000));
        let r1 = roots[1].refine(&rat(1, 1_000_000));
        assert!(r0.enclosure().contains(&rat(369_398, 1_000_000)) ||
                r0.enclosure().intersects(&Interval::new(rat(369_397, 1_000_000), rat(369_399, 1_000_000))));
        assert!(r1.enclosure().intersects(&Interval::new(rat(773_458, 1_000_000), rat(773_460, 1_000_000))));
        assert_eq!(roots[0].multiplicity(), 1);
        assert_eq!(roots[1].multiplicity(), 1);
    }

    #[test]
    fn no_real_roots() {
        let p = RatPoly::from_ints(&[1, 0, 1]); // x^2 + 1
        let roots = isolate_roots(&p, &rat_int(-1), &rat_int(1)).unwrap();
        assert!(roots.is_empty());
    }

    #[test]
    fn double_root_at_zero() {
        let p = RatPoly::from_ints(&[0, 0, 1]); // x^2
        let roots = isolate_roots(&p, &rat_int(-1), &rat_int(1)).unwrap();
        assert_eq!(roots.len(), 1);
        assert_eq!(roots[0].multiplicity(), 2);
        assert!(roots[0].enclosure().contains(&rat_int(0)));
    }

    #[test]
    fn zero_polynomial_rejected() {
        assert_eq!(
            isolate_roots(&RatPoly::zero(), &rat_int(0), &rat_int(1)).unwrap_err(),
            RootError::ZeroPolynomial
        );
    }

    #[test]
    fn endpoint_root_promoted_to_point() {
        // (x - 1)(x + 3) on [0, 1]: root exactly at the right endpoint
        let p = &RatPoly::from_ints(&[-1, 1]) * &RatPoly::from_ints(&[3, 1]);
        let roots = isolate_roots(&p, &rat_int(0), &rat_int(1)).unwrap();
        assert_eq!(roots.len(), 1);
        assert_eq!(roots[0].enclosure(), &Interval::point(rat_int(1)));
    }

    #[test]
    fn clustered_roots_get_separated() {
        // roots at 1/100 and 1/99, very close together
        let p = &RatPoly::from_coeffs(vec![rat(-1, 100), rat_int(1)])
            * &RatPoly::from_coeffs(vec![rat(-1, 99), rat_int(1)]);
        let roots = isolate_roots(&p, &rat_int(0), &rat_int(1)).unwrap();
        assert_eq!(roots.len(), 2);
        assert!(roots[0].enclosure().hi() < roots[1].enclosure().lo());
        assert!(roots[0].enclosure().contains(&rat(1, 100)));
        assert!(roots[1].enclosure().contains(&rat(1, 99)));
    }

    #[test]
    fn mixed_multiplicities() {
        // (x - 1/2)^3 (x + 1/4)^2 on [-1, 1]
        let f1 = RatPoly::from_coeffs(vec![rat(-1, 2), rat_int(1)]);
        let f2 = RatPoly::from_coeffs(vec![rat(1, 4), rat_int(1)]);
        let p = &(&(&f1 * &f1) * &f1) * &(&f2 * &f2);
        let roots = isolate_roots(&p, &rat_int(-1), &rat_int(1)).unwrap();
        assert_eq!(roots.len(), 2);
        assert_eq!(roots[0].multiplicity(), 2);
        assert!(roots[0].enclosure().contains(&rat(-1, 4)));
        assert_eq!(roots[1].multiplicity(), 3);
        assert!(roots[1].enclosure().contains(&rat(1, 2)));
    }

    #[test]
    fn refinement_shrinks_monotonically() {
        let p = RatPoly::from_ints(&[-2, 0, 1]); // x^2 - 2
        let roots = isolate_roots(&p, &rat_int(0), &rat_int(2)).unwrap();
        assert_eq!(roots.len(), 1);
        let coarse = roots[0].refine(&rat(1, 16));
        let fine = roots[0].refine(&rat(1, 1 << 20));
        assert!(coarse.enclosure().contains_interval(fine.enclosure()));
        assert!(fine.enclosure().width() <= rat(1, 1 << 20));
        // sqrt(2) = 1.41421356...
        assert!(fine.enclosure().contains(&rat(14_142_135, 10_000_000))
            || fine.enclosure().lo() > &rat(14_142_135, 10_000_000));
    }
}
