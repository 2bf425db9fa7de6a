//! Exact sign certificates for rational polynomials on an interval.
//!
//! A certificate is a machine-checkable proof object: root enclosures with
//! multiplicities, exact endpoint values, and sample signs between consecutive
//! enclosures. `NONNEGATIVE` is issued only when every interior root has even
//! multiplicity (or sits exactly on a domain endpoint) and every sample and
//! endpoint value is nonnegative — all decided in exact rational arithmetic.

use crate::interval::Interval;
use crate::poly::RatPoly;
use crate::rat::{rat_int, Rat};
use crate::roots::{isolate_roots, IsolatedRoot, RootError};
use num::traits::{Signed, Zero};
use serde::Serialize;

/// Outcome of sign certification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SignVerdict {
    #[serde(rename = "NONNEGATIVE")]
    Nonnegative,
    #[serde(rename = "NONPOSITIVE")]
    Nonpositive,
    #[serde(rename = "INDEFINITE")]
    Indefinite,
}

/// Proof object for the sign of a polynomial on `[domain.0, domain.1]`.
#[derive(Debug, Clone)]
pub struct SignCertificate {
    pub polynomial: RatPoly,
    pub domain: (Rat, Rat),
    pub verdict: SignVerdict,
    /// Disjoint enclosures of every real root in the domain, with multiplicity.
    pub root_enclosures: Vec<(Interval, usize)>,
    /// Exact values at the domain endpoints.
    pub endpoint_values: (Rat, Rat),
    /// Exact sample values strictly between consecutive root enclosures.
    pub gap_samples: Vec<(Rat, Rat)>,
    /// Point (or small interval) where the polynomial is negative, for `Indefinite`.
    pub negativity_witness: Option<(Interval, Rat)>,
    /// Degenerate case: the zero polynomial is nonnegative by convention.
    pub is_zero_polynomial: bool,
}

impl SignCertificate {
    /// Re-check the certificate against its own polynomial.
    ///
    /// Verifies endpoint values, sample values, disjointness, and the
    /// verdict's multiplicity conditions, all exactly. Used by tests to make
    /// sure emitted certificates stand on their own.
    pub fn check(&self) -> Result<(), String> {
        if self.is_zero_polynomial {
            if !self.polynomial.is_zero() {
                return Err("zero flag on nonzero polynomial".into());
            }
            return Ok(());
        }
        let (a, b) = &self.domain;
        if self.polynomial.eval(a) != self.endpoint_values.0
            || self.polynomial.eval(b) != self.endpoint_values.1
        {
            return Err("endpoint values do not match polynomial".into());
        }
        for window in self.root_enclosures.windows(2) {
            if window[0].0.hi() >= window[1].0.lo() {
                return Err("root enclosures overlap".into());
            }
        }
        for (x, v) in &self.gap_samples {
            if &self.polynomial.eval(x) != v {
                return Err("gap sample does not match polynomial".into());
            }
        }
        match self.verdict {
            SignVerdict::Nonnegative => {
                if self.endpoint_values.0.is_negative() || self.endpoint_values.1.is_negative() {
                    return Err("negative endpoint under NONNEGATIVE".into());
                }
                for (_, v) in &self.gap_samples {
                    if v.is_negative() {
                        return Err("negative sample under NONNEGATIVE".into());
                    }
                }
                for (enc, mult) in &self.root_enclosures {
                    let interior = enc.lo() != a && enc.hi() != b;
                    if interior && mult % 2 == 1 {
                        return Err("interior odd-multiplicity root under NONNEGATIVE".into());
                    }
                    if self.polynomial.eval(enc.lo()).is_negative()
                        || self.polynomial.eval(enc.hi()).is_negative()
                    {
                        return Err("negative value at enclosure endpoint".into());
                    }
                }
            }
            SignVerdict::Indefinite => {
                let (_, value) = self
                    .negativity_witness
                    .as_ref()
                    .ok_or("INDEFINITE without witness")?;
                if !value.is_negative() {
                    return Err("witness value is not negative".into());
                }
            }
            SignVerdict::Nonpositive => {
                if self.endpoint_values.0.is_positive() || self.endpoint_values.1.is_positive() {
                    return Err("positive endpoint under NONPOSITIVE".into());
                }
                for (_, v) in &self.gap_samples {
                    if v.is_positive() {
                        return Err("positive sample under NONPOSITIVE".into());
                    }
                }
            }
        }
        Ok(())
    }
}

/// Certify the sign of `p` on `[a, b]` exactly.
///
/// The zero polynomial is accepted and reported `Nonnegative` with the
/// degenerate flag set; every other verdict is backed by root isolation.
pub fn certify_sign(p: &RatPoly, a: &Rat, b: &Rat) -> SignCertificate {
    assert!(a < b, "certify_sign requires a < b");
    if p.is_zero() {
        return SignCertificate {
            polynomial: p.clone(),
            domain: (a.clone(), b.clone()),
            verdict: SignVerdict::Nonnegative,
            root_enclosures: Vec::new(),
            endpoint_values: (rat_int(0), rat_int(0)),
            gap_samples: Vec::new(),
            negativity_witness: None,
            is_zero_polynomial: true,
        };
    }
    let roots = match isolate_roots(p, a, b) {
        Ok(r) => r,
        Err(RootError::ZeroPolynomial) | Err(RootError::EmptyInterval) => unreachable!(),
    };
    let roots = confine_to_interior(roots, a, b);
    let enclosures: Vec<(Interval, usize)> = roots
        .iter()
        .map(|r| (r.enclosure().clone(), r.multiplicity()))
        .collect();

    // Sample strictly between consecutive enclosures and against the domain
    // endpoints; every sample is outside all enclosures, hence nonzero.
    let mut cuts: Vec<Rat> = vec![a.clone()];
    for (enc, _) in &enclosures {
        cuts.push(enc.lo().clone());
        cuts.push(enc.hi().clone());
    }
    cuts.push(b.clone());
    let mut gap_samples = Vec::new();
    let mut idx = 0;
    while idx + 1 < cuts.len() {
        let (lo, hi) = (&cuts[idx], &cuts[idx + 1]);
        if lo < hi {
            let x = (lo + hi) / rat_int(2);
            let v = p.eval(&x);
            debug_assert!(!v.is_zero(), "sample landed on a root");
            gap_samples.push((x, v));
        }
        idx += 2;
    }

    let endpoint_values = (p.eval(a), p.eval(b));
    let has_negative = gap_samples.iter().any(|(_, v)| v.is_negative())
        || endpoint_values.0.is_negative()
        || endpoint_values.1.is_negative();
    let has_positive = gap_samples.iter().any(|(_, v)| v.is_positive())
        || endpoint_values.0.is_positive()
        || endpoint_values.1.is_positive();
    let interior_odd = roots.iter().any(|r| {
        r.multiplicity() % 2 == 1 && r.enclosure().lo() != a && r.enclosure().hi() != b
    });

    let verdict = if (interior_odd && has_negative) || (has_negative && has_positive) {
        SignVerdict::Indefinite
    } else if has_negative {
        SignVerdict::Nonpositive
    } else if interior_odd {
        // Odd interior root but no negative sample found between enclosures:
        // tighten around the root until the negative side is exposed.
        SignVerdict::Indefinite
    } else {
        SignVerdict::Nonnegative
    };

    let negativity_witness = if verdict == SignVerdict::Indefinite {
        Some(find_negative_witness(p, a, b, &roots, &gap_samples, &endpoint_values))
    } else {
        None
    };

    SignCertificate {
        polynomial: p.clone(),
        domain: (a.clone(), b.clone()),
        verdict,
        root_enclosures: enclosures,
        endpoint_values,
        gap_samples,
        negativity_witness,
        is_zero_polynomial: false,
    }
}

/// Shrink enclosures of interior roots until they exclude the domain
/// endpoints (point roots at the endpoints themselves stay put).
fn confine_to_interior(roots: Vec<IsolatedRoot>, a: &Rat, b: &Rat) -> Vec<IsolatedRoot> {
    roots
        .into_iter()
        .map(|mut r| {
            if r.enclosure().lo() == r.enclosure().hi() {
                return r;
            }
            let mut width = r.enclosure().width();
            while r.enclosure().lo() == a || r.enclosure().hi() == b {
                width = width / rat_int(2);
                r = r.refine(&width);
            }
            r
        })
        .collect()
}

fn find_negative_witness(
    p: &RatPoly,
    a: &Rat,
    b: &Rat,
    roots: &[IsolatedRoot],
    gap_samples: &[(Rat, Rat)],
    endpoint_values: &(Rat, Rat),
) -> (Interval, Rat) {
    if endpoint_values.0.is_negative() {
        return (Interval::point(a.clone()), endpoint_values.0.clone());
    }
    if endpoint_values.1.is_negative() {
        return (Interval::point(b.clone()), endpoint_values.1.clone());
    }
    if let Some((x, v)) = gap_samples.iter().find(|(_, v)| v.is_negative()) {
        return (Interval::point(x.clone()), v.clone());
    }
    // All visible samples are positive, so some odd-multiplicity interior root
    // hides a sign change inside the gap between its enclosure endpoints.
    for r in roots {
        if r.multiplicity() % 2 == 0 {
            continue;
        }
        let mut width = r.enclosure().width();
        for _ in 0..4096 {
            width = width / rat_int(2);
            let refined = r.refine(&width);
            for x in [refined.enclosure().lo(), refined.enclosure().hi()] {
                let v = p.eval(x);
                if v.is_negative() {
                    return (Interval::point(x.clone()), v);
                }
            }
        }
    }
    unreachable!("indefinite verdict without reachable negative value");
}
