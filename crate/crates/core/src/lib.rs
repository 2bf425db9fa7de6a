//! Verification engine for the Sharipov counterexample family to
//! Habibullin's integral-inequality conjecture.
//!
//! The hypothesis side of each conjecture is certified with exact
//! rational-polynomial sign certificates; the conclusion side is evaluated
//! with error-bounded quadrature and exact enclosures of π, arctangents and
//! logarithms, so every verdict rests on interval comparisons rather than
//! point estimates.

pub mod certificate;
pub mod constants;
pub mod family;
pub mod hypothesis;
pub mod interval;
pub mod poly;
pub mod quadrature;
pub mod rat;
pub mod roots;
pub mod transcend;

pub use certificate::{certify_sign, SignCertificate, SignVerdict};
pub use constants::{pi_enclosure, AlgebraicConstant, PiEnclosure, PowerValue};
pub use family::{build_h, build_q, build_s, FamilyFunction, FamilyParams, Role};
pub use hypothesis::{certify_hypothesis, Conjecture, ConjectureParams, MarginCertificate};
pub use interval::Interval;
pub use poly::RatPoly;
pub use rat::{rat, rat_from_str, rat_int, rat_to_string, Rat};
pub use roots::{isolate_roots, IsolatedRoot};
