//! Classification of sign pattern and root count combinations for real
//! univariate polynomials.
//!
//! A combination is a sign pattern of the coefficients together with a pair
//! `(pos, neg)` of positive and negative root counts compatible with
//! Descartes' rule of signs. Each combination is either realized by an exactly
//! checked polynomial, ruled out by a certificate, or left unknown.

pub mod certificates;
pub mod classify;
pub mod constructors;
pub mod error;
pub mod exactpoly;
pub mod patterns;

pub use error::{ClassifyError, ConstructError, PatternError, PolyError, StoreError};
pub use exactpoly::{count_roots, sign_pattern_of, Poly, Rational, RootCount};
pub use patterns::{
    canonical_orbit_rep, enumerate_orbits, Combination, GroupElement, OrbitKey, RootPair, Sign,
    SignPattern,
};
