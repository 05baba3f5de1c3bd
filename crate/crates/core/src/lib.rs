//! Monomial Cremona transformations: exponent-matrix model, exact inversion,
//! geometric invariants of the associated surface, and exhaustive
//! symmetry-reduced enumeration.

pub mod document;
pub mod error;
pub mod invariants;
pub mod enumeration;
pub mod linalg;
pub mod map;
pub mod poly;
pub mod sample;
