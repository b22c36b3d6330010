//! Exact arithmetic: fields, polynomials, elimination and factorization.

pub mod ext;
pub mod factor;
pub mod ffactor;
pub mod ffield;
pub mod groebner;
pub mod field;
pub mod intfac;
pub mod mpoly;
pub mod numfield;
pub mod parse;
pub mod rng;
pub mod series;
pub mod square;
pub mod upoly;
pub mod zpoly;

pub use field::{Field, PrimeField, Rationals};
pub use rng::AlgRng;
pub use upoly::UPoly;
