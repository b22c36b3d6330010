//! Exact algorithms for the geometric Picard lattice of a degree-2 K3 surface
//! `w^2 = f(x, y, z)` over a number field.

#![no_std]

extern crate alloc;

pub mod arith;
pub mod budget;
pub mod divisors;
pub mod error;
pub mod intersect;
pub mod lattice;
pub mod linalg;
pub mod pointcount;
pub mod surface;

pub use error::{Error, Result};
