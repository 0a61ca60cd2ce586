//! Integral points on affine diagonal quadric surfaces `a x^2 + b y^2 + c z^2 = n`:
//! local solvability, quaternion Brauer classes and the Brauer–Manin obstruction,
//! and exact counts for the family `a q^2 c^2 x^2 - a d^2 y^2 + e^2 q z^2 = 1`.

pub mod arith;
pub mod brauer;
pub mod census;
pub mod cli;
pub mod constants;
pub mod error;
pub mod local;
pub mod verify;

pub use error::{Error, Result};
