//! Orbit closeness for dynamical systems: shortest distances between two
//! orbits, their scaling exponents, correlation dimensions, suspension flows
//! and irrationality exponents of rotation numbers.

pub mod closeness;
pub mod diophantine;
pub mod dimension;
pub mod dynamics;
pub mod error;
mod grid;
pub mod rng;
pub mod suspension;

pub use error::{Error, Result};
