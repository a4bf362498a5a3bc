//! Exact graded differential geometry on Λ-supermanifold charts, up to the
//! verification of the eleven-dimensional supergravity constraints.

pub mod cjs11d;
pub mod clifford;
pub mod dirac;
pub mod error;
pub mod lambda;
pub mod linalg;
pub mod rational;
pub mod scenario;
pub mod superdomain;
pub mod superpoincare;
pub mod supergravity;

pub use error::{Error, Result};
pub use lambda::{Blade, LambdaElement, Parity};
pub use rational::Q;
