//! Fractal strings, their geometric zeta functions and complex dimensions,
//! tube formulas, binomial measures and multifractal zeta functions.

pub mod error;
pub mod measures;
pub mod mzeta;
pub mod pzeta;
pub mod rational;
pub mod strings;
pub mod tube;
pub mod zeta;

pub use error::{Error, Result};
pub use rational::Rational;
