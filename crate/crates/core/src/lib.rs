//! Exact symbolic toolkit for K-stability certificates of quadric-surface
//! Fano threefolds.
//!
//! Everything is computed over the rationals or in explicit algebraic
//! extension towers; no floating point enters any verified value.

pub mod action;
pub mod chow;
pub mod error;
pub mod ext;
pub mod integrate;
pub mod matrix;
pub mod mpoly;
pub mod normal_form;
pub mod rat;
pub mod resultant;
pub mod sample;
pub mod stability;
pub mod zariski;

pub use error::{Error, Result};
pub use mpoly::{MPoly, Var};
pub use rat::Rat;
