//! Dirichlet characters, L-functions and twisted second moments over F_q[T].
//!
//! Everything is computed by exhaustive enumeration at desk scale: unit
//! groups come with full discrete-log tables, character values are exact
//! rational angles, and every L-function of a non-principal character is a
//! finite polynomial in q^{-s}.

pub mod arithfns;
pub mod charmod;
pub mod error;
pub mod fieldpoly;
pub mod lfunc;
pub mod moments;

pub use error::{Error, Result};
