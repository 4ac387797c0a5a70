//! so(2,2) spectrum-generating algebra for position-dependent-mass
//! Schrödinger problems, with a finite-difference von Roos verifier.

pub mod algebra;
pub mod catalog;
pub mod error;
pub mod jet;
pub mod mass;
pub mod quad;
pub mod sga;
pub mod solver;
pub mod verify;

pub use error::{Result, SgaError};
