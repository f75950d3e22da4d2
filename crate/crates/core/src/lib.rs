//! Exact norm-form shells of the nine imaginary quadratic rings of class
//! number one, ellipsoidal design checks on those shells, and the theta
//! coefficient identities behind their design strength.

pub mod arith;
pub mod design;
pub mod error;
pub mod harmonic;
mod linalg;
pub mod poly;
pub mod ring;
pub mod shells;
pub mod theta;

pub use error::{Error, Result};
pub use poly::BivarPoly;
pub use ring::{QuadInt, Ring};
pub use shells::{enumerate_shell, Shell};
