//! Exact verification of generalized complex structures on a coordinate chart.
//!
//! All tensor data has polynomial coefficients over the rationals, so every
//! identity is decided exactly: a check either certifies that each defect
//! polynomial is identically zero, or returns a rational witness point.

pub mod algebroid;
pub mod courant;
pub mod error;
pub mod format;
pub mod fuzz;
pub mod groupoid;
pub mod hitchin;
pub mod matrix;
pub mod morphism;
pub mod ratpoly;
pub mod report;
pub mod suite;
pub mod tensor;

pub use courant::GeneralizedStructure;
pub use error::{Error, Result};
pub use format::StructureFile;
pub use hitchin::HitchinPair;
pub use matrix::{PolyMatrix, QMatrix};
pub use ratpoly::{RatPoly, Rational};
pub use report::{CheckReport, Verdict};
pub use tensor::{Bivector, Chart, EndoField, KForm, PolyMap, VectorField};
