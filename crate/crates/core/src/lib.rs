//! Doubly indexed matrix families `{A_ij}` and the coupled Sylvester system
//! `A_ij X_j = X_i B_ij`.
//!
//! The crate decides and certifies coupled reducibility at three strengths,
//! builds the graphs whose components force equal dimensions and ranks,
//! solves and classifies coupled Sylvester systems, and checks the coupled
//! normality identities. Every routine runs on exact Gaussian rationals or
//! on `Complex64` with an explicit [`TolerancePolicy`].

pub mod error;
pub mod family;
pub mod fixtures;
pub mod graphs;
pub mod io;
pub mod linalg;
pub mod matrix;
pub mod normality;
pub mod reducibility;
pub mod report;
pub mod scalar;
pub mod sylvester;

pub use error::{Error, Result};
pub use family::{CFamily, CoupledFamily, QFamily, SimilarityWitness};
pub use linalg::TolerancePolicy;
pub use matrix::{CMatrix, Matrix, QMatrix};
pub use num_complex::Complex64;
pub use scalar::{GaussRational, Scalar};
