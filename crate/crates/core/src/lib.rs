//! Exceptional Jacobi polynomials of codimension one.
//!
//! ```
//! use xjacobi::darboux::{FamilySpec, SeedType};
//! use xjacobi::opmatrix::limit_coeffs;
//! use xjacobi::selfinv::statement_interval;
//!
//! let fam = FamilySpec::new(SeedType::TypeI, 3.0, 0.0, 1).build()?;
//! assert!((fam.lambda_tilde - 4.0).abs() < 1e-9);
//! let u = limit_coeffs(&fam);
//! assert!((u[1] - 0.75).abs() < 1e-15);
//! let (lo, hi) = statement_interval(&fam)?;
//! assert!((lo + 1.375).abs() < 1e-14 && (hi - 1.625).abs() < 1e-14);
//! # Ok::<(), xjacobi::Error>(())
//! ```

pub mod asympt;
pub mod darboux;
pub mod error;
pub mod jacobi;
pub mod linalg;
pub mod opmatrix;
pub mod output;
pub mod poly;
pub mod selfinv;
pub mod spectra;

pub use error::{Error, Result};
