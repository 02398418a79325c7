//! Exact arithmetic for Apery-style irrationality certificates of integral
//! Laurent polynomials.

pub mod analytic;
pub mod arith;
pub mod certify;
pub mod error;
pub mod frobenius;
pub mod generators;
pub mod laurent;
pub mod linalg;
pub mod ode;
pub mod poly;
pub mod polytope;
pub mod serde_util;

pub use analytic::BigReal;
pub use certify::{run_certificate, CertificateReport, CertifyConfig, Verdict};
pub use error::{Error, Result};
pub use laurent::{
    constant_term_powers, parse_laurent, ExponentVector, LaurentPoly, RationalSequence,
    SignedPermutation,
};
pub use ode::{DeltaOperator, PolynomialRecurrence};
pub use poly::Poly;
