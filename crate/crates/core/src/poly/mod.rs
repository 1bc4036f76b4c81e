//! Binary forms, SL(2,R) elements and the factored description of points of
//! P(V).

mod factor;
mod factored;
mod form;
mod group;
mod roots;
mod text;

use thiserror::Error;

pub use factor::factor;
pub use factored::{FactoredBlock, FactoredElement};
pub use form::HomogeneousForm;
pub use group::{Generator, GroupElement};
pub use roots::{BoundaryPoint, InteriorPoint};
pub use text::{parse_complex, parse_element, parse_form, parse_scalar};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PolyError {
    #[error("malformed form: {0}")]
    MalformedForm(String),
    #[error("malformed block: {0}")]
    MalformedBlock(String),
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("not a projective point: every block scalar is zero")]
    ZeroElement,
    #[error("matrix is not in SL(2,R): determinant {0}")]
    NotUnimodular(f64),
    #[error("cannot factor the zero form")]
    ZeroForm,
    #[error("unstable factorization at tol={tol}: {detail}")]
    UnstableFactorization { tol: f64, detail: String },
    #[error("root is not representable exactly: {0}")]
    IrrationalRoot(String),
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
}
