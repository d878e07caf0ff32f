//! Crate-wide error type.
//!
//! Zero-divisor discoveries in extension towers are deliberately *not* errors;
//! they are branch signals carried by [`crate::ext::Eval::Split`] and by the
//! classification driver's restart machinery.

use thiserror::Error;

use crate::mpoly::MPoly;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("inexact division: {0} does not divide the dividend")]
    InexactDivision(MPoly),

    #[error("matrix is not square")]
    NonSquareMatrix,

    #[error("resultant needs nonzero inputs with positive degree in the chosen variable")]
    DegenerateResultant,

    #[error("integration bound contains the integration variable")]
    BoundContainsVariable,

    #[error("value is not a constant rational: {0}")]
    NotRational(MPoly),

    #[error("quadratic form is not in the span of the conic net; residual {0}")]
    NotInSpan(MPoly),

    #[error("matrix is not unimodular: determinant {0}")]
    NotUnimodular(MPoly),

    #[error("quadric is singular: hessian factor {0} vanishes")]
    SingularQuadric(String),

    #[error("coefficient vector does not match the required zero pattern")]
    PatternMismatch,

    #[error("no fresh extension variable available")]
    VariablePoolExhausted,

    #[error("unknown variable name: {0}")]
    UnknownVariable(String),

    #[error("malformed rational literal: {0}")]
    BadRational(String),

    #[error("unknown curve configuration: {0}")]
    UnknownConfig(String),

    #[error("surface parameter n must be one of 0, 2, 4, 6 (got {0})")]
    BadSurfaceParameter(i64),

    #[error("chamber breakpoints cannot be ordered over the given interval")]
    ChamberOrder,

    #[error("sign of {0} is not constant over the region")]
    MixedSign(MPoly),

    #[error("expression is not affine in the sweep parameters: {0}")]
    NonAffine(MPoly),

    #[error("internal inconsistency: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
