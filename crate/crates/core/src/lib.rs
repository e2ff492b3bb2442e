//! Exact arithmetic for binary n-ic forms: the scalar-matrix group action,
//! binary rings and their Sₙ-closures over the Eulerian monomial basis,
//! cross-ratio equivalence testing, quadratic P¹-heights, and the sieves
//! counting equivalence classes and number fields by height.
//!
//! All core arithmetic is exact (`BigInt` / `BigRational`); floating point
//! appears only in root isolation and lattice reduction, always behind an
//! exact verification step or an explicit tolerance.

pub mod bigfloat;
pub mod closure;
pub mod embed;
pub mod equiv;
pub mod eulerian;
pub mod factor;
pub mod forms;
pub mod irreducible;
pub mod lll;
pub mod minimal;
pub mod modp;
pub mod poly;
pub mod quadratic;
pub mod ring;
pub mod roots;
pub mod stats;

use num_bigint::BigInt;

/// Errors shared across the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("binary form must have degree >= 2 (got {0})")]
    Degree(usize),
    #[error("operation requires a nonzero form")]
    ZeroForm,
    #[error("operation requires a primitive form")]
    NotPrimitive,
    #[error("degenerate form: discriminant is zero")]
    DegenerateDiscriminant,
    #[error("repeated roots (discriminant is zero)")]
    RepeatedRoots,
    #[error("leading coefficient must be nonzero for this operation")]
    LeadingZero,
    #[error("unsupported case: {0}")]
    Unsupported(&'static str),
    #[error("group element must be nondegenerate (lambda != 0, det != 0)")]
    DegenerateGroupElement,
    #[error("degree mismatch: element acts on degree {expected}, form has degree {got}")]
    DegreeMismatch { expected: usize, got: usize },
    #[error("elements belong to different forms")]
    MixedForms,
    #[error("index out of range: {0}")]
    IndexOutOfRange(usize),
    #[error("working precision exhausted after {0} escalations")]
    PrecisionExhausted(u32),
    #[error("budget exhausted: {0}")]
    BudgetExhausted(&'static str),
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Shorthand used throughout: exact big integer.
pub type Int = BigInt;
/// Shorthand used throughout: exact big rational.
pub type Rat = num_rational::BigRational;

pub use forms::{BinaryForm, GroupElement, RationalForm};
