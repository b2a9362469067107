//! Fingerprints of holomorphic automorphisms of `C^n`.
//!
//! An automorphism `F` is recorded by its 1-jet at the origin together with
//! the Levi matrix field of `log ||DF(0)^{-1}(F - F(0))||` on `C^n \ {0}`.
//! Two automorphisms with the same jet and the same Levi field coincide, so
//! sampled fingerprints can separate maps, detect affine maps and check the
//! normalization retraction numerically.
//!
//! The computable family is the tame group: finite words of invertible affine
//! maps and elementary shears, see [`algebra`].

#![forbid(unsafe_code)]
// `!(x < tol)` is used on purpose so that NaN fails every check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algebra;
pub mod corpus;
pub mod fingerprint;
pub mod lang;
pub mod linalg;
pub mod verify;
pub mod wirtinger;

pub use algebra::{AffineMap, AlgebraError, AutomorphismWord, ComplexPolynomial, Generator, Jet1, Shear};
pub use fingerprint::{
    affineness, compare, fingerprint, is_affine, sample_points, AffinenessReport, ComparisonVerdict, Fingerprint,
    FingerprintError, Outcome,
    SamplingConfig, Thresholds, Witness,
};
pub use lang::{parse_automorphism, parse_point, parse_polynomial, serialize, ParseError, ParseErrorKind, SourceSpan};
pub use linalg::{CMatrix, CVector, C64};
pub use wirtinger::{
    is_pluriharmonic_at, is_psd, kernel_residual, levi_log_norm, wirtinger_levi_fd, HermitianMatrix,
    LeviSample, WirtingerError,
};
