//! Exact arithmetic for truncated skew polynomial rings `R[w, sigma]/(w^t)`,
//! their embeddings into matrix rings over `R[z]/(z^t)`, supermatrix algebras
//! cut out by an involution, the Grassmann representation tower, and
//! verification suites checking the resulting identities by exact computation.

pub mod embed;
pub mod error;
pub mod identities;
pub mod matrix;
pub mod perm;
pub mod random;
pub mod report;
pub mod ring;
pub mod skew;
pub mod suite;

pub use error::{AlgError, Result};
pub use ring::{
    apply_endo, fixed_ring_member, int, rational, ring_mul, Element, EndoAction, Endomorphism,
    Rational, Ring, RingKind,
};
