//! Counterpoint symmetries of strong dichotomies in `Z_n[ε]`, their extension
//! along embeddings `Z_n → Z_an`, and the continuous limit on the circle.

pub mod continuum;
pub mod dichotomy;
pub mod error;
pub mod extension;
pub mod oracle;
pub mod report;
pub mod symmetry;
pub mod zmod;

pub use dichotomy::{preset, Dichotomy};
pub use error::{Error, Result};
pub use extension::{LinkageMode, Tower};
pub use symmetry::{counterpoint_symmetries, CounterpointSymmetry, SuccessorSet};
pub use zmod::{AffineMap, DualAffineMap, DualNumber, Modulus};
