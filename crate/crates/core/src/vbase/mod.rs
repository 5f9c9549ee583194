//! The monoidal closed base: finite sets, or finite-dimensional spaces
//! over the rationals or a prime field, with exact arithmetic.

pub mod classify;
pub mod field;
pub mod limits;
pub mod map;
pub mod matrix;
pub mod random;

pub use classify::{classify_map, is_epi, is_iso, is_mono, MapClass};
pub use field::{Field, Scalar};
pub use limits::{factor_universal, ColimitCocone, LimitCone, Universal};
pub use map::{BaseCtx, VMap, VObj};
pub use matrix::Mat;
