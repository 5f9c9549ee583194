pub mod certify;
pub mod encat;
pub mod error;
pub mod frobenius;
pub mod groups;
pub mod kancoend;
pub mod rng;
pub mod vbase;

pub use error::{KanError, Result};
