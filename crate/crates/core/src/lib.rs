//! Exact exterior algebra and verification tooling for flat G2 and Spin(7) geometry.

// Index loops read closer to the tensor formulas than iterator chains.
#![allow(clippy::needless_range_loop)]

pub mod error;
pub mod cycles;
pub mod exalg;
pub mod fourier;
pub mod linalg;
pub mod moduli;
pub mod g2;
pub mod io;
pub mod poly;
pub mod scalar;
pub mod spin7;
pub mod verify;

pub use error::{GeomError, Result};
pub use scalar::{q, qi, Q};
