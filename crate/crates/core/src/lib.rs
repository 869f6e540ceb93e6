pub mod error;
pub mod analysis;
pub mod engine;
pub mod factors;
pub mod kernels;
pub mod numeric;
pub mod quadrature;
pub mod splines;
pub mod verify;

pub use error::{Error, Result};
