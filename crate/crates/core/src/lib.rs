pub mod detector;
pub mod diffest;
pub mod error;
pub mod harness;
pub mod ode;
pub mod patient;
pub mod quadrature;

pub use error::{Error, Result};
pub mod mfc;
