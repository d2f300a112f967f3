pub mod constants;
pub mod error;
pub mod factorize;
pub mod field;
pub mod kernel;
pub mod quad;
pub mod special;

pub use error::{Error, Result};
