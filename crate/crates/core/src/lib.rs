pub mod error;
pub mod matrix;
pub mod intvec;
pub mod latalg;

pub mod cone;
pub mod verify;
pub mod basis;

pub use error::{Error, Result};
