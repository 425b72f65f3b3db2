pub mod affine;
pub mod algebra;
pub mod census;
pub mod correspondence;
pub mod error;
pub mod field;
pub mod format;
pub mod gallery;
pub mod gl;
pub mod series;

pub use error::{Error, Result};
