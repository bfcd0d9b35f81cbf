pub mod convex;
pub mod error;
pub mod exactmath;
pub mod okounkov;
pub mod valuation;
pub mod varieties;

pub use error::{Error, Result};
