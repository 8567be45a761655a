pub mod catalog;
pub mod cremona;
pub mod error;
pub mod exactq;
pub mod filters;
pub mod invariants;
pub mod pipeline;

pub use error::{Error, Result};
