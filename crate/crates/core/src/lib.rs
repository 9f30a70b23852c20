pub mod cli;
pub mod colorcode;
pub mod error;
pub mod graphs;
pub mod ineqcore;
pub mod listcolor;
pub mod plan;
pub mod query;
pub mod relcore;
pub mod strategies;
pub mod testgen;

pub use error::{Error, Result};
