pub mod cli;
pub mod edgeworth;
pub mod error;
pub mod generators;
pub mod harness;
pub mod io;
pub mod moon;
pub mod numerics;
pub mod quantile;

pub use error::{Error, Result};
