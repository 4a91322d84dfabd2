pub mod error;
pub mod extrange;
pub mod grid;
pub mod mazer;
pub mod cli;
pub mod oracles;
pub mod segment;
pub mod specfun;
pub mod transfer;

pub use error::{Error, Result};
