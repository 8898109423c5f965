pub mod cli;
pub mod entanglement;
pub mod error;
pub mod models;
pub mod operators;
pub mod redfield;
pub mod states;

pub use error::{Error, Result};
