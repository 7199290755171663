pub mod cli;
pub mod contragredient;
pub mod diffop;
pub mod error;
pub mod hybrid;
pub mod isotopic;
pub mod linalg;
pub mod pseudo_orbit;
pub mod report;
pub mod rng;

pub use error::{Error, Result};
