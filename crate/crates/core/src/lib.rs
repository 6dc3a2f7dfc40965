//! Exact arithmetic for motivic pairings of Anderson t-modules over F_q[t].

pub mod error;
pub mod scalar;

pub use error::{Error, Result};
pub mod tate;
pub mod motive;
pub mod report;
pub mod tmodule;
pub mod special;
pub mod pairings;
pub mod sample;
pub mod cli;
