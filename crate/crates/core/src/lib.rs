//! Entropic-coherence cost of implementing non-energy-preserving gates with
//! energy-preserving system–battery unitaries.

pub mod battery;
pub mod bounds;
pub mod channels;
pub mod cli;
pub mod coherence;
pub mod error;
pub mod iid;
pub mod io;
pub mod quantum;
pub mod tol;

pub use error::{Error, Result};
