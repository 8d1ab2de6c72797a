//! Computations with regular-singular (logarithmic) connections relative to
//! truncated power-series rings `C[t]/(t^m)`.
//!
//! Modules follow the flow of data: jets ([`artinian`]), matrices over jets
//! ([`lambda_linalg`]), connections and their monodromy ([`connections`]),
//! truncation towers ([`tower`]) and the worked Galois example ([`galois`]).

pub mod artinian;
pub mod error;
pub mod lambda_linalg;

pub use error::{Error, Result};
pub mod connections;
pub mod random;
pub mod tower;
pub mod galois;
