//! Exact Jacobi-Perron expansions of vectors in real algebraic number fields.

// index loops mirror the subscripts of the recurrences
#![allow(clippy::needless_range_loop)]

pub mod analysis;
pub mod error;
pub mod expansion;
pub mod families;
pub mod field;
pub mod json;
pub mod oracle;
pub mod par;
pub mod poly;
pub mod pureroot;
pub mod record;

pub use error::{Error, Result};
