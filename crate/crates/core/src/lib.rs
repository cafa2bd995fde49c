#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod experiment;
pub mod linstat;
pub mod primes;
pub mod quad;
pub mod summation;
pub mod testfns;
pub mod zeros;
pub mod zeta;

pub use error::{Error, Result};
