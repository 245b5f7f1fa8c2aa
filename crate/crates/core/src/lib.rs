// Errors carry the exact rationals involved; none of them is on a hot path.
#![allow(clippy::result_large_err)]

pub mod analysis;
pub mod cantor;
pub mod cli;
pub mod extract;
pub mod function;
pub mod rational;
pub mod real;
