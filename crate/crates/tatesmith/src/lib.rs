//! Exact computations in the integral Tate category of Z/p and Smith theory for
//! stratified spaces modeled by finite posets.

pub mod error;
pub mod equivsimp;
pub mod examples;
pub mod homcx;
pub mod io;
pub mod linalg;
pub mod parity;
pub mod pimod;
pub mod stratsheaf;
pub mod testgen;
pub mod tate;

pub use error::{Error, Result};
