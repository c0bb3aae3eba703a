//! Exact arithmetic for rank-two Drinfeld F_q[T]-modules.

pub mod cli;
pub mod construct;
pub mod drinfeld;
pub mod error;
pub mod example;
pub mod ext;
pub mod fq;
pub mod galois;
pub mod ideal;
pub mod isogeny;
pub mod linalg;
pub mod moduli;
pub mod orbit;
pub mod poly;
pub mod ratfunc;
pub mod ring;
pub mod roots;
pub mod search;
pub mod skew;
pub mod text;
pub mod tree;

pub use error::{Error, Result};
