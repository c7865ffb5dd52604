pub mod algebra;
pub mod bench;
pub mod divisor;
pub mod error;
pub mod field;
pub mod fieldgen;
pub mod ideal;
pub mod jacobian;
pub mod oracles;
pub mod order;
pub mod place;
pub mod riemann_roch;
pub mod selftest;

pub use error::{Error, Result};
