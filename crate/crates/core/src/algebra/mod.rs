//! Exact arithmetic over prime fields, polynomials, rational functions and
//! polynomial matrices.

pub mod factor;
pub mod fp;
pub mod linalg;
pub mod matrix;
pub mod poly;
pub mod ratfunc;

pub use fp::FieldElem;
pub use matrix::PolyMatrix;
pub use poly::Poly;
pub use ratfunc::RatFunc;
