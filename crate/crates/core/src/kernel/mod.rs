//! Exact arithmetic: rationals, polynomials, rational functions, matrices and
//! Smith normal form.

pub mod factor;
pub mod matrix;
pub mod poly;
pub mod ratfunc;
pub mod rational;
pub mod snf;

pub use factor::{factor, Factorization, DEFAULT_DEGREE_BOUND};
pub use matrix::{Matrix, QField, Ring};
pub use poly::Poly;
pub use ratfunc::RatFunc;
pub use rational::{q, q2, Rational};
pub use snf::{smith, Euclid, SmithDecomposition};
