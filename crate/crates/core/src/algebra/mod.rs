//! Exact scalar and polynomial arithmetic: arbitrary-precision rationals,
//! Gaussian rationals, intervals with rational endpoints, dense univariate
//! polynomials over ℚ, and cleared integer forms used by the kernels.

mod cleared;
mod gaussian;
mod interval;
mod poly;
mod rational;

pub use cleared::{PolyQ, PolyZ};
pub use gaussian::GaussRat;
pub use interval::RatInterval;
pub use poly::Poly;
pub use rational::{
    fmt_rat, parse_rat, pow2, rat_bits, rat_from_i64, rat_from_pair, rat_is_reduced, Rat,
};
