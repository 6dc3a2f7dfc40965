//! Polynomials and Tate-algebra elements in t, and rational functions with
//! poles at the twisted points θ^(q^j).

pub mod element;
pub mod poly;
pub mod rational;

pub use element::{gauss_log_norm, Tail, TateElement, NEG_INF};
pub use poly::TPoly;
pub use rational::{rational_pole_stack, series_mul, theta_point, RationalVector};
