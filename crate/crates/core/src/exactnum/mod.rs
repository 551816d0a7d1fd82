//! Exact scalars: rationals, cyclotomic numbers, binomials and polynomials.

pub mod binom;
pub mod cyclo;
pub mod poly;
pub mod rational;

pub use binom::{binomial, binomial_int, factorial, falling, rising, sign};
pub use cyclo::{cyclotomic_polynomial, embed_root, totient, CycloNumber};
pub use poly::{Poly, QPoly, Scalar};
pub use rational::{parse_list, q, Rational};
