//! Genus-4 curves that are double covers of elliptic curves.
//!
//! A curve in this crate is the complete intersection in P^3 of a Weierstrass
//! cubic `y^2 z = x^3 + A x z^2 + B z^3` and a quadric `w^2 = q(x, y, z)`.
//! The modules build up from finite field arithmetic to the enumeration of
//! superspecial curves of this shape.

pub mod ring;
pub mod ff;
pub mod mpoly;
pub mod groebner;
pub mod curves;
pub mod enumeration;
pub mod linalg;
pub mod certificates;

pub use ring::{Field, Ring};

pub(crate) fn ff_lcm(a: usize, b: usize) -> usize {
    a / num_integer::gcd(a, b) * b
}
