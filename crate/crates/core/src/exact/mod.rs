//! Exact rational and integer linear algebra.
//!
//! Everything here is computed without rounding. Rationals are
//! `num_rational::BigRational`, which is always stored gcd-reduced with a
//! positive denominator, so structural equality and hashing are canonical.

mod int_matrix;
pub(crate) mod linear;
mod lp;
pub(crate) mod rational;
pub(crate) mod snf;
mod sym;

pub use int_matrix::IntMatrix;
pub use linear::{kernel, rank, rref, solve_linear, LinearSolution};
pub use lp::{cone_membership, Membership};
pub use rational::{format_rational, parse_rational, rat, Rational};
pub use snf::{smith_normal_form, SmithForm};
pub use sym::{evaluate_rank_one, rank_one, SymMatrix};

/// Greatest common divisor of the coordinates of an integer vector.
pub fn content(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| num_integer::gcd(g, x))
}

/// A vector is primitive when its coordinates have gcd 1.
pub fn is_primitive(v: &[i64]) -> bool {
    content(v) == 1
}

/// Flip the sign so that the first nonzero coordinate is positive.
pub fn canonical_sign(mut v: Vec<i64>) -> Vec<i64> {
    if let Some(&first) = v.iter().find(|&&x| x != 0) {
        if first < 0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
    v
}
