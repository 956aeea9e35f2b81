//! Exact arithmetic substrate: arbitrary-precision rationals, rational linear
//! forms and matrices, integer lattices with explicit Gram matrices, Smith
//! normal form, lattice quotients and duals.
//!
//! All lattice data lives in a fixed ambient coordinate system (the
//! Y-coordinates of the simple-root basis when a root system is in play); the
//! inner product is always carried explicitly as a Gram matrix.

mod lattice;
mod linform;
mod matq;
mod snf;

pub use lattice::{coset_reps_in_box, lattice_quotient, CosetSystem, LatticeBasis};
pub use linform::LinearForm;
pub use matq::MatQ;
pub use snf::{snf, SnfResult};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Exact scalar: an arbitrary-precision rational kept in canonical form
/// (positive denominator, reduced). Backed by `num_rational::BigRational`,
/// which maintains exactly the invariants the artifact needs.
pub type ExactScalar = num_rational::BigRational;

/// Shorthand constructor for p/q.
pub fn rat(num: i64, den: i64) -> ExactScalar {
    ExactScalar::new(BigInt::from(num), BigInt::from(den))
}

/// Shorthand constructor for an integer scalar.
pub fn rat_int(num: i64) -> ExactScalar {
    ExactScalar::from_integer(BigInt::from(num))
}

/// Parse "p/q" or "p" into an exact scalar. Whitespace is not accepted.
pub fn parse_exact(s: &str) -> crate::Result<ExactScalar> {
    let err = |msg: &str| crate::Error::Parse {
        pos: 0,
        msg: format!("{msg}: {s:?}"),
    };
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let n: BigInt = num.parse().map_err(|_| err("invalid integer"))?;
    let d: BigInt = den.parse().map_err(|_| err("invalid denominator"))?;
    if d.is_zero() {
        return Err(err("zero denominator"));
    }
    Ok(ExactScalar::new(n, d))
}

/// Canonical "p/q" rendering (plain "p" for integers). Re-parses to the
/// identical rational.
pub fn format_exact(x: &ExactScalar) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Convert to f64 (numerator/denominator division; fine at report scale).
pub fn to_f64(x: &ExactScalar) -> f64 {
    let n = x.numer();
    let d = x.denom();
    // Avoid overflow for big values by falling back to string parsing.
    match (n.to_string().parse::<f64>(), d.to_string().parse::<f64>()) {
        (Ok(a), Ok(b)) => a / b,
        _ => f64::NAN,
    }
}

/// Componentwise fractional part into [0,1); idempotent.
pub fn fractional_part(x: &ExactScalar) -> ExactScalar {
    let fl = x.floor();
    x - fl
}

/// Floor of a rational as a BigInt.
pub fn floor_bigint(x: &ExactScalar) -> BigInt {
    x.floor().to_integer()
}

/// lcm of the denominators of a slice of scalars (always positive).
pub fn denominator_lcm(xs: &[ExactScalar]) -> BigInt {
    let mut l = BigInt::one();
    for x in xs {
        l = num_integer::lcm(l, x.denom().clone());
    }
    l.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        let x = rat(4, -6);
        assert_eq!(x, rat(-2, 3));
        assert!(x.denom() > &BigInt::zero());
        assert_eq!(format_exact(&x), "-2/3");
        assert_eq!(parse_exact("-2/3").unwrap(), x);
        assert_eq!(parse_exact("7").unwrap(), rat_int(7));
        assert!(parse_exact("1/0").is_err());
    }

    #[test]
    fn exact_addition_roundtrip() {
        let a = rat(1, 3);
        let b = rat(22, 7);
        assert_eq!(&(&a + &b) - &b, a);
    }

    #[test]
    fn fractional_part_examples() {
        assert_eq!(fractional_part(&rat(5, 4)), rat(1, 4));
        assert_eq!(fractional_part(&rat(-1, 2)), rat(1, 2));
        assert_eq!(fractional_part(&rat_int(1)), rat_int(0));
        assert_eq!(fractional_part(&rat_int(0)), rat_int(0));
        // idempotent
        let x = rat(-17, 5);
        assert_eq!(fractional_part(&fractional_part(&x)), fractional_part(&x));
    }
}
