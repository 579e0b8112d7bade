//! Shared arbitrary-precision number aliases and small helpers.

use num::bigint::Sign;
use num::{BigInt, BigRational, One, Signed, Zero};

pub type Int = BigInt;
pub type Rat = BigRational;

pub fn int(n: i64) -> Int {
    Int::from(n)
}

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(int(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(int(n), int(d))
}

/// Format a rational as `p` or `p/q`.
pub fn format_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Nearest integer, ties rounded toward plus infinity.
pub fn round_half_up(r: &Rat) -> Int {
    (r + ratio(1, 2)).floor().to_integer()
}

/// Largest m >= 0 with m^2 <= r. Requires r >= 0.
pub fn floor_sqrt(r: &Rat) -> Int {
    assert!(!r.is_negative(), "floor_sqrt of a negative rational");
    if r.is_zero() {
        return Int::zero();
    }
    // m <= sqrt(p/q)  <=>  m^2 * q <= p; start from isqrt(p*q)/q and fix up.
    let p = r.numer();
    let q = r.denom();
    let mut m = (p * q).sqrt() / q;
    while (&m + 1u32).pow(2) * q <= *p {
        m += 1u32;
    }
    while m.pow(2) * q > *p && m.sign() == Sign::Plus {
        m -= 1u32;
    }
    m
}

/// Least common multiple of a sequence of positive integers.
pub fn lcm_all<I: IntoIterator<Item = u64>>(xs: I) -> u64 {
    xs.into_iter().fold(1, num::integer::lcm)
}

pub fn is_one(r: &Rat) -> bool {
    r.is_one()
}
