//! Exact rational helpers shared by the real-number layer.
//!
//! Approximations are kept as [`Rational`] values. To stop denominators from
//! growing without bound, most operations round their output onto a dyadic
//! grid `2^-bits` with a known (half-ulp) error.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub type Rational = num_rational::BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `2^-n` as an exact rational.
pub fn pow2_neg(n: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::one() << n as usize)
}

/// `2^n` as an exact rational.
pub fn pow2(n: u32) -> Rational {
    Rational::from_integer(BigInt::one() << n as usize)
}

/// Signed power of two: `2^e`.
pub fn pow2_signed(e: i64) -> Rational {
    if e >= 0 {
        pow2(e as u32)
    } else {
        pow2_neg((-e) as u32)
    }
}

/// Rounds `q` to the nearest multiple of `2^-bits` (ties away from zero).
/// The result differs from `q` by at most `2^-(bits+1)`.
pub fn round_dyadic(q: &Rational, bits: u32) -> Rational {
    if q.denom().is_one() {
        return q.clone();
    }
    let scale = BigInt::one() << bits as usize;
    let scaled = q * Rational::from_integer(scale.clone());
    Rational::new(scaled.round().to_integer(), scale)
}

/// Largest multiple of `2^-bits` that is `<= q`.
pub fn floor_dyadic(q: &Rational, bits: u32) -> Rational {
    let scale = BigInt::one() << bits as usize;
    let scaled = q * Rational::from_integer(scale.clone());
    Rational::new(scaled.floor().to_integer(), scale)
}

/// Smallest multiple of `2^-bits` that is `>= q`.
pub fn ceil_dyadic(q: &Rational, bits: u32) -> Rational {
    let scale = BigInt::one() << bits as usize;
    let scaled = q * Rational::from_integer(scale.clone());
    Rational::new(scaled.ceil().to_integer(), scale)
}

/// Smallest `e >= 0` with `|q| <= 2^e`.
pub fn ceil_log2(q: &Rational) -> u32 {
    let a = q.abs();
    if a <= Rational::one() {
        return 0;
    }
    let c = a.ceil().to_integer();
    let bits = c.bits() as u32;
    // c <= 2^bits; tighten when c is an exact power of two
    if (&c - BigInt::one()).bits() < c.bits() {
        bits - 1
    } else {
        bits
    }
}

/// Ceiling of a non-negative rational as a natural number.
pub fn ceil_nat(q: &Rational) -> BigUint {
    let c = q.ceil().to_integer();
    if c.sign() == Sign::Minus {
        BigUint::zero()
    } else {
        c.to_biguint().expect("non-negative")
    }
}

/// Floor of a non-negative rational as a natural number.
pub fn floor_nat(q: &Rational) -> BigUint {
    let c = q.floor().to_integer();
    if c.sign() == Sign::Minus {
        BigUint::zero()
    } else {
        c.to_biguint().expect("non-negative")
    }
}

pub fn nat_to_rat(n: &BigUint) -> Rational {
    Rational::from_integer(BigInt::from(n.clone()))
}

pub fn min_rat(a: &Rational, b: &Rational) -> Rational {
    if a <= b {
        a.clone()
    } else {
        b.clone()
    }
}

pub fn max_rat(a: &Rational, b: &Rational) -> Rational {
    if a >= b {
        a.clone()
    } else {
        b.clone()
    }
}

/// Parses `"p"`, `"p/q"` or a finite decimal such as `"-0.125"`.
pub fn parse_rational(src: &str) -> Option<Rational> {
    let s = src.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rational::new(n, d));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let neg = whole.trim_start().starts_with('-');
        let digits = format!("{}{}", whole.trim_start_matches(['-', '+']), frac);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let n: BigInt = digits.parse().ok()?;
        let d = num_traits::pow(BigInt::from(10), frac.len());
        let q = Rational::new(n, d);
        return Some(if neg { -q } else { q });
    }
    let n: BigInt = s.parse().ok()?;
    Some(Rational::from_integer(n))
}

/// `a^n` for a natural exponent.
pub fn pow_rat(a: &Rational, n: u32) -> Rational {
    num_traits::pow(a.clone(), n as usize)
}

/// Greatest `r` with `r^2 <= n`, for naturals.
pub fn isqrt(n: &BigUint) -> BigUint {
    n.sqrt()
}

/// Exact `floor(log2 n)` for `n >= 1`.
pub fn floor_log2(n: &BigUint) -> u64 {
    debug_assert!(!n.is_zero());
    n.bits() - 1
}

pub fn is_even(n: &BigInt) -> bool {
    n.is_even()
}
