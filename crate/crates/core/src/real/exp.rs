//! Certified enclosures of `e^q` for rational `q`.
//!
//! Values are carried as fixed-point integers `X / 2^w`. Every step rounds
//! the lower bound down and the upper bound up, so the final pair encloses the
//! true value without a separate error analysis. Precision is raised until the
//! enclosure is narrower than the requested width.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::rational::{ceil_log2, Rational};

fn floor_div(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_floor(b)
}

fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    -((-a).div_floor(b))
}

/// Fixed-point enclosure of `e^r` for `0 <= r <= 1/2`, given `r` itself as a
/// fixed-point enclosure `[r_lo, r_hi]` at scale `2^w`.
fn exp_small(r_lo: &BigInt, r_hi: &BigInt, w: u32) -> (BigInt, BigInt) {
    let one = BigInt::one() << w as usize;
    let scale = one.clone();
    let mut t_lo = one.clone();
    let mut t_hi = one.clone();
    let mut s_lo = one.clone();
    let mut s_hi = one.clone();
    let mut k: u64 = 1;
    loop {
        let kb = BigInt::from(k);
        t_lo = floor_div(&(&t_lo * r_lo), &(&scale * &kb));
        t_hi = ceil_div(&(&t_hi * r_hi), &(&scale * &kb));
        if t_hi <= BigInt::one() {
            // tail after this term is at most 2 * t_hi since the ratio is <= 1/2
            s_hi += &t_hi * 2u32 + 1u32;
            s_lo += &t_lo;
            break;
        }
        s_lo += &t_lo;
        s_hi += &t_hi;
        k += 1;
    }
    (s_lo, s_hi)
}

/// Fixed-point enclosure of `e^q` for `q >= 0` at scale `2^w`.
fn exp_nonneg_fixed(q: &Rational, w: u32) -> (BigInt, BigInt) {
    // r = q / 2^s <= 1/2
    let s = ceil_log2(q) + 1;
    let scaled = q * Rational::new(BigInt::one() << w as usize, BigInt::one() << s as usize);
    let r_lo = scaled.floor().to_integer();
    let r_hi = scaled.ceil().to_integer();
    let (mut lo, mut hi) = exp_small(&r_lo, &r_hi, w);
    let one = BigInt::one() << w as usize;
    for _ in 0..s {
        lo = floor_div(&(&lo * &lo), &one);
        hi = ceil_div(&(&hi * &hi), &one);
    }
    (lo, hi)
}

/// Returns `(lo, hi)` with `lo <= e^q <= hi` and `hi - lo <= 2^-target`.
pub fn exp_enclosure(q: &Rational, target: u32) -> (Rational, Rational) {
    let negative = q.is_negative();
    let a = q.abs();
    // e^a < 2^(3a/2 + 1): magnitude bits of the value we square up to
    let mag = {
        let t = (&a * Rational::new(3.into(), 2.into())).ceil().to_integer();
        t.to_u32().unwrap_or(u32::MAX / 4) + 1
    };
    let s = ceil_log2(&a) + 1;
    let mut w = target + 2 * mag + s + 16;
    loop {
        let (lo, hi) = exp_nonneg_fixed(&a, w);
        let den = BigInt::one() << w as usize;
        let (lo, hi) = if negative {
            // e^-a in [1/hi, 1/lo]; lo >= 2^w so the quotients are well defined
            let den2 = &den * &den;
            let inv_lo = floor_div(&den2, &hi);
            let inv_hi = if lo.is_zero() {
                den2.clone()
            } else {
                ceil_div(&den2, &lo)
            };
            (
                Rational::new(inv_lo, den.clone()),
                Rational::new(inv_hi, den.clone()),
            )
        } else {
            (Rational::new(lo, den.clone()), Rational::new(hi, den.clone()))
        };
        let width = &hi - &lo;
        if width * Rational::from_integer(BigInt::one() << target as usize) <= Rational::one() {
            return (lo, hi);
        }
        w += 32 + w / 4;
    }
}
