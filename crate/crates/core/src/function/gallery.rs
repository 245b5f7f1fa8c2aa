//! The steep test functions used by the extractors.
//!
//! Both `f2(x) = 1/(|x| + x0)` and `f0(x) = e^{1/(x^2 + x0)}` blow up as `x0`
//! shrinks. Their moduli come from a known lower bound on `x0`; that bound is
//! exactly the knowledge a genuine modulus functional would have to recover.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{FnModulus, FnWithModulus, FunctionError, Interval, Modulus, Range, RealFn};
use crate::rational::Rational;
use crate::real::{BitSeq, Real};

/// `3^ceil(u)`, an upper bound for `e^u`.
pub fn exp_upper(u: &Rational) -> Rational {
    let c = u.ceil().to_integer().to_u32().unwrap_or(u32::MAX);
    Rational::from_integer(num_traits::pow(BigInt::from(3), c as usize))
}

/// `f2(x) = 1/(|x| + x0)` on `[0,1]`, modulus `k -> ceil(k / lower^2)`.
pub fn make_f2(x0: &Real, lower: &Rational) -> Result<FnWithModulus, FunctionError> {
    x0.recip_guarded(lower)?;
    Ok(f2_unchecked(x0, lower))
}

/// [`make_f2`] without the guard check; with a bad guard the function is
/// `1/max(|x| + x0, lower)`.
pub fn f2_unchecked(x0: &Real, lower: &Rational) -> FnWithModulus {
    let x0c = x0.clone();
    let lo = lower.clone();
    let f = RealFn::new(move |x| x.abs().add(&x0c).recip_unchecked(&lo));
    let lip = (lower * lower).recip();
    FnWithModulus::new(f, FnModulus::Uniform(Modulus::lipschitz(lip)), Interval::unit()).with_range(
        Range {
            lo: Rational::zero(),
            hi: lower.recip(),
        },
    )
}

/// `f0(x) = e^{1/(x^2 + x0)}` on `[0,1]`.
///
/// With `u = 1/(x^2 + x0) <= U = 1/lower`, `|f0'(x)| = 2|x| u^2 e^u <= 2 U^2 3^ceil(U)`.
pub fn make_f0(x0: &Real, lower: &Rational) -> Result<FnWithModulus, FunctionError> {
    x0.recip_guarded(lower)?;
    Ok(f0_unchecked(x0, lower))
}

pub fn f0_unchecked(x0: &Real, lower: &Rational) -> FnWithModulus {
    let f = f0_fn(x0, lower);
    let u = lower.recip();
    let e = exp_upper(&u);
    let lip = Rational::from_integer(2.into()) * &u * &u * &e;
    FnWithModulus::new(f, FnModulus::Uniform(Modulus::lipschitz(lip)), Interval::unit())
        .with_range(Range {
            lo: Rational::one(),
            hi: e,
        })
}

/// The bare function `x -> e^{1/max(x^2 + x0, lower)}`.
pub fn f0_fn(x0: &Real, lower: &Rational) -> RealFn {
    let x0 = x0.clone();
    let lower = lower.clone();
    let u = lower.recip();
    RealFn::new(move |x| {
        x.mul(x)
            .add(&x0)
            .recip_unchecked(&lower)
            .exp_unchecked(&u)
    })
}

/// `f1(x) = f0(x)` if `h(n) = 0` for all `n <= 1/b([x](1))`, else `f0(x) + 1`,
/// where `b(q) = q` for `q != 0` and `b(0) = 1`.
///
/// The test reads the precision-1 approximation of `x`, so `f1` is
/// discontinuous whenever `h` is not identically zero. A negative bound gives
/// an empty range and the first branch.
pub fn make_f1(f0: &FnWithModulus, h: BitSeq) -> RealFn {
    let f0 = f0.f.clone();
    RealFn::new(move |x| {
        let q = x.approx(1);
        let b = if q.is_zero() { Rational::one() } else { q };
        let bound = b.recip();
        let hit = if bound.is_negative() {
            false
        } else {
            let top = bound.floor().to_integer().to_usize().unwrap_or(usize::MAX);
            (0..=top).any(|n| h.bit(n))
        };
        let v = f0.apply(x);
        if hit {
            v.add(&Real::one())
        } else {
            v
        }
    })
}
