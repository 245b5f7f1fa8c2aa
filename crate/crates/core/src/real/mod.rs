//! Real numbers as fast-converging Cauchy streams of exact rationals.
//!
//! A [`Real`] is a pure map `n -> q_n` with `|q_n - q_{n+i}| <= 2^-n` for all
//! `n, i`. Every constructor in this module either proves that bound by its
//! precision bookkeeping or goes through [`hat_regularize`], which truncates a
//! raw stream at its first violation of the stricter consecutive-gap rule.
//!
//! Internal operations are written so that their output satisfies the
//! stronger `|q_n - x| <= 2^-(n+1)`, while only assuming `|q_m - x| <= 2^-m`
//! of their inputs.

mod exp;

use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::rational::{
    ceil_log2, max_rat, min_rat, pow2, pow2_neg, round_dyadic, Rational,
};

pub use exp::exp_enclosure;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RealError {
    #[error("guard violated: approximation {approx} at precision {precision} certifies a value outside the guard {guard}")]
    GuardViolation {
        approx: Rational,
        precision: u32,
        guard: Rational,
    },
    #[error("binary expansion needs a rational in [0, 1], got {0}")]
    OutOfRange(Rational),
}

type Stream = dyn Fn(u32) -> Rational + Send + Sync;

/// A real number given by its approximation stream.
#[derive(Clone)]
pub struct Real {
    stream: Arc<Stream>,
}

impl fmt::Debug for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Real").finish_non_exhaustive()
    }
}

/// Three-valued comparison at an explicit precision.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Comparison {
    Less,
    Greater,
    WithinTolerance,
}

/// A total bit sequence `n -> {0, 1}`.
#[derive(Clone)]
pub struct BitSeq {
    bits: Arc<dyn Fn(usize) -> bool + Send + Sync>,
}

impl fmt::Debug for BitSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix: String = (0..16).map(|i| if self.bit(i) { '1' } else { '0' }).collect();
        write!(f, "BitSeq({prefix}...)")
    }
}

impl BitSeq {
    pub fn new(bits: impl Fn(usize) -> bool + Send + Sync + 'static) -> Self {
        BitSeq {
            bits: Arc::new(bits),
        }
    }

    pub fn zeros() -> Self {
        BitSeq::new(|_| false)
    }

    pub fn ones() -> Self {
        BitSeq::new(|_| true)
    }

    /// The sequence that is 1 exactly at `m`.
    pub fn indicator(m: usize) -> Self {
        BitSeq::new(move |n| n == m)
    }

    /// A finite prefix padded with zeros.
    pub fn from_prefix(prefix: &[bool]) -> Self {
        let p = prefix.to_vec();
        BitSeq::new(move |n| p.get(n).copied().unwrap_or(false))
    }

    pub fn bit(&self, n: usize) -> bool {
        (self.bits)(n)
    }
}

impl Real {
    /// Wraps a stream the caller guarantees to be fast-Cauchy.
    pub fn from_stream(stream: impl Fn(u32) -> Rational + Send + Sync + 'static) -> Self {
        Real {
            stream: Arc::new(stream),
        }
    }

    pub fn from_rational(q: Rational) -> Self {
        Real::from_stream(move |_| q.clone())
    }

    pub fn from_integer(n: i64) -> Self {
        Real::from_rational(Rational::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> Self {
        Real::from_integer(0)
    }

    pub fn one() -> Self {
        Real::from_integer(1)
    }

    /// The `n`-th approximation `[x](n)`.
    pub fn approx(&self, n: u32) -> Rational {
        (self.stream)(n)
    }

    /// Rational lower and upper bounds from the `n`-th approximation.
    pub fn enclosure(&self, n: u32) -> (Rational, Rational) {
        let q = self.approx(n);
        let e = pow2_neg(n);
        (&q - &e, &q + &e)
    }

    /// A rational `B` with `|x| <= B`, read off the zeroth approximation.
    pub fn magnitude_bound(&self) -> Rational {
        self.approx(0).abs() + Rational::one()
    }

    pub fn add(&self, other: &Real) -> Real {
        let (x, y) = (self.clone(), other.clone());
        Real::from_stream(move |n| x.approx(n + 2) + y.approx(n + 2))
    }

    pub fn sub(&self, other: &Real) -> Real {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Real {
        let x = self.clone();
        Real::from_stream(move |n| -x.approx(n))
    }

    pub fn abs(&self) -> Real {
        let x = self.clone();
        Real::from_stream(move |n| x.approx(n).abs())
    }

    pub fn min(&self, other: &Real) -> Real {
        let (x, y) = (self.clone(), other.clone());
        Real::from_stream(move |n| min_rat(&x.approx(n), &y.approx(n)))
    }

    pub fn max(&self, other: &Real) -> Real {
        let (x, y) = (self.clone(), other.clone());
        Real::from_stream(move |n| max_rat(&x.approx(n), &y.approx(n)))
    }

    /// Product. The precision shift for each factor comes from an a-priori
    /// magnitude bound of the other, read off `approx(., 0) + 1`.
    pub fn mul(&self, other: &Real) -> Real {
        let (x, y) = (self.clone(), other.clone());
        let shift_x = ceil_log2(&y.magnitude_bound());
        let shift_y = ceil_log2(&(x.magnitude_bound() + Rational::one()));
        Real::from_stream(move |n| {
            let p = x.approx(n + 3 + shift_x) * y.approx(n + 3 + shift_y);
            round_dyadic(&p, n + 2)
        })
    }

    pub fn scale(&self, c: &Rational) -> Real {
        if c.is_zero() {
            return Real::zero();
        }
        let x = self.clone();
        let c = c.clone();
        let shift = ceil_log2(&c);
        Real::from_stream(move |n| round_dyadic(&(&c * x.approx(n + 2 + shift)), n + 2))
    }

    /// `1/x` for `x >= lower > 0`.
    ///
    /// The guard is checked once, at the precision where `2^-p <= lower/4`.
    /// Past the check the stream clamps approximations to `lower`, so an
    /// ill-guarded input still yields a total real (`1/max(x, lower)`).
    pub fn recip_guarded(&self, lower: &Rational) -> Result<Real, RealError> {
        assert!(lower.is_positive(), "reciprocal guard must be positive");
        let inv_bits = ceil_log2(&lower.recip());
        let check = inv_bits + 2;
        let q = self.approx(check);
        if &q + pow2_neg(check) < *lower {
            return Err(RealError::GuardViolation {
                approx: q,
                precision: check,
                guard: lower.clone(),
            });
        }
        Ok(self.recip_unchecked(lower))
    }

    /// `1/max(x, lower)` without the construction-time guard check.
    pub fn recip_unchecked(&self, lower: &Rational) -> Real {
        let x = self.clone();
        let lower = lower.clone();
        let shift = 2 * ceil_log2(&lower.recip());
        Real::from_stream(move |n| {
            let q = max_rat(&x.approx(n + 3 + shift), &lower);
            round_dyadic(&q.recip(), n + 2)
        })
    }

    /// `x / y` for `y >= lower > 0`.
    pub fn div_guarded(&self, y: &Real, lower: &Rational) -> Result<Real, RealError> {
        Ok(self.mul(&y.recip_guarded(lower)?))
    }

    /// `e^x` for `|x| <= bound`.
    pub fn exp(&self, bound: &Rational) -> Result<Real, RealError> {
        let bound = bound.abs();
        let check = 4;
        let q = self.approx(check);
        if q.abs() - pow2_neg(check) > bound {
            return Err(RealError::GuardViolation {
                approx: q,
                precision: check,
                guard: bound,
            });
        }
        Ok(self.exp_unchecked(&bound))
    }

    /// `e^clamp(x, -bound, bound)`.
    pub fn exp_unchecked(&self, bound: &Rational) -> Real {
        let x = self.clone();
        let bound = bound.abs();
        // e^B <= 3^ceil(B)
        let lip = {
            let c = bound.ceil().to_integer();
            let c: u32 = c.try_into().unwrap_or(u32::MAX);
            Rational::from_integer(num_traits::pow(BigInt::from(3), c as usize))
        };
        let shift = ceil_log2(&lip);
        let neg_bound = -bound.clone();
        Real::from_stream(move |n| {
            let q = x.approx(n + 3 + shift);
            let q = max_rat(&min_rat(&q, &bound), &neg_bound);
            let (lo, hi) = exp_enclosure(&q, n + 3);
            let mid = (lo + hi) / Rational::from_integer(BigInt::from(2));
            round_dyadic(&mid, n + 3)
        })
    }

    /// `sqrt(max(x, 0))`.
    pub fn sqrt_nonneg(&self) -> Real {
        let x = self.clone();
        Real::from_stream(move |n| {
            let q = x.approx(2 * n + 6);
            if !q.is_positive() {
                return Rational::zero();
            }
            let w = n + 4;
            let scaled = q * pow2(2 * w);
            let floor = scaled.floor().to_integer();
            let floor: BigUint = floor.to_biguint().unwrap_or_default();
            let r = floor.sqrt();
            Rational::new(BigInt::from(r), BigInt::one() << w as usize)
        })
    }

    pub fn compare(&self, other: &Real, n: u32) -> Comparison {
        compare(self, other, n)
    }
}

/// Regularizes an arbitrary rational stream into a [`Real`].
///
/// `output(n) = raw(m(n))` where `m(n)` is the largest `m <= n` such that
/// `|raw(k) - raw(k+1)| <= 2^-(k+2)` for every `k < m`.
pub fn hat_regularize(raw: impl Fn(u32) -> Rational + Send + Sync + 'static) -> Real {
    Real::from_stream(move |n| {
        let mut prev = raw(0);
        for k in 0..n {
            let next = raw(k + 1);
            if (&prev - &next).abs() > pow2_neg(k + 2) {
                return prev;
            }
            prev = next;
        }
        prev
    })
}

/// `Less` iff `approx(x, n) + 2^-(n-1) < approx(y, n)`, symmetrically for
/// `Greater`, otherwise `WithinTolerance` (then `|x - y| <= 2^-(n-2)`).
pub fn compare(x: &Real, y: &Real, n: u32) -> Comparison {
    let a = x.approx(n);
    let b = y.approx(n);
    let slack = pow2_neg(n) * Rational::from_integer(BigInt::from(2));
    if &a + &slack < b {
        Comparison::Less
    } else if &b + &slack < a {
        Comparison::Greater
    } else {
        Comparison::WithinTolerance
    }
}

/// Equality up to the representation tolerance at `n`:
/// `|approx(x,n) - approx(y,n)| <= 2^-(n-1)`.
pub fn eq_upto(x: &Real, y: &Real, n: u32) -> bool {
    let d = (x.approx(n) - y.approx(n)).abs();
    d <= pow2_neg(n) * Rational::from_integer(BigInt::from(2))
}

/// `sum_n h(n) / 2^n`, approximated by the partial sum through index `n + 2`.
pub fn real_from_bits(h: &BitSeq) -> Real {
    let h = h.clone();
    Real::from_stream(move |n| {
        let top = n as usize + 2;
        let mut num = BigInt::zero();
        for k in 0..=top {
            if h.bit(k) {
                num += BigInt::one() << (top - k);
            }
        }
        Rational::new(num, BigInt::one() << top)
    })
}

/// Binary digits of a rational in `[0, 1]`; bit `i` is the coefficient of
/// `2^-(i+1)`. Dyadic rationals get the terminating expansion, except `1`,
/// whose only expansion in this indexing is all ones.
pub fn binary_expansion(x: &Rational) -> Result<BitSeq, RealError> {
    if x.is_negative() || *x > Rational::one() {
        return Err(RealError::OutOfRange(x.clone()));
    }
    if x.is_one() {
        return Ok(BitSeq::ones());
    }
    let num = x.numer().clone();
    let den = x.denom().clone();
    Ok(BitSeq::new(move |i| {
        let scaled = (&num << (i + 1)) / &den;
        (scaled & BigInt::one()).is_one()
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn assert_fast_cauchy(x: &Real, max_n: u32) {
        for n in 0..=max_n {
            let q = x.approx(n);
            for i in 1..=max_n {
                let d = (&q - x.approx(n + i)).abs();
                assert!(d <= pow2_neg(n), "gap violated at n={n}, i={i}");
            }
        }
    }

    #[test]
    fn hat_is_identity_on_constant() {
        let x = hat_regularize(|_| rat(1, 3));
        for n in 0..20 {
            assert_eq!(x.approx(n), rat(1, 3));
        }
    }

    #[test]
    fn hat_freezes_at_first_violation() {
        let x = hat_regularize(|n| if n == 0 { int(0) } else { int(5) });
        for n in 0..20 {
            assert_eq!(x.approx(n), int(0));
        }
    }

    #[test]
    fn hat_keeps_geometric_partial_sums() {
        // q_n = sum_{k<=n} 2^-(k+2): consecutive gaps are exactly 2^-(k+3)
        let raw = |n: u32| rat(1, 2) - pow2_neg(n + 2);
        let x = hat_regularize(raw);
        for n in 0..=64 {
            assert_eq!(x.approx(n), raw(n));
        }
        assert_fast_cauchy(&x, 32);
    }

    #[test]
    fn compare_examples() {
        assert_eq!(compare(&Real::zero(), &Real::one(), 4), Comparison::Less);
        let tiny = Real::from_rational(pow2_neg(10));
        assert_eq!(compare(&tiny, &Real::zero(), 4), Comparison::WithinTolerance);
        assert_eq!(compare(&tiny, &Real::zero(), 16), Comparison::Greater);
        assert_eq!(compare(&tiny, &tiny, 7), Comparison::WithinTolerance);
    }

    #[test]
    fn bits_to_real() {
        assert_eq!(real_from_bits(&BitSeq::zeros()).approx(9), int(0));
        let x = real_from_bits(&BitSeq::indicator(3));
        assert!((x.approx(5) - rat(1, 8)).abs() <= pow2_neg(5));
        let two = real_from_bits(&BitSeq::ones());
        for n in 0..=32 {
            assert!((two.approx(n) - int(2)).abs() <= pow2_neg(n));
        }
        assert_fast_cauchy(&two, 24);
    }

    #[test]
    fn recip_examples() {
        let half = Real::from_integer(2).recip_guarded(&int(1)).unwrap();
        assert!((half.approx(20) - rat(1, 2)).abs() <= pow2_neg(20));
        let x = real_from_bits(&BitSeq::indicator(4));
        let sixteen = x.recip_guarded(&pow2_neg(4)).unwrap();
        assert!((sixteen.approx(20) - int(16)).abs() <= pow2_neg(20));
        let y = real_from_bits(&BitSeq::new(|n| n == 4 || n == 8));
        let r = y.recip_guarded(&pow2_neg(4)).unwrap();
        assert!((r.approx(20) - rat(256, 17)).abs() <= pow2_neg(20));
    }

    #[test]
    fn recip_reports_guard_violation() {
        let err = Real::from_rational(rat(1, 100)).recip_guarded(&rat(1, 2));
        assert!(matches!(err, Err(RealError::GuardViolation { .. })));
    }

    #[test]
    fn exp_examples() {
        let one = Real::zero().exp(&int(1)).unwrap();
        assert!((one.approx(30) - int(1)).abs() <= pow2_neg(30));
        let big = Real::from_integer(16).exp(&int(16)).unwrap();
        // e^16 = 8886110.520507872636763...
        let oracle = rat(8_886_110_520_507_873, 1_000_000_000);
        assert!((big.approx(10) - oracle).abs() <= pow2_neg(10));
        assert!(Real::from_integer(5).exp(&int(1)).is_err());
    }

    #[test]
    fn sqrt_examples() {
        assert_eq!(Real::zero().sqrt_nonneg().approx(10), int(0));
        let h = Real::from_rational(rat(1, 4)).sqrt_nonneg();
        assert!((h.approx(20) - rat(1, 2)).abs() <= pow2_neg(20));
        let r2 = Real::from_integer(2).sqrt_nonneg();
        let q = r2.approx(20);
        let e = pow2_neg(20);
        // q - e <= sqrt 2 <= q + e, checked by squaring
        assert!((&q - &e) * (&q - &e) <= int(2));
        assert!((&q + &e) * (&q + &e) >= int(2));
        assert_fast_cauchy(&r2, 16);
    }

    #[test]
    fn binary_expansion_examples() {
        let half = binary_expansion(&rat(1, 2)).unwrap();
        assert!(half.bit(0));
        assert!((1..40).all(|i| !half.bit(i)));
        let third = binary_expansion(&rat(1, 3)).unwrap();
        for i in 0..40 {
            assert_eq!(third.bit(i), i % 2 == 1);
        }
        assert!(binary_expansion(&rat(3, 2)).is_err());
        assert!(binary_expansion(&rat(-1, 2)).is_err());
        let one = binary_expansion(&int(1)).unwrap();
        assert!((0..10).all(|i| one.bit(i)));
    }

    #[test]
    fn arithmetic_examples() {
        let a = Real::from_rational(rat(1, 3)).add(&Real::from_rational(rat(1, 6)));
        let half = Real::from_rational(rat(1, 2));
        for n in 0..30 {
            assert!(eq_upto(&a, &half, n));
        }
        let x = Real::from_rational(rat(7, 5));
        let z = x.mul(&Real::zero());
        for n in 0..20 {
            assert_eq!(z.approx(n), int(0));
        }
        assert_fast_cauchy(&x.mul(&x).sub(&x.abs()).max(&x.neg()), 16);
    }
}
