//! Search functionals extracted from modulus functionals (Grilliot's trick).
//!
//! Each extractor turns `f: N -> N` into the real `x0 = sum_{f(n)=0} 2^-n`,
//! builds a steep function from `x0`, asks the modulus functional one
//! question, and converts the answer `N` into a search bound `B(N)`. If `f`
//! has a zero, its least zero `z` satisfies `2^-z <= x0 <= 2^(1-z)`, and a
//! valid modulus forces `z <= B(N)`.
//!
//! # Bounds
//!
//! **Pointwise continuity** (`f2(x) = 1/(|x| + x0)`, `N = Xi(f2, 1, 0)`).
//! With `y = 1/(2N)`, validity gives `f2(0) - f2(y) = y / (x0 (x0 + y)) < 1`,
//! i.e. `y < x0^2 + x0 y`. Using `x0 <= 2^(1-z)` and multiplying by
//! `2N 4^z`: `4^z < 8N + 2^(z+1)`. So `B(N) = max { n : 4^n < 2^(n+1) + 8N }`.
//!
//! **Differentiability at 0** (`f0(x) = e^(1/(x^2 + x0))`,
//! `N = XiD(f0, 1)`). `f0` is even, so the difference quotients at `±sqrt(x0)`
//! differ by `D = 2 (e^t - e^(t/2)) sqrt(t)` with `t = 1/x0`. For `t >= 1`
//! both factors increase, so `D >= 2 (e - e^(1/2)) > 2.13 > 1`. Validity
//! then rules out `sqrt(x0) < 1/N`, hence `x0 >= 1/N^2`, and with
//! `x0 <= 2^(1-z)`: `z <= 1 + floor(log2 N^2)`. (For `z = 0` any `B >= 0`
//! works, and `z >= 1` gives `x0 <= 1`, i.e. `t >= 1`.)
//!
//! **Riemann integration** (`N = kappa(f0, 1)`). Two partitions with mesh
//! `< 1/N`, first cell `[0, sqrt(x0)]` tagged at `0` and at `sqrt(x0)`,
//! differ by `R = (e^t - e^(t/2)) / sqrt(t)`. `d/dt ln R > 1 - 1/(2t) > 0` for
//! `t >= 1`, so `R >= e - e^(1/2) > 1.06 > 1` and the same bound follows.

use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::function::gallery::{exp_upper, f0_fn};
use crate::function::{Nat, RealFn};
use crate::rational::{ceil_nat, pow2_neg, Rational};
use crate::real::{real_from_bits, BitSeq, Real};

/// Reciprocal floor of the probe functions, so they stay total when `f` has
/// no zero (`x0 = 0`). They coincide with `f2`, `f0` whenever `x0 >= 2^-64`.
pub const PROBE_DEPTH: u32 = 64;

pub type NatSeq = Arc<dyn Fn(u64) -> u64 + Send + Sync>;

type MpcFn = dyn Fn(&RealFn, u64, &Real) -> Nat + Send + Sync;
type ModulusFunctionalFn = dyn Fn(&RealFn, u64) -> Nat + Send + Sync;

/// `Xi(f, k, x)`: a modulus of pointwise continuity of `f` at `x`.
#[derive(Clone)]
pub struct MpcFunctional(Arc<MpcFn>);

/// `Xi(f, k)`: a modulus of differentiability of `f` at `0`.
#[derive(Clone)]
pub struct DifFunctional(Arc<ModulusFunctionalFn>);

/// `kappa(f, k)`: a modulus of Riemann integration of `f` on `[0, 1]`.
#[derive(Clone)]
pub struct RieFunctional(Arc<ModulusFunctionalFn>);

impl MpcFunctional {
    pub fn new(f: impl Fn(&RealFn, u64, &Real) -> Nat + Send + Sync + 'static) -> Self {
        MpcFunctional(Arc::new(f))
    }

    pub fn query(&self, f: &RealFn, k: u64, x: &Real) -> Nat {
        (self.0)(f, k, x)
    }
}

impl DifFunctional {
    pub fn new(f: impl Fn(&RealFn, u64) -> Nat + Send + Sync + 'static) -> Self {
        DifFunctional(Arc::new(f))
    }

    pub fn query(&self, f: &RealFn, k: u64) -> Nat {
        (self.0)(f, k)
    }
}

impl RieFunctional {
    pub fn new(f: impl Fn(&RealFn, u64) -> Nat + Send + Sync + 'static) -> Self {
        RieFunctional(Arc::new(f))
    }

    pub fn query(&self, f: &RealFn, k: u64) -> Nat {
        (self.0)(f, k)
    }
}

/// `found` is a zero of the input whenever present; `search_bound` is the
/// largest index searched.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MuResult {
    pub found: Option<u64>,
    pub search_bound: u64,
}

/// Stabilised composition: `G(x) = F(x, max phi(x))`. When `phi(x)` lists a
/// point from which `F(x, .)` is constant, `G(x) = F(x, n)` for every larger
/// `n`.
pub fn omega_ca<X: ?Sized>(
    f: impl Fn(&X, u64) -> u64,
    phi: impl Fn(&X) -> Vec<u64>,
) -> impl Fn(&X) -> u64 {
    move |x| f(x, phi(x).into_iter().max().unwrap_or(0))
}

/// `x0 = sum_{f(n) = 0} 2^-n`.
pub fn zero_set_real(f: &NatSeq) -> Real {
    let f = f.clone();
    real_from_bits(&BitSeq::new(move |n| f(n as u64) == 0))
}

fn probe_floor() -> Rational {
    pow2_neg(PROBE_DEPTH)
}

/// `x -> 1/(|x| + x0)`, floored as described at [`PROBE_DEPTH`].
pub fn f2_probe(x0: &Real) -> RealFn {
    let x0 = x0.clone();
    let floor = probe_floor();
    RealFn::new(move |x| x.abs().add(&x0).recip_unchecked(&floor))
}

/// `x -> e^(1/(x^2 + x0))`, floored as described at [`PROBE_DEPTH`]. The
/// function is assembled on first use, since its exponent bound is huge.
pub fn f0_probe(x0: &Real) -> RealFn {
    let x0 = x0.clone();
    RealFn::new(move |x| f0_fn(&x0, &probe_floor()).apply(x))
}

fn scan(f: &NatSeq, bound: u64) -> MuResult {
    MuResult {
        found: (0..=bound).find(|&n| f(n) == 0),
        search_bound: bound,
    }
}


/// `max { n : 4^n < 2^(n+1) + 8N }`.
pub fn mpc_bound(n: &Nat) -> u64 {
    let rhs = |m: u64| (BigUint::one() << (m as usize + 1)) + n * 8u32;
    let mut b = 0u64;
    while (BigUint::one() << (2 * (b as usize + 1))) < rhs(b + 1) {
        b += 1;
    }
    b
}

/// `1 + floor(log2 N^2)`, with `N = 0` read as `1`.
pub fn dif_bound(n: &Nat) -> u64 {
    let n = if n.is_zero() { BigUint::one() } else { n.clone() };
    (&n * &n).bits()
}

/// Same bound as [`dif_bound`].
pub fn rie_bound(n: &Nat) -> u64 {
    dif_bound(n)
}

/// Search functional from a pointwise-continuity modulus functional.
pub fn mu_from_mpc(xi: &MpcFunctional, f: &NatSeq) -> MuResult {
    let x0 = zero_set_real(f);
    let n = xi.query(&f2_probe(&x0), 1, &Real::zero());
    scan(f, mpc_bound(&n))
}

/// Search functional from a differentiability modulus functional.
pub fn mu_from_dif(xi: &DifFunctional, f: &NatSeq) -> MuResult {
    let x0 = zero_set_real(f);
    let n = xi.query(&f0_probe(&x0), 1);
    scan(f, dif_bound(&n))
}

/// Search functional from a Riemann-integration modulus functional.
pub fn mu_from_rie(kappa: &RieFunctional, f: &NatSeq) -> MuResult {
    let x0 = zero_set_real(f);
    let n = kappa.query(&f0_probe(&x0), 1);
    scan(f, rie_bound(&n))
}

/// Oracle `Xi` for the `f2` family with `x0 >= lower`: `ceil(k / lower^2)`,
/// since `f2` is `1/lower^2`-Lipschitz.
///
/// Test infrastructure: it ignores its function argument and is only valid
/// on the family it was built for.
pub fn oracle_mpc(lower: &Rational) -> MpcFunctional {
    let l2 = (lower * lower).recip();
    MpcFunctional::new(move |_, k, _| {
        ceil_nat(&(&l2 * Rational::from_integer(k.into()))).max(Nat::one())
    })
}

/// Oracle modulus of differentiability at `0` for the `f0` family.
///
/// Difference quotients are values of `f0'` at intermediate points, which are
/// less than `2/N` apart, and on `[-1, 1]`
/// `|f0''| <= E (4U^4 + 8U^3 + 2U^2)` with `U = 1/lower`, `E = 3^ceil(U)`.
pub fn oracle_dif(lower: &Rational) -> DifFunctional {
    let u = lower.recip();
    let e = exp_upper(&u);
    let u2 = &u * &u;
    let m2 = &e
        * (Rational::from_integer(4.into()) * &u2 * &u2
            + Rational::from_integer(8.into()) * &u2 * &u
            + Rational::from_integer(2.into()) * &u2);
    let c = ceil_nat(&(Rational::from_integer(2.into()) * m2));
    DifFunctional::new(move |_, k| &c * Nat::from(k) + Nat::one())
}

/// Oracle modulus of Riemann integration for the `f0` family: with
/// `|f0'| <= L = 2 U^2 3^ceil(U)`, two Riemann sums of mesh `< 1/N` differ by
/// less than `2L/N`.
pub fn oracle_rie(lower: &Rational) -> RieFunctional {
    let u = lower.recip();
    let l = Rational::from_integer(2.into()) * &u * &u * exp_upper(&u);
    let c = ceil_nat(&(Rational::from_integer(2.into()) * l));
    RieFunctional::new(move |_, k| (&c * Nat::from(k)).max(Nat::one()))
}

/// Extends a finite prefix by `1`s.
pub fn seq_from_prefix(prefix: &[u64]) -> NatSeq {
    let p = prefix.to_vec();
    Arc::new(move |n| p.get(n as usize).copied().unwrap_or(1))
}

/// Least zero of a prefix extended by `1`s.
pub fn least_zero(prefix: &[u64]) -> Option<u64> {
    prefix.iter().position(|&v| v == 0).map(|i| i as u64)
}

/// One failure found by [`mu_check`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MuViolation {
    pub prefix: Vec<u64>,
    pub result: MuResult,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MuReport {
    pub checked: usize,
    pub violations: Vec<MuViolation>,
}

/// Checks the search contract on each prefix (extended by `1`s): whenever the
/// sequence has a zero, `found` must be one.
pub fn mu_check(mu: &dyn Fn(&NatSeq) -> MuResult, suite: &[Vec<u64>]) -> MuReport {
    let mut report = MuReport::default();
    for prefix in suite {
        let f = seq_from_prefix(prefix);
        let r = mu(&f);
        report.checked += 1;
        let has_zero = least_zero(prefix).is_some();
        let ok = !has_zero || r.found.is_some_and(|n| f(n) == 0);
        if !ok {
            report.violations.push(MuViolation {
                prefix: prefix.clone(),
                result: r,
            });
        }
    }
    report
}
