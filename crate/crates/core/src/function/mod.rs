//! Real functions paired with modulus data.
//!
//! A modulus of uniform continuity `g` promises `|x - y| < 1/g(k)` implies
//! `|f(x) - f(y)| < 1/k`. Moduli are natural-number valued and may be
//! astronomically large (the steep gallery functions need that), so they map
//! [`Nat`] to [`Nat`]. Every combinator here preserves monotonicity in `k`.

pub mod gallery;
pub mod poly;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::rational::{ceil_nat, floor_nat, max_rat, min_rat, nat_to_rat, Rational};
use crate::real::{compare, Comparison, Real, RealError};

pub use gallery::{make_f0, make_f1, make_f2};
pub use poly::Poly;

pub type Nat = BigUint;

/// Precision used to certify that an argument lies outside a domain.
pub const DOMAIN_CHECK_PRECISION: u32 = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FunctionError {
    #[error("argument certified outside the domain [{lo}, {hi}]")]
    DomainViolation { lo: Rational, hi: Rational },
    #[error("incompatible domains: {0}")]
    IncompatibleDomains(String),
    #[error("operation needs a uniform modulus, found a {0} modulus")]
    WrongModulusKind(&'static str),
    #[error("empty interval [{lo}, {hi}]")]
    EmptyInterval { lo: Rational, hi: Rational },
    #[error(transparent)]
    Real(#[from] RealError),
}

/// A closed rational interval `[lo, hi]` with `lo < hi`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Result<Self, FunctionError> {
        if lo >= hi {
            return Err(FunctionError::EmptyInterval { lo, hi });
        }
        Ok(Interval { lo, hi })
    }

    pub fn unit() -> Self {
        Interval {
            lo: Rational::zero(),
            hi: Rational::one(),
        }
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn contains(&self, q: &Rational) -> bool {
        &self.lo <= q && q <= &self.hi
    }
}

/// A range enclosure that may be a single point (constants).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Range {
    pub lo: Rational,
    pub hi: Rational,
}

impl Range {
    pub fn point(c: Rational) -> Self {
        Range {
            lo: c.clone(),
            hi: c,
        }
    }

    pub fn magnitude(&self) -> Rational {
        max_rat(&self.lo.abs(), &self.hi.abs())
    }

    fn add(&self, o: &Range) -> Range {
        Range {
            lo: &self.lo + &o.lo,
            hi: &self.hi + &o.hi,
        }
    }

    fn mul(&self, o: &Range) -> Range {
        let c = [
            &self.lo * &o.lo,
            &self.lo * &o.hi,
            &self.hi * &o.lo,
            &self.hi * &o.hi,
        ];
        let lo = c.iter().fold(c[0].clone(), |m, v| min_rat(&m, v));
        let hi = c.iter().fold(c[0].clone(), |m, v| max_rat(&m, v));
        Range { lo, hi }
    }

    fn scale(&self, c: &Rational) -> Range {
        self.mul(&Range::point(c.clone()))
    }
}

type RealMap = dyn Fn(&Real) -> Real + Send + Sync;
type RationalMap = dyn Fn(&Rational) -> Rational + Send + Sync;

/// A map on reals that sends equal reals to equal reals.
///
/// Functions built from exact rational operations also carry an exact
/// rational evaluator, used on rational arguments; polynomials keep their
/// coefficients as well.
#[derive(Clone)]
pub struct RealFn {
    real: Arc<RealMap>,
    exact: Option<Arc<RationalMap>>,
    poly: Option<Arc<Poly>>,
}

impl fmt::Debug for RealFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("RealFn")
            .field("exact", &self.exact.is_some())
            .field("poly", &self.poly)
            .finish_non_exhaustive()
    }
}

fn lift2(
    a: &Option<Arc<RationalMap>>,
    b: &Option<Arc<RationalMap>>,
    op: impl Fn(Rational, &Rational, &RationalMap) -> Rational + Send + Sync + 'static,
) -> Option<Arc<RationalMap>> {
    let (a, b) = (a.clone()?, b.clone()?);
    Some(Arc::new(move |q: &Rational| op(a(q), q, &*b)))
}

impl RealFn {
    pub fn new(f: impl Fn(&Real) -> Real + Send + Sync + 'static) -> Self {
        RealFn {
            real: Arc::new(f),
            exact: None,
            poly: None,
        }
    }

    /// A function with both a real and an exact rational evaluator. The two
    /// must denote the same function.
    pub fn with_exact(
        f: impl Fn(&Real) -> Real + Send + Sync + 'static,
        exact: impl Fn(&Rational) -> Rational + Send + Sync + 'static,
    ) -> Self {
        RealFn {
            real: Arc::new(f),
            exact: Some(Arc::new(exact)),
            poly: None,
        }
    }

    pub fn polynomial(p: Poly) -> Self {
        let p = Arc::new(p);
        let (p1, p2) = (p.clone(), p.clone());
        RealFn {
            real: Arc::new(move |x| p1.eval_real(x)),
            exact: Some(Arc::new(move |q| p2.eval(q))),
            poly: Some(p),
        }
    }

    pub fn identity() -> Self {
        RealFn::polynomial(Poly::x())
    }

    pub fn constant(c: Rational) -> Self {
        RealFn::polynomial(Poly::constant(c))
    }

    pub fn apply(&self, x: &Real) -> Real {
        (self.real)(x)
    }

    /// Evaluates at a rational point, exactly when possible.
    pub fn apply_rational(&self, q: &Rational) -> Real {
        match &self.exact {
            Some(e) => Real::from_rational(e(q)),
            None => self.apply(&Real::from_rational(q.clone())),
        }
    }

    pub fn exact_value(&self, q: &Rational) -> Option<Rational> {
        self.exact.as_ref().map(|e| e(q))
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    pub fn as_poly(&self) -> Option<&Poly> {
        self.poly.as_deref()
    }

    pub fn add(&self, g: &RealFn) -> RealFn {
        if let (Some(a), Some(b)) = (&self.poly, &g.poly) {
            return RealFn::polynomial(a.add(b));
        }
        let (f1, g1) = (self.real.clone(), g.real.clone());
        RealFn {
            real: Arc::new(move |x| f1(x).add(&g1(x))),
            exact: lift2(&self.exact, &g.exact, |a, q, b| a + b(q)),
            poly: None,
        }
    }

    pub fn mul(&self, g: &RealFn) -> RealFn {
        if let (Some(a), Some(b)) = (&self.poly, &g.poly) {
            return RealFn::polynomial(a.mul(b));
        }
        let (f1, g1) = (self.real.clone(), g.real.clone());
        RealFn {
            real: Arc::new(move |x| f1(x).mul(&g1(x))),
            exact: lift2(&self.exact, &g.exact, |a, q, b| a * b(q)),
            poly: None,
        }
    }

    pub fn scale(&self, c: &Rational) -> RealFn {
        if let Some(a) = &self.poly {
            return RealFn::polynomial(a.scale(c));
        }
        let f1 = self.real.clone();
        let c1 = c.clone();
        let exact = self.exact.as_ref().map(|a| {
            let a = a.clone();
            let c = c.clone();
            Arc::new(move |q: &Rational| &c * a(q)) as Arc<RationalMap>
        });
        RealFn {
            real: Arc::new(move |x| f1(x).scale(&c1)),
            exact,
            poly: None,
        }
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &RealFn) -> RealFn {
        if let (Some(a), Some(b)) = (&self.poly, &inner.poly) {
            return RealFn::polynomial(a.compose(b));
        }
        let (o, i) = (self.real.clone(), inner.real.clone());
        let exact = match (&self.exact, &inner.exact) {
            (Some(a), Some(b)) => {
                let (a, b) = (a.clone(), b.clone());
                Some(Arc::new(move |q: &Rational| a(&b(q))) as Arc<RationalMap>)
            }
            _ => None,
        };
        RealFn {
            real: Arc::new(move |x| o(&i(x))),
            exact,
            poly: None,
        }
    }

    /// Post-composes a real operation; the result has no exact evaluator.
    pub fn map_real(&self, op: impl Fn(&Real) -> Real + Send + Sync + 'static) -> RealFn {
        let f1 = self.real.clone();
        RealFn::new(move |x| op(&f1(x)))
    }

    /// Post-composes an operation available both on reals and exactly on
    /// rationals.
    pub fn map_exact(
        &self,
        op: impl Fn(&Real) -> Real + Send + Sync + 'static,
        exact: impl Fn(&Rational) -> Rational + Send + Sync + 'static,
    ) -> RealFn {
        let f1 = self.real.clone();
        let e = self.exact.clone().map(|e1| {
            Arc::new(move |q: &Rational| exact(&e1(q))) as Arc<RationalMap>
        });
        RealFn {
            real: Arc::new(move |x| op(&f1(x))),
            exact: e,
            poly: None,
        }
    }

    /// Pointwise combination of two functions by an operation available
    /// both on reals and exactly on rationals.
    pub fn zip_exact(
        &self,
        g: &RealFn,
        op: impl Fn(&Real, &Real) -> Real + Send + Sync + 'static,
        exact: impl Fn(&Rational, &Rational) -> Rational + Send + Sync + 'static,
    ) -> RealFn {
        let (f1, g1) = (self.real.clone(), g.real.clone());
        RealFn {
            real: Arc::new(move |x| op(&f1(x), &g1(x))),
            exact: lift2(&self.exact, &g.exact, move |a, q, b| exact(&a, &b(q))),
            poly: None,
        }
    }
}

type NatMap = dyn Fn(&Nat) -> Nat + Send + Sync;

/// A natural-valued modulus `k -> N`, monotone in `k`.
#[derive(Clone)]
pub struct Modulus(Arc<NatMap>);

impl fmt::Debug for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Modulus(g(1)={}, g(10)={})", self.at(1), self.at(10))
    }
}

impl Modulus {
    /// Wraps a caller-supplied map, which must be monotone in `k`.
    pub fn new(g: impl Fn(&Nat) -> Nat + Send + Sync + 'static) -> Self {
        Modulus(Arc::new(g))
    }

    /// `g(k) = max(1, ceil(L * k))`, valid for `L`-Lipschitz functions.
    pub fn lipschitz(l: Rational) -> Self {
        let l = l.abs();
        Modulus::new(move |k| {
            let v = ceil_nat(&(&l * nat_to_rat(k)));
            if v.is_zero() {
                Nat::one()
            } else {
                v
            }
        })
    }

    /// `g(k) = k`.
    pub fn identity() -> Self {
        Modulus::new(|k| k.clone().max(Nat::one()))
    }

    pub fn constant(n: u64) -> Self {
        Modulus::new(move |_| Nat::from(n))
    }

    pub fn at(&self, k: u64) -> Nat {
        (self.0)(&Nat::from(k))
    }

    pub fn at_nat(&self, k: &Nat) -> Nat {
        (self.0)(k)
    }

    /// `k -> self(c * k)` for a positive natural `c`.
    pub fn precompose_scale(&self, c: Nat) -> Modulus {
        let g = self.0.clone();
        Modulus::new(move |k| g(&(k * &c)))
    }

    pub fn max_with(&self, other: &Modulus) -> Modulus {
        let (a, b) = (self.0.clone(), other.0.clone());
        Modulus::new(move |k| a(k).max(b(k)))
    }

    /// `k -> self(other(k))`.
    pub fn then(&self, other: &Modulus) -> Modulus {
        let (a, b) = (self.0.clone(), other.0.clone());
        Modulus::new(move |k| b(&a(k)))
    }
}

type PointwiseMap = dyn Fn(&Nat, &Real) -> Nat + Send + Sync;

/// A modulus of pointwise continuity `(k, x) -> N`.
#[derive(Clone)]
pub struct PointwiseModulus(Arc<PointwiseMap>);

impl fmt::Debug for PointwiseModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("PointwiseModulus")
    }
}

impl PointwiseModulus {
    pub fn new(g: impl Fn(&Nat, &Real) -> Nat + Send + Sync + 'static) -> Self {
        PointwiseModulus(Arc::new(g))
    }

    pub fn from_uniform(g: &Modulus) -> Self {
        let g = g.clone();
        PointwiseModulus::new(move |k, _| g.at_nat(k))
    }

    pub fn at(&self, k: u64, x: &Real) -> Nat {
        (self.0)(&Nat::from(k), x)
    }
}

/// The modulus data a function carries.
#[derive(Debug, Clone)]
pub enum FnModulus {
    Uniform(Modulus),
    Pointwise(PointwiseModulus),
    /// Modulus of differentiability at the given point.
    Differentiability { at: Rational, modulus: Modulus },
    /// Modulus of Riemann integration.
    Integration(Modulus),
}

impl FnModulus {
    fn kind(&self) -> &'static str {
        match self {
            FnModulus::Uniform(_) => "uniform",
            FnModulus::Pointwise(_) => "pointwise",
            FnModulus::Differentiability { .. } => "differentiability",
            FnModulus::Integration(_) => "integration",
        }
    }
}

/// A real function with modulus data on a closed rational domain.
#[derive(Debug, Clone)]
pub struct FnWithModulus {
    pub f: RealFn,
    pub modulus: FnModulus,
    pub domain: Interval,
    /// Known enclosure of the image of `domain`, when available.
    pub range: Option<Range>,
}

impl FnWithModulus {
    pub fn new(f: RealFn, modulus: FnModulus, domain: Interval) -> Self {
        FnWithModulus {
            f,
            modulus,
            domain,
            range: None,
        }
    }

    pub fn with_range(mut self, range: Range) -> Self {
        self.range = Some(range);
        self
    }

    pub fn identity(domain: Interval) -> Self {
        let range = Range {
            lo: domain.lo.clone(),
            hi: domain.hi.clone(),
        };
        FnWithModulus::new(RealFn::identity(), FnModulus::Uniform(Modulus::identity()), domain)
            .with_range(range)
    }

    pub fn constant(c: Rational, domain: Interval) -> Self {
        FnWithModulus::new(
            RealFn::constant(c.clone()),
            FnModulus::Uniform(Modulus::constant(1)),
            domain,
        )
        .with_range(Range::point(c))
    }

    pub fn uniform(&self) -> Result<&Modulus, FunctionError> {
        match &self.modulus {
            FnModulus::Uniform(g) => Ok(g),
            other => Err(FunctionError::WrongModulusKind(other.kind())),
        }
    }

    /// Evaluates `f(x)`, failing when `x` is certified outside the domain.
    pub fn eval(&self, x: &Real) -> Result<Real, FunctionError> {
        eval_fn(self, x)
    }

    /// A bound `M >= sup |f|` on the domain: the known range if any,
    /// otherwise `|f(a)| + 1` plus one unit per `1/g(1)` step across it.
    pub fn sup_bound(&self) -> Result<Rational, FunctionError> {
        if let Some(r) = &self.range {
            return Ok(r.magnitude());
        }
        let g = self.uniform()?;
        let at_a = self.f.apply_rational(&self.domain.lo).approx(0).abs() + Rational::one();
        let steps = floor_nat(&(self.domain.width() * nat_to_rat(&g.at(1)))) + Nat::one();
        Ok(at_a + nat_to_rat(&steps))
    }

    fn same_domain(&self, other: &FnWithModulus) -> Result<(), FunctionError> {
        if self.domain != other.domain {
            return Err(FunctionError::IncompatibleDomains(format!(
                "[{}, {}] vs [{}, {}]",
                self.domain.lo, self.domain.hi, other.domain.lo, other.domain.hi
            )));
        }
        Ok(())
    }

    /// `f + g` with modulus `k -> max(g_f(2k), g_g(2k))`.
    pub fn add(&self, other: &FnWithModulus) -> Result<FnWithModulus, FunctionError> {
        self.same_domain(other)?;
        let (a, b) = (self.uniform()?, other.uniform()?);
        let two = Nat::from(2u32);
        let m = a
            .precompose_scale(two.clone())
            .max_with(&b.precompose_scale(two));
        let range = match (&self.range, &other.range) {
            (Some(r), Some(s)) => Some(r.add(s)),
            _ => None,
        };
        Ok(FnWithModulus {
            f: self.f.add(&other.f),
            modulus: FnModulus::Uniform(m),
            domain: self.domain.clone(),
            range,
        })
    }

    /// `f * g` with modulus `k -> max(g_f(2k*ceil(M_g)), g_g(2k*ceil(M_f)))`.
    pub fn mul(&self, other: &FnWithModulus) -> Result<FnWithModulus, FunctionError> {
        self.same_domain(other)?;
        let (a, b) = (self.uniform()?, other.uniform()?);
        let mf = ceil_nat(&self.sup_bound()?).max(Nat::one());
        let mg = ceil_nat(&other.sup_bound()?).max(Nat::one());
        let two = Nat::from(2u32);
        let m = a
            .precompose_scale(&two * mg)
            .max_with(&b.precompose_scale(&two * mf));
        let range = match (&self.range, &other.range) {
            (Some(r), Some(s)) => Some(r.mul(s)),
            _ => None,
        };
        Ok(FnWithModulus {
            f: self.f.mul(&other.f),
            modulus: FnModulus::Uniform(m),
            domain: self.domain.clone(),
            range,
        })
    }

    /// `c * f`; scaling by zero yields a constant with modulus 1.
    pub fn scale(&self, c: &Rational) -> Result<FnWithModulus, FunctionError> {
        if c.is_zero() {
            return Ok(FnWithModulus::constant(Rational::zero(), self.domain.clone()));
        }
        let a = self.uniform()?;
        let m = a.precompose_scale(ceil_nat(&c.abs()).max(Nat::one()));
        Ok(FnWithModulus {
            f: self.f.scale(c),
            modulus: FnModulus::Uniform(m),
            domain: self.domain.clone(),
            range: self.range.as_ref().map(|r| r.scale(c)),
        })
    }

    /// `self ∘ inner`, defined on `inner`'s domain. Needs a known range of
    /// `inner` inside `self`'s domain.
    pub fn compose(&self, inner: &FnWithModulus) -> Result<FnWithModulus, FunctionError> {
        let outer_g = self.uniform()?;
        let inner_g = inner.uniform()?;
        let r = inner.range.as_ref().ok_or_else(|| {
            FunctionError::IncompatibleDomains("inner function has no known range".into())
        })?;
        if !(self.domain.lo <= r.lo && r.hi <= self.domain.hi) {
            return Err(FunctionError::IncompatibleDomains(format!(
                "range [{}, {}] not inside [{}, {}]",
                r.lo, r.hi, self.domain.lo, self.domain.hi
            )));
        }
        Ok(FnWithModulus {
            f: self.f.compose(&inner.f),
            modulus: FnModulus::Uniform(outer_g.then(inner_g)),
            domain: inner.domain.clone(),
            range: self.range.clone(),
        })
    }

    /// Modulus of Riemann integration derived from the uniform modulus:
    /// `k -> g(ceil(2 (b - a) k))`.
    pub fn integration_modulus(&self) -> Result<Modulus, FunctionError> {
        match &self.modulus {
            FnModulus::Integration(w) => Ok(w.clone()),
            FnModulus::Uniform(g) => {
                let c = ceil_nat(&(self.domain.width() * Rational::from_integer(2.into())))
                    .max(Nat::one());
                Ok(g.precompose_scale(c))
            }
            other => Err(FunctionError::WrongModulusKind(other.kind())),
        }
    }
}

/// Evaluates `f` at `x`, rejecting arguments certified outside its domain.
pub fn eval_fn(f: &FnWithModulus, x: &Real) -> Result<Real, FunctionError> {
    let p = DOMAIN_CHECK_PRECISION;
    let lo = Real::from_rational(f.domain.lo.clone());
    let hi = Real::from_rational(f.domain.hi.clone());
    if compare(x, &lo, p) == Comparison::Less || compare(x, &hi, p) == Comparison::Greater {
        return Err(FunctionError::DomainViolation {
            lo: f.domain.lo.clone(),
            hi: f.domain.hi.clone(),
        });
    }
    Ok(f.f.apply(x))
}

/// One violation found by [`check_uniform_modulus`].
#[derive(Debug, Clone)]
pub struct ModulusViolation {
    pub k: u64,
    pub x: Rational,
    pub y: Rational,
    pub difference: Rational,
}

/// Grid test of a uniform modulus at target `k`: adjacent points of a grid
/// with spacing below `1/g(k)` (at most `max_points` points) must have
/// `|f(x) - f(y)|`, read at precision `k + 4`, below `1/k + 2^-(k+2)`.
pub fn check_uniform_modulus(
    f: &RealFn,
    g: &Modulus,
    domain: &Interval,
    k: u64,
    max_points: u64,
) -> Option<ModulusViolation> {
    let gk = nat_to_rat(&g.at(k).max(Nat::one()));
    // pairs at distance 1/(2 g(k)); when the full grid is too large, the
    // pair bases are spread evenly across the domain
    let step = Rational::one() / (Rational::from_integer(2.into()) * &gk);
    let count: u64 = floor_nat(&(domain.width() / &step))
        .try_into()
        .unwrap_or(u64::MAX);
    let points = count.clamp(1, max_points.max(1));
    let stride = Rational::new(count.into(), points.into()).floor().max(Rational::one());
    let prec = (k.min(200) as u32) + 4;
    let bound = Rational::new(1.into(), k.into()) + crate::rational::pow2_neg(prec - 2);
    for i in 0..points {
        let x = &domain.lo + &step * &stride * Rational::from_integer(i.into());
        let y = &x + &step;
        if y > domain.hi {
            continue;
        }
        let fx = f.apply_rational(&x).approx(prec);
        let fy = f.apply_rational(&y).approx(prec);
        let d = (fx - fy).abs();
        if d >= bound {
            return Some(ModulusViolation {
                k,
                x,
                y,
                difference: d,
            });
        }
    }
    None
}
