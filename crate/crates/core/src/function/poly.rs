//! Dense polynomials with rational coefficients.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::rational::Rational;
use crate::real::Real;

/// `c[0] + c[1] x + ... + c[d] x^d`, trailing zeros trimmed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly(Vec<Rational>);

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn constant(c: Rational) -> Self {
        Poly::new(vec![c])
    }

    pub fn x() -> Self {
        Poly::new(vec![Rational::zero(), Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0
    }

    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_real(&self, x: &Real) -> Real {
        let mut acc = Real::zero();
        for c in self.0.iter().rev() {
            acc = acc.mul(x).add(&Real::from_rational(c.clone()));
        }
        acc
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        let z = Rational::zero();
        Poly::new(
            (0..n)
                .map(|i| self.0.get(i).unwrap_or(&z) + o.0.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.0.is_empty() || o.0.is_empty() {
            return Poly::new(vec![]);
        }
        let mut out = vec![Rational::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        Poly::new(self.0.iter().map(|a| a * c).collect())
    }

    /// `self(inner(x))`.
    pub fn compose(&self, inner: &Poly) -> Poly {
        let mut acc = Poly::new(vec![]);
        for c in self.0.iter().rev() {
            acc = acc.mul(inner).add(&Poly::constant(c.clone()));
        }
        acc
    }

    /// `sum_{j=0}^{m-1} p(a + j h)`, exactly, via power sums.
    pub fn equidistant_sum(&self, a: &Rational, h: &Rational, m: &BigInt) -> Rational {
        if m.is_zero() {
            return Rational::zero();
        }
        // q(j) = p(a + h j) as a polynomial in j
        let q = self.compose(&Poly::new(vec![a.clone(), h.clone()]));
        let sums = power_sums(&(m - BigInt::one()), q.degree());
        q.0.iter().zip(sums.iter()).map(|(c, s)| c * s).sum()
    }
}

/// `P_l = sum_{j=0}^{n} j^l` for `l = 0..=deg` (with `0^0 = 1`), from
/// `(n+1)^(l+1) = sum_{p<=l} C(l+1, p) P_p`.
fn power_sums(n: &BigInt, deg: usize) -> Vec<Rational> {
    let n1 = Rational::from_integer(n + BigInt::one());
    let mut out: Vec<Rational> = Vec::with_capacity(deg + 1);
    for l in 0..=deg {
        let mut rhs = num_traits::pow(n1.clone(), l + 1);
        for (p, pp) in out.iter().enumerate() {
            rhs -= Rational::from_integer(binomial(l + 1, p)) * pp;
        }
        out.push(rhs / Rational::from_integer(BigInt::from(l + 1)));
    }
    out
}

fn binomial(n: usize, k: usize) -> BigInt {
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}
