//! Tagged partitions and Riemann sums.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive, Zero};

use super::AnalysisError;
use crate::function::RealFn;
use crate::rational::{ceil_log2, nat_to_rat, round_dyadic, Rational};
use crate::real::{compare, Comparison, Real};

/// Precision at which partition ordering is checked.
pub const ORDER_CHECK_PRECISION: u32 = 40;

/// A partition point: exact when rational, otherwise a real.
#[derive(Debug, Clone)]
pub enum Node {
    Exact(Rational),
    Real(Real),
}

impl Node {
    pub fn to_real(&self) -> Real {
        match self {
            Node::Exact(q) => Real::from_rational(q.clone()),
            Node::Real(x) => x.clone(),
        }
    }

    pub fn exact(&self) -> Option<&Rational> {
        match self {
            Node::Exact(q) => Some(q),
            Node::Real(_) => None,
        }
    }

    fn eval(&self, f: &RealFn) -> Real {
        match self {
            Node::Exact(q) => f.apply_rational(q),
            Node::Real(x) => f.apply(x),
        }
    }
}

/// `(x_0, t_0, x_1, t_1, ..., t_{M-1}, x_M)` with `x_i <= t_i <= x_{i+1}`.
#[derive(Debug, Clone)]
pub enum Partition {
    Explicit { cuts: Vec<Node>, tags: Vec<Node> },
    /// `M` equal cells of `[a, b]`, tag at `x_i + theta (x_{i+1} - x_i)`.
    Equidistant {
        a: Rational,
        b: Rational,
        m: BigUint,
        theta: Rational,
    },
}

impl Partition {
    /// Validates the interleaving. A pair is rejected only when the order is
    /// certified wrong; coincident points are allowed.
    pub fn new(cuts: Vec<Node>, tags: Vec<Node>) -> Result<Self, AnalysisError> {
        if tags.is_empty() || cuts.len() != tags.len() + 1 {
            return Err(AnalysisError::InvalidPartition(format!(
                "{} cut points need {} tags, got {}",
                cuts.len(),
                cuts.len().saturating_sub(1),
                tags.len()
            )));
        }
        let mut seq = Vec::with_capacity(cuts.len() + tags.len());
        for i in 0..tags.len() {
            seq.push(&cuts[i]);
            seq.push(&tags[i]);
        }
        seq.push(&cuts[tags.len()]);
        for (i, w) in seq.windows(2).enumerate() {
            let out_of_order = match (w[0].exact(), w[1].exact()) {
                (Some(p), Some(q)) => p > q,
                _ => {
                    compare(&w[0].to_real(), &w[1].to_real(), ORDER_CHECK_PRECISION)
                        == Comparison::Greater
                }
            };
            if out_of_order {
                return Err(AnalysisError::InvalidPartition(format!(
                    "points {} and {} are out of order",
                    i,
                    i + 1
                )));
            }
        }
        Ok(Partition::Explicit { cuts, tags })
    }

    /// `m` equal cells with tags at relative offset `theta` in `[0, 1]`.
    pub fn equidistant(
        a: Rational,
        b: Rational,
        m: BigUint,
        theta: Rational,
    ) -> Result<Self, AnalysisError> {
        if m.is_zero() || a > b || theta < Rational::zero() || theta > Rational::one() {
            return Err(AnalysisError::InvalidPartition(
                "equidistant partition needs m >= 1, a <= b and theta in [0, 1]".into(),
            ));
        }
        Ok(Partition::Equidistant { a, b, m, theta })
    }

    pub fn left(a: Rational, b: Rational, m: u64) -> Result<Self, AnalysisError> {
        Partition::equidistant(a, b, BigUint::from(m), Rational::zero())
    }

    pub fn midpoint(a: Rational, b: Rational, m: u64) -> Result<Self, AnalysisError> {
        Partition::equidistant(a, b, BigUint::from(m), Rational::new(1.into(), 2.into()))
    }

    /// Number of cells `M`.
    pub fn cells(&self) -> BigUint {
        match self {
            Partition::Explicit { tags, .. } => BigUint::from(tags.len()),
            Partition::Equidistant { m, .. } => m.clone(),
        }
    }

    /// Expands an equidistant partition into explicit points.
    pub fn to_explicit(&self) -> Option<(Vec<Node>, Vec<Node>)> {
        match self {
            Partition::Explicit { cuts, tags } => Some((cuts.clone(), tags.clone())),
            Partition::Equidistant { a, b, m, theta } => {
                let m = m.to_u64()?;
                let h = (b - a) / Rational::from_integer(m.into());
                let cuts = (0..=m)
                    .map(|j| Node::Exact(a + &h * Rational::from_integer(j.into())))
                    .collect();
                let tags = (0..m)
                    .map(|j| {
                        Node::Exact(a + &h * (Rational::from_integer(j.into()) + theta))
                    })
                    .collect();
                Some((cuts, tags))
            }
        }
    }
}

/// Largest gap between adjacent cut points.
pub fn mesh(p: &Partition) -> Real {
    match p {
        Partition::Equidistant { a, b, m, .. } => Real::from_rational((b - a) / nat_to_rat(m)),
        Partition::Explicit { cuts, .. } => {
            let exact: Option<Vec<&Rational>> = cuts.iter().map(Node::exact).collect();
            if let Some(xs) = exact {
                let widest = xs
                    .windows(2)
                    .map(|w| w[1] - w[0])
                    .max()
                    .unwrap_or_else(Rational::zero);
                return Real::from_rational(widest);
            }
            let widths: Vec<Real> = cuts
                .windows(2)
                .map(|w| w[1].to_real().sub(&w[0].to_real()))
                .collect();
            widths
                .iter()
                .skip(1)
                .fold(widths[0].clone(), |m, w| m.max(w))
        }
    }
}

/// `S_pi(f) = sum_i f(t_i) (x_{i+1} - x_i)`.
///
/// Exact when `f` and all points are exact (closed form for polynomials on
/// equidistant partitions). Otherwise term `i` is read at precision
/// `n + ceil(log2 M) + 2`, so the `M` term errors sum to at most `2^-(n+2)`.
pub fn riemann_sum(f: &RealFn, p: &Partition) -> Real {
    if let Partition::Equidistant { a, b, m, theta } = p {
        let h = (b - a) / nat_to_rat(m);
        if let Some(poly) = f.as_poly() {
            let start = a + &h * theta;
            let s = poly.equidistant_sum(&start, &h, &BigInt::from(m.clone()));
            return Real::from_rational(s * h);
        }
    }
    let (cuts, tags) = match p.to_explicit() {
        Some(ct) => ct,
        None => {
            // too many cells to list: only polynomials are summed in closed form
            return riemann_sum_lazy(f, p);
        }
    };
    let all_exact = f.is_exact() && cuts.iter().chain(&tags).all(|n| n.exact().is_some());
    if all_exact {
        let s: Rational = tags
            .iter()
            .enumerate()
            .map(|(i, t)| {
                let w = cuts[i + 1].exact().unwrap() - cuts[i].exact().unwrap();
                f.exact_value(t.exact().unwrap()).unwrap() * w
            })
            .sum();
        return Real::from_rational(s);
    }
    let terms: Vec<Real> = tags
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let ft = t.eval(f);
            match (cuts[i].exact(), cuts[i + 1].exact()) {
                (Some(x0), Some(x1)) => ft.scale(&(x1 - x0)),
                _ => ft.mul(&cuts[i + 1].to_real().sub(&cuts[i].to_real())),
            }
        })
        .collect();
    let c = ceil_log2(&Rational::from_integer(terms.len().into())) + 2;
    Real::from_stream(move |n| {
        let s: Rational = terms.iter().map(|t| t.approx(n + c)).sum();
        round_dyadic(&s, n + 2)
    })
}

fn riemann_sum_lazy(f: &RealFn, p: &Partition) -> Real {
    let Partition::Equidistant { a, b, m, theta } = p else {
        unreachable!("explicit partitions are always listable")
    };
    let (a, m, theta) = (a.clone(), m.clone(), theta.clone());
    let h = (b - &a) / nat_to_rat(&m);
    let f = f.clone();
    let c = ceil_log2(&nat_to_rat(&m)) + 2;
    Real::from_stream(move |n| {
        let mut s = Rational::zero();
        let mut j = BigUint::zero();
        while j < m {
            let t = &a + &h * (nat_to_rat(&j) + &theta);
            s += f.apply_rational(&t).scale(&h).approx(n + c);
            j += 1u32;
        }
        round_dyadic(&s, n + 2)
    })
}
