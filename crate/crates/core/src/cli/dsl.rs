//! Function-expression language: parsing, range/Lipschitz analysis, and
//! compilation to functions with a uniform modulus.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | atom
//! atom  := number | 'x' | name '(' expr (',' expr)* ')' | '(' expr [':' bound] ')'
//! bound := ['-'] number ['/' number]
//! ```
//!
//! A divisor is either constant or a guarded group `(d : L)` promising
//! `d >= L > 0` on the interval; the promise is checked by interval analysis.
//! Columns in diagnostics are 0-based character offsets.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::function::{FnModulus, FnWithModulus, Interval, Modulus, Poly, Range, RealFn};
use crate::rational::{max_rat, min_rat, parse_rational, pow2, Rational};
use crate::real::{exp_enclosure, Real};

/// Largest `|argument|` accepted by `exp`.
pub const EXP_ARG_LIMIT: i64 = 1 << 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DslError {
    #[error("syntax error at column {column}: {message}")]
    Syntax { column: usize, message: String },
    #[error("unknown identifier `{name}` at column {column}")]
    UnknownIdentifier { column: usize, name: String },
    #[error("missing division guard at column {column}: write the divisor as `(expr : lower_bound)`")]
    MissingGuard { column: usize },
    #[error("guard not certified: divisor range starts at {range_lo}, below the bound {bound}")]
    GuardNotCertified { range_lo: Rational, bound: Rational },
    #[error("unbounded subterm: {0}")]
    Unbounded(String),
    #[error("invalid interval: {0}")]
    Interval(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    X,
    Lit(Rational),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    /// `guard` is `None` exactly when the divisor is constant.
    Div {
        num: Box<Expr>,
        den: Box<Expr>,
        guard: Option<Rational>,
    },
    Abs(Box<Expr>),
    Min(Box<Expr>, Box<Expr>),
    Max(Box<Expr>, Box<Expr>),
    Exp(Box<Expr>),
    Sqrt(Box<Expr>),
}

impl Expr {

    fn constant_value(&self) -> Option<Rational> {
        match self {
            Expr::Lit(q) => Some(q.clone()),
            Expr::Neg(a) => a.constant_value().map(|q| -q),
            Expr::Add(a, b) => Some(a.constant_value()? + b.constant_value()?),
            Expr::Sub(a, b) => Some(a.constant_value()? - b.constant_value()?),
            Expr::Mul(a, b) => Some(a.constant_value()? * b.constant_value()?),
            Expr::Div {
                num,
                den,
                guard: None,
            } => {
                let d = den.constant_value()?;
                (!d.is_zero()).then(|| num.constant_value().map(|n| n / d))?
            }
            _ => None,
        }
    }

    /// Coefficients, when the expression is a polynomial in `x`.
    pub fn as_poly(&self) -> Option<Poly> {
        Some(match self {
            Expr::X => Poly::x(),
            Expr::Lit(q) => Poly::constant(q.clone()),
            Expr::Neg(a) => a.as_poly()?.scale(&-Rational::one()),
            Expr::Add(a, b) => a.as_poly()?.add(&b.as_poly()?),
            Expr::Sub(a, b) => a.as_poly()?.add(&b.as_poly()?.scale(&-Rational::one())),
            Expr::Mul(a, b) => a.as_poly()?.mul(&b.as_poly()?),
            Expr::Div {
                num,
                den,
                guard: None,
            } => num.as_poly()?.scale(&den.constant_value()?.recip()),
            _ => return None,
        })
    }
}

fn fmt_rat(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Fully parenthesised; parses back to the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::X => write!(f, "x"),
            Expr::Lit(q) if q.is_negative() => write!(f, "(-{})", fmt_rat(&-q)),
            Expr::Lit(q) if q.is_integer() => write!(f, "{}", fmt_rat(q)),
            Expr::Lit(q) => write!(f, "({})", fmt_rat(q)),
            Expr::Neg(a) => write!(f, "(-{a})"),
            Expr::Add(a, b) => write!(f, "({a} + {b})"),
            Expr::Sub(a, b) => write!(f, "({a} - {b})"),
            Expr::Mul(a, b) => write!(f, "({a} * {b})"),
            Expr::Div {
                num,
                den,
                guard: Some(g),
            } => write!(f, "({num} / ({den} : {}))", fmt_rat(g)),
            Expr::Div { num, den, .. } => write!(f, "({num} / {den})"),
            Expr::Abs(a) => write!(f, "abs({a})"),
            Expr::Min(a, b) => write!(f, "min({a}, {b})"),
            Expr::Max(a, b) => write!(f, "max({a}, {b})"),
            Expr::Exp(a) => write!(f, "exp({a})"),
            Expr::Sqrt(a) => write!(f, "sqrt({a})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Sym(char),
    End,
}

fn tokenize(src: &str) -> Result<Vec<(usize, Tok)>, DslError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            out.push((start, Tok::Num(chars[start..i].iter().collect())));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((start, Tok::Ident(chars[start..i].iter().collect())));
        } else if "+-*/(),:".contains(c) {
            out.push((i, Tok::Sym(c)));
            i += 1;
        } else {
            return Err(DslError::Syntax {
                column: i,
                message: format!("unexpected character `{c}`"),
            });
        }
    }
    out.push((chars.len(), Tok::End));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

/// A parsed atom: guarded groups are only legal as divisors.
enum Atom {
    Plain(Expr),
    Guarded(Expr, Rational, usize),
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn col(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, DslError> {
        Err(DslError::Syntax {
            column: self.col(),
            message: message.into(),
        })
    }

    fn expect(&mut self, c: char) -> Result<(), DslError> {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            Ok(())
        } else {
            self.err(format!("expected `{c}`"))
        }
    }

    fn expr(&mut self) -> Result<Expr, DslError> {
        let mut e = self.term()?;
        loop {
            match self.peek() {
                Tok::Sym('+') => {
                    self.bump();
                    e = Expr::Add(Box::new(e), Box::new(self.term()?));
                }
                Tok::Sym('-') => {
                    self.bump();
                    e = Expr::Sub(Box::new(e), Box::new(self.term()?));
                }
                _ => return Ok(e),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, DslError> {
        let mut e = self.unary()?;
        loop {
            match self.peek() {
                Tok::Sym('*') => {
                    self.bump();
                    e = Expr::Mul(Box::new(e), Box::new(self.unary()?));
                }
                Tok::Sym('/') => {
                    let column = self.col();
                    self.bump();
                    e = match self.unary_atom()? {
                        Atom::Guarded(den, g, _) => Expr::Div {
                            num: Box::new(e),
                            den: Box::new(den),
                            guard: Some(g),
                        },
                        Atom::Plain(den) => match den.constant_value() {
                            Some(d) if d.is_zero() => {
                                return Err(DslError::Syntax {
                                    column,
                                    message: "division by zero".into(),
                                })
                            }
                            Some(d) => match e.constant_value() {
                                // fold literal fractions such as 1/2
                                Some(n) if matches!(e, Expr::Lit(_)) && matches!(den, Expr::Lit(_)) => {
                                    Expr::Lit(n / d)
                                }
                                _ => Expr::Div {
                                    num: Box::new(e),
                                    den: Box::new(den),
                                    guard: None,
                                },
                            },
                            None => return Err(DslError::MissingGuard { column }),
                        },
                    };
                }
                _ => return Ok(e),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, DslError> {
        match self.unary_atom()? {
            Atom::Plain(e) => Ok(e),
            Atom::Guarded(_, _, column) => Err(DslError::Syntax {
                column,
                message: "a `: bound` annotation is only allowed on a divisor".into(),
            }),
        }
    }

    fn unary_atom(&mut self) -> Result<Atom, DslError> {
        if *self.peek() == Tok::Sym('-') {
            self.bump();
            let e = self.unary()?;
            return Ok(Atom::Plain(match e {
                Expr::Lit(q) => Expr::Lit(-q),
                e => Expr::Neg(Box::new(e)),
            }));
        }
        self.atom()
    }

    fn number(&mut self) -> Result<Rational, DslError> {
        let column = self.col();
        match self.bump() {
            Tok::Num(s) => parse_rational(&s).ok_or(DslError::Syntax {
                column,
                message: format!("malformed number `{s}`"),
            }),
            _ => Err(DslError::Syntax {
                column,
                message: "expected a number".into(),
            }),
        }
    }

    fn bound(&mut self) -> Result<Rational, DslError> {
        let column = self.col();
        let neg = *self.peek() == Tok::Sym('-');
        if neg {
            self.bump();
        }
        let mut q = self.number()?;
        if *self.peek() == Tok::Sym('/') {
            self.bump();
            let d = self.number()?;
            if d.is_zero() {
                return Err(DslError::Syntax {
                    column,
                    message: "zero denominator in bound".into(),
                });
            }
            q /= d;
        }
        if neg {
            q = -q;
        }
        if !q.is_positive() {
            return Err(DslError::Syntax {
                column,
                message: format!("guard bound must be positive, got {}", fmt_rat(&q)),
            });
        }
        Ok(q)
    }

    fn atom(&mut self) -> Result<Atom, DslError> {
        let column = self.col();
        match self.peek().clone() {
            Tok::Num(_) => Ok(Atom::Plain(Expr::Lit(self.number()?))),
            Tok::Sym('(') => {
                self.bump();
                let e = self.expr()?;
                if *self.peek() == Tok::Sym(':') {
                    let gcol = self.col();
                    self.bump();
                    let g = self.bound()?;
                    self.expect(')')?;
                    return Ok(Atom::Guarded(e, g, gcol));
                }
                self.expect(')')?;
                Ok(Atom::Plain(e))
            }
            Tok::Ident(name) => {
                self.bump();
                if name == "x" {
                    return Ok(Atom::Plain(Expr::X));
                }
                let arity = match name.as_str() {
                    "exp" | "sqrt" | "abs" => 1,
                    "min" | "max" => 2,
                    _ => return Err(DslError::UnknownIdentifier { column, name }),
                };
                self.expect('(')?;
                let mut args = vec![self.expr()?];
                while *self.peek() == Tok::Sym(',') {
                    self.bump();
                    args.push(self.expr()?);
                }
                if args.len() != arity {
                    return self.err(format!("`{name}` takes {arity} argument(s), got {}", args.len()));
                }
                self.expect(')')?;
                let mut it = args.into_iter().map(Box::new);
                let a = it.next().unwrap();
                Ok(Atom::Plain(match name.as_str() {
                    "exp" => Expr::Exp(a),
                    "sqrt" => Expr::Sqrt(a),
                    "abs" => Expr::Abs(a),
                    "min" => Expr::Min(a, it.next().unwrap()),
                    _ => Expr::Max(a, it.next().unwrap()),
                }))
            }
            Tok::End => self.err("unexpected end of input"),
            Tok::Sym(c) => self.err(format!("unexpected `{c}`")),
        }
    }
}

pub fn parse_expr(src: &str) -> Result<Expr, DslError> {
    let mut p = Parser {
        toks: tokenize(src)?,
        pos: 0,
    };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return p.err("unexpected trailing input");
    }
    Ok(e)
}

/// Range enclosure and Lipschitz bound of a subterm on the interval.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bounds {
    pub lo: Rational,
    pub hi: Rational,
    pub lipschitz: Rational,
}

impl Bounds {
    fn magnitude(&self) -> Rational {
        max_rat(&self.lo.abs(), &self.hi.abs())
    }
}

fn mul_range(a: &Bounds, b: &Bounds) -> (Rational, Rational) {
    let c = [&a.lo * &b.lo, &a.lo * &b.hi, &a.hi * &b.lo, &a.hi * &b.hi];
    let lo = c.iter().fold(c[0].clone(), |m, v| min_rat(&m, v));
    let hi = c.iter().fold(c[0].clone(), |m, v| max_rat(&m, v));
    (lo, hi)
}

/// `floor(sqrt(q) 2^w) 2^-w` and the matching upper bound.
fn sqrt_enclosure(q: &Rational, w: u32) -> (Rational, Rational) {
    let scaled = (q * pow2(2 * w)).floor().to_integer();
    let r = scaled.to_biguint().unwrap_or_default().sqrt();
    let lo = Rational::new(BigInt::from(r), BigInt::one() << w as usize);
    let hi = &lo + Rational::new(BigInt::one(), BigInt::one() << w as usize);
    (lo, hi)
}

type Ev = Arc<dyn Fn(&Real) -> Real + Send + Sync>;

/// Bounds of a subterm together with its evaluator.
struct Node {
    b: Bounds,
    ev: Ev,
}

fn node(b: Bounds, ev: impl Fn(&Real) -> Real + Send + Sync + 'static) -> Node {
    Node { b, ev: Arc::new(ev) }
}

fn analyze(e: &Expr, x: &Bounds) -> Result<Node, DslError> {
    let zero = Rational::zero;
    Ok(match e {
        Expr::X => node(x.clone(), |x| x.clone()),
        Expr::Lit(q) => {
            let r = Real::from_rational(q.clone());
            node(
                Bounds {
                    lo: q.clone(),
                    hi: q.clone(),
                    lipschitz: zero(),
                },
                move |_| r.clone(),
            )
        }
        Expr::Neg(a) => {
            let Node { b: a, ev } = analyze(a, x)?;
            node(
                Bounds {
                    lo: -a.hi,
                    hi: -a.lo,
                    lipschitz: a.lipschitz,
                },
                move |x| ev(x).neg(),
            )
        }
        Expr::Add(p, q) | Expr::Sub(p, q) => {
            let (Node { b: a, ev: fa }, Node { b, ev: fb }) = (analyze(p, x)?, analyze(q, x)?);
            let add = matches!(e, Expr::Add(..));
            let (lo, hi) = if add {
                (&a.lo + &b.lo, &a.hi + &b.hi)
            } else {
                (&a.lo - &b.hi, &a.hi - &b.lo)
            };
            node(
                Bounds {
                    lo,
                    hi,
                    lipschitz: a.lipschitz + b.lipschitz,
                },
                move |x| if add { fa(x).add(&fb(x)) } else { fa(x).sub(&fb(x)) },
            )
        }
        Expr::Mul(p, q) => {
            let (Node { b: a, ev: fa }, Node { b, ev: fb }) = (analyze(p, x)?, analyze(q, x)?);
            let (mut lo, hi) = mul_range(&a, &b);
            if p == q && lo.is_negative() {
                // a square is non-negative
                lo = zero();
            }
            node(
                Bounds {
                    lo,
                    hi,
                    lipschitz: &a.lipschitz * b.magnitude() + &b.lipschitz * a.magnitude(),
                },
                move |x| fa(x).mul(&fb(x)),
            )
        }
        Expr::Div { num, den, guard } => {
            let (Node { b: n, ev: fn_ }, Node { b: d, ev: fd }) = (analyze(num, x)?, analyze(den, x)?);
            let recip = match guard {
                None => {
                    let c = den.constant_value().expect("unguarded divisors are constant");
                    let r = c.recip();
                    node(
                        Bounds {
                            lo: r.clone(),
                            hi: r.clone(),
                            lipschitz: zero(),
                        },
                        move |_| Real::from_rational(r.clone()),
                    )
                }
                Some(g) => {
                    if d.lo < *g {
                        return Err(DslError::GuardNotCertified {
                            range_lo: d.lo,
                            bound: g.clone(),
                        });
                    }
                    let g2 = g.clone();
                    node(
                        Bounds {
                            lo: d.hi.recip(),
                            hi: d.lo.recip(),
                            lipschitz: &d.lipschitz / (g * g),
                        },
                        move |x| fd(x).recip_unchecked(&g2),
                    )
                }
            };
            let (lo, hi) = mul_range(&n, &recip.b);
            let fr = recip.ev;
            node(
                Bounds {
                    lo,
                    hi,
                    lipschitz: &n.lipschitz * recip.b.magnitude() + &recip.b.lipschitz * n.magnitude(),
                },
                move |x| fn_(x).mul(&fr(x)),
            )
        }
        Expr::Abs(a) => {
            let Node { b: a, ev } = analyze(a, x)?;
            let lo = if a.lo.is_negative() && a.hi.is_positive() {
                zero()
            } else {
                min_rat(&a.lo.abs(), &a.hi.abs())
            };
            node(
                Bounds {
                    hi: a.magnitude(),
                    lo,
                    lipschitz: a.lipschitz,
                },
                move |x| ev(x).abs(),
            )
        }
        Expr::Min(p, q) | Expr::Max(p, q) => {
            let (Node { b: a, ev: fa }, Node { b, ev: fb }) = (analyze(p, x)?, analyze(q, x)?);
            let min = matches!(e, Expr::Min(..));
            let (lo, hi) = if min {
                (min_rat(&a.lo, &b.lo), min_rat(&a.hi, &b.hi))
            } else {
                (max_rat(&a.lo, &b.lo), max_rat(&a.hi, &b.hi))
            };
            node(
                Bounds {
                    lo,
                    hi,
                    lipschitz: max_rat(&a.lipschitz, &b.lipschitz),
                },
                move |x| if min { fa(x).min(&fb(x)) } else { fa(x).max(&fb(x)) },
            )
        }
        Expr::Exp(a) => {
            let Node { b: a, ev } = analyze(a, x)?;
            let bound = a.magnitude();
            if bound > Rational::from_integer(EXP_ARG_LIMIT.into()) {
                return Err(DslError::Unbounded(format!(
                    "exp argument range [{}, {}] exceeds +-{EXP_ARG_LIMIT}",
                    a.lo, a.hi
                )));
            }
            let lo = exp_enclosure(&a.lo, 32).0;
            let hi = exp_enclosure(&a.hi, 32).1;
            // |d/dx e^a| <= L_a ceil(e^hi)
            let lipschitz = &a.lipschitz * Rational::from_integer(hi.ceil().to_integer());
            node(Bounds { lo, hi, lipschitz }, move |x| ev(x).exp_unchecked(&bound))
        }
        Expr::Sqrt(a) => {
            let Node { b: a, ev } = analyze(a, x)?;
            if !a.lo.is_positive() {
                if a.lipschitz.is_zero() && !a.hi.is_negative() {
                    // constant argument
                    let (lo, hi) = sqrt_enclosure(&a.hi, 64);
                    let b = Bounds {
                        lo,
                        hi,
                        lipschitz: zero(),
                    };
                    return Ok(node(b, move |x| ev(x).sqrt_nonneg()));
                }
                return Err(DslError::Unbounded(format!(
                    "sqrt argument range [{}, {}] reaches 0, where sqrt has no Lipschitz bound",
                    a.lo, a.hi
                )));
            }
            let mut w = 16;
            let root_lo = loop {
                let (lo, _) = sqrt_enclosure(&a.lo, w);
                if lo.is_positive() {
                    break lo;
                }
                w *= 2;
            };
            let hi = sqrt_enclosure(&a.hi, 64).1;
            node(
                Bounds {
                    lipschitz: &a.lipschitz / (Rational::from_integer(2.into()) * &root_lo),
                    lo: root_lo,
                    hi,
                },
                move |x| ev(x).sqrt_nonneg(),
            )
        }
    })
}

fn analyze_interval(e: &Expr, interval: &Interval) -> Result<Node, DslError> {
    analyze(
        e,
        &Bounds {
            lo: interval.lo.clone(),
            hi: interval.hi.clone(),
            lipschitz: Rational::one(),
        },
    )
}

/// Range and Lipschitz bound of `e` on `interval`.
pub fn analyze_on(e: &Expr, interval: &Interval) -> Result<Bounds, DslError> {
    Ok(analyze_interval(e, interval)?.b)
}

/// Uniform modulus `k -> max(1, ceil(L k))` from the Lipschitz bound.
#[derive(Clone)]
pub struct DerivedModulus {
    pub bounds: Bounds,
    pub modulus: Modulus,
}

pub fn derive_modulus(e: &Expr, interval: &Interval) -> Result<DerivedModulus, DslError> {
    let bounds = analyze_on(e, interval)?;
    Ok(DerivedModulus {
        modulus: Modulus::lipschitz(bounds.lipschitz.clone()),
        bounds,
    })
}

/// The function denoted by `e` on `interval`; polynomials keep their
/// coefficients.
pub fn to_real_fn(e: &Expr, interval: &Interval) -> Result<RealFn, DslError> {
    if let Some(p) = e.as_poly() {
        return Ok(RealFn::polynomial(p));
    }
    let ev = analyze_interval(e, interval)?.ev;
    Ok(RealFn::new(move |x| ev(x)))
}

/// `e` on `interval` with its derived modulus and range.
pub fn compile(e: &Expr, interval: &Interval) -> Result<(FnWithModulus, DerivedModulus), DslError> {
    let d = derive_modulus(e, interval)?;
    let f = FnWithModulus::new(
        to_real_fn(e, interval)?,
        FnModulus::Uniform(d.modulus.clone()),
        interval.clone(),
    )
    .with_range(Range {
        lo: d.bounds.lo.clone(),
        hi: d.bounds.hi.clone(),
    });
    Ok((f, d))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn parses_documented_examples() {
        assert_eq!(
            parse_expr("x - 1/2").unwrap(),
            Expr::Sub(Box::new(Expr::X), Box::new(Expr::Lit(rat(1, 2))))
        );
        let e = parse_expr("exp(1/(x*x + 1/16 : 1/16))").unwrap();
        let Expr::Exp(inner) = &e else { panic!() };
        assert!(matches!(&**inner, Expr::Div { guard: Some(g), .. } if *g == rat(1, 16)));
        assert_eq!(
            parse_expr("x +"),
            Err(DslError::Syntax {
                column: 3,
                message: "unexpected end of input".into()
            })
        );
    }

    #[test]
    fn diagnostics() {
        assert!(matches!(parse_expr("1/x"), Err(DslError::MissingGuard { column: 1 })));
        assert!(matches!(parse_expr("foo(x)"), Err(DslError::UnknownIdentifier { column: 0, .. })));
        assert!(parse_expr("(x : 1)").is_err());
        assert!(parse_expr("1/(x : 0)").is_err());
    }

    #[test]
    fn documented_moduli() {
        let unit = Interval::unit();
        let g = |s: &str| derive_modulus(&parse_expr(s).unwrap(), &unit).unwrap().modulus;
        for k in [1u64, 5, 100] {
            assert_eq!(g("x").at(k), k.into());
            assert_eq!(g("x*x").at(k), (2 * k).into());
            assert_eq!(g("exp(x)").at(k), (3 * k).into());
        }
    }

    #[test]
    fn display_round_trip() {
        for s in ["x - 1/2", "exp(1/(x*x + 1/16 : 1/16))", "-x*min(x, 1/3) + abs(x - 2)", "sqrt(x + 1) / 3"] {
            let e = parse_expr(s).unwrap();
            assert_eq!(parse_expr(&e.to_string()).unwrap(), e, "{s}");
        }
    }
}
