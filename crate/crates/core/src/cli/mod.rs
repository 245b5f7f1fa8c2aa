//! Command-line front end. Every run recomputes a certificate for its own
//! result before printing and exits nonzero when it cannot.
//!
//! Exit codes: `0` success, `1` usage or parse error, `2` failed precondition
//! or certificate, `3` fuel exhausted.

pub mod dsl;

use std::collections::BTreeMap;
use std::ffi::OsString;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::{One, Signed};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::analysis::{
    evt_ef, integrate_ef, ivt_ef, ivt_residual, precision_for, riemann_jump_demo, sup_tb,
    AnalysisError, TotallyBoundedSet, JUMP_MAX_M,
};
use crate::cantor::suite::{functional, functional_names, tree, tree_names, trees};
use crate::cantor::{
    all_trees, fan_modulus, muc_check, scf_check, theta_from_fan, wkl_leftmost, BinaryTree,
    CantorError, FiniteBinary,
};
use crate::extract::{
    least_zero, mu_from_dif, mu_from_mpc, mu_from_rie, oracle_dif, oracle_mpc, oracle_rie,
    seq_from_prefix,
};
use crate::function::{FunctionError, Interval, Poly};
use crate::rational::{ceil_dyadic, parse_rational, pow2, pow2_neg, Rational};
use dsl::{compile, parse_expr, DslError};

/// Longest `--seq` accepted by `grilliot`.
pub const MAX_SEQ_LEN: usize = 20;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Parse(#[from] DslError),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("fuel exhausted: {0}")]
    Fuel(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Parse(
                DslError::Syntax { .. } | DslError::UnknownIdentifier { .. } | DslError::MissingGuard { .. },
            ) => 1,
            CliError::Parse(_) | CliError::Precondition(_) => 2,
            CliError::Fuel(_) => 3,
        }
    }
}

impl From<AnalysisError> for CliError {
    fn from(e: AnalysisError) -> Self {
        CliError::Precondition(e.to_string())
    }
}

impl From<FunctionError> for CliError {
    fn from(e: FunctionError) -> Self {
        CliError::Precondition(e.to_string())
    }
}

impl From<CantorError> for CliError {
    fn from(e: CantorError) -> Self {
        match e {
            CantorError::FuelExhausted { .. } => CliError::Fuel(e.to_string()),
            CantorError::Parse(_) => CliError::Usage(e.to_string()),
            _ => CliError::Precondition(e.to_string()),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "certreal", version, about = "Certified exact-real analysis")]
pub struct Cli {
    /// Print a JSON record instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Search fuel for the Cantor-space commands.
    #[arg(long, global = true, env = "CERTREAL_FUEL", default_value_t = 64,
          value_parser = clap::value_parser!(u64).range(1..))]
    pub fuel: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct FnArgs {
    /// Function of `x`, e.g. "x*x - 1/2" or "exp(1/(x*x + 1/16 : 1/16))".
    #[arg(long)]
    pub expr: String,
    /// Target precision: the result is good to 1/k.
    #[arg(short, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
    pub k: u64,
    /// Domain `a,b` with rational endpoints.
    #[arg(long, default_value = "0,1", allow_hyphen_values = true)]
    pub interval: String,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// A point where f is within 1/k of zero (needs f(a) < 0 < f(b)).
    Ivt(FnArgs),
    /// A point where f is within 1/k of its maximum.
    Evt(FnArgs),
    /// The integral of f over the interval, to within 1/k.
    Integrate(FnArgs),
    /// The supremum of a finite set of rationals, to within 1/k.
    Sup {
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        points: Vec<String>,
        #[arg(short, default_value_t = 100, value_parser = clap::value_parser!(u64).range(1..))]
        k: u64,
    },
    /// Fan modulus of a built-in functional.
    FanModulus {
        #[arg(long)]
        functional: String,
    },
    /// Special fan functional of a built-in functional.
    Theta {
        #[arg(long)]
        functional: String,
    },
    /// Leftmost member of length --fuel of a built-in tree.
    WklPath {
        #[arg(long)]
        tree: String,
    },
    /// Least zero of a sequence via a modulus functional.
    Grilliot {
        #[arg(long, value_enum)]
        mode: Mode,
        /// Comma-separated naturals; the sequence continues with 1s.
        #[arg(long)]
        seq: String,
    },
    /// Demonstrations.
    Demo {
        #[command(subcommand)]
        demo: Demo,
    },
}

#[derive(Subcommand, Debug)]
pub enum Demo {
    /// Two Riemann sums of f0 with small mesh that differ by more than 2^m.
    RiemannJump {
        #[arg(short)]
        m: u32,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Mpc,
    Dif,
    Rie,
}

#[derive(Serialize, Debug, Clone, PartialEq, Eq)]
pub struct RatJson {
    pub num: String,
    pub den: String,
}

impl From<&Rational> for RatJson {
    fn from(q: &Rational) -> Self {
        RatJson {
            num: q.numer().to_string(),
            den: q.denom().to_string(),
        }
    }
}

#[derive(Serialize, Debug, Clone)]
pub struct Certificate {
    pub kind: &'static str,
    pub bound: Option<RatJson>,
    pub ok: bool,
}

/// Output record; field order is the JSON key order.
#[derive(Serialize, Debug, Clone)]
pub struct Report {
    pub command: String,
    pub inputs: BTreeMap<String, String>,
    pub result: Option<RatJson>,
    pub precision_k: u64,
    pub certificate: Certificate,
    pub detail: Value,
}

/// What a run printed and how it exits.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

fn parse_interval(s: &str) -> Result<Interval, CliError> {
    let bad = || CliError::Usage(format!("--interval expects `a,b` with rationals a < b, got `{s}`"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    let (a, b) = (
        parse_rational(a.trim()).ok_or_else(bad)?,
        parse_rational(b.trim()).ok_or_else(bad)?,
    );
    Interval::new(a, b).map_err(|_| bad())
}

fn rat_text(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Decimal rendering truncated to 12 places.
fn decimal(q: &Rational) -> String {
    let scale = Rational::from_integer(num_bigint::BigInt::from(10u64.pow(12)));
    let t = (q.abs() * scale).floor().to_integer();
    let s = format!("{:013}", t);
    let (int, frac) = s.split_at(s.len() - 12);
    let sign = if q.is_negative() { "-" } else { "" };
    format!("{sign}{int}.{frac}")
}

fn fn_inputs(a: &FnArgs) -> BTreeMap<String, String> {
    BTreeMap::from([
        ("expr".into(), a.expr.clone()),
        ("interval".into(), a.interval.clone()),
        ("k".into(), a.k.to_string()),
    ])
}

fn report(
    command: &str,
    inputs: BTreeMap<String, String>,
    result: Option<&Rational>,
    k: u64,
    certificate: Certificate,
    detail: Value,
) -> Report {
    Report {
        command: command.into(),
        inputs,
        result: result.map(RatJson::from),
        precision_k: k,
        certificate,
        detail,
    }
}

fn one_over(k: u64) -> Rational {
    Rational::new(1.into(), k.into())
}

fn run_ivt(a: &FnArgs) -> Result<Report, CliError> {
    let interval = parse_interval(&a.interval)?;
    let (f, d) = compile(&parse_expr(&a.expr)?, &interval)?;
    let r = ivt_ef(&f, a.k)?;
    let (bound, _) = ivt_residual(&f.f, &r.x, a.k);
    // rounding up keeps the bound valid and the record short
    let bound = ceil_dyadic(&bound, precision_for(a.k) + 32);
    let ok = bound < one_over(a.k);
    Ok(report(
        "ivt",
        fn_inputs(a),
        Some(&r.x),
        a.k,
        Certificate {
            kind: "residual",
            bound: Some((&bound).into()),
            ok,
        },
        json!({
            "grid": r.grid,
            "precision": r.precision,
            "lipschitz": rat_text(&d.bounds.lipschitz),
        }),
    ))
}

/// Most grid points used by the dominance check.
const DOMINANCE_POINTS: u64 = 4096;

fn run_evt(a: &FnArgs) -> Result<Report, CliError> {
    let interval = parse_interval(&a.interval)?;
    let (f, _) = compile(&parse_expr(&a.expr)?, &interval)?;
    let set = TotallyBoundedSet::dyadic(&interval);
    let r = evt_ef(&f, &set, a.k)?;
    let x = r
        .point_rational
        .clone()
        .expect("dyadic sets have rational points");
    // recheck f(y) <= f(x*) + 1/k on an independent uniform grid
    let p = (a.k.min(1 << 20) + 4) as u32;
    let fx = f.f.apply_rational(&x).approx(p);
    let m = (4 * r.net.max(1)).min(DOMINANCE_POINTS);
    let w = interval.width() / Rational::from_integer(m.into());
    let mut excess: Option<Rational> = None;
    for j in 0..=m {
        let y = &interval.lo + &w * Rational::from_integer(j.into());
        let e = f.f.apply_rational(&y).approx(p) - &fx + pow2_neg(p - 1);
        if excess.as_ref().is_none_or(|c| e > *c) {
            excess = Some(e);
        }
    }
    let excess = ceil_dyadic(&excess.unwrap(), precision_for(a.k) + 32);
    let ok = excess < one_over(a.k);
    Ok(report(
        "evt",
        fn_inputs(a),
        Some(&x),
        a.k,
        Certificate {
            kind: "dominance",
            bound: Some((&excess).into()),
            ok,
        },
        json!({
            "index": r.index,
            "net": r.net,
            "value": rat_text(&r.value),
            "checked_points": m + 1,
        }),
    ))
}

/// `int_a^b p`.
fn poly_integral(p: &Poly, a: &Rational, b: &Rational) -> Rational {
    p.coeffs()
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let n = i as i32 + 1;
            c * (b.pow(n) - a.pow(n)) / Rational::from_integer(n.into())
        })
        .sum()
}

fn run_integrate(a: &FnArgs) -> Result<Report, CliError> {
    let interval = parse_interval(&a.interval)?;
    let e = parse_expr(&a.expr)?;
    let (f, d) = compile(&e, &interval)?;
    let n = precision_for(a.k);
    let integral = integrate_ef(&f)?;
    let (kind, r, bound) = match e.as_poly() {
        Some(p) => {
            let r = integral.approx(n);
            let exact = poly_integral(&p, &interval.lo, &interval.hi);
            ("oracle-agreement", r.clone(), (&r - exact).abs())
        }
        None => {
            // a finer approximation c bounds |r - I| by |r - c| + 2^-(n+2) <= 2^-n
            let r = integral.approx(n + 1);
            let c = integral.approx(n + 2);
            ("self-agreement", r.clone(), (&r - c).abs() + pow2_neg(n + 2))
        }
    };
    let ok = bound < one_over(a.k);
    Ok(report(
        "integrate",
        fn_inputs(a),
        Some(&r),
        a.k,
        Certificate {
            kind,
            bound: Some((&bound).into()),
            ok,
        },
        json!({ "precision": n, "lipschitz": rat_text(&d.bounds.lipschitz) }),
    ))
}

fn run_sup(points: &[String], k: u64) -> Result<Report, CliError> {
    let qs: Vec<Rational> = points
        .iter()
        .map(|s| {
            parse_rational(s.trim()).ok_or_else(|| CliError::Usage(format!("bad rational `{s}` in --points")))
        })
        .collect::<Result<_, _>>()?;
    let truth = qs.iter().max().cloned().expect("clap requires at least one point");
    let set = TotallyBoundedSet::finite(qs)?;
    let r = sup_tb(&set).approx(precision_for(k));
    let bound = (&r - &truth).abs();
    let ok = bound < one_over(k);
    Ok(report(
        "sup",
        BTreeMap::from([("points".into(), points.join(",")), ("k".into(), k.to_string())]),
        Some(&r),
        k,
        Certificate {
            kind: "oracle-agreement",
            bound: Some((&bound).into()),
            ok,
        },
        json!({ "points": points.len() }),
    ))
}

fn lookup_functional(name: &str) -> Result<crate::cantor::CantorFunctional, CliError> {
    functional(name).ok_or_else(|| {
        CliError::Usage(format!(
            "unknown functional `{name}`; known: {}",
            functional_names().join(", ")
        ))
    })
}

fn lookup_tree(name: &str) -> Result<BinaryTree, CliError> {
    tree(name).ok_or_else(|| {
        CliError::Usage(format!("unknown tree `{name}`; known: {}", tree_names().join(", ")))
    })
}

fn run_fan(name: &str, fuel: u64) -> Result<Report, CliError> {
    let y = lookup_functional(name)?;
    let omega = fan_modulus(&y, fuel)?;
    let ok = muc_check(&y, omega)?;
    let v = Rational::from_integer(omega.into());
    Ok(report(
        "fan-modulus",
        BTreeMap::from([("functional".into(), name.into()), ("fuel".into(), fuel.to_string())]),
        Some(&v),
        1,
        Certificate {
            kind: "cylinder-check",
            bound: Some((&v).into()),
            ok,
        },
        json!({ "cylinders": 1u64 << omega }),
    ))
}

fn run_theta(name: &str, fuel: u64) -> Result<Report, CliError> {
    let g = lookup_functional(name)?;
    let theta = theta_from_fan(&g, fuel)?;
    let mut checked = 0usize;
    let mut ok = true;
    let small = all_trees(3)
        .into_iter()
        .enumerate()
        .map(|(i, m)| BinaryTree::from_strings(format!("depth3-{i}"), m));
    for t in trees().into_iter().chain(small) {
        ok &= scf_check(&theta, &g, &t)?;
        checked += 1;
    }
    let k = Rational::from_integer(theta.k.into());
    Ok(report(
        "theta",
        BTreeMap::from([("functional".into(), name.into()), ("fuel".into(), fuel.to_string())]),
        Some(&k),
        1,
        Certificate {
            kind: "scf",
            bound: Some((&k).into()),
            ok,
        },
        json!({ "depth": theta.depth, "w_len": theta.w_len(), "trees_checked": checked }),
    ))
}

/// Largest depth at which the leftmost property is rechecked by enumeration.
const WKL_RECHECK_DEPTH: usize = 20;

fn run_wkl(name: &str, fuel: u64) -> Result<Report, CliError> {
    let t = lookup_tree(name)?;
    let depth = usize::try_from(fuel).map_err(|_| CliError::Usage("fuel too large".into()))?;
    if depth > 1 << 16 {
        return Err(CliError::Usage(format!("wkl-path depth {depth} exceeds 65536")));
    }
    let r = wkl_leftmost(&t, depth);
    if r.empty {
        return Err(CliError::Precondition(format!(
            "tree `{name}` has no member of length {depth}"
        )));
    }
    let member = t.contains(r.path.bits());
    let leftmost_checked = depth <= WKL_RECHECK_DEPTH;
    let leftmost = !leftmost_checked
        || FiniteBinary::all(depth).find(|s| t.contains(s.bits())).as_ref() == Some(&r.path);
    let value: Rational = r
        .path
        .bits()
        .iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .map(|(i, _)| pow2_neg(i as u32 + 1))
        .sum();
    Ok(report(
        "wkl-path",
        BTreeMap::from([("tree".into(), name.into()), ("fuel".into(), fuel.to_string())]),
        Some(&value),
        1,
        Certificate {
            kind: "membership",
            bound: None,
            ok: member && leftmost,
        },
        json!({ "path": r.path.to_string(), "leftmost_checked": leftmost_checked }),
    ))
}

fn run_grilliot(mode: Mode, seq: &str) -> Result<Report, CliError> {
    let prefix: Vec<u64> = seq
        .split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| CliError::Usage(format!("--seq expects comma-separated naturals, got `{s}`")))
        })
        .collect::<Result<_, _>>()?;
    if prefix.len() > MAX_SEQ_LEN {
        return Err(CliError::Usage(format!("--seq is limited to {MAX_SEQ_LEN} entries")));
    }
    // oracle for the family whose zeros all lie before the prefix ends
    let lower = pow2_neg(prefix.len() as u32);
    let f = seq_from_prefix(&prefix);
    let r = match mode {
        Mode::Mpc => mu_from_mpc(&oracle_mpc(&lower), &f),
        Mode::Dif => mu_from_dif(&oracle_dif(&lower), &f),
        Mode::Rie => mu_from_rie(&oracle_rie(&lower), &f),
    };
    let truth = least_zero(&prefix);
    let found = r.found.map(|n| Rational::from_integer(n.into()));
    let bound = Rational::from_integer(r.search_bound.into());
    Ok(report(
        "grilliot",
        BTreeMap::from([
            ("mode".into(), format!("{mode:?}").to_lowercase()),
            ("seq".into(), seq.into()),
        ]),
        found.as_ref(),
        1,
        Certificate {
            kind: "oracle-agreement",
            bound: Some((&bound).into()),
            ok: r.found == truth,
        },
        json!({ "found": r.found, "search_bound": r.search_bound }),
    ))
}

fn run_jump(m: u32) -> Result<Report, CliError> {
    if !(2..=JUMP_MAX_M).contains(&m) {
        return Err(CliError::Precondition(format!("m must be in 2..={JUMP_MAX_M}, got {m}")));
    }
    let j = riemann_jump_demo(m)?;
    let n = 20;
    let diff = j.sum_zero_tag.approx(n) - j.sum_sqrt_tag.approx(n);
    let gap = j.gap_lower_bound(n);
    let threshold = pow2(m);
    Ok(report(
        "demo riemann-jump",
        BTreeMap::from([("m".into(), m.to_string())]),
        Some(&diff),
        1 << n,
        Certificate {
            kind: "gap",
            bound: Some((&gap).into()),
            ok: gap > threshold,
        },
        json!({
            "cells": j.cells,
            "sum_zero_tag": rat_text(&j.sum_zero_tag.approx(n)),
            "sum_sqrt_tag": rat_text(&j.sum_sqrt_tag.approx(n)),
            "threshold": rat_text(&threshold),
        }),
    ))
}

/// Executes a parsed command line.
pub fn run_command(cli: &Cli) -> Result<Report, CliError> {
    match &cli.command {
        Command::Ivt(a) => run_ivt(a),
        Command::Evt(a) => run_evt(a),
        Command::Integrate(a) => run_integrate(a),
        Command::Sup { points, k } => run_sup(points, *k),
        Command::FanModulus { functional } => run_fan(functional, cli.fuel),
        Command::Theta { functional } => run_theta(functional, cli.fuel),
        Command::WklPath { tree } => run_wkl(tree, cli.fuel),
        Command::Grilliot { mode, seq } => run_grilliot(*mode, seq),
        Command::Demo {
            demo: Demo::RiemannJump { m },
        } => run_jump(*m),
    }
}

fn render_text(r: &Report) -> String {
    let rat = |j: &RatJson| {
        let q = Rational::new(j.num.parse().unwrap(), j.den.parse().unwrap());
        if q.denom().is_one() {
            rat_text(&q)
        } else {
            format!("{} (~{})", rat_text(&q), decimal(&q))
        }
    };
    let mut out = format!("{}\n", r.command);
    out += &format!(
        "  result:      {}\n",
        r.result.as_ref().map_or("none".to_string(), rat)
    );
    out += &format!(
        "  certificate: {} {} (bound {})\n",
        r.certificate.kind,
        if r.certificate.ok { "ok" } else { "FAILED" },
        r.certificate.bound.as_ref().map_or("-".to_string(), rat)
    );
    if let Value::Object(m) = &r.detail {
        for (k, v) in m {
            out += &format!("  {k}: {v}\n");
        }
    }
    out
}

/// Parses `args` (program name first), runs, and renders.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    match run_command(&cli) {
        Ok(r) => {
            let stdout = if cli.json {
                serde_json::to_string(&r).expect("reports serialize") + "\n"
            } else {
                render_text(&r)
            };
            let (code, stderr) = if r.certificate.ok {
                (0, String::new())
            } else {
                (2, format!("error: certificate `{}` failed\n", r.certificate.kind))
            };
            Outcome { code, stdout, stderr }
        }
        Err(e) => Outcome {
            code: e.exit_code(),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}
