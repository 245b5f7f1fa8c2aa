//! Cantor space: finite and infinite bit sequences, binary trees, the fan
//! functional by bar search, the special fan functional built from it,
//! associates, leftmost paths and the separation functional.
//!
//! Every unbounded search takes an explicit fuel bound; running out is the
//! [`CantorError::FuelExhausted`] outcome rather than a hang.

pub mod suite;

use std::cell::Cell;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Largest depth for which `2^depth` sequences are enumerated.
pub const MAX_ENUM_DEPTH: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CantorError {
    #[error("fuel {fuel} exhausted")]
    FuelExhausted { fuel: u64 },
    #[error("depth {depth} is too small, need at least {needed}")]
    DepthTooSmall { depth: usize, needed: u64 },
    #[error("depth {0} is too large to enumerate")]
    DepthTooLarge(u64),
    #[error("invalid bit string {0:?}")]
    Parse(String),
}

/// A finite bit string.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FiniteBinary(pub Vec<bool>);

impl FiniteBinary {
    pub fn empty() -> Self {
        FiniteBinary(Vec::new())
    }

    /// The `len`-bit string of `value`, most significant bit first.
    pub fn from_value(value: u64, len: usize) -> Self {
        FiniteBinary((0..len).map(|i| (value >> (len - 1 - i)) & 1 == 1).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    /// Bit `i` of `self * 000...`.
    pub fn padded(&self, i: usize) -> bool {
        self.0.get(i).copied().unwrap_or(false)
    }

    pub fn prefix(&self, n: usize) -> FiniteBinary {
        FiniteBinary(self.0[..n.min(self.0.len())].to_vec())
    }

    pub fn push(&self, b: bool) -> FiniteBinary {
        let mut v = self.0.clone();
        v.push(b);
        FiniteBinary(v)
    }

    /// All `2^len` strings of length `len` in lexicographic order.
    pub fn all(len: usize) -> impl Iterator<Item = FiniteBinary> {
        assert!(len <= MAX_ENUM_DEPTH, "enumeration depth {len} too large");
        (0..1u64 << len).map(move |v| FiniteBinary::from_value(v, len))
    }

    /// Code `2^|s| - 1 + value(s)`: the empty string is 0, then `0`, `1`,
    /// `00`, `01`, ...
    pub fn code(&self) -> u64 {
        let v = self.0.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64);
        (1u64 << self.len()) - 1 + v
    }

    pub fn decode(code: u64) -> FiniteBinary {
        let len = (64 - (code + 1).leading_zeros() - 1) as usize;
        FiniteBinary::from_value(code + 1 - (1u64 << len), len)
    }
}

impl fmt::Display for FiniteBinary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("<>");
        }
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl std::str::FromStr for FiniteBinary {
    type Err = CantorError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s == "<>" || s.is_empty() {
            return Ok(FiniteBinary::empty());
        }
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(CantorError::Parse(s.to_string())),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(FiniteBinary)
    }
}

/// Raised by a [`Probe`] read past its limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReadLimit;

/// Query access to an infinite bit sequence, recording the largest index
/// read. Reads at or past the limit fail.
pub struct Probe<'a> {
    seq: &'a dyn Fn(usize) -> bool,
    limit: Option<usize>,
    max_read: Cell<Option<usize>>,
}

impl<'a> Probe<'a> {
    pub fn new(seq: &'a dyn Fn(usize) -> bool, limit: Option<usize>) -> Self {
        Probe {
            seq,
            limit,
            max_read: Cell::new(None),
        }
    }

    pub fn bit(&self, i: usize) -> Result<bool, ReadLimit> {
        if self.limit.is_some_and(|l| i >= l) {
            return Err(ReadLimit);
        }
        if self.max_read.get().is_none_or(|m| i > m) {
            self.max_read.set(Some(i));
        }
        Ok((self.seq)(i))
    }

    /// Bit `i` as `0` or `1`.
    pub fn get(&self, i: usize) -> Result<u64, ReadLimit> {
        self.bit(i).map(u64::from)
    }

    pub fn max_read(&self) -> Option<usize> {
        self.max_read.get()
    }
}

type FunctionalFn = dyn Fn(&Probe) -> Result<u64, ReadLimit> + Send + Sync;

/// A functional from Cantor space to the naturals, given as a pure program
/// that reads its argument through a [`Probe`].
#[derive(Clone)]
pub struct CantorFunctional {
    name: String,
    f: Arc<FunctionalFn>,
}

impl fmt::Debug for CantorFunctional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CantorFunctional({})", self.name)
    }
}

/// Outcome of one traced evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Traced {
    /// `None` when a read hit the limit.
    pub value: Option<u64>,
    pub max_read: Option<usize>,
}

impl CantorFunctional {
    pub fn new(
        name: impl Into<String>,
        f: impl Fn(&Probe) -> Result<u64, ReadLimit> + Send + Sync + 'static,
    ) -> Self {
        CantorFunctional {
            name: name.into(),
            f: Arc::new(f),
        }
    }

    pub fn constant(c: u64) -> Self {
        CantorFunctional::new(format!("const{c}"), move |_| Ok(c))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn trace(&self, seq: &dyn Fn(usize) -> bool, limit: Option<usize>) -> Traced {
        let p = Probe::new(seq, limit);
        let value = (self.f)(&p).ok();
        Traced {
            value,
            max_read: p.max_read(),
        }
    }

    /// `Y(s * 000...)`, reading below `limit`.
    pub fn trace_padded(&self, s: &FiniteBinary, limit: Option<usize>) -> Traced {
        self.trace(&|i| s.padded(i), limit)
    }

    /// Evaluates on a total sequence. Loops if the functional does.
    pub fn apply(&self, seq: &dyn Fn(usize) -> bool) -> u64 {
        self.trace(seq, None).value.expect("unbounded probe")
    }

    pub fn apply_padded(&self, s: &FiniteBinary) -> u64 {
        self.apply(&|i| s.padded(i))
    }
}

/// Fan functional by bar search: `N` with `Y(f) = Y(g)` whenever `f` and `g`
/// agree on their first `N` bits.
///
/// A prefix `s` is secured when `Y(s * 000...)` reads only indices below
/// `|s|`; then `Y` is constant on all extensions of `s`. The search explores
/// unsecured prefixes depth-first and returns `1 +` the largest index read on
/// the secured bar (`0` if nothing is read). Prefixes longer than `fuel` are
/// never explored.
pub fn fan_modulus(y: &CantorFunctional, fuel: u64) -> Result<u64, CantorError> {
    let limit = fuel.saturating_add(1).min(usize::MAX as u64) as usize;
    let mut stack = vec![FiniteBinary::empty()];
    let mut top: Option<usize> = None;
    while let Some(s) = stack.pop() {
        let t = y.trace_padded(&s, Some(limit));
        let secured = t.value.is_some() && t.max_read.is_none_or(|m| m < s.len());
        if secured {
            if let Some(m) = t.max_read {
                top = Some(top.map_or(m, |x| x.max(m)));
            }
            continue;
        }
        if s.len() as u64 >= fuel {
            return Err(CantorError::FuelExhausted { fuel });
        }
        stack.push(s.push(true));
        stack.push(s.push(false));
    }
    Ok(top.map_or(0, |m| m as u64 + 1))
}

/// Checks the fan modulus `n` on every length-`n` cylinder: `Y` must agree
/// on the representatives `s*000...`, `s*111...` and two mixed tails.
pub fn muc_check(y: &CantorFunctional, n: u64) -> Result<bool, CantorError> {
    if n as usize > MAX_ENUM_DEPTH {
        return Err(CantorError::DepthTooLarge(n));
    }
    let limit = Some(n as usize + 256);
    for s in FiniteBinary::all(n as usize) {
        let tails: [&dyn Fn(usize) -> bool; 4] = [
            &|_| false,
            &|_| true,
            &|i| i % 2 == 0,
            &|i| (i * 7 + 3) % 5 < 2,
        ];
        let mut first = None;
        for tail in tails {
            let v = y.trace(&|i| if i < s.len() { s.0[i] } else { tail(i) }, limit).value;
            match (first, v) {
                (_, None) => return Ok(false),
                (None, Some(v)) => first = Some(v),
                (Some(a), Some(b)) if a != b => return Ok(false),
                _ => {}
            }
        }
    }
    Ok(true)
}

/// Output `(w, k)` of the special fan functional.
///
/// `w` is `{ s * 000... : |s| = depth }`, kept implicit because the depth can
/// far exceed what can be listed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaResult {
    pub k: u64,
    /// Common length of the strings standing for the members of `w`.
    pub depth: usize,
}

impl ThetaResult {
    /// `|w|`, when it fits in a `u64`.
    pub fn w_len(&self) -> Option<u64> {
        1u64.checked_shl(self.depth as u32)
    }

    /// The members of `w` in lexicographic order.
    pub fn w(&self) -> Result<impl Iterator<Item = FiniteBinary>, CantorError> {
        if self.depth > MAX_ENUM_DEPTH {
            return Err(CantorError::DepthTooLarge(self.depth as u64));
        }
        Ok(FiniteBinary::all(self.depth))
    }
}

/// Largest value of `g` on `s * 000...` over strings `s` of length `n`.
fn max_on_level(g: &CantorFunctional, n: u64) -> Result<u64, CantorError> {
    if n as usize > MAX_ENUM_DEPTH {
        return Err(CantorError::DepthTooLarge(n));
    }
    Ok(FiniteBinary::all(n as usize)
        .map(|s| g.apply_padded(&s))
        .max()
        .unwrap_or(0))
}

/// Special fan functional from the fan functional.
///
/// `k` is the largest value of `g` on `w`, and `w` has depth
/// `n = max(Omega(g) + 1, k)`: besides `n > Omega(g)` it must cover the
/// prefixes `w(g(w))` that the compactness statement inspects, which
/// `Omega(g) + 1` alone does not.
pub fn theta_from_fan(g: &CantorFunctional, fuel: u64) -> Result<ThetaResult, CantorError> {
    let base = fan_modulus(g, fuel)? + 1;
    // g is constant on length-Omega cylinders, so level Omega + 1 has every value
    let k = max_on_level(g, base)?;
    Ok(ThetaResult {
        k,
        depth: base.max(k) as usize,
    })
}

/// The construction with depth exactly `Omega(g) + 1`. Kept for comparison:
/// it can fail the compactness statement (see the tests).
pub fn theta_literal(g: &CantorFunctional, fuel: u64) -> Result<ThetaResult, CantorError> {
    let n = fan_modulus(g, fuel)? + 1;
    Ok(ThetaResult {
        k: max_on_level(g, n)?,
        depth: n as usize,
    })
}

type TreePredicate = dyn Fn(&[bool]) -> bool + Send + Sync;

/// A binary tree: a string is a member when it and all its prefixes satisfy
/// the raw predicate, so membership is prefix-closed by construction.
#[derive(Clone)]
pub struct BinaryTree {
    name: String,
    raw: Arc<TreePredicate>,
}

impl fmt::Debug for BinaryTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinaryTree({})", self.name)
    }
}

impl BinaryTree {
    pub fn new(
        name: impl Into<String>,
        raw: impl Fn(&[bool]) -> bool + Send + Sync + 'static,
    ) -> Self {
        BinaryTree {
            name: name.into(),
            raw: Arc::new(raw),
        }
    }

    pub fn full() -> Self {
        BinaryTree::new("full", |_| true)
    }

    pub fn empty() -> Self {
        BinaryTree::new("empty", |_| false)
    }

    /// The prefix closure of a finite set of strings.
    pub fn from_strings(name: impl Into<String>, members: Vec<FiniteBinary>) -> Self {
        let set: std::collections::HashSet<Vec<bool>> =
            members.into_iter().map(|s| s.0).collect();
        BinaryTree::new(name, move |s| set.contains(s))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn contains(&self, s: &[bool]) -> bool {
        (0..=s.len()).all(|i| (self.raw)(&s[..i]))
    }

    /// Members of length exactly `len`.
    pub fn level(&self, len: usize) -> Vec<FiniteBinary> {
        let mut out = Vec::new();
        let mut frontier = vec![FiniteBinary::empty()];
        if !self.contains(&[]) {
            return out;
        }
        for _ in 0..len {
            frontier = frontier
                .into_iter()
                .flat_map(|s| [s.push(false), s.push(true)])
                .filter(|s| (self.raw)(&s.0))
                .collect();
        }
        out.extend(frontier);
        out
    }
}

/// Every prefix-closed tree whose members have length `<= depth`, each
/// given by its member list (677 trees for depth 3).
pub fn all_trees(depth: usize) -> Vec<Vec<FiniteBinary>> {
    fn rec(depth: usize) -> Vec<Vec<FiniteBinary>> {
        // either empty, or the root with a left and a right subtree
        let mut out = vec![vec![]];
        let subs = if depth == 0 { vec![vec![]] } else { rec(depth - 1) };
        for l in &subs {
            for r in &subs {
                let mut t = vec![FiniteBinary::empty()];
                t.extend(l.iter().map(|s| FiniteBinary([vec![false], s.0.clone()].concat())));
                t.extend(r.iter().map(|s| FiniteBinary([vec![true], s.0.clone()].concat())));
                out.push(t);
            }
        }
        out
    }
    rec(depth)
}

/// Whether `tree` has a member of length `target` extending `s`, where the
/// bit at position `i >= s.len()` is forced to `forced(i)` when that is
/// `Some`. Depth-first, 0 before 1.
fn reaches(
    tree: &BinaryTree,
    s: &mut Vec<bool>,
    target: usize,
    forced: &dyn Fn(usize) -> Option<bool>,
) -> bool {
    if !tree.contains(s) {
        return false;
    }
    if s.len() >= target {
        return true;
    }
    let choices: &[bool] = match forced(s.len()) {
        Some(false) => &[false],
        Some(true) => &[true],
        None => &[false, true],
    };
    for &b in choices {
        s.push(b);
        let ok = reaches(tree, s, target, forced);
        s.pop();
        if ok {
            return true;
        }
    }
    false
}

/// SCF instance: if `w(g(w))` is outside `T` for every `w` in `theta.w`,
/// then every sequence has a prefix of length `<= theta.k` outside `T`.
///
/// Decided without listing `w`. The conclusion holds iff `T` has no member
/// of length `k`. For the hypothesis, `g` is constant on the members of `w`
/// extending a string `t` of length `c = min(depth, Omega(g))`, say with
/// value `m`; the strings `w(m)` for those members are the length-`m` strings
/// that agree with `t` below `c`, are free on `[c, depth)` and are `0` from
/// `depth` on, and the hypothesis fails iff one of them is in `T`.
pub fn scf_check(
    theta: &ThetaResult,
    g: &CantorFunctional,
    tree: &BinaryTree,
) -> Result<bool, CantorError> {
    Ok(ScfChecker::new(theta, g)?.check(tree))
}

/// [`scf_check`] with the work that does not depend on the tree done once.
#[derive(Debug, Clone)]
pub struct ScfChecker {
    depth: usize,
    k: usize,
    /// Distinct `(t restricted below min(c, m), m)` over the cylinders `t`.
    probes: Vec<(Vec<bool>, usize)>,
}

impl ScfChecker {
    pub fn new(theta: &ThetaResult, g: &CantorFunctional) -> Result<Self, CantorError> {
        let n = theta.depth;
        let c = match fan_modulus(g, n as u64) {
            Ok(omega) => (omega as usize).min(n),
            Err(CantorError::FuelExhausted { .. }) => n,
            Err(e) => return Err(e),
        };
        if c > MAX_ENUM_DEPTH {
            return Err(CantorError::DepthTooLarge(c as u64));
        }
        let mut probes: Vec<(Vec<bool>, usize)> = FiniteBinary::all(c)
            .map(|t| {
                let m = g.apply_padded(&t) as usize;
                (t.0[..m.min(c)].to_vec(), m)
            })
            .collect();
        probes.sort();
        probes.dedup();
        Ok(ScfChecker {
            depth: n,
            k: theta.k as usize,
            probes,
        })
    }

    pub fn check(&self, tree: &BinaryTree) -> bool {
        let n = self.depth;
        let hypothesis = self.probes.iter().all(|(t, m)| {
            let forced = |i: usize| {
                if i < t.len() {
                    Some(t[i])
                } else if i < n {
                    None
                } else {
                    Some(false)
                }
            };
            !reaches(tree, &mut Vec::new(), *m, &forced)
        });
        !hypothesis || !reaches(tree, &mut Vec::new(), self.k, &|_| None)
    }
}

/// [`scf_check`] by enumeration: lists `w` and every string of length
/// `depth >= theta.k`.
pub fn scf_check_enumerated(
    theta: &ThetaResult,
    g: &CantorFunctional,
    tree: &BinaryTree,
    depth: usize,
) -> Result<bool, CantorError> {
    if (depth as u64) < theta.k {
        return Err(CantorError::DepthTooSmall {
            depth,
            needed: theta.k,
        });
    }
    if depth > MAX_ENUM_DEPTH {
        return Err(CantorError::DepthTooLarge(depth as u64));
    }
    let antecedent = theta.w()?.all(|a| {
        let n = g.apply_padded(&a) as usize;
        let pre: Vec<bool> = (0..n).map(|i| a.padded(i)).collect();
        !tree.contains(&pre)
    });
    if !antecedent {
        return Ok(true);
    }
    let k = theta.k as usize;
    Ok(FiniteBinary::all(depth).all(|b| (0..=k).any(|i| !tree.contains(&b.0[..i]))))
}

/// Leftmost-path search at depth `fuel`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WklPath {
    pub path: FiniteBinary,
    /// Set when the tree has no member of length `fuel`; `path` is then all zeros.
    pub empty: bool,
}

/// Bit by bit, choose `0` if the path so far extended by `0` extends to a
/// member of length `fuel`, otherwise `1`.
pub fn wkl_leftmost(tree: &BinaryTree, fuel: usize) -> WklPath {
    fn extends(tree: &BinaryTree, s: &mut Vec<bool>, target: usize) -> bool {
        if !tree.contains(s) {
            return false;
        }
        if s.len() == target {
            return true;
        }
        for b in [false, true] {
            s.push(b);
            let ok = extends(tree, s, target);
            s.pop();
            if ok {
                return true;
            }
        }
        false
    }
    let mut s = Vec::with_capacity(fuel);
    if !extends(tree, &mut s, fuel) {
        return WklPath {
            path: FiniteBinary(vec![false; fuel]),
            empty: true,
        };
    }
    while s.len() < fuel {
        s.push(false);
        if !extends(tree, &mut s, fuel) {
            *s.last_mut().unwrap() = true;
        }
    }
    WklPath {
        path: FiniteBinary(s),
        empty: false,
    }
}

/// Output of [`sep_with_fuel`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SepResult {
    pub k: u64,
    pub y: u8,
}

/// Separation functional with fuel in place of the unbounded bound.
///
/// `K` is the largest `k <= fuel` such that for all `n1, n2 <= k`,
/// `f1(n1, n) != 0` or `f2(n2, n) != 0` (and `0` if there is none);
/// `Y = 1` iff `f1(n1, n) = 0` for some `n1 <= K`.
pub fn sep_with_fuel(
    f1: &dyn Fn(u64, u64) -> u64,
    f2: &dyn Fn(u64, u64) -> u64,
    n: u64,
    fuel: u64,
) -> SepResult {
    // the condition fails from the first k where both have hit a zero
    let mut zero1 = false;
    let mut zero2 = false;
    let mut k = 0u64;
    let mut found = None;
    loop {
        zero1 |= f1(k, n) == 0;
        zero2 |= f2(k, n) == 0;
        if zero1 && zero2 {
            break;
        }
        found = Some(k);
        if k == fuel {
            break;
        }
        k += 1;
    }
    let kk = found.unwrap_or(0);
    let y = (0..=kk).any(|i| f1(i, n) == 0) as u8;
    SepResult { k: kk, y }
}

type AssocFn = dyn Fn(&[u64]) -> u64 + Send + Sync;

/// A type-one code of a continuous functional: `alpha(b|n) > 0` for some `n`
/// on every `b`, and then `alpha(b|n) - 1` is the value.
#[derive(Clone)]
pub struct Associate(Arc<AssocFn>);

impl fmt::Debug for Associate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Associate")
    }
}

impl Associate {
    pub fn new(alpha: impl Fn(&[u64]) -> u64 + Send + Sync + 'static) -> Self {
        Associate(Arc::new(alpha))
    }

    /// Associate of the constant functional `c`.
    pub fn constant(c: u64) -> Self {
        Associate::new(move |_| c + 1)
    }

    pub fn at(&self, s: &[u64]) -> u64 {
        (self.0)(s)
    }

    /// `alpha` on a binary string.
    pub fn at_bits(&self, s: &FiniteBinary) -> u64 {
        let v: Vec<u64> = s.0.iter().map(|&b| b as u64).collect();
        self.at(&v)
    }
}

/// Least `n <= fuel` with `alpha(b|n) > 0`, returning `alpha(b|n) - 1`.
pub fn eval_associate(
    alpha: &Associate,
    beta: &dyn Fn(u64) -> u64,
    fuel: u64,
) -> Result<u64, CantorError> {
    let mut prefix = Vec::new();
    for n in 0..=fuel {
        let v = alpha.at(&prefix);
        if v > 0 {
            return Ok(v - 1);
        }
        prefix.push(beta(n));
    }
    Err(CantorError::FuelExhausted { fuel })
}

/// The associate read off the query trace: `alpha(s) = Y(s * 000...) + 1`
/// when that evaluation reads only below `|s|`, else `0`. Nonzero entries of
/// `s` count as `1`. Fails when the bar search does not close within `fuel`.
pub fn associate_of(y: &CantorFunctional, fuel: u64) -> Result<Associate, CantorError> {
    fan_modulus(y, fuel)?;
    let y = y.clone();
    Ok(Associate::new(move |s| {
        let bits: Vec<bool> = s.iter().map(|&v| v != 0).collect();
        let t = y.trace(&|i| bits.get(i).copied().unwrap_or(false), Some(bits.len()));
        match t.value {
            Some(v) => v + 1,
            None => 0,
        }
    }))
}

/// Associate of the fan functional, acting on the course of values of an
/// associate: `a` lists `alpha` at the codes `0, 1, ..., m-1`.
///
/// With `L` the largest length whose strings all have codes below `m`, the
/// answer is `N + 1` once every string of length `L` has a prefix `p` with
/// `alpha(p) > 0`, where `N` is the largest least such prefix length;
/// otherwise `0`.
pub fn fan_associate() -> Associate {
    Associate::new(|a: &[u64]| {
        let m = a.len() as u64;
        // strings of length <= L have codes < 2^(L+1) - 1 <= m
        let bits = 64 - (m + 1).leading_zeros() as usize;
        if bits < 2 {
            return 0;
        }
        let l = (bits - 2).min(MAX_ENUM_DEPTH);
        let mut worst = 0usize;
        for s in FiniteBinary::all(l) {
            match (0..=l).find(|&j| a[s.prefix(j).code() as usize] > 0) {
                Some(j) => worst = worst.max(j),
                None => return 0,
            }
        }
        worst as u64 + 1
    })
}

/// Result of [`tof_check`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TofReport {
    pub ok: bool,
    /// `gamma(alpha) - 1` when `gamma` terminated within the depth.
    pub modulus: Option<u64>,
}

/// TOF instance check at `depth`: `gamma` must terminate on `alpha` using
/// `alpha` at codes of strings of length `<= depth`, and any two binary
/// sequences agreeing on the first `M = gamma(alpha) - 1` bits must get the
/// same `alpha` value (checked over all strings of length `depth`).
pub fn tof_check(
    gamma: &Associate,
    alpha: &Associate,
    depth: usize,
) -> Result<TofReport, CantorError> {
    if depth > MAX_ENUM_DEPTH {
        return Err(CantorError::DepthTooLarge(depth as u64));
    }
    let codes = (1u64 << (depth + 1)) - 1;
    let course = |n: u64| alpha.at_bits(&FiniteBinary::decode(n));
    let Ok(m) = eval_associate(gamma, &course, codes) else {
        return Ok(TofReport {
            ok: false,
            modulus: None,
        });
    };
    if m as usize > depth {
        return Err(CantorError::DepthTooSmall { depth, needed: m });
    }
    let mut seen: std::collections::HashMap<FiniteBinary, u64> = Default::default();
    for t in FiniteBinary::all(depth) {
        let bits: Vec<u64> = t.0.iter().map(|&b| b as u64).collect();
        let val = match eval_associate(alpha, &|i| bits[i as usize], depth as u64) {
            Ok(x) => x,
            Err(_) => {
                return Ok(TofReport {
                    ok: false,
                    modulus: Some(m),
                })
            }
        };
        let key = t.prefix(m as usize);
        if *seen.entry(key).or_insert(val) != val {
            return Ok(TofReport {
                ok: false,
                modulus: Some(m),
            });
        }
    }
    Ok(TofReport {
        ok: true,
        modulus: Some(m),
    })
}
