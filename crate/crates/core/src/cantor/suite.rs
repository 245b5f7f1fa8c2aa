//! Named functionals and trees shared by the CLI and the tests.

use super::{BinaryTree, CantorFunctional, FiniteBinary, Probe, ReadLimit};

fn count_ones(p: &Probe, n: usize) -> Result<u64, ReadLimit> {
    (0..n).map(|i| p.get(i)).sum()
}

/// Continuous functionals with small fan moduli.
pub fn functionals() -> Vec<CantorFunctional> {
    use CantorFunctional as F;
    vec![
        F::constant(0),
        F::constant(2),
        F::constant(7),
        F::new("bit0", |p| p.get(0)),
        F::new("bit1", |p| p.get(1)),
        F::new("bit3", |p| p.get(3)),
        F::new("bit11", |p| p.get(11)),
        F::new("sum01", |p| Ok(p.get(0)? + p.get(1)?)),
        F::new("and24", |p| Ok(p.get(2)? * p.get(4)?)),
        F::new("value3", |p| Ok(p.get(0)? + 2 * p.get(1)? + 4 * p.get(2)?)),
        F::new("value6", |p| (0..6).try_fold(0, |acc, i| Ok(2 * acc + p.get(i)?))),
        F::new("parity5", |p| Ok(count_ones(p, 5)? % 2)),
        F::new("count8", |p| count_ones(p, 8)),
        F::new("majority5", |p| Ok((count_ones(p, 5)? >= 3) as u64)),
        F::new("weighted9", |p| (0..9).try_fold(0, |acc, i| Ok(acc + i as u64 * p.get(i)?))),
        F::new("branch", |p| if p.bit(0)? { p.get(5) } else { p.get(1) }),
        F::new("pointer", |p| {
            let at = p.get(0)? + 2 * p.get(1)? + 4 * p.get(2)?;
            p.get(3 + at as usize)
        }),
        F::new("first-one-below-10", |p| {
            for i in 0..10 {
                if p.bit(i)? {
                    return Ok(i as u64);
                }
            }
            Ok(10)
        }),
        F::new("first-zero-below-12", |p| {
            for i in 0..12 {
                if !p.bit(i)? {
                    return Ok(i as u64);
                }
            }
            Ok(12)
        }),
        F::new("leading-ones-cap6", |p| {
            let mut n = 0;
            while n < 6 && p.bit(n)? {
                n += 1;
            }
            Ok(n as u64)
        }),
        F::new("longest-run7", |p| {
            let (mut best, mut run) = (0u64, 0u64);
            for i in 0..7 {
                run = if p.bit(i)? { run + 1 } else { 0 };
                best = best.max(run);
            }
            Ok(best)
        }),
        F::new("self-depth", |p| {
            // reads as many further bits as the first two encode
            let n = p.get(0)? + 2 * p.get(1)?;
            (2..2 + n as usize).try_fold(n, |acc, i| Ok(acc + p.get(i)?))
        }),
    ]
}

/// Least `n` with `f(n) = 1`: discontinuous at `000...`, so the bar search
/// never closes.
pub fn first_one() -> CantorFunctional {
    CantorFunctional::new("first-one", |p| {
        let mut i = 0;
        while !p.bit(i)? {
            i += 1;
        }
        Ok(i as u64)
    })
}

pub fn functional(name: &str) -> Option<CantorFunctional> {
    if name == "first-one" {
        return Some(first_one());
    }
    functionals().into_iter().find(|f| f.name() == name)
}

pub fn functional_names() -> Vec<String> {
    let mut v: Vec<String> = functionals().iter().map(|f| f.name().to_string()).collect();
    v.push("first-one".into());
    v
}

pub fn trees() -> Vec<BinaryTree> {
    vec![
        BinaryTree::full(),
        BinaryTree::empty(),
        BinaryTree::new("no-11", |s| !s.windows(2).any(|w| w[0] && w[1])),
        BinaryTree::new("starts-with-1", |s| s.first().is_none_or(|&b| b)),
        BinaryTree::new("ones-after-2", |s| s.iter().skip(2).all(|&b| b)),
        BinaryTree::new("depth3", |s| s.len() <= 3),
        BinaryTree::new("even-ones", |s| {
            // every even-length prefix has an even number of ones
            s.len() % 2 == 1 || s.iter().filter(|&&b| b).count() % 2 == 0
        }),
        BinaryTree::from_strings(
            "finite-example",
            ["<>", "0", "1", "01", "11", "011", "010", "110", "111"]
                .iter()
                .map(|s| s.parse::<FiniteBinary>().unwrap())
                .collect(),
        ),
    ]
}

pub fn tree(name: &str) -> Option<BinaryTree> {
    trees().into_iter().find(|t| t.name() == name)
}

pub fn tree_names() -> Vec<String> {
    trees().iter().map(|t| t.name().to_string()).collect()
}
