//! Coplanarity and joints for sets of matroid lines.
//!
//! A point `x` is a joint of a line set when it lies on three lines whose
//! union has rank at least 4, i.e. is not contained in any plane. The
//! `n`-dimensional version asks for `n` lines through `x` whose union has
//! rank at least `n + 1`.

use itertools::Itertools;

use super::{Flat, IndependenceOracle, Matroid};
use crate::error::{Error, Result};
use crate::subset;

fn check_lines<O: IndependenceOracle>(m: &Matroid<O>, lines: &[Flat]) -> Result<()> {
    for l in lines {
        let v = m.normalize(&l.members)?;
        if l.rank != 2 || v != l.members || m.rank_of(&v) != 2 || m.closure_of(&v) != v {
            return Err(Error::NotALine {
                members: l.members.clone(),
            });
        }
    }
    Ok(())
}

fn union_all<'a>(lines: impl IntoIterator<Item = &'a Flat>) -> Vec<usize> {
    lines
        .into_iter()
        .fold(Vec::new(), |acc, l| subset::union(&acc, &l.members))
}

/// `true` iff the union of `lines` has rank at most 3.
pub fn coplanar<O: IndependenceOracle>(m: &Matroid<O>, lines: &[Flat]) -> Result<bool> {
    check_lines(m, lines)?;
    let u = union_all(lines);
    Ok(!m.rank_at_least(&u, 4)?)
}

/// Indices into `lines` of the lines containing `x`, in input order.
pub fn lines_through(x: usize, lines: &[Flat]) -> Vec<usize> {
    lines
        .iter()
        .enumerate()
        .filter(|(_, l)| l.contains(x))
        .map(|(i, _)| i)
        .collect()
}

/// First `n`-tuple (lexicographic in `lines` order) of lines through `x`
/// whose union has rank at least `n + 1`. Lines must already be validated.
fn witness_unchecked<O: IndependenceOracle>(
    m: &Matroid<O>,
    x: usize,
    lines: &[Flat],
    n: usize,
) -> Option<Vec<usize>> {
    let through = lines_through(x, lines);
    through.into_iter().combinations(n).find(|combo| {
        let u = union_all(combo.iter().map(|&i| &lines[i]));
        m.basis_capped(&u, n + 1).len() > n
    })
}

/// Indices of three lines through `x` with union of rank >= 4, if any.
pub fn joint_witness<O: IndependenceOracle>(
    m: &Matroid<O>,
    x: usize,
    lines: &[Flat],
) -> Result<Option<[usize; 3]>> {
    m.normalize(&[x])?;
    check_lines(m, lines)?;
    Ok(witness_unchecked(m, x, lines, 3).map(|v| [v[0], v[1], v[2]]))
}

pub fn is_joint<O: IndependenceOracle>(m: &Matroid<O>, x: usize, lines: &[Flat]) -> Result<bool> {
    Ok(joint_witness(m, x, lines)?.is_some())
}

pub fn is_n_joint<O: IndependenceOracle>(
    m: &Matroid<O>,
    x: usize,
    lines: &[Flat],
    n: usize,
) -> Result<bool> {
    if n < 2 {
        return Err(Error::Domain(format!("n-dimensional joints need n >= 2, got {n}")));
    }
    m.normalize(&[x])?;
    check_lines(m, lines)?;
    Ok(witness_unchecked(m, x, lines, n).is_some())
}

/// Every joint of `lines` in ground order, each with the first line triple
/// (indices into `lines`, lexicographic) whose union has rank >= 4.
pub fn joint_witnesses<O: IndependenceOracle>(
    m: &Matroid<O>,
    lines: &[Flat],
) -> Result<Vec<(usize, [usize; 3])>> {
    check_lines(m, lines)?;
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); m.size()];
    for (i, l) in lines.iter().enumerate() {
        for &e in &l.members {
            incident[e].push(i);
        }
    }
    let found = incident
        .iter()
        .enumerate()
        .filter(|(_, through)| through.len() >= 3)
        .filter_map(|(x, through)| {
            through
                .iter()
                .copied()
                .combinations(3)
                .find(|combo| {
                    let u = union_all(combo.iter().map(|&i| &lines[i]));
                    m.basis_capped(&u, 4).len() >= 4
                })
                .map(|c| (x, [c[0], c[1], c[2]]))
        })
        .collect();
    Ok(found)
}

/// Number of ground elements that are joints of `lines`.
pub fn count_joints<O: IndependenceOracle>(m: &Matroid<O>, lines: &[Flat]) -> Result<usize> {
    Ok(joint_witnesses(m, lines)?.len())
}
