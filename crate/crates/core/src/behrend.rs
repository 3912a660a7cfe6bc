//! Subsets of `1..=N` without 3-term arithmetic progressions.
//!
//! The shell construction takes the lattice cube `{0..s-1}^n`, keeps one
//! sphere `|x|^2 = k`, and reads each point as the digits of an integer in
//! radix `2s`. Digits are below `s`, so adding two encoded points never
//! carries; `x + z = 2y` on the integers then forces the same identity on
//! every digit, i.e. `y` is the midpoint of `x` and `z`, which a sphere does
//! not allow. (Radix `2s + 1` is sometimes written for this step; `2s` is
//! already enough and is used for both the encoding and the argument.)
//!
//! For `N < 16` the cube is one-dimensional and the shell trick gives a
//! single element, so small inputs fall back to [`optimal_3ap_free`].

use std::collections::{BTreeMap, HashSet};

use serde::Serialize;

use crate::error::{Error, Result};

/// Largest cube `s^n` that [`sphere_shells`] will enumerate.
pub const SHELL_BUDGET: u64 = 20_000_000;

/// Largest `N` accepted by [`optimal_3ap_free`].
pub const OPTIMAL_MAX_N: u64 = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BehrendParams {
    #[serde(rename = "N")]
    pub big_n: u64,
    pub n: u32,
    pub s: u64,
    pub k: u64,
    pub shell_size: u64,
    pub n_clamped: bool,
    pub s_clamped: bool,
}

impl BehrendParams {
    pub fn radix(&self) -> u64 {
        2 * self.s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BehrendMethod {
    /// Encoded sphere shell.
    Shell,
    /// Exhaustive search, used below the shell construction's range.
    Exhaustive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BehrendSet {
    pub members: Vec<u64>,
    pub params: Option<BehrendParams>,
    pub method: BehrendMethod,
}

impl BehrendSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

fn checked_pow(base: u64, exp: u32) -> Option<u64> {
    base.checked_pow(exp)
}

/// Number of points of `{0..s-1}^n` on each sphere `|x|^2 = k`, indexed by
/// `k`, computed by convolution rather than enumeration.
pub fn shell_sizes(n: u32, s: u64) -> Vec<u64> {
    let max = n as usize * (s.saturating_sub(1) as usize).pow(2);
    let mut counts = vec![0u64; max + 1];
    counts[0] = 1;
    for _ in 0..n {
        let mut next = vec![0u64; max + 1];
        for (k, &c) in counts.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for d in 0..s as usize {
                let kk = k + d * d;
                if kk <= max {
                    next[kk] += c;
                }
            }
        }
        counts = next;
    }
    counts
}

/// `n = floor(sqrt(log2 N))`, `s` the largest integer with `(2s)^n <= N`,
/// and `k` the nonzero shell of largest size (smallest `k` on ties).
pub fn behrend_params(big_n: u64) -> Result<BehrendParams> {
    if big_n < 4 {
        return Err(Error::Domain(format!(
            "behrend_params needs N >= 4 (got {big_n}); use optimal_3ap_free for small N"
        )));
    }
    // floor(sqrt(log2 N)) is the largest n with 2^(n^2) <= N
    let mut n: u32 = 0;
    while (n + 1)
        .checked_mul(n + 1)
        .and_then(|e| 1u64.checked_shl(e))
        .is_some_and(|v| v <= big_n && (n + 1) * (n + 1) < 64)
    {
        n += 1;
    }
    let n_clamped = n == 0;
    let n = n.max(1);

    let mut s: u64 = 0;
    while checked_pow(2 * (s + 1), n).is_some_and(|v| v <= big_n) {
        s += 1;
    }
    let s_clamped = s == 0;
    let s = s.max(1);

    let sizes = shell_sizes(n, s);
    let (k, shell_size) = sizes
        .iter()
        .enumerate()
        .skip(1)
        .fold((0u64, 0u64), |best, (k, &c)| {
            if c > best.1 {
                (k as u64, c)
            } else {
                best
            }
        });
    Ok(BehrendParams {
        big_n,
        n,
        s,
        k,
        shell_size,
        n_clamped,
        s_clamped,
    })
}

/// Digits (least significant first) of a lattice point read in `radix`.
pub fn encode(digits: &[u64], radix: u64) -> u64 {
    digits.iter().rev().fold(0u64, |acc, &d| acc * radix + d)
}

/// Inverse of [`encode`] for `n` digits.
pub fn decode(mut value: u64, radix: u64, n: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        out.push(value % radix);
        value /= radix;
    }
    out
}

fn for_each_cube_point(n: u32, s: u64, mut f: impl FnMut(&[u64])) -> Result<()> {
    let total = checked_pow(s, n).filter(|&t| t <= SHELL_BUDGET).ok_or_else(|| {
        Error::BudgetExceeded(format!("cube {s}^{n} exceeds {SHELL_BUDGET} points"))
    })?;
    let mut digits = vec![0u64; n as usize];
    for _ in 0..total {
        f(&digits);
        for d in digits.iter_mut() {
            *d += 1;
            if *d < s {
                break;
            }
            *d = 0;
        }
    }
    Ok(())
}

fn norm2(x: &[u64]) -> u64 {
    x.iter().map(|d| d * d).sum()
}

/// All spheres of `{0..s-1}^n`, keyed by squared norm. Points are listed in
/// counting order with the first coordinate varying fastest.
pub fn sphere_shells(n: u32, s: u64) -> Result<BTreeMap<u64, Vec<Vec<u64>>>> {
    let mut shells: BTreeMap<u64, Vec<Vec<u64>>> = BTreeMap::new();
    for_each_cube_point(n, s, |x| shells.entry(norm2(x)).or_default().push(x.to_vec()))?;
    Ok(shells)
}

/// The single sphere `|x|^2 = k`.
pub fn sphere_shell(n: u32, s: u64, k: u64) -> Result<Vec<Vec<u64>>> {
    let mut out = Vec::new();
    for_each_cube_point(n, s, |x| {
        if norm2(x) == k {
            out.push(x.to_vec());
        }
    })?;
    Ok(out)
}

/// `true` iff some `x < y < z` in `set` satisfy `x + z = 2y`.
pub fn has_3ap(set: &[u64]) -> bool {
    find_3ap(set).is_some()
}

/// The first progression `(x, y, z)` found, scanning `x < y` in order.
pub fn find_3ap(set: &[u64]) -> Option<(u64, u64, u64)> {
    let mut v = set.to_vec();
    v.sort_unstable();
    v.dedup();
    let members: HashSet<u64> = v.iter().copied().collect();
    for (i, &x) in v.iter().enumerate() {
        for &y in &v[i + 1..] {
            let z = 2 * y - x;
            if members.contains(&z) {
                return Some((x, y, z));
            }
        }
    }
    None
}

/// Largest 3-AP-free subset of `1..=N` (lexicographically smallest among
/// those of maximum size), by branch and bound. `N <= 30`.
pub fn optimal_3ap_free(big_n: u64) -> Result<Vec<u64>> {
    if big_n > OPTIMAL_MAX_N {
        return Err(Error::Domain(format!(
            "optimal_3ap_free is exhaustive and limited to N <= {OPTIMAL_MAX_N}, got {big_n}"
        )));
    }
    let n = big_n as usize;
    // best[len] = maximum size on an interval of length len; any 3-AP-free
    // subset of i..=N shifts to one of 1..=N-i+1, so it bounds the rest.
    let mut best = vec![0usize; n + 1];
    let mut set = Vec::new();
    for len in 1..=n {
        let mut search = Search {
            n: len,
            bound: &best,
            best_size: 0,
            best_mask: 0,
        };
        search.dfs(1, 0, 0);
        let (size, mask) = (search.best_size, search.best_mask);
        best[len] = size;
        if len == n {
            set = (1..=n as u64).filter(|&x| mask & (1u64 << x) != 0).collect();
        }
    }
    Ok(set)
}

struct Search<'a> {
    n: usize,
    bound: &'a [usize],
    best_size: usize,
    best_mask: u64,
}

impl Search<'_> {
    fn dfs(&mut self, next: usize, mask: u64, size: usize) {
        if size > self.best_size {
            self.best_size = size;
            self.best_mask = mask;
        }
        if next > self.n {
            return;
        }
        let remaining = self.n - next + 1;
        let cap = if remaining < self.n {
            self.bound[remaining]
        } else {
            remaining
        };
        if size + cap <= self.best_size {
            return;
        }
        // x = next is the largest chosen element; it closes a progression
        // iff 2y - x is chosen for some chosen y.
        let x = next as u64;
        let closes = (1..x).any(|y| {
            mask & (1u64 << y) != 0 && 2 * y > x && mask & (1u64 << (2 * y - x)) != 0
        });
        if !closes {
            self.dfs(next + 1, mask | (1u64 << x), size + 1);
        }
        self.dfs(next + 1, mask, size);
    }
}

/// Behrend set for `N`: the encoded largest nonzero shell, verified free of
/// 3-term progressions before it is returned.
pub fn behrend_set(big_n: u64) -> Result<BehrendSet> {
    if big_n == 0 {
        return Err(Error::Domain("behrend_set needs N >= 1".into()));
    }
    let params = if big_n >= 4 {
        Some(behrend_params(big_n)?)
    } else {
        None
    };
    let shell_params = params.filter(|p| p.n >= 2 && !p.s_clamped);
    let Some(p) = shell_params else {
        return Ok(BehrendSet {
            members: optimal_3ap_free(big_n)?,
            params,
            method: BehrendMethod::Exhaustive,
        });
    };
    let radix = p.radix();
    let mut members: Vec<u64> = sphere_shell(p.n, p.s, p.k)?
        .iter()
        .map(|x| encode(x, radix))
        .collect();
    members.sort_unstable();
    let before = members.len();
    members.dedup();
    if members.len() != before || members.len() as u64 != p.shell_size {
        return Err(Error::Construction(format!(
            "shell encoding is not injective for N = {big_n}"
        )));
    }
    if members.iter().any(|&b| b == 0 || b > big_n) {
        return Err(Error::Construction(format!(
            "encoded shell leaves 1..={big_n}"
        )));
    }
    if let Some((x, y, z)) = find_3ap(&members) {
        return Err(Error::Construction(format!(
            "shell for N = {big_n} contains the progression {x}, {y}, {z}"
        )));
    }
    Ok(BehrendSet {
        members,
        params: Some(p),
        method: BehrendMethod::Shell,
    })
}
