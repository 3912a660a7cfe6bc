//! The positive rational parameter used by the plane-pruning and degree
//! thresholds. Comparisons are done by cross-multiplication only.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A strictly positive rational `num/den` in lowest terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Epsilon {
    num: u64,
    den: u64,
}

impl Epsilon {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if num == 0 || den == 0 {
            return Err(Error::Domain(format!(
                "epsilon must be a positive rational, got {num}/{den}"
            )));
        }
        let g = num.gcd(&den);
        Ok(Self {
            num: num / g,
            den: den / g,
        })
    }

    pub fn numer(&self) -> u64 {
        self.num
    }

    pub fn denom(&self) -> u64 {
        self.den
    }

    /// `count >= c / eps`, i.e. `count * num >= c * den`.
    pub fn meets(&self, count: u64, c: u64) -> bool {
        (count as u128) * (self.num as u128) >= (c as u128) * (self.den as u128)
    }

    /// `ceil(c / eps)`.
    pub fn ceil_inverse_times(&self, c: u64) -> u64 {
        let top = c as u128 * self.den as u128;
        top.div_ceil(self.num as u128) as u64
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl FromStr for Epsilon {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Domain(format!("expected a rational \"p/q\", got {s:?}"));
        let (p, q) = match s.trim().split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (s.trim(), "1"),
        };
        let p: u64 = p.parse().map_err(|_| bad())?;
        let q: u64 = q.parse().map_err(|_| bad())?;
        Epsilon::new(p, q)
    }
}

impl fmt::Display for Epsilon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl Serialize for Epsilon {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
