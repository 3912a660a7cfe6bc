//! A finite matroid given by an independence oracle.
//!
//! Subsets are sorted vectors of element indices into the [`GroundSet`].
//! Every query (rank, closure, flats, joints) is derived from the oracle; the
//! oracle is never assumed to satisfy the matroid axioms, see
//! [`checks::check_axioms`] for that.

use std::collections::{BTreeSet, HashSet};
use std::sync::OnceLock;

use itertools::Itertools;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::subset;

pub mod checks;
pub mod joints;

pub use checks::{
    check_axioms, check_closure_laws, check_flat_intersection, check_incidence_properties,
    check_submodularity, AxiomMode, AxiomReport, CheckStatus, IncidenceReport, LawReport,
    PropertyOutcome,
};
pub use joints::{
    coplanar, count_joints, is_joint, is_n_joint, joint_witness, joint_witnesses, lines_through,
};

/// Ordered list of distinct element labels. Elements are addressed by index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundSet {
    labels: Vec<String>,
}

impl GroundSet {
    pub fn new(labels: Vec<String>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(labels.len());
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::DuplicateElement(l.clone()));
            }
        }
        Ok(Self { labels })
    }

    /// Ground set `0..m` labelled by its indices.
    pub fn indexed(m: usize) -> Self {
        Self {
            labels: (0..m).map(|i| i.to_string()).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, e: usize) -> Option<&str> {
        self.labels.get(e).map(String::as_str)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn all(&self) -> Vec<usize> {
        (0..self.len()).collect()
    }
}

/// A pure, deterministic predicate on subsets of `0..ground_size()`.
///
/// `is_independent` is only ever called with sorted, duplicate-free slices
/// whose entries are in range.
pub trait IndependenceOracle: Sync {
    fn ground_size(&self) -> usize;
    fn is_independent(&self, set: &[usize]) -> bool;
}

impl<T: IndependenceOracle + ?Sized> IndependenceOracle for &T {
    fn ground_size(&self) -> usize {
        (**self).ground_size()
    }
    fn is_independent(&self, set: &[usize]) -> bool {
        (**self).is_independent(set)
    }
}

/// Oracle backed by a closure.
pub struct FnOracle<F> {
    size: usize,
    f: F,
}

impl<F: Fn(&[usize]) -> bool + Sync> FnOracle<F> {
    pub fn new(size: usize, f: F) -> Self {
        Self { size, f }
    }
}

impl<F: Fn(&[usize]) -> bool + Sync> IndependenceOracle for FnOracle<F> {
    fn ground_size(&self) -> usize {
        self.size
    }
    fn is_independent(&self, set: &[usize]) -> bool {
        (self.f)(set)
    }
}

/// A closed set together with its rank.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Flat {
    pub members: Vec<usize>,
    pub rank: usize,
}

impl Flat {
    pub fn contains(&self, e: usize) -> bool {
        self.members.binary_search(&e).is_ok()
    }
}

pub struct Matroid<O> {
    ground: GroundSet,
    oracle: O,
    full_rank: OnceLock<usize>,
}

impl<O: IndependenceOracle> Matroid<O> {
    pub fn new(ground: GroundSet, oracle: O) -> Result<Self> {
        if ground.len() != oracle.ground_size() {
            return Err(Error::GroundMismatch {
                ground: ground.len(),
                oracle: oracle.ground_size(),
            });
        }
        Ok(Self {
            ground,
            oracle,
            full_rank: OnceLock::new(),
        })
    }

    /// Matroid on `0..oracle.ground_size()` with index labels.
    pub fn from_oracle(oracle: O) -> Self {
        Self {
            ground: GroundSet::indexed(oracle.ground_size()),
            oracle,
            full_rank: OnceLock::new(),
        }
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn oracle(&self) -> &O {
        &self.oracle
    }

    pub fn size(&self) -> usize {
        self.ground.len()
    }

    /// Sorts, dedups and range-checks `x`.
    pub fn normalize(&self, x: &[usize]) -> Result<Vec<usize>> {
        let v = subset::canonical(x.to_vec());
        if let Some(&bad) = v.iter().find(|&&e| e >= self.size()) {
            return Err(Error::NotInGround(bad));
        }
        Ok(v)
    }

    pub fn is_independent(&self, x: &[usize]) -> Result<bool> {
        let v = self.normalize(x)?;
        Ok(self.oracle.is_independent(&v))
    }

    /// Greedy maximal independent subset of a canonical set, scanning in
    /// ground order and stopping once `cap` elements have been collected.
    pub(crate) fn basis_capped(&self, x: &[usize], cap: usize) -> Vec<usize> {
        let mut basis: Vec<usize> = Vec::new();
        for &e in x {
            if basis.len() >= cap {
                break;
            }
            let cand = subset::with(&basis, e);
            if self.oracle.is_independent(&cand) {
                basis = cand;
            }
        }
        basis
    }

    pub(crate) fn basis_of(&self, x: &[usize]) -> Vec<usize> {
        self.basis_capped(x, usize::MAX)
    }

    /// Greedy maximal independent subset of `x`.
    pub fn basis(&self, x: &[usize]) -> Result<Vec<usize>> {
        let v = self.normalize(x)?;
        Ok(self.basis_of(&v))
    }

    pub fn rank(&self, x: &[usize]) -> Result<usize> {
        Ok(self.basis(x)?.len())
    }

    pub(crate) fn rank_of(&self, x: &[usize]) -> usize {
        self.basis_of(x).len()
    }

    /// `rank(x) >= k`, stopping the greedy scan as soon as `k` is reached.
    pub fn rank_at_least(&self, x: &[usize], k: usize) -> Result<bool> {
        let v = self.normalize(x)?;
        Ok(self.basis_capped(&v, k).len() >= k)
    }

    pub fn full_rank(&self) -> usize {
        *self
            .full_rank
            .get_or_init(|| self.basis_of(&self.ground.all()).len())
    }

    pub(crate) fn closure_of(&self, x: &[usize]) -> Vec<usize> {
        let r = self.rank_of(x);
        (0..self.size())
            .filter(|&e| x.binary_search(&e).is_ok() || self.rank_of(&subset::with(x, e)) == r)
            .collect()
    }

    /// `X ∪ { e : rank(X + e) = rank(X) }`.
    pub fn closure(&self, x: &[usize]) -> Result<Vec<usize>> {
        let v = self.normalize(x)?;
        Ok(self.closure_of(&v))
    }

    pub fn is_flat(&self, x: &[usize]) -> Result<bool> {
        let v = self.normalize(x)?;
        Ok(self.closure_of(&v) == v)
    }

    /// The flat spanned by `x`.
    pub fn span(&self, x: &[usize]) -> Result<Flat> {
        let v = self.normalize(x)?;
        let members = self.closure_of(&v);
        let rank = self.rank_of(&v);
        Ok(Flat { members, rank })
    }

    /// Checks that `members` is a rank-2 flat and wraps it.
    pub fn line(&self, members: &[usize]) -> Result<Flat> {
        let v = self.normalize(members)?;
        if self.rank_of(&v) != 2 || self.closure_of(&v) != v {
            return Err(Error::NotALine { members: v });
        }
        Ok(Flat {
            members: v,
            rank: 2,
        })
    }

    /// All flats of rank `k` for `1 <= k <= 3`; larger `k` needs
    /// [`Matroid::flats_of_rank_unbounded`].
    pub fn flats_of_rank(&self, k: usize) -> Result<Vec<Flat>> {
        if k > 3 {
            return Err(Error::RankTooLarge(k));
        }
        self.flats_of_rank_unbounded(k)
    }

    /// Closures of every independent `k`-subset, deduplicated and sorted by
    /// member list. Cost grows like `m^k`.
    pub fn flats_of_rank_unbounded(&self, k: usize) -> Result<Vec<Flat>> {
        if k == 0 {
            return Err(Error::Domain("flats_of_rank needs k >= 1".into()));
        }
        let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
        for combo in (0..self.size()).combinations(k) {
            if self.oracle.is_independent(&combo) {
                found.insert(self.closure_of(&combo));
            }
        }
        Ok(found
            .into_iter()
            .map(|members| Flat { members, rank: k })
            .collect())
    }
}
