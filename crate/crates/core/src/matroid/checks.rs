//! Axiom and theorem checkers for oracle matroids.
//!
//! Exhaustive checks enumerate; sampled checks draw from a `ChaCha8Rng`
//! seeded with the caller's seed so every report is reproducible. A check
//! that runs out of budget reports [`CheckStatus::Inconclusive`], never a pass.

use std::collections::HashSet;

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{IndependenceOracle, Matroid};
use crate::error::{Error, Result};
use crate::subset;

/// Ground sets up to this size are enumerated completely by the exhaustive
/// axiom check; larger ones only up to one past the greedy full rank.
pub const FULL_ENUMERATION_LIMIT: usize = 12;

/// Ground sets up to this size get exhaustive incidence checks.
pub const INCIDENCE_EXHAUSTIVE_LIMIT: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AxiomMode {
    Exhaustive,
    Sampled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Inconclusive,
}

impl CheckStatus {
    /// The worse of two statuses.
    pub fn merge(self, other: CheckStatus) -> CheckStatus {
        use CheckStatus::*;
        match (self, other) {
            (Fail, _) | (_, Fail) => Fail,
            (Inconclusive, _) | (_, Inconclusive) => Inconclusive,
            _ => Pass,
        }
    }
}

/// Outcome of one axiom or one law. `counterexample` holds the violating
/// sets in the order the law names them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyOutcome {
    pub name: &'static str,
    pub status: CheckStatus,
    pub checks: u64,
    pub violations: u64,
    pub counterexample: Option<Vec<Vec<usize>>>,
}

impl PropertyOutcome {
    pub(crate) fn new(name: &'static str) -> Self {
        Self {
            name,
            status: CheckStatus::Pass,
            checks: 0,
            violations: 0,
            counterexample: None,
        }
    }

    pub(crate) fn record(&mut self, ok: bool, witness: impl FnOnce() -> Vec<Vec<usize>>) {
        self.checks += 1;
        if !ok {
            self.violations += 1;
            self.status = CheckStatus::Fail;
            if self.counterexample.is_none() {
                self.counterexample = Some(witness());
            }
        }
    }

    pub(crate) fn inconclusive(&mut self) {
        if self.status == CheckStatus::Pass {
            self.status = CheckStatus::Inconclusive;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub mode: AxiomMode,
    pub axioms: [PropertyOutcome; 3],
}

impl AxiomReport {
    pub fn status(&self) -> CheckStatus {
        self.axioms
            .iter()
            .fold(CheckStatus::Pass, |s, a| s.merge(a.status))
    }

    pub fn passed(&self) -> bool {
        self.status() == CheckStatus::Pass
    }
}

/// Report for a family of sampled laws.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LawReport {
    pub samples: u64,
    pub laws: Vec<PropertyOutcome>,
}

impl LawReport {
    pub fn status(&self) -> CheckStatus {
        self.laws
            .iter()
            .fold(CheckStatus::Pass, |s, a| s.merge(a.status))
    }

    pub fn violations(&self) -> u64 {
        self.laws.iter().map(|l| l.violations).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IncidenceReport {
    pub exhaustive: bool,
    pub properties: [PropertyOutcome; 4],
}

impl IncidenceReport {
    pub fn status(&self) -> CheckStatus {
        self.properties
            .iter()
            .fold(CheckStatus::Pass, |s, a| s.merge(a.status))
    }

    pub fn violations(&self) -> u64 {
        self.properties.iter().map(|l| l.violations).sum()
    }
}

fn binomial_sum(m: usize, max_k: usize) -> u128 {
    let mut total: u128 = 0;
    let mut c: u128 = 1;
    for k in 0..=max_k.min(m) {
        total += c;
        c = c * (m - k) as u128 / (k + 1) as u128;
    }
    total
}

/// Checks the three independence axioms.
///
/// In exhaustive mode `budget` caps the number of oracle evaluations and
/// set lookups; in sampled mode it is the number of random independent sets
/// (and random pairs) drawn.
pub fn check_axioms<O: IndependenceOracle>(
    m: &Matroid<O>,
    mode: AxiomMode,
    budget: u64,
    seed: u64,
) -> AxiomReport {
    let mut a1 = PropertyOutcome::new("axiom1_empty_independent");
    a1.record(m.oracle().is_independent(&[]), || vec![vec![]]);
    let (a2, a3) = match mode {
        AxiomMode::Exhaustive => exhaustive_axioms(m, budget),
        AxiomMode::Sampled => sampled_axioms(m, budget, seed),
    };
    AxiomReport {
        mode,
        axioms: [a1, a2, a3],
    }
}

fn exhaustive_axioms<O: IndependenceOracle>(
    m: &Matroid<O>,
    budget: u64,
) -> (PropertyOutcome, PropertyOutcome) {
    let mut a2 = PropertyOutcome::new("axiom2_hereditary");
    let mut a3 = PropertyOutcome::new("axiom3_exchange");
    let size = m.size();
    let max_level = if size <= FULL_ENUMERATION_LIMIT {
        size
    } else {
        (m.full_rank() + 1).min(size)
    };
    if binomial_sum(size, max_level) > budget as u128 {
        a2.inconclusive();
        a3.inconclusive();
        return (a2, a3);
    }
    let mut spent: u64 = 0;

    // levels[k] = independent k-subsets in lexicographic order
    let mut levels: Vec<Vec<Vec<usize>>> = Vec::with_capacity(max_level + 1);
    let mut lookup: HashSet<Vec<usize>> = HashSet::new();
    for k in 0..=max_level {
        let level: Vec<Vec<usize>> = (0..size)
            .combinations(k)
            .filter(|s| {
                spent += 1;
                m.oracle().is_independent(s)
            })
            .collect();
        lookup.extend(level.iter().cloned());
        levels.push(level);
    }
    let is_ind = |s: &[usize], spent: &mut u64| -> bool {
        *spent += 1;
        if s.len() <= max_level {
            lookup.contains(s)
        } else {
            m.oracle().is_independent(s)
        }
    };

    // Axiom 2: removing any one element of an independent set keeps it
    // independent. Removing the last element first gives the
    // lexicographically smallest subset.
    'a2: for level in levels.iter().skip(1) {
        for set in level {
            for &e in set.iter().rev() {
                if spent > budget {
                    a2.inconclusive();
                    break 'a2;
                }
                let sub = subset::without(set, e);
                let ok = is_ind(&sub, &mut spent);
                a2.record(ok, || vec![set.clone(), sub.clone()]);
            }
        }
    }

    // Axiom 3 over all pairs |X1| < |X2|.
    let all: Vec<&Vec<usize>> = levels.iter().flatten().collect();
    'a3: for x1 in &all {
        for x2 in all.iter().filter(|x2| x2.len() > x1.len()) {
            if spent > budget {
                a3.inconclusive();
                break 'a3;
            }
            let ok = subset::difference(x2, x1)
                .into_iter()
                .any(|e| is_ind(&subset::with(x1, e), &mut spent));
            a3.record(ok, || vec![(*x1).clone(), (*x2).clone()]);
        }
    }
    (a2, a3)
}

/// Random independent set: greedy over a shuffled ground set, stopped at
/// `target` elements.
fn random_independent<O: IndependenceOracle>(
    m: &Matroid<O>,
    rng: &mut ChaCha8Rng,
    target: usize,
) -> Vec<usize> {
    let mut order: Vec<usize> = (0..m.size()).collect();
    order.shuffle(rng);
    let mut set: Vec<usize> = Vec::new();
    for e in order {
        if set.len() >= target {
            break;
        }
        let cand = subset::with(&set, e);
        if m.oracle().is_independent(&cand) {
            set = cand;
        }
    }
    set
}

fn sampled_axioms<O: IndependenceOracle>(
    m: &Matroid<O>,
    samples: u64,
    seed: u64,
) -> (PropertyOutcome, PropertyOutcome) {
    let mut a2 = PropertyOutcome::new("axiom2_hereditary");
    let mut a3 = PropertyOutcome::new("axiom3_exchange");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r = m.full_rank();
    for _ in 0..samples {
        let t = rng.gen_range(0..=r);
        let set = random_independent(m, &mut rng, t);
        // Random subsets, not just single removals, so that non-greedy
        // subsets of the set are exercised too.
        let sub: Vec<usize> = set.iter().copied().filter(|_| rng.gen_bool(0.5)).collect();
        let ok = m.oracle().is_independent(&sub);
        a2.record(ok, || vec![set.clone(), sub.clone()]);

        if r == 0 {
            continue;
        }
        let big = rng.gen_range(1..=r);
        let small = rng.gen_range(0..big);
        let x2 = random_independent(m, &mut rng, big);
        let x1 = random_independent(m, &mut rng, small);
        if x1.len() >= x2.len() {
            continue;
        }
        let ok = subset::difference(&x2, &x1)
            .into_iter()
            .any(|e| m.oracle().is_independent(&subset::with(&x1, e)));
        a3.record(ok, || vec![x1.clone(), x2.clone()]);
    }
    (a2, a3)
}

/// Random subset generator mixing uniform sets with subsets of spans, so
/// that rank-deficient sets show up in rank-4 matroids.
struct SubsetSampler {
    rng: ChaCha8Rng,
    max_size: usize,
}

impl SubsetSampler {
    fn new<O: IndependenceOracle>(m: &Matroid<O>, seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            max_size: (m.full_rank() + 3).min(m.size()),
        }
    }

    fn uniform(&mut self, pool: &[usize], max: usize) -> Vec<usize> {
        let k = self.rng.gen_range(0..=max.min(pool.len()));
        subset::canonical(pool.choose_multiple(&mut self.rng, k).copied().collect())
    }

    fn draw<O: IndependenceOracle>(&mut self, m: &Matroid<O>) -> Vec<usize> {
        let all = m.ground().all();
        if self.rng.gen_bool(0.5) {
            self.uniform(&all, self.max_size)
        } else {
            let seed_set = self.uniform(&all, 3);
            let span = m.closure_of(&seed_set);
            self.uniform(&span, self.max_size)
        }
    }

    /// A random superset of `x`.
    fn grow<O: IndependenceOracle>(&mut self, m: &Matroid<O>, x: &[usize]) -> Vec<usize> {
        let extra = self.draw(m);
        subset::union(x, &extra)
    }
}

/// `rank(X ∪ Y) + rank(X ∩ Y) <= rank(X) + rank(Y)` on random pairs, plus the
/// equal-rank union corollary for pairs sharing a common subset.
pub fn check_submodularity<O: IndependenceOracle>(
    m: &Matroid<O>,
    pairs: u64,
    seed: u64,
) -> LawReport {
    let mut sub = PropertyOutcome::new("submodularity");
    let mut cor = PropertyOutcome::new("equal_rank_union");
    let mut sampler = SubsetSampler::new(m, seed);
    for i in 0..pairs {
        let x = sampler.draw(m);
        // Every other pair overlaps on purpose.
        let y = if i % 2 == 0 {
            sampler.draw(m)
        } else {
            let part: Vec<usize> = x
                .iter()
                .copied()
                .filter(|_| sampler.rng.gen_bool(0.5))
                .collect();
            sampler.grow(m, &part)
        };
        let (rx, ry) = (m.rank_of(&x), m.rank_of(&y));
        let ru = m.rank_of(&subset::union(&x, &y));
        let ri = m.rank_of(&subset::intersection(&x, &y));
        sub.record(ru + ri <= rx + ry, || vec![x.clone(), y.clone()]);

        // X ⊆ Y1, Y2 with equal ranks: the union keeps that rank.
        let base = x;
        let span = m.closure_of(&base);
        let pick = |rng: &mut ChaCha8Rng| -> Vec<usize> {
            let extra: Vec<usize> = span.iter().copied().filter(|_| rng.gen_bool(0.4)).collect();
            subset::union(&base, &extra)
        };
        let y1 = pick(&mut sampler.rng);
        let y2 = pick(&mut sampler.rng);
        let rb = m.rank_of(&base);
        if m.rank_of(&y1) == rb && m.rank_of(&y2) == rb {
            let ok = m.rank_of(&subset::union(&y1, &y2)) == rb;
            cor.record(ok, || vec![base.clone(), y1.clone(), y2.clone()]);
        }
    }
    LawReport {
        samples: pairs,
        laws: vec![sub, cor],
    }
}

/// Closure laws on random sets: extensive, rank preserving, idempotent,
/// monotone, equal-rank supersets lie in the closure, and nested flats of
/// equal rank coincide.
pub fn check_closure_laws<O: IndependenceOracle>(
    m: &Matroid<O>,
    samples: u64,
    seed: u64,
) -> LawReport {
    let mut extensive = PropertyOutcome::new("extensive");
    let mut rank_preserving = PropertyOutcome::new("rank_preserving");
    let mut idempotent = PropertyOutcome::new("idempotent");
    let mut monotone = PropertyOutcome::new("monotone");
    let mut equal_rank_superset = PropertyOutcome::new("equal_rank_superset_in_closure");
    let mut nested_flats = PropertyOutcome::new("nested_flats_equal_rank");
    let mut sampler = SubsetSampler::new(m, seed);
    for _ in 0..samples {
        let x = sampler.draw(m);
        let cx = m.closure_of(&x);
        extensive.record(subset::is_subset(&x, &cx), || vec![x.clone(), cx.clone()]);
        let rx = m.rank_of(&x);
        rank_preserving.record(m.rank_of(&cx) == rx, || vec![x.clone(), cx.clone()]);
        let ccx = m.closure_of(&cx);
        idempotent.record(ccx == cx, || vec![x.clone(), cx.clone(), ccx.clone()]);

        let y = sampler.grow(m, &x);
        let cy = m.closure_of(&y);
        monotone.record(subset::is_subset(&cx, &cy), || vec![x.clone(), y.clone()]);

        // Superset drawn from inside the span so the rank often stays put.
        let extra: Vec<usize> = cx
            .iter()
            .copied()
            .filter(|_| sampler.rng.gen_bool(0.5))
            .collect();
        let y2 = subset::union(&x, &extra);
        if m.rank_of(&y2) == rx {
            equal_rank_superset.record(subset::is_subset(&y2, &cx), || vec![x.clone(), y2.clone()]);
        }
        let cy2 = m.closure_of(&y2);
        if subset::is_subset(&cx, &cy2) && m.rank_of(&cy2) == m.rank_of(&cx) {
            nested_flats.record(cx == cy2, || vec![cx.clone(), cy2.clone()]);
        }
    }
    LawReport {
        samples,
        laws: vec![
            extensive,
            rank_preserving,
            idempotent,
            monotone,
            equal_rank_superset,
            nested_flats,
        ],
    }
}

/// The intersection of two random flats is a flat.
pub fn check_flat_intersection<O: IndependenceOracle>(
    m: &Matroid<O>,
    samples: u64,
    seed: u64,
) -> LawReport {
    let mut law = PropertyOutcome::new("flat_intersection");
    let mut sampler = SubsetSampler::new(m, seed);
    for i in 0..samples {
        let f1 = m.closure_of(&sampler.draw(m));
        // Half of the pairs share a seed point so the intersection is
        // usually nonempty.
        let f2 = if i % 2 == 0 || f1.is_empty() {
            m.closure_of(&sampler.draw(m))
        } else {
            let p = f1[sampler.rng.gen_range(0..f1.len())];
            let other = sampler.draw(m);
            m.closure_of(&subset::with(&other, p))
        };
        let meet = subset::intersection(&f1, &f2);
        law.record(m.closure_of(&meet) == meet, || vec![f1.clone(), f2.clone()]);
    }
    LawReport {
        samples,
        laws: vec![law],
    }
}

fn ensure_simple<O: IndependenceOracle>(m: &Matroid<O>) -> Result<()> {
    for a in 0..m.size() {
        if !m.oracle().is_independent(&[a]) {
            return Err(Error::NotSimple(vec![a]));
        }
    }
    for (a, b) in (0..m.size()).tuple_combinations() {
        if !m.oracle().is_independent(&[a, b]) {
            return Err(Error::NotSimple(vec![a, b]));
        }
    }
    Ok(())
}

/// Checks the four point/line/plane incidence properties of a simple
/// matroid:
///
/// 1. two points lie on a unique line;
/// 2. three non-collinear points lie on a unique plane;
/// 3. a line meeting a plane in two points lies in it;
/// 4. two intersecting lines lie in a unique plane.
///
/// Small ground sets are checked over all lines and planes, larger ones on
/// `samples` random instances per property.
pub fn check_incidence_properties<O: IndependenceOracle>(
    m: &Matroid<O>,
    seed: u64,
    samples: u64,
) -> Result<IncidenceReport> {
    ensure_simple(m)?;
    let mut p = [
        PropertyOutcome::new("unique_line_through_two_points"),
        PropertyOutcome::new("unique_plane_through_three_points"),
        PropertyOutcome::new("line_meeting_plane_twice_lies_in_it"),
        PropertyOutcome::new("intersecting_lines_span_unique_plane"),
    ];
    let exhaustive = m.size() <= INCIDENCE_EXHAUSTIVE_LIMIT;
    if exhaustive {
        incidence_exhaustive(m, &mut p)?;
    } else {
        incidence_sampled(m, seed, samples, &mut p);
    }
    Ok(IncidenceReport {
        exhaustive,
        properties: p,
    })
}

fn incidence_exhaustive<O: IndependenceOracle>(
    m: &Matroid<O>,
    p: &mut [PropertyOutcome; 4],
) -> Result<()> {
    let lines = m.flats_of_rank(2)?;
    let planes = m.flats_of_rank(3)?;
    let n = m.size();
    for (a, b) in (0..n).tuple_combinations() {
        let through: Vec<&Vec<usize>> = lines
            .iter()
            .filter(|l| l.contains(a) && l.contains(b))
            .map(|l| &l.members)
            .collect();
        p[0].record(through.len() == 1, || {
            let mut w = vec![vec![a, b]];
            w.extend(through.iter().map(|l| (*l).clone()));
            w
        });
    }
    for (a, b, c) in (0..n).tuple_combinations() {
        let t = [a, b, c];
        if lines.iter().any(|l| subset::is_subset(&t, &l.members)) {
            continue;
        }
        let count = planes
            .iter()
            .filter(|pl| subset::is_subset(&t, &pl.members))
            .count();
        p[1].record(count == 1, || vec![t.to_vec()]);
    }
    for l in &lines {
        for pl in &planes {
            if subset::intersection(&l.members, &pl.members).len() >= 2 {
                p[2].record(subset::is_subset(&l.members, &pl.members), || {
                    vec![l.members.clone(), pl.members.clone()]
                });
            }
        }
    }
    for (l1, l2) in lines.iter().tuple_combinations() {
        if subset::intersection(&l1.members, &l2.members).is_empty() {
            continue;
        }
        let u = subset::union(&l1.members, &l2.members);
        let count = planes
            .iter()
            .filter(|pl| subset::is_subset(&u, &pl.members))
            .count();
        p[3].record(m.rank_of(&u) == 3 && count == 1, || {
            vec![l1.members.clone(), l2.members.clone()]
        });
    }
    Ok(())
}

fn incidence_sampled<O: IndependenceOracle>(
    m: &Matroid<O>,
    seed: u64,
    samples: u64,
    p: &mut [PropertyOutcome; 4],
) {
    let n = m.size();
    if n < 2 {
        return;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pick = |rng: &mut ChaCha8Rng, pool: &[usize], k: usize| -> Vec<usize> {
        subset::canonical(pool.choose_multiple(rng, k).copied().collect())
    };
    let all: Vec<usize> = (0..n).collect();
    for _ in 0..samples {
        // (1) any two points of a line span that line
        let seed_pair = pick(&mut rng, &all, 2);
        let line = m.closure_of(&seed_pair);
        let ab = pick(&mut rng, &line, 2);
        let line2 = m.closure_of(&ab);
        p[0].record(m.rank_of(&line) == 2 && line2 == line, || {
            vec![seed_pair.clone(), ab.clone()]
        });

        // (2) any three non-collinear points of a plane span that plane
        let triple = pick(&mut rng, &all, 3);
        if triple.len() == 3 && m.rank_of(&triple) == 3 {
            let plane = m.closure_of(&triple);
            let abc = pick(&mut rng, &plane, 3);
            if m.rank_of(&abc) == 3 {
                let plane2 = m.closure_of(&abc);
                p[1].record(plane2 == plane, || vec![triple.clone(), abc.clone()]);
            }

            // (3) the line through two points of the plane lies in it, and
            // so does a random line meeting it twice
            let ab = pick(&mut rng, &plane, 2);
            let l = m.closure_of(&ab);
            p[2].record(subset::is_subset(&l, &plane), || vec![l.clone(), plane.clone()]);
            let other = m.closure_of(&pick(&mut rng, &all, 2));
            if subset::intersection(&other, &plane).len() >= 2 {
                p[2].record(subset::is_subset(&other, &plane), || {
                    vec![other.clone(), plane.clone()]
                });
            }
        }

        // (4) two lines through x
        let x = rng.gen_range(0..n);
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a == x || b == x {
            continue;
        }
        let l1 = m.closure_of(&subset::canonical(vec![x, a]));
        if l1.binary_search(&b).is_ok() {
            continue;
        }
        let l2 = m.closure_of(&subset::canonical(vec![x, b]));
        let u = subset::union(&l1, &l2);
        let plane = m.closure_of(&u);
        let abc = pick(&mut rng, &u, 3);
        let ok = m.rank_of(&u) == 3 && (m.rank_of(&abc) < 3 || m.closure_of(&abc) == plane);
        p[3].record(ok, || vec![l1.clone(), l2.clone()]);
    }
}
