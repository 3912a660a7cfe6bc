//! The grid/Behrend construction of a simple rank-4 matroid with many joints.
//!
//! Points are the grid points `(a, b)`, `1 <= a, b <= N`, whose coordinate
//! sum lies in a 3-AP-free set `B`. Lines are the horizontal, vertical and
//! slope-one lines of the grid, restricted to those carrying at least two
//! points. A triangle in this configuration would give three coordinate
//! sums in arithmetic progression, so the configuration is triangle-free and
//! the rule in [`TriangleFreeMatroid`] defines a matroid on the points.

use std::collections::{HashMap, HashSet};

use itertools::Itertools;
use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::behrend::{behrend_set, BehrendSet};
use crate::error::{Error, Result};
use crate::matroid::{CheckStatus, Flat, GroundSet, IndependenceOracle, Matroid, PropertyOutcome};
use crate::planar::{Configuration, IntLine, IntPoint};
use crate::subset;

/// Largest `N` whose triangle-free gate is exhaustive by default.
pub const EXHAUSTIVE_TRIANGLE_CHECK_MAX_N: u64 = 200;

/// Leading points examined by the sampled triangle gate.
pub const DEFAULT_TRIANGLE_SAMPLES: usize = 512;

/// Horizontal, vertical and diagonal grid lines for `1 <= a, b <= N`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GridFamily {
    #[serde(rename = "N")]
    pub n: u64,
    pub lines: Vec<IntLine>,
}

/// `y = b` and `x = a` for `1..=N`, then `x - y = c` for `-N..=N`.
pub fn grid_lines(n: u64) -> Result<GridFamily> {
    if n == 0 {
        return Err(Error::Domain("grid_lines needs N >= 1".into()));
    }
    let big = i64::try_from(n).map_err(|_| Error::Domain(format!("N = {n} is too large")))?;
    let mut lines = Vec::with_capacity(4 * n as usize + 1);
    lines.extend((1..=big).map(IntLine::horizontal));
    lines.extend((1..=big).map(IntLine::vertical));
    lines.extend((-big..=big).map(IntLine::diagonal));
    Ok(GridFamily { n, lines })
}

/// Grid points `(a, b)` with `a + b` in `b_set`, `a` outer and `b` inner.
pub fn behrend_points(n: u64, b_set: &[u64]) -> Vec<IntPoint> {
    let sums: HashSet<u64> = b_set.iter().copied().collect();
    let mut out = Vec::new();
    for a in 1..=n {
        for b in 1..=n {
            if sums.contains(&(a + b)) {
                out.push(IntPoint::new(a as i64, b as i64));
            }
        }
    }
    out
}

/// The whole `N x N` grid with every grid line, before any filtering.
pub fn full_grid_configuration(n: u64) -> Result<Configuration> {
    let grid = grid_lines(n)?;
    let points = (1..=n as i64)
        .flat_map(|a| (1..=n as i64).map(move |b| IntPoint::new(a, b)))
        .collect();
    Configuration::new(points, grid.lines)
}

/// How the triangle-free gate inspects a configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TriangleCheck {
    Exhaustive,
    /// Triangles are found by their smallest point; this many leading points
    /// are drawn at random.
    Sampled { samples: usize, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TriangleCheckReport {
    pub exhaustive: bool,
    pub points_checked: usize,
    pub points_total: usize,
}

fn triangle_gate(config: &Configuration, check: TriangleCheck) -> Result<TriangleCheckReport> {
    let total = config.points().len();
    let leading: Vec<usize> = match check {
        TriangleCheck::Exhaustive => (0..total).collect(),
        TriangleCheck::Sampled { samples, seed } if samples < total => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            index::sample(&mut rng, total, samples).into_vec().into_iter().sorted().collect()
        }
        TriangleCheck::Sampled { .. } => (0..total).collect(),
    };
    for &i in &leading {
        if let Some(t) = config.triangles_from(i).first() {
            let pts = t.points.map(|p| config.points()[p].to_string());
            return Err(Error::Construction(format!(
                "configuration has a triangle on points {}, {}, {}",
                pts[0], pts[1], pts[2]
            )));
        }
    }
    Ok(TriangleCheckReport {
        exhaustive: leading.len() == total,
        points_checked: leading.len(),
        points_total: total,
    })
}

/// Independence oracle on the points of a triangle-free configuration in
/// which every line has at least two points:
///
/// * at most two points are independent;
/// * three points are dependent iff they lie on a line;
/// * four points are dependent iff three of them lie on a line, or they are
///   covered by an angle `l ∪ l'` (two lines meeting at a point);
/// * five or more points are dependent.
#[derive(Debug, Clone)]
pub struct TriangleFreeMatroid {
    config: Configuration,
    angle_index: HashMap<(usize, usize), usize>,
}

impl TriangleFreeMatroid {
    /// Validates the configuration (exhaustive triangle search) and builds
    /// the angle index.
    pub fn new(config: Configuration) -> Result<Self> {
        Self::with_check(config, TriangleCheck::Exhaustive).map(|(m, _)| m)
    }

    pub fn with_check(
        config: Configuration,
        check: TriangleCheck,
    ) -> Result<(Self, TriangleCheckReport)> {
        for l in 0..config.lines().len() {
            if config.points_on(l).len() < 2 {
                return Err(Error::Construction(format!(
                    "line {} has fewer than two points",
                    config.lines()[l]
                )));
            }
        }
        let report = triangle_gate(&config, check)?;
        Ok((Self::from_config_unchecked(config), report))
    }

    /// Skips both validations. The result need not be a matroid; this exists
    /// so the checkers can be pointed at a broken configuration.
    pub fn from_config_unchecked(config: Configuration) -> Self {
        let mut angle_index = HashMap::new();
        for p in 0..config.points().len() {
            for (&l, &l2) in config.lines_through(p).iter().tuple_combinations() {
                angle_index.insert((l, l2), p);
            }
        }
        Self {
            config,
            angle_index,
        }
    }

    pub fn config(&self) -> &Configuration {
        &self.config
    }

    pub fn point_to_lines(&self, p: usize) -> &[usize] {
        self.config.lines_through(p)
    }

    /// The point where lines `l` and `l2` meet, if it is in the ground set.
    pub fn angle_witness(&self, l: usize, l2: usize) -> Option<usize> {
        let key = if l < l2 { (l, l2) } else { (l2, l) };
        self.angle_index.get(&key).copied()
    }

    pub fn angle_count(&self) -> usize {
        self.angle_index.len()
    }

    pub fn len(&self) -> usize {
        self.config.points().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn collinear(&self, p: usize, q: usize, r: usize) -> bool {
        self.config
            .line_through(p, q)
            .is_some_and(|l| self.config.line_through(p, r) == Some(l))
    }

    fn covered_by_angle(&self, x: &[usize]) -> bool {
        let [a, b, c, d] = [x[0], x[1], x[2], x[3]];
        [((a, b), (c, d)), ((a, c), (b, d)), ((a, d), (b, c))]
            .iter()
            .any(|&((p, q), (r, t))| {
                match (self.config.line_through(p, q), self.config.line_through(r, t)) {
                    (Some(l), Some(l2)) => l != l2 && self.angle_witness(l, l2).is_some(),
                    _ => false,
                }
            })
    }

    /// The independence rule on a set of distinct point indices in range.
    pub(crate) fn independent_unchecked(&self, x: &[usize]) -> bool {
        match x.len() {
            0..=2 => true,
            3 => !self.collinear(x[0], x[1], x[2]),
            4 => {
                let three_on_line = x
                    .iter()
                    .tuple_combinations()
                    .any(|(&p, &q, &r)| self.collinear(p, q, r));
                !three_on_line && !self.covered_by_angle(x)
            }
            _ => false,
        }
    }

    pub fn tf_is_independent(&self, x: &[usize]) -> Result<bool> {
        if let Some(&bad) = x.iter().find(|&&p| p >= self.len()) {
            return Err(Error::NotInGround(bad));
        }
        let v = subset::canonical(x.to_vec());
        Ok(self.independent_unchecked(&v))
    }

    /// Point labels `(a,b)`.
    pub fn ground_set(&self) -> GroundSet {
        let labels = self.config.points().iter().map(ToString::to_string).collect();
        GroundSet::new(labels).expect("configuration points are distinct")
    }

    pub fn matroid(&self) -> Matroid<&Self> {
        Matroid::new(self.ground_set(), self).expect("ground size matches oracle")
    }

    /// For each configuration line (in order), the matroid line spanned by its
    /// first two points.
    pub fn matroid_lines(&self) -> Vec<Flat> {
        let m = self.matroid();
        (0..self.config.lines().len())
            .map(|l| {
                let pts = self.config.points_on(l);
                let span = m.span(&pts[..2]).expect("points are in range");
                debug_assert_eq!(span.rank, 2);
                span
            })
            .collect()
    }
}

impl IndependenceOracle for TriangleFreeMatroid {
    fn ground_size(&self) -> usize {
        self.len()
    }

    fn is_independent(&self, x: &[usize]) -> bool {
        self.independent_unchecked(x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BuildOptions {
    /// Run the exhaustive triangle search regardless of `N`.
    pub force_exhaustive: bool,
    pub triangle_samples: usize,
    pub seed: u64,
}

impl Default for BuildOptions {
    fn default() -> Self {
        Self {
            force_exhaustive: false,
            triangle_samples: DEFAULT_TRIANGLE_SAMPLES,
            seed: 0,
        }
    }
}

/// Everything produced by [`build_construction`].
#[derive(Debug, Clone)]
pub struct Construction {
    pub n: u64,
    pub behrend: BehrendSet,
    pub grid: GridFamily,
    /// Points and all grid lines, before pruning.
    pub unpruned: Configuration,
    pub matroid: TriangleFreeMatroid,
    pub triangle_check: TriangleCheckReport,
}

impl Construction {
    /// The pruned configuration.
    pub fn config(&self) -> &Configuration {
        self.matroid.config()
    }

    pub fn line_count(&self) -> usize {
        self.config().lines().len()
    }

    /// No line survives pruning.
    pub fn is_degenerate(&self) -> bool {
        self.line_count() == 0
    }

    pub fn warning(&self) -> Option<String> {
        self.is_degenerate().then(|| {
            format!(
                "degenerate configuration: no grid line carries two points for N = {}",
                self.n
            )
        })
    }
}

pub fn build_construction(n: u64) -> Result<Construction> {
    build_construction_with(n, BuildOptions::default())
}

/// Behrend set, filtered grid points, grid lines, pruning, triangle gate.
pub fn build_construction_with(n: u64, opts: BuildOptions) -> Result<Construction> {
    if n < 4 {
        return Err(Error::Domain(format!("build_construction needs N >= 4, got {n}")));
    }
    let behrend = behrend_set(n)?;
    let points = behrend_points(n, &behrend.members);
    let grid = grid_lines(n)?;
    let unpruned = Configuration::new(points, grid.lines.clone())?;
    let pruned = unpruned.prune_lines();
    let check = if opts.force_exhaustive || n <= EXHAUSTIVE_TRIANGLE_CHECK_MAX_N {
        TriangleCheck::Exhaustive
    } else {
        TriangleCheck::Sampled {
            samples: opts.triangle_samples,
            seed: opts.seed,
        }
    };
    let (matroid, triangle_check) = TriangleFreeMatroid::with_check(pruned, check)?;
    Ok(Construction {
        n,
        behrend,
        grid,
        unpruned,
        matroid,
        triangle_check,
    })
}

/// Outcome of [`verify_construction_properties`]. Work items are lines (for
/// the first property) and triple points (for the second).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConstructionReport {
    pub properties: [PropertyOutcome; 3],
    pub items_checked: usize,
    pub items_total: usize,
}

impl ConstructionReport {
    pub fn status(&self) -> CheckStatus {
        self.properties
            .iter()
            .fold(CheckStatus::Pass, |s, p| s.merge(p.status))
    }

    pub fn complete(&self) -> bool {
        self.items_checked == self.items_total
    }
}

/// Checks that
///
/// 1. the two-point closures on each line are exactly its points, of rank 2;
/// 2. three lines through a point span rank 4 (so each triple point is a
///    joint);
/// 3. the whole ground set has rank at most 4.
///
/// At most `budget` work items are examined, spread evenly; a clean partial
/// run is reported as inconclusive.
pub fn verify_construction_properties(tf: &TriangleFreeMatroid, budget: usize) -> ConstructionReport {
    let m = tf.matroid();
    let config = tf.config();
    let lines = config.lines().len();
    let triple = config.triple_points();
    let total = lines + triple.len();
    let picked: Vec<usize> = if budget >= total {
        (0..total).collect()
    } else {
        (0..budget).map(|i| i * total / budget).collect()
    };

    let mut p1 = PropertyOutcome::new("line_points_form_matroid_line");
    let mut p2 = PropertyOutcome::new("three_lines_span_rank_four");
    let mut p3 = PropertyOutcome::new("rank_at_most_four");

    for &item in &picked {
        if item < lines {
            let pts = config.points_on(item);
            p1.record(m.rank(pts).ok() == Some(2), || vec![pts.to_vec()]);
            for (&p, &q) in pts.iter().tuple_combinations() {
                let cl = m.closure(&[p, q]).unwrap_or_default();
                p1.record(cl == pts, || vec![vec![p, q], cl.clone()]);
            }
        } else {
            let x = triple[item - lines];
            for combo in config.lines_through(x).iter().combinations(3) {
                let a: Vec<usize> = combo
                    .iter()
                    .map(|&&l| *config.points_on(l).iter().find(|&&p| p != x).expect("two points"))
                    .collect();
                let quad = subset::canonical(vec![x, a[0], a[1], a[2]]);
                p2.record(m.is_independent(&quad).unwrap_or(false), || vec![quad.clone()]);
                let union = combo
                    .iter()
                    .fold(Vec::new(), |acc, &&l| subset::union(&acc, config.points_on(l)));
                p2.record(m.rank(&union).ok() == Some(4), || vec![union.clone()]);
            }
        }
    }
    let full = m.full_rank();
    p3.record(full <= 4, || vec![m.basis(&m.ground().all()).unwrap_or_default()]);

    if picked.len() < total {
        p1.inconclusive();
        p2.inconclusive();
    }
    ConstructionReport {
        properties: [p1, p2, p3],
        items_checked: picked.len(),
        items_total: total,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::behrend::has_3ap;
    use crate::matroid::{check_axioms, count_joints, is_n_joint, AxiomMode, FnOracle};

    fn pt(a: i64, b: i64) -> IntPoint {
        IntPoint::new(a, b)
    }

    /// Every subset of size <= 5, by brute force.
    fn brute_rank<O: IndependenceOracle>(o: &O) -> usize {
        let n = o.ground_size();
        (0..=5.min(n))
            .rev()
            .find(|&k| (0..n).combinations(k).any(|c| o.is_independent(&c)))
            .unwrap_or(0)
    }

    #[test]
    fn grid_line_counts() {
        let g = grid_lines(1).unwrap();
        assert_eq!(g.lines.len(), 5);
        assert!(g.lines.contains(&IntLine::horizontal(1)));
        assert!(g.lines.contains(&IntLine::vertical(1)));
        for c in -1..=1 {
            assert!(g.lines.contains(&IntLine::diagonal(c)));
        }
        for n in [2u64, 7, 50] {
            let g = grid_lines(n).unwrap();
            assert_eq!(g.lines.len() as u64, 4 * n + 1);
            let distinct: HashSet<_> = g.lines.iter().collect();
            assert_eq!(distinct.len(), g.lines.len());
        }
        assert!(grid_lines(0).is_err());
    }

    #[test]
    fn filtered_points() {
        assert_eq!(behrend_points(16, &[4]), vec![pt(1, 3), pt(2, 2), pt(3, 1)]);
        assert!(behrend_points(10, &[]).is_empty());
        for n in [16u64, 50, 200] {
            let b = behrend_set(n).unwrap().members;
            let e = behrend_points(n, &b);
            assert!(2 * e.len() >= b.len() * b.len(), "N = {n}");
        }
    }

    #[test]
    fn small_build_rejected() {
        assert!(matches!(build_construction(3), Err(Error::Domain(_))));
    }

    #[test]
    fn sixteen_is_degenerate() {
        let c = build_construction(16).unwrap();
        assert_eq!(c.behrend.members, vec![1, 4]);
        assert_eq!(c.config().points().len(), 3);
        assert!(c.is_degenerate());
        assert!(c.warning().is_some());
    }

    #[test]
    fn five_matches_definition() {
        let c = build_construction(5).unwrap();
        let tf = &c.matroid;
        assert_eq!(c.config().points().len(), 8);
        assert!(!tf.is_empty());
        let m = tf.matroid();
        assert!(m.full_rank() <= 4);
        assert_eq!(m.full_rank(), brute_rank(tf));
        // all pairs independent
        for (p, q) in (0..tf.len()).tuple_combinations() {
            assert!(tf.tf_is_independent(&[p, q]).unwrap());
        }
        assert!(tf.tf_is_independent(&[0, 99]).is_err());
        // three points on y = 1
        let idx = |a, b| c.config().points().iter().position(|&p| p == pt(a, b)).unwrap();
        assert!(!tf.tf_is_independent(&[idx(1, 1), idx(3, 1), idx(4, 1)]).unwrap());
        // angle y = 1, x = 1 meeting at (1,1)
        let angle = [idx(3, 1), idx(4, 1), idx(1, 3), idx(1, 4)];
        assert!(!tf.tf_is_independent(&angle).unwrap());
        assert!(tf.tf_is_independent(&[idx(3, 1), idx(4, 1), idx(1, 3)]).unwrap());
    }

    #[test]
    fn axioms_hold_exhaustively_for_small_n() {
        for n in [4u64, 5, 6] {
            let c = build_construction(n).unwrap();
            let m = c.matroid.matroid();
            let r = check_axioms(&m, AxiomMode::Exhaustive, u64::MAX, 0);
            assert!(r.passed(), "N = {n}: {r:?}");
        }
    }

    #[test]
    fn ignoring_angles_breaks_exchange() {
        let c = build_construction(5).unwrap();
        let tf = &c.matroid;
        let broken = FnOracle::new(tf.len(), |x: &[usize]| {
            let no_three = !x
                .iter()
                .tuple_combinations()
                .any(|(&p, &q, &r)| tf.collinear(p, q, r));
            (x.len() == 4 && no_three) || tf.is_independent(x)
        });
        let m = Matroid::from_oracle(broken);
        let r = check_axioms(&m, AxiomMode::Exhaustive, u64::MAX, 0);
        assert_eq!(r.axioms[2].status, CheckStatus::Fail);
        assert!(r.axioms[2].counterexample.is_some());
    }

    /// Independent 3-sets with zero, one and two pairs on a common line all
    /// augment from every independent 4-set.
    #[test]
    fn augmentation_cases() {
        let c = build_construction(5).unwrap();
        let tf = &c.matroid;
        let covered = |x: &[usize]| {
            x.iter()
                .tuple_combinations()
                .filter(|(&p, &q)| tf.config().line_through(p, q).is_some())
                .count()
        };
        let fours: Vec<Vec<usize>> = (0..tf.len())
            .combinations(4)
            .filter(|x| tf.is_independent(x))
            .collect();
        let mut seen = [false; 3];
        for x1 in (0..tf.len()).combinations(3).filter(|x| tf.is_independent(x)) {
            let case = covered(&x1);
            assert!(case <= 2);
            seen[case] = true;
            for x2 in &fours {
                let ok = x2
                    .iter()
                    .filter(|e| !x1.contains(e))
                    .any(|&e| tf.is_independent(&subset::with(&x1, e)));
                assert!(ok, "{x1:?} {x2:?}");
            }
        }
        assert_eq!(seen, [true, true, true]);
    }

    #[test]
    fn joints_equal_triple_points() {
        for n in [5u64, 50, 200] {
            let c = build_construction(n).unwrap();
            let m = c.matroid.matroid();
            let lines = c.matroid.matroid_lines();
            for (l, flat) in lines.iter().enumerate() {
                assert_eq!(flat.members, c.config().points_on(l));
            }
            let joints = count_joints(&m, &lines).unwrap();
            assert_eq!(joints, c.config().triple_points().len(), "N = {n}");
            if let Some(&x) = c.config().triple_points().first() {
                assert!(!is_n_joint(&m, x, &lines, 4).unwrap());
            }
        }
    }

    #[test]
    fn construction_properties_pass() {
        for n in [5u64, 50, 200] {
            let c = build_construction(n).unwrap();
            let r = verify_construction_properties(&c.matroid, usize::MAX);
            assert_eq!(r.status(), CheckStatus::Pass, "N = {n}: {r:?}");
            assert!(r.complete());
        }
        let c = build_construction(200).unwrap();
        let r = verify_construction_properties(&c.matroid, 5);
        assert_eq!(r.items_checked, 5);
        assert_eq!(r.status(), CheckStatus::Inconclusive);
    }

    #[test]
    fn triangle_gate_rejects_triangles() {
        let points = vec![pt(1, 1), pt(1, 2), pt(2, 1)];
        let lines = vec![
            IntLine::vertical(1),
            IntLine::horizontal(1),
            IntLine::new(1, 1, 3).unwrap(),
        ];
        let config = Configuration::new(points, lines).unwrap();
        match TriangleFreeMatroid::new(config.clone()) {
            Err(Error::Construction(msg)) => assert!(msg.contains("triangle"), "{msg}"),
            other => panic!("{other:?}"),
        }
        let lonely = Configuration::new(vec![pt(1, 1)], vec![IntLine::vertical(1)]).unwrap();
        assert!(TriangleFreeMatroid::new(lonely).is_err());
        let sampled = TriangleCheck::Sampled {
            samples: 10,
            seed: 1,
        };
        assert!(TriangleFreeMatroid::with_check(config, sampled).is_err());
    }

    #[test]
    fn injected_triangle_is_caught() {
        // Consecutive sums are full of progressions; the gate must refuse the
        // configuration, and without the gate the exchange axiom breaks.
        let n = 5;
        let points = behrend_points(n, &[2, 3, 4, 5, 6]);
        let config = Configuration::new(points, grid_lines(n).unwrap().lines)
            .unwrap()
            .prune_lines();
        assert!(!config.is_triangle_free());
        assert!(TriangleFreeMatroid::new(config.clone()).is_err());
        let tf = TriangleFreeMatroid::from_config_unchecked(config);
        let m = tf.matroid();
        let r = check_axioms(&m, AxiomMode::Exhaustive, u64::MAX, 0);
        assert!(!r.passed());
    }

    #[test]
    fn full_grid_triangles_are_progressions() {
        let config = full_grid_configuration(5).unwrap();
        assert!(config.triple_points().len() == config.points().len());
        let triangles = config.find_triangles(usize::MAX);
        assert!(!triangles.is_empty());
        for t in &triangles {
            assert!(config.is_valid_triangle(t));
            let sums: Vec<u64> = t
                .points
                .iter()
                .map(|&p| (config.points()[p].a + config.points()[p].b) as u64)
                .collect();
            let mut s = sums.clone();
            s.sort_unstable();
            assert_eq!(s[0] + s[2], 2 * s[1], "{t:?}");
            if s[0] != s[2] {
                assert!(has_3ap(&s));
            }
        }
    }

    #[test]
    fn triple_points_survive_pruning() {
        let c = build_construction(50).unwrap();
        let lost = c.config().points().len() - c.config().triple_points().len();
        assert!(lost as u64 <= 4 * 50 + 1);
    }

    #[test]
    fn sampled_gate_reports_coverage() {
        let opts = BuildOptions {
            triangle_samples: 16,
            ..BuildOptions::default()
        };
        let c = build_construction_with(400, opts).unwrap();
        assert!(!c.triangle_check.exhaustive);
        assert_eq!(c.triangle_check.points_checked, 16);
        let forced = BuildOptions {
            force_exhaustive: true,
            ..opts
        };
        assert!(build_construction_with(400, forced).unwrap().triangle_check.exhaustive);
    }
}
