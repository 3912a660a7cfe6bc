//! Measurements behind the upper bound on joints: pruning heavy planes,
//! splitting points by degree, and counting triangles in the graph whose
//! vertices are lines and whose edges are low-degree intersection points.
//!
//! Thresholds `2/ε` and `4/ε` are compared exactly through [`Epsilon`].

use std::collections::{BTreeMap, BTreeSet, HashMap};

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;

use crate::construction::build_construction;
use crate::error::{Error, Result};
use crate::matroid::{count_joints, Flat, IndependenceOracle, Matroid};
use crate::rational::Epsilon;
use crate::subset;

/// One pruning round: the plane and the indices (into the input) of the
/// lines it removed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PruneStep {
    pub plane: Vec<usize>,
    pub removed: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PruneResult {
    /// Indices into the input of the surviving lines, ascending.
    pub surviving: Vec<usize>,
    pub trace: Vec<PruneStep>,
}

impl PruneResult {
    pub fn lines(&self, input: &[Flat]) -> Vec<Flat> {
        self.surviving.iter().map(|&i| input[i].clone()).collect()
    }
}

/// Distinct planes spanned by pairs of lines, each with the indices of the
/// lines it contains. With `singletons`, planes through a single line (its
/// closure with the first element off it) are added as well.
fn candidate_planes<O: IndependenceOracle>(
    m: &Matroid<O>,
    lines: &[Flat],
    singletons: bool,
) -> BTreeMap<Vec<usize>, Vec<usize>> {
    let mut planes: BTreeSet<Vec<usize>> = BTreeSet::new();
    for (a, b) in lines.iter().tuple_combinations() {
        let u = subset::union(&a.members, &b.members);
        if m.rank_of(&u) == 3 {
            planes.insert(m.closure_of(&u));
        }
    }
    if singletons {
        for l in lines {
            if let Some(e) = (0..m.size()).find(|&e| {
                !l.contains(e) && m.rank_of(&subset::with(&l.members, e)) == 3
            }) {
                planes.insert(m.closure_of(&subset::with(&l.members, e)));
            }
        }
    }
    planes
        .into_iter()
        .map(|p| {
            let inside = (0..lines.len())
                .filter(|&i| subset::is_subset(&lines[i].members, &p))
                .collect();
            (p, inside)
        })
        .collect()
}

fn validate_lines<O: IndependenceOracle>(m: &Matroid<O>, lines: &[Flat]) -> Result<()> {
    for l in lines {
        let v = m.normalize(&l.members)?;
        if v != l.members || l.rank != 2 {
            return Err(Error::NotALine {
                members: l.members.clone(),
            });
        }
    }
    Ok(())
}

/// Removes, heaviest plane first (ties broken by the plane's member list),
/// every line of a plane containing at least `2/ε` of the current lines,
/// until no such plane is left.
///
/// A plane containing two of the lines is spanned by them, so candidate
/// planes are the spans of coplanar line pairs. When `2/ε <= 1` a single
/// line already makes a plane heavy and planes through one line are
/// considered too.
pub fn heavy_plane_prune<O: IndependenceOracle>(
    m: &Matroid<O>,
    lines: &[Flat],
    eps: Epsilon,
) -> Result<PruneResult> {
    validate_lines(m, lines)?;
    let planes = candidate_planes(m, lines, eps.meets(1, 2));
    let mut alive = vec![true; lines.len()];
    let mut trace = Vec::new();
    loop {
        let best = planes
            .iter()
            .map(|(p, inside)| (inside.iter().filter(|&&i| alive[i]).count(), p, inside))
            .filter(|&(load, _, _)| load > 0 && eps.meets(load as u64, 2))
            // heaviest first; BTreeMap order makes the first maximum the
            // lexicographically smallest plane
            .fold(None, |best: Option<(usize, &Vec<usize>, &Vec<usize>)>, cand| match best {
                Some(b) if b.0 >= cand.0 => Some(b),
                _ => Some(cand),
            });
        let Some((_, plane, inside)) = best else {
            break;
        };
        let removed: Vec<usize> = inside.iter().copied().filter(|&i| alive[i]).collect();
        for &i in &removed {
            alive[i] = false;
        }
        trace.push(PruneStep {
            plane: plane.clone(),
            removed,
        });
    }
    Ok(PruneResult {
        surviving: (0..lines.len()).filter(|&i| alive[i]).collect(),
        trace,
    })
}

/// Largest number of `lines` contained in one plane (0 if no two lines are
/// coplanar; 1 if some line lies in a plane but none share one).
pub fn max_plane_load<O: IndependenceOracle>(m: &Matroid<O>, lines: &[Flat]) -> Result<usize> {
    validate_lines(m, lines)?;
    Ok(candidate_planes(m, lines, true)
        .values()
        .map(Vec::len)
        .max()
        .unwrap_or(0))
}

/// `d(x)` for every ground element, and the high/low degree classes
/// `E1 = { d >= 4/ε }`, `E2 = { 3 <= d < 4/ε }`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreePartition {
    pub degrees: Vec<usize>,
    pub e1: Vec<usize>,
    pub e2: Vec<usize>,
}

impl DegreePartition {
    pub fn degree_sum(&self) -> usize {
        self.degrees.iter().sum()
    }

    /// `Σ d(x)(d(x)-1)/2`: line pairs meeting at some point.
    pub fn meeting_pairs(&self) -> usize {
        self.degrees.iter().map(|&d| d * d.saturating_sub(1) / 2).sum()
    }
}

pub fn degree_partition<O: IndependenceOracle>(
    m: &Matroid<O>,
    lines: &[Flat],
    eps: Epsilon,
) -> Result<DegreePartition> {
    validate_lines(m, lines)?;
    let mut degrees = vec![0usize; m.size()];
    for l in lines {
        for &e in &l.members {
            degrees[e] += 1;
        }
    }
    let heavy = |d: usize| eps.meets(d as u64, 4);
    let e1 = (0..m.size()).filter(|&x| heavy(degrees[x])).collect();
    let e2 = (0..m.size())
        .filter(|&x| degrees[x] >= 3 && !heavy(degrees[x]))
        .collect();
    Ok(DegreePartition { degrees, e1, e2 })
}

/// Lines as vertices; an edge joins two lines meeting at a point of `E2`,
/// labelled by that point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntersectionGraph {
    pub vertices: usize,
    /// `(u, v, witness)` with `u < v`, sorted.
    pub edges: Vec<(usize, usize, usize)>,
    adjacency: Vec<Vec<usize>>,
    #[serde(skip)]
    witness: HashMap<(usize, usize), usize>,
}

impl IntersectionGraph {
    pub fn neighbours(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn witness(&self, u: usize, v: usize) -> Option<usize> {
        let key = if u < v { (u, v) } else { (v, u) };
        self.witness.get(&key).copied()
    }
}

pub fn intersection_graph<O: IndependenceOracle>(
    m: &Matroid<O>,
    lines: &[Flat],
    e2: &[usize],
) -> Result<IntersectionGraph> {
    validate_lines(m, lines)?;
    let e2 = m.normalize(e2)?;
    let mut through: HashMap<usize, Vec<usize>> = HashMap::new();
    for (i, l) in lines.iter().enumerate() {
        for &e in &l.members {
            through.entry(e).or_default().push(i);
        }
    }
    let mut witness: HashMap<(usize, usize), usize> = HashMap::new();
    for &x in &e2 {
        for (&u, &v) in through.get(&x).into_iter().flatten().tuple_combinations() {
            if let Some(prev) = witness.insert((u, v), x) {
                return Err(Error::Domain(format!(
                    "lines {u} and {v} share the points {prev} and {x}"
                )));
            }
        }
    }
    let mut adjacency = vec![Vec::new(); lines.len()];
    let mut edges: Vec<(usize, usize, usize)> =
        witness.iter().map(|(&(u, v), &x)| (u, v, x)).collect();
    edges.sort_unstable();
    for &(u, v, _) in &edges {
        adjacency[u].push(v);
        adjacency[v].push(u);
    }
    for a in &mut adjacency {
        a.sort_unstable();
    }
    Ok(IntersectionGraph {
        vertices: lines.len(),
        edges,
        adjacency,
        witness,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TriangleStats {
    pub total: usize,
    /// Triangles whose three edges share one witness.
    pub degenerate: usize,
    /// Degenerate triangles per witness point.
    pub per_witness: BTreeMap<usize, usize>,
    /// Largest number of non-degenerate triangles through one edge.
    pub max_pair_nondegenerate: usize,
    /// Degenerate triangles of different witnesses never share an edge.
    pub edge_disjoint: bool,
}

/// Exact triangle count by sorted-adjacency intersection.
pub fn triangle_stats(g: &IntersectionGraph) -> TriangleStats {
    let mut total = 0;
    let mut degenerate = 0;
    let mut per_witness: BTreeMap<usize, usize> = BTreeMap::new();
    let mut nondegenerate_on_edge: HashMap<(usize, usize), usize> = HashMap::new();
    let mut owner: HashMap<(usize, usize), usize> = HashMap::new();
    let mut edge_disjoint = true;
    for &(u, v, _) in &g.edges {
        let (nu, nv) = (g.neighbours(u), g.neighbours(v));
        let common = nu
            .iter()
            .filter(|&&w| w > v)
            .filter(|w| nv.binary_search(w).is_ok());
        for &w in common {
            total += 1;
            let ws = [g.witness(u, v), g.witness(v, w), g.witness(u, w)].map(Option::unwrap);
            let edges = [(u, v), (v, w), (u, w)];
            if ws[0] == ws[1] && ws[1] == ws[2] {
                degenerate += 1;
                *per_witness.entry(ws[0]).or_default() += 1;
                for e in edges {
                    if *owner.entry(e).or_insert(ws[0]) != ws[0] {
                        edge_disjoint = false;
                    }
                }
            } else {
                for e in edges {
                    *nondegenerate_on_edge.entry(e).or_default() += 1;
                }
            }
        }
    }
    TriangleStats {
        total,
        degenerate,
        per_witness,
        max_pair_nondegenerate: nondegenerate_on_edge.values().copied().max().unwrap_or(0),
        edge_disjoint,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub epsilon: Epsilon,
    #[serde(rename = "L_initial")]
    pub l_initial: usize,
    #[serde(rename = "L_after_prune")]
    pub l_after_prune: usize,
    pub planes_pruned: usize,
    pub joints_initial: usize,
    pub joints_after_prune: usize,
    #[serde(rename = "E1_size")]
    pub e1_size: usize,
    #[serde(rename = "E2_size")]
    pub e2_size: usize,
    pub graph_vertices: usize,
    pub graph_edges: usize,
    pub triangles: usize,
    pub degenerate_triples: usize,
    /// One degenerate triangle per point of `E2`, pairwise edge-disjoint.
    pub edge_disjoint_lower_bound: usize,
    pub max_pair_nondegenerate: usize,
    pub degree_sum: usize,
    /// Largest plane load among surviving lines; below `2/ε` by construction.
    pub max_plane_load_after: usize,
    pub edge_disjoint: bool,
}

/// Prunes heavy planes, partitions the surviving lines' points by degree,
/// builds the intersection graph on `E2` and counts its triangles.
pub fn analyze<O: IndependenceOracle>(
    m: &Matroid<O>,
    lines: &[Flat],
    eps: Epsilon,
) -> Result<AnalysisReport> {
    let joints_initial = count_joints(m, lines)?;
    let prune = heavy_plane_prune(m, lines, eps)?;
    let kept = prune.lines(lines);
    let joints_after_prune = count_joints(m, &kept)?;
    let deg = degree_partition(m, &kept, eps)?;
    let g = intersection_graph(m, &kept, &deg.e2)?;
    let t = triangle_stats(&g);
    Ok(AnalysisReport {
        epsilon: eps,
        l_initial: lines.len(),
        l_after_prune: kept.len(),
        planes_pruned: prune.trace.len(),
        joints_initial,
        joints_after_prune,
        e1_size: deg.e1.len(),
        e2_size: deg.e2.len(),
        graph_vertices: g.vertices,
        graph_edges: g.edges.len(),
        triangles: t.total,
        degenerate_triples: t.degenerate,
        edge_disjoint_lower_bound: deg.e2.len(),
        max_pair_nondegenerate: t.max_pair_nondegenerate,
        degree_sum: deg.degree_sum(),
        max_plane_load_after: max_plane_load(m, &kept)?,
        edge_disjoint: t.edge_disjoint,
    })
}

/// Column order of the sweep table.
pub const SWEEP_COLUMNS: [&str; 13] = [
    "N",
    "B_size",
    "E_size",
    "L0",
    "L",
    "joints",
    "joints_over_L2",
    "joints_over_L18",
    "planes_pruned",
    "E1",
    "E2",
    "triangles",
    "degenerate",
];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepStats {
    #[serde(rename = "B_size")]
    pub b_size: usize,
    #[serde(rename = "E_size")]
    pub e_size: usize,
    #[serde(rename = "L0")]
    pub l0: usize,
    #[serde(rename = "L")]
    pub l: usize,
    pub joints: usize,
    #[serde(rename = "joints_over_L2")]
    pub joints_over_l2: Option<f64>,
    #[serde(rename = "joints_over_L18")]
    pub joints_over_l18: Option<f64>,
    pub planes_pruned: usize,
    #[serde(rename = "E1")]
    pub e1: usize,
    #[serde(rename = "E2")]
    pub e2: usize,
    pub triangles: usize,
    pub degenerate: usize,
    pub triple_points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    #[serde(rename = "N")]
    pub n: u64,
    #[serde(flatten)]
    pub stats: Option<SweepStats>,
    pub warning: Option<String>,
    pub error: Option<String>,
}

fn ratio(x: Option<f64>) -> String {
    x.map(|v| format!("{v:.6}")).unwrap_or_default()
}

impl SweepRow {
    /// Fields in [`SWEEP_COLUMNS`] order; empty cells where undefined.
    pub fn csv_record(&self) -> Vec<String> {
        let mut out = vec![self.n.to_string()];
        match &self.stats {
            Some(s) => out.extend([
                s.b_size.to_string(),
                s.e_size.to_string(),
                s.l0.to_string(),
                s.l.to_string(),
                s.joints.to_string(),
                ratio(s.joints_over_l2),
                ratio(s.joints_over_l18),
                s.planes_pruned.to_string(),
                s.e1.to_string(),
                s.e2.to_string(),
                s.triangles.to_string(),
                s.degenerate.to_string(),
            ]),
            None => out.extend(std::iter::repeat_n(String::new(), SWEEP_COLUMNS.len() - 1)),
        }
        out
    }
}

/// One sweep row: the construction for `N` and its analysis at `eps`.
pub fn sweep_row(n: u64, eps: Epsilon) -> SweepRow {
    match sweep_stats(n, eps) {
        Ok((stats, warning)) => SweepRow {
            n,
            stats: Some(stats),
            warning,
            error: None,
        },
        Err(e) => SweepRow {
            n,
            stats: None,
            warning: None,
            error: Some(e.to_string()),
        },
    }
}

fn sweep_stats(n: u64, eps: Epsilon) -> Result<(SweepStats, Option<String>)> {
    let c = build_construction(n)?;
    let tf = &c.matroid;
    let m = tf.matroid();
    let lines = tf.matroid_lines();
    let report = analyze(&m, &lines, eps)?;
    let l = lines.len();
    let joints = report.joints_initial;
    let (r2, r18) = if l == 0 {
        (None, None)
    } else {
        let lf = l as f64;
        (Some(joints as f64 / (lf * lf)), Some(joints as f64 / lf.powf(1.8)))
    };
    let stats = SweepStats {
        b_size: c.behrend.len(),
        e_size: tf.len(),
        l0: c.grid.lines.len(),
        l,
        joints,
        joints_over_l2: r2,
        joints_over_l18: r18,
        planes_pruned: report.planes_pruned,
        e1: report.e1_size,
        e2: report.e2_size,
        triangles: report.triangles,
        degenerate: report.degenerate_triples,
        triple_points: c.config().triple_points().len(),
    };
    Ok((stats, c.warning()))
}

/// Rows are computed in parallel and returned in input order.
pub fn joints_sweep(ns: &[u64], eps: Epsilon) -> Vec<SweepRow> {
    ns.par_iter().map(|&n| sweep_row(n, eps)).collect()
}
