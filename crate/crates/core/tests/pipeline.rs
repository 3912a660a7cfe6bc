//! End-to-end invariants on constructions large enough to be non-degenerate.

use joints_core::affine::{affine_matroid, grid3d, grid_matroid_lines};
use joints_core::analysis::{
    analyze, degree_partition, heavy_plane_prune, intersection_graph, max_plane_load,
    triangle_stats,
};
use joints_core::behrend::has_3ap;
use joints_core::construction::{build_construction, verify_construction_properties};
use joints_core::matroid::{
    check_axioms, check_closure_laws, check_submodularity, count_joints, AxiomMode, CheckStatus,
};
use joints_core::{Epsilon, Flat, IndependenceOracle, Matroid};

fn binom3(n: usize) -> usize {
    if n < 3 {
        0
    } else {
        n * (n - 1) * (n - 2) / 6
    }
}

fn harness_invariants<O: IndependenceOracle>(m: &Matroid<O>, lines: &[Flat], eps: Epsilon) {
    let l = lines.len();
    let prune = heavy_plane_prune(m, lines, eps).unwrap();
    let kept = prune.lines(lines);

    // fixed point: no plane keeps 2/ε or more lines
    let load = max_plane_load(m, &kept).unwrap();
    assert!(kept.is_empty() || !eps.meets(load as u64, 2), "load {load} at ε = {eps}");
    // each pruned plane removes at least 2/ε lines, so at most εL/2 planes
    assert!(prune.trace.len() as u64 * 2 * eps.denom() <= l as u64 * eps.numer());
    // removing a plane's lines costs at most L joints
    let before = count_joints(m, lines).unwrap();
    let after = count_joints(m, &kept).unwrap();
    assert!(after + prune.trace.len() * l >= before);

    let d = degree_partition(m, &kept, eps).unwrap();
    let lk = kept.len();
    assert!(d.meeting_pairs() <= lk * lk.saturating_sub(1) / 2);
    let sum = d.degree_sum() as u64;
    assert!(d.e1.len() as u64 * 4 * eps.denom() <= sum * eps.numer());
    assert!(sum <= (lk * lk) as u64);
    for &x in &d.e2 {
        assert!(d.degrees[x] >= 3 && !eps.meets(d.degrees[x] as u64, 4));
    }

    let g = intersection_graph(m, &kept, &d.e2).unwrap();
    let t = triangle_stats(&g);
    assert!(t.edge_disjoint);
    let by_degree: usize = d.e2.iter().map(|&x| binom3(d.degrees[x])).sum();
    assert_eq!(t.degenerate, by_degree);
    let cap = eps.ceil_inverse_times(4) as usize;
    assert!(t.degenerate <= binom3(cap) * d.e2.len());
    for (&x, &c) in &t.per_witness {
        assert_eq!(c, binom3(d.degrees[x]));
    }
    // every edge carries exactly one witness, all in E2
    for &(u, v, x) in &g.edges {
        assert!(u < v && d.e2.binary_search(&x).is_ok());
        assert!(kept[u].contains(x) && kept[v].contains(x));
    }
}

#[test]
fn construction_pipeline() {
    for n in [200u64, 400, 800] {
        let c = build_construction(n).unwrap();
        assert!(!has_3ap(&c.behrend.members));
        assert!(!c.is_degenerate());
        let tf = &c.matroid;
        let m = tf.matroid();
        let lines = tf.matroid_lines();
        let triple = c.config().triple_points().len();
        assert_eq!(count_joints(&m, &lines).unwrap(), triple, "N = {n}");
        assert!(triple <= lines.len() * lines.len());
        assert!(m.full_rank() <= 4);

        let props = verify_construction_properties(tf, usize::MAX);
        assert_eq!(props.status(), CheckStatus::Pass, "N = {n}");

        for e in ["1/4", "1/2", "1", "2"] {
            harness_invariants(&m, &lines, e.parse().unwrap());
        }
    }
}

#[test]
fn construction_sampled_laws() {
    let c = build_construction(400).unwrap();
    let m = c.matroid.matroid();
    let ax = check_axioms(&m, AxiomMode::Sampled, 500, 1);
    assert_eq!(ax.status(), CheckStatus::Pass);
    assert_eq!(check_submodularity(&m, 300, 2).violations(), 0);
    assert_eq!(check_closure_laws(&m, 300, 3).violations(), 0);
}

#[test]
fn analysis_report_fields() {
    let c = build_construction(400).unwrap();
    let m = c.matroid.matroid();
    let lines = c.matroid.matroid_lines();
    let eps: Epsilon = "1/2".parse().unwrap();
    let r = analyze(&m, &lines, eps).unwrap();
    assert_eq!(r.l_initial, lines.len());
    assert_eq!(r.l_initial - r.l_after_prune, {
        let p = heavy_plane_prune(&m, &lines, eps).unwrap();
        p.trace.iter().map(|s| s.removed.len()).sum::<usize>()
    });
    assert_eq!(r.graph_vertices, r.l_after_prune);
    assert_eq!(r.edge_disjoint_lower_bound, r.e2_size);
    let json = serde_json::to_value(&r).unwrap();
    for key in ["epsilon", "L_initial", "L_after_prune", "E1_size", "E2_size", "degenerate_triples"] {
        assert!(json.get(key).is_some(), "{key}");
    }
    assert_eq!(json["epsilon"], "1/2");
}

#[test]
fn grid3d_harness() {
    let (ground, desc) = grid3d(3).unwrap();
    let m = affine_matroid(ground);
    let lines = grid_matroid_lines(&m, &desc).unwrap();
    for e in ["1/4", "1/3", "1/2", "1", "3"] {
        harness_invariants(&m, &lines, e.parse().unwrap());
    }
}
