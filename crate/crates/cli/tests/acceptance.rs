//! Acceptance suite. Prints one PASS/FAIL line per criterion (sub-checks
//! indented below it) and exits non-zero if any criterion fails.
//!
//! Run with `cargo test -p joints-cli --test acceptance`.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::{Command, ExitCode, Output};
use std::time::{Duration, Instant};

use joints_core::affine::{affine_matroid, grid3d, grid_matroid_lines, AffineGround, RationalPoint};
use joints_core::analysis::{
    degree_partition, heavy_plane_prune, intersection_graph, joints_sweep, max_plane_load,
    triangle_stats,
};
use joints_core::behrend::{
    behrend_params, behrend_set, decode, encode, has_3ap, optimal_3ap_free, sphere_shell,
};
use joints_core::construction::{
    build_construction, build_construction_with, full_grid_configuration, BuildOptions,
    Construction,
};
use joints_core::matroid::{
    check_axioms, check_closure_laws, check_flat_intersection, check_incidence_properties,
    check_submodularity, count_joints, joint_witnesses, AxiomMode, CheckStatus,
};
use joints_core::{Epsilon, FnOracle, IndependenceOracle, Matroid};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Result of one criterion: overall verdict plus sub-check lines.
struct Verdict {
    checks: Vec<(bool, String)>,
}

impl Verdict {
    fn new() -> Self {
        Self { checks: Vec::new() }
    }

    fn check(&mut self, ok: bool, what: impl Into<String>) {
        self.checks.push((ok, what.into()));
    }

    fn passed(&self) -> bool {
        self.checks.iter().all(|(ok, _)| *ok)
    }
}

fn mark(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn exhaustive(n: u64) -> Construction {
    let opts = BuildOptions {
        force_exhaustive: true,
        ..BuildOptions::default()
    };
    build_construction_with(n, opts).expect("construction builds")
}

fn criterion1() -> Verdict {
    let mut v = Verdict::new();
    for n in [4u64, 5, 6] {
        let c = build_construction(n).unwrap();
        let m = c.matroid.matroid();
        let start = Instant::now();
        let r = check_axioms(&m, AxiomMode::Exhaustive, u64::MAX, 0);
        let took = start.elapsed();
        let checks: u64 = r.axioms.iter().map(|a| a.checks).sum();
        v.check(
            r.status() == CheckStatus::Pass,
            format!("N={n}: exhaustive axioms {:?} ({checks} checks, |E|={})", r.status(), m.size()),
        );
        v.check(took < Duration::from_secs(60), format!("N={n}: runtime {took:.2?} < 60s"));
    }
    // treat every angle as independent
    let c = build_construction(5).unwrap();
    let tf = &c.matroid;
    let config = tf.config();
    let collinear = |p: usize, q: usize, r: usize| {
        config
            .line_through(p, q)
            .is_some_and(|l| config.line_through(p, r) == Some(l))
    };
    let broken = FnOracle::new(tf.len(), |x: &[usize]| {
        if x.len() == 4 {
            let three = [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]]
                .iter()
                .any(|&[i, j, k]| collinear(x[i], x[j], x[k]));
            return !three;
        }
        tf.is_independent(x)
    });
    let m = Matroid::from_oracle(broken);
    let r = check_axioms(&m, AxiomMode::Exhaustive, u64::MAX, 0);
    let ce = r.axioms.iter().find_map(|a| a.counterexample.clone());
    v.check(
        r.status() == CheckStatus::Fail && ce.is_some(),
        format!("angle rule removed: {:?}, counterexample {ce:?}", r.status()),
    );
    v
}

fn random_affine_12(seed: u64) -> Matroid<joints_core::affine::AffineOracle> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cube: Vec<[i64; 3]> = (0..27).map(|i| [i / 9, i / 3 % 3, i % 3]).collect();
    cube.shuffle(&mut rng);
    let pts = cube[..12].iter().map(|p| RationalPoint::from_ints(p)).collect();
    affine_matroid(AffineGround::new(pts).unwrap())
}

fn theorem_suite<O: IndependenceOracle>(v: &mut Verdict, label: &str, m: &Matroid<O>) {
    const SAMPLES: u64 = 1000;
    let sub = check_submodularity(m, SAMPLES, 11);
    v.check(sub.violations() == 0, format!("{label}: submodularity, {} violations", sub.violations()));
    let cl = check_closure_laws(m, SAMPLES, 12);
    v.check(cl.violations() == 0, format!("{label}: closure laws, {} violations", cl.violations()));
    let fi = check_flat_intersection(m, SAMPLES, 13);
    v.check(fi.violations() == 0, format!("{label}: flat intersection, {} violations", fi.violations()));
    match check_incidence_properties(m, 14, SAMPLES) {
        Ok(r) => v.check(
            r.violations() == 0 && r.status() == CheckStatus::Pass,
            format!("{label}: incidence properties (exhaustive={}), {} violations", r.exhaustive, r.violations()),
        ),
        Err(e) => v.check(false, format!("{label}: incidence properties error {e}")),
    }
}

fn criterion2() -> Verdict {
    let mut v = Verdict::new();
    let c = build_construction(20).unwrap();
    let m = c.matroid.matroid();
    theorem_suite(&mut v, &format!("N=20 construction (|E|={}, L={})", m.size(), c.line_count()), &m);
    let a = random_affine_12(2024);
    theorem_suite(&mut v, "12-point affine Q^3", &a);
    v
}

fn criterion3() -> Verdict {
    let mut v = Verdict::new();
    for n in [20u64, 50, 100, 200] {
        let c = exhaustive(n);
        let t = c.config().find_triangles(usize::MAX);
        v.check(
            t.is_empty() && c.triangle_check.exhaustive,
            format!("N={n}: {} triangles in pruned configuration (|E|={}, L={})", t.len(), c.config().points().len(), c.line_count()),
        );
    }
    let e0 = full_grid_configuration(5).unwrap();
    let t = e0.find_triangles(usize::MAX);
    let valid = t.iter().all(|t| e0.is_valid_triangle(t));
    let ap = t.iter().all(|t| {
        let mut s = t.points.map(|p| e0.points()[p].a + e0.points()[p].b);
        s.sort_unstable();
        s[0] + s[2] == 2 * s[1]
    });
    v.check(!t.is_empty(), format!("unfiltered N=5 grid: {} triangles", t.len()));
    v.check(valid, "every triangle has exactly two points per line");
    v.check(ap, "coordinate sums of every triangle form a 3-term progression");
    v
}

/// Joints equal triple points, each joint has a rank-4 witness, rank <= 4.
fn structural(v: &mut Verdict, c: &Construction) {
    let n = c.n;
    let m = c.matroid.matroid();
    let lines = c.matroid.matroid_lines();
    let witnesses = joint_witnesses(&m, &lines).unwrap();
    let joints = count_joints(&m, &lines).unwrap();
    let triple = c.config().triple_points();
    v.check(joints == triple.len(), format!("N={n}: joints {joints} = triple points {}", triple.len()));
    let joint_points: Vec<usize> = witnesses.iter().map(|w| w.0).collect();
    let witnessed = joint_points == triple
        && witnesses.iter().all(|(_, triple_lines)| {
            let u: Vec<usize> = triple_lines
                .iter()
                .flat_map(|&i| lines[i].members.iter().copied())
                .collect();
            m.rank(&u).unwrap() == 4
        });
    v.check(witnessed, format!("N={n}: every joint has a line triple of rank exactly 4"));
    let r = m.full_rank();
    v.check(r <= 4, format!("N={n}: full rank {r} <= 4"));
}

fn criterion4() -> Verdict {
    let mut v = Verdict::new();
    for n in [20u64, 50, 100, 200] {
        structural(&mut v, &exhaustive(n));
    }
    v
}

fn criterion5() -> Verdict {
    let mut v = Verdict::new();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let ns: Vec<u64> = (0..50).map(|_| rng.gen_range(1..=1_000_000)).collect();
    let bad: Vec<u64> = ns
        .iter()
        .copied()
        .filter(|&n| behrend_set(n).map_or(true, |b| has_3ap(&b.members)))
        .collect();
    v.check(bad.is_empty(), format!("50 seeded N <= 10^6 progression-free (failures {bad:?})"));

    let worse: Vec<u64> = (1..=30u64)
        .filter(|&n| behrend_set(n).unwrap().len() > optimal_3ap_free(n).unwrap().len())
        .collect();
    v.check(worse.is_empty(), format!("|B(N)| <= optimum for N <= 30 (failures {worse:?})"));

    let mut round_trips = 0usize;
    let mut round_ok = true;
    for n in [16u64, 1 << 12, 1 << 16, 1 << 20] {
        let p = behrend_params(n).unwrap();
        for x in sphere_shell(p.n, p.s, p.k).unwrap() {
            let e = encode(&x, p.radix());
            round_ok &= decode(e, p.radix(), p.n as usize) == x;
            round_trips += 1;
        }
    }
    v.check(round_ok, format!("decode/encode round trip on {round_trips} shell points"));

    let p = behrend_params(1 << 20).unwrap();
    let shell = sphere_shell(p.n, p.s, p.k).unwrap();
    let r = p.radix();
    let mut no_carry = true;
    for _ in 0..10_000 {
        let x = &shell[rng.gen_range(0..shell.len())];
        let z = &shell[rng.gen_range(0..shell.len())];
        let sum: Vec<u64> = x.iter().zip(z).map(|(a, b)| a + b).collect();
        no_carry &= sum.iter().all(|&d| d <= 2 * p.s - 2 && d < r);
        no_carry &= encode(x, r) + encode(z, r) == encode(&sum, r);
    }
    v.check(no_carry, format!("no carries on 10^4 sampled shell pairs (n={}, s={}, radix {r})", p.n, p.s));

    let sizes: Vec<(u32, usize)> = (10..=20)
        .step_by(2)
        .map(|e| (e, behrend_set(1u64 << e).unwrap().len()))
        .collect();
    let nondecreasing = sizes.windows(2).all(|w| w[0].1 <= w[1].1);
    v.check(nondecreasing, format!("|B| nondecreasing along N = 2^10..2^20: {sizes:?}"));
    let top = sizes.last().unwrap().1;
    v.check(top > 1 << 10, format!("|B(2^20)| = {top} > (2^20)^0.5 = 1024"));
    // |B| > N^0.6 for N >= 2^16, compared as |B|^5 > N^3
    let under: Vec<(u32, usize)> = sizes
        .iter()
        .copied()
        .filter(|&(e, b)| e >= 16 && (b as u128).pow(5) <= 1u128 << (3 * e))
        .collect();
    v.check(under.is_empty(), format!("|B(N)| > N^0.6 for N = 2^16..2^20 (failures {under:?})"));
    v
}

fn criterion6() -> Verdict {
    let mut v = Verdict::new();
    for k in 2..=5usize {
        let start = Instant::now();
        let (ground, desc) = grid3d(k).unwrap();
        let m = affine_matroid(ground);
        let lines = grid_matroid_lines(&m, &desc).unwrap();
        let joints = count_joints(&m, &lines).unwrap();
        let took = start.elapsed();
        v.check(
            lines.len() == 3 * k * k && joints == k * k * k,
            format!("k={k}: {} lines, {joints} joints ({took:.2?})", lines.len()),
        );
        if k == 5 {
            v.check(took < Duration::from_secs(30), format!("k=5 runtime {took:.2?} < 30s"));
        }
    }
    v
}

fn criterion7() -> Verdict {
    let mut v = Verdict::new();
    let ns = [50u64, 100, 200, 400];
    let eps: Epsilon = "1/2".parse().unwrap();
    let rows = joints_sweep(&ns, eps);
    let stats: Vec<_> = rows.iter().map(|r| r.stats.clone()).collect();
    v.check(stats.iter().all(Option::is_some), "every row built");
    let pts: Vec<(u64, usize, usize)> = rows
        .iter()
        .zip(&stats)
        .filter_map(|(r, s)| s.as_ref().map(|s| (r.n, s.l, s.joints)))
        .collect();
    let increasing = pts.windows(2).all(|w| w[0].2 < w[1].2);
    v.check(increasing, format!("J strictly increasing; (N, L, J) = {pts:?}"));
    v.check(pts.iter().all(|&(_, l, j)| j <= l * l), "J <= L^2 on every row");
    let (n, l, j) = *pts.last().unwrap();
    v.check(l > 0 && j >= l, format!("J/L >= 1 at N={n}: {j}/{l}"));
    for &n in &ns {
        let c = exhaustive(n);
        let t = c.config().find_triangles(1).len();
        v.check(t == 0, format!("N={n}: pruned configuration triangle-free"));
        structural(&mut v, &c);
    }
    v
}

fn criterion8() -> Verdict {
    let mut v = Verdict::new();
    let eps: Epsilon = "1/2".parse().unwrap();
    let c = build_construction(100).unwrap();
    let m = c.matroid.matroid();
    let lines = c.matroid.matroid_lines();
    v.check(true, format!("N=100: |E|={}, L={}", m.size(), lines.len()));
    let prune = heavy_plane_prune(&m, &lines, eps).unwrap();
    let kept = prune.lines(&lines);
    let load = max_plane_load(&m, &kept).unwrap();
    v.check(load < 4, format!("after pruning {} planes, max plane load {load} < 4", prune.trace.len()));
    let d = degree_partition(&m, &kept, eps).unwrap();
    let l = kept.len();
    v.check(d.e1.len() * 8 <= l * l, format!("|E1|*8 = {} <= L^2 = {}", d.e1.len() * 8, l * l));
    let g = intersection_graph(&m, &kept, &d.e2).unwrap();
    let t = triangle_stats(&g);
    v.check(t.degenerate <= 56 * d.e2.len(), format!("degenerate {} <= C(8,3)*|E2| = {}", t.degenerate, 56 * d.e2.len()));
    v.check(t.edge_disjoint, "triangles of distinct witnesses are edge-disjoint");
    v
}

fn run_cli(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_joints"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("run joints")
}

fn criterion9() -> Verdict {
    let mut v = Verdict::new();
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    // the dump for `verify` comes from a first construct run
    for dir in [a.path(), b.path()] {
        run_cli(&["construct", "--n", "200", "--out", "dump.json"], dir);
    }
    let cases: [(&str, &[&str], &[&str]); 5] = [
        ("behrend", &["behrend", "--n", "100000", "--verify"], &[]),
        ("construct", &["construct", "--n", "200", "--verify", "--seed", "7"], &[]),
        ("sweep", &["sweep", "--ns", "50,200", "--epsilon", "1/2", "--out", "s.csv"], &["s.csv", "s.json"]),
        ("grid3d", &["grid3d", "--k", "3", "--full"], &[]),
        ("verify", &["verify", "--input", "dump.json", "--seed", "3"], &[]),
    ];
    for (name, args, files) in cases {
        let x = run_cli(args, a.path());
        let y = run_cli(args, b.path());
        let same_files = files.iter().all(|f| {
            let fx = std::fs::read(a.path().join(f)).ok();
            fx.is_some() && fx == std::fs::read(b.path().join(f)).ok()
        });
        v.check(
            x.status.success() && x.status == y.status && x.stdout == y.stdout && x.stderr == y.stderr && same_files,
            format!("{name}: identical output over two runs ({} bytes)", x.stdout.len()),
        );
    }
    v
}

fn main() -> ExitCode {
    type Criterion = (&'static str, fn() -> Verdict);
    let criteria: [Criterion; 9] = [
        ("axiom suite", criterion1),
        ("simple-matroid theorem suite", criterion2),
        ("triangle-freeness", criterion3),
        ("joints equal triple points", criterion4),
        ("Behrend suite", criterion5),
        ("grid joints", criterion6),
        ("joints sweep at desk scale", criterion7),
        ("upper-bound harness", criterion8),
        ("determinism", criterion9),
    ];
    let mut failed = 0;
    for (i, (title, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| {
            let mut v = Verdict::new();
            v.check(false, "panicked");
            v
        });
        let ok = verdict.passed();
        failed += usize::from(!ok);
        println!("{} criterion {}: {title} ({:.1?})", mark(ok), i + 1, start.elapsed());
        for (ok, what) in &verdict.checks {
            println!("    {} {what}", mark(*ok));
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
