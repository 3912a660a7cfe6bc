use std::fs;
use std::io::{self, Write};
use std::path::Path;

use anyhow::{anyhow, Context};
use joints_core::affine::{affine_matroid, grid3d as build_grid3d, grid_matroid_lines};
use joints_core::analysis::{joints_sweep, SweepRow, SWEEP_COLUMNS};
use joints_core::behrend::{behrend_set, find_3ap, optimal_3ap_free, BehrendMethod, OPTIMAL_MAX_N};
use joints_core::construction::{
    build_construction, verify_construction_properties, TriangleFreeMatroid,
};
use joints_core::matroid::{check_axioms, count_joints, AxiomMode, CheckStatus};
use joints_core::{Epsilon, Error};
use serde::Serialize;

use crate::dump::Dump;
use crate::{BehrendArgs, CheckArgs, CmdResult, ConstructArgs, Failure, Grid3dArgs, SweepArgs, VerifyArgs};

/// Domain errors are usage errors; anything else from the core is a failed
/// internal check.
fn core_failure(e: Error) -> Failure {
    match e {
        Error::Domain(_) | Error::BudgetExceeded(_) => Failure::Usage(e.into()),
        _ => Failure::Check(e.into()),
    }
}

fn to_json<T: Serialize>(value: &T) -> anyhow::Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

fn emit(text: &str, out: Option<&Path>) -> anyhow::Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct OracleOut {
    size: usize,
    members: Vec<u64>,
}

#[derive(Serialize)]
struct BehrendOut {
    #[serde(rename = "N")]
    n_big: u64,
    n: Option<u32>,
    s: Option<u64>,
    k: Option<u64>,
    #[serde(rename = "B_size")]
    b_size: usize,
    members: Vec<u64>,
    method: BehrendMethod,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<OracleOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    has_3ap: Option<bool>,
}

pub fn behrend(a: &BehrendArgs) -> CmdResult {
    if a.oracle && a.n > OPTIMAL_MAX_N {
        return Err(Failure::Usage(anyhow!("--oracle needs N <= {OPTIMAL_MAX_N}")));
    }
    let set = behrend_set(a.n).map_err(core_failure)?;
    let oracle = if a.oracle {
        let members = optimal_3ap_free(a.n).map_err(core_failure)?;
        Some(OracleOut {
            size: members.len(),
            members,
        })
    } else {
        None
    };
    let progression = a.verify.then(|| find_3ap(&set.members));
    let out = BehrendOut {
        n_big: a.n,
        n: set.params.map(|p| p.n),
        s: set.params.map(|p| p.s),
        k: set.params.map(|p| p.k),
        b_size: set.len(),
        members: set.members.clone(),
        method: set.method,
        oracle,
        has_3ap: progression.map(|p| p.is_some()),
    };
    emit(&to_json(&out)?, None)?;
    if let Some(Some((x, y, z))) = progression {
        return Err(Failure::Check(anyhow!("progression {x}, {y}, {z} in the set")));
    }
    Ok(())
}

/// Triangle gate, matroid axioms and the construction properties, reported
/// on stderr one line each.
fn run_checks(tf: &TriangleFreeMatroid, c: &CheckArgs) -> CmdResult {
    let mut err = io::stderr();
    let mut worst = CheckStatus::Pass;
    let mut report = |name: &str, status: CheckStatus, detail: String| -> io::Result<()> {
        worst = worst.merge(status);
        writeln!(err, "{name}: {status:?} {detail}")
    };

    let triangles = tf.config().find_triangles(1);
    let tri_status = if triangles.is_empty() { CheckStatus::Pass } else { CheckStatus::Fail };
    report("triangle_free", tri_status, format!("({} found)", triangles.len()))?;

    let m = tf.matroid();
    let (mode, budget) = if c.exhaustive {
        (AxiomMode::Exhaustive, u64::MAX)
    } else {
        (AxiomMode::Sampled, c.budget)
    };
    let axioms = check_axioms(&m, mode, budget, c.seed);
    for ax in &axioms.axioms {
        let detail = match &ax.counterexample {
            Some(ce) => format!("checks={} counterexample={ce:?}", ax.checks),
            None => format!("checks={}", ax.checks),
        };
        report(ax.name, ax.status, detail)?;
    }

    let props = verify_construction_properties(tf, usize::try_from(c.budget).unwrap_or(usize::MAX));
    for p in &props.properties {
        let detail = match &p.counterexample {
            Some(ce) => format!("checks={} counterexample={ce:?}", p.checks),
            None => format!("checks={}", p.checks),
        };
        report(p.name, p.status, detail)?;
    }
    writeln!(err, "coverage: {}/{} items", props.items_checked, props.items_total)?;

    match worst {
        CheckStatus::Pass => Ok(()),
        CheckStatus::Inconclusive if c.allow_inconclusive => Ok(()),
        CheckStatus::Inconclusive => Err(Failure::Check(anyhow!(
            "checks inconclusive within budget (pass --allow-inconclusive to accept)"
        ))),
        CheckStatus::Fail => Err(Failure::Check(anyhow!("verification failed"))),
    }
}

pub fn construct(a: &ConstructArgs) -> CmdResult {
    let c = build_construction(a.n).map_err(core_failure)?;
    if let Some(w) = c.warning() {
        eprintln!("warning: {w}");
    }
    let dump = Dump::from_construction(&c);
    emit(&to_json(&dump)?, a.out.as_deref())?;
    if a.verify {
        run_checks(&c.matroid, &a.checks)?;
    }
    Ok(())
}

pub fn verify(a: &VerifyArgs) -> CmdResult {
    let dump = Dump::load(&a.input)?;
    let tf = dump.matroid().map_err(core_failure)?;
    let config = tf.config();
    if config.lines().len() != dump.pruned_lines {
        return Err(Failure::Check(anyhow!(
            "dump lists {} lines but pruned_lines = {}",
            config.lines().len(),
            dump.pruned_lines
        )));
    }
    let triple = config.triple_points().len();
    if triple != dump.triple_points {
        return Err(Failure::Check(anyhow!(
            "recomputed {triple} triple points, dump says {}",
            dump.triple_points
        )));
    }
    let m = tf.matroid();
    let joints = count_joints(&m, &tf.matroid_lines()).map_err(core_failure)?;
    println!("N={} points={} lines={} triple_points={triple} joints={joints}", dump.n, tf.len(), dump.pruned_lines);
    if joints != triple {
        return Err(Failure::Check(anyhow!("{joints} joints but {triple} triple points")));
    }
    run_checks(&tf, &a.checks)
}

#[derive(Serialize)]
struct SweepOut<'a> {
    epsilon: Epsilon,
    rows: &'a [SweepRow],
}

fn sweep_csv(rows: &[SweepRow]) -> anyhow::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(SWEEP_COLUMNS)?;
    for row in rows {
        w.write_record(row.csv_record())?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

pub fn sweep(a: &SweepArgs) -> CmdResult {
    let rows = joints_sweep(&a.ns, a.epsilon);
    let csv_text = sweep_csv(&rows)?;
    match &a.out {
        Some(path) => {
            emit(&csv_text, Some(path))?;
            let json = to_json(&SweepOut {
                epsilon: a.epsilon,
                rows: &rows,
            })?;
            emit(&json, Some(&path.with_extension("json")))?;
        }
        None => emit(&csv_text, None)?,
    }
    for row in &rows {
        if let Some(w) = &row.warning {
            eprintln!("N={}: warning: {w}", row.n);
        }
        if let Some(e) = &row.error {
            eprintln!("N={}: error: {e}", row.n);
        }
        if let Some(s) = &row.stats {
            if s.joints > s.l * s.l || s.joints != s.triple_points {
                return Err(Failure::Check(anyhow!(
                    "N={}: {} joints, {} lines, {} triple points",
                    row.n,
                    s.joints,
                    s.l,
                    s.triple_points
                )));
            }
        }
    }
    let failed = rows.iter().filter(|r| r.error.is_some()).count();
    if a.strict && failed > 0 {
        return Err(Failure::Check(anyhow!("{failed} of {} rows failed", rows.len())));
    }
    Ok(())
}

#[derive(Serialize)]
struct Grid3dOut {
    k: usize,
    points: usize,
    lines: usize,
    joints: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    coordinates: Option<Vec<[usize; 3]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    line_members: Option<Vec<Vec<usize>>>,
}

pub fn grid3d(a: &Grid3dArgs) -> CmdResult {
    let (ground, desc) = build_grid3d(a.k).map_err(core_failure)?;
    let k = a.k;
    let m = affine_matroid(ground);
    let lines = grid_matroid_lines(&m, &desc).map_err(core_failure)?;
    let joints = count_joints(&m, &lines).map_err(core_failure)?;
    let out = Grid3dOut {
        k,
        points: m.size(),
        lines: lines.len(),
        joints,
        coordinates: a
            .full
            .then(|| (0..m.size()).map(|i| [i / (k * k) + 1, i / k % k + 1, i % k + 1]).collect()),
        line_members: a.full.then(|| lines.iter().map(|l| l.members.clone()).collect()),
    };
    emit(&to_json(&out)?, None)?;
    if a.verify && (joints != k * k * k || lines.len() != 3 * k * k) {
        return Err(Failure::Check(anyhow!(
            "expected {} lines and {} joints",
            3 * k * k,
            k * k * k
        )));
    }
    Ok(())
}
