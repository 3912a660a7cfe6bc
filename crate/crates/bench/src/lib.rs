//! Fixtures shared by the benchmarks.

use joints_core::affine::{affine_matroid, grid3d, grid_matroid_lines, AffineOracle};
use joints_core::construction::{build_construction, Construction};
use joints_core::{Flat, Matroid};

pub fn construction(n: u64) -> Construction {
    build_construction(n).expect("construction builds")
}

/// Affine matroid of the `k^3` grid with its axis-parallel lines.
pub fn grid(k: usize) -> (Matroid<AffineOracle>, Vec<Flat>) {
    let (ground, desc) = grid3d(k).expect("k >= 2");
    let m = affine_matroid(ground);
    let lines = grid_matroid_lines(&m, &desc).expect("grid lines are matroid lines");
    (m, lines)
}
