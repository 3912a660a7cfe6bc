//! JSON dump of a construction. Independence is never stored; loading
//! rebuilds the oracle from points and lines.

use std::path::Path;

use anyhow::{Context, Result};
use joints_core::construction::{Construction, TriangleFreeMatroid};
use joints_core::{Configuration, IntLine, IntPoint};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dump {
    #[serde(rename = "N")]
    pub n: u64,
    #[serde(rename = "B")]
    pub b: Vec<u64>,
    pub points: Vec<[i64; 2]>,
    pub lines: Vec<IntLine>,
    /// Number of lines kept by pruning.
    pub pruned_lines: usize,
    pub triple_points: usize,
}

impl Dump {
    pub fn from_construction(c: &Construction) -> Self {
        let config = c.config();
        Self {
            n: c.n,
            b: c.behrend.members.clone(),
            points: config.points().iter().map(|p| [p.a, p.b]).collect(),
            lines: config.lines().to_vec(),
            pruned_lines: config.lines().len(),
            triple_points: config.triple_points().len(),
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    pub fn configuration(&self) -> joints_core::Result<Configuration> {
        let points = self.points.iter().map(|&[a, b]| IntPoint::new(a, b)).collect();
        Configuration::new(points, self.lines.clone())
    }

    /// Rebuilds the matroid, running the exhaustive triangle gate.
    pub fn matroid(&self) -> joints_core::Result<TriangleFreeMatroid> {
        TriangleFreeMatroid::new(self.configuration()?)
    }
}
