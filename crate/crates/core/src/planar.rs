//! Integer point/line configurations in the plane.

use std::collections::{HashMap, HashSet};
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IntPoint {
    pub a: i64,
    pub b: i64,
}

impl IntPoint {
    pub const fn new(a: i64, b: i64) -> Self {
        Self { a, b }
    }
}

impl fmt::Display for IntPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.b)
    }
}

/// The line `A x + B y = C`, stored primitive with `A > 0`, or `A = 0` and
/// `B > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct IntLine {
    #[serde(rename = "A")]
    a: i64,
    #[serde(rename = "B")]
    b: i64,
    #[serde(rename = "C")]
    c: i64,
}

impl IntLine {
    pub fn new(a: i64, b: i64, c: i64) -> Result<Self> {
        if a == 0 && b == 0 {
            return Err(Error::InvalidLine(format!("({a},{b},{c}) has A = B = 0")));
        }
        let g = a.gcd(&b).gcd(&c);
        let (mut a, mut b, mut c) = (a / g, b / g, c / g);
        if a < 0 || (a == 0 && b < 0) {
            a = -a;
            b = -b;
            c = -c;
        }
        Ok(Self { a, b, c })
    }

    /// `y = b`
    pub fn horizontal(b: i64) -> Self {
        Self { a: 0, b: 1, c: b }
    }

    /// `x = a`
    pub fn vertical(a: i64) -> Self {
        Self { a: 1, b: 0, c: a }
    }

    /// `x - y = c`
    pub fn diagonal(c: i64) -> Self {
        Self { a: 1, b: -1, c }
    }

    pub fn coeffs(&self) -> (i64, i64, i64) {
        (self.a, self.b, self.c)
    }

    pub fn contains(&self, p: IntPoint) -> bool {
        incident(self, p)
    }
}

impl<'de> Deserialize<'de> for IntLine {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            #[serde(rename = "A")]
            a: i64,
            #[serde(rename = "B")]
            b: i64,
            #[serde(rename = "C")]
            c: i64,
        }
        let r = Raw::deserialize(d)?;
        IntLine::new(r.a, r.b, r.c).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for IntLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x + {}y = {}", self.a, self.b, self.c)
    }
}

pub fn incident(l: &IntLine, p: IntPoint) -> bool {
    l.a as i128 * p.a as i128 + l.b as i128 * p.b as i128 == l.c as i128
}

/// Common point of two distinct lines, if it exists and is integral.
pub fn intersect(l1: &IntLine, l2: &IntLine) -> Result<Option<IntPoint>> {
    if l1 == l2 {
        return Err(Error::Domain(format!("cannot intersect {l1} with itself")));
    }
    let (a1, b1, c1) = (l1.a as i128, l1.b as i128, l1.c as i128);
    let (a2, b2, c2) = (l2.a as i128, l2.b as i128, l2.c as i128);
    let det = a1 * b2 - a2 * b1;
    if det == 0 {
        return Ok(None);
    }
    let xn = c1 * b2 - c2 * b1;
    let yn = a1 * c2 - a2 * c1;
    if xn % det != 0 || yn % det != 0 {
        return Ok(None);
    }
    Ok(Some(IntPoint::new((xn / det) as i64, (yn / det) as i64)))
}

/// A triangle: points `[p0, p1, p2]` (sorted indices) and lines
/// `[p0p1, p1p2, p0p2]`, each line through exactly two of the points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Triangle {
    pub points: [usize; 3],
    pub lines: [usize; 3],
}

/// Points `E`, lines `L` and their incidences. Immutable once built.
#[derive(Debug, Clone)]
pub struct Configuration {
    points: Vec<IntPoint>,
    lines: Vec<IntLine>,
    line_points: Vec<Vec<usize>>,
    point_lines: Vec<Vec<usize>>,
    pair_line: HashMap<(usize, usize), usize>,
}

impl Configuration {
    pub fn new(points: Vec<IntPoint>, lines: Vec<IntLine>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(points.len());
        for p in &points {
            if !seen.insert(*p) {
                return Err(Error::Duplicate(format!("point {p}")));
            }
        }
        let mut seen = HashSet::with_capacity(lines.len());
        for l in &lines {
            if !seen.insert(*l) {
                return Err(Error::Duplicate(format!("line {l}")));
            }
        }
        let line_points: Vec<Vec<usize>> = lines
            .iter()
            .map(|l| {
                points
                    .iter()
                    .enumerate()
                    .filter(|(_, p)| incident(l, **p))
                    .map(|(i, _)| i)
                    .collect()
            })
            .collect();
        let mut point_lines = vec![Vec::new(); points.len()];
        let mut pair_line = HashMap::new();
        for (li, pts) in line_points.iter().enumerate() {
            for (k, &p) in pts.iter().enumerate() {
                point_lines[p].push(li);
                for &q in &pts[k + 1..] {
                    pair_line.insert((p, q), li);
                }
            }
        }
        Ok(Self {
            points,
            lines,
            line_points,
            point_lines,
            pair_line,
        })
    }

    pub fn points(&self) -> &[IntPoint] {
        &self.points
    }

    pub fn lines(&self) -> &[IntLine] {
        &self.lines
    }

    /// Sorted point indices on line `l`.
    pub fn points_on(&self, l: usize) -> &[usize] {
        &self.line_points[l]
    }

    /// Sorted line indices through point `p`.
    pub fn lines_through(&self, p: usize) -> &[usize] {
        &self.point_lines[p]
    }

    /// The configuration line through two distinct points, if any. Unique
    /// because distinct lines share at most one point.
    pub fn line_through(&self, p: usize, q: usize) -> Option<usize> {
        let key = if p < q { (p, q) } else { (q, p) };
        self.pair_line.get(&key).copied()
    }

    pub fn incidences(&self) -> usize {
        self.line_points.iter().map(Vec::len).sum()
    }

    /// Triangles with smallest point `i`, sorted by the other two points.
    pub fn triangles_from(&self, i: usize) -> Vec<Triangle> {
        let mut out = Vec::new();
        let through = &self.point_lines[i];
        for (x, &l) in through.iter().enumerate() {
            for &l2 in &through[x + 1..] {
                for &j in self.line_points[l].iter().filter(|&&j| j > i) {
                    for &k in self.line_points[l2].iter().filter(|&&k| k > i) {
                        // j is not on l2 and k is not on l: the lines meet only at i.
                        let Some(l3) = self.line_through(j, k) else {
                            continue;
                        };
                        let (p1, p2, la, lb) = if j < k { (j, k, l, l2) } else { (k, j, l2, l) };
                        // la through i,p1; lb through i,p2; l3 through p1,p2
                        out.push(Triangle {
                            points: [i, p1, p2],
                            lines: [la, l3, lb],
                        });
                    }
                }
            }
        }
        out.sort();
        out
    }

    /// Up to `limit` triangles in lexicographic order of point indices.
    pub fn find_triangles(&self, limit: usize) -> Vec<Triangle> {
        let mut out = Vec::new();
        for i in 0..self.points.len() {
            if out.len() >= limit {
                break;
            }
            let found = self.triangles_from(i);
            let take = (limit - out.len()).min(found.len());
            out.extend_from_slice(&found[..take]);
        }
        out
    }

    pub fn is_triangle_free(&self) -> bool {
        self.find_triangles(1).is_empty()
    }

    /// `true` iff each of the three lines contains exactly two of the points.
    pub fn is_valid_triangle(&self, t: &Triangle) -> bool {
        let [p0, p1, p2] = t.points;
        let distinct_pts = p0 != p1 && p1 != p2 && p0 != p2;
        let [l0, l1, l2] = t.lines;
        let distinct_lines = l0 != l1 && l1 != l2 && l0 != l2;
        let hits = |l: usize| {
            t.points
                .iter()
                .filter(|&&p| incident(&self.lines[l], self.points[p]))
                .count()
        };
        distinct_pts && distinct_lines && t.lines.iter().all(|&l| hits(l) == 2)
    }

    /// Indices of points on at least three lines, ascending.
    pub fn triple_points(&self) -> Vec<usize> {
        (0..self.points.len())
            .filter(|&p| self.point_lines[p].len() >= 3)
            .collect()
    }

    /// Same points; keeps only lines with at least two incident points.
    pub fn prune_lines(&self) -> Configuration {
        let lines = self
            .lines
            .iter()
            .zip(&self.line_points)
            .filter(|(_, pts)| pts.len() >= 2)
            .map(|(l, _)| *l)
            .collect();
        Configuration::new(self.points.clone(), lines).expect("subset of a valid configuration")
    }
}
