//! Affine independence over the rationals, and the axis-parallel grid in
//! three dimensions.
//!
//! Rank decisions never touch floating point: difference vectors are scaled
//! to integer rows and reduced with fraction-free (Bareiss) elimination.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matroid::{Flat, GroundSet, IndependenceOracle, Matroid};

/// A point of `Q^d`. `BigRational` keeps every coordinate reduced.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalPoint {
    coords: Vec<BigRational>,
}

impl RationalPoint {
    pub fn new(coords: Vec<BigRational>) -> Self {
        Self { coords }
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Self {
            coords: coords
                .iter()
                .map(|&c| BigRational::from_integer(BigInt::from(c)))
                .collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }
}

/// Rank of an integer matrix by fraction-free Gaussian elimination.
/// Every division in the Bareiss update is exact.
pub fn integer_rank(mut rows: Vec<Vec<BigInt>>) -> usize {
    let n_rows = rows.len();
    if n_rows == 0 {
        return 0;
    }
    let n_cols = rows[0].len();
    let mut rank = 0;
    let mut prev_pivot = BigInt::one();
    for col in 0..n_cols {
        if rank == n_rows {
            break;
        }
        let Some(p) = (rank..n_rows).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank][col].clone();
        let (top, below) = rows.split_at_mut(rank + 1);
        let pivot_row = &top[rank];
        for row in below {
            let factor = row[col].clone();
            for (c, x) in row.iter_mut().enumerate().skip(col) {
                *x = (&pivot * &*x - &factor * &pivot_row[c]) / &prev_pivot;
            }
        }
        // Columns left of `col` in rows below the pivot are already zero.
        prev_pivot = pivot;
        rank += 1;
    }
    rank
}

/// Scales a rational vector by the lcm of its denominators.
fn to_integer_row(v: &[BigRational]) -> Vec<BigInt> {
    let lcm = v
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    v.iter()
        .map(|x| x.numer() * (&lcm / x.denom()))
        .collect()
}

/// `true` iff the `k - 1` differences `p_i - p_0` are linearly independent.
pub fn affine_independent(points: &[&RationalPoint]) -> Result<bool> {
    let Some(first) = points.first() else {
        return Ok(true);
    };
    let d = first.dim();
    if let Some(p) = points.iter().find(|p| p.dim() != d) {
        return Err(Error::DimensionMismatch(d, p.dim()));
    }
    if points.len() > d + 1 {
        return Ok(false);
    }
    let rows: Vec<Vec<BigInt>> = points[1..]
        .iter()
        .map(|p| {
            let diff: Vec<BigRational> = p
                .coords
                .iter()
                .zip(&first.coords)
                .map(|(a, b)| a - b)
                .collect();
            to_integer_row(&diff)
        })
        .collect();
    Ok(integer_rank(rows) == points.len() - 1)
}

/// Pairwise distinct points of a common dimension.
#[derive(Debug, Clone)]
pub struct AffineGround {
    points: Vec<RationalPoint>,
}

impl AffineGround {
    pub fn new(points: Vec<RationalPoint>) -> Result<Self> {
        if let Some(first) = points.first() {
            if let Some(p) = points.iter().find(|p| p.dim() != first.dim()) {
                return Err(Error::DimensionMismatch(first.dim(), p.dim()));
            }
        }
        let mut sorted: Vec<&RationalPoint> = points.iter().collect();
        sorted.sort();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Duplicate(format!("point {:?}", w[0])));
        }
        Ok(Self { points })
    }

    pub fn points(&self) -> &[RationalPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points.first().map_or(0, RationalPoint::dim)
    }
}

/// Independence oracle: a subset is independent iff its points are
/// affinely independent.
#[derive(Debug, Clone)]
pub struct AffineOracle {
    ground: AffineGround,
}

impl AffineOracle {
    pub fn ground(&self) -> &AffineGround {
        &self.ground
    }
}

impl IndependenceOracle for AffineOracle {
    fn ground_size(&self) -> usize {
        self.ground.len()
    }

    fn is_independent(&self, set: &[usize]) -> bool {
        let pts: Vec<&RationalPoint> = set.iter().map(|&i| &self.ground.points[i]).collect();
        affine_independent(&pts).expect("ground points share one dimension")
    }
}

pub fn affine_matroid(ground: AffineGround) -> Matroid<AffineOracle> {
    let labels = ground
        .points
        .iter()
        .map(|p| {
            let parts: Vec<String> = p.coords.iter().map(|c| c.to_string()).collect();
            format!("({})", parts.join(","))
        })
        .collect();
    let ground_set = GroundSet::new(labels).expect("affine ground points are distinct");
    Matroid::new(ground_set, AffineOracle { ground }).expect("sizes agree")
}

/// One axis-parallel line of the grid as the indices of its `k` points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineDescriptor {
    pub members: Vec<usize>,
}

/// The grid `{1..k}^3` as a ground set plus its `3k^2` axis-parallel lines.
///
/// Point `(x, y, z)` has index `(x-1)k^2 + (y-1)k + (z-1)`. Lines are listed
/// z-direction first, then y, then x, each family ordered by its two fixed
/// coordinates.
pub fn grid3d(k: usize) -> Result<(AffineGround, Vec<LineDescriptor>)> {
    if k < 2 {
        return Err(Error::Domain(format!("grid3d needs k >= 2, got {k}")));
    }
    let idx = |x: usize, y: usize, z: usize| (x * k + y) * k + z;
    let mut points = Vec::with_capacity(k * k * k);
    for x in 1..=k as i64 {
        for y in 1..=k as i64 {
            for z in 1..=k as i64 {
                points.push(RationalPoint::from_ints(&[x, y, z]));
            }
        }
    }
    let mut lines = Vec::with_capacity(3 * k * k);
    for i in 0..k {
        for j in 0..k {
            lines.push(LineDescriptor {
                members: (0..k).map(|t| idx(i, j, t)).collect(),
            });
        }
    }
    for i in 0..k {
        for j in 0..k {
            lines.push(LineDescriptor {
                members: (0..k).map(|t| idx(i, t, j)).collect(),
            });
        }
    }
    for i in 0..k {
        for j in 0..k {
            let mut members: Vec<usize> = (0..k).map(|t| idx(t, i, j)).collect();
            members.sort_unstable();
            lines.push(LineDescriptor { members });
        }
    }
    Ok((AffineGround::new(points)?, lines))
}

/// Matroid lines of the grid: the closure of the first two points of each
/// descriptor.
pub fn grid_matroid_lines(
    m: &Matroid<AffineOracle>,
    descriptors: &[LineDescriptor],
) -> Result<Vec<Flat>> {
    descriptors
        .iter()
        .map(|d| {
            let f = m.span(&d.members[..2])?;
            m.line(&f.members)
        })
        .collect()
}
