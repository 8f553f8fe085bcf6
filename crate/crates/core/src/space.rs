//! Finite σ-spaces: a point set together with a world function.
//!
//! A world function is any real function on ordered point pairs that
//! vanishes on the diagonal. It can be given explicitly as a dense table or
//! computed from coordinates with the Euclidean world function
//! `σ(x, y) = ½|x − y|²`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};

/// Absolute tolerance used by every equality comparison unless overridden.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

/// Upper bound on the number of grid points generated before deletions.
const MAX_GRID_POINTS: usize = 1 << 20;

/// Label of a point of Ω. Compared by exact string equality.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PointId(String);

impl PointId {
    pub fn new(label: impl Into<String>) -> Self {
        PointId(label.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for PointId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for PointId {
    fn from(s: &str) -> Self {
        PointId(s.to_owned())
    }
}

impl From<String> for PointId {
    fn from(s: String) -> Self {
        PointId(s)
    }
}

impl AsRef<str> for PointId {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Backing {
    /// Row-major |Ω|×|Ω| matrix, `values[i * n + j] = σ(i, j)`.
    Table(Vec<f64>),
    /// Flat coordinates, `coords[i * dim..(i + 1) * dim]` belongs to point `i`.
    Coordinates { dim: usize, coords: Vec<f64> },
}

/// A finite σ-space `{σ, Ω}`.
///
/// Immutable once built. All "modifying" operations return a new space.
#[derive(Debug, Clone, PartialEq)]
pub struct SigmaSpace {
    points: Vec<PointId>,
    index: HashMap<String, usize>,
    backing: Backing,
    tolerance: f64,
}

/// The Euclidean world function `½ Σ (xᵢ − yᵢ)²`.
pub fn euclidean_sigma(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch(x.len(), y.len()));
    }
    Ok(half_squared_distance(x, y))
}

#[inline]
fn half_squared_distance(x: &[f64], y: &[f64]) -> f64 {
    0.5 * x
        .iter()
        .zip(y)
        .map(|(a, b)| {
            let d = a - b;
            d * d
        })
        .sum::<f64>()
}

fn index_labels<S: AsRef<str>>(labels: &[S]) -> Result<(Vec<PointId>, HashMap<String, usize>)> {
    if labels.is_empty() {
        return Err(Error::EmptySpace);
    }
    let mut index = HashMap::with_capacity(labels.len());
    let mut points = Vec::with_capacity(labels.len());
    for (i, label) in labels.iter().enumerate() {
        let label = label.as_ref();
        if index.insert(label.to_owned(), i).is_some() {
            return Err(Error::DuplicateLabel(label.to_owned()));
        }
        points.push(PointId::new(label));
    }
    Ok((points, index))
}

fn check_tolerance(tolerance: f64) -> Result<()> {
    if tolerance.is_finite() && tolerance >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidTolerance(tolerance))
    }
}

impl SigmaSpace {
    /// Builds a table-backed space.
    ///
    /// Every ordered pair `(P, Q)` with `P ≠ Q` needs exactly one entry.
    /// Diagonal entries are optional and default to zero; when given they
    /// must vanish within the default tolerance.
    pub fn from_table<L, A, B>(labels: &[L], entries: impl IntoIterator<Item = (A, B, f64)>) -> Result<Self>
    where
        L: AsRef<str>,
        A: AsRef<str>,
        B: AsRef<str>,
    {
        Self::from_table_with_tolerance(labels, entries, DEFAULT_TOLERANCE)
    }

    /// As [`SigmaSpace::from_table`], validating the diagonal against `tolerance`.
    pub fn from_table_with_tolerance<L, A, B>(
        labels: &[L],
        entries: impl IntoIterator<Item = (A, B, f64)>,
        tolerance: f64,
    ) -> Result<Self>
    where
        L: AsRef<str>,
        A: AsRef<str>,
        B: AsRef<str>,
    {
        check_tolerance(tolerance)?;
        let (points, index) = index_labels(labels)?;
        let n = points.len();
        let mut values = vec![f64::NAN; n * n];
        let mut seen = vec![false; n * n];
        for (p, q, value) in entries {
            let (p, q) = (p.as_ref(), q.as_ref());
            let i = *index.get(p).ok_or_else(|| Error::UnknownPoint(p.to_owned()))?;
            let j = *index.get(q).ok_or_else(|| Error::UnknownPoint(q.to_owned()))?;
            if seen[i * n + j] {
                return Err(Error::DuplicateEntry(p.to_owned(), q.to_owned()));
            }
            seen[i * n + j] = true;
            values[i * n + j] = value;
        }
        for i in 0..n {
            if !seen[i * n + i] {
                values[i * n + i] = 0.0;
            }
            for j in 0..n {
                if i != j && !seen[i * n + j] {
                    return Err(Error::MissingEntry(points[i].0.clone(), points[j].0.clone()));
                }
            }
        }
        let space = SigmaSpace {
            points,
            index,
            backing: Backing::Table(values),
            tolerance,
        };
        space.validate()?;
        Ok(space)
    }

    /// Builds a space whose σ is the Euclidean world function of the given
    /// coordinates. All coordinate vectors must share one dimension `n ≥ 1`.
    pub fn from_coordinates<L: AsRef<str>>(labels: &[L], coordinates: &[Vec<f64>]) -> Result<Self> {
        let (points, index) = index_labels(labels)?;
        if coordinates.len() != points.len() {
            return Err(Error::DimensionMismatch(points.len(), coordinates.len()));
        }
        let dim = coordinates[0].len();
        if dim == 0 {
            return Err(Error::InvalidGrid("coordinate dimension must be at least 1".into()));
        }
        let mut coords = Vec::with_capacity(dim * points.len());
        for (label, c) in points.iter().zip(coordinates) {
            if c.len() != dim {
                return Err(Error::DimensionMismatch(dim, c.len()));
            }
            if let Some(bad) = c.iter().find(|x| !x.is_finite()) {
                return Err(Error::NonFiniteValue(label.0.clone(), label.0.clone(), *bad));
            }
            coords.extend_from_slice(c);
        }
        let space = SigmaSpace {
            points,
            index,
            backing: Backing::Coordinates { dim, coords },
            tolerance: DEFAULT_TOLERANCE,
        };
        // Squared differences of large finite coordinates can still overflow.
        space.validate()?;
        Ok(space)
    }

    /// Integer grid `{0..m−1}ⁿ` minus the deleted points, with Euclidean σ.
    pub fn grid(spec: &GridSpec) -> Result<Self> {
        spec.validate()?;
        let total = spec
            .size
            .checked_pow(spec.dim as u32)
            .filter(|&t| t <= MAX_GRID_POINTS)
            .ok_or_else(|| Error::InvalidGrid(format!("{}^{} points is too many", spec.size, spec.dim)))?;
        let mut labels = Vec::new();
        let mut coordinates = Vec::new();
        let mut tuple = vec![0usize; spec.dim];
        for _ in 0..total {
            if !spec.deleted.contains(&tuple) {
                labels.push(grid_label(&tuple));
                coordinates.push(tuple.iter().map(|&x| x as f64).collect());
            }
            // Odometer increment, last axis fastest.
            for axis in (0..spec.dim).rev() {
                tuple[axis] += 1;
                if tuple[axis] < spec.size {
                    break;
                }
                tuple[axis] = 0;
            }
        }
        if labels.is_empty() {
            return Err(Error::EmptySpace);
        }
        Self::from_coordinates(&labels, &coordinates)
    }

    /// Returns the same space with a different tolerance, re-validated.
    pub fn with_tolerance(mut self, tolerance: f64) -> Result<Self> {
        check_tolerance(tolerance)?;
        self.tolerance = tolerance;
        self.validate()?;
        Ok(self)
    }

    fn validate(&self) -> Result<()> {
        let n = self.len();
        for i in 0..n {
            for j in 0..n {
                let value = self.sigma(i, j);
                if !value.is_finite() {
                    return Err(Error::NonFiniteValue(
                        self.points[i].0.clone(),
                        self.points[j].0.clone(),
                        value,
                    ));
                }
            }
            let diagonal = self.sigma(i, i);
            if diagonal.abs() > self.tolerance {
                return Err(Error::NonzeroDiagonal(self.points[i].0.clone(), diagonal));
            }
        }
        Ok(())
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// Number of points, `|Ω|`.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    /// Always false for a constructed space; present for API symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[PointId] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &PointId {
        &self.points[i]
    }

    pub fn contains(&self, label: &str) -> bool {
        self.index.contains_key(label)
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownPoint(label.to_owned()))
    }

    /// σ between the points with indices `i` and `j`.
    ///
    /// Panics if either index is out of range.
    #[inline]
    pub fn sigma(&self, i: usize, j: usize) -> f64 {
        match &self.backing {
            Backing::Table(values) => values[i * self.points.len() + j],
            Backing::Coordinates { dim, coords } => {
                half_squared_distance(&coords[i * dim..(i + 1) * dim], &coords[j * dim..(j + 1) * dim])
            }
        }
    }

    pub fn sigma_between(&self, p: &str, q: &str) -> Result<f64> {
        Ok(self.sigma(self.index_of(p)?, self.index_of(q)?))
    }

    pub fn is_table_backed(&self) -> bool {
        matches!(self.backing, Backing::Table(_))
    }

    /// Coordinate dimension for coordinate-backed spaces.
    pub fn dimension(&self) -> Option<usize> {
        match &self.backing {
            Backing::Table(_) => None,
            Backing::Coordinates { dim, .. } => Some(*dim),
        }
    }

    pub fn coordinates(&self, i: usize) -> Option<&[f64]> {
        match &self.backing {
            Backing::Table(_) => None,
            Backing::Coordinates { dim, coords } => Some(&coords[i * dim..(i + 1) * dim]),
        }
    }

    /// True iff `|σ(P,Q) − σ(Q,P)| ≤ ε` for all pairs.
    pub fn is_symmetric(&self) -> bool {
        match self.backing {
            Backing::Coordinates { .. } => true,
            Backing::Table(_) => {
                let n = self.len();
                (0..n).all(|i| (i + 1..n).all(|j| (self.sigma(i, j) - self.sigma(j, i)).abs() <= self.tolerance))
            }
        }
    }

    /// Dense copy of σ in row-major order.
    pub fn sigma_matrix(&self) -> Vec<f64> {
        let n = self.len();
        let mut values = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                values.push(self.sigma(i, j));
            }
        }
        values
    }

    /// Same points and σ values, table-backed.
    pub fn to_table(&self) -> SigmaSpace {
        SigmaSpace {
            points: self.points.clone(),
            index: self.index.clone(),
            backing: Backing::Table(self.sigma_matrix()),
            tolerance: self.tolerance,
        }
    }

    /// New table-backed space with `σ'(P,Q) = σ(P,Q) + δ` for every listed
    /// delta. Repeated pairs accumulate.
    pub fn perturb<A, B>(&self, deltas: impl IntoIterator<Item = (A, B, f64)>) -> Result<SigmaSpace>
    where
        A: AsRef<str>,
        B: AsRef<str>,
    {
        let n = self.len();
        let mut values = self.sigma_matrix();
        for (p, q, delta) in deltas {
            let i = self.index_of(p.as_ref())?;
            let j = self.index_of(q.as_ref())?;
            values[i * n + j] += delta;
        }
        let space = SigmaSpace {
            points: self.points.clone(),
            index: self.index.clone(),
            backing: Backing::Table(values),
            tolerance: self.tolerance,
        };
        space.validate()?;
        Ok(space)
    }
}

/// Label used for grid points: `p` followed by the coordinates joined by `_`.
pub fn grid_label(coords: &[usize]) -> String {
    let parts: Vec<String> = coords.iter().map(|c| c.to_string()).collect();
    format!("p{}", parts.join("_"))
}

/// An integer grid `{0..size−1}^dim` with some points removed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridSpec {
    pub dim: usize,
    pub size: usize,
    pub deleted: BTreeSet<Vec<usize>>,
}

impl GridSpec {
    pub fn new(dim: usize, size: usize) -> Self {
        GridSpec {
            dim,
            size,
            deleted: BTreeSet::new(),
        }
    }

    pub fn delete(mut self, point: impl Into<Vec<usize>>) -> Self {
        self.deleted.insert(point.into());
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 || self.size == 0 {
            return Err(Error::InvalidGrid("dimension and size must be positive".into()));
        }
        for p in &self.deleted {
            if p.len() != self.dim {
                return Err(Error::InvalidGrid(format!(
                    "deleted point {p:?} has {} coordinates, expected {}",
                    p.len(),
                    self.dim
                )));
            }
            if p.iter().any(|&c| c >= self.size) {
                return Err(Error::InvalidGrid(format!("deleted point {p:?} lies outside the grid")));
            }
        }
        Ok(())
    }
}
