//! Grid points, adjacency relations and digital paths.
//!
//! A [`DigitalPath`] is an ordered list of points of the integer plane in
//! which consecutive points are distinct and adjacent. Subpaths are never
//! stored as point lists: they are [`IndexInterval`]s into the owning path,
//! so two subpaths are equal when their index ranges are equal, even if the
//! path visits the same grid point several times.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A point of the integer grid. Serialized as `[x, y]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "[i64; 2]", into = "[i64; 2]")]
pub struct GridPoint {
    pub x: i64,
    pub y: i64,
}

impl GridPoint {
    pub const fn new(x: i64, y: i64) -> Self {
        Self { x, y }
    }
}

impl From<[i64; 2]> for GridPoint {
    fn from([x, y]: [i64; 2]) -> Self {
        Self { x, y }
    }
}

impl From<GridPoint> for [i64; 2] {
    fn from(p: GridPoint) -> Self {
        [p.x, p.y]
    }
}

impl From<(i64, i64)> for GridPoint {
    fn from((x, y): (i64, i64)) -> Self {
        Self { x, y }
    }
}

impl fmt::Display for GridPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Neighbour relation between grid points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Adjacency {
    /// l1 norm at most one.
    #[serde(rename = "4")]
    Four,
    /// l-infinity norm at most one.
    #[serde(rename = "8")]
    Eight,
    /// Any two distinct points; adjacency is carried by consecutive indices.
    #[serde(rename = "index")]
    IndexOnly,
}

impl Adjacency {
    /// Offsets of the neighbourhood, in a fixed order. Empty for `IndexOnly`.
    pub fn offsets(self) -> &'static [(i64, i64)] {
        const FOUR: [(i64, i64); 4] = [(1, 0), (0, 1), (-1, 0), (0, -1)];
        const EIGHT: [(i64, i64); 8] = [
            (1, 0),
            (1, 1),
            (0, 1),
            (-1, 1),
            (-1, 0),
            (-1, -1),
            (0, -1),
            (1, -1),
        ];
        match self {
            Adjacency::Four => &FOUR,
            Adjacency::Eight => &EIGHT,
            Adjacency::IndexOnly => &[],
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Adjacency::Four => "4",
            Adjacency::Eight => "8",
            Adjacency::IndexOnly => "index",
        }
    }
}

impl std::str::FromStr for Adjacency {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "4" | "four" => Ok(Adjacency::Four),
            "8" | "eight" => Ok(Adjacency::Eight),
            "index" | "index-only" => Ok(Adjacency::IndexOnly),
            other => Err(format!("unknown adjacency `{other}` (expected 4, 8 or index)")),
        }
    }
}

impl fmt::Display for Adjacency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// True iff `p != q` and `q - p` is within the unit ball of the adjacency norm.
pub fn is_adjacent(p: GridPoint, q: GridPoint, adjacency: Adjacency) -> bool {
    if p == q {
        return false;
    }
    let dx = (q.x - p.x).unsigned_abs();
    let dy = (q.y - p.y).unsigned_abs();
    match adjacency {
        Adjacency::Four => dx + dy <= 1,
        Adjacency::Eight => dx.max(dy) <= 1,
        Adjacency::IndexOnly => true,
    }
}

/// Why a consecutive pair of points is rejected.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Violation {
    /// The two points are equal.
    Repetition,
    /// The two points are distinct but not adjacent.
    NonAdjacent,
}

/// Result of [`validate_path`]: the first offending consecutive pair, if any.
///
/// `index` is the position of the first point of the pair; for the closing
/// pair of a closed path it is the last index.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ValidationReport {
    Ok,
    Empty,
    Invalid { index: usize, violation: Violation, from: GridPoint, to: GridPoint },
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        matches!(self, ValidationReport::Ok)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValidationReport::Ok => f.write_str("ok"),
            ValidationReport::Empty => f.write_str("path has no points"),
            ValidationReport::Invalid { index, violation, from, to } => {
                let what = match violation {
                    Violation::Repetition => "repeated point",
                    Violation::NonAdjacent => "non-adjacent step",
                };
                write!(f, "{what} at index {index}: {from} -> {to}")
            }
        }
    }
}

/// Checks the path invariants on raw parts and reports the first violation.
pub fn validate_points(points: &[GridPoint], closed: bool, adjacency: Adjacency) -> ValidationReport {
    if points.is_empty() {
        return ValidationReport::Empty;
    }
    let check = |index: usize, from: GridPoint, to: GridPoint| {
        if from == to {
            Some(ValidationReport::Invalid { index, violation: Violation::Repetition, from, to })
        } else if !is_adjacent(from, to, adjacency) {
            Some(ValidationReport::Invalid { index, violation: Violation::NonAdjacent, from, to })
        } else {
            None
        }
    };
    for (i, w) in points.windows(2).enumerate() {
        if let Some(report) = check(i, w[0], w[1]) {
            return report;
        }
    }
    if closed {
        let last = points.len() - 1;
        if let Some(report) = check(last, points[last], points[0]) {
            return report;
        }
    }
    ValidationReport::Ok
}

/// Re-checks a constructed path; always `Ok` for paths built by [`DigitalPath::new`].
pub fn validate_path(path: &DigitalPath) -> ValidationReport {
    validate_points(&path.points, path.closed, path.adjacency)
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PathError {
    #[error("invalid path: {0}")]
    Invalid(ValidationReport),
    #[error("parameter t = {0} is outside [0, 1]")]
    ParameterOutOfRange(f64),
    #[error("malformed path JSON: {0}")]
    Json(String),
}

/// An ordered list of grid points with its adjacency and closedness.
///
/// Invariants (checked at construction): nonempty, consecutive points distinct
/// and adjacent, and for closed paths the last and first points distinct and
/// adjacent. A closed path therefore has at least two points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DigitalPath {
    points: Vec<GridPoint>,
    closed: bool,
    adjacency: Adjacency,
}

impl DigitalPath {
    pub fn new(points: Vec<GridPoint>, closed: bool, adjacency: Adjacency) -> Result<Self, PathError> {
        match validate_points(&points, closed, adjacency) {
            ValidationReport::Ok => Ok(Self { points, closed, adjacency }),
            report => Err(PathError::Invalid(report)),
        }
    }

    pub fn open(points: Vec<GridPoint>, adjacency: Adjacency) -> Result<Self, PathError> {
        Self::new(points, false, adjacency)
    }

    pub fn closed(points: Vec<GridPoint>, adjacency: Adjacency) -> Result<Self, PathError> {
        Self::new(points, true, adjacency)
    }

    pub fn points(&self) -> &[GridPoint] {
        &self.points
    }

    pub fn point(&self, index: usize) -> GridPoint {
        self.points[index]
    }

    /// Number of points, `n + 1` for a path `(p_0, ..., p_n)`.
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn adjacency(&self) -> Adjacency {
        self.adjacency
    }

    /// Whether `iv` denotes a subpath of this path.
    pub fn contains_interval(&self, iv: IndexInterval) -> bool {
        let n = self.len();
        iv.len >= 1
            && iv.start < n
            && if self.closed { iv.len <= n } else { iv.start + iv.len <= n }
    }

    /// Point indices of the subpath, in path order.
    pub fn interval_indices(&self, iv: IndexInterval) -> impl Iterator<Item = usize> + '_ {
        let n = self.len();
        (0..iv.len).map(move |k| (iv.start + k) % n)
    }

    /// Points of the subpath, in path order.
    pub fn interval_points(&self, iv: IndexInterval) -> impl Iterator<Item = GridPoint> + '_ {
        self.interval_indices(iv).map(move |i| self.points[i])
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&PathDocument::from(self)).expect("path serialization cannot fail")
    }

    /// Parses the path JSON format, rejecting documents that violate the path
    /// invariants with the validation report in the message.
    pub fn from_json(text: &str) -> Result<Self, PathError> {
        let doc: PathDocument =
            serde_json::from_str(text).map_err(|e| PathError::Json(e.to_string()))?;
        DigitalPath::try_from(doc)
    }
}

/// Wire form of a path: `{"closed": .., "adjacency": "4"|"8"|"index", "points": [[x,y], ..]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathDocument {
    pub closed: bool,
    pub adjacency: Adjacency,
    pub points: Vec<GridPoint>,
}

impl From<&DigitalPath> for PathDocument {
    fn from(path: &DigitalPath) -> Self {
        Self { closed: path.closed, adjacency: path.adjacency, points: path.points.clone() }
    }
}

impl TryFrom<PathDocument> for DigitalPath {
    type Error = PathError;

    fn try_from(doc: PathDocument) -> Result<Self, Self::Error> {
        DigitalPath::new(doc.points, doc.closed, doc.adjacency)
    }
}

/// A subpath `(p_start, ..., p_{start+len-1})`, indices taken modulo the path
/// length on closed paths. Serialized as `{"start": .., "len": ..}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IndexInterval {
    pub start: usize,
    pub len: usize,
}

impl IndexInterval {
    pub const fn new(start: usize, len: usize) -> Self {
        Self { start, len }
    }

    pub const fn singleton(index: usize) -> Self {
        Self { start: index, len: 1 }
    }

    /// Index of the last point (modulo `n_points`).
    pub fn last(&self, n_points: usize) -> usize {
        (self.start + self.len - 1) % n_points
    }

    /// Whether `other` is a sublist of `self` on a path with `n_points` points.
    ///
    /// On closed paths this is the cyclic sublist relation: `other` must start
    /// at offset `d` from `self.start` (mod `n_points`) with `d + other.len <=
    /// self.len`. Two full turns with different starts are different sublists
    /// and neither contains the other.
    pub fn contains(&self, other: &IndexInterval, n_points: usize, closed: bool) -> bool {
        if closed {
            let d = (other.start + n_points - self.start % n_points) % n_points;
            d + other.len <= self.len
        } else {
            other.start >= self.start && other.start + other.len <= self.start + self.len
        }
    }

    /// Whether the two subpaths share at least one point index.
    pub fn intersects(&self, other: &IndexInterval, n_points: usize, closed: bool) -> bool {
        let starts_inside = |a: &IndexInterval, b: &IndexInterval| {
            if closed {
                (b.start + n_points - a.start) % n_points < a.len
            } else {
                b.start >= a.start && b.start < a.start + a.len
            }
        };
        starts_inside(self, other) || starts_inside(other, self)
    }
}

impl fmt::Display for IndexInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}+{}]", self.start, self.len)
    }
}

/// Middle point of a subpath: `(start + floor((len - 1) / 2)) mod n_points`.
///
/// The interval is rebuilt from this index by adding points alternately on
/// the positive and the negative side, positive first.
pub fn middle_index(iv: IndexInterval, n_points: usize) -> usize {
    (iv.start + (iv.len - 1) / 2) % n_points
}

/// Rebuilds the interval of length `len` whose middle is `middle`.
pub fn interval_from_middle(middle: usize, len: usize, n_points: usize) -> IndexInterval {
    let back = (len - 1) / 2;
    IndexInterval::new((middle + n_points - back) % n_points, len)
}

/// Evaluates the canonical extension of the path: the polygon through its
/// points with vertex `k` at parameter `k / n` (open) or `k / (n + 1)`
/// (closed, returning to `p_0` at `t = 1`).
pub fn canonical_extension(path: &DigitalPath, t: f64) -> Result<(f64, f64), PathError> {
    if !(0.0..=1.0).contains(&t) {
        return Err(PathError::ParameterOutOfRange(t));
    }
    let pts = path.points();
    let segments = if path.is_closed() { pts.len() } else { pts.len() - 1 };
    if segments == 0 {
        let p = pts[0];
        return Ok((p.x as f64, p.y as f64));
    }
    let scaled = t * segments as f64;
    let k = (scaled.floor() as usize).min(segments - 1);
    let frac = scaled - k as f64;
    let a = pts[k];
    let b = pts[(k + 1) % pts.len()];
    Ok((
        a.x as f64 + frac * (b.x - a.x) as f64,
        a.y as f64 + frac * (b.y - a.y) as f64,
    ))
}

/// Every subpath of `path` once, by increasing start then length.
///
/// Open paths yield `(n+1)(n+2)/2` intervals, closed paths `(n+1)^2` (every
/// start with every length up to one full turn). `max_len` caps the length.
pub fn enumerate_subpaths(
    path: &DigitalPath,
    max_len: Option<usize>,
) -> impl Iterator<Item = IndexInterval> + '_ {
    let n = path.len();
    let closed = path.is_closed();
    let cap = max_len.unwrap_or(n).min(n);
    (0..n).flat_map(move |start| {
        let longest = if closed { cap } else { cap.min(n - start) };
        (1..=longest).map(move |len| IndexInterval::new(start, len))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(raw: &[(i64, i64)]) -> Vec<GridPoint> {
        raw.iter().map(|&p| p.into()).collect()
    }

    #[test]
    fn adjacency_norms() {
        let o = GridPoint::new(0, 0);
        assert!(is_adjacent(o, GridPoint::new(1, 0), Adjacency::Four));
        assert!(!is_adjacent(o, GridPoint::new(1, 1), Adjacency::Four));
        assert!(is_adjacent(o, GridPoint::new(1, 1), Adjacency::Eight));
        assert!(!is_adjacent(o, o, Adjacency::Eight));
        assert!(!is_adjacent(o, o, Adjacency::IndexOnly));
        assert!(is_adjacent(o, GridPoint::new(7, -3), Adjacency::IndexOnly));
    }

    #[test]
    fn validation_reports_first_violation() {
        let ok = validate_points(&pts(&[(0, 0), (1, 0), (2, 0)]), false, Adjacency::Four);
        assert_eq!(ok, ValidationReport::Ok);

        let gap = validate_points(&pts(&[(0, 0), (2, 0)]), false, Adjacency::Four);
        assert!(matches!(
            gap,
            ValidationReport::Invalid { index: 0, violation: Violation::NonAdjacent, .. }
        ));

        let rep = validate_points(&pts(&[(0, 0), (0, 0)]), false, Adjacency::IndexOnly);
        assert!(matches!(
            rep,
            ValidationReport::Invalid { index: 0, violation: Violation::Repetition, .. }
        ));

        assert_eq!(validate_points(&[], false, Adjacency::Four), ValidationReport::Empty);
    }

    #[test]
    fn closing_pair_is_checked() {
        let line = pts(&[(0, 0), (1, 0), (2, 0)]);
        let report = validate_points(&line, true, Adjacency::Eight);
        assert!(matches!(
            report,
            ValidationReport::Invalid { index: 2, violation: Violation::NonAdjacent, .. }
        ));
        // A single point cannot close on itself.
        assert!(DigitalPath::closed(pts(&[(0, 0)]), Adjacency::Eight).is_err());
        assert!(DigitalPath::closed(pts(&[(0, 0), (1, 0)]), Adjacency::Four).is_ok());
    }

    #[test]
    fn middle_index_examples() {
        assert_eq!(middle_index(IndexInterval::new(3, 1), 10), 3);
        assert_eq!(middle_index(IndexInterval::new(0, 5), 10), 2);
        assert_eq!(middle_index(IndexInterval::new(0, 6), 10), 2);
        assert_eq!(middle_index(IndexInterval::new(8, 6), 10), 0);
    }

    #[test]
    fn canonical_extension_examples() {
        let p = DigitalPath::open(pts(&[(0, 0), (1, 0), (2, 0)]), Adjacency::Four).unwrap();
        assert_eq!(canonical_extension(&p, 0.0).unwrap(), (0.0, 0.0));
        assert_eq!(canonical_extension(&p, 1.0).unwrap(), (2.0, 0.0));
        assert_eq!(canonical_extension(&p, 0.5).unwrap(), (1.0, 0.0));

        let q = DigitalPath::open(pts(&[(0, 0), (1, 0)]), Adjacency::Four).unwrap();
        assert_eq!(canonical_extension(&q, 0.25).unwrap(), (0.25, 0.0));

        let square = pts(&[(0, 0), (1, 0), (1, 1), (0, 1)]);
        let c = DigitalPath::closed(square, Adjacency::Four).unwrap();
        assert_eq!(canonical_extension(&c, 1.0).unwrap(), (0.0, 0.0));
        assert_eq!(canonical_extension(&c, 0.5).unwrap(), (1.0, 1.0));

        let single = DigitalPath::open(pts(&[(4, 5)]), Adjacency::Eight).unwrap();
        assert_eq!(canonical_extension(&single, 0.3).unwrap(), (4.0, 5.0));

        assert!(canonical_extension(&p, 1.5).is_err());
        assert!(canonical_extension(&p, f64::NAN).is_err());
    }

    #[test]
    fn subpath_counts() {
        let open = DigitalPath::open(pts(&[(0, 0), (1, 0), (2, 0)]), Adjacency::Four).unwrap();
        assert_eq!(enumerate_subpaths(&open, None).count(), 6);
        assert_eq!(enumerate_subpaths(&open, Some(1)).count(), 3);

        let tri = DigitalPath::closed(pts(&[(0, 0), (1, 0), (1, 1)]), Adjacency::Eight).unwrap();
        let all: Vec<_> = enumerate_subpaths(&tri, None).collect();
        assert_eq!(all.len(), 9);
        let mut dedup = all.clone();
        dedup.sort();
        dedup.dedup();
        assert_eq!(dedup.len(), 9);
    }

    #[test]
    fn cyclic_containment() {
        let n = 10;
        let a = IndexInterval::new(8, 5); // 8 9 0 1 2
        assert!(a.contains(&IndexInterval::new(9, 2), n, true));
        assert!(a.contains(&IndexInterval::new(0, 3), n, true));
        assert!(!a.contains(&IndexInterval::new(0, 4), n, true));
        assert!(!a.contains(&IndexInterval::new(7, 2), n, true));
        // full turns with distinct starts are incomparable sublists
        let f0 = IndexInterval::new(0, n);
        let f3 = IndexInterval::new(3, n);
        assert!(!f0.contains(&f3, n, true));
        assert!(f0.contains(&IndexInterval::new(3, 7), n, true));
        assert!(a.intersects(&IndexInterval::new(2, 3), n, true));
        assert!(!a.intersects(&IndexInterval::new(3, 5), n, true));
    }

    #[test]
    fn json_round_trip_and_rejection() {
        let p = DigitalPath::closed(pts(&[(0, 0), (1, 0), (1, 1), (0, 1)]), Adjacency::Four)
            .unwrap();
        let text = p.to_json();
        assert_eq!(
            text,
            r#"{"closed":true,"adjacency":"4","points":[[0,0],[1,0],[1,1],[0,1]]}"#
        );
        assert_eq!(DigitalPath::from_json(&text).unwrap(), p);

        let err = DigitalPath::from_json(r#"{"closed":false,"adjacency":"4","points":[[0,0],[2,0]]}"#)
            .unwrap_err();
        assert!(err.to_string().contains("non-adjacent step at index 0"), "{err}");
        assert!(DigitalPath::from_json(r#"{"closed":false,"adjacency":"5","points":[[0,0]]}"#)
            .is_err());
    }
}
