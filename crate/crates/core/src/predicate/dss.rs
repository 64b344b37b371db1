//! Digital straight segment recognition.
//!
//! A set of grid points is a DSS when some integers `a`, `b`, `mu` with
//! `gcd(a, b) = 1` place every point in the strip
//! `mu <= a*x - b*y <= mu + omega - 1`, where `omega = max(|a|, |b|)` for
//! 8-connected (naive) lines and `omega = |a| + |b|` for 4-connected
//! (standard) lines. The test is set based: a path that walks back and forth
//! along a segment is still a DSS.
//!
//! For a fixed direction the strip condition reads `range(a*x - b*y) < omega`.
//! Both sides are homogeneous in `(a, b)`, `omega` is linear on each cone
//! bounded by the axes and diagonals, and the range is a convex piecewise
//! linear function whose breakpoints are the normals of the convex hull
//! edges. So it is enough to test the hull edge normals together with
//! `(1, 0)`, `(0, 1)`, `(1, 1)` and `(1, -1)`.
//!
//! The recognizer keeps the point multiset ordered, so every hull is built by
//! a linear monotone-chain pass. A cached witness direction answers most
//! extensions without rebuilding the hull. Removal is O(log len); the cached
//! witness stays valid on a subset.

use std::collections::BTreeMap;

use num_integer::Integer;

use super::{Predicate, PredicateError, PredicateSpec, Recognizer, Window, WindowRecognizer, WindowState};
use crate::path::{Adjacency, DigitalPath, GridPoint, IndexInterval};

/// The DSS predicate. Defined on 4- and 8-paths only.
#[derive(Clone, Copy, Debug, Default)]
pub struct Dss;

/// Arithmetic characteristics of a DSS with its leaning points.
///
/// Sign convention: `a >= 0`, and `b > 0` when `a == 0`. Among the feasible
/// directions the one with the smallest `omega` is reported, ties broken by
/// the smallest `(a, b)`. Upper leaning points attain `a*x - b*y == mu`,
/// lower leaning points attain `mu + omega - 1`; `first`/`last` are taken in
/// path order. A lower bound that no point reaches leaves its pair `None`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DssState {
    pub interval: IndexInterval,
    pub a: i64,
    pub b: i64,
    pub mu: i64,
    pub omega: i64,
    pub upper_first: GridPoint,
    pub upper_last: GridPoint,
    pub lower_first: Option<GridPoint>,
    pub lower_last: Option<GridPoint>,
}

impl DssState {
    /// Characteristics of the subpath, `None` when it is not a DSS.
    pub fn of(path: &DigitalPath, iv: IndexInterval) -> Option<DssState> {
        let standard = path.adjacency() == Adjacency::Four;
        let mut pts: Vec<GridPoint> = path.interval_points(iv).collect();
        pts.sort_unstable();
        pts.dedup();
        let w = canonical_witness(&pts, standard)?;
        let value = |p: GridPoint| w.a as i128 * p.x as i128 - w.b as i128 * p.y as i128;
        let mu = w.lo;
        let top = w.lo + w.omega as i128 - 1;
        let upper: Vec<GridPoint> = path.interval_points(iv).filter(|&p| value(p) == mu).collect();
        let lower: Vec<GridPoint> = path.interval_points(iv).filter(|&p| value(p) == top).collect();
        Some(DssState {
            interval: iv,
            a: w.a,
            b: w.b,
            mu: mu as i64,
            omega: w.omega,
            upper_first: upper[0],
            upper_last: *upper.last().unwrap(),
            lower_first: lower.first().copied(),
            lower_last: lower.last().copied(),
        })
    }

    /// Whether `p` lies in the strip of these characteristics.
    pub fn contains(&self, p: GridPoint) -> bool {
        let v = self.a * p.x - self.b * p.y;
        self.mu <= v && v < self.mu + self.omega
    }
}

/// A feasible direction with the value range it induces on the point set.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Witness {
    a: i64,
    b: i64,
    omega: i64,
    lo: i128,
    hi: i128,
}

impl Witness {
    fn value(&self, p: GridPoint) -> i128 {
        self.a as i128 * p.x as i128 - self.b as i128 * p.y as i128
    }

    fn admits(&self, p: GridPoint) -> Option<Witness> {
        let v = self.value(p);
        let (lo, hi) = (self.lo.min(v), self.hi.max(v));
        (hi - lo < self.omega as i128).then_some(Witness { lo, hi, ..*self })
    }
}

fn omega(a: i64, b: i64, standard: bool) -> i64 {
    if standard {
        a.abs() + b.abs()
    } else {
        a.abs().max(b.abs())
    }
}

fn normalize(a: i64, b: i64) -> (i64, i64) {
    let g = a.gcd(&b);
    let (a, b) = (a / g, b / g);
    if a < 0 || (a == 0 && b < 0) {
        (-a, -b)
    } else {
        (a, b)
    }
}

fn cross(o: GridPoint, a: GridPoint, b: GridPoint) -> i128 {
    (a.x - o.x) as i128 * (b.y - o.y) as i128 - (a.y - o.y) as i128 * (b.x - o.x) as i128
}

/// Convex hull vertices (counter-clockwise, no collinear vertices) of points
/// given in strictly increasing lexicographic order.
fn hull(sorted: impl Iterator<Item = GridPoint> + Clone) -> Vec<GridPoint> {
    let mut lower: Vec<GridPoint> = Vec::new();
    for p in sorted.clone() {
        while lower.len() >= 2 && cross(lower[lower.len() - 2], lower[lower.len() - 1], p) <= 0 {
            lower.pop();
        }
        lower.push(p);
    }
    let pts: Vec<GridPoint> = sorted.collect();
    if pts.len() <= 2 {
        return pts;
    }
    let mut upper: Vec<GridPoint> = Vec::new();
    for &p in pts.iter().rev() {
        while upper.len() >= 2 && cross(upper[upper.len() - 2], upper[upper.len() - 1], p) <= 0 {
            upper.pop();
        }
        upper.push(p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower
}

fn candidate_directions(hull: &[GridPoint]) -> Vec<(i64, i64)> {
    let mut dirs = vec![(0, 1), (1, -1), (1, 0), (1, 1)];
    if hull.len() >= 2 {
        for (i, &p) in hull.iter().enumerate() {
            let q = hull[(i + 1) % hull.len()];
            let (dx, dy) = (q.x - p.x, q.y - p.y);
            dirs.push(normalize(dy, dx));
        }
    }
    dirs.sort_unstable();
    dirs.dedup();
    dirs
}

fn witness_for(hull: &[GridPoint], (a, b): (i64, i64), standard: bool) -> Option<Witness> {
    let omega = omega(a, b, standard);
    let mut w = Witness { a, b, omega, lo: i128::MAX, hi: i128::MIN };
    for &p in hull {
        let v = w.value(p);
        w.lo = w.lo.min(v);
        w.hi = w.hi.max(v);
    }
    (w.hi - w.lo < omega as i128).then_some(w)
}

/// Any feasible direction for the point set, `None` if it is not a DSS.
fn any_witness(sorted: impl Iterator<Item = GridPoint> + Clone, standard: bool) -> Option<Witness> {
    let h = hull(sorted);
    candidate_directions(&h).into_iter().find_map(|d| witness_for(&h, d, standard))
}

/// The reported witness: smallest `omega`, then smallest `(a, b)`.
fn canonical_witness(sorted: &[GridPoint], standard: bool) -> Option<Witness> {
    let h = hull(sorted.iter().copied());
    candidate_directions(&h)
        .into_iter()
        .filter_map(|d| witness_for(&h, d, standard))
        .min_by_key(|w| (w.omega, w.a, w.b))
}

/// Stateless DSS test on a subpath.
pub fn dss_holds(path: &DigitalPath, iv: IndexInterval) -> Result<bool, PredicateError> {
    Dss.check_path(path)?;
    Ok(Dss.holds(path, iv))
}

/// Recognizer state: the point multiset of the window and a cached witness.
pub struct DssWindow {
    standard: bool,
    points: BTreeMap<GridPoint, u32>,
    witness: Option<Witness>,
}

pub type DssRecognizer<'a> = WindowRecognizer<'a, DssWindow>;

impl DssWindow {
    fn new(standard: bool) -> Self {
        Self { standard, points: BTreeMap::new(), witness: None }
    }

    fn admit(&mut self, p: GridPoint) -> bool {
        if let Some(count) = self.points.get_mut(&p) {
            *count += 1;
            return true;
        }
        if let Some(w) = self.witness.and_then(|w| w.admits(p)) {
            self.witness = Some(w);
            self.points.insert(p, 1);
            return true;
        }
        self.points.insert(p, 1);
        match any_witness(self.points.keys().copied(), self.standard) {
            Some(w) => {
                self.witness = Some(w);
                true
            }
            None => {
                self.points.remove(&p);
                false
            }
        }
    }

    /// Number of distinct points in the window.
    pub fn distinct_points(&self) -> usize {
        self.points.len()
    }
}

impl WindowState for DssWindow {
    fn reset(&mut self, path: &DigitalPath, index: usize) -> bool {
        self.points.clear();
        self.witness = None;
        self.admit(path.point(index))
    }

    fn admit_positive(&mut self, path: &DigitalPath, _: &Window, index: usize) -> bool {
        self.admit(path.point(index))
    }

    fn admit_negative(&mut self, path: &DigitalPath, _: &Window, index: usize) -> bool {
        self.admit(path.point(index))
    }

    fn remove_first(&mut self, path: &DigitalPath, window: &Window) {
        let p = path.point(window.first());
        if let Some(count) = self.points.get_mut(&p) {
            *count -= 1;
            if *count == 0 {
                self.points.remove(&p);
            }
        }
        if self.points.is_empty() {
            self.witness = None;
        }
    }
}

impl DssRecognizer<'_> {
    /// Characteristics of the current window.
    pub fn dss_state(&self) -> Option<DssState> {
        let iv = self.interval()?;
        DssState::of(self.path, iv)
    }
}

impl Predicate for Dss {
    fn spec(&self) -> PredicateSpec {
        PredicateSpec::dss()
    }

    fn check_path(&self, path: &DigitalPath) -> Result<(), PredicateError> {
        match path.adjacency() {
            Adjacency::IndexOnly => Err(PredicateError::UnsupportedAdjacency {
                predicate: "dss".into(),
                adjacency: Adjacency::IndexOnly,
            }),
            _ => Ok(()),
        }
    }

    fn recognizer<'a>(&'a self, path: &'a DigitalPath) -> Box<dyn Recognizer + 'a> {
        Box::new(Dss::recognizer_for(path))
    }

    fn holds(&self, path: &DigitalPath, iv: IndexInterval) -> bool {
        let mut pts: Vec<GridPoint> = path.interval_points(iv).collect();
        pts.sort_unstable();
        pts.dedup();
        any_witness(pts.into_iter(), path.adjacency() == Adjacency::Four).is_some()
    }
}

impl Dss {
    /// Concrete recognizer, exposing [`DssRecognizer::dss_state`].
    pub fn recognizer_for(path: &DigitalPath) -> DssRecognizer<'_> {
        WindowRecognizer::new(path, DssWindow::new(path.adjacency() == Adjacency::Four))
    }
}
