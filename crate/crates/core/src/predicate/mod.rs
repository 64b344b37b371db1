//! Conservative predicates on subpaths and their incremental recognizers.
//!
//! A predicate is a boolean function on the subpaths of a path. It is
//! *conservative* when truth on a subpath implies truth on every subpath of
//! it. The cover algorithms only ever talk to a predicate through a
//! [`Recognizer`], a small state machine holding one subpath on which the
//! predicate is known to hold.

use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::path::{Adjacency, DigitalPath, IndexInterval};

mod dss;
mod simple;

pub use dss::{dss_holds, Dss, DssRecognizer, DssState};
pub use simple::{BoundingBox, ContainsFirst, MaxLen, Monotone, MonotoneAxis};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PredicateError {
    #[error("unknown predicate `{0}` (see --list-predicates)")]
    Unknown(String),
    #[error("predicate `{predicate}` requires parameter `{param}`")]
    MissingParameter { predicate: String, param: &'static str },
    #[error("predicate `{predicate}`: parameter `{param}` = {value} is invalid ({reason})")]
    InvalidParameter { predicate: String, param: String, value: i64, reason: &'static str },
    #[error("predicate `{predicate}` does not support {adjacency} adjacency")]
    UnsupportedAdjacency { predicate: String, adjacency: Adjacency },
    #[error("predicate `{0}` is not conservative; cover algorithms require a conservative predicate")]
    NotConservative(String),
}

/// Incremental truth maintenance for one predicate on one path.
///
/// The recognizer represents a subpath (or nothing) on which its predicate
/// holds. "Positive" is the direction of increasing indices. Failed
/// extensions leave the state unchanged, as do extensions that are impossible
/// because of an open-path boundary or a full turn of a closed path.
pub trait Recognizer {
    /// Currently represented subpath, `None` when empty.
    fn interval(&self) -> Option<IndexInterval>;

    /// Restarts from the singleton at `index`. Returns whether the predicate
    /// holds on it; on `false` the recognizer is empty.
    fn reset(&mut self, index: usize) -> bool;

    /// Appends the next index at the positive end.
    fn try_extend_positive(&mut self) -> bool;

    /// Prepends the previous index at the negative end.
    fn try_extend_negative(&mut self) -> bool;

    /// Drops the first point of the subpath. No-op when empty.
    fn remove_negative_end(&mut self);
}

/// A predicate on the subpaths of a path.
pub trait Predicate: Send + Sync {
    fn spec(&self) -> PredicateSpec;

    /// Whether the conservativity contract holds. Cover algorithms refuse
    /// predicates that answer `false`.
    fn is_conservative(&self) -> bool {
        true
    }

    /// Rejects paths the predicate is not defined on.
    fn check_path(&self, _path: &DigitalPath) -> Result<(), PredicateError> {
        Ok(())
    }

    fn recognizer<'a>(&'a self, path: &'a DigitalPath) -> Box<dyn Recognizer + 'a>;

    /// Stateless evaluation on one subpath. The default replays a recognizer
    /// along the subpath, failing as soon as an extension fails.
    fn holds(&self, path: &DigitalPath, iv: IndexInterval) -> bool {
        let mut rec = self.recognizer(path);
        rec.reset(iv.start) && (1..iv.len).all(|_| rec.try_extend_positive())
    }
}

/// Bookkeeping for the index range held by a recognizer.
#[derive(Clone, Copy, Debug)]
pub struct Window {
    n_points: usize,
    closed: bool,
    start: usize,
    len: usize,
}

impl Window {
    pub fn new(path: &DigitalPath) -> Self {
        Self { n_points: path.len(), closed: path.is_closed(), start: 0, len: 0 }
    }

    pub fn interval(&self) -> Option<IndexInterval> {
        (self.len > 0).then(|| IndexInterval::new(self.start, self.len))
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn first(&self) -> usize {
        self.start
    }

    pub fn last(&self) -> usize {
        (self.start + self.len - 1) % self.n_points
    }

    /// Index that a positive extension would add.
    pub fn next(&self) -> Option<usize> {
        if self.len == 0 || self.len >= self.n_points {
            return None;
        }
        let raw = self.start + self.len;
        if self.closed {
            Some(raw % self.n_points)
        } else {
            (raw < self.n_points).then_some(raw)
        }
    }

    /// Index that a negative extension would add.
    pub fn prev(&self) -> Option<usize> {
        if self.len == 0 || self.len >= self.n_points {
            return None;
        }
        if self.start > 0 {
            Some(self.start - 1)
        } else {
            self.closed.then(|| self.n_points - 1)
        }
    }

    /// Index following the first one (the new first after a removal).
    pub fn second(&self) -> Option<usize> {
        (self.len >= 2).then(|| (self.start + 1) % self.n_points)
    }

    pub fn reset(&mut self, index: usize) {
        self.start = index;
        self.len = 1;
    }

    pub fn clear(&mut self) {
        self.len = 0;
    }

    pub fn grow_positive(&mut self) {
        self.len += 1;
    }

    pub fn grow_negative(&mut self) {
        self.start = self.prev().expect("negative growth past the boundary");
        self.len += 1;
    }

    pub fn shrink_negative(&mut self) {
        if self.len == 0 {
            return;
        }
        self.start = (self.start + 1) % self.n_points;
        self.len -= 1;
    }
}

/// Predicate-specific state driven by [`WindowRecognizer`].
///
/// `admit_*` is called with the candidate index and the current end it
/// attaches to; it must commit its state change only when returning `true`.
pub trait WindowState {
    fn reset(&mut self, path: &DigitalPath, index: usize) -> bool;
    fn admit_positive(&mut self, path: &DigitalPath, window: &Window, index: usize) -> bool;
    fn admit_negative(&mut self, path: &DigitalPath, window: &Window, index: usize) -> bool;
    /// Called before the window drops its first index.
    fn remove_first(&mut self, path: &DigitalPath, window: &Window);
}

/// Adapts a [`WindowState`] to the [`Recognizer`] contract.
pub struct WindowRecognizer<'a, S> {
    path: &'a DigitalPath,
    window: Window,
    state: S,
}

impl<'a, S: WindowState> WindowRecognizer<'a, S> {
    pub fn new(path: &'a DigitalPath, state: S) -> Self {
        Self { path, window: Window::new(path), state }
    }

    pub fn state(&self) -> &S {
        &self.state
    }
}

impl<S: WindowState> Recognizer for WindowRecognizer<'_, S> {
    fn interval(&self) -> Option<IndexInterval> {
        self.window.interval()
    }

    fn reset(&mut self, index: usize) -> bool {
        if self.state.reset(self.path, index) {
            self.window.reset(index);
            true
        } else {
            self.window.clear();
            false
        }
    }

    fn try_extend_positive(&mut self) -> bool {
        let Some(index) = self.window.next() else { return false };
        if self.state.admit_positive(self.path, &self.window, index) {
            self.window.grow_positive();
            true
        } else {
            false
        }
    }

    fn try_extend_negative(&mut self) -> bool {
        let Some(index) = self.window.prev() else { return false };
        if self.state.admit_negative(self.path, &self.window, index) {
            self.window.grow_negative();
            true
        } else {
            false
        }
    }

    fn remove_negative_end(&mut self) {
        if self.window.is_empty() {
            return;
        }
        self.state.remove_first(self.path, &self.window);
        self.window.shrink_negative();
    }
}

/// Name and integer parameters selecting a registered predicate.
///
/// JSON form: `{"name": "bbox", "params": {"w": 3, "h": 3}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredicateSpec {
    pub name: String,
    #[serde(default)]
    pub params: BTreeMap<String, i64>,
}

impl PredicateSpec {
    pub fn new(name: impl Into<String>) -> Self {
        Self { name: name.into(), params: BTreeMap::new() }
    }

    pub fn with(mut self, key: &str, value: i64) -> Self {
        self.params.insert(key.to_owned(), value);
        self
    }

    pub fn dss() -> Self {
        Self::new("dss")
    }

    pub fn max_len(k: i64) -> Self {
        Self::new("max_len").with("k", k)
    }

    pub fn bbox(w: i64, h: i64) -> Self {
        Self::new("bbox").with("w", w).with("h", h)
    }

    pub fn x_monotone() -> Self {
        Self::new("x_monotone")
    }

    pub fn y_monotone() -> Self {
        Self::new("y_monotone")
    }

    pub fn contains_first() -> Self {
        Self::new("contains_p0")
    }

    fn param(&self, key: &'static str) -> Result<i64, PredicateError> {
        self.params
            .get(key)
            .copied()
            .ok_or_else(|| PredicateError::MissingParameter { predicate: self.name.clone(), param: key })
    }

    fn positive(&self, key: &'static str) -> Result<i64, PredicateError> {
        let value = self.param(key)?;
        if value < 1 {
            return Err(PredicateError::InvalidParameter {
                predicate: self.name.clone(),
                param: key.to_owned(),
                value,
                reason: "must be at least 1",
            });
        }
        Ok(value)
    }

    /// Instantiates the registered predicate.
    pub fn build(&self) -> Result<Box<dyn Predicate>, PredicateError> {
        let known = REGISTRY.iter().find(|e| e.name == self.name);
        let Some(entry) = known else { return Err(PredicateError::Unknown(self.name.clone())) };
        for key in self.params.keys() {
            if !entry.params.contains(&key.as_str()) {
                return Err(PredicateError::InvalidParameter {
                    predicate: self.name.clone(),
                    param: key.clone(),
                    value: self.params[key],
                    reason: "unknown parameter",
                });
            }
        }
        Ok(match entry.name {
            "dss" => Box::new(Dss),
            "max_len" => Box::new(MaxLen::new(self.positive("k")? as usize)),
            "x_monotone" => Box::new(Monotone::new(MonotoneAxis::X)),
            "y_monotone" => Box::new(Monotone::new(MonotoneAxis::Y)),
            "bbox" => Box::new(BoundingBox::new(self.positive("w")?, self.positive("h")?)),
            "contains_p0" => Box::new(ContainsFirst),
            _ => unreachable!("registry entry without constructor"),
        })
    }
}

impl fmt::Display for PredicateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)?;
        for (i, (k, v)) in self.params.iter().enumerate() {
            write!(f, "{}{k}={v}", if i == 0 { " " } else { "," })?;
        }
        Ok(())
    }
}

/// One row of the predicate registry.
#[derive(Clone, Copy, Debug)]
pub struct RegistryEntry {
    pub name: &'static str,
    pub params: &'static [&'static str],
    pub conservative: bool,
    pub summary: &'static str,
}

pub const REGISTRY: &[RegistryEntry] = &[
    RegistryEntry {
        name: "dss",
        params: &[],
        conservative: true,
        summary: "digital straight segment (naive for 8-paths, standard for 4-paths)",
    },
    RegistryEntry {
        name: "max_len",
        params: &["k"],
        conservative: true,
        summary: "at most k points",
    },
    RegistryEntry {
        name: "x_monotone",
        params: &[],
        conservative: true,
        summary: "x coordinate non-decreasing or non-increasing along the subpath",
    },
    RegistryEntry {
        name: "y_monotone",
        params: &[],
        conservative: true,
        summary: "y coordinate non-decreasing or non-increasing along the subpath",
    },
    RegistryEntry {
        name: "bbox",
        params: &["w", "h"],
        conservative: true,
        summary: "fits in a w x h box (x extent <= w, y extent <= h, in pixels)",
    },
    RegistryEntry {
        name: "contains_p0",
        params: &[],
        conservative: false,
        summary: "contains index 0; diagnostic",
    },
];

/// Builds a recognizer for `spec` on `path`, checking compatibility.
pub fn make_recognizer<'a>(
    predicate: &'a dyn Predicate,
    path: &'a DigitalPath,
) -> Result<Box<dyn Recognizer + 'a>, PredicateError> {
    predicate.check_path(path)?;
    Ok(predicate.recognizer(path))
}

/// A pair refuting conservativity: the predicate holds on `outer` but not on
/// `inner`, a subpath of `outer`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub path: DigitalPath,
    pub outer: IndexInterval,
    pub inner: IndexInterval,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConservativityReport {
    Pass { trials: usize },
    Fail { trial: usize, counterexample: Box<Counterexample> },
}

impl ConservativityReport {
    pub fn passed(&self) -> bool {
        matches!(self, ConservativityReport::Pass { .. })
    }
}

/// Randomized conservativity check.
///
/// Each trial draws a path from `paths`, a random start and a random length,
/// halving the length until the predicate holds (dropping the trial if even
/// the singleton fails), then evaluates a random subpath of the result.
pub fn check_conservative(
    predicate: &dyn Predicate,
    paths: &[DigitalPath],
    trials: usize,
    seed: u64,
) -> ConservativityReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let usable: Vec<&DigitalPath> =
        paths.iter().filter(|p| predicate.check_path(p).is_ok()).collect();
    if usable.is_empty() {
        return ConservativityReport::Pass { trials: 0 };
    }
    let mut done = 0;
    for trial in 0..trials {
        let path = usable[rng.random_range(0..usable.len())];
        let n = path.len();
        let start = rng.random_range(0..n);
        let max_len = if path.is_closed() { n } else { n - start };
        let mut len = rng.random_range(1..=max_len);
        let outer = loop {
            let iv = IndexInterval::new(start, len);
            if predicate.holds(path, iv) {
                break Some(iv);
            }
            if len == 1 {
                break None;
            }
            len /= 2;
        };
        let Some(outer) = outer else { continue };
        done += 1;
        let offset = rng.random_range(0..outer.len);
        let inner_len = rng.random_range(1..=outer.len - offset);
        let inner = IndexInterval::new((outer.start + offset) % n, inner_len);
        if !predicate.holds(path, inner) {
            return ConservativityReport::Fail {
                trial,
                counterexample: Box::new(Counterexample { path: path.clone(), outer, inner }),
            };
        }
    }
    ConservativityReport::Pass { trials: done }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;
    use crate::path::GridPoint;

    fn line(n: i64) -> DigitalPath {
        DigitalPath::open((0..n).map(|x| GridPoint::new(x, 0)).collect(), Adjacency::Eight).unwrap()
    }

    #[test]
    fn registry_builds_every_entry() {
        for entry in REGISTRY {
            let mut spec = PredicateSpec::new(entry.name);
            for p in entry.params {
                spec = spec.with(p, 3);
            }
            let pred = spec.build().unwrap();
            assert_eq!(pred.is_conservative(), entry.conservative);
            assert_eq!(pred.spec(), spec);
        }
    }

    #[test]
    fn spec_errors() {
        assert!(matches!(PredicateSpec::new("circle").build(), Err(PredicateError::Unknown(_))));
        assert!(matches!(
            PredicateSpec::new("max_len").build(),
            Err(PredicateError::MissingParameter { param: "k", .. })
        ));
        assert!(matches!(
            PredicateSpec::bbox(0, 2).build(),
            Err(PredicateError::InvalidParameter { .. })
        ));
        assert!(matches!(
            PredicateSpec::dss().with("k", 2).build(),
            Err(PredicateError::InvalidParameter { .. })
        ));
    }

    #[test]
    fn spec_json_shape() {
        let spec = PredicateSpec::bbox(3, 2);
        assert_eq!(serde_json::to_string(&spec).unwrap(), r#"{"name":"bbox","params":{"h":2,"w":3}}"#);
        let parsed: PredicateSpec = serde_json::from_str(r#"{"name": "dss"}"#).unwrap();
        assert_eq!(parsed, PredicateSpec::dss());
    }

    #[test]
    fn max_len_recognizer_caps_length() {
        let path = line(6);
        let pred = PredicateSpec::max_len(3).build().unwrap();
        let mut rec = make_recognizer(pred.as_ref(), &path).unwrap();
        assert!(rec.reset(2));
        assert!(rec.try_extend_positive());
        assert!(rec.try_extend_negative());
        assert!(!rec.try_extend_positive());
        assert_eq!(rec.interval(), Some(IndexInterval::new(1, 3)));
        rec.remove_negative_end();
        assert!(rec.try_extend_positive());
        assert_eq!(rec.interval(), Some(IndexInterval::new(2, 3)));
    }

    #[test]
    fn bbox_example() {
        let path = line(3);
        let pred = PredicateSpec::bbox(2, 2).build().unwrap();
        let mut rec = make_recognizer(pred.as_ref(), &path).unwrap();
        assert!(rec.reset(1));
        assert!(rec.try_extend_positive());
        assert!(!rec.try_extend_negative());
        assert_eq!(rec.interval(), Some(IndexInterval::new(1, 2)));
    }

    #[test]
    fn open_boundaries_refuse_extension() {
        let path = line(3);
        let pred = PredicateSpec::max_len(10).build().unwrap();
        let mut rec = pred.recognizer(&path);
        assert!(rec.reset(0));
        assert!(!rec.try_extend_negative());
        assert!(rec.try_extend_positive());
        assert!(rec.try_extend_positive());
        assert!(!rec.try_extend_positive());
        assert_eq!(rec.interval(), Some(IndexInterval::new(0, 3)));
    }

    #[test]
    fn closed_window_stops_at_full_turn() {
        let square = [(0, 0), (1, 0), (1, 1), (0, 1)].map(GridPoint::from).to_vec();
        let path = DigitalPath::closed(square, Adjacency::Four).unwrap();
        let pred = PredicateSpec::max_len(10).build().unwrap();
        let mut rec = pred.recognizer(&path);
        assert!(rec.reset(0));
        assert!(rec.try_extend_negative());
        assert_eq!(rec.interval(), Some(IndexInterval::new(3, 2)));
        assert!(rec.try_extend_positive());
        assert!(rec.try_extend_negative());
        assert!(!rec.try_extend_positive());
        assert!(!rec.try_extend_negative());
        assert_eq!(rec.interval(), Some(IndexInterval::new(2, 4)));
        rec.remove_negative_end();
        assert!(rec.try_extend_positive());
        assert_eq!(rec.interval(), Some(IndexInterval::new(3, 4)));
    }

    #[test]
    fn conservativity_checker() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let paths: Vec<_> = (0..50)
            .map(|i| gen::random_walk(&mut rng, 2 + i % 39, Adjacency::Eight, i % 2 == 0))
            .collect();
        for spec in [PredicateSpec::max_len(3), PredicateSpec::dss(), PredicateSpec::bbox(3, 3)] {
            let pred = spec.build().unwrap();
            let report = check_conservative(pred.as_ref(), &paths, 2_000, 11);
            assert!(report.passed(), "{spec}: {report:?}");
        }
        let broken = PredicateSpec::contains_first().build().unwrap();
        let report = check_conservative(broken.as_ref(), &paths, 1_000, 11);
        match report {
            ConservativityReport::Fail { counterexample, .. } => {
                let c = &*counterexample;
                assert!(broken.holds(&c.path, c.outer));
                assert!(!broken.holds(&c.path, c.inner));
                assert!(c.outer.contains(&c.inner, c.path.len(), c.path.is_closed()));
            }
            other => panic!("expected a counterexample, got {other:?}"),
        }
    }
}
