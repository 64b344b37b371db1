//! Length, monotonicity and bounding-box predicates, plus the deliberately
//! non-conservative `contains_p0` used to exercise the conservativity checker.

use std::collections::BTreeMap;

use super::{Predicate, PredicateSpec, Recognizer, Window, WindowRecognizer, WindowState};
use crate::path::{DigitalPath, GridPoint, IndexInterval};

/// At most `k` points.
#[derive(Clone, Copy, Debug)]
pub struct MaxLen {
    k: usize,
}

impl MaxLen {
    pub fn new(k: usize) -> Self {
        assert!(k >= 1, "max_len needs k >= 1");
        Self { k }
    }
}

struct MaxLenState {
    k: usize,
}

impl WindowState for MaxLenState {
    fn reset(&mut self, _: &DigitalPath, _: usize) -> bool {
        true
    }

    fn admit_positive(&mut self, _: &DigitalPath, window: &Window, _: usize) -> bool {
        window.len() < self.k
    }

    fn admit_negative(&mut self, _: &DigitalPath, window: &Window, _: usize) -> bool {
        window.len() < self.k
    }

    fn remove_first(&mut self, _: &DigitalPath, _: &Window) {}
}

impl Predicate for MaxLen {
    fn spec(&self) -> PredicateSpec {
        PredicateSpec::max_len(self.k as i64)
    }

    fn recognizer<'a>(&'a self, path: &'a DigitalPath) -> Box<dyn Recognizer + 'a> {
        Box::new(WindowRecognizer::new(path, MaxLenState { k: self.k }))
    }

    fn holds(&self, _: &DigitalPath, iv: IndexInterval) -> bool {
        iv.len <= self.k
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MonotoneAxis {
    X,
    Y,
}

impl MonotoneAxis {
    fn coord(self, p: GridPoint) -> i64 {
        match self {
            MonotoneAxis::X => p.x,
            MonotoneAxis::Y => p.y,
        }
    }
}

/// The chosen coordinate is non-decreasing or non-increasing along the
/// subpath. Removal is O(1): the state counts rising and falling steps.
#[derive(Clone, Copy, Debug)]
pub struct Monotone {
    axis: MonotoneAxis,
}

impl Monotone {
    pub fn new(axis: MonotoneAxis) -> Self {
        Self { axis }
    }
}

struct MonotoneState {
    axis: MonotoneAxis,
    rising: usize,
    falling: usize,
}

impl MonotoneState {
    fn admit_step(&mut self, step: i64) -> bool {
        match step.signum() {
            1 if self.falling == 0 => self.rising += 1,
            -1 if self.rising == 0 => self.falling += 1,
            0 => {}
            _ => return false,
        }
        true
    }
}

impl WindowState for MonotoneState {
    fn reset(&mut self, _: &DigitalPath, _: usize) -> bool {
        self.rising = 0;
        self.falling = 0;
        true
    }

    fn admit_positive(&mut self, path: &DigitalPath, window: &Window, index: usize) -> bool {
        let c = |i| self.axis.coord(path.point(i));
        let step = c(index) - c(window.last());
        self.admit_step(step)
    }

    fn admit_negative(&mut self, path: &DigitalPath, window: &Window, index: usize) -> bool {
        let c = |i| self.axis.coord(path.point(i));
        let step = c(window.first()) - c(index);
        self.admit_step(step)
    }

    fn remove_first(&mut self, path: &DigitalPath, window: &Window) {
        let Some(second) = window.second() else { return };
        let c = |i| self.axis.coord(path.point(i));
        match (c(second) - c(window.first())).signum() {
            1 => self.rising -= 1,
            -1 => self.falling -= 1,
            _ => {}
        }
    }
}

impl Predicate for Monotone {
    fn spec(&self) -> PredicateSpec {
        match self.axis {
            MonotoneAxis::X => PredicateSpec::x_monotone(),
            MonotoneAxis::Y => PredicateSpec::y_monotone(),
        }
    }

    fn recognizer<'a>(&'a self, path: &'a DigitalPath) -> Box<dyn Recognizer + 'a> {
        let state = MonotoneState { axis: self.axis, rising: 0, falling: 0 };
        Box::new(WindowRecognizer::new(path, state))
    }

    fn holds(&self, path: &DigitalPath, iv: IndexInterval) -> bool {
        let coords: Vec<i64> = path.interval_points(iv).map(|p| self.axis.coord(p)).collect();
        coords.windows(2).all(|w| w[0] <= w[1]) || coords.windows(2).all(|w| w[0] >= w[1])
    }
}

/// Fits in a `w` x `h` box: `max x - min x + 1 <= w`, same for y.
#[derive(Clone, Copy, Debug)]
pub struct BoundingBox {
    w: i64,
    h: i64,
}

impl BoundingBox {
    pub fn new(w: i64, h: i64) -> Self {
        assert!(w >= 1 && h >= 1, "bbox needs positive dimensions");
        Self { w, h }
    }
}

/// Coordinate multisets; removal is O(log len).
struct BoxState {
    w: i64,
    h: i64,
    xs: BTreeMap<i64, usize>,
    ys: BTreeMap<i64, usize>,
}

fn extent_with(values: &BTreeMap<i64, usize>, v: i64) -> i64 {
    let lo = values.keys().next().map_or(v, |&m| m.min(v));
    let hi = values.keys().next_back().map_or(v, |&m| m.max(v));
    hi - lo + 1
}

fn bump(values: &mut BTreeMap<i64, usize>, v: i64) {
    *values.entry(v).or_default() += 1;
}

fn drop_one(values: &mut BTreeMap<i64, usize>, v: i64) {
    if let Some(count) = values.get_mut(&v) {
        *count -= 1;
        if *count == 0 {
            values.remove(&v);
        }
    }
}

impl BoxState {
    fn admit(&mut self, p: GridPoint) -> bool {
        if extent_with(&self.xs, p.x) > self.w || extent_with(&self.ys, p.y) > self.h {
            return false;
        }
        bump(&mut self.xs, p.x);
        bump(&mut self.ys, p.y);
        true
    }
}

impl WindowState for BoxState {
    fn reset(&mut self, path: &DigitalPath, index: usize) -> bool {
        self.xs.clear();
        self.ys.clear();
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
        drop_one(&mut self.xs, p.x);
        drop_one(&mut self.ys, p.y);
    }
}

impl Predicate for BoundingBox {
    fn spec(&self) -> PredicateSpec {
        PredicateSpec::bbox(self.w, self.h)
    }

    fn recognizer<'a>(&'a self, path: &'a DigitalPath) -> Box<dyn Recognizer + 'a> {
        let state = BoxState { w: self.w, h: self.h, xs: BTreeMap::new(), ys: BTreeMap::new() };
        Box::new(WindowRecognizer::new(path, state))
    }

    fn holds(&self, path: &DigitalPath, iv: IndexInterval) -> bool {
        let (mut x0, mut x1, mut y0, mut y1) = (i64::MAX, i64::MIN, i64::MAX, i64::MIN);
        for p in path.interval_points(iv) {
            x0 = x0.min(p.x);
            x1 = x1.max(p.x);
            y0 = y0.min(p.y);
            y1 = y1.max(p.y);
        }
        x1 - x0 < self.w && y1 - y0 < self.h
    }
}

/// "Contains `p_0`": true exactly on the subpaths that include index 0.
///
/// Not conservative. Its recognizer cannot keep the "always true" invariant
/// through `remove_negative_end` and simply follows the window.
#[derive(Clone, Copy, Debug)]
pub struct ContainsFirst;

struct ContainsFirstState;

impl WindowState for ContainsFirstState {
    fn reset(&mut self, _: &DigitalPath, index: usize) -> bool {
        index == 0
    }

    fn admit_positive(&mut self, _: &DigitalPath, window: &Window, index: usize) -> bool {
        index == 0 || window_has_zero(window)
    }

    fn admit_negative(&mut self, _: &DigitalPath, window: &Window, index: usize) -> bool {
        index == 0 || window_has_zero(window)
    }

    fn remove_first(&mut self, _: &DigitalPath, _: &Window) {}
}

fn window_has_zero(window: &Window) -> bool {
    window.first() == 0 || window.first() > window.last()
}

impl Predicate for ContainsFirst {
    fn spec(&self) -> PredicateSpec {
        PredicateSpec::contains_first()
    }

    fn is_conservative(&self) -> bool {
        false
    }

    fn recognizer<'a>(&'a self, path: &'a DigitalPath) -> Box<dyn Recognizer + 'a> {
        Box::new(WindowRecognizer::new(path, ContainsFirstState))
    }

    fn holds(&self, path: &DigitalPath, iv: IndexInterval) -> bool {
        path.interval_indices(iv).any(|i| i == 0)
    }
}
