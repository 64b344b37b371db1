//! Saturated subpath decomposition: the generalized tangential cover.
//!
//! A subpath is *saturated* for a predicate when the predicate holds on it
//! and on no strictly larger subpath containing it. For a conservative
//! predicate [`ssd_cover`] finds all of them with a number of predicate
//! evaluations linear in the path length:
//!
//! * **Init**: skip points whose singleton fails.
//! * **Increase / Check**: grow around the current point, alternating sides
//!   and starting on the positive one, until an extension fails.
//! * **Maximality**: keep growing on the single side that can still grow
//!   (positive when in doubt). The result is saturated.
//! * **Restart**: look at the point after the segment. If its singleton
//!   fails, go back to Init past it. Otherwise drop points on the negative
//!   side until that point can be appended, then grow positively to the next
//!   saturated segment.
//!
//! On a closed path the sweep stops when it comes back to the first segment.
//! [`forward_cover`] only ever grows positively and fixes up the first segment
//! afterwards; [`brute_force_cover`] applies the definition literally and is
//! the reference both are checked against.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gen;
use crate::path::{middle_index, DigitalPath, IndexInterval};
use crate::predicate::{Predicate, PredicateError, PredicateSpec, Recognizer};

/// Default path-length cap of [`brute_force_cover`].
pub const BRUTE_FORCE_CAP: usize = 500;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoverError {
    #[error(transparent)]
    Predicate(#[from] PredicateError),
    #[error("brute-force cover is capped at {cap} points, path has {n_points}")]
    CapExceeded { n_points: usize, cap: usize },
}

/// All saturated subpaths of a path, sorted by start index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SaturatedCover {
    pub n_points: usize,
    pub closed: bool,
    pub segments: Vec<IndexInterval>,
    /// Predicate evaluations performed, failed ones included.
    pub predicate_calls: u64,
}

impl SaturatedCover {
    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn middles(&self) -> Vec<usize> {
        self.segments.iter().map(|&s| middle_index(s, self.n_points)).collect()
    }

    pub fn to_document(&self, predicate: PredicateSpec) -> CoverDocument {
        CoverDocument {
            n: self.n_points,
            closed: self.closed,
            predicate,
            segments: self.segments.clone(),
            predicate_calls: self.predicate_calls,
        }
    }

    fn finish(n_points: usize, closed: bool, mut segments: Vec<IndexInterval>, calls: u64) -> Self {
        segments.sort_unstable();
        segments.dedup();
        Self { n_points, closed, segments, predicate_calls: calls }
    }
}

/// Cover JSON: `{"n": .., "closed": .., "predicate": {..}, "segments": [{"start": .., "len": ..}], "predicate_calls": ..}`.
///
/// `n` is the number of points of the path.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverDocument {
    pub n: usize,
    pub closed: bool,
    pub predicate: PredicateSpec,
    pub segments: Vec<IndexInterval>,
    pub predicate_calls: u64,
}

impl CoverDocument {
    pub fn cover(&self) -> SaturatedCover {
        SaturatedCover {
            n_points: self.n,
            closed: self.closed,
            segments: self.segments.clone(),
            predicate_calls: self.predicate_calls,
        }
    }
}

/// Recognizer driver working on unwrapped ("virtual") indices, so that a
/// closed path can be swept past its origin. Every predicate evaluation goes
/// through here and is counted.
struct Sweep<'a> {
    path: &'a DigitalPath,
    predicate: &'a dyn Predicate,
    rec: Box<dyn Recognizer + 'a>,
    n: i64,
    closed: bool,
    start: i64,
    len: i64,
    calls: u64,
}

impl<'a> Sweep<'a> {
    fn new(path: &'a DigitalPath, predicate: &'a dyn Predicate) -> Result<Self, PredicateError> {
        if !predicate.is_conservative() {
            return Err(PredicateError::NotConservative(predicate.spec().name));
        }
        predicate.check_path(path)?;
        Ok(Self {
            path,
            predicate,
            rec: predicate.recognizer(path),
            n: path.len() as i64,
            closed: path.is_closed(),
            start: 0,
            len: 0,
            calls: 0,
        })
    }

    fn index(&self, v: i64) -> usize {
        v.rem_euclid(self.n) as usize
    }

    fn current(&self) -> IndexInterval {
        IndexInterval::new(self.index(self.start), self.len as usize)
    }

    fn end(&self) -> i64 {
        self.start + self.len - 1
    }

    fn can_grow_positive(&self) -> bool {
        self.len < self.n && (self.closed || self.start + self.len < self.n)
    }

    fn can_grow_negative(&self) -> bool {
        self.len < self.n && (self.closed || self.start > 0)
    }

    fn reset(&mut self, v: i64) -> bool {
        self.calls += 1;
        let ok = self.rec.reset(self.index(v));
        self.start = v;
        self.len = ok as i64;
        ok
    }

    fn try_positive(&mut self) -> bool {
        if !self.can_grow_positive() {
            return false;
        }
        self.calls += 1;
        let ok = self.rec.try_extend_positive();
        self.len += ok as i64;
        ok
    }

    fn try_negative(&mut self) -> bool {
        if !self.can_grow_negative() {
            return false;
        }
        self.calls += 1;
        let ok = self.rec.try_extend_negative();
        if ok {
            self.start -= 1;
            self.len += 1;
        }
        ok
    }

    fn remove_negative(&mut self) {
        self.rec.remove_negative_end();
        self.start += 1;
        self.len -= 1;
    }

    fn singleton_holds(&mut self, v: i64) -> bool {
        self.calls += 1;
        self.predicate.holds(self.path, IndexInterval::singleton(self.index(v)))
    }

    fn grow_positive(&mut self) {
        while self.try_positive() {}
    }

    fn grow_negative(&mut self) {
        while self.try_negative() {}
    }

    /// Init: first `v` in `from..limit` whose singleton holds.
    fn init(&mut self, from: i64, limit: i64) -> bool {
        (from..limit).any(|v| self.reset(v))
    }

    /// Increase, Check and Maximality from the current singleton.
    fn grow_from_middle(&mut self) {
        let positive_blocked = loop {
            if !self.try_positive() {
                break true;
            }
            if !self.try_negative() {
                break false;
            }
        };
        if positive_blocked {
            self.grow_negative();
        } else {
            self.grow_positive();
        }
    }

    /// Restart from a segment whose positive side is blocked. Leaves the
    /// next saturated segment in place, or returns `false` when the sweep
    /// has run out of points before `limit`.
    fn restart(&mut self, limit: i64) -> bool {
        let next = self.start + self.len;
        if !self.closed && next >= self.n {
            return false;
        }
        if !self.singleton_holds(next) {
            if !self.init(next + 1, limit) {
                return false;
            }
            self.grow_positive();
            return true;
        }
        loop {
            self.remove_negative();
            if self.len == 0 {
                if !self.reset(next) && !self.init(next + 1, limit) {
                    return false;
                }
                break;
            }
            if self.try_positive() {
                break;
            }
        }
        self.grow_positive();
        true
    }
}

/// Saturated subpaths of a conservative predicate, by the symmetric-growth
/// sweep.
pub fn ssd_cover(path: &DigitalPath, predicate: &dyn Predicate) -> Result<SaturatedCover, CoverError> {
    let mut sweep = Sweep::new(path, predicate)?;
    let (n, closed) = (sweep.n, sweep.closed);
    let mut segments = Vec::new();
    if sweep.init(0, n) {
        sweep.grow_from_middle();
        let first_start = sweep.start;
        segments.push(sweep.current());
        let limit = if closed { first_start + n } else { n };
        while sweep.restart(limit) {
            if closed && sweep.start >= first_start + n {
                break;
            }
            segments.push(sweep.current());
        }
    }
    Ok(SaturatedCover::finish(path.len(), closed, segments, sweep.calls))
}

/// Same output as [`ssd_cover`] using positive growth only.
///
/// The first segment grown from the first admissible point need not be
/// saturated on a closed path. The sweep goes on until it has passed the
/// end of that segment a full turn later, then drops it if another segment
/// found on the way contains it.
pub fn forward_cover(path: &DigitalPath, predicate: &dyn Predicate) -> Result<SaturatedCover, CoverError> {
    let mut sweep = Sweep::new(path, predicate)?;
    let (n, closed) = (sweep.n, sweep.closed);
    let mut segments = Vec::new();
    if sweep.init(0, n) {
        sweep.grow_positive();
        let first = sweep.current();
        let first_start = sweep.start;
        let first_end = sweep.end();
        segments.push(first);
        let limit = if closed { first_start + n } else { n };
        while sweep.restart(limit) {
            segments.push(sweep.current());
            if closed && sweep.end() >= first_end + n {
                break;
            }
        }
        if closed {
            let n = path.len();
            let dominated = segments.iter().any(|s| *s != first && s.contains(&first, n, true));
            if dominated {
                segments.retain(|s| *s != first);
            }
        }
    }
    Ok(SaturatedCover::finish(path.len(), closed, segments, sweep.calls))
}

/// Reference cover: evaluates the predicate on every subpath and keeps the
/// true ones that no other true subpath contains. Rejects paths longer than
/// [`BRUTE_FORCE_CAP`].
pub fn brute_force_cover(path: &DigitalPath, predicate: &dyn Predicate) -> Result<SaturatedCover, CoverError> {
    brute_force_cover_capped(path, predicate, BRUTE_FORCE_CAP)
}

pub fn brute_force_cover_capped(
    path: &DigitalPath,
    predicate: &dyn Predicate,
    cap: usize,
) -> Result<SaturatedCover, CoverError> {
    predicate.check_path(path)?;
    let n = path.len();
    if n > cap {
        return Err(CoverError::CapExceeded { n_points: n, cap });
    }
    let closed = path.is_closed();
    let max_len = |s: usize| if closed { n } else { n - s };
    let stride = n + 2;
    let at = |s: usize, l: usize| s * stride + l;

    // holds[s][l]: the predicate on (start s, length l)
    let mut calls = 0u64;
    let mut holds = vec![false; n * stride];
    for s in 0..n {
        for l in 1..=max_len(s) {
            calls += 1;
            holds[at(s, l)] = predicate.holds(path, IndexInterval::new(s, l));
        }
    }
    // longer[s][l]: some true subpath starts at s with length >= l
    let mut longer = vec![false; n * stride];
    for s in 0..n {
        for l in (1..=max_len(s)).rev() {
            longer[at(s, l)] = holds[at(s, l)] || longer[at(s, l + 1)];
        }
    }
    // earlier[s][l]: some true subpath starting strictly before s (within
    // one turn) covers (s, l)
    let mut earlier = vec![false; n * stride];
    for l in (1..=n).rev() {
        for s in 0..n {
            let prev = match (s, closed) {
                (0, false) => continue,
                (0, true) => n - 1,
                _ => s - 1,
            };
            if l < n {
                earlier[at(s, l)] = longer[at(prev, l + 1)] || earlier[at(prev, l + 1)];
            }
        }
    }
    let segments = (0..n)
        .flat_map(|s| (1..=max_len(s)).map(move |l| (s, l)))
        .filter(|&(s, l)| holds[at(s, l)] && !longer[at(s, l + 1)] && !earlier[at(s, l)])
        .map(|(s, l)| IndexInterval::new(s, l))
        .collect();
    Ok(SaturatedCover::finish(n, closed, segments, calls))
}

/// Checks the structural invariants of a cover against stateless evaluation:
/// sorted, inclusion-free, at most one segment per point, distinct middles,
/// every segment true and not extendable by one point on either side.
pub fn check_cover(path: &DigitalPath, predicate: &dyn Predicate, cover: &SaturatedCover) -> Result<(), String> {
    let n = path.len();
    let closed = path.is_closed();
    let segs = &cover.segments;
    if segs.windows(2).any(|w| w[0] >= w[1]) {
        return Err("segments not strictly sorted".into());
    }
    if segs.len() > n {
        return Err(format!("{} segments on {} points", segs.len(), n));
    }
    let mut middles = cover.middles();
    middles.sort_unstable();
    if middles.windows(2).any(|w| w[0] == w[1]) {
        return Err("two segments share a middle point".into());
    }
    for (i, a) in segs.iter().enumerate() {
        if !path.contains_interval(*a) {
            return Err(format!("segment {a} is not a subpath"));
        }
        if !predicate.holds(path, *a) {
            return Err(format!("predicate fails on segment {a}"));
        }
        let grows_positive = a.len < n && (closed || a.start + a.len < n);
        if grows_positive && predicate.holds(path, IndexInterval::new(a.start, a.len + 1)) {
            return Err(format!("segment {a} extends positively"));
        }
        let grows_negative = a.len < n && (closed || a.start > 0);
        if grows_negative {
            let s = (a.start + n - 1) % n;
            if predicate.holds(path, IndexInterval::new(s, a.len + 1)) {
                return Err(format!("segment {a} extends negatively"));
            }
        }
        for (j, b) in segs.iter().enumerate() {
            if i != j && a.contains(b, n, closed) {
                return Err(format!("segment {a} contains {b}"));
            }
        }
    }
    Ok(())
}

/// Synthetic path families for [`complexity_probe`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProbeShape {
    Circle,
    Line,
    RandomWalk { seed: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ProbeRow {
    pub requested: usize,
    pub n_points: usize,
    pub segments: usize,
    pub predicate_calls: u64,
    pub calls_per_point: f64,
}

/// Runs [`ssd_cover`] on a synthetic path of each requested size and records
/// the predicate-call count.
pub fn complexity_probe(
    predicate: &dyn Predicate,
    sizes: &[usize],
    shape: ProbeShape,
) -> Result<Vec<ProbeRow>, CoverError> {
    use rand::SeedableRng;
    sizes
        .iter()
        .map(|&requested| {
            let path = match shape {
                ProbeShape::Circle => gen::circle_with_points(requested),
                ProbeShape::Line => gen::digitized_line(requested.max(1), 5, 13, 3),
                ProbeShape::RandomWalk { seed } => {
                    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ requested as u64);
                    gen::random_walk(&mut rng, requested.max(1), crate::path::Adjacency::Eight, false)
                }
            };
            let cover = ssd_cover(&path, predicate)?;
            Ok(ProbeRow {
                requested,
                n_points: path.len(),
                segments: cover.len(),
                predicate_calls: cover.predicate_calls,
                calls_per_point: cover.predicate_calls as f64 / path.len() as f64,
            })
        })
        .collect()
}
