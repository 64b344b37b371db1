//! Subpaths as arcs of the unit circle and their intersection graph.
//!
//! Point `k` of a path with `n + 1` points sits at angle `k / (n + 1)` of a
//! full turn. A subpath becomes the closed arc from its first to its last
//! point, taken in the positive direction. All angles are exact fractions.

use std::fmt::Write as _;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::cover::SaturatedCover;
use crate::path::IndexInterval;

/// Angle of point `k` on a path whose largest index is `n`, as a fraction of
/// a full turn.
pub fn phi(k: usize, n: usize) -> Ratio<i64> {
    assert!(k <= n, "point index {k} beyond path end {n}");
    Ratio::new(k as i64, n as i64 + 1)
}

/// Positive-direction distance from angle `from` to angle `to`, in `[0, 1)`.
fn turn_offset(from: Ratio<i64>, to: Ratio<i64>) -> Ratio<i64> {
    let d = to - from;
    if d < Ratio::from_integer(0) {
        d + 1
    } else {
        d
    }
}

/// Closed arc from `start_angle` to `end_angle`, positive direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CircularArc {
    pub start_angle: Ratio<i64>,
    pub end_angle: Ratio<i64>,
    pub source: IndexInterval,
    span: Ratio<i64>,
}

impl CircularArc {
    /// Arc of a subpath of a path with `n_points` points.
    pub fn of(iv: IndexInterval, n_points: usize) -> Self {
        assert!(iv.len >= 1 && iv.len <= n_points && iv.start < n_points);
        let n = n_points - 1;
        Self {
            start_angle: phi(iv.start, n),
            end_angle: phi(iv.last(n_points), n),
            source: iv,
            span: Ratio::new(iv.len as i64 - 1, n_points as i64),
        }
    }

    /// Angular length as a fraction of a full turn: `(len - 1) / (n + 1)`.
    pub fn span(&self) -> Ratio<i64> {
        self.span
    }

    /// Whether the angle lies on the arc.
    pub fn covers_angle(&self, angle: Ratio<i64>) -> bool {
        turn_offset(self.start_angle, angle) <= self.span
    }

    pub fn contains(&self, other: &CircularArc) -> bool {
        turn_offset(self.start_angle, other.start_angle) + other.span <= self.span
    }

    pub fn intersects(&self, other: &CircularArc) -> bool {
        self.covers_angle(other.start_angle) || other.covers_angle(self.start_angle)
    }
}

/// Intersection graph of the arcs of a cover.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArcGraph {
    pub arcs: Vec<CircularArc>,
    /// Pairs `(u, v)` with `u < v`, sorted.
    pub edges: Vec<(usize, usize)>,
    /// No arc contains another.
    pub proper: bool,
    /// The arcs come from an open path, so the graph is an interval graph.
    pub interval: bool,
}

/// Builds the arc intersection graph of a cover, nodes in segment order.
///
/// Arcs are swept in order of their start angle. Every intersecting pair has
/// one arc whose start lies on the other, and containment implies
/// intersection, so both are found by scanning forward from each arc until
/// the first start beyond its end.
pub fn build_arc_graph(cover: &SaturatedCover) -> ArcGraph {
    let n = cover.n_points;
    let arcs: Vec<CircularArc> = cover.segments.iter().map(|&s| CircularArc::of(s, n)).collect();
    let mut order: Vec<usize> = (0..arcs.len()).collect();
    order.sort_by_key(|&i| (arcs[i].start_angle, i));
    let m = arcs.len();
    let mut edges = Vec::new();
    let mut proper = true;
    for (pos, &i) in order.iter().enumerate() {
        let a = &arcs[i];
        for step in 1..m {
            let wrapped = pos + step >= m;
            if wrapped && !cover.closed {
                break;
            }
            let j = order[(pos + step) % m];
            let b = &arcs[j];
            let mut offset = b.start_angle - a.start_angle;
            if wrapped {
                offset += 1;
            }
            if offset > a.span {
                break;
            }
            edges.push((i.min(j), i.max(j)));
            if a.contains(b) || b.contains(a) {
                proper = false;
            }
        }
    }
    edges.sort_unstable();
    edges.dedup();
    ArcGraph { arcs, edges, proper, interval: !cover.closed }
}

/// Graph JSON: `{"nodes": [{"start": .., "len": ..}], "edges": [[u, v]], "proper": .., "interval": ..}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArcGraphDocument {
    pub nodes: Vec<IndexInterval>,
    pub edges: Vec<[usize; 2]>,
    pub proper: bool,
    pub interval: bool,
}

impl ArcGraph {
    pub fn node_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn to_document(&self) -> ArcGraphDocument {
        ArcGraphDocument {
            nodes: self.arcs.iter().map(|a| a.source).collect(),
            edges: self.edges.iter().map(|&(u, v)| [u, v]).collect(),
            proper: self.proper,
            interval: self.interval,
        }
    }

    /// Graphviz rendering, one node per arc labelled with its subpath.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph arcs {\n");
        for (i, a) in self.arcs.iter().enumerate() {
            let _ = writeln!(out, "  {i} [label=\"{}\"];", a.source);
        }
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "  {u} -- {v};");
        }
        out.push_str("}\n");
        out
    }
}
