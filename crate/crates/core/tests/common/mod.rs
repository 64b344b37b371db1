//! Shared corpora and independent checkers for the integration suites.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use satcover::gen;
use satcover::path::is_adjacent;
use satcover::trace::{BinaryImage, CurveGraph, TracedComponent};
use satcover::{Adjacency, DigitalPath, GridPoint, PredicateSpec};

pub const MAX_POINTS: usize = 200;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Predicates of the oracle-equivalence suite.
pub fn suite_predicates() -> Vec<PredicateSpec> {
    vec![
        PredicateSpec::dss(),
        PredicateSpec::max_len(1),
        PredicateSpec::max_len(2),
        PredicateSpec::max_len(5),
        PredicateSpec::x_monotone(),
        PredicateSpec::bbox(3, 3),
    ]
}

/// Replaces every diagonal step by two axis steps.
pub fn four_connected(path: &DigitalPath) -> DigitalPath {
    let pts = path.points();
    let n = pts.len();
    let steps = if path.is_closed() { n } else { n - 1 };
    let mut out = vec![pts[0]];
    for i in 0..steps {
        let (p, q) = (pts[i], pts[(i + 1) % n]);
        if p.x != q.x && p.y != q.y {
            out.push(GridPoint::new(q.x, p.y));
        }
        if i + 1 < n {
            out.push(q);
        }
    }
    DigitalPath::new(out, path.is_closed(), Adjacency::Four).unwrap()
}

/// Walk that keeps its previous step with probability `keep`.
pub fn inertial_walk(rng: &mut ChaCha8Rng, n_points: usize, adjacency: Adjacency, keep: f64) -> DigitalPath {
    let steps = adjacency.offsets();
    let mut pts = vec![GridPoint::new(0, 0)];
    let mut step = steps[rng.random_range(0..steps.len())];
    while pts.len() < n_points {
        if !rng.random_bool(keep) {
            step = steps[rng.random_range(0..steps.len())];
        }
        let last = *pts.last().unwrap();
        pts.push(GridPoint::new(last.x + step.0, last.y + step.1));
    }
    DigitalPath::open(pts, adjacency).unwrap()
}

/// One random path of the corpus: uniform walks, inertial walks, digital
/// circles and digitized lines, 4- or 8-connected, open or closed, at most
/// [`MAX_POINTS`] points.
pub fn corpus_path(rng: &mut ChaCha8Rng) -> DigitalPath {
    loop {
        let adjacency = if rng.random_bool(0.5) { Adjacency::Four } else { Adjacency::Eight };
        let closed = rng.random_bool(0.5);
        let n = rng.random_range(1..=160);
        let path = match rng.random_range(0..4) {
            0 | 1 => gen::random_walk(rng, n, adjacency, closed),
            2 => {
                let keep = rng.random_range(0.5..0.95);
                let p = inertial_walk(rng, n, adjacency, keep);
                if closed && p.len() >= 2 {
                    close_greedily(&p)
                } else {
                    p
                }
            }
            _ => {
                let base = if closed {
                    gen::digital_circle(rng.random_range(1..=24))
                } else {
                    let b = rng.random_range(1..=13);
                    gen::digitized_line(n, rng.random_range(0..=b), b, rng.random_range(0..b))
                };
                if adjacency == Adjacency::Four {
                    four_connected(&base)
                } else {
                    base
                }
            }
        };
        if path.len() <= MAX_POINTS {
            return path;
        }
    }
}

/// Closes an open 4/8 path by walking greedily back to its first point.
pub fn close_greedily(path: &DigitalPath) -> DigitalPath {
    let adjacency = path.adjacency();
    let mut pts = path.points().to_vec();
    let origin = pts[0];
    loop {
        let last = *pts.last().unwrap();
        if last == origin {
            pts.pop();
            continue;
        }
        if is_adjacent(last, origin, adjacency) {
            break;
        }
        let (dx, dy) = ((origin.x - last.x).signum(), (origin.y - last.y).signum());
        let next = match adjacency {
            Adjacency::Eight => GridPoint::new(last.x + dx, last.y + dy),
            _ if dx != 0 => GridPoint::new(last.x + dx, last.y),
            _ => GridPoint::new(last.x, last.y + dy),
        };
        pts.push(next);
    }
    if pts.len() < 2 {
        pts.push(GridPoint::new(origin.x + 1, origin.y));
    }
    DigitalPath::closed(pts, adjacency).unwrap()
}

pub fn corpus(seed: u64, count: usize) -> Vec<DigitalPath> {
    let mut rng = rng(seed);
    (0..count).map(|_| corpus_path(&mut rng)).collect()
}

/// Named trace fixtures with the adjacency they are traced under.
pub fn trace_fixtures() -> Vec<(&'static str, BinaryImage, Adjacency)> {
    let img = BinaryImage::from_rows;
    vec![
        ("segment", img(&["#####"]), Adjacency::Eight),
        ("plus", img(&[".#.", "###", ".#."]), Adjacency::Four),
        ("plus-8", img(&[".#.", "###", ".#."]), Adjacency::Eight),
        ("H", img(&["#...#", "#...#", "#####", "#...#", "#...#"]), Adjacency::Four),
        ("figure-eight", img(&["###..", "#.#..", "#####", "..#.#", "..###"]), Adjacency::Four),
        ("corridor", img(&[".#...#.", "#######", ".#...#."]), Adjacency::Four),
        ("cycle", img(&["###", "#.#", "###"]), Adjacency::Four),
        ("diamond-8", img(&["..#..", ".#.#.", "#...#", ".#.#.", "..#.."]), Adjacency::Eight),
        ("two-components", img(&["##...", ".....", "..###"]), Adjacency::Eight),
        ("cross-8", img(&["#...#", ".#.#.", "..#..", ".#.#.", "#...#"]), Adjacency::Eight),
        ("comb", img(&["#.#.#.#", "#######"]), Adjacency::Four),
        ("blob-junction", img(&["...#...", "...#...", "..###..", "####...", "..###..", "...#..."]), Adjacency::Four),
        ("lollipop", img(&["###....", "#.#....", "#######"]), Adjacency::Four),
        ("isolated", img(&["#..", "...", "..#"]), Adjacency::Four),
    ]
}

/// Checks a traced component against its image: valid path, every pixel
/// covered, and each edge of the walked multigraph emitted as a contiguous
/// run once per copy. Returns a description of the first violation.
pub fn check_trace(component: &BinaryImage, traced: &TracedComponent) -> Result<(), String> {
    let path = &traced.path;
    let report = satcover::validate_path(path);
    if !report.is_ok() {
        return Err(format!("invalid path: {report}"));
    }
    let covered: BTreeSet<GridPoint> = path.points().iter().copied().collect();
    if &covered != component.foreground() {
        return Err(format!("covers {} of {} pixels", covered.len(), component.foreground().len()));
    }
    check_runs(&traced.walk_graph, path)
}

fn check_runs(g: &CurveGraph, path: &DigitalPath) -> Result<(), String> {
    let pts = path.points();
    let n = pts.len();
    let at = |i: usize| pts[i % n];
    let mut copies: BTreeMap<&[GridPoint], usize> = BTreeMap::new();
    for e in &g.edges {
        *copies.entry(e.pixels.as_slice()).or_default() += 1;
    }
    for (run, &expected) in &copies {
        if run.is_empty() {
            continue;
        }
        let k = run.len();
        let mut found = 0;
        for (i, &p) in pts.iter().enumerate() {
            if p != run[0] && p != run[k - 1] {
                continue;
            }
            let fits = |forward: bool| {
                (0..k).all(|j| {
                    let want = if forward { run[j] } else { run[k - 1 - j] };
                    (path.is_closed() || i + j < n) && at(i + j) == want
                })
            };
            if fits(true) || (k > 1 && fits(false)) {
                found += 1;
            }
        }
        if found != expected {
            return Err(format!("run starting {} found {found} times, expected {expected}", run[0]));
        }
    }
    for e in g.edges.iter().filter(|e| e.pixels.is_empty() && e.anchors[0] != e.anchors[1]) {
        let [a, b] = e.anchors;
        let steps = if path.is_closed() { n } else { n - 1 };
        let present = (0..steps).any(|i| (at(i), at(i + 1)) == (a, b) || (at(i), at(i + 1)) == (b, a));
        if !present {
            return Err(format!("attachment step {a} -> {b} missing"));
        }
    }
    Ok(())
}

/// Minimum total duplication by Floyd-Warshall distances and exhaustive
/// enumeration of all pairings of the odd vertices.
pub fn exhaustive_postman_weight(g: &CurveGraph) -> u64 {
    let n = g.vertices.len();
    let inf = u64::MAX / 4;
    let mut d = vec![vec![inf; n]; n];
    for (v, row) in d.iter_mut().enumerate() {
        row[v] = 0;
    }
    for e in &g.edges {
        let w = e.pixels.len() as u64 + 2;
        d[e.u][e.v] = d[e.u][e.v].min(w);
        d[e.v][e.u] = d[e.v][e.u].min(w);
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    let odd = g.odd_vertices();
    fn best(rest: &[usize], d: &[Vec<u64>]) -> u64 {
        let Some((&first, others)) = rest.split_first() else { return 0 };
        (0..others.len())
            .map(|i| {
                let mut remaining = others.to_vec();
                let partner = remaining.remove(i);
                d[first][partner] + best(&remaining, d)
            })
            .min()
            .unwrap()
    }
    best(&odd, &d)
}

/// Independent DSS oracle: exhaustive search of primitive directions
/// `(a, b)` with `|a|, |b| <= extent + 1`, feasible when the values
/// `a x - b y` span fewer than `omega` consecutive integers. Returns the
/// smallest feasible `omega`.
pub fn dss_oracle(points: &[GridPoint], adjacency: Adjacency) -> Option<i64> {
    let (min_x, max_x) = points.iter().fold((i64::MAX, i64::MIN), |(lo, hi), p| (lo.min(p.x), hi.max(p.x)));
    let (min_y, max_y) = points.iter().fold((i64::MAX, i64::MIN), |(lo, hi), p| (lo.min(p.y), hi.max(p.y)));
    let bound = (max_x - min_x).max(max_y - min_y) + 1;
    let mut best: Option<i64> = None;
    for a in 0..=bound {
        for b in -bound..=bound {
            if (a == 0 && b <= 0) || gcd(a, b.abs()) != 1 {
                continue;
            }
            let omega = match adjacency {
                Adjacency::Four => a + b.abs(),
                _ => a.max(b.abs()),
            };
            let values = points.iter().map(|p| a * p.x - b * p.y);
            let (lo, hi) = values.fold((i64::MAX, i64::MIN), |(lo, hi), v| (lo.min(v), hi.max(v)));
            if hi - lo < omega && best.map_or(true, |w| omega < w) {
                best = Some(omega);
            }
        }
    }
    best
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
