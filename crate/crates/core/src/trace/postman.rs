//! Chinese postman eulerization and Euler tours of curve graphs.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::graph::CurveGraph;
use super::TraceError;

/// Largest number of odd-degree vertices [`eulerize`] pairs up exactly.
pub const MAX_ODD_VERTICES: usize = 20;

/// A curve graph made even by duplicating edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Eulerized {
    /// Original edges followed by the duplicates.
    pub graph: CurveGraph,
    /// For each duplicate, the index of the original edge it copies.
    pub duplicated: Vec<usize>,
    /// Total weight of the duplicates.
    pub duplicated_weight: u64,
}

/// One step of a tour: an edge and the vertex it is entered from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TourStep {
    pub edge: usize,
    pub from: usize,
}

fn check_connected(g: &CurveGraph) -> Result<(), TraceError> {
    let n = g.vertices.len();
    if n == 0 {
        return Ok(());
    }
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for e in &g.edges {
        let (a, b) = (find(&mut parent, e.u), find(&mut parent, e.v));
        parent[a] = b;
    }
    let root = find(&mut parent, 0);
    if (1..n).all(|v| find(&mut parent, v) == root) {
        Ok(())
    } else {
        Err(TraceError::Disconnected)
    }
}

/// Single-source shortest paths by edge weight; returns distances and the
/// edge used to reach each vertex.
fn dijkstra(g: &CurveGraph, source: usize) -> (Vec<u64>, Vec<Option<usize>>) {
    let n = g.vertices.len();
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, e) in g.edges.iter().enumerate() {
        if e.u != e.v {
            incident[e.u].push(i);
            incident[e.v].push(i);
        }
    }
    let mut dist = vec![u64::MAX; n];
    let mut via = vec![None; n];
    let mut heap = BinaryHeap::from([Reverse((0u64, source))]);
    dist[source] = 0;
    while let Some(Reverse((d, v))) = heap.pop() {
        if d > dist[v] {
            continue;
        }
        for &i in &incident[v] {
            let e = &g.edges[i];
            let w = e.other(v);
            let nd = d + e.weight();
            if nd < dist[w] {
                dist[w] = nd;
                via[w] = Some(i);
                heap.push(Reverse((nd, w)));
            }
        }
    }
    (dist, via)
}

/// Minimum-weight perfect matching of `k` items (`k` even) under the cost
/// matrix, by dynamic programming over subsets. Returns the cost and pairs.
fn min_pairing(cost: &[Vec<u64>]) -> (u64, Vec<(usize, usize)>) {
    let k = cost.len();
    let full = (1usize << k) - 1;
    let mut best = vec![u64::MAX; 1 << k];
    let mut choice = vec![(0usize, 0usize); 1 << k];
    best[0] = 0;
    for mask in 0..full {
        if best[mask] == u64::MAX {
            continue;
        }
        // the lowest unmatched item is matched next
        let i = (!mask).trailing_zeros() as usize;
        for (j, &pair) in cost[i].iter().enumerate().skip(i + 1) {
            if mask & (1 << j) != 0 || pair == u64::MAX {
                continue;
            }
            let next = mask | (1 << i) | (1 << j);
            let c = best[mask] + pair;
            if c < best[next] {
                best[next] = c;
                choice[next] = (i, j);
            }
        }
    }
    let mut pairs = Vec::new();
    let mut mask = full;
    while mask != 0 {
        let (i, j) = choice[mask];
        pairs.push((i, j));
        mask &= !((1 << i) | (1 << j));
    }
    pairs.reverse();
    (best[full], pairs)
}

/// Duplicates edges along shortest paths between optimally paired odd
/// vertices, so that every degree becomes even.
pub fn eulerize(g: &CurveGraph) -> Result<Eulerized, TraceError> {
    check_connected(g)?;
    let odd = g.odd_vertices();
    if odd.len() > MAX_ODD_VERTICES {
        return Err(TraceError::TooManyOddVertices { count: odd.len(), cap: MAX_ODD_VERTICES });
    }
    let mut out = Eulerized { graph: g.clone(), duplicated: Vec::new(), duplicated_weight: 0 };
    if odd.is_empty() {
        return Ok(out);
    }
    let trees: Vec<_> = odd.iter().map(|&v| dijkstra(g, v)).collect();
    let cost: Vec<Vec<u64>> = trees.iter().map(|(dist, _)| odd.iter().map(|&w| dist[w]).collect()).collect();
    let (total, pairs) = min_pairing(&cost);
    for (i, j) in pairs {
        let (_, via) = &trees[i];
        let mut v = odd[j];
        while v != odd[i] {
            let e = via[v].expect("connected graph has a shortest path");
            out.duplicated.push(e);
            out.graph.edges.push(g.edges[e].clone());
            out.duplicated_weight += g.edges[e].weight();
            v = g.edges[e].other(v);
        }
    }
    debug_assert_eq!(out.duplicated_weight, total);
    Ok(out)
}

/// Hierholzer walk from `start` taking, at each vertex, the lowest-numbered
/// unused edge.
fn hierholzer(g: &CurveGraph, start: usize) -> Vec<TourStep> {
    let n = g.vertices.len();
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, e) in g.edges.iter().enumerate() {
        incident[e.u].push(i);
        if e.v != e.u {
            incident[e.v].push(i);
        }
    }
    let mut used = vec![false; g.edges.len()];
    let mut cursor = vec![0usize; n];
    let mut stack: Vec<(usize, Option<TourStep>)> = vec![(start, None)];
    let mut steps = Vec::with_capacity(g.edges.len());
    while let Some(&(v, _)) = stack.last() {
        while cursor[v] < incident[v].len() && used[incident[v][cursor[v]]] {
            cursor[v] += 1;
        }
        if let Some(&i) = incident[v].get(cursor[v]) {
            used[i] = true;
            stack.push((g.edges[i].other(v), Some(TourStep { edge: i, from: v })));
        } else {
            let (_, step) = stack.pop().unwrap();
            steps.extend(step);
        }
    }
    steps.reverse();
    steps
}

/// Closed walk from `start` using every edge exactly once.
pub fn euler_tour(g: &CurveGraph, start: usize) -> Result<Vec<TourStep>, TraceError> {
    check_connected(g)?;
    if let Some(&v) = g.odd_vertices().first() {
        return Err(TraceError::OddVertex(v));
    }
    Ok(hierholzer(g, start))
}

/// Open walk using every edge exactly once, from the first to the second of
/// the graph's two odd vertices.
pub fn euler_trail(g: &CurveGraph) -> Result<Vec<TourStep>, TraceError> {
    check_connected(g)?;
    match g.odd_vertices()[..] {
        [a, _] => Ok(hierholzer(g, a)),
        ref odd => Err(TraceError::OddVertex(odd.first().copied().unwrap_or(0))),
    }
}
