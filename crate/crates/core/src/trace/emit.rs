//! Turning a walk on the curve graph back into a pixel path.
//!
//! Each edge is emitted as its anchor, its curve pixels and its far anchor.
//! Between two consecutive edges the walk crosses a vertex. Inside a junction
//! the first crossing follows a spanning-tree walk that visits every junction
//! pixel and ends at the next anchor; later crossings take a shortest route.
//! The image is therefore covered pixel for pixel, junctions included.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::graph::{build_curve_graph, CurveGraph, VertexKind};
use super::image::{neighbours_in, BinaryImage};
use super::postman::{euler_trail, euler_tour, eulerize, TourStep};
use super::TraceError;
use crate::path::{Adjacency, DigitalPath, GridPoint};

/// BFS tree of `set` rooted at `root`, as parent links.
fn bfs_tree(set: &BTreeSet<GridPoint>, root: GridPoint, adjacency: Adjacency) -> BTreeMap<GridPoint, GridPoint> {
    let mut parent = BTreeMap::from([(root, root)]);
    let mut queue = VecDeque::from([root]);
    while let Some(p) = queue.pop_front() {
        for q in neighbours_in(set, p, adjacency) {
            if let std::collections::btree_map::Entry::Vacant(slot) = parent.entry(q) {
                slot.insert(p);
                queue.push_back(q);
            }
        }
    }
    parent
}

fn tree_path(parent: &BTreeMap<GridPoint, GridPoint>, from: GridPoint, to: GridPoint) -> Option<Vec<GridPoint>> {
    parent.get(&to)?;
    let mut path = vec![to];
    let mut p = to;
    while p != from {
        p = parent[&p];
        path.push(p);
    }
    path.reverse();
    Some(path)
}

/// Shortest route from `from` to `to` inside `set`, both ends included.
pub fn shortest_route(
    set: &BTreeSet<GridPoint>,
    from: GridPoint,
    to: GridPoint,
    adjacency: Adjacency,
) -> Option<Vec<GridPoint>> {
    tree_path(&bfs_tree(set, from, adjacency), from, to)
}

/// Walk from `from` to `to` inside the connected set `set` visiting every
/// pixel, at most `2 |set| - 1` points long.
///
/// Depth-first traversal of a BFS tree rooted at `from`, each node's child on
/// the tree path to `to` taken last and never returned from.
pub fn covering_walk(
    set: &BTreeSet<GridPoint>,
    from: GridPoint,
    to: GridPoint,
    adjacency: Adjacency,
) -> Option<Vec<GridPoint>> {
    let parent = bfs_tree(set, from, adjacency);
    if parent.len() != set.len() {
        return None;
    }
    let on_path: BTreeSet<GridPoint> = tree_path(&parent, from, to)?.into_iter().collect();
    let mut children: BTreeMap<GridPoint, Vec<GridPoint>> = BTreeMap::new();
    for (&c, &p) in &parent {
        if c != p {
            children.entry(p).or_default().push(c);
        }
    }
    for list in children.values_mut() {
        list.sort_by_key(|c| on_path.contains(c));
    }
    let mut walk = vec![from];
    let mut stack = vec![(from, 0usize)];
    while let Some(top) = stack.last_mut() {
        let v = top.0;
        let kids = children.get(&v).map_or(&[][..], Vec::as_slice);
        if let Some(&c) = kids.get(top.1) {
            top.1 += 1;
            walk.push(c);
            stack.push((c, 0));
        } else {
            stack.pop();
            if v == to {
                break;
            }
            if let Some(&(p, _)) = stack.last() {
                walk.push(p);
            }
        }
    }
    Some(walk)
}

/// Routes through vertices, remembering which junctions have been covered.
struct Router<'a> {
    graph: &'a CurveGraph,
    pixels: Vec<BTreeSet<GridPoint>>,
    covered: Vec<bool>,
}

impl<'a> Router<'a> {
    fn new(graph: &'a CurveGraph) -> Self {
        Self {
            graph,
            pixels: graph.vertices.iter().map(|v| v.pixels.iter().copied().collect()).collect(),
            covered: graph.vertices.iter().map(|v| v.kind != VertexKind::Junction).collect(),
        }
    }

    fn route(&mut self, vertex: usize, from: GridPoint, to: GridPoint) -> Result<Vec<GridPoint>, TraceError> {
        let adjacency = self.graph.adjacency;
        let set = &self.pixels[vertex];
        let route = if self.covered[vertex] {
            if from == to {
                Some(vec![from])
            } else {
                shortest_route(set, from, to, adjacency)
            }
        } else {
            self.covered[vertex] = true;
            covering_walk(set, from, to, adjacency)
        };
        route.ok_or(TraceError::Seam { from, to })
    }
}

fn extend_collapsed(out: &mut Vec<GridPoint>, points: impl IntoIterator<Item = GridPoint>) {
    for p in points {
        if out.last() != Some(&p) {
            out.push(p);
        }
    }
}

/// Pixel path of a walk on the curve graph, closed when `closed` is set.
///
/// An empty walk emits the single vertex of an edgeless graph: a closed
/// covering walk of a junction or an isolated pixel.
pub fn emit_path(g: &CurveGraph, steps: &[TourStep], closed: bool) -> Result<DigitalPath, TraceError> {
    let mut router = Router::new(g);
    let mut out: Vec<GridPoint> = Vec::new();
    if steps.is_empty() {
        let vertex = match g.vertices[..] {
            [ref v] => v,
            _ => return Err(TraceError::Disconnected),
        };
        let p = vertex.pixels[0];
        let walk = router.route(0, p, p)?;
        extend_collapsed(&mut out, walk);
        let closed = out.len() > 1;
        if closed {
            out.pop();
        }
        return DigitalPath::new(out, closed, g.adjacency).map_err(TraceError::Path);
    }
    for (k, step) in steps.iter().enumerate() {
        let walk = g.edges[step.edge].walk_from(step.from);
        if k > 0 {
            let here = *out.last().unwrap();
            let route = router.route(step.from, here, walk[0])?;
            extend_collapsed(&mut out, route);
        }
        extend_collapsed(&mut out, walk);
    }
    let start = steps[0].from;
    let last = steps.last().unwrap();
    let end = g.edges[last.edge].other(last.from);
    if closed {
        let (here, first) = (*out.last().unwrap(), out[0]);
        let route = router.route(start, here, first)?;
        extend_collapsed(&mut out, route);
        while out.len() > 1 && out.last() == out.first() {
            out.pop();
        }
    } else {
        if !router.covered[end] {
            let here = *out.last().unwrap();
            let tail = router.route(end, here, here)?;
            extend_collapsed(&mut out, tail);
        }
        if !router.covered[start] {
            let first = out[0];
            let mut head = router.route(start, first, first)?;
            head.pop();
            head.extend(out);
            out = head;
        }
    }
    DigitalPath::new(out, closed, g.adjacency).map_err(TraceError::Path)
}

/// Tracing result for one connected component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TracedComponent {
    pub graph: CurveGraph,
    /// The graph the walk runs on: `graph` itself or its eulerization.
    pub walk_graph: CurveGraph,
    /// Weight of the edges duplicated by eulerization.
    pub duplicated_weight: u64,
    pub steps: Vec<TourStep>,
    pub path: DigitalPath,
}

/// Traces a one-component image: a closed Euler tour when all degrees are
/// even, an open Euler trail with exactly two odd vertices, and a closed
/// tour of the postman eulerization otherwise.
pub fn trace_component(img: &BinaryImage, adjacency: Adjacency) -> Result<TracedComponent, TraceError> {
    let graph = build_curve_graph(img, adjacency)?;
    let odd = graph.odd_vertices();
    let (walk_graph, duplicated_weight, steps, closed) = if graph.edges.is_empty() {
        (graph.clone(), 0, Vec::new(), false)
    } else if odd.is_empty() {
        let steps = euler_tour(&graph, 0)?;
        (graph.clone(), 0, steps, true)
    } else if odd.len() == 2 {
        let steps = euler_trail(&graph)?;
        (graph.clone(), 0, steps, false)
    } else {
        let e = eulerize(&graph)?;
        let steps = euler_tour(&e.graph, odd[0])?;
        (e.graph, e.duplicated_weight, steps, true)
    };
    let path = emit_path(&walk_graph, &steps, closed)?;
    Ok(TracedComponent { graph, walk_graph, duplicated_weight, steps, path })
}

/// Traces every connected component, in row-major order of their first pixel.
pub fn trace_image(img: &BinaryImage, adjacency: Adjacency) -> Result<Vec<TracedComponent>, TraceError> {
    super::graph::check_adjacency(adjacency)?;
    img.components(adjacency).iter().map(|c| trace_component(c, adjacency)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(rows: &[&str]) -> BTreeSet<GridPoint> {
        BinaryImage::from_rows(rows).foreground().clone()
    }

    #[test]
    fn covering_walk_ends_where_asked() {
        let s = set(&["###", "###"]);
        for &from in &s {
            for &to in &s {
                let w = covering_walk(&s, from, to, Adjacency::Four).unwrap();
                assert_eq!((w[0], *w.last().unwrap()), (from, to));
                assert!(w.len() < 2 * s.len());
                assert_eq!(w.iter().copied().collect::<BTreeSet<_>>(), s);
                assert!(w.windows(2).all(|p| crate::path::is_adjacent(p[0], p[1], Adjacency::Four)));
            }
        }
    }

    #[test]
    fn segment_is_emitted_in_order() {
        let t = trace_component(&BinaryImage::from_rows(&["####"]), Adjacency::Eight).unwrap();
        let xs: Vec<i64> = t.path.points().iter().map(|p| p.x).collect();
        assert_eq!(xs, vec![0, 1, 2, 3]);
        assert!(!t.path.is_closed());
    }

    #[test]
    fn plus_revisits_its_centre() {
        let t = trace_component(&BinaryImage::from_rows(&[".#.", "###", ".#."]), Adjacency::Four).unwrap();
        let centre = t.path.points().iter().filter(|&&p| p == GridPoint::new(1, 1)).count();
        assert!(centre >= 2);
        assert_eq!(t.path.points().iter().collect::<BTreeSet<_>>().len(), 5);
    }

    #[test]
    fn junction_only_component() {
        let t = trace_component(&BinaryImage::from_rows(&[".#.", "###", ".#."]), Adjacency::Eight).unwrap();
        assert!(t.path.is_closed());
        assert_eq!(t.path.points().iter().collect::<BTreeSet<_>>().len(), 5);
    }

    #[test]
    fn isolated_pixel() {
        let t = trace_component(&BinaryImage::from_rows(&["#"]), Adjacency::Eight).unwrap();
        assert_eq!(t.path.points(), &[GridPoint::new(0, 0)]);
    }
}
