//! Pixel classification, junctions and the curve graph of one component.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::image::{components_of, neighbours_in, row_major, BinaryImage};
use super::TraceError;
use crate::path::{Adjacency, GridPoint};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum PixelKind {
    Isolated,
    End,
    Regular,
    Branching,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PixelClass {
    pub kind: PixelKind,
    pub branching_index: usize,
}

pub(crate) fn check_adjacency(adjacency: Adjacency) -> Result<(), TraceError> {
    match adjacency {
        Adjacency::IndexOnly => Err(TraceError::UnsupportedAdjacency(adjacency)),
        _ => Ok(()),
    }
}

/// Number of foreground pixels in the neighbourhood of `p`.
pub fn branching_index(img: &BinaryImage, p: GridPoint, adjacency: Adjacency) -> Result<usize, TraceError> {
    check_adjacency(adjacency)?;
    if !img.is_foreground(p) {
        return Err(TraceError::NotForeground(p));
    }
    Ok(img.neighbours(p, adjacency).count())
}

pub fn classify(img: &BinaryImage, p: GridPoint, adjacency: Adjacency) -> Result<PixelClass, TraceError> {
    let branching_index = branching_index(img, p, adjacency)?;
    let kind = match branching_index {
        0 => PixelKind::Isolated,
        1 => PixelKind::End,
        2 => PixelKind::Regular,
        _ => PixelKind::Branching,
    };
    Ok(PixelClass { kind, branching_index })
}

/// A maximal connected set of branching pixels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Junction {
    /// Sorted pixels.
    pub pixels: Vec<GridPoint>,
    /// Number of non-junction foreground pixels adjacent to the junction.
    pub branching_index: usize,
}

fn branching_pixels(img: &BinaryImage, adjacency: Adjacency) -> BTreeSet<GridPoint> {
    img.foreground().iter().copied().filter(|&p| img.neighbours(p, adjacency).count() >= 3).collect()
}

/// Junctions ordered by their first pixel in row-major order.
pub fn find_junctions(img: &BinaryImage, adjacency: Adjacency) -> Result<Vec<Junction>, TraceError> {
    check_adjacency(adjacency)?;
    let branching = branching_pixels(img, adjacency);
    let mut parts = components_of(&branching, adjacency);
    parts.sort_by_key(|c| c.iter().map(row_major).min());
    Ok(parts
        .into_iter()
        .map(|part| {
            let outside: BTreeSet<GridPoint> = part
                .iter()
                .flat_map(|&p| img.neighbours(p, adjacency))
                .filter(|q| !part.contains(q))
                .collect();
            Junction { pixels: part.into_iter().collect(), branching_index: outside.len() }
        })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum VertexKind {
    End,
    Junction,
    /// Synthetic vertex of a component that is a simple closed curve.
    Cycle,
    /// A component made of one pixel.
    Isolated,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CurveVertex {
    pub kind: VertexKind,
    pub pixels: Vec<GridPoint>,
}

/// A simple curve of the image with its junction pixels removed, joining
/// vertex `u` to vertex `v` (`u == v` for a loop).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CurveEdge {
    pub u: usize,
    pub v: usize,
    /// Curve pixels in order from `u` to `v`, vertex pixels excluded.
    pub pixels: Vec<GridPoint>,
    /// Vertex pixels adjacent to the first and the last curve pixel (to each
    /// other when `pixels` is empty).
    #[serde(skip)]
    pub anchors: [GridPoint; 2],
}

impl CurveEdge {
    /// Postman weight: curve pixels plus the two attachment steps.
    pub fn weight(&self) -> u64 {
        self.pixels.len() as u64 + 2
    }

    pub fn other(&self, vertex: usize) -> usize {
        if vertex == self.u {
            self.v
        } else {
            self.u
        }
    }

    /// Pixels from the anchor at `from` to the opposite anchor, both anchors
    /// included.
    pub fn walk_from(&self, from: usize) -> Vec<GridPoint> {
        let mut out = Vec::with_capacity(self.pixels.len() + 2);
        if from == self.u {
            out.push(self.anchors[0]);
            out.extend(&self.pixels);
            out.push(self.anchors[1]);
        } else {
            out.push(self.anchors[1]);
            out.extend(self.pixels.iter().rev());
            out.push(self.anchors[0]);
        }
        out
    }
}

/// Multigraph of end points, junctions and the curves between them.
///
/// Vertices are ordered by their first pixel in row-major order; edges by
/// `(u, v, pixels)`. Every foreground pixel is either a vertex pixel or a
/// pixel of exactly one edge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CurveGraph {
    #[serde(skip)]
    pub adjacency: Adjacency,
    pub vertices: Vec<CurveVertex>,
    pub edges: Vec<CurveEdge>,
}

impl CurveGraph {
    pub fn degree(&self, vertex: usize) -> usize {
        self.edges.iter().map(|e| (e.u == vertex) as usize + (e.v == vertex) as usize).sum()
    }

    pub fn odd_vertices(&self) -> Vec<usize> {
        let mut degree = vec![0usize; self.vertices.len()];
        for e in &self.edges {
            degree[e.u] += 1;
            degree[e.v] += 1;
        }
        (0..self.vertices.len()).filter(|&v| degree[v] % 2 == 1).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("curve graph serializes")
    }
}

/// Orders a component of the simplified image whose pixels have at most two
/// neighbours. Returns the pixels in walk order and whether they close up.
fn order_curve(part: &BTreeSet<GridPoint>, adjacency: Adjacency) -> (Vec<GridPoint>, bool) {
    let degree = |p: GridPoint| neighbours_in(part, p, adjacency).count();
    let extremity = part.iter().copied().filter(|&p| degree(p) <= 1).min_by_key(row_major);
    let cyclic = extremity.is_none();
    let start = extremity.unwrap_or_else(|| *part.iter().min_by_key(|p| row_major(p)).unwrap());
    let mut order = vec![start];
    let mut seen = BTreeSet::from([start]);
    let mut current = start;
    loop {
        let next = neighbours_in(part, current, adjacency).filter(|q| !seen.contains(q)).min_by_key(row_major);
        match next {
            Some(q) => {
                seen.insert(q);
                order.push(q);
                current = q;
            }
            None => break,
        }
    }
    (order, cyclic)
}

/// Builds the curve graph of a one-component image.
pub fn build_curve_graph(img: &BinaryImage, adjacency: Adjacency) -> Result<CurveGraph, TraceError> {
    check_adjacency(adjacency)?;
    let count = img.components(adjacency).len();
    if count != 1 {
        return Err(TraceError::ComponentCount(count));
    }
    let fg = img.foreground();
    let junctions = find_junctions(img, adjacency)?;
    let mut owner: BTreeMap<GridPoint, usize> = BTreeMap::new();
    let mut vertices: Vec<CurveVertex> = Vec::new();
    for j in &junctions {
        for &p in &j.pixels {
            owner.insert(p, vertices.len());
        }
        vertices.push(CurveVertex { kind: VertexKind::Junction, pixels: j.pixels.clone() });
    }
    for &p in fg {
        match img.neighbours(p, adjacency).count() {
            0 => {
                owner.insert(p, vertices.len());
                vertices.push(CurveVertex { kind: VertexKind::Isolated, pixels: vec![p] });
            }
            1 => {
                owner.insert(p, vertices.len());
                vertices.push(CurveVertex { kind: VertexKind::End, pixels: vec![p] });
            }
            _ => {}
        }
    }

    let simplified: BTreeSet<GridPoint> = fg.iter().copied().filter(|p| !owner.contains_key(p)).collect();
    // (u, v, pixels, anchors) before renumbering
    let mut raw_edges: Vec<(usize, usize, Vec<GridPoint>, [GridPoint; 2])> = Vec::new();
    for part in components_of(&simplified, adjacency) {
        let (pixels, cyclic) = order_curve(&part, adjacency);
        if cyclic {
            let id = vertices.len();
            vertices.push(CurveVertex { kind: VertexKind::Cycle, pixels: vec![pixels[0]] });
            raw_edges.push((id, id, pixels[1..].to_vec(), [pixels[0], pixels[0]]));
            continue;
        }
        let attachments = |p: GridPoint| -> Vec<GridPoint> {
            let mut qs: Vec<GridPoint> = neighbours_in(fg, p, adjacency).filter(|q| owner.contains_key(q)).collect();
            qs.sort_by_key(row_major);
            qs
        };
        let (first, last) = (pixels[0], *pixels.last().unwrap());
        let (a, b) = if pixels.len() == 1 {
            // a regular pixel between two vertex pixels
            match attachments(first)[..] {
                [a, b] => (a, b),
                _ => return Err(TraceError::Unattached(first)),
            }
        } else {
            match (attachments(first).first(), attachments(last).first()) {
                (Some(&a), Some(&b)) => (a, b),
                (None, _) => return Err(TraceError::Unattached(first)),
                (_, None) => return Err(TraceError::Unattached(last)),
            }
        };
        raw_edges.push((owner[&a], owner[&b], pixels, [a, b]));
    }
    // curves between two vertices with no pixel in between: end pixels
    // adjacent to another vertex pixel
    for (id, vertex) in vertices.iter().enumerate() {
        if vertex.kind != VertexKind::End {
            continue;
        }
        let p = vertex.pixels[0];
        for q in neighbours_in(fg, p, adjacency) {
            if let Some(&w) = owner.get(&q) {
                let other_end = vertices[w].kind == VertexKind::End;
                if !other_end || p < q {
                    raw_edges.push((id, w, Vec::new(), [p, q]));
                }
            }
        }
    }

    // renumber vertices in row-major order of their first pixel
    let mut order: Vec<usize> = (0..vertices.len()).collect();
    order.sort_by_key(|&i| vertices[i].pixels.iter().map(row_major).min());
    let mut rank = vec![0; vertices.len()];
    for (new, &old) in order.iter().enumerate() {
        rank[old] = new;
    }
    let vertices: Vec<CurveVertex> = order.iter().map(|&i| vertices[i].clone()).collect();
    let mut edges: Vec<CurveEdge> = raw_edges
        .into_iter()
        .map(|(u, v, mut pixels, mut anchors)| {
            let (mut u, mut v) = (rank[u], rank[v]);
            let flip = u > v || (u == v && pixels.first() > pixels.last());
            if flip {
                std::mem::swap(&mut u, &mut v);
                pixels.reverse();
                anchors.swap(0, 1);
            }
            CurveEdge { u, v, pixels, anchors }
        })
        .collect();
    edges.sort_by(|a, b| (a.u, a.v, &a.pixels, a.anchors).cmp(&(b.u, b.v, &b.pixels, b.anchors)));
    Ok(CurveGraph { adjacency, vertices, edges })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plus() -> BinaryImage {
        BinaryImage::from_rows(&[".#.", "###", ".#."])
    }

    #[test]
    fn classification() {
        let single = BinaryImage::from_rows(&["#"]);
        assert_eq!(branching_index(&single, GridPoint::new(0, 0), Adjacency::Eight).unwrap(), 0);
        let run = BinaryImage::from_rows(&["###"]);
        assert_eq!(branching_index(&run, GridPoint::new(1, 0), Adjacency::Eight).unwrap(), 2);
        assert_eq!(branching_index(&plus(), GridPoint::new(1, 1), Adjacency::Four).unwrap(), 4);
        assert_eq!(
            classify(&plus(), GridPoint::new(1, 0), Adjacency::Four).unwrap(),
            PixelClass { kind: PixelKind::End, branching_index: 1 }
        );
        assert_eq!(
            branching_index(&run, GridPoint::new(0, 1), Adjacency::Four),
            Err(TraceError::NotForeground(GridPoint::new(0, 1)))
        );
    }

    #[test]
    fn junctions() {
        assert!(find_junctions(&BinaryImage::from_rows(&["#####"]), Adjacency::Eight).unwrap().is_empty());
        let js = find_junctions(&plus(), Adjacency::Four).unwrap();
        assert_eq!(js, vec![Junction { pixels: vec![GridPoint::new(1, 1)], branching_index: 4 }]);
        let two = BinaryImage::from_rows(&[".#...#.", "#######", ".#...#."]);
        assert_eq!(find_junctions(&two, Adjacency::Four).unwrap().len(), 2);
    }

    #[test]
    fn segment_graph() {
        let g = build_curve_graph(&BinaryImage::from_rows(&["#####"]), Adjacency::Eight).unwrap();
        assert_eq!(g.vertices.len(), 2);
        assert!(g.vertices.iter().all(|v| v.kind == VertexKind::End));
        assert_eq!(g.edges.len(), 1);
        assert_eq!(g.edges[0].pixels, vec![GridPoint::new(1, 0), GridPoint::new(2, 0), GridPoint::new(3, 0)]);
        assert_eq!(
            g.to_json(),
            r#"{"vertices":[{"kind":"end","pixels":[[0,0]]},{"kind":"end","pixels":[[4,0]]}],"edges":[{"u":0,"v":1,"pixels":[[1,0],[2,0],[3,0]]}]}"#
        );
    }

    #[test]
    fn plus_graph() {
        let g = build_curve_graph(&plus(), Adjacency::Four).unwrap();
        let kinds: Vec<_> = g.vertices.iter().map(|v| v.kind).collect();
        assert_eq!(kinds.iter().filter(|&&k| k == VertexKind::End).count(), 4);
        assert_eq!(kinds.iter().filter(|&&k| k == VertexKind::Junction).count(), 1);
        assert_eq!(g.edges.len(), 4);
        assert!(g.edges.iter().all(|e| e.pixels.is_empty()));
    }

    #[test]
    fn figure_eight_graph() {
        let img = BinaryImage::from_rows(&["###..", "#.#..", "#####", "..#.#", "..###"]);
        let g = build_curve_graph(&img, Adjacency::Four).unwrap();
        assert_eq!(g.vertices.len(), 1);
        assert_eq!(g.vertices[0].kind, VertexKind::Junction);
        assert_eq!(g.edges.len(), 2);
        assert!(g.edges.iter().all(|e| e.u == 0 && e.v == 0));
    }

    #[test]
    fn cycle_graph() {
        let img = BinaryImage::from_rows(&["###", "#.#", "###"]);
        let g = build_curve_graph(&img, Adjacency::Four).unwrap();
        assert_eq!(g.vertices, vec![CurveVertex { kind: VertexKind::Cycle, pixels: vec![GridPoint::new(0, 0)] }]);
        assert_eq!(g.edges.len(), 1);
        assert_eq!(g.edges[0].pixels.len(), 7);
    }

    #[test]
    fn multi_component_rejected() {
        let img = BinaryImage::from_rows(&["#.#"]);
        assert_eq!(build_curve_graph(&img, Adjacency::Eight), Err(TraceError::ComponentCount(2)));
    }
}
