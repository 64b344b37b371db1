//! From a thin binary image to one digital path per connected component.
//!
//! Pixels are classified by their number of foreground neighbours. Maximal
//! connected sets of branching pixels form junctions; removing them leaves
//! simple curves, which become the edges of a multigraph over end points and
//! junctions. The multigraph is walked by an Euler tour (after postman
//! eulerization when needed) and the walk is emitted pixel by pixel.

mod emit;
mod graph;
mod image;
mod postman;

use thiserror::Error;

use crate::path::{Adjacency, GridPoint, PathError};

pub use emit::{covering_walk, emit_path, shortest_route, trace_component, trace_image, TracedComponent};
pub use graph::{
    branching_index, build_curve_graph, classify, find_junctions, CurveEdge, CurveGraph, CurveVertex, Junction,
    PixelClass, PixelKind, VertexKind,
};
pub use image::{row_major, BinaryImage, PbmError};
pub use postman::{euler_trail, euler_tour, eulerize, Eulerized, TourStep, MAX_ODD_VERTICES};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TraceError {
    #[error(transparent)]
    Pbm(#[from] PbmError),
    #[error("tracing needs 4- or 8-adjacency, got {0}")]
    UnsupportedAdjacency(Adjacency),
    #[error("pixel {0} is not foreground")]
    NotForeground(GridPoint),
    #[error("expected exactly one connected component, found {0}")]
    ComponentCount(usize),
    #[error("curve pixel {0} touches no vertex")]
    Unattached(GridPoint),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("{count} odd-degree vertices exceed the exact matching limit of {cap}")]
    TooManyOddVertices { count: usize, cap: usize },
    #[error("vertex {0} has odd degree")]
    OddVertex(usize),
    #[error("cannot route inside a junction from {from} to {to}")]
    Seam { from: GridPoint, to: GridPoint },
    #[error(transparent)]
    Path(#[from] PathError),
}
