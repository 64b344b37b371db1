//! Saturated subpath covers of digital paths.
//!
//! * [`path`]: grid points, digital paths, subpath intervals.
//! * [`predicate`]: conservative predicates and their incremental recognizers.
//! * [`cover`]: the linear-time saturated subpath decomposition and its
//!   reference implementations.
//! * [`arcgraph`]: covers as circular-arc intersection graphs.
//! * [`trace`]: binary images to digital paths through curve graphs.
//! * [`gen`]: synthetic paths for tests and benchmarks.

pub mod arcgraph;
pub mod cover;
pub mod gen;
pub mod path;
pub mod predicate;
pub mod trace;

pub use arcgraph::{build_arc_graph, phi, ArcGraph, ArcGraphDocument, CircularArc};
pub use cover::{
    brute_force_cover, check_cover, complexity_probe, forward_cover, ssd_cover, CoverDocument, CoverError,
    ProbeRow, ProbeShape, SaturatedCover,
};
pub use path::{
    canonical_extension, enumerate_subpaths, middle_index, validate_path, Adjacency, DigitalPath, GridPoint,
    IndexInterval, PathError, ValidationReport,
};
pub use predicate::{
    check_conservative, make_recognizer, ConservativityReport, Predicate, PredicateError, PredicateSpec, Recognizer,
};
