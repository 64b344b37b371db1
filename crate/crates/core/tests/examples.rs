//! Worked examples through the public API.

mod common;

use rand::Rng;
use satcover::predicate::{make_recognizer, Dss, MaxLen};
use satcover::trace::{build_curve_graph, euler_tour, eulerize, trace_image, BinaryImage, VertexKind};
use satcover::{
    brute_force_cover, check_conservative, complexity_probe, forward_cover, gen, ssd_cover, Adjacency, DigitalPath,
    GridPoint, IndexInterval, Predicate, PredicateSpec, ProbeShape, Recognizer,
};

#[test]
fn bbox_recognizer_example() {
    let path = DigitalPath::open(vec![(0, 0).into(), (1, 0).into(), (2, 0).into()], Adjacency::Four).unwrap();
    let pred = PredicateSpec::bbox(2, 2).build().unwrap();
    let mut rec = make_recognizer(pred.as_ref(), &path).unwrap();
    assert!(rec.reset(1));
    assert!(rec.try_extend_positive());
    assert!(!rec.try_extend_negative());
    assert_eq!(rec.interval(), Some(IndexInterval::new(1, 2)));
}

#[test]
fn dss_accepts_a_long_digitized_line() {
    let path = gen::digitized_line(1000, 2, 5, 1);
    // the strip -1 <= 2x - 5y <= 3 holds by construction of the floor
    assert!(path.points().iter().all(|p| (-1..=3).contains(&(2 * p.x - 5 * p.y))));
    let mut rec = Dss::recognizer_for(&path);
    assert!(rec.reset(0));
    for _ in 1..1000 {
        assert!(rec.try_extend_positive());
    }
    let s = rec.dss_state().unwrap();
    assert_eq!((s.a, s.b, s.mu, s.omega), (2, 5, -1, 5));
}

#[test]
fn dss_on_random_closed_path_matches_brute_force() {
    let mut rng = common::rng(60);
    for _ in 0..20 {
        // closing may lengthen a walk, so draw until exactly 60 points
        let path = loop {
            let n = rng.random_range(30..=60);
            let p = gen::random_walk(&mut rng, n, Adjacency::Eight, true);
            if p.len() == 60 {
                break p;
            }
        };
        assert!(path.is_closed());
        let a = ssd_cover(&path, &Dss).unwrap();
        let b = brute_force_cover(&path, &Dss).unwrap();
        assert_eq!(a.segments, b.segments);
    }
}

#[test]
fn forward_cover_on_circle_drops_only_a_contained_first_segment() {
    let circle = gen::digital_circle(10);
    let fwd = forward_cover(&circle, &Dss).unwrap();
    assert_eq!(fwd.segments, brute_force_cover(&circle, &Dss).unwrap().segments);
    // the naive first segment from index 0
    let n = circle.len();
    let mut len = 1;
    while len < n && Dss.holds(&circle, IndexInterval::new(0, len + 1)) {
        len += 1;
    }
    let first = IndexInterval::new(0, len);
    let kept = fwd.segments.contains(&first);
    let dominated = fwd.segments.iter().any(|s| *s != first && s.contains(&first, n, true));
    assert_ne!(kept, dominated);
}

/// A predicate false everywhere, written against the public traits.
struct Nothing;

struct Empty;

impl Recognizer for Empty {
    fn interval(&self) -> Option<IndexInterval> {
        None
    }
    fn reset(&mut self, _: usize) -> bool {
        false
    }
    fn try_extend_positive(&mut self) -> bool {
        false
    }
    fn try_extend_negative(&mut self) -> bool {
        false
    }
    fn remove_negative_end(&mut self) {}
}

impl Predicate for Nothing {
    fn spec(&self) -> PredicateSpec {
        PredicateSpec::new("nothing")
    }
    fn recognizer<'a>(&'a self, _: &'a DigitalPath) -> Box<dyn Recognizer + 'a> {
        Box::new(Empty)
    }
    fn holds(&self, _: &DigitalPath, _: IndexInterval) -> bool {
        false
    }
}

#[test]
fn everywhere_false_gives_empty_covers() {
    let path = gen::digital_circle(4);
    for cover in [ssd_cover(&path, &Nothing), forward_cover(&path, &Nothing), brute_force_cover(&path, &Nothing)] {
        let cover = cover.unwrap();
        assert!(cover.is_empty());
    }
    assert_eq!(ssd_cover(&path, &Nothing).unwrap().predicate_calls, path.len() as u64);
}

#[test]
fn single_point_path_cover() {
    let path = DigitalPath::open(vec![GridPoint::new(4, 4)], Adjacency::Eight).unwrap();
    let cover = forward_cover(&path, &Dss).unwrap();
    assert_eq!(cover.segments, vec![IndexInterval::singleton(0)]);
    let probe = complexity_probe(&Dss, &[1], ProbeShape::Line).unwrap();
    assert!(probe[0].predicate_calls >= 1);
}

#[test]
fn max_len_calls_scale_linearly() {
    for k in [1, 3, 8] {
        let rows = complexity_probe(&MaxLen::new(k), &[1_000, 10_000, 100_000], ProbeShape::Line).unwrap();
        let ratios: Vec<f64> = rows.iter().map(|r| r.calls_per_point).collect();
        let spread = ratios.iter().cloned().fold(f64::MIN, f64::max) / ratios.iter().cloned().fold(f64::MAX, f64::min);
        assert!(spread < 1.05, "k={k}: {ratios:?}");
    }
}

#[test]
fn dss_is_conservative_on_short_random_walks() {
    let mut rng = common::rng(40);
    let paths: Vec<DigitalPath> =
        (0..300).map(|i| gen::random_walk(&mut rng, 1 + i % 40, Adjacency::Eight, false)).collect();
    assert!(check_conservative(&Dss, &paths, 10_000, 1).passed());
    assert!(check_conservative(&MaxLen::new(3), &paths, 10_000, 2).passed());
}

#[test]
fn plus_traces_through_its_centre_twice() {
    let img = BinaryImage::from_rows(&[".#.", "###", ".#."]);
    let traced = trace_image(&img, Adjacency::Four).unwrap();
    assert_eq!(traced.len(), 1);
    let pts = traced[0].path.points();
    assert!(pts.iter().filter(|&&p| p == GridPoint::new(1, 1)).count() >= 2);
}

#[test]
fn figure_eight_is_a_closed_tour_of_two_loops() {
    let img = BinaryImage::from_rows(&["###..", "#.#..", "#####", "..#.#", "..###"]);
    let traced = trace_image(&img, Adjacency::Four).unwrap();
    let t = &traced[0];
    assert!(t.path.is_closed());
    assert_eq!(t.steps.len(), 2);
    assert_eq!(t.duplicated_weight, 0);
    let centre = t.path.points().iter().filter(|&&p| p == GridPoint::new(2, 2)).count();
    assert!(centre >= 2);
}

#[test]
fn h_shape_tour_uses_the_eulerized_multiset() {
    let img = BinaryImage::from_rows(&["#...#", "#...#", "#####", "#...#", "#...#"]);
    let g = build_curve_graph(&img, Adjacency::Four).unwrap();
    assert_eq!(g.vertices.iter().filter(|v| v.kind == VertexKind::Junction).count(), 2);
    let e = eulerize(&g).unwrap();
    // each end pairs with the end on the same side: two arms of weight 3
    // each plus the crossbar (weight 5) once
    assert_eq!(e.duplicated_weight, 3 + 3 + 3 + 3 + 5);
    let tour = euler_tour(&e.graph, 0).unwrap();
    let mut used: Vec<usize> = tour.iter().map(|s| s.edge).collect();
    used.sort_unstable();
    assert_eq!(used, (0..e.graph.edges.len()).collect::<Vec<_>>());
}

#[test]
fn components_are_traced_separately() {
    let img = BinaryImage::from_rows(&["###...", "......", "...###"]);
    assert_eq!(trace_image(&img, Adjacency::Eight).unwrap().len(), 2);
    let blank = BinaryImage::parse_pbm(b"P1 4 4 0000 0000 0000 0000").unwrap();
    assert!(trace_image(&blank, Adjacency::Eight).unwrap().is_empty());
}
