//! Randomized invariant suite: every cover is compared with the brute-force
//! oracle, checked against the segment bound, mapped to a proper arc graph,
//! and every predicate is probed for conservativity.

use std::process::ExitCode;

use anyhow::Result;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use satcover::{
    brute_force_cover, build_arc_graph, check_conservative, forward_cover, gen, ssd_cover, Adjacency,
    ConservativityReport, DigitalPath, PredicateSpec,
};

use crate::VerifyArgs;

fn random_path(rng: &mut ChaCha8Rng, max_points: usize) -> DigitalPath {
    loop {
        let adjacency = if rng.random_bool(0.5) { Adjacency::Four } else { Adjacency::Eight };
        let closed = rng.random_bool(0.5);
        let n = rng.random_range(1..=max_points);
        let path = match rng.random_range(0..3) {
            0 if closed && adjacency == Adjacency::Eight => gen::digital_circle(rng.random_range(1..=16)),
            1 if !closed && adjacency == Adjacency::Eight => {
                let b = rng.random_range(1..=9);
                gen::digitized_line(n, rng.random_range(0..=b), b, rng.random_range(0..b))
            }
            _ => gen::random_walk(rng, n, adjacency, closed),
        };
        if path.len() <= max_points {
            return path;
        }
    }
}

fn suite(args: &VerifyArgs) -> Vec<PredicateSpec> {
    match &args.predicate {
        Some(name) => vec![args.params.iter().fold(PredicateSpec::new(name), |s, (k, v)| s.with(k, *v))],
        None => vec![
            PredicateSpec::dss(),
            PredicateSpec::max_len(3),
            PredicateSpec::x_monotone(),
            PredicateSpec::y_monotone(),
            PredicateSpec::bbox(3, 3),
        ],
    }
}

/// First violation of one invariant, with enough context to replay it.
struct Violation {
    invariant: usize,
    message: String,
}

const INVARIANTS: [&str; 4] = ["oracle equivalence", "segment bound and distinct middles", "proper arc graph", "conservativity"];

fn check_cover_invariants(path: &DigitalPath, spec: &PredicateSpec) -> Result<Vec<Violation>> {
    let predicate = spec.build()?;
    let dump = || format!("predicate {spec}, path {}", path.to_json());
    let mut found = Vec::new();
    let (ssd, fwd, brute) = match (
        ssd_cover(path, predicate.as_ref()),
        forward_cover(path, predicate.as_ref()),
        brute_force_cover(path, predicate.as_ref()),
    ) {
        (Ok(a), Ok(b), Ok(c)) => (a, b, c),
        (a, b, c) => {
            let err = [a.err(), b.err(), c.err()].into_iter().flatten().next().expect("one cover failed");
            found.push(Violation { invariant: 0, message: format!("{err}; {}", dump()) });
            return Ok(found);
        }
    };
    if ssd.segments != brute.segments || fwd.segments != brute.segments {
        let show = |c: &satcover::SaturatedCover| c.segments.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" ");
        found.push(Violation {
            invariant: 0,
            message: format!("ssd [{}] forward [{}] brute [{}]; {}", show(&ssd), show(&fwd), show(&brute), dump()),
        });
    }
    let mut middles = ssd.middles();
    middles.sort_unstable();
    middles.dedup();
    if ssd.len() > path.len() || middles.len() != ssd.len() {
        found.push(Violation { invariant: 1, message: format!("{} segments, {} distinct middles; {}", ssd.len(), middles.len(), dump()) });
    }
    let g = build_arc_graph(&ssd);
    if !g.proper || g.interval == path.is_closed() {
        found.push(Violation { invariant: 2, message: format!("proper={} interval={}; {}", g.proper, g.interval, dump()) });
    }
    Ok(found)
}

pub fn run(args: &VerifyArgs) -> Result<ExitCode> {
    let max_points = args.max_points as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let paths: Vec<DigitalPath> = (0..args.paths).map(|_| random_path(&mut rng, max_points)).collect();
    let specs = suite(args);
    for spec in &specs {
        spec.build()?;
    }
    let cases: Vec<(&DigitalPath, &PredicateSpec)> = paths.iter().flat_map(|p| specs.iter().map(move |s| (p, s))).collect();
    let results = cases
        .par_iter()
        .map(|(p, s)| check_cover_invariants(p, s))
        .collect::<Result<Vec<_>>>()?;
    let mut first: [Option<String>; 4] = Default::default();
    let mut counts = [0usize; 4];
    for v in results.into_iter().flatten() {
        counts[v.invariant] += 1;
        first[v.invariant].get_or_insert(v.message);
    }
    for spec in &specs {
        let predicate = spec.build()?;
        if let ConservativityReport::Fail { trial, counterexample } = check_conservative(predicate.as_ref(), &paths, args.trials, args.seed) {
            counts[3] += 1;
            first[3].get_or_insert(format!(
                "predicate {spec} at trial {trial}: holds on {} but not on {}; path {}",
                counterexample.outer,
                counterexample.inner,
                counterexample.path.to_json()
            ));
        }
    }
    let names: Vec<String> = specs.iter().map(|s| s.to_string()).collect();
    println!("verify: seed {}, {} paths of at most {max_points} points, predicates: {}", args.seed, paths.len(), names.join("; "));
    for (i, name) in INVARIANTS.iter().enumerate() {
        match &first[i] {
            None => println!("[PASS] {name}"),
            Some(dump) => println!("[FAIL] {name}: {} violation(s); first: {dump}", counts[i]),
        }
    }
    Ok(if counts.iter().all(|&c| c == 0) { ExitCode::SUCCESS } else { ExitCode::FAILURE })
}
