//! Synthetic paths: random walks, digitized lines and digital circles.

use rand::seq::IndexedRandom;
use rand::Rng;

use crate::path::{is_adjacent, Adjacency, DigitalPath, GridPoint};

fn step_toward(from: GridPoint, to: GridPoint, adjacency: Adjacency) -> GridPoint {
    let dx = (to.x - from.x).signum();
    let dy = (to.y - from.y).signum();
    match adjacency {
        Adjacency::Eight => GridPoint::new(from.x + dx, from.y + dy),
        _ => {
            if (to.x - from.x).abs() >= (to.y - from.y).abs() {
                GridPoint::new(from.x + dx, from.y)
            } else {
                GridPoint::new(from.x, from.y + dy)
            }
        }
    }
}

/// A random walk with `n_points` points.
///
/// For 4- and 8-adjacency the steps are uniform unit steps, so points may
/// repeat non-consecutively. For `IndexOnly` the points are drawn in an 8x8
/// box, consecutive points distinct. Closed 4/8 walks are completed by a
/// greedy route back to the first point, so they may be longer than
/// `n_points`; closed paths always have at least two points.
pub fn random_walk<R: Rng + ?Sized>(
    rng: &mut R,
    n_points: usize,
    adjacency: Adjacency,
    closed: bool,
) -> DigitalPath {
    let n_points = n_points.max(if closed { 2 } else { 1 });
    let mut pts = vec![GridPoint::new(0, 0)];
    match adjacency {
        Adjacency::IndexOnly => {
            while pts.len() < n_points {
                let p = GridPoint::new(rng.random_range(0..8), rng.random_range(0..8));
                let last = *pts.last().unwrap();
                let closing = closed && pts.len() + 1 == n_points && p == pts[0];
                if p != last && !closing {
                    pts.push(p);
                }
            }
        }
        _ => {
            let steps = adjacency.offsets();
            while pts.len() < n_points {
                let &(dx, dy) = steps.choose(rng).unwrap();
                let last = *pts.last().unwrap();
                pts.push(GridPoint::new(last.x + dx, last.y + dy));
            }
            if closed {
                let origin = pts[0];
                loop {
                    let last = *pts.last().unwrap();
                    if last == origin {
                        pts.pop();
                    } else if is_adjacent(last, origin, adjacency) {
                        break;
                    } else {
                        pts.push(step_toward(last, origin, adjacency));
                    }
                }
                if pts.len() < 2 {
                    let &(dx, dy) = steps.choose(rng).unwrap();
                    pts.push(GridPoint::new(origin.x + dx, origin.y + dy));
                }
            }
        }
    }
    DigitalPath::new(pts, closed, adjacency).expect("generated walk is a valid path")
}

/// The 8-connected digitization `(x, floor((a*x + c) / b))` for `x` in `0..n`,
/// with `0 <= a <= b`.
pub fn digitized_line(n: usize, a: i64, b: i64, c: i64) -> DigitalPath {
    assert!(0 <= a && a <= b && b > 0, "slope must lie in [0, 1]");
    let pts = (0..n as i64).map(|x| GridPoint::new(x, (a * x + c).div_euclid(b))).collect();
    DigitalPath::open(pts, Adjacency::Eight).expect("digitized line is 8-connected")
}

/// The closed 8-connected digital circle of the given radius (midpoint
/// algorithm), traversed clockwise from `(0, radius)`.
pub fn digital_circle(radius: i64) -> DigitalPath {
    assert!(radius >= 1);
    let mut octant = Vec::new();
    let (mut x, mut y, mut d) = (0i64, radius, 1 - radius);
    while x <= y {
        octant.push((x, y));
        if d < 0 {
            d += 2 * x + 3;
        } else {
            d += 2 * (x - y) + 5;
            y -= 1;
        }
        x += 1;
    }
    type Octant = fn(i64, i64) -> (i64, i64);
    let maps: [Octant; 8] = [
        |x, y| (x, y),
        |x, y| (y, x),
        |x, y| (y, -x),
        |x, y| (x, -y),
        |x, y| (-x, -y),
        |x, y| (-y, -x),
        |x, y| (-y, x),
        |x, y| (-x, y),
    ];
    let mut pts: Vec<GridPoint> = Vec::with_capacity(8 * octant.len());
    for (k, map) in maps.iter().enumerate() {
        let mut push = |&(x, y): &(i64, i64)| {
            let p: GridPoint = map(x, y).into();
            if pts.last() != Some(&p) {
                pts.push(p);
            }
        };
        if k % 2 == 0 {
            octant.iter().for_each(&mut push);
        } else {
            octant.iter().rev().for_each(&mut push);
        }
    }
    while pts.len() > 1 && pts.last() == pts.first() {
        pts.pop();
    }
    DigitalPath::closed(pts, Adjacency::Eight).expect("midpoint circle is 8-connected")
}

/// A digital circle with roughly `n_points` points (never fewer than 8).
pub fn circle_with_points(n_points: usize) -> DigitalPath {
    // an 8-connected circle of radius r has about 4 * sqrt(2) * r points
    let radius = ((n_points as f64) / (4.0 * std::f64::consts::SQRT_2)).round().max(1.0) as i64;
    digital_circle(radius)
}
