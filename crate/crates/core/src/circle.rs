//! Points and arcs of the circle `R/Z`, measured in full turns.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Values this close to one are folded onto zero.
const WRAP_EPS: f64 = 1e-15;

/// Reduce a real number into `[0, 1)`.
#[inline]
pub fn normalize(v: f64) -> f64 {
    let r = v - v.floor();
    if r >= 1.0 - WRAP_EPS {
        0.0
    } else {
        r
    }
}

/// A point of the circle, stored as its angle in turns.
#[derive(Clone, Copy, Debug, Default, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(from = "f64", into = "f64")]
pub struct CirclePoint(f64);

impl CirclePoint {
    pub fn new(v: f64) -> Self {
        CirclePoint(normalize(v))
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// The point half a turn away.
    pub fn antipode(self) -> Self {
        CirclePoint::new(self.0 + 0.5)
    }
}

impl From<f64> for CirclePoint {
    fn from(v: f64) -> Self {
        CirclePoint::new(v)
    }
}

impl From<CirclePoint> for f64 {
    fn from(p: CirclePoint) -> f64 {
        p.0
    }
}

impl fmt::Display for CirclePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Arc-length distance on the circle of circumference one.
#[inline]
pub fn circ_dist(a: CirclePoint, b: CirclePoint) -> f64 {
    raw_dist(a.0, b.0)
}

/// Circle distance between two reals, without constructing points.
#[inline]
pub(crate) fn raw_dist(a: f64, b: f64) -> f64 {
    // |a - b| is symmetric and its fractional part exact
    let d = (a - b).abs();
    let d = d - d.floor();
    d.min(1.0 - d)
}

/// A closed counterclockwise arc `[start, start + length]`.
///
/// `length == 1` is the whole circle, `length == 0` a single point.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Arc {
    pub start: CirclePoint,
    pub length: f64,
}

impl Arc {
    pub fn new(start: f64, length: f64) -> Self {
        Arc {
            start: CirclePoint::new(start),
            length: length.clamp(0.0, 1.0),
        }
    }

    /// The closed ball `B(center, radius)`.
    pub fn centered(center: f64, radius: f64) -> Self {
        Arc::new(center - radius, 2.0 * radius)
    }

    pub fn full() -> Self {
        Arc::new(0.0, 1.0)
    }

    pub fn is_full(&self) -> bool {
        self.length >= 1.0
    }

    pub fn end(&self) -> CirclePoint {
        CirclePoint::new(self.start.0 + self.length)
    }

    pub fn midpoint(&self) -> CirclePoint {
        CirclePoint::new(self.start.0 + 0.5 * self.length)
    }

    /// Counterclockwise offset of `p` from the start, in `[0, 1)`.
    #[inline]
    pub fn offset(&self, p: CirclePoint) -> f64 {
        normalize(p.0 - self.start.0)
    }

    pub fn contains(&self, p: CirclePoint) -> bool {
        self.is_full() || self.offset(p) <= self.length
    }

    pub fn intersects(&self, other: &Arc) -> bool {
        self.contains(other.start) || other.contains(self.start)
    }

    /// `n` evenly spaced points including both endpoints.
    pub fn subnet(&self, n: usize) -> Vec<CirclePoint> {
        match n {
            0 => Vec::new(),
            1 => vec![self.midpoint()],
            _ => (0..n)
                .map(|i| CirclePoint::new(self.start.0 + self.length * i as f64 / (n - 1) as f64))
                .collect(),
        }
    }
}

/// Supremum of `circ_dist` over pairs of points of the arc.
pub fn arc_diameter(a: &Arc) -> f64 {
    a.length.min(0.5)
}

/// Infimum of `circ_dist` between points of two arcs; zero when they meet.
pub fn arc_gap(a: &Arc, b: &Arc) -> f64 {
    if a.intersects(b) {
        return 0.0;
    }
    let (a0, a1, b0, b1) = (a.start, a.end(), b.start, b.end());
    [circ_dist(a0, b0), circ_dist(a0, b1), circ_dist(a1, b0), circ_dist(a1, b1)]
        .into_iter()
        .fold(f64::INFINITY, f64::min)
}

/// The uniform net of `n` points with offset `0.5 / n`.
pub fn net(n: usize) -> Vec<CirclePoint> {
    (0..n).map(|i| CirclePoint::new((i as f64 + 0.5) / n as f64)).collect()
}

/// Largest gap between consecutive points of a finite set, as the open
/// arc between them. The empty set has no gap; a singleton leaves the
/// whole circle minus one point.
pub fn largest_gap(values: &[f64]) -> Option<Arc> {
    if values.is_empty() {
        return None;
    }
    let mut sorted: Vec<f64> = values.iter().map(|&v| normalize(v)).collect();
    sorted.sort_by(f64::total_cmp);
    let mut best = Arc::new(sorted[sorted.len() - 1], 1.0 - sorted[sorted.len() - 1] + sorted[0]);
    for w in sorted.windows(2) {
        let len = w[1] - w[0];
        // strict comparison keeps the gap with the smallest start on ties
        if len > best.length || (len == best.length && w[0] < best.start.value()) {
            best = Arc::new(w[0], len);
        }
    }
    Some(best)
}

/// Every point of the circle lies within `eps` of the set.
pub fn is_eps_dense(values: &[f64], eps: f64) -> bool {
    largest_gap(values).is_some_and(|g| g.length <= 2.0 * eps)
}

/// Quantized key used to deduplicate circle values at resolution 1e-12.
#[inline]
pub(crate) fn dedup_key(v: f64) -> i64 {
    const SCALE: f64 = 1e12;
    let k = (normalize(v) * SCALE).round() as i64;
    if k >= SCALE as i64 {
        k - SCALE as i64
    } else {
        k
    }
}
