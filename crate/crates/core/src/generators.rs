//! Primitive circle maps, evaluated through their lifts to the real line.
//!
//! Every generator carries a lift `L: R -> R` with `L(x + 1) = L(x) + degree`.
//! Evaluation on the circle is the lift reduced mod 1; images of arcs and
//! fixed points are read off the lift directly.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::circle::{circ_dist, normalize, raw_dist, Arc, CirclePoint};
use crate::error::{IfsError, Result};

/// Default bisection tolerance for fixed points.
pub const FIXED_POINT_TOL: f64 = 1e-12;

const ROOT_GRID: usize = 2048;

/// A primitive map of the circle.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Generator {
    /// `x -> x + alpha`.
    Rotation { alpha: f64 },
    /// `x -> -x`.
    Flip,
    /// Tangent-conjugated Möbius map repelling at `q` with multiplier
    /// `lambda`, attracting at `q + 1/2` with multiplier `1 / lambda`.
    NorthSouth { q: CirclePoint, lambda: f64 },
    /// Piecewise-linear homeomorphism given by lift breakpoints over one period.
    PiecewiseLinear { breakpoints: Vec<(f64, f64)> },
    /// `x -> m x`.
    Expanding { m: u32 },
}

impl Generator {
    pub fn rotation(alpha: f64) -> Self {
        Generator::Rotation { alpha }
    }

    pub fn flip() -> Self {
        Generator::Flip
    }

    pub fn north_south(q: f64, lambda: f64) -> Result<Self> {
        if !(lambda.is_finite() && lambda > 1.0) {
            return Err(IfsError::InvalidParameter(format!(
                "north-south multiplier must exceed 1, got {lambda}"
            )));
        }
        Ok(Generator::NorthSouth { q: CirclePoint::new(q), lambda })
    }

    /// Breakpoints `(x_i, y_i)` of the lift over `[x_0, x_0 + 1]`.
    ///
    /// The `x_i` must increase with total span one, and the `y_i` must be
    /// strictly monotone with total change `+1` or `-1`.
    pub fn piecewise_linear(breakpoints: Vec<(f64, f64)>) -> Result<Self> {
        let bad = |msg: &str| Err(IfsError::InvalidParameter(format!("piecewise-linear map: {msg}")));
        if breakpoints.len() < 2 {
            return bad("needs at least two breakpoints");
        }
        if breakpoints.iter().any(|(x, y)| !x.is_finite() || !y.is_finite()) {
            return bad("breakpoints must be finite");
        }
        if breakpoints.windows(2).any(|w| w[1].0 <= w[0].0) {
            return bad("x coordinates must be strictly increasing");
        }
        let (first, last) = (breakpoints[0], breakpoints[breakpoints.len() - 1]);
        if (last.0 - first.0 - 1.0).abs() > 1e-12 {
            return bad("x coordinates must span exactly one period");
        }
        let rise = last.1 - first.1;
        let increasing = breakpoints.windows(2).all(|w| w[1].1 > w[0].1);
        let decreasing = breakpoints.windows(2).all(|w| w[1].1 < w[0].1);
        if !((increasing && (rise - 1.0).abs() <= 1e-12) || (decreasing && (rise + 1.0).abs() <= 1e-12)) {
            return bad("lift must be strictly monotone with lift(x + 1) = lift(x) +/- 1");
        }
        Ok(Generator::PiecewiseLinear { breakpoints })
    }

    pub fn expanding(m: u32) -> Result<Self> {
        if m < 2 {
            return Err(IfsError::InvalidParameter(format!("expanding degree must be at least 2, got {m}")));
        }
        Ok(Generator::Expanding { m })
    }

    /// Topological degree: `L(x + 1) - L(x)`.
    pub fn degree(&self) -> i64 {
        match self {
            Generator::Rotation { .. } | Generator::NorthSouth { .. } => 1,
            Generator::Flip => -1,
            Generator::PiecewiseLinear { breakpoints } => {
                if breakpoints[breakpoints.len() - 1].1 > breakpoints[0].1 {
                    1
                } else {
                    -1
                }
            }
            Generator::Expanding { m } => *m as i64,
        }
    }

    pub fn is_invertible(&self) -> bool {
        !matches!(self, Generator::Expanding { .. })
    }

    /// Rotations and flips as `x -> sign * x + shift`.
    pub fn as_isometry(&self) -> Option<(i8, f64)> {
        match self {
            Generator::Rotation { alpha } => Some((1, *alpha)),
            Generator::Flip => Some((-1, 0.0)),
            _ => None,
        }
    }

    /// The lift evaluated at a real number.
    #[inline]
    pub fn lift(&self, x: f64) -> f64 {
        match self {
            Generator::Rotation { alpha } => x + alpha,
            Generator::Flip => -x,
            Generator::NorthSouth { q, lambda } => {
                let u = x - q.value();
                let n = u.round();
                let s = PI * (u - n);
                q.value() + n + (lambda * s.sin()).atan2(s.cos()) / PI
            }
            Generator::PiecewiseLinear { breakpoints } => pl_lift(breakpoints, x),
            Generator::Expanding { m } => *m as f64 * x,
        }
    }

    pub fn eval(&self, x: CirclePoint) -> CirclePoint {
        CirclePoint::new(self.lift(x.value()))
    }

    /// The inverse map as a generator of the same family.
    pub fn inverse(&self) -> Result<Generator> {
        Ok(match self {
            Generator::Rotation { alpha } => Generator::Rotation { alpha: -alpha },
            Generator::Flip => Generator::Flip,
            // conjugating by a half turn inverts the tangent model
            Generator::NorthSouth { q, lambda } => Generator::NorthSouth { q: q.antipode(), lambda: *lambda },
            Generator::PiecewiseLinear { breakpoints } => {
                let mut swapped: Vec<(f64, f64)> = breakpoints.iter().map(|&(x, y)| (y, x)).collect();
                if swapped[0].0 > swapped[swapped.len() - 1].0 {
                    swapped.reverse();
                }
                Generator::PiecewiseLinear { breakpoints: swapped }
            }
            Generator::Expanding { .. } => return Err(IfsError::NonInvertible(self.to_string())),
        })
    }

    pub fn eval_inverse(&self, y: CirclePoint) -> Result<CirclePoint> {
        Ok(self.inverse()?.eval(y))
    }

    /// Signed derivative of the lift.
    pub fn derivative(&self, x: CirclePoint) -> Result<f64> {
        match self {
            Generator::Rotation { .. } => Ok(1.0),
            Generator::Flip => Ok(-1.0),
            Generator::NorthSouth { q, lambda } => {
                let s = PI * (x.value() - q.value());
                let (sin, cos) = s.sin_cos();
                Ok(lambda / (cos * cos + lambda * lambda * sin * sin))
            }
            Generator::PiecewiseLinear { .. } => {
                let (left, right) = self.one_sided_derivatives(x);
                if left == right {
                    Ok(left)
                } else {
                    Err(IfsError::NotDifferentiable { at: x.value(), left, right })
                }
            }
            Generator::Expanding { m } => Ok(*m as f64),
        }
    }

    /// Left and right derivatives; equal except at piecewise-linear breakpoints.
    pub fn one_sided_derivatives(&self, x: CirclePoint) -> (f64, f64) {
        match self {
            Generator::PiecewiseLinear { breakpoints } => {
                let slopes: Vec<f64> =
                    breakpoints.windows(2).map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0)).collect();
                let nseg = slopes.len();
                let x0 = breakpoints[0].0;
                let s = x0 + normalize(x.value() - x0);
                // breakpoints 0..nseg, the last coincides with the first mod 1
                if let Some(i) = breakpoints[..nseg].iter().position(|b| normalize(b.0) == normalize(s)) {
                    let left = slopes[(i + nseg - 1) % nseg];
                    return (left, slopes[i]);
                }
                let seg = breakpoints.partition_point(|b| b.0 <= s).clamp(1, nseg) - 1;
                (slopes[seg], slopes[seg])
            }
            _ => {
                let d = self.derivative(x).expect("smooth generator");
                (d, d)
            }
        }
    }

    /// Breakpoint locations reduced mod 1 (empty for smooth maps).
    pub fn breakpoints(&self) -> Vec<f64> {
        match self {
            Generator::PiecewiseLinear { breakpoints } => {
                breakpoints[..breakpoints.len() - 1].iter().map(|b| normalize(b.0)).collect()
            }
            _ => Vec::new(),
        }
    }

    /// Image of an arc, computed from the lift at its endpoints.
    pub fn map_arc(&self, a: &Arc) -> Arc {
        let s = a.start.value();
        let l0 = self.lift(s);
        let l1 = self.lift(s + a.length);
        if l1 >= l0 {
            Arc::new(l0, (l1 - l0).min(1.0))
        } else {
            Arc::new(l1, (l0 - l1).min(1.0))
        }
    }

    /// All isolated fixed points with their classification and a basin estimate.
    pub fn fixed_points(&self, tol: f64) -> Vec<FixedPointRecord> {
        let extra = self.breakpoints();
        let roots = match lift_fixed_points(|x| self.lift(x), &extra, tol) {
            LiftFixedPoints::Identity => return Vec::new(),
            LiftFixedPoints::Points(r) => r,
        };
        roots
            .into_iter()
            .map(|x| {
                // snap onto a breakpoint so one-sided slopes are read correctly
                let x = extra.iter().copied().find(|&b| raw_dist(b, x) <= 1e-9).unwrap_or(x);
                let location = CirclePoint::new(x);
                let (left, right) = self.one_sided_derivatives(location);
                let classification = FixedPointClass::from_multipliers(left, right, tol);
                let basin_estimate = self.basin(location, classification);
                FixedPointRecord { location, one_sided_multipliers: (left, right), classification, basin_estimate }
            })
            .collect()
    }

    fn basin(&self, p: CirclePoint, class: FixedPointClass) -> Arc {
        let step: Box<dyn Fn(f64) -> f64 + '_> = match class {
            FixedPointClass::Attracting => Box::new(move |x| self.lift(x)),
            FixedPointClass::Repelling => match self.inverse() {
                Ok(inv) => Box::new(move |x| inv.lift(x)),
                Err(_) => {
                    // the contracting branch of x -> m x that fixes p
                    let m = self.degree() as f64;
                    let pv = p.value();
                    Box::new(move |x| {
                        let near = pv + (x - pv - (x - pv).round());
                        pv + (near - pv) / m
                    })
                }
            },
            _ => return Arc::new(p.value(), 0.0),
        };
        let side = |sign: f64| {
            let converges = |rho: f64| {
                let mut x = p.value() + sign * rho;
                for _ in 0..10_000 {
                    x = normalize(step(x));
                    if raw_dist(x, p.value()) < 1e-9 {
                        return true;
                    }
                }
                false
            };
            let (mut lo, mut hi) = (0.0, 0.5);
            if converges(hi) {
                return hi;
            }
            for _ in 0..48 {
                let mid = 0.5 * (lo + hi);
                if converges(mid) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            lo
        };
        let (left, right) = (side(-1.0), side(1.0));
        Arc::new(p.value() - left, left + right)
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Rotation { alpha } => write!(f, "rotation({alpha})"),
            Generator::Flip => write!(f, "flip"),
            Generator::NorthSouth { q, lambda } => write!(f, "north_south(q={q}, lambda={lambda})"),
            Generator::PiecewiseLinear { breakpoints } => write!(f, "piecewise_linear({breakpoints:?})"),
            Generator::Expanding { m } => write!(f, "expanding({m})"),
        }
    }
}

fn pl_lift(points: &[(f64, f64)], x: f64) -> f64 {
    let (x0, y0) = points[0];
    let deg = (points[points.len() - 1].1 - y0).round();
    let shift = (x - x0).floor();
    let s = x - shift;
    let nseg = points.len() - 1;
    let i = points.partition_point(|b| b.0 <= s).clamp(1, nseg) - 1;
    let ((xa, ya), (xb, yb)) = (points[i], points[i + 1]);
    ya + (yb - ya) * (s - xa) / (xb - xa) + shift * deg
}

/// Dynamical type of a fixed point, from the absolute one-sided multipliers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FixedPointClass {
    Attracting,
    Repelling,
    Semistable,
    Nonhyperbolic,
}

impl FixedPointClass {
    pub fn from_multipliers(left: f64, right: f64, tol: f64) -> Self {
        let (l, r) = (left.abs(), right.abs());
        let unit = tol.max(1e-9);
        if (l - 1.0).abs() <= unit || (r - 1.0).abs() <= unit {
            FixedPointClass::Nonhyperbolic
        } else if l > 1.0 && r > 1.0 {
            FixedPointClass::Repelling
        } else if l < 1.0 && r < 1.0 {
            FixedPointClass::Attracting
        } else {
            FixedPointClass::Semistable
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixedPointRecord {
    pub location: CirclePoint,
    pub one_sided_multipliers: (f64, f64),
    pub classification: FixedPointClass,
    /// Verified part of the stable (attracting) or unstable (repelling) set.
    pub basin_estimate: Arc,
}

pub(crate) enum LiftFixedPoints {
    /// `L(x) - x` is a constant integer: every point is fixed.
    Identity,
    Points(Vec<f64>),
}

/// Roots of `L(x) - x - m` over all integer branches `m`, by sign changes on
/// a grid followed by bisection. Roots are reduced mod 1 and deduplicated.
pub(crate) fn lift_fixed_points(lift: impl Fn(f64) -> f64, extra: &[f64], tol: f64) -> LiftFixedPoints {
    let mut xs: Vec<f64> = (0..=ROOT_GRID).map(|i| i as f64 / ROOT_GRID as f64).collect();
    xs.extend(extra.iter().map(|&b| normalize(b)));
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    let fs: Vec<f64> = xs.iter().map(|&x| lift(x) - x).collect();
    let lo = fs.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = fs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi - lo <= tol {
        return if (lo - lo.round()).abs() <= tol {
            LiftFixedPoints::Identity
        } else {
            LiftFixedPoints::Points(Vec::new())
        };
    }
    let mut roots = Vec::new();
    for m in (lo.floor() as i64)..=(hi.ceil() as i64) {
        let m = m as f64;
        for i in 0..xs.len() - 1 {
            let (a, b) = (fs[i] - m, fs[i + 1] - m);
            if a.abs() <= tol {
                roots.push(xs[i]);
            } else if a * b < 0.0 && b.abs() > tol {
                let (mut l, mut r) = (xs[i], xs[i + 1]);
                let sign_l = a.signum();
                while r - l > tol {
                    let mid = 0.5 * (l + r);
                    let v = lift(mid) - mid - m;
                    if v == 0.0 {
                        l = mid;
                        r = mid;
                        break;
                    }
                    if v.signum() == sign_l {
                        l = mid;
                    } else {
                        r = mid;
                    }
                }
                roots.push(0.5 * (l + r));
            }
        }
    }
    let mut roots: Vec<f64> = roots.into_iter().map(normalize).collect();
    roots.sort_by(f64::total_cmp);
    let merge = (1e3 * tol).max(1e-12);
    let mut out: Vec<f64> = Vec::with_capacity(roots.len());
    for r in roots {
        if out.last().is_none_or(|&last| raw_dist(last, r) > merge) {
            out.push(r);
        }
    }
    if out.len() > 1 && raw_dist(out[0], out[out.len() - 1]) <= merge {
        out.pop();
    }
    LiftFixedPoints::Points(out)
}

/// Convenience wrapper: `g(x)` for a generator.
pub fn eval_map(g: &Generator, x: CirclePoint) -> CirclePoint {
    g.eval(x)
}

pub fn eval_inverse(g: &Generator, y: CirclePoint) -> Result<CirclePoint> {
    g.eval_inverse(y)
}

pub fn eval_derivative(g: &Generator, x: CirclePoint) -> Result<f64> {
    g.derivative(x)
}

pub fn map_arc(g: &Generator, a: &Arc) -> Arc {
    g.map_arc(a)
}

pub fn fixed_points(g: &Generator, tol: f64) -> Vec<FixedPointRecord> {
    g.fixed_points(tol)
}

/// Distance from `g(x)` to `x`; zero exactly at fixed points.
pub fn displacement(g: &Generator, x: CirclePoint) -> f64 {
    circ_dist(g.eval(x), x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    const GOLDEN: f64 = 0.618_033_988_749_894_8;

    fn p(v: f64) -> CirclePoint {
        CirclePoint::new(v)
    }

    fn gallery_like() -> Vec<Generator> {
        vec![
            Generator::rotation(GOLDEN),
            Generator::flip(),
            Generator::north_south(0.0, 2.0).unwrap(),
            Generator::north_south(0.3, 1.8).unwrap(),
            Generator::piecewise_linear(vec![(0.0, 0.0), (0.5, 0.6), (1.0, 1.0)]).unwrap(),
            Generator::piecewise_linear(vec![(0.1, 0.9), (0.4, 0.2), (1.1, -0.1)]).unwrap(),
            Generator::expanding(2).unwrap(),
            Generator::expanding(3).unwrap(),
        ]
    }

    #[test]
    fn eval_examples() {
        assert_abs_diff_eq!(Generator::rotation(0.25).eval(p(0.9)).value(), 0.15, epsilon = 1e-15);
        assert_abs_diff_eq!(Generator::flip().eval(p(0.3)).value(), 0.7, epsilon = 1e-15);
        assert_eq!(Generator::north_south(0.0, 2.0).unwrap().eval(p(0.0)).value(), 0.0);
    }

    #[test]
    fn inverse_examples() {
        let r = Generator::rotation(0.25);
        assert_abs_diff_eq!(r.eval_inverse(p(0.15)).unwrap().value(), 0.9, epsilon = 1e-15);
        assert_eq!(Generator::flip().inverse().unwrap(), Generator::flip());
        assert!(matches!(
            Generator::expanding(2).unwrap().eval_inverse(p(0.1)),
            Err(IfsError::NonInvertible(_))
        ));
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(Generator::rotation(0.3).derivative(p(0.77)).unwrap(), 1.0);
        assert_eq!(Generator::expanding(2).unwrap().derivative(p(0.4)).unwrap(), 2.0);
        let ns = Generator::north_south(0.0, 2.0).unwrap();
        let h = 1e-7;
        let fd = (ns.lift(h) - ns.lift(-h)) / (2.0 * h);
        assert_abs_diff_eq!(fd, 2.0, epsilon = 1e-5);
        assert_abs_diff_eq!(ns.derivative(p(0.0)).unwrap(), 2.0, epsilon = 1e-15);
        assert_abs_diff_eq!(ns.derivative(p(0.5)).unwrap(), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn breakpoints_are_not_differentiable() {
        let h = Generator::piecewise_linear(vec![(0.0, 0.0), (0.5, 0.6), (1.0, 1.0)]).unwrap();
        match h.derivative(p(0.5)) {
            Err(IfsError::NotDifferentiable { left, right, .. }) => {
                assert_abs_diff_eq!(left, 1.2, epsilon = 1e-12);
                assert_abs_diff_eq!(right, 0.8, epsilon = 1e-12);
            }
            other => panic!("expected NotDifferentiable, got {other:?}"),
        }
        assert!(h.derivative(p(0.0)).is_err());
        assert_abs_diff_eq!(h.derivative(p(0.25)).unwrap(), 1.2, epsilon = 1e-12);
    }

    #[test]
    fn map_arc_examples() {
        let a = Generator::rotation(0.25).map_arc(&Arc::new(0.1, 0.1));
        assert_abs_diff_eq!(a.start.value(), 0.35, epsilon = 1e-15);
        assert_abs_diff_eq!(a.length, 0.1, epsilon = 1e-15);
        let a = Generator::flip().map_arc(&Arc::new(0.1, 0.1));
        assert_abs_diff_eq!(a.start.value(), 0.8, epsilon = 1e-15);
        assert_abs_diff_eq!(a.length, 0.1, epsilon = 1e-15);
        let a = Generator::expanding(2).unwrap().map_arc(&Arc::new(0.4, 0.2));
        assert_abs_diff_eq!(a.start.value(), 0.8, epsilon = 1e-15);
        assert_abs_diff_eq!(a.length, 0.4, epsilon = 1e-15);
        let a = Generator::expanding(3).unwrap().map_arc(&Arc::new(0.1, 0.5));
        assert!(a.is_full());
    }

    #[test]
    fn fixed_point_examples() {
        assert!(Generator::rotation(GOLDEN).fixed_points(FIXED_POINT_TOL).is_empty());

        let ns = Generator::north_south(0.0, 2.0).unwrap().fixed_points(FIXED_POINT_TOL);
        assert_eq!(ns.len(), 2);
        assert_abs_diff_eq!(ns[0].location.value(), 0.0, epsilon = 1e-12);
        assert_eq!(ns[0].classification, FixedPointClass::Repelling);
        assert_abs_diff_eq!(ns[0].one_sided_multipliers.0, 2.0, epsilon = 1e-9);
        assert_abs_diff_eq!(ns[1].location.value(), 0.5, epsilon = 1e-12);
        assert_eq!(ns[1].classification, FixedPointClass::Attracting);
        assert_abs_diff_eq!(ns[1].one_sided_multipliers.1, 0.5, epsilon = 1e-9);
        // basins are the circle minus the other fixed point
        assert!(ns[0].basin_estimate.length > 0.99);
        assert!(ns[1].basin_estimate.length > 0.99);

        let flip = Generator::flip().fixed_points(FIXED_POINT_TOL);
        let locs: Vec<f64> = flip.iter().map(|r| r.location.value()).collect();
        assert_eq!(locs, vec![0.0, 0.5]);
        assert!(flip.iter().all(|r| r.classification == FixedPointClass::Nonhyperbolic));
    }

    #[test]
    fn shifted_north_south_fixed_points() {
        let g = Generator::north_south(0.3, 1.5).unwrap();
        let fps = g.fixed_points(FIXED_POINT_TOL);
        assert_eq!(fps.len(), 2);
        assert_abs_diff_eq!(fps[0].location.value(), 0.3, epsilon = 1e-11);
        assert_abs_diff_eq!(fps[1].location.value(), 0.8, epsilon = 1e-11);
        assert_eq!(fps[0].classification, FixedPointClass::Repelling);
    }

    #[test]
    fn hinge_fixed_point_is_semistable() {
        let h = Generator::piecewise_linear(vec![(0.0, 0.0), (0.5, 0.6), (1.0, 1.0)]).unwrap();
        let fps = h.fixed_points(FIXED_POINT_TOL);
        assert_eq!(fps.len(), 1);
        assert_eq!(fps[0].location.value(), 0.0);
        assert_eq!(fps[0].classification, FixedPointClass::Semistable);
        assert_eq!(fps[0].basin_estimate.length, 0.0);
    }

    #[test]
    fn expanding_fixed_points() {
        let fps = Generator::expanding(3).unwrap().fixed_points(FIXED_POINT_TOL);
        let locs: Vec<f64> = fps.iter().map(|r| r.location.value()).collect();
        assert_eq!(locs, vec![0.0, 0.5]);
        assert!(fps.iter().all(|r| r.classification == FixedPointClass::Repelling));
    }

    #[test]
    fn invalid_parameters_are_rejected() {
        assert!(Generator::north_south(0.0, 1.0).is_err());
        assert!(Generator::expanding(1).is_err());
        assert!(Generator::piecewise_linear(vec![(0.0, 0.0), (0.5, 0.4), (1.0, 0.9)]).is_err());
        assert!(Generator::piecewise_linear(vec![(0.0, 0.0), (0.5, 0.7), (0.9, 1.0)]).is_err());
        assert!(Generator::piecewise_linear(vec![(0.0, 0.0), (0.5, -0.2), (1.0, 1.0)]).is_err());
    }

    #[test]
    fn north_south_inverse_is_half_turn_conjugate() {
        let g = Generator::north_south(0.5, 1.8).unwrap();
        let inv = g.inverse().unwrap();
        for i in 0..200 {
            let x = -2.0 + i as f64 * 0.0213;
            assert_abs_diff_eq!(inv.lift(g.lift(x)), x, epsilon = 1e-12);
        }
    }

    fn any_generator() -> impl Strategy<Value = Generator> {
        (0..8usize).prop_map(|i| gallery_like()[i].clone())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn round_trip_through_inverse(g in any_generator(), x in 0.0..1.0f64) {
            prop_assume!(g.is_invertible());
            let x = p(x);
            let back = g.eval_inverse(g.eval(x)).unwrap();
            prop_assert!(circ_dist(back, x) <= 1e-12);
        }

        #[test]
        fn lift_is_equivariant(g in any_generator(), x in -3.0..3.0f64) {
            let d = g.degree() as f64;
            prop_assert!((g.lift(x + 1.0) - g.lift(x) - d).abs() <= 1e-12);
            prop_assert!(circ_dist(g.eval(p(x)), p(g.lift(x))) <= 1e-12);
        }

        #[test]
        fn derivative_matches_central_difference(g in any_generator(), x in 0.0..1.0f64) {
            let h = 1e-6;
            prop_assume!(g.breakpoints().iter().all(|&b| raw_dist(b, x) > 2.0 * h));
            let fd = (g.lift(x + h) - g.lift(x - h)) / (2.0 * h);
            let d = g.derivative(p(x)).unwrap();
            prop_assert!((fd - d).abs() <= 1e-4, "{} vs {}", fd, d);
        }

        #[test]
        fn arc_images_contain_net_images(g in any_generator(), s in 0.0..1.0f64, len in 0.0..0.6f64) {
            let a = Arc::new(s, len);
            let img = g.map_arc(&a);
            for x in a.subnet(100) {
                let y = g.eval(x);
                prop_assert!(img.contains(y) || circ_dist(y, img.start) <= 1e-12 || circ_dist(y, img.end()) <= 1e-12);
            }
            if g.is_invertible() {
                let (e0, e1) = (g.eval(a.start), g.eval(a.end()));
                let ends = [img.start, img.end()];
                prop_assert!(ends.iter().any(|&e| circ_dist(e, e0) <= 1e-12));
                prop_assert!(ends.iter().any(|&e| circ_dist(e, e1) <= 1e-12));
            }
        }
    }
}
