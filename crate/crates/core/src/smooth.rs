//! Derivative conditions: expanding systems, local expanding covers,
//! Lebesgue numbers of arc covers and admissible itineraries.
//!
//! On the circle the norm and co-norm of a derivative are both `|h'(x)|`.

use serde::{Deserialize, Serialize};

use crate::circle::{net, Arc, CirclePoint};
use crate::detectors::{test_points, Resolution};
use crate::error::{IfsError, Result};
use crate::exec;
use crate::semigroup::IfsSystem;
use crate::symbolic::{enumerate_words, Word};

/// Samples per arc when growing a piece.
const GROWTH_SAMPLES: usize = 64;
/// Canonical sub-net used for `sigma_local`; `Arc::subnet(1000)` is a subset.
const SIGMA_SAMPLES: usize = 7993;
const MAX_SIDE: f64 = 0.25;
const MEMBERSHIP_TOL: f64 = 1e-10;
/// Words acting as the identity have `|h'| = 1` up to rounding; an
/// expanding word must beat 1 by this much.
const EXPANSION_MARGIN: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverPiece {
    pub arc: Arc,
    pub word: Word,
    /// Largest `1 / |h'|` over the canonical sub-net of the arc.
    pub sigma_local: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpandingCover {
    /// Sorted by arc start.
    pub pieces: Vec<CoverPiece>,
    pub sigma: f64,
    pub lebesgue: f64,
}

impl ExpandingCover {
    pub fn arcs(&self) -> Vec<Arc> {
        self.pieces.iter().map(|p| p.arc).collect()
    }
}

fn expanding_at(ifs: &IfsSystem, grid: usize, offset: f64) -> Result<(bool, f64)> {
    let mut holds = true;
    let mut eta: f64 = 0.0;
    for g in ifs.generators() {
        for i in 0..grid {
            let d = g.derivative(CirclePoint::new((i as f64 + offset) / grid as f64))?.abs();
            holds &= d > 1.0;
            eta = eta.max(1.0 / d);
        }
    }
    Ok((holds, eta))
}

/// Whether every generator has `|f'| > 1` on the grid `i / grid`, with the
/// largest `1 / |f'|` seen. A grid point on a kink moves the grid by half
/// a step once.
pub fn expanding_verdict(ifs: &IfsSystem, grid: usize) -> Result<(bool, f64)> {
    if grid < 2 {
        return Err(IfsError::InvalidParameter("grid must be at least 2".into()));
    }
    match expanding_at(ifs, grid, 0.0) {
        Err(IfsError::NotDifferentiable { .. }) => expanding_at(ifs, grid, 0.5),
        other => other,
    }
}

fn abs_derivative(ifs: &IfsSystem, w: &Word, x: f64) -> Option<f64> {
    ifs.word_derivative(w, CirclePoint::new(x)).ok().map(f64::abs)
}

fn expands_on(ifs: &IfsSystem, w: &Word, a: f64, b: f64) -> bool {
    (0..GROWTH_SAMPLES).all(|i| {
        let t = a + (b - a) * i as f64 / (GROWTH_SAMPLES - 1) as f64;
        abs_derivative(ifs, w, t).is_some_and(|d| d > 1.0 + EXPANSION_MARGIN)
    })
}

/// Largest `t <= MAX_SIDE` such that the word expands at the samples of
/// `[x, x + sign t]`.
fn grow_side(ifs: &IfsSystem, w: &Word, x: f64, sign: f64) -> f64 {
    let ok = |t: f64| expands_on(ifs, w, x, x + sign * t);
    if ok(MAX_SIDE) {
        return MAX_SIDE;
    }
    let (mut lo, mut hi) = (0.0, MAX_SIDE);
    for _ in 0..40 {
        let mid = 0.5 * (lo + hi);
        if ok(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// `max 1 / |h'|` over the canonical sub-net of `arc`; infinite when a
/// sample is not differentiable.
fn sigma_on(ifs: &IfsSystem, w: &Word, arc: &Arc) -> f64 {
    arc.subnet(SIGMA_SAMPLES)
        .into_iter()
        .map(|p| abs_derivative(ifs, w, p.value()).map_or(f64::INFINITY, |d| 1.0 / d))
        .fold(0.0, f64::max)
}

enum Local {
    Piece(CoverPiece),
    Stuck { point: CirclePoint, best: f64 },
}

fn local_piece(ifs: &IfsSystem, x: CirclePoint, res: &Resolution) -> Local {
    let mut best: f64 = 0.0;
    for w in enumerate_words(ifs.k(), res.depth, res.budget).skip(1) {
        let Some(d) = abs_derivative(ifs, &w, x.value()) else { continue };
        best = best.max(d);
        if d <= 1.0 + EXPANSION_MARGIN {
            continue;
        }
        let (mut left, mut right) = (grow_side(ifs, &w, x.value(), -1.0), grow_side(ifs, &w, x.value(), 1.0));
        for _ in 0..60 {
            let arc = Arc::new(x.value() - left, left + right);
            let sigma = sigma_on(ifs, &w, &arc);
            if sigma < 1.0 {
                return Local::Piece(CoverPiece { arc, word: w, sigma_local: sigma });
            }
            left *= 0.5;
            right *= 0.5;
        }
        // the condition holds at x alone
        let arc = Arc::new(x.value(), 0.0);
        return Local::Piece(CoverPiece { sigma_local: sigma_on(ifs, &w, &arc), arc, word: w });
    }
    Local::Stuck { point: x, best }
}

/// Union of two arcs where one contains the other's start.
fn union(a: &Arc, b: &Arc) -> Option<Arc> {
    let joined = |a: &Arc, b: &Arc| {
        let len = a.length.max(a.offset(b.start) + b.length);
        if len >= 1.0 {
            Arc::full()
        } else {
            Arc::new(a.start.value(), len)
        }
    };
    if a.contains(b.start) {
        Some(joined(a, b))
    } else if b.contains(a.start) {
        Some(joined(b, a))
    } else {
        None
    }
}

fn merge_pieces(ifs: &IfsSystem, mut pieces: Vec<CoverPiece>) -> Vec<CoverPiece> {
    loop {
        let mut merged = None;
        'search: for i in 0..pieces.len() {
            for j in i + 1..pieces.len() {
                if pieces[i].word != pieces[j].word {
                    continue;
                }
                if let Some(arc) = union(&pieces[i].arc, &pieces[j].arc) {
                    let sigma = sigma_on(ifs, &pieces[i].word, &arc);
                    if sigma < 1.0 {
                        merged = Some((i, j, arc, sigma));
                        break 'search;
                    }
                }
            }
        }
        let Some((i, j, arc, sigma)) = merged else { break };
        pieces[i].arc = arc;
        pieces[i].sigma_local = sigma;
        pieces.remove(j);
    }
    pieces.sort_by(|a, b| a.arc.start.value().total_cmp(&b.arc.start.value()).then(b.arc.length.total_cmp(&a.arc.length)));
    pieces
}

/// Finds, around every net point and generator fixed point, the shortest
/// word with `|h'| > 1` there and the widest arc on which it stays
/// expanding; same-word pieces that overlap are merged.
pub fn local_expanding_cover(ifs: &IfsSystem, res: &Resolution) -> Result<ExpandingCover> {
    res.validate()?;
    let points = test_points(ifs, res.net_size);
    let locals = exec::map(&points, |&x| local_piece(ifs, x, res));
    let mut pieces = Vec::with_capacity(locals.len());
    let mut stuck: Option<(CirclePoint, f64)> = None;
    for l in locals {
        match l {
            Local::Piece(p) => pieces.push(p),
            Local::Stuck { point, best } => {
                if stuck.is_none_or(|(_, b)| best < b) {
                    stuck = Some((point, best));
                }
            }
        }
    }
    if let Some((point, best_derivative)) = stuck {
        return Err(IfsError::NotLocallyExpanding { point: point.value(), best_derivative });
    }
    let pieces = merge_pieces(ifs, pieces);
    let arcs: Vec<Arc> = pieces.iter().map(|p| p.arc).collect();
    let lebesgue = lebesgue_number(&arcs, res.net_size)?;
    let sigma = pieces.iter().map(|p| p.sigma_local).fold(0.0, f64::max);
    Ok(ExpandingCover { pieces, sigma, lebesgue })
}

fn ball_inside(arc: &Arc, x: f64, rho: f64) -> bool {
    if arc.is_full() {
        return true;
    }
    2.0 * rho <= arc.length && arc.offset(CirclePoint::new(x - rho)) <= arc.length - 2.0 * rho
}

/// Largest `rho <= 1/2`, to within `1e-9`, such that every ball of radius
/// `rho` centered on the net of size `net_size` lies inside one arc.
pub fn lebesgue_number(cover: &[Arc], net_size: usize) -> Result<f64> {
    let points = net(net_size);
    if let Some(p) = points.iter().find(|&&p| !cover.iter().any(|a| a.contains(p))) {
        return Err(IfsError::NotACover { point: p.value() });
    }
    let fits = |rho: f64| points.iter().all(|p| cover.iter().any(|a| ball_inside(a, p.value(), rho)));
    if fits(0.5) {
        return Ok(0.5);
    }
    let (mut lo, mut hi) = (0.0, 0.5);
    while hi - lo > 1e-9 {
        let mid = 0.5 * (lo + hi);
        if fits(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

fn member(arc: &Arc, p: CirclePoint) -> bool {
    let off = arc.offset(p);
    arc.is_full() || off <= arc.length + MEMBERSHIP_TOL || off >= 1.0 - MEMBERSHIP_TOL
}

/// Indices `w_0, w_1, ...` with `x` in piece `w_0` and each image under the
/// piece's word in the next piece; the smallest index wins ties.
pub fn admissible_itinerary(
    ifs: &IfsSystem,
    cover: &ExpandingCover,
    x: CirclePoint,
    length: usize,
) -> Result<Vec<usize>> {
    if length == 0 {
        return Err(IfsError::InvalidParameter("itinerary length must be at least 1".into()));
    }
    let mut out = Vec::with_capacity(length);
    let mut p = x;
    for _ in 0..length {
        let idx = cover
            .pieces
            .iter()
            .position(|piece| member(&piece.arc, p))
            .ok_or(IfsError::NotACover { point: p.value() })?;
        out.push(idx);
        p = ifs.compose_word(&cover.pieces[idx].word, p);
    }
    Ok(out)
}
