use serde::{Deserialize, Serialize};

use super::{Property, Resolution, SearchBounds, Verdict, Witness};
use crate::circle::{circ_dist, net, normalize, raw_dist, CirclePoint};
use crate::exec;
use crate::generators::{FixedPointClass, FIXED_POINT_TOL};
use crate::semigroup::{IfsSystem, OrbitTree};
use crate::symbolic::Word;
use crate::track::{ArcTree, Dedup, Tracked};

const CAP: f64 = 0.5 - 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchStrategy {
    BreadthFirst,
    RepellerSteered,
}

/// Best separation found for the ball `B(x, r)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointSeparation {
    pub x: CirclePoint,
    pub r: f64,
    pub best_word: Word,
    pub best_partner_y: CirclePoint,
    /// `circ_dist` of the images of `x` and `y` under `best_word`.
    pub separation: f64,
    /// Image arc longer than half a turn; its diameter is capped at 1/2.
    pub capped: bool,
    pub strategy: SearchStrategy,
    pub examined: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LadderStep {
    pub r: f64,
    pub delta_hat: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SensitivityReport {
    /// Minimum over net points of the best separation at the smallest radius.
    pub delta_hat: f64,
    pub r_min: f64,
    pub ladder: Vec<LadderStep>,
    /// Sorted by point, then by decreasing radius.
    pub per_point: Vec<PointSeparation>,
    pub strategy_notes: Vec<String>,
    pub bounds: SearchBounds,
}

/// A repelling fixed point `q` of generator `letter`, with the backward
/// orbit of `q` used to steer test balls onto it.
struct Repeller {
    letter: u16,
    preimages: OrbitTree,
}

fn repellers(ifs: &IfsSystem, res: &Resolution) -> Vec<Repeller> {
    let inverse = ifs.inverse_system().ok();
    ifs.generator_fixed_points(FIXED_POINT_TOL)
        .into_iter()
        .filter(|(_, rec)| rec.classification == FixedPointClass::Repelling)
        .map(|(letter, rec)| {
            // without inverses only q itself is available
            let preimages = match &inverse {
                Some(inv) => OrbitTree::grow(inv, rec.location, res.depth, res.budget, |_| false),
                None => OrbitTree::grow(ifs, rec.location, 0, 1, |_| false),
            };
            Repeller { letter, preimages }
        })
        .collect()
}

struct Candidate {
    word: Word,
    state: Tracked,
    strategy: SearchStrategy,
}

fn steered(ifs: &IfsSystem, x: f64, r: f64, depth: usize, reps: &[Repeller]) -> Option<Candidate> {
    let mut best: Option<Candidate> = None;
    for rep in reps {
        let Some(idx) = rep.preimages.values.iter().position(|&v| raw_dist(v, x) < r * (1.0 - 1e-9)) else {
            continue;
        };
        let t = rep.preimages.word(idx).reversed();
        if t.len() >= depth {
            continue;
        }
        let h = ifs.generator(rep.letter);
        let mut state = Tracked::around(x, r).apply_word(ifs, &t);
        let mut word = t;
        let mut local = Candidate { word: word.clone(), state, strategy: SearchStrategy::RepellerSteered };
        while word.len() < depth {
            state = state.apply(h);
            word.push(rep.letter);
            if state.reach() > local.state.reach() {
                local = Candidate { word: word.clone(), state, strategy: SearchStrategy::RepellerSteered };
            }
            if state.reach() >= CAP {
                break;
            }
        }
        if best.as_ref().is_none_or(|b| local.state.reach() > b.state.reach()) {
            best = Some(local);
        }
    }
    best
}

/// Lifted displacement of the images of `x` and `y` under `w`, kept within
/// one turn so long words do not lose precision.
fn lifted_gap(ifs: &IfsSystem, w: &Word, x: f64, y: f64) -> f64 {
    let (mut a, mut d) = (x, y - x);
    for &l in w.letters() {
        let g = ifs.generator(l);
        let a1 = g.lift(a);
        d = (g.lift(a + d) - a1).clamp(-1.0, 1.0);
        a = normalize(a1);
    }
    d
}

/// Partner on the side of `x` whose image separates furthest, pulled in by
/// bisection when the image of the whole side wraps past the antipode.
fn partner(ifs: &IfsSystem, w: &Word, x: f64, r: f64, state: &Tracked) -> f64 {
    let sign = if (state.hi - state.mid).abs() >= (state.mid - state.lo).abs() { 1.0 } else { -1.0 };
    let gap = |t: f64| lifted_gap(ifs, w, x, x + sign * r * t).abs();
    if gap(1.0) <= 0.5 {
        return normalize(x + sign * r);
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if gap(mid) <= 0.5 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    normalize(x + sign * r * lo)
}

fn separate(ifs: &IfsSystem, x: CirclePoint, r: f64, res: &Resolution, reps: &[Repeller]) -> PointSeparation {
    let xv = x.value();
    let guided = steered(ifs, xv, r, res.depth, reps);
    let root = Tracked::around(xv, r);
    let (plain, examined) = match &guided {
        // a steered word already separates by half a turn
        Some(g) if g.state.reach() >= CAP => (None, 0),
        _ => {
            let target = guided.as_ref().map_or(CAP, |c| c.state.reach().min(CAP));
            let mut best = (0usize, root.reach());
            let tree = ArcTree::search(ifs, root, res.depth, res.budget, Dedup::ArcAndMark, |idx, s| {
                if s.reach() > best.1 {
                    best = (idx, s.reach());
                }
                best.1 >= target
            });
            let c = Candidate { word: tree.word(best.0), state: tree.state(best.0), strategy: SearchStrategy::BreadthFirst };
            (Some(c), tree.stats.examined)
        }
    };
    let chosen = match (guided, plain) {
        (Some(g), Some(p)) => {
            if p.state.reach() > g.state.reach() {
                p
            } else {
                g
            }
        }
        (Some(g), None) => g,
        (None, Some(p)) => p,
        (None, None) => unreachable!("the plain search runs whenever steering is unavailable"),
    };
    let y = partner(ifs, &chosen.word, xv, r, &chosen.state);
    let yp = CirclePoint::new(y);
    let separation = circ_dist(ifs.compose_word(&chosen.word, x), ifs.compose_word(&chosen.word, yp));
    PointSeparation {
        x,
        r,
        best_word: chosen.word,
        best_partner_y: yp,
        separation,
        capped: chosen.state.width() > 0.5,
        strategy: chosen.strategy,
        examined,
    }
}

/// Sensitivity constant estimate over the net and the radius ladder.
///
/// Holds when the estimate at the smallest radius is at least `eps` and
/// exceeds `2 r`, the separation any isometry already produces.
pub fn sensitivity_estimate(ifs: &IfsSystem, res: &Resolution) -> (SensitivityReport, Verdict) {
    let ladder_r = res.radius_ladder();
    let r_min = *ladder_r.last().expect("ladder ends at r");
    let reps = repellers(ifs, res);
    let points = net(res.net_size);
    let rows = exec::map(&points, |&x| {
        ladder_r.iter().map(|&r| separate(ifs, x, r, res, &reps)).collect::<Vec<_>>()
    });
    let per_point: Vec<PointSeparation> = rows.into_iter().flatten().collect();
    let ladder: Vec<LadderStep> = ladder_r
        .iter()
        .map(|&r| LadderStep {
            r,
            delta_hat: per_point.iter().filter(|p| p.r == r).map(|p| p.separation).fold(f64::INFINITY, f64::min),
        })
        .collect();
    let delta_hat = ladder.last().expect("nonempty ladder").delta_hat;
    let steered_count = per_point.iter().filter(|p| p.strategy == SearchStrategy::RepellerSteered).count();
    let mut strategy_notes = vec![format!(
        "{} of {} balls separated best by breadth-first search, {} by repeller steering",
        per_point.len() - steered_count,
        per_point.len(),
        steered_count
    )];
    if reps.is_empty() {
        strategy_notes.push("no generator has a repelling fixed point; steering unavailable".into());
    } else {
        strategy_notes.push(format!("{} repelling generator fixed points used for steering", reps.len()));
    }
    let bounds = SearchBounds {
        depth: res.depth,
        budget: res.budget,
        examined: per_point.iter().map(|p| p.examined).max().unwrap_or(0),
        depth_reached: per_point.iter().map(|p| p.best_word.len()).max().unwrap_or(0),
    };
    let report = SensitivityReport { delta_hat, r_min, ladder, per_point, strategy_notes, bounds };
    let holds = delta_hat >= res.eps && delta_hat > 2.0 * r_min + 1e-9;
    let verdict = Verdict::new(Property::Sensitivity, holds, *res, Witness::Sensitivity(report.clone()));
    (report, verdict)
}
