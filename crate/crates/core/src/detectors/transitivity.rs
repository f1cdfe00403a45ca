use serde::{Deserialize, Serialize};

use super::{test_arcs, Property, Resolution, SearchBounds, Verdict, Witness};
use crate::circle::{arc_gap, net, Arc, CirclePoint};
use crate::exec;
use crate::semigroup::IfsSystem;
use crate::symbolic::Word;
use crate::track::{ArcTree, Dedup, NetCover, Tracked};

const UNCOVERED_LIMIT: usize = 16;

/// Words whose images of the test arc at `center` jointly come within the
/// cover padding of every net point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArcCover {
    pub center: CirclePoint,
    pub words: Vec<Word>,
    pub examined: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverFailure {
    pub center: CirclePoint,
    pub uncovered: Vec<CirclePoint>,
    pub bounds: SearchBounds,
}

pub(crate) struct CoverSearch {
    pub covered: bool,
    /// Tree indices of the words that covered new net points, in order.
    pub members: Vec<usize>,
    pub uncovered: Vec<usize>,
    pub tree: ArcTree,
}

/// Words whose marked point lands in an already reached cell are pruned;
/// a cell is a quarter of the smaller of the padding and the test radius.
pub(crate) fn cover_dedup(res: &Resolution, pad: f64) -> Dedup {
    Dedup::Coarse(0.25 * pad.min(res.r))
}

/// Breadth-first search from `root`, keeping each word whose image newly
/// covers a net point, until the whole net is covered.
pub(crate) fn cover_search(ifs: &IfsSystem, root: Tracked, res: &Resolution, pad: f64) -> CoverSearch {
    let mut cover = NetCover::new(res.net_size);
    let mut members = Vec::new();
    let tree = ArcTree::search(ifs, root, res.depth, res.budget, cover_dedup(res, pad), |idx, state| {
        if cover.mark(&state.arc(), pad) > 0 {
            members.push(idx);
        }
        cover.is_complete()
    });
    CoverSearch { covered: cover.is_complete(), members, uncovered: cover.uncovered(), tree }
}

/// For every test arc `U`, the union of its images comes within `r` of
/// every net point, so every radius-`r` arc `V` on the net is met.
pub fn topological_transitivity_verdict(ifs: &IfsSystem, res: &Resolution) -> Verdict {
    arc_covers(ifs, res, res.r, Property::TopologicalTransitivity)
}

/// For every test arc `U`, finitely many images cover the circle up to `eps`.
pub fn s_transitivity_verdict(ifs: &IfsSystem, res: &Resolution) -> Verdict {
    arc_covers(ifs, res, res.eps, Property::STransitivity)
}

fn arc_covers(ifs: &IfsSystem, res: &Resolution, pad: f64, property: Property) -> Verdict {
    let arcs = test_arcs(res);
    let grid = net(res.net_size);
    let outcomes = exec::map(&arcs, |(c, _)| {
        let s = cover_search(ifs, Tracked::around(c.value(), res.r), res, pad);
        let words: Vec<Word> = s.members.iter().map(|&i| s.tree.word(i)).collect();
        let failure = (!s.covered).then(|| CoverFailure {
            center: *c,
            uncovered: s.uncovered.iter().take(UNCOVERED_LIMIT).map(|&i| grid[i]).collect(),
            bounds: res.bounds(s.tree.stats.examined, s.tree.stats.depth_reached),
        });
        (ArcCover { center: *c, words, examined: s.tree.stats.examined }, failure)
    });
    let mut per_arc = Vec::with_capacity(outcomes.len());
    let mut failure = None;
    for (cover, fail) in outcomes {
        per_arc.push(cover);
        if failure.is_none() {
            failure = fail;
        }
    }
    let holds = failure.is_none();
    Verdict::new(property, holds, *res, Witness::ArcCovers { radius: res.r, pad, per_arc, failure })
}

/// Recomputes the images of `Arc::centered(center, radius)` under `words`
/// with the generators' own arc maps and checks that every point of the
/// `net_size` net lies within `pad` of one of them.
pub fn replay_arc_cover(
    ifs: &IfsSystem,
    center: CirclePoint,
    radius: f64,
    words: &[Word],
    pad: f64,
    net_size: usize,
) -> bool {
    let images: Vec<Arc> = words
        .iter()
        .map(|w| {
            w.letters()
                .iter()
                .fold(Arc::centered(center.value(), radius), |a, &l| ifs.generator(l).map_arc(&a))
        })
        .collect();
    net(net_size).into_iter().all(|p| {
        images.iter().any(|a| a.contains(p) || arc_gap(a, &Arc::new(p.value(), 0.0)) <= pad + 1e-9)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::Generator;

    fn golden() -> f64 {
        (5f64.sqrt() - 1.0) / 2.0
    }

    #[test]
    fn rotation_flip_is_transitive_with_replayable_covers() {
        let ifs = IfsSystem::new(vec![Generator::rotation(golden()), Generator::flip()]).unwrap();
        let res = Resolution::default();
        let v = s_transitivity_verdict(&ifs, &res);
        assert!(v.holds);
        let Witness::ArcCovers { per_arc, .. } = &v.witness else { panic!() };
        for c in per_arc.iter().step_by(17) {
            assert!(replay_arc_cover(&ifs, c.center, res.r, &c.words, res.eps, res.net_size));
        }
    }

    #[test]
    fn rational_rotation_is_not_transitive() {
        let ifs = IfsSystem::new(vec![Generator::rotation(0.25)]).unwrap();
        let v = topological_transitivity_verdict(&ifs, &Resolution::default());
        assert!(!v.holds);
        let Witness::ArcCovers { failure: Some(f), .. } = &v.witness else { panic!() };
        assert!(!f.uncovered.is_empty());
        assert_eq!(f.bounds.examined, 4);
    }
}
