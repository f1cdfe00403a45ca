//! Images of small arcs under words, tracked through lifts.
//!
//! A [`Tracked`] arc keeps the lifted images of a left endpoint, a marked
//! interior point and a right endpoint. Integer shifts keep the marked point
//! in `[0, 1)`; the endpoints stay on the same sheet of the lift, so the
//! width and the one-sided reach from the marked point are exact.

use std::collections::HashSet;

use crate::circle::{normalize, Arc};
use crate::generators::Generator;
use crate::semigroup::IfsSystem;
use crate::symbolic::Word;

#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Tracked {
    pub lo: f64,
    pub mid: f64,
    pub hi: f64,
}

impl Tracked {
    pub fn around(center: f64, radius: f64) -> Self {
        Tracked::renormalized(center - radius, center, center + radius)
    }

    pub fn from_arc(a: &Arc) -> Self {
        let s = a.start.value();
        Tracked::renormalized(s, s + 0.5 * a.length, s + a.length)
    }

    /// Sides longer than a full turn are clamped; the clamped arc is still
    /// full and its images stay full.
    #[inline]
    fn renormalized(lo: f64, mid: f64, hi: f64) -> Self {
        let m = normalize(mid);
        Tracked { lo: m + (lo - mid).clamp(-1.0, 1.0), mid: m, hi: m + (hi - mid).clamp(-1.0, 1.0) }
    }

    #[inline]
    pub fn apply(&self, g: &Generator) -> Self {
        Tracked::renormalized(g.lift(self.lo), g.lift(self.mid), g.lift(self.hi))
    }

    pub fn apply_word(&self, ifs: &IfsSystem, w: &Word) -> Self {
        w.letters().iter().fold(*self, |t, &l| t.apply(ifs.generator(l)))
    }

    #[inline]
    pub fn width(&self) -> f64 {
        (self.hi - self.lo).abs()
    }

    pub fn arc(&self) -> Arc {
        Arc::new(self.lo.min(self.hi), self.width().min(1.0))
    }

    /// Diameter of the image arc, capped at the antipodal distance.
    #[inline]
    pub fn diameter(&self) -> f64 {
        self.width().min(0.5)
    }

    /// Largest distance from the marked point's image to the image of a
    /// point on one side of it.
    #[inline]
    pub fn reach(&self) -> f64 {
        (self.hi - self.mid).abs().max((self.mid - self.lo).abs()).min(0.5)
    }

    /// Cell of the marked point and dyadic class of the width. Cells are
    /// centered on multiples of `cell`, so net points sit mid-cell.
    fn coarse_key(&self, cell: f64) -> (i64, i64, i64) {
        let class = if self.width() >= 1.0 { 64 } else { (self.width() / cell).log2().floor().max(-8.0) as i64 };
        let cells = (1.0 / cell).round().max(1.0) as i64;
        (((self.mid / cell).round() as i64).rem_euclid(cells), class, 1)
    }

    /// Marked point and both sides at resolution 1e-12.
    fn exact_key(&self) -> (i64, i64, i64) {
        const SCALE: f64 = 1e12;
        let q = |v: f64| (v * SCALE).round() as i64;
        (crate::circle::dedup_key(self.mid), q(self.lo - self.mid), q(self.hi - self.mid))
    }
}

/// Which states count as the same node during a breadth-first search.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) enum Dedup {
    /// Same image arc and same image of the marked point.
    ArcAndMark,
    /// Image of the marked point in an already reached cell of the given
    /// width, with an image arc of comparable width. Prunes aggressively;
    /// witnesses found are still exact words.
    Coarse(f64),
}

#[derive(Clone, Copy, Debug)]
struct Node {
    state: Tracked,
    parent: u32,
    letter: u16,
}

/// Search statistics reported with negative verdicts.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub(crate) struct SearchStats {
    pub examined: usize,
    pub depth_reached: usize,
}

/// Breadth-first tree of image arcs; node 0 is the starting arc.
pub(crate) struct ArcTree {
    nodes: Vec<Node>,
    pub stats: SearchStats,
}

impl ArcTree {
    /// Expands words breadth-first (smallest letter first) from `root`,
    /// calling `visit` on every new node of length at least one until it
    /// returns `true` or `depth`/`budget` is exhausted.
    pub fn search(
        ifs: &IfsSystem,
        root: Tracked,
        depth: usize,
        budget: usize,
        dedup: Dedup,
        mut visit: impl FnMut(usize, &Tracked) -> bool,
    ) -> ArcTree {
        let mut tree = ArcTree { nodes: vec![Node { state: root, parent: 0, letter: 0 }], stats: SearchStats::default() };
        let mut seen: HashSet<(i64, i64, i64)> = HashSet::new();
        let mut frontier = 0..1usize;
        'outer: for level in 1..=depth {
            if frontier.is_empty() {
                break;
            }
            let begin = tree.nodes.len();
            for idx in frontier.clone() {
                let state = tree.nodes[idx].state;
                for (gi, g) in ifs.generators().iter().enumerate() {
                    let next = state.apply(g);
                    let key = match dedup {
                        Dedup::Coarse(cell) => next.coarse_key(cell),
                        Dedup::ArcAndMark => next.exact_key(),
                    };
                    if !seen.insert(key) {
                        continue;
                    }
                    tree.nodes.push(Node { state: next, parent: idx as u32, letter: gi as u16 + 1 });
                    tree.stats.examined += 1;
                    tree.stats.depth_reached = level;
                    if visit(tree.nodes.len() - 1, &next) || tree.stats.examined >= budget {
                        break 'outer;
                    }
                }
            }
            frontier = begin..tree.nodes.len();
        }
        tree
    }

    pub fn word(&self, mut idx: usize) -> Word {
        let mut letters = Vec::new();
        while idx != 0 {
            letters.push(self.nodes[idx].letter);
            idx = self.nodes[idx].parent as usize;
        }
        letters.reverse();
        Word::new(letters)
    }

    pub fn state(&self, idx: usize) -> Tracked {
        self.nodes[idx].state
    }
}

/// Tracks which points of the uniform net lie within `pad` of a union of arcs.
pub(crate) struct NetCover {
    n: usize,
    hit: Vec<bool>,
    remaining: usize,
}

impl NetCover {
    pub fn new(n: usize) -> Self {
        NetCover { n, hit: vec![false; n], remaining: n }
    }

    pub fn is_complete(&self) -> bool {
        self.remaining == 0
    }

    /// Net indices still uncovered, in order.
    pub fn uncovered(&self) -> Vec<usize> {
        (0..self.n).filter(|&i| !self.hit[i]).collect()
    }

    /// Marks net points within `pad` of `arc`; returns how many were new.
    pub fn mark(&mut self, arc: &Arc, pad: f64) -> usize {
        let n = self.n as f64;
        let span = arc.length + 2.0 * pad;
        let mut fresh = 0;
        let mut take = |i: usize, hit: &mut Vec<bool>| {
            if !hit[i] {
                hit[i] = true;
                fresh += 1;
            }
        };
        if span >= 1.0 {
            for i in 0..self.n {
                take(i, &mut self.hit);
            }
        } else {
            const SLACK: f64 = 1e-12;
            let a = arc.start.value() - pad - SLACK;
            let first = (a * n - 0.5).ceil() as i64;
            let last = ((a + span + 2.0 * SLACK) * n - 0.5).floor() as i64;
            for j in first..=last {
                take(j.rem_euclid(self.n as i64) as usize, &mut self.hit);
            }
        }
        self.remaining -= fresh;
        fresh
    }
}
