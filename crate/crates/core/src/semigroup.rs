//! The iterated function system: word composition, orbits and periodic points.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::circle::{dedup_key, normalize, CirclePoint};
use crate::error::{IfsError, Result};
use crate::generators::{lift_fixed_points, FixedPointRecord, Generator, LiftFixedPoints};
use crate::symbolic::{enumerate_words, Word};

/// An ordered, finite family of generators; letter `i` is `generators[i - 1]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IfsSystem {
    generators: Vec<Generator>,
}

impl IfsSystem {
    pub fn new(generators: Vec<Generator>) -> Result<Self> {
        if generators.is_empty() {
            return Err(IfsError::InvalidParameter("a system needs at least one generator".into()));
        }
        if generators.len() > u16::MAX as usize {
            return Err(IfsError::InvalidParameter("too many generators".into()));
        }
        Ok(IfsSystem { generators })
    }

    pub fn k(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    /// The generator named by a 1-based letter.
    #[inline]
    pub fn generator(&self, letter: u16) -> &Generator {
        &self.generators[letter as usize - 1]
    }

    pub fn all_invertible(&self) -> bool {
        self.generators.iter().all(Generator::is_invertible)
    }

    /// Only rotations and flips.
    pub fn is_isometric(&self) -> bool {
        self.generators.iter().all(|g| g.as_isometry().is_some())
    }

    pub fn check_word(&self, w: &Word) -> Result<()> {
        match w.letters().iter().find(|&&l| l as usize > self.k()) {
            Some(l) => Err(IfsError::InvalidParameter(format!("letter {l} outside alphabet 1..{}", self.k()))),
            None => Ok(()),
        }
    }

    /// The system generated by the inverse maps, in the same letter order.
    pub fn inverse_system(&self) -> Result<IfsSystem> {
        let generators = self.generators.iter().map(Generator::inverse).collect::<Result<Vec<_>>>()?;
        IfsSystem::new(generators)
    }

    fn require_invertible(&self) -> Result<()> {
        match self.generators.iter().find(|g| !g.is_invertible()) {
            Some(g) => Err(IfsError::NonInvertible(g.to_string())),
            None => Ok(()),
        }
    }

    /// Applies the letters of `w` left to right. The lift value is carried
    /// between letters with only its integer part removed, which is exact,
    /// so e.g. a flip applied twice returns its argument bit for bit.
    pub fn compose_word(&self, w: &Word, x: CirclePoint) -> CirclePoint {
        let v = w.letters().iter().fold(x.value(), |y, &l| {
            let z = self.generator(l).lift(y);
            z - z.trunc()
        });
        CirclePoint::new(v)
    }

    /// The composed lift of `w` on the real line.
    pub fn word_lift(&self, w: &Word, x: f64) -> f64 {
        w.letters().iter().fold(x, |y, &l| self.generator(l).lift(y))
    }

    /// Degree of the composed map.
    pub fn word_degree(&self, w: &Word) -> i64 {
        w.letters().iter().map(|&l| self.generator(l).degree()).product()
    }

    /// Chain-rule derivative of `w` at `x`.
    pub fn word_derivative(&self, w: &Word, x: CirclePoint) -> Result<f64> {
        let mut y = x;
        let mut d = 1.0;
        for &l in w.letters() {
            let g = self.generator(l);
            d *= g.derivative(y)?;
            y = g.eval(y);
        }
        Ok(d)
    }

    /// Applies the inverse word: `compose_word(w, inverse_word(w, x)) == x`.
    pub fn inverse_word(&self, w: &Word, x: CirclePoint) -> Result<CirclePoint> {
        let mut y = x;
        for &l in w.letters().iter().rev() {
            y = self.generator(l).eval_inverse(y)?;
        }
        Ok(y)
    }

    /// `w` composed symbolically when every letter is an isometry.
    pub fn word_isometry(&self, w: &Word) -> Option<(i8, f64)> {
        let mut acc = (1i8, 0.0f64);
        for &l in w.letters() {
            let (s, b) = self.generator(l).as_isometry()?;
            acc = (s * acc.0, s as f64 * acc.1 + b);
        }
        Some(acc)
    }

    /// Fixed points of every generator, tagged with their letter.
    pub fn generator_fixed_points(&self, tol: f64) -> Vec<(u16, FixedPointRecord)> {
        self.generators
            .iter()
            .enumerate()
            .flat_map(|(i, g)| g.fixed_points(tol).into_iter().map(move |r| (i as u16 + 1, r)))
            .collect()
    }

    pub fn forward_orbit(&self, x: CirclePoint, depth: usize, cap: usize) -> OrbitSet {
        OrbitTree::grow(self, x, depth, cap, |_| false).into_set(Direction::Forward, depth)
    }

    /// Points `T^-1(x)`; each witness is the word `T` with `T(point) = x`.
    pub fn backward_orbit(&self, x: CirclePoint, depth: usize, cap: usize) -> Result<OrbitSet> {
        self.require_invertible()?;
        let inv = self.inverse_system()?;
        let mut set = OrbitTree::grow(&inv, x, depth, cap, |_| false).into_set(Direction::Backward, depth);
        for p in &mut set.points {
            p.word = p.word.reversed();
        }
        Ok(set)
    }

    /// Fixed points of every word of length `1..=max_len`, keeping the
    /// shortest witness per point. Words acting as the identity are listed
    /// separately since they fix every point.
    pub fn periodic_points(&self, max_len: usize, tol: f64) -> PeriodicPoints {
        let mut points: Vec<PeriodicPoint> = Vec::new();
        let mut identity_words = Vec::new();
        let breaks: Vec<f64> = self.generators.iter().flat_map(Generator::breakpoints).collect();
        for w in enumerate_words(self.k(), max_len, usize::MAX).skip(1) {
            let found = match self.word_isometry(&w) {
                Some((1, shift)) => {
                    if (shift - shift.round()).abs() <= tol {
                        LiftFixedPoints::Identity
                    } else {
                        LiftFixedPoints::Points(Vec::new())
                    }
                }
                // x = -x + b has the two solutions b/2 and b/2 + 1/2
                Some((_, shift)) => {
                    let mut v = vec![normalize(shift / 2.0), normalize(shift / 2.0 + 0.5)];
                    v.sort_by(f64::total_cmp);
                    LiftFixedPoints::Points(v)
                }
                None => {
                    // kinks of later letters are left to the sampling grid
                    lift_fixed_points(|x| self.word_lift(&w, x), &breaks, tol)
                }
            };
            match found {
                LiftFixedPoints::Identity => identity_words.push(w),
                LiftFixedPoints::Points(roots) => {
                    for r in roots {
                        let p = CirclePoint::new(r);
                        let dup = points.iter().any(|q| crate::circle::circ_dist(q.point, p) <= tol.max(1e-12));
                        if !dup {
                            points.push(PeriodicPoint { point: p, word: w.clone() });
                        }
                    }
                }
            }
        }
        points.sort_by(|a, b| a.point.value().total_cmp(&b.point.value()));
        PeriodicPoints { max_len, points, identity_words }
    }
}

pub fn compose_word(ifs: &IfsSystem, w: &Word, x: CirclePoint) -> CirclePoint {
    ifs.compose_word(w, x)
}

pub fn word_derivative(ifs: &IfsSystem, w: &Word, x: CirclePoint) -> Result<f64> {
    ifs.word_derivative(w, x)
}

pub fn forward_orbit(ifs: &IfsSystem, x: CirclePoint, depth: usize, cap: usize) -> OrbitSet {
    ifs.forward_orbit(x, depth, cap)
}

pub fn backward_orbit(ifs: &IfsSystem, x: CirclePoint, depth: usize, cap: usize) -> Result<OrbitSet> {
    ifs.backward_orbit(x, depth, cap)
}

pub fn periodic_points(ifs: &IfsSystem, max_len: usize, tol: f64) -> PeriodicPoints {
    ifs.periodic_points(max_len, tol)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Forward,
    Backward,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitPoint {
    pub point: CirclePoint,
    pub word: Word,
}

/// A finite piece of an orbit, sorted by point value.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrbitSet {
    pub base: CirclePoint,
    pub direction: Direction,
    pub depth: usize,
    pub points: Vec<OrbitPoint>,
}

impl OrbitSet {
    pub fn values(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.point.value()).collect()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeriodicPoint {
    pub point: CirclePoint,
    pub word: Word,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeriodicPoints {
    pub max_len: usize,
    pub points: Vec<PeriodicPoint>,
    pub identity_words: Vec<Word>,
}

/// Breadth-first orbit with parent links, deduplicated at 1e-12.
pub(crate) struct OrbitTree {
    pub values: Vec<f64>,
    parent: Vec<u32>,
    letter: Vec<u16>,
    pub base: CirclePoint,
    pub depth_reached: usize,
}

impl OrbitTree {
    /// Expands level by level; `stop` is consulted after each level.
    pub fn grow(
        ifs: &IfsSystem,
        x: CirclePoint,
        depth: usize,
        cap: usize,
        mut stop: impl FnMut(&OrbitTree) -> bool,
    ) -> OrbitTree {
        let mut tree = OrbitTree { values: vec![x.value()], parent: vec![0], letter: vec![0], base: x, depth_reached: 0 };
        let mut seen: HashSet<i64> = HashSet::from([dedup_key(x.value())]);
        let cap = cap.max(1);
        let mut frontier = 0..1usize;
        for level in 1..=depth {
            if tree.values.len() >= cap || frontier.is_empty() || stop(&tree) {
                break;
            }
            let begin = tree.values.len();
            'level: for idx in frontier.clone() {
                let v = tree.values[idx];
                for (gi, g) in ifs.generators().iter().enumerate() {
                    let y = normalize(g.lift(v));
                    if seen.insert(dedup_key(y)) {
                        tree.values.push(y);
                        tree.parent.push(idx as u32);
                        tree.letter.push(gi as u16 + 1);
                        if tree.values.len() >= cap {
                            break 'level;
                        }
                    }
                }
            }
            tree.depth_reached = level;
            frontier = begin..tree.values.len();
        }
        tree
    }

    pub fn word(&self, mut idx: usize) -> Word {
        let mut letters = Vec::new();
        while idx != 0 {
            letters.push(self.letter[idx]);
            idx = self.parent[idx] as usize;
        }
        letters.reverse();
        Word::new(letters)
    }

    pub fn into_set(self, direction: Direction, depth: usize) -> OrbitSet {
        let mut points: Vec<OrbitPoint> = (0..self.values.len())
            .map(|i| OrbitPoint { point: CirclePoint::new(self.values[i]), word: self.word(i) })
            .collect();
        points.sort_by(|a, b| a.point.value().total_cmp(&b.point.value()));
        OrbitSet { base: self.base, direction, depth, points }
    }
}
