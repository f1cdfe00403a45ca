use serde::{Deserialize, Serialize};

use super::{test_arcs, Property, Resolution, Verdict, Witness};
use crate::circle::{Arc, CirclePoint};
use crate::error::{IfsError, Result};
use crate::exec;
use crate::semigroup::IfsSystem;
use crate::symbolic::Word;
use crate::track::Tracked;

/// Supplies letter `n + 1` of an infinite word from the first `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum ExtensionRule {
    /// The letter whose image arc is widest; ties go to the smallest letter.
    GreedyDiameter,
    Constant { letter: u16 },
    Periodic { word: Word },
}

impl ExtensionRule {
    fn check(&self, ifs: &IfsSystem) -> Result<()> {
        match self {
            ExtensionRule::GreedyDiameter => Ok(()),
            ExtensionRule::Constant { letter } => ifs.check_word(&Word::single(*letter)),
            ExtensionRule::Periodic { word } if word.is_empty() => {
                Err(IfsError::InvalidParameter("periodic rule needs a nonempty word".into()))
            }
            ExtensionRule::Periodic { word } => ifs.check_word(word),
        }
    }
}

/// Diameters of the images of `u` after `0..=horizon` letters of the rule.
fn diameters(ifs: &IfsSystem, u: &Arc, rule: &ExtensionRule, horizon: usize) -> Vec<f64> {
    let mut state = Tracked::from_arc(u);
    let mut out = Vec::with_capacity(horizon + 1);
    out.push(state.diameter());
    for n in 0..horizon {
        state = match rule {
            ExtensionRule::Constant { letter } => state.apply(ifs.generator(*letter)),
            ExtensionRule::Periodic { word } => {
                let letters = word.letters();
                state.apply(ifs.generator(letters[n % letters.len()]))
            }
            ExtensionRule::GreedyDiameter => {
                let mut best = state.apply(&ifs.generators()[0]);
                for g in &ifs.generators()[1..] {
                    let next = state.apply(g);
                    if next.width() > best.width() {
                        best = next;
                    }
                }
                best
            }
        };
        out.push(state.diameter());
    }
    out
}

/// Times `n <= horizon` at which the image of `u` under the first `n`
/// letters of the rule has diameter above `delta`.
pub fn separation_times(
    ifs: &IfsSystem,
    u: &Arc,
    rule: &ExtensionRule,
    delta: f64,
    horizon: usize,
) -> Result<Vec<usize>> {
    rule.check(ifs)?;
    Ok(diameters(ifs, u, rule, horizon)
        .into_iter()
        .enumerate()
        .filter(|&(_, d)| d > delta)
        .map(|(n, _)| n)
        .collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CofiniteArc {
    pub center: CirclePoint,
    pub rule: Option<ExtensionRule>,
    /// Start of the first window of consecutive separation times.
    pub first_time: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CofiniteWitness {
    pub delta: f64,
    pub window: usize,
    pub horizon: usize,
    pub per_arc: Vec<CofiniteArc>,
    /// Largest `first_time` over the arcs, when all succeed.
    pub worst_time: Option<usize>,
}

fn candidate_rules(k: usize) -> Vec<ExtensionRule> {
    let k = k as u16;
    let mut rules = vec![ExtensionRule::GreedyDiameter];
    rules.extend((1..=k).map(|letter| ExtensionRule::Constant { letter }));
    for a in 1..=k {
        for b in 1..=k {
            if a != b {
                rules.push(ExtensionRule::Periodic { word: Word::new(vec![a, b]) });
            }
        }
    }
    rules
}

fn first_window(diam: &[f64], delta: f64, window: usize, latest: usize) -> Option<usize> {
    let mut run_start = None;
    for (n, &d) in diam.iter().enumerate() {
        if d > delta {
            let s = *run_start.get_or_insert(n);
            if n - s >= window {
                return Some(s);
            }
        } else {
            run_start = None;
            if n >= latest {
                return None;
            }
        }
    }
    None
}

/// For every test arc, some extension rule separates it beyond `delta` at
/// every time of a window `[N, N + window]` with `N <= depth`.
pub fn cofinite_sensitivity_verdict(ifs: &IfsSystem, delta: f64, res: &Resolution, window: usize) -> Result<Verdict> {
    if window == 0 {
        return Err(IfsError::InvalidParameter("window must be at least 1".into()));
    }
    if !(delta > 0.0 && delta < 0.5) {
        return Err(IfsError::InvalidParameter(format!("delta must lie in (0, 1/2), got {delta}")));
    }
    let horizon = res.depth + window;
    let rules = candidate_rules(ifs.k());
    let arcs = test_arcs(res);
    let per_arc = exec::map(&arcs, |(c, u)| {
        rules
            .iter()
            .find_map(|rule| {
                first_window(&diameters(ifs, u, rule, horizon), delta, window, res.depth)
                    .map(|n| CofiniteArc { center: *c, rule: Some(rule.clone()), first_time: Some(n) })
            })
            .unwrap_or(CofiniteArc { center: *c, rule: None, first_time: None })
    });
    let holds = per_arc.iter().all(|a| a.first_time.is_some());
    let worst_time = if holds { per_arc.iter().filter_map(|a| a.first_time).max() } else { None };
    let witness = CofiniteWitness { delta, window, horizon, per_arc, worst_time };
    let caveat = if holds {
        format!("separation verified on a window of {window} consecutive times; cofiniteness beyond it is extrapolated")
    } else {
        format!(
            "no rule among {} candidates separated every arc on a window of {window} starting by time {}",
            rules.len(),
            res.depth
        )
    };
    Ok(Verdict::new(Property::CofiniteSensitivity, holds, *res, Witness::Cofinite(witness)).with_caveat(caveat))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::Generator;

    #[test]
    fn doubling_separates_from_four() {
        let ifs = IfsSystem::new(vec![Generator::expanding(2).unwrap()]).unwrap();
        let u = Arc::centered(0.3, 0.01);
        let times = separation_times(&ifs, &u, &ExtensionRule::Constant { letter: 1 }, 0.2, 50).unwrap();
        assert_eq!(times, (4..=50).collect::<Vec<_>>());
    }

    #[test]
    fn windows() {
        let d = [0.0, 0.3, 0.0, 0.3, 0.3, 0.3];
        assert_eq!(first_window(&d, 0.2, 2, 5), Some(3));
        assert_eq!(first_window(&d, 0.2, 3, 5), None);
        assert_eq!(first_window(&d, 0.2, 2, 1), None);
    }

    #[test]
    fn bad_rules_are_rejected() {
        let ifs = IfsSystem::new(vec![Generator::flip()]).unwrap();
        let u = Arc::centered(0.3, 0.01);
        assert!(separation_times(&ifs, &u, &ExtensionRule::Constant { letter: 2 }, 0.1, 5).is_err());
        let empty = ExtensionRule::Periodic { word: Word::identity() };
        assert!(separation_times(&ifs, &u, &empty, 0.1, 5).is_err());
    }
}
