use super::{LetterFixedPoint, Property, Resolution, Verdict, Witness};
use crate::circle::{is_eps_dense, largest_gap, CirclePoint};
use crate::generators::{FixedPointClass, FIXED_POINT_TOL};
use crate::semigroup::IfsSystem;

/// Fixed points of words up to `max_len` are `eps`-dense, or some word acts
/// as the identity so that every point is periodic.
pub fn periodic_points_verdict(ifs: &IfsSystem, res: &Resolution, max_len: usize) -> Verdict {
    let periodic = ifs.periodic_points(max_len, FIXED_POINT_TOL);
    let values: Vec<f64> = periodic.points.iter().map(|p| p.point.value()).collect();
    let everywhere = !periodic.identity_words.is_empty();
    let holds = everywhere || is_eps_dense(&values, res.eps);
    let uncovered = if holds { None } else { largest_gap(&values).map(|g| g.midpoint()).or(Some(CirclePoint::new(0.0))) };
    let caveat = if everywhere {
        format!("the word {} acts as the identity, so every point is periodic", periodic.identity_words[0])
    } else if holds {
        format!("fixed points of words of length at most {max_len} are eps-dense")
    } else {
        format!("fixed points of words of length at most {max_len} leave a gap wider than 2 eps")
    };
    Verdict::new(Property::DensePeriodicPoints, holds, *res, Witness::PeriodicPoints { periodic, uncovered })
        .with_caveat(caveat)
}

/// Some generator has a repelling fixed point.
pub fn repelling_fixed_point_verdict(ifs: &IfsSystem, res: &Resolution) -> Verdict {
    let records: Vec<LetterFixedPoint> = ifs
        .generator_fixed_points(FIXED_POINT_TOL)
        .into_iter()
        .map(|(letter, record)| LetterFixedPoint { letter, record })
        .collect();
    let holds = records.iter().any(|r| r.record.classification == FixedPointClass::Repelling);
    Verdict::new(Property::RepellingFixedPoint, holds, *res, Witness::FixedPoints { records })
        .with_caveat("decided from one-sided multipliers of isolated generator fixed points")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::Generator;

    #[test]
    fn flip_pairs_make_every_point_periodic() {
        let ifs = IfsSystem::new(vec![Generator::rotation(0.3), Generator::flip()]).unwrap();
        let v = periodic_points_verdict(&ifs, &Resolution::default(), 2);
        assert!(v.holds);
    }

    #[test]
    fn north_south_has_two_periodic_points() {
        let ifs = IfsSystem::new(vec![Generator::north_south(0.0, 2.0).unwrap()]).unwrap();
        let v = periodic_points_verdict(&ifs, &Resolution::default(), 3);
        assert!(!v.holds);
        let Witness::PeriodicPoints { periodic, uncovered } = &v.witness else { panic!() };
        assert_eq!(periodic.points.len(), 2);
        assert!(uncovered.is_some());
        assert!(repelling_fixed_point_verdict(&ifs, &Resolution::default()).holds);
    }
}
