use ifs_lab::analysis::{run_property, AnalysisSettings};
use ifs_lab::circle::{circ_dist, CirclePoint};
use ifs_lab::detectors::{sensitivity_estimate, Property, Resolution, Witness};
use ifs_lab::gallery::{build_example, GalleryParams, GALLERY_NAMES};
use ifs_lab::smooth::{admissible_itinerary, local_expanding_cover};

fn settings_for(point: Option<CirclePoint>) -> AnalysisSettings {
    let mut s = AnalysisSettings::default();
    if let Some(p) = point {
        s.point = p;
    }
    s
}

#[test]
fn manifests_hold_at_default_resolution() {
    for name in GALLERY_NAMES {
        let entry = build_example(name, &GalleryParams::default()).unwrap();
        for e in &entry.expected {
            let v = run_property(&entry.system, e.property, &settings_for(e.point)).unwrap();
            assert_eq!(v.holds, e.holds, "{name}: {}", e.property);
            if let Some(c) = e.constant {
                let got = match &v.witness {
                    Witness::Expanding { eta, .. } => *eta,
                    Witness::Nonminimal(w) => w.delta_candidate,
                    other => panic!("{name}: no constant in {other:?}"),
                };
                assert!((got - c).abs() <= 1e-6, "{name}: {} constant {got}, expected {c}", e.property);
            }
        }
    }
}

#[test]
fn separations_replay() {
    for name in ["thm34_ns_rotation", "cor33_morse_smale"] {
        let ifs = build_example(name, &GalleryParams::default()).unwrap().system;
        let (report, _) = sensitivity_estimate(&ifs, &Resolution::default());
        for s in &report.per_point {
            assert!(circ_dist(s.x, s.best_partner_y) <= s.r + 1e-12);
            let d = circ_dist(ifs.compose_word(&s.best_word, s.x), ifs.compose_word(&s.best_word, s.best_partner_y));
            assert!((d - s.separation).abs() <= 1e-10, "{name} at {}: {d} vs {}", s.x.value(), s.separation);
        }
    }
}

#[test]
fn local_expanding_covers_replay() {
    let res = Resolution::default();
    for name in ["thm34_ns_rotation", "cor33_morse_smale", "ex42_hinges", "prop35_expanding"] {
        let ifs = build_example(name, &GalleryParams::default()).unwrap().system;
        let cover = local_expanding_cover(&ifs, &res).unwrap();
        assert!(cover.sigma < 1.0, "{name}: sigma {}", cover.sigma);
        assert!(cover.lebesgue > 0.0);
        for piece in &cover.pieces {
            for x in piece.arc.subnet(1000) {
                if let Ok(d) = ifs.word_derivative(&piece.word, x) {
                    assert!(d.abs() > 1.0, "{name}: |h'| = {} at {}", d.abs(), x.value());
                }
            }
        }
        for x in [0.0, 0.123, 0.5, 0.777] {
            let it = admissible_itinerary(&ifs, &cover, CirclePoint::new(x), 20).unwrap();
            let mut p = CirclePoint::new(x);
            for &i in &it {
                let arc = cover.pieces[i].arc;
                assert!(arc.contains(p) || circ_dist(p, arc.start) <= 1e-9 || circ_dist(p, arc.end()) <= 1e-9);
                p = ifs.compose_word(&cover.pieces[i].word, p);
            }
        }
    }
}

/// A local expanding cover forces sensitivity.
#[test]
fn local_expanding_implies_sensitivity() {
    let settings = AnalysisSettings::default();
    for name in GALLERY_NAMES {
        let ifs = build_example(name, &GalleryParams::default()).unwrap().system;
        let local = run_property(&ifs, Property::LocalExpanding, &settings).unwrap();
        if local.holds {
            let sens = run_property(&ifs, Property::Sensitivity, &settings).unwrap();
            assert!(sens.holds, "{name} is locally expanding but not sensitive");
        }
    }
}

#[test]
fn hinge_fixed_point_is_isolated_orbit() {
    let ifs = build_example("ex42_hinges", &GalleryParams::default()).unwrap().system;
    let orbit = ifs.forward_orbit(CirclePoint::new(0.0), 10, 1000);
    assert_eq!(orbit.values(), vec![0.0]);
}
