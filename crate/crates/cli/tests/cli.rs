use std::path::PathBuf;
use std::process::{Command, Output};

use ifs_lab::circle::circ_dist;
use ifs_lab::detectors::{replay_arc_cover, Property, Witness};
use ifs_lab::gallery::{build_example, GalleryParams};
use ifs_lab_cli::report::{Report, SCHEMA};

fn ifs_lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ifs-lab")).args(args).output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn read_report(path: &PathBuf) -> Report {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn rotation_flip_analysis() {
    let out = scratch("rotation_flip.json");
    let o = ifs_lab(&[
        "analyze",
        "--gallery",
        "rotation_flip",
        "--props",
        "transitivity,sensitivity",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let report = read_report(&out);
    assert_eq!(report.schema, SCHEMA);
    let holds: Vec<(Property, bool)> = report.properties.iter().map(|p| (p.name, p.verdict.holds)).collect();
    assert_eq!(holds, vec![(Property::TopologicalTransitivity, true), (Property::Sensitivity, false)]);

    let ifs = build_example("rotation_flip", &GalleryParams::default()).unwrap().system;
    let Witness::ArcCovers { radius, pad, per_arc, .. } = &report.properties[0].verdict.witness else {
        panic!("transitivity without covers");
    };
    for c in per_arc {
        assert!(replay_arc_cover(&ifs, c.center, *radius, &c.words, *pad, 100));
    }
    let Witness::Sensitivity(s) = &report.properties[1].verdict.witness else {
        panic!("sensitivity without its report");
    };
    for sep in &s.per_point {
        let d = circ_dist(ifs.compose_word(&sep.best_word, sep.x), ifs.compose_word(&sep.best_word, sep.best_partner_y));
        assert!((d - sep.separation).abs() <= 1e-10);
    }
}

#[test]
fn system_file_rotation_is_minimal() {
    let sys = scratch("golden.json");
    std::fs::write(&sys, r#"{"generators":[{"type":"rotation","alpha":"0.6180339887498949"}]}"#).unwrap();
    let out = scratch("golden_report.json");
    let o = ifs_lab(&[
        "analyze",
        "--system",
        sys.to_str().unwrap(),
        "--props",
        "minimality",
        "--depth",
        "200",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(read_report(&out).properties[0].verdict.holds);
}

#[test]
fn expanding_cofinite_window() {
    let out = scratch("prop35.json");
    let o = ifs_lab(&[
        "analyze",
        "--gallery",
        "prop35_expanding",
        "--props",
        "cofinite_sensitivity",
        "--delta",
        "0.2",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let report = read_report(&out);
    let v = &report.properties[0].verdict;
    let Witness::Cofinite(w) = &v.witness else { panic!("cofinite verdict without its witness") };
    assert!(v.holds);
    assert!(w.worst_time.unwrap() <= 6);
}

#[test]
fn verify_exit_codes() {
    assert_eq!(ifs_lab(&["verify", "--gallery", "rotation_flip"]).status.code(), Some(0));
    assert_eq!(ifs_lab(&["verify", "--gallery", "prop35_expanding"]).status.code(), Some(0));
    // a rational rotation breaks transitivity
    let o = ifs_lab(&["verify", "--gallery", "rotation_flip", "--alpha", "0.25"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL"), "{}", stdout(&o));
    assert_eq!(ifs_lab(&["verify", "--gallery", "unknown_name"]).status.code(), Some(2));
}

#[test]
fn detector_errors_exit_3() {
    let o = ifs_lab(&["analyze", "--gallery", "prop35_expanding", "--props", "strong_transitivity"]);
    assert_eq!(o.status.code(), Some(3));
    let o = ifs_lab(&["analyze", "--gallery", "ex42_hinges", "--props", "expanding"]);
    assert_eq!(o.status.code(), Some(0), "a grid offset avoids the hinge kinks");
}

#[test]
fn malformed_input_exits_2() {
    let bad = scratch("bad.json");
    std::fs::write(&bad, "{\"generators\": [{\"type\": \"rotation\", \"alpha\": 0.1, \"beta\": 2}]}").unwrap();
    let o = ifs_lab(&["analyze", "--system", bad.to_str().unwrap(), "--props", "minimality"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("beta") && err.contains("line"), "{err}");

    let o = ifs_lab(&["analyze", "--gallery", "rotation_flip", "--props", "minimality,chaos"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("chaos"));

    let o = ifs_lab(&["analyze", "--gallery", "rotation_flip", "--props", "minimality", "--eps", "-1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn report_round_trip() {
    let out = scratch("round_trip.json");
    let o = ifs_lab(&[
        "analyze",
        "--gallery",
        "thm34_ns_rotation",
        "--props",
        "repelling_fixed_point,sensitivity,local_expanding",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    let report: Report = serde_json::from_str(&text).unwrap();
    let again = serde_json::to_string_pretty(&report).unwrap() + "\n";
    assert_eq!(again, text);
    assert_eq!(serde_json::from_str::<Report>(&again).unwrap(), report);
}

#[test]
fn thread_count_does_not_change_reports() {
    let run = |threads: &str| {
        let out = scratch(&format!("threads_{threads}.json"));
        let o = ifs_lab(&[
            "analyze",
            "--gallery",
            "cor33_morse_smale",
            "--props",
            "strong_transitivity,s_transitivity,sensitivity,local_expanding",
            "--threads",
            threads,
            "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
        std::fs::read(out).unwrap()
    };
    assert_eq!(run("1"), run("8"));
}
