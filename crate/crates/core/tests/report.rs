mod common;

use std::path::PathBuf;

use oometrics::complexity::{MethodThresholds, Quadrant};
use oometrics::report::{
    analyze_facts, analyze_sources, build_report, emit_kiviat_svg, emit_scatter, load_history, render_text, Config,
    MethodPoint, QualityReport,
};
use oometrics::Error;

const LA: &str = "marf.nlp.Parsing.LexicalAnalyzer";

fn suite_report() -> QualityReport {
    let a = analyze_sources(&[common::fixture("java/suite")]).unwrap();
    build_report(&a, &Config::default(), None, None).unwrap()
}

#[test]
fn json_round_trip_and_determinism() {
    let r = suite_report();
    assert_eq!(r.schema_version, 1);
    assert!(!r.partial);
    let text = r.to_json();
    assert_eq!(QualityReport::from_json(&text).unwrap(), r);
    assert_eq!(suite_report().to_json(), text);
    assert_eq!(render_text(&r), render_text(&suite_report()));
}

#[test]
fn histograms_cover_every_class() {
    let r = suite_report();
    assert_eq!(r.histograms.len(), 5);
    for h in r.histograms.values() {
        assert_eq!(h.counts.values().sum::<u32>() as usize, r.classes.len());
        assert!((h.percentages.values().sum::<f64>() - 100.0).abs() < 1e-9);
    }
}

#[test]
fn wmc_fixture_through_report() {
    let a = analyze_sources(&[common::fixture("java/wmc")]).unwrap();
    let r = build_report(&a, &Config::default(), None, None).unwrap();
    assert_eq!(r.classes[0].record.wmc, 5);
    let v: Vec<u32> = r.methods.iter().map(|m| m.v).collect();
    assert_eq!(v, [2, 3]);
    assert!(r.methods.iter().all(|m| m.quadrant == Quadrant::III));
}

#[test]
fn empty_directory_is_no_input() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("notes.txt"), "not java").unwrap();
    assert!(matches!(
        analyze_sources(&[dir.path().to_path_buf()]),
        Err(Error::NoInput)
    ));
    assert!(matches!(
        analyze_sources(&[PathBuf::from("/no/such/dir")]),
        Err(Error::Io(_))
    ));
}

#[test]
fn broken_file_marks_report_partial() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("Good.java"), "class Good { void f() { } }").unwrap();
    std::fs::write(dir.path().join("Bad.java"), "class Bad { void f( { }").unwrap();
    let a = analyze_sources(&[dir.path().to_path_buf()]).unwrap();
    let r = build_report(&a, &Config::default(), None, None).unwrap();
    assert!(r.partial);
    assert_eq!(r.parse_errors.len(), 1);
    assert!(r.parse_errors[0].path.ends_with("Bad.java"));
    assert_eq!(r.classes.len(), 1);

    std::fs::remove_file(dir.path().join("Good.java")).unwrap();
    assert!(analyze_sources(&[dir.path().to_path_buf()]).is_err());
}

#[test]
fn history_adds_evolution_section() {
    let dir = tempfile::tempdir().unwrap();
    let v = |n: usize| {
        let ms: Vec<String> = (0..n).map(|i| format!(r#"{{"name":"m{i}"}}"#)).collect();
        format!(
            r#"{{"classes":[{{"name":"A","kind":"class","methods":[{}]}}]}}"#,
            ms.join(",")
        )
    };
    std::fs::write(dir.path().join("r1.facts.json"), v(2)).unwrap();
    std::fs::write(dir.path().join("r2.facts.json"), v(5)).unwrap();
    let h = load_history(dir.path()).unwrap();
    let a = analyze_sources(&[common::fixture("java/wmc")]).unwrap();
    let r = build_report(&a, &Config::default(), None, Some(&h)).unwrap();
    let ev = r.evolution.unwrap();
    assert_eq!(ev.versions, ["r1", "r2"]);
    assert_eq!((ev.classes[0].class.as_str(), ev.classes[0].enom), ("A", 3));

    std::fs::remove_file(dir.path().join("r2.facts.json")).unwrap();
    let one = load_history(dir.path()).unwrap();
    assert!(matches!(
        build_report(&a, &Config::default(), None, Some(&one)),
        Err(Error::BadRange { .. })
    ));
}

#[test]
fn kiviat_svg_marks_published_violations() {
    let a = analyze_facts(&common::fixture("logiscope/lexical_analyzer.facts.json")).unwrap();
    let r = build_report(&a, &Config::default(), None, None).unwrap();
    let c = r.classes.iter().find(|c| c.record.class == LA).unwrap();
    let svg = emit_kiviat_svg(&c.kiviat, LA).unwrap();
    assert_eq!(svg.matches(r#"class="violation""#).count(), 4);
    assert_eq!(svg.matches(r#"class="vertex""#).count(), 9);
    assert_eq!(svg.matches(r#"class="ring-min""#).count(), 1);
    assert_eq!(svg, emit_kiviat_svg(&c.kiviat, LA).unwrap());
}

fn pt(v: u32, ev: u32) -> MethodPoint {
    MethodPoint {
        class: "C".into(),
        method: format!("m{v}_{ev}()"),
        v,
        ev,
        iv: 1,
    }
}

#[test]
fn scatter_quadrants() {
    let t = MethodThresholds::default();
    let simple: Vec<_> = (0..20).map(|_| pt(1, 1)).collect();
    let out = emit_scatter(&simple, &t);
    assert_eq!(out.counts[&Quadrant::III], 20);
    assert_eq!(out.csv.lines().count(), 21);
    assert_eq!(out.csv.lines().next().unwrap(), "method,class,v,ev,quadrant");

    let mut mixed = simple.clone();
    mixed.push(pt(12, 6));
    mixed.push(pt(3, 5));
    mixed.push(pt(11, 4));
    let out = emit_scatter(&mixed, &t);
    assert_eq!(
        [
            out.counts[&Quadrant::I],
            out.counts[&Quadrant::II],
            out.counts[&Quadrant::IV]
        ],
        [1, 1, 1]
    );
    assert_eq!(out.counts.values().sum::<usize>(), mixed.len());
    assert!(out.csv.contains("m12_6(),C,12,6,I\n"));
}

#[test]
fn config_errors_name_lines() {
    let e = Config::from_toml_str("[thresholds.method]\nv = 10\nq = 3\n").unwrap_err();
    assert!(matches!(e, Error::Config { line: 3, .. }), "{e:?}");
    let e = Config::from_toml_str("[sig]\nduplication_block = 0\n").unwrap_err();
    assert!(matches!(e, Error::Config { line: 2, .. }), "{e:?}");
    let cfg = Config::from_toml_str("[thresholds.method]\nv = 0\n").unwrap();
    let a = analyze_sources(&[common::fixture("java/wmc")]).unwrap();
    let r = build_report(&a, &cfg, None, None).unwrap();
    assert!(r.methods.iter().all(|m| m.quadrant == Quadrant::IV));
    assert_eq!(r.config_fingerprint, cfg.fingerprint);
}

#[test]
fn facts_round_trip() {
    let a = analyze_sources(&[common::fixture("java/suite")]).unwrap();
    let text = a.model.to_facts().to_json();
    let back = oometrics::model::SystemModel::from_json(&text).unwrap();
    assert_eq!(back.to_facts(), a.model.to_facts());
    let again = oometrics::report::Analysis {
        model: back,
        ..a.clone()
    };
    let cfg = Config::default();
    assert_eq!(
        build_report(&a, &cfg, None, None).unwrap(),
        build_report(&again, &cfg, None, None).unwrap()
    );
}
