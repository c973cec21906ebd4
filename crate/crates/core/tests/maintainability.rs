mod common;

use common::reference_mi;
use oometrics::maintainability::{duplication, maintainability_index, sig_rating, Duplication, Rating, SigBands};
use oometrics::model::SystemModel;
use oometrics::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn mi_matches_reference() {
    assert_eq!(maintainability_index(1.0, 1.0, 1.0, Some(0.0)).unwrap(), 170.77);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..1000 {
        let v = rng.gen_range(1.0..1e6);
        let g = rng.gen_range(1..200) as f64;
        let loc = rng.gen_range(1.0..1e5);
        let cm = rng.gen_range(0.0..=100.0);
        let mi = maintainability_index(v, g, loc, Some(cm)).unwrap();
        assert!((mi - reference_mi(v, g, loc, cm)).abs() < 1e-9);
        let worse = maintainability_index(v, g + 1.0, loc, Some(cm)).unwrap();
        assert!(worse < mi);
    }
}

#[test]
fn mi_domain_errors() {
    for (v, loc) in [(0.0, 10.0), (-1.0, 10.0), (10.0, 0.0)] {
        assert!(matches!(
            maintainability_index(v, 1.0, loc, None),
            Err(Error::Domain(_))
        ));
    }
    assert!(matches!(
        maintainability_index(10.0, 1.0, 10.0, Some(120.0)),
        Err(Error::Domain(_))
    ));
}

/// Lines in some block of `block` lines that occurs twice, by comparing
/// every pair of windows directly.
fn brute_duplication(texts: &[String], block: usize) -> u64 {
    let files: Vec<Vec<String>> = texts
        .iter()
        .map(|t| {
            t.lines()
                .map(|l| l.split_whitespace().collect::<Vec<_>>().join(" "))
                .filter(|l| !l.is_empty())
                .collect()
        })
        .collect();
    let mut marked: Vec<Vec<bool>> = files.iter().map(|f| vec![false; f.len()]).collect();
    let starts: Vec<(usize, usize)> = files
        .iter()
        .enumerate()
        .flat_map(|(fi, f)| (0..(f.len() + 1).saturating_sub(block)).map(move |s| (fi, s)))
        .collect();
    for (x, &(fa, sa)) in starts.iter().enumerate() {
        for &(fb, sb) in &starts[x + 1..] {
            if (0..block).all(|k| files[fa][sa + k] == files[fb][sb + k]) {
                for k in 0..block {
                    marked[fa][sa + k] = true;
                    marked[fb][sb + k] = true;
                }
            }
        }
    }
    marked.iter().flatten().filter(|&&m| m).count() as u64
}

fn random_text(rng: &mut ChaCha8Rng) -> String {
    (0..rng.gen_range(0..40))
        .map(|_| match rng.gen_range(0..5) {
            0 => "\n".to_string(),
            k => format!("{}x{} ;\n", " ".repeat(rng.gen_range(0..3)), k),
        })
        .collect()
}

#[test]
fn duplication_matches_window_oracle() {
    let block: String = (0..6).map(|i| format!("call{i}();\n")).collect();
    let text = format!("{block}int other;\n{block}");
    let d = duplication(&[text.clone()], 6);
    assert_eq!(
        d,
        Duplication {
            duplicated_lines: 12,
            total_lines: 13
        }
    );

    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..200 {
        let texts: Vec<String> = (0..rng.gen_range(1..4)).map(|_| random_text(&mut rng)).collect();
        let block = rng.gen_range(2..7);
        let d = duplication(&texts, block);
        assert_eq!(d.duplicated_lines, brute_duplication(&texts, block));
        let mut rev = texts.clone();
        rev.reverse();
        assert_eq!(duplication(&rev, block), d);
        assert_eq!(duplication(&texts, block), d);
    }
}

fn fan(k: u32) -> String {
    let arms: Vec<String> = (0..k).map(|i| format!("[2,{}]", 3 + i)).collect();
    let back: Vec<String> = (0..k).map(|i| format!("[{},1]", 3 + i)).collect();
    let kinds: Vec<&str> = ["\"entry\"", "\"exit\"", "\"switch-head\""]
        .into_iter()
        .chain((0..k).map(|_| "\"plain\""))
        .collect();
    format!(
        r#"{{"nodes":{},"edges":[[0,2],{},{}],"kinds":[{}]}}"#,
        3 + k,
        arms.join(","),
        back.join(","),
        kinds.join(",")
    )
}

fn model(methods: &[(u32, u32)]) -> SystemModel {
    let ms: Vec<String> = methods
        .iter()
        .enumerate()
        .map(|(i, (v, lines))| format!(r#"{{"name":"m{i}","lines":{lines},"cfg":{}}}"#, fan(*v)))
        .collect();
    let total: u32 = methods.iter().map(|m| m.1).sum::<u32>() + 2;
    SystemModel::from_json(&format!(
        r#"{{"classes":[{{"name":"A","kind":"class","lines":{total},"methods":[{}]}}]}}"#,
        ms.join(",")
    ))
    .unwrap()
}

#[test]
fn best_band_case() {
    let s = sig_rating(&model(&[(1, 5), (1, 8), (1, 3)]), None, &SigBands::default()).unwrap();
    assert_eq!(
        (s.complexity, s.unit_size, s.volume),
        (Rating::DoublePlus, Rating::DoublePlus, Rating::DoublePlus)
    );
    assert_eq!(s.overall, Rating::DoublePlus);
    assert_eq!(s.unit_testing, None);
}

#[test]
fn empty_model_rejected() {
    assert!(matches!(
        SystemModel::from_json(r#"{"classes":[]}"#),
        Err(Error::EmptyModel)
    ));
    assert!(matches!(
        SystemModel::from_json(r#"{"classes":[{"name":"X","kind":"class","external":true}]}"#),
        Err(Error::EmptyModel)
    ));
}

#[test]
fn very_complex_method_never_improves_rating() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let bands = SigBands::default();
    for _ in 0..300 {
        let mut methods: Vec<(u32, u32)> = (0..rng.gen_range(1..12))
            .map(|_| (rng.gen_range(1..70), rng.gen_range(1..90)))
            .collect();
        let before = sig_rating(&model(&methods), None, &bands).unwrap();
        methods.push((60, rng.gen_range(1..90)));
        let after = sig_rating(&model(&methods), None, &bands).unwrap();
        assert!(after.complexity >= before.complexity, "{methods:?}");

        let dup = Duplication {
            duplicated_lines: rng.gen_range(0..50),
            total_lines: 100,
        };
        let s = sig_rating(&model(&methods), Some(&dup), &bands).unwrap();
        let legs = [Some(s.volume), Some(s.complexity), Some(s.unit_size), s.duplication];
        let best = legs.iter().flatten().min().unwrap();
        let worst = legs.iter().flatten().max().unwrap();
        assert!(best <= &s.overall && &s.overall <= worst);
    }
}
