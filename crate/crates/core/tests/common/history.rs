use std::collections::BTreeMap;

use oometrics::evolution::HistoryTimeline;
use oometrics::model::SystemModel;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// History from per-version method counts; `None` leaves the class out.
pub fn history(noms: &[BTreeMap<&str, Option<u32>>]) -> HistoryTimeline {
    let versions = noms
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let mut classes: Vec<String> = v
                .iter()
                .filter_map(|(name, n)| n.map(|n| (name, n)))
                .map(|(name, n)| {
                    let ms: Vec<String> = (0..n).map(|k| format!(r#"{{"name":"m{k}"}}"#)).collect();
                    format!(r#"{{"name":"{name}","kind":"class","methods":[{}]}}"#, ms.join(","))
                })
                .collect();
            // keep every version non-empty
            classes.push(r#"{"name":"Anchor","kind":"class"}"#.to_string());
            (
                format!("v{i}"),
                SystemModel::from_json(&format!(r#"{{"classes":[{}]}}"#, classes.join(","))).unwrap(),
            )
        })
        .collect();
    HistoryTimeline::new(versions).unwrap()
}

/// One class `C` with the given method counts.
pub fn single(noms: &[u32]) -> HistoryTimeline {
    history(
        &noms
            .iter()
            .map(|&n| BTreeMap::from([("C", Some(n))]))
            .collect::<Vec<_>>(),
    )
}

/// Random history of classes A to D, with the method-count table per class.
pub fn random_history(rng: &mut ChaCha8Rng) -> (HistoryTimeline, Vec<Vec<u32>>) {
    let n = rng.gen_range(2..8);
    let names = ["A", "B", "C", "D"];
    let mut table = vec![vec![0; n]; names.len()];
    let mut versions = Vec::new();
    for i in 0..n {
        let mut v = BTreeMap::new();
        for (c, name) in names.iter().enumerate() {
            let nom = if rng.gen_bool(0.15) {
                None
            } else {
                Some(rng.gen_range(0..6))
            };
            table[c][i] = nom.unwrap_or(0);
            v.insert(*name, nom);
        }
        versions.push(v);
    }
    (history(&versions), table)
}
