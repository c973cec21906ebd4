use oometrics::cohesion::{coh, lcom, similarity_cohesion, tcc_lcc, LcomVariant};
use oometrics::model::{ClassInfo, SystemModel};
use oometrics::Error;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Plain description of a random class: attribute sets and call pairs per
/// non-constructor method.
pub struct Shape {
    uses: Vec<Vec<bool>>,
    calls: Vec<(usize, usize)>,
    attrs: usize,
}

pub fn random_class(rng: &mut ChaCha8Rng) -> (ClassInfo, Shape) {
    let attrs = rng.gen_range(0..5);
    let methods = rng.gen_range(0..7);
    let mut uses = vec![vec![false; attrs]; methods];
    let mut calls = Vec::new();
    let mut json_methods = Vec::new();
    for i in 0..methods {
        let mut accesses = Vec::new();
        for a in 0..attrs {
            if rng.gen_bool(0.35) {
                uses[i][a] = true;
                accesses.push(format!(r#""C.a{a}""#));
            }
        }
        if rng.gen_bool(0.3) {
            accesses.push(r#""Other.z""#.to_string());
        }
        let mut invokes = Vec::new();
        for j in 0..methods {
            if j != i && rng.gen_bool(0.15) {
                calls.push((i, j));
                invokes.push(format!(r#"{{"target":"C.m{j}()"}}"#));
            }
        }
        json_methods.push(format!(
            r#"{{"name":"m{i}","accesses":[{}],"invokes":[{}]}}"#,
            accesses.join(","),
            invokes.join(",")
        ));
    }
    // constructors touch everything and must not count
    json_methods.push(format!(
        r#"{{"name":"C","constructor":true,"accesses":[{}]}}"#,
        (0..attrs).map(|a| format!(r#""C.a{a}""#)).collect::<Vec<_>>().join(",")
    ));
    let json_attrs: Vec<String> = (0..attrs)
        .map(|a| format!(r#"{{"name":"a{a}","type":"int"}}"#))
        .collect();
    let text = format!(
        r#"{{"classes":[{{"name":"C","kind":"class","attributes":[{}],"methods":[{}]}},
            {{"name":"Other","kind":"class","attributes":[{{"name":"z","type":"int"}}]}}]}}"#,
        json_attrs.join(","),
        json_methods.join(",")
    );
    let model = SystemModel::from_json(&text).unwrap();
    (model.class("C").unwrap().clone(), Shape { uses, calls, attrs })
}

fn share(s: &Shape, i: usize, j: usize) -> bool {
    (0..s.attrs).any(|a| s.uses[i][a] && s.uses[j][a])
}

/// Reflexive-transitive closure of an undirected relation (Warshall).
fn closure(m: usize, rel: impl Fn(usize, usize) -> bool) -> Vec<Vec<bool>> {
    let mut r = vec![vec![false; m]; m];
    for i in 0..m {
        for j in 0..m {
            r[i][j] = i == j || rel(i, j) || rel(j, i);
        }
    }
    for k in 0..m {
        for i in 0..m {
            for j in 0..m {
                if r[i][k] && r[k][j] {
                    r[i][j] = true;
                }
            }
        }
    }
    r
}

fn classes_of(r: &[Vec<bool>]) -> usize {
    // a method is a class representative when no lower index reaches it
    (0..r.len()).filter(|&i| (0..i).all(|j| !r[j][i])).count()
}

fn pairs(m: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..m).flat_map(move |i| (i + 1..m).map(move |j| (i, j)))
}

/// Every cohesion measure on `count` random classes against the pair and
/// closure oracles above. Panics on the first mismatch.
pub fn check_against_oracles(seed: u64, count: usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..count {
        let (class, s) = random_class(&mut rng);
        let m = s.uses.len();
        let total_pairs = (m * m.saturating_sub(1) / 2) as f64;

        // LCOM-CK
        let (p, q) = pairs(m).fold(
            (0i64, 0i64),
            |(p, q), (i, j)| if share(&s, i, j) { (p, q + 1) } else { (p + 1, q) },
        );
        let lh = classes_of(&closure(m, |i, j| share(&s, i, j)));
        let hm = classes_of(&closure(m, |i, j| share(&s, i, j) || s.calls.contains(&(i, j))));
        let mu: Vec<usize> = (0..s.attrs).map(|a| (0..m).filter(|&i| s.uses[i][a]).count()).collect();
        if m == 0 {
            for v in LcomVariant::ALL {
                assert!(matches!(lcom(&class, v), Err(Error::Undefined { .. })));
            }
        } else {
            assert_eq!(lcom(&class, LcomVariant::CK).unwrap(), (p - q).max(0) as f64);
            assert_eq!(lcom(&class, LcomVariant::LH).unwrap(), lh as f64);
            assert_eq!(lcom(&class, LcomVariant::HM).unwrap(), hm as f64);
        }
        match (m >= 2, s.attrs > 0) {
            (true, true) => {
                let mean = mu.iter().sum::<usize>() as f64 / s.attrs as f64;
                assert_eq!(
                    lcom(&class, LcomVariant::HS).unwrap(),
                    (m as f64 - mean) / (m as f64 - 1.0)
                );
            }
            _ => assert!(lcom(&class, LcomVariant::HS).is_err()),
        }
        if m > 0 && s.attrs > 0 {
            assert_eq!(
                coh(&class).unwrap(),
                mu.iter().sum::<usize>() as f64 / (m * s.attrs) as f64
            );
        } else {
            assert!(coh(&class).is_err());
        }
        if m >= 2 {
            let direct = pairs(m).filter(|&(i, j)| share(&s, i, j)).count() as f64;
            let reach = closure(m, |i, j| share(&s, i, j));
            let loose = pairs(m).filter(|&(i, j)| reach[i][j]).count() as f64;
            assert_eq!(tcc_lcc(&class).unwrap(), (direct / total_pairs, loose / total_pairs));
            let mut sim = 0.0;
            for (i, j) in pairs(m) {
                let inter = (0..s.attrs).filter(|&a| s.uses[i][a] && s.uses[j][a]).count();
                let uni = (0..s.attrs).filter(|&a| s.uses[i][a] || s.uses[j][a]).count();
                if uni > 0 {
                    sim += inter as f64 / uni as f64;
                }
            }
            assert_eq!(similarity_cohesion(&class).unwrap(), sim / total_pairs);
        } else {
            assert!(tcc_lcc(&class).is_err());
            assert!(similarity_cohesion(&class).is_err());
        }
    }
}
