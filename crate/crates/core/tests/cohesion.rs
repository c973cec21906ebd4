mod common;

use common::cohesion::{check_against_oracles, random_class};
use oometrics::cohesion::{coh, lcom, tcc_lcc, LcomVariant};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn cohesion_matches_brute_force() {
    check_against_oracles(2024, 200);
}

#[test]
fn bounds_hold() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..500 {
        let (class, _) = random_class(&mut rng);
        if let Ok((t, l)) = tcc_lcc(&class) {
            assert!((0.0..=1.0).contains(&t) && t <= l && l <= 1.0);
        }
        if let Ok(c) = coh(&class) {
            assert!((0.0..=1.0).contains(&c));
        }
        if let (Ok(lh), Ok(hm)) = (lcom(&class, LcomVariant::LH), lcom(&class, LcomVariant::HM)) {
            assert!(hm <= lh);
        }
    }
}
