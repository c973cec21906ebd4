mod common;

use oometrics::mood::{mood, MoodFactors};

#[test]
fn factors_on_coupling_fixture() {
    let f = mood(&common::java_model("cbo")).unwrap();
    // every method is public
    assert_eq!(f.mhf, Some(0.0));
    // two private fields fully hidden, the protected one hidden from the two non-descendants
    assert!((f.ahf.unwrap() - 2.5 / 3.0).abs() < 1e-12);
    // each subclass inherits init and register out of ten available methods
    assert!((f.mif.unwrap() - 0.4).abs() < 1e-12);
    assert!((f.aif.unwrap() - 0.4).abs() < 1e-12);
    assert_eq!(f.pf, Some(0.0));
    assert_eq!(f.cf, Some(0.25));
    assert_eq!(MoodFactors::percent(f.ahf), Some(83.3));
}

#[test]
fn overriding_hierarchy_is_polymorphic() {
    let f = mood(&common::java_model("nop")).unwrap();
    // both subclasses override both abstract methods: 4 overrides over 2 new x 2 descendants
    assert_eq!(f.pf, Some(1.0));
}
