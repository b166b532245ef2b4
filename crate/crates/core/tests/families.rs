use proptest::prelude::*;
use tetrad::doc::{GroupDocument, ReportDocument};
use tetrad::families::{build, lemma_certificate, predicted_profile, Caps, Family, FamilyParams, Instance};

fn buildable_presets() -> Vec<Instance> {
    FamilyParams::presets().iter().filter_map(|p| build(p).ok()).collect()
}

fn pow_string(p: u64, e: usize, times: u64) -> String {
    let mut n = times as u128;
    for _ in 0..e {
        n *= p as u128;
    }
    n.to_string()
}

#[test]
fn order_is_p_times_h() {
    for inst in buildable_presets() {
        let p = &inst.p_group;
        assert_eq!(inst.order_string(), pow_string(p.p(), p.order_exponent(), inst.h_order()), "{}", inst.params.label());
    }
}

#[test]
fn passing_predictions_have_four_degrees() {
    for inst in buildable_presets() {
        let cert = lemma_certificate(&inst, &Caps::default());
        let Some(pred) = cert.predicted.clone() else { continue };
        let label = inst.params.label();
        assert!(cert.pass, "{label}");
        assert_eq!(pred.cd.len(), 4, "{label}");
        assert!(pred.cd.windows(2).all(|w| w[0] < w[1]), "{label}");
        assert_eq!(pred.cd[0], 1);
        assert_eq!(pred.cd[2], inst.h_order(), "{label}");
        let index = inst.h_order() / cert.c_order.unwrap();
        let top = index * inst.p_group.p().pow(cert.alpha.unwrap() as u32);
        assert_eq!(pred.cd[3], top, "{label}");
        assert_eq!(pred.dl, 4);
        assert_eq!(Some(pred), predicted_profile(&inst.params).ok(), "{label}");
    }
}

#[test]
fn documents_reproduce_reports() {
    let caps = Caps::default();
    for inst in buildable_presets() {
        let doc = GroupDocument::from_instance(&inst, &caps);
        let back = GroupDocument::from_json(&doc.to_json()).unwrap().to_instance().unwrap();
        let direct = ReportDocument::new(&inst, Some(lemma_certificate(&inst, &caps)), None).to_json();
        let reloaded = ReportDocument::new(&back, Some(lemma_certificate(&back, &caps)), None).to_json();
        assert_eq!(direct, reloaded, "{}", inst.params.label());
    }
}

#[test]
fn known_failures_stay_failing() {
    let four = build(&FamilyParams::preset(Family::Four)).unwrap();
    assert_eq!(lemma_certificate(&four, &Caps::default()).failed_checks(), vec!["cd_h_two_degrees"]);
    assert!(build(&FamilyParams::preset(Family::NoPrime)).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 8, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn fitting_two_degrees_follow_p(p in prop::sample::select(vec![3u64, 11, 19, 43, 59, 67])) {
        let inst = build(&FamilyParams::fitting_two(p)).unwrap();
        let cert = lemma_certificate(&inst, &Caps::default());
        prop_assert!(cert.pass);
        let pred = cert.predicted.unwrap();
        prop_assert_eq!(pred.cd, vec![1, 2, 8, 2 * p * p]);
        prop_assert_eq!(pred.fitting_height, 2);
    }
}
