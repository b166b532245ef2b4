use proptest::prelude::*;
use tetrad::chardeg::{self, DEFAULT_CLASS_CAP};
use tetrad::families::{build, lemma_certificate, run_oracle, verify_against_oracle, Caps, FamilyParams, OracleStatus};
use tetrad::grp::{self, fixtures};

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn cyclic_groups_are_linear(n in 1u64..40) {
        let rep = chardeg::degrees(&fixtures::cyclic(n), DEFAULT_CLASS_CAP).unwrap();
        prop_assert_eq!(rep.degrees, vec![1; n as usize]);
    }

    #[test]
    fn heisenberg_degrees(p in prop::sample::select(vec![3u64, 5, 7])) {
        let rep = chardeg::degrees(&fixtures::heisenberg_prime(p), DEFAULT_CLASS_CAP).unwrap();
        let mut expect = vec![1; (p * p) as usize];
        expect.extend(vec![p; (p - 1) as usize]);
        prop_assert_eq!(rep.degrees, expect);
    }
}

#[test]
fn nilpotent_groups_have_fitting_height_one() {
    for g in [fixtures::cyclic(12), fixtures::dihedral8(), fixtures::quaternion(), fixtures::heisenberg_prime(3)] {
        assert_eq!(grp::fitting_subgroup(g.as_ref()).order(), g.order());
        assert_eq!(grp::fitting_height(&g), 1);
    }
    assert_eq!(grp::fitting_height(&fixtures::symmetric3()), 2);
    assert_eq!(grp::fitting_height(&fixtures::s4()), 3);
}

#[test]
fn fitting_two_three_matches_oracle() {
    let inst = build(&FamilyParams::fitting_two(3)).unwrap();
    let caps = Caps::default();
    let cert = lemma_certificate(&inst, &caps);
    let (r, _) = verify_against_oracle(&inst, &cert, &caps);
    assert_eq!(r.status, OracleStatus::Verified, "{:?}", r.diff);
    assert_eq!(r.cd, Some(vec![1, 2, 8, 18]));
    assert_eq!(r.dl, Some(4));
    assert_eq!(r.fitting_height, Some(2));
}

#[test]
fn caps_skip_instead_of_failing() {
    let inst = build(&FamilyParams::one(7, 3)).unwrap();
    let (r, _) = run_oracle(&inst, &Caps::default());
    assert_eq!(r.status, OracleStatus::SkippedOracle);
    let tight = Caps { max_order: 2_000_000, max_classes: 10 };
    let small = build(&FamilyParams::fitting_two(3)).unwrap();
    assert_eq!(run_oracle(&small, &tight).0.status, OracleStatus::SkippedOracle);
}
