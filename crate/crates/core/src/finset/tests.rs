use super::*;
use crate::multipullback::build_pullback;

fn all(spec: &FiniteGluingSpec) -> Vec<usize> {
    (0..spec.len()).collect()
}

#[test]
fn chain_points_are_even() {
    assert_eq!(chain_points(3), vec!["-1", "0", "1"]);
    assert_eq!(chain_points(5), vec!["-1", "-1/2", "0", "1/2", "1"]);
    assert_eq!(chain_points(2), vec!["-1", "1"]);
}

#[test]
fn tstar_has_five_classes_and_folds_piece_two() {
    let s = tstar(3);
    let g = glue(&s, &all(&s)).unwrap();
    assert_eq!(g.class_count(), 5);
    let two = s.index_of("2").unwrap();
    let v = check_embedding(&s, &[two], &all(&s)).unwrap();
    assert!(!v.injective);
    assert_eq!(v.witnesses, vec![[vec!["-1@2".to_string()], vec!["1@2".to_string()]]]);
    assert!(check_embedding(&s, &[0], &all(&s)).unwrap().injective);
}

#[test]
fn tcirc_a_embeds_pieces_but_not_the_pair() {
    let s = tcirc_a(3);
    assert_eq!(glue(&s, &all(&s)).unwrap().class_count(), 6);
    for i in 0..3 {
        assert!(check_embedding(&s, &[i], &all(&s)).unwrap().injective);
    }
    let v = check_embedding(&s, &[1, 2], &all(&s)).unwrap();
    assert!(!v.injective);
    assert_eq!(v.witnesses, vec![[vec!["1@2".to_string()], vec!["1@3".to_string()]]]);
    assert!(check_embedding(&s, &[0, 1], &all(&s)).unwrap().injective);
}

#[test]
fn tcirc_c_embeds_everything() {
    let s = tcirc_c(3);
    assert_eq!(glue(&s, &all(&s)).unwrap().class_count(), 6);
    for k in [vec![0], vec![1], vec![2], vec![0, 1], vec![0, 2], vec![1, 2]] {
        assert!(check_embedding(&s, &k, &all(&s)).unwrap().injective, "{k:?}");
    }
}

#[test]
fn longer_chains_keep_the_same_shape() {
    for n in [2, 4, 7] {
        assert_eq!(glue(&tstar(n), &[0, 1, 2]).unwrap().class_count(), 3 * n - 4);
        assert_eq!(glue(&tcirc_a(n), &[0, 1, 2]).unwrap().class_count(), 3 * n - 3);
        assert_eq!(glue(&tcirc_c(n), &[0, 1, 2]).unwrap().class_count(), 3 * n - 3);
    }
}

#[test]
fn disjoint_pieces_embed_trivially() {
    let s = FiniteGluingSpec::new(vec![
        ("a", vec!["x".to_string(), "y".to_string()]),
        ("b", vec!["z".to_string()]),
    ])
    .unwrap();
    let g = glue(&s, &[0, 1]).unwrap();
    assert_eq!(g.class_count(), 3);
    assert_eq!(g.merges, 0);
    assert!(check_embedding(&s, &[0], &[0, 1]).unwrap().injective);
    assert!(check_embedding(&s, &[1], &[0, 1]).unwrap().injective);
}

#[test]
fn classes_follow_first_appearance() {
    let s = tcirc_a(3);
    let g = glue(&s, &[0, 1, 2]).unwrap();
    assert_eq!(g.class_of(0, 0), Some(0));
    assert_eq!(g.class_of(0, 2), Some(2));
    assert_eq!(g.class_of(1, 2), Some(2));
    assert_eq!(g.class_of(2, 0), g.class_of(1, 0));
}

#[test]
fn canonical_map_is_identity_on_equal_subsets() {
    let s = tstar(3);
    let g = glue(&s, &[0, 2]).unwrap();
    let m = canonical_map(&g, &g).unwrap();
    assert_eq!(m, (0..g.class_count()).collect::<Vec<_>>());
    let big = glue(&s, &[0, 1, 2]).unwrap();
    assert!(canonical_map(&big, &g).is_none());
}

#[test]
fn invalid_identifications_are_rejected() {
    let mut s = tcirc_a(3);
    assert!(matches!(
        s.identify("1", "2", &[("0", "0")]),
        Err(FinsetError::DuplicatePair(..))
    ));
    let mut s = FiniteGluingSpec::new(vec![
        ("a", vec!["x".to_string(), "y".to_string()]),
        ("b", vec!["z".to_string()]),
    ])
    .unwrap();
    assert!(matches!(
        s.identify("a", "b", &[("x", "z"), ("y", "z")]),
        Err(FinsetError::NotPartialBijection { .. })
    ));
    assert!(matches!(s.identify("a", "a", &[]), Err(FinsetError::SelfPair(_))));
    assert!(matches!(
        s.identify("a", "b", &[("w", "z")]),
        Err(FinsetError::UnknownPoint { .. })
    ));
    assert!(matches!(
        FiniteGluingSpec::new(vec![("a", vec!["x".to_string(), "x".to_string()])]),
        Err(FinsetError::DuplicatePoint { .. })
    ));
    assert!(matches!(check_embedding(&s, &[0, 1], &[0]), Err(FinsetError::NotSubset(_))));
}

#[test]
fn dual_family_has_restriction_maps() {
    let s = tstar(3);
    let fam = dualize(&s).unwrap();
    assert_eq!(fam.overlap(1, 2).dim(), 2);
    assert_eq!(fam.overlap(0, 1).dim(), 1);
    assert!(fam.is_surjective_family());
    let p = build_pullback(&fam, &[0, 1, 2]).unwrap();
    assert_eq!(p.dim(), 5);
}

#[test]
fn duality_holds_on_fixtures() {
    for s in [tstar(3), tcirc_a(3), tcirc_c(3), tcirc_a(5)] {
        let d = duality_check(&s).unwrap();
        assert!(d.consistent(), "{:?}", d.mismatches);
    }
}

#[test]
fn random_specs_are_deterministic() {
    let p = RandomSpecParams::default();
    assert_eq!(random_spec(11, p), random_spec(11, p));
    let distinct: std::collections::BTreeSet<String> =
        (0..20).map(|s| format!("{:?}", random_spec(s, p))).collect();
    assert!(distinct.len() > 15);
    for seed in 0..50 {
        let s = random_spec(seed, p);
        assert!((1..=6).contains(&s.len()));
        assert!((0..s.len()).all(|i| (1..=12).contains(&s.points(i).len())));
    }
}

#[test]
fn fixture_lookup() {
    for name in FIXTURE_NAMES {
        assert!(fixture(name, 3).is_some(), "{name}");
    }
    assert!(fixture("nope", 3).is_none());
    assert!(matches!(fixture("example2", 3), Some(Fixture::Family(_))));
    assert!(matches!(fixture("tcirc-a", 3), Some(Fixture::Gluing(_))));
}
