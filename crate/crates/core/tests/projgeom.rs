mod common;

use std::collections::{BTreeMap, BTreeSet};

use common::{gf_mul, gf_pow, trace_to_gf4, CONWAY, SECOND};
use hillcap_core::ffield::{build_field, FieldSpec};
use hillcap_core::projgeom::{self, Cap};
use proptest::prelude::*;

fn canonical(x: u32, poly: u32) -> u32 {
    let w = gf_pow(2, 1365, poly);
    x.min(gf_mul(w, x, poly)).min(gf_mul(gf_mul(w, w, poly), x, poly))
}

fn oracle_points(set: &[u16], poly: u32) -> BTreeSet<u32> {
    set.iter().map(|&x| canonical(x as u32, poly)).collect()
}

/// No line through two points meets a third.
fn oracle_is_cap(points: &BTreeSet<u32>, poly: u32) -> bool {
    let w = gf_pow(2, 1365, poly);
    let pts: Vec<u32> = points.iter().copied().collect();
    for (i, &p) in pts.iter().enumerate() {
        for &q in &pts[i + 1..] {
            let mut s = 1;
            for _ in 0..3 {
                let r = canonical(p ^ gf_mul(s, q, poly), poly);
                if points.contains(&r) {
                    return false;
                }
                s = gf_mul(s, w, poly);
            }
        }
    }
    true
}

/// Hyperplanes are kernels of x -> Tr(a x); each arises from three a.
fn oracle_profile(vectors: &[u16], poly: u32) -> BTreeMap<usize, usize> {
    let points = oracle_points(vectors, poly);
    let mut m = BTreeMap::new();
    for a in 1..4096u32 {
        let on = points
            .iter()
            .filter(|&&x| trace_to_gf4(gf_mul(a, x, poly), poly) == 0)
            .count();
        *m.entry(on).or_insert(0) += 1;
    }
    m.values_mut().for_each(|c| *c /= 3);
    m
}

#[test]
fn hill_cap_against_oracle() {
    for poly in [CONWAY, SECOND] {
        let f = build_field(FieldSpec::new(poly)).unwrap();
        let set = f.connection_set(7).unwrap();
        let cap = Cap::from_vectors(&f, &set).unwrap();
        let pts = oracle_points(&set, poly);
        assert_eq!(cap.len(), 78);
        assert_eq!(
            cap.points.iter().map(|p| p.representative() as u32).collect::<BTreeSet<_>>(),
            pts
        );
        assert!(oracle_is_cap(&pts, poly));
        assert!(projgeom::is_cap(&f, &cap.points).is_cap());
        let profile = projgeom::intersection_profile(&f, &cap);
        assert_eq!(profile.counts, oracle_profile(&set, poly));
        assert_eq!(profile.counts, BTreeMap::from([(14, 429), (22, 936)]));
        assert_eq!(profile.to_csv(), "size,count\n14,429\n22,936\n");
    }
}

#[test]
fn counting_lemma_values() {
    assert_eq!(projgeom::gaussian_binomial(6, 1, 4), 1365);
    assert_eq!(projgeom::gaussian_binomial(6, 2, 4), 4095 * 1023 / (15 * 3));
    let bound = projgeom::section_bound(430, 78, 110, 4);
    assert_eq!(bound, 22);
    let f = build_field(FieldSpec::new(CONWAY)).unwrap();
    let cap = Cap::from_vectors(&f, &f.connection_set(7).unwrap()).unwrap();
    let profile = projgeom::intersection_profile(&f, &cap);
    let lemma = projgeom::lemma_counting_check(78, bound, (14, 22), Some(&profile)).unwrap();
    assert_eq!(lemma.expected.first, 78 * 341);
    assert_eq!(lemma.expected.second, 78 * 6545);
    assert_eq!(lemma.expected.third, 78 * 122892);
    assert_eq!(lemma.cubic_combination, 0);
    // factorial moments of the actual profile, by hand
    let f1 = 429 * 14 + 936 * 22;
    let f2 = 429 * 14 * 13 + 936 * 22 * 21;
    let f3 = 429 * 14 * 13 * 12 + 936 * 22 * 21 * 20;
    assert_eq!((f1, f2, f3), (78 * 341, 78 * 6545, 78 * 122892));
    assert_eq!(profile.factorial_moment(3), f3 as i128);
}

#[test]
fn secant_point_breaks_the_cap() {
    let f = build_field(FieldSpec::new(CONWAY)).unwrap();
    let set = f.connection_set(7).unwrap();
    let mut vectors = set.clone();
    vectors.push(set[0] ^ set[5]);
    let cap = Cap::from_vectors(&f, &vectors).unwrap();
    assert!(!projgeom::is_cap(&f, &cap.points).is_cap());
    assert!(!oracle_is_cap(&oracle_points(&vectors, CONWAY), CONWAY));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn cap_check_matches_oracle(words in prop::collection::vec(1u16..4096, 3..24)) {
        let f = build_field(FieldSpec::new(CONWAY)).unwrap();
        let cap = Cap::from_vectors(&f, &words).unwrap();
        let pts = oracle_points(&words, CONWAY);
        prop_assert_eq!(cap.len(), pts.len());
        prop_assert_eq!(projgeom::is_cap(&f, &cap.points).is_cap(), oracle_is_cap(&pts, CONWAY));
    }

    #[test]
    fn subsets_of_the_hill_cap_are_caps(mask in prop::collection::vec(any::<bool>(), 234)) {
        let f = build_field(FieldSpec::new(CONWAY)).unwrap();
        let set = f.connection_set(7).unwrap();
        let sub: Vec<u16> = set.iter().zip(&mask).filter(|p| *p.1).map(|p| *p.0).collect();
        prop_assume!(!sub.is_empty());
        let cap = Cap::from_vectors(&f, &sub).unwrap();
        prop_assert!(projgeom::is_cap(&f, &cap.points).is_cap());
        let profile = projgeom::intersection_profile(&f, &cap);
        prop_assert_eq!(profile.total_hyperplanes(), 1365);
        prop_assert_eq!(profile.counts, oracle_profile(&sub, CONWAY));
    }
}
