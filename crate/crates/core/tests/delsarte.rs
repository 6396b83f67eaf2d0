mod common;

use std::collections::BTreeMap;

use common::{character_rows, construction, wht, CONWAY, SECOND};
use hillcap_core::delsarte::{self, DelsarteError, DualDegreeSet};
use hillcap_core::ffield::Elem;
use hillcap_core::rational::{int, Rat};
use hillcap_core::scheme::{relation_permutation_under, SchemeDescriptor, GRAPH_PARAMS};
use num_traits::Zero;
use proptest::prelude::*;

/// For each y, the index j of the eigenmatrix row its character sums equal.
fn eigenspace_by_character(s: &SchemeDescriptor) -> Vec<usize> {
    let index: BTreeMap<&Vec<i64>, usize> = s.p.iter().enumerate().map(|(j, r)| (r, j)).collect();
    character_rows(&s.coloring, s.n_classes)
        .iter()
        .map(|r| index[r])
        .collect()
}

/// (aQ)_j = (1/|S|) sum over y in eigenspace j of (sum_{x in S} (-1)^{x.y})^2.
fn oracle_transform(s: &SchemeDescriptor, labels: &[usize], set: &[Elem]) -> Vec<Rat> {
    let mut v = vec![0i64; 4096];
    for &x in set {
        v[x as usize] = 1;
    }
    wht(&mut v);
    let mut acc = vec![0i64; s.n_classes];
    for (y, w) in v.iter().enumerate() {
        acc[labels[y]] += w * w;
    }
    acc.into_iter().map(|a| Rat::new(a, set.len() as i64)).collect()
}

fn dedup(mut v: Vec<Elem>) -> Vec<Elem> {
    v.sort_unstable();
    v.dedup();
    v
}

fn random_set() -> impl Strategy<Value = Vec<Elem>> {
    prop::collection::vec(0u16..4096, 1..500).prop_map(dedup)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn macwilliams_is_nonnegative_and_matches_oracle(set in random_set()) {
        let s = &construction(CONWAY).scheme;
        let labels = eigenspace_by_character(s);
        let a = delsarte::inner_distribution(s, &set).unwrap();
        prop_assert_eq!(a.total(), int(set.len() as i64));
        let t = delsarte::macwilliams(&a, s);
        prop_assert!(delsarte::check_nonnegative(&t).is_ok());
        prop_assert_eq!(t[0], int(set.len() as i64));
        prop_assert_eq!(t, oracle_transform(s, &labels, &set));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10))]

    #[test]
    fn projections_agree_with_macwilliams(set in random_set()) {
        let s = &construction(CONWAY).scheme;
        let a = delsarte::inner_distribution(s, &set).unwrap();
        prop_assert_eq!(
            delsarte::macwilliams_from_projections(s, &set).unwrap(),
            delsarte::macwilliams(&a, s)
        );
    }

    #[test]
    fn outer_and_inner_distributions_agree(set in random_set()) {
        let s = &construction(SECOND).scheme;
        let outer = delsarte::outer_distribution(s, &set);
        outer.verify(s, &set).unwrap();
        // row x counts members by class of the difference, recomputed here
        for x in [0usize, 1, 77, 4095] {
            let mut row = vec![0i64; 10];
            for &y in &set {
                row[s.coloring[x ^ y as usize] as usize] += 1;
            }
            prop_assert_eq!(&outer.rows[x], &row);
        }
        let a = delsarte::inner_distribution(s, &set).unwrap();
        let n = set.len() as i64;
        for i in 0..10 {
            let sum: i64 = set.iter().map(|&x| outer.rows[x as usize][i]).sum();
            prop_assert_eq!(Rat::new(sum, n), a.0[i]);
        }
    }

    #[test]
    fn tau_permutes_the_transform(set in random_set()) {
        let c = construction(CONWAY);
        let s = &c.scheme;
        let perm = relation_permutation_under(&c.field, &c.tau, s).unwrap();
        let image: Vec<Elem> = set.iter().map(|&x| c.tau.apply(&c.field, x)).collect();
        let t = delsarte::macwilliams(&delsarte::inner_distribution(s, &set).unwrap(), s);
        let u = delsarte::macwilliams(&delsarte::inner_distribution(s, &image).unwrap(), s);
        for j in 0..10 {
            prop_assert_eq!(u[perm.eigenspaces[j]], t[j]);
        }
        prop_assert_eq!(
            delsarte::dual_degree(&u),
            delsarte::dual_degree(&t).permuted(&perm.eigenspaces)
        );
    }
}

#[test]
fn subfield_design() {
    for poly in [CONWAY, SECOND] {
        let c = construction(poly);
        let s = &c.scheme;
        let sub = c.field.subfield_elements(64).unwrap();
        let a = delsarte::inner_distribution(s, &sub).unwrap();
        assert_eq!(a.to_string(), "(1, 0, 9, 0, 0, 0, 0, 27, 27, 0)");
        let t = delsarte::macwilliams(&a, s);
        assert_eq!(t, [64, 0, 576, 0, 0, 0, 0, 1728, 1728, 0].map(int).to_vec());
        assert_eq!(t, oracle_transform(s, &eigenspace_by_character(s), &sub));
        assert_eq!(delsarte::dual_degree(&t), DualDegreeSet::from_indices([2, 7, 8]));

        let outer = delsarte::outer_distribution(s, &sub);
        for &x in &sub {
            assert_eq!(outer.rows[x as usize], vec![1, 0, 9, 0, 0, 0, 0, 27, 27, 0]);
        }
        // the annihilated eigenspaces give vanishing row constraints everywhere
        for row in &outer.rows {
            let r: Vec<Rat> = row.iter().map(|&b| int(b)).collect();
            let res = delsarte::delsarte_row_constraints(&r, &[1, 3, 4, 5, 6, 9], s);
            assert!(res.iter().all(Zero::is_zero));
        }
        assert_eq!(outer.to_csv().lines().count(), 4097);
    }
}

#[test]
fn bounds() {
    assert_eq!(delsarte::ratio_bound(&GRAPH_PARAMS).unwrap(), int(352));
    // clique bound of the graph, via the complement: 1 - k/s = 128/11
    assert_eq!(
        delsarte::ratio_bound(&GRAPH_PARAMS.complement()).unwrap(),
        Rat::new(128, 11)
    );
    assert_eq!(delsarte::roos_intersection(352, 64, 4096), Rat::new(11, 2));
    assert_eq!(delsarte::roos_intersection(352, 352, 4096), Rat::new(121, 4));
}

#[test]
fn point_design_vanishes_on_least_eigenspaces() {
    let s = &construction(CONWAY).scheme;
    let labels = eigenspace_by_character(s);
    for point in [0u16, 1, 0x5a5] {
        let design = delsarte::point_design(s, &[2], -22, point);
        assert_eq!(design.total(), int(22 + 234));
        let mut w: Vec<i64> = design.weight.iter().map(|r| r.to_integer()).collect();
        wht(&mut w);
        let mut support = std::collections::BTreeSet::new();
        for (y, v) in w.iter().enumerate() {
            if *v != 0 && labels[y] != 0 {
                support.insert(labels[y]);
            }
        }
        let want: std::collections::BTreeSet<usize> = [1, 3, 4, 6, 7, 8].into();
        assert_eq!(support, want);
        assert_eq!(design.dual_degree(s), DualDegreeSet::from_indices(want));
    }
}

#[test]
fn weighted_check_rejects_non_cocliques() {
    let c = construction(CONWAY);
    let sub = c.field.subfield_elements(64).unwrap();
    assert!(matches!(
        delsarte::weighted_design_check(&c.scheme, &[2], 0, &sub),
        Err(DelsarteError::NotCoclique { .. })
    ));
    let single = [5u16];
    let v = delsarte::weighted_design_check(&c.scheme, &[2], 5, &single).unwrap();
    assert!(v.point_in_candidate);
    assert_eq!(v.actual, int(22));
}

#[test]
fn rejects_bad_sets() {
    let s = &construction(CONWAY).scheme;
    assert!(matches!(
        delsarte::inner_distribution(s, &[]),
        Err(DelsarteError::EmptySet)
    ));
    assert!(delsarte::check_nonnegative(&[int(1), int(-1)]).is_err());
}
