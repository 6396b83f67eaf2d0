mod common;

use std::collections::BTreeMap;

use common::{construction, CONWAY, SECOND};
use hillcap_core::certify::parametric::{
    nonnegativity_interval, solve_parametric, AffineForm, LinearSystem, ParametricVector,
};
use hillcap_core::certify::proof::{self, fusion_f_groups};
use hillcap_core::certify::{run_full_certification, CertifyConfig, Status};
use hillcap_core::delsarte::DualDegreeSet;
use hillcap_core::ffield::FieldSpec;
use hillcap_core::rational::{int, Rat};
use hillcap_core::scheme::{fuse, relation_permutation_under, OrderingChoice};
use proptest::prelude::*;

fn r(n: i64, d: i64) -> Rat {
    Rat::new(n, d)
}

fn eval(v: &ParametricVector, bind: &[(&str, Rat)]) -> Vec<Rat> {
    let m: BTreeMap<String, Rat> = bind.iter().map(|(k, v)| (k.to_string(), *v)).collect();
    v.entries.iter().map(|f| f.evaluate(&m).unwrap()).collect()
}

/// Row-vector times the reference eigenmatrix (Q = P), plain integer-rational
/// arithmetic.
fn times_p(a: &[Rat]) -> Vec<Rat> {
    let p = hillcap_core::scheme::REFERENCE_P;
    (0..10)
        .map(|j| (0..10).map(|i| a[i] * int(p[i][j])).sum())
        .collect()
}

#[test]
fn toy_system_residuals_vanish() {
    // x + y + z = 6, x - y = 0
    let mut sys = LinearSystem::new(&["x", "y", "z"]);
    sys.push_form(&AffineForm::parse("x + y + z - 6").unwrap());
    sys.push_form(&AffineForm::parse("x - y").unwrap());
    let sol = solve_parametric(&sys).unwrap();
    assert_eq!(sol.rank, 2);
    assert!(sys.residuals(&sol).iter().all(AffineForm::is_zero));
    // x + y = 1, x + y = 2 is infeasible with witness (1, -1)
    let mut bad = LinearSystem::new(&["x", "y"]);
    bad.push_form(&AffineForm::parse("x + y - 1").unwrap());
    bad.push_form(&AffineForm::parse("x + y - 2").unwrap());
    let w = solve_parametric(&bad).unwrap_err();
    assert_eq!(w.combination.iter().filter(|c| **c != int(0)).count(), 2);
}

#[test]
fn outer_family() {
    for poly in [CONWAY, SECOND] {
        let s = &construction(poly).scheme;
        let fam = proof::outer_family(s).unwrap();
        assert!(fam.matches_printed());
        assert_eq!(fam.solution.rank, 6);
        assert!(fam.system.residuals(&fam.solution).iter().all(AffineForm::is_zero));
        let want = ParametricVector::parse(&[
            "0",
            "y5 + 3/2 y8 - 110",
            "22",
            "-y5 - y8 + 110",
            "1/2 y8",
            "y5",
            "y8",
            "y8",
            "y8",
            "-y5 - 4 y8 + 330",
        ])
        .unwrap();
        assert_eq!(fam.row, want);
        // spot values: row sums to 352 and the killed weighted sums vanish
        for (y5, y8) in [(r(0, 1), r(0, 1)), (r(7, 1), r(10, 1)), (r(1, 3), r(5, 2))] {
            let row = eval(&fam.row, &[("y5", y5), ("y8", y8)]);
            assert_eq!(row.iter().sum::<Rat>(), int(352));
            let p = hillcap_core::scheme::REFERENCE_P;
            for j in proof::ANNIHILATED {
                let c: Rat = (0..10).map(|i| r(p[j][i], p[0][i]) * row[i]).sum();
                assert_eq!(c, int(0), "j = {j}");
            }
        }
    }
}

#[test]
fn inner_family() {
    for poly in [CONWAY, SECOND] {
        let s = &construction(poly).scheme;
        let fam = proof::inner_family(s).unwrap();
        assert!(fam.matches_printed());
        assert!(fam.general_aq_matches);
        assert!(!fam.general_aq_matches_without_x7);
        assert!(fam.system.residuals(&fam.solution).iter().all(AffineForm::is_zero));
        for (x1, x8) in [(r(0, 1), r(0, 1)), (r(117, 8), r(351, 4)), (r(3, 1), r(-5, 7))] {
            let a = eval(&fam.a, &[("x1", x1), ("x8", x8)]);
            assert_eq!(a[0], int(1));
            assert_eq!(a[2], int(0));
            assert_eq!(a.iter().sum::<Rat>(), int(352));
            let aq = times_p(&a);
            assert_eq!(aq, eval(&fam.aq, &[("x1", x1), ("x8", x8)]));
            for j in proof::ANNIHILATED {
                assert_eq!(aq[j], int(0));
            }
            assert_eq!(aq[2], int(128) * x8 - int(7488));
            assert_eq!(aq[5], int(3744) + int(128) * x1 - int(64) * x8);
            assert_eq!(aq[9], int(7488) - int(128) * x1 - int(64) * x8);
        }
        assert_eq!(proof::support(&fam.aq), DualDegreeSet::from_indices([2, 5, 9]));
    }
}

#[test]
fn tau_consistency_and_case_split() {
    let c = construction(CONWAY);
    let s = &c.scheme;
    let perm = relation_permutation_under(&c.field, &c.tau, s).unwrap();
    let support = proof::permuted_inner_support(s, &perm.classes, &perm.eigenspaces).unwrap();
    assert_eq!(support, DualDegreeSet::from_indices([3, 5, 8]));

    let fusion = fuse(s, &fusion_f_groups(10)).unwrap();
    let inner = proof::inner_family(s).unwrap();
    let split = proof::fusion_case_split(&inner, &fusion).unwrap();
    assert!(split.exhaustive);
    assert_eq!(split.roots, vec![(1, r(117, 2)), (2, r(351, 4))]);
    // a_F Q_F with Q_F = P_F = [[1,1638,2457],[1,38,-39],[1,-26,25]]
    for x8 in [r(117, 2), r(351, 4), r(3, 1)] {
        let af = [int(1), int(2) * x8, int(351) - int(2) * x8];
        let qf = [[1, 1638, 2457], [1, 38, -39], [1, -26, 25]];
        let t: Vec<Rat> = (0..3)
            .map(|j| (0..3).map(|i| af[i] * int(qf[i][j])).sum())
            .collect();
        assert_eq!(t, eval(&split.afq_f, &[("x8", x8)]));
        assert_eq!(t[1], int(128) * x8 - int(7488));
        assert_eq!(t[2], int(11232) - int(128) * x8);
    }

    let sub = c.field.subfield_elements(64).unwrap();
    let sub_dd = hillcap_core::delsarte::dual_degree(&hillcap_core::delsarte::macwilliams(
        &hillcap_core::delsarte::inner_distribution(s, &sub).unwrap(),
        s,
    ));
    let case1 = proof::close_case_1(&split, &sub_dd, 64).unwrap();
    assert!(case1.contradiction);
    assert_eq!(case1.roos_value, r(11, 2));
    assert_eq!(case1.dual_degree, DualDegreeSet::from_indices([5, 9]));
    assert_eq!(case1.interval, (Some(int(0)), Some(r(117, 4))));

    let case2 = proof::close_case_2(&split, &perm.eigenspaces).unwrap();
    assert!(case2.contradiction);
    assert_eq!(case2.roos_value, r(121, 4));
    assert_eq!(case2.interval, (Some(r(117, 8)), Some(r(117, 8))));
    assert_eq!(case2.dual_degree, DualDegreeSet::from_indices([2]));
    assert_eq!(case2.partner_dual_degree, DualDegreeSet::from_indices([3]));
}

#[test]
fn nonnegativity_interval_by_hand() {
    let forms = [
        AffineForm::parse("t").unwrap(),
        AffineForm::parse("-2 t + 5").unwrap(),
    ];
    assert_eq!(
        nonnegativity_interval(&forms, "t").unwrap(),
        (Some(int(0)), Some(r(5, 2)))
    );
    let bad = [AffineForm::parse("-1").unwrap()];
    assert_eq!(nonnegativity_interval(&bad, "t"), Err(0));
}

fn config(poly: u32, ordering: OrderingChoice, variant: usize) -> CertifyConfig {
    CertifyConfig {
        field: FieldSpec::new(poly),
        ordering,
        ordering_variant: variant,
        ..Default::default()
    }
}

#[test]
fn certificate_is_deterministic_and_confirmed() {
    let a = run_full_certification(&CertifyConfig::default());
    let b = run_full_certification(&CertifyConfig::default());
    assert_eq!(a.render_text(), b.render_text());
    assert_eq!(a.render_jsonl(), b.render_jsonl());
    assert!(a.is_confirmed());
    assert_eq!(a.steps.len(), 18);
    assert_eq!(a.count(Status::Assumed), 2);
    assert_eq!(a.count(Status::Failed), 0);
    for line in a.render_jsonl().lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["schema_version"], 1);
    }
}

#[test]
fn verdict_is_frame_independent() {
    let base = run_full_certification(&CertifyConfig::default());
    let roos = |c: &hillcap_core::certify::Certificate| {
        (
            c.step("proof.case_1").unwrap().value("roos_value").map(str::to_string),
            c.step("proof.case_2").unwrap().value("roos_value").map(str::to_string),
        )
    };
    assert_eq!(roos(&base), (Some("11/2".into()), Some("121/4".into())));
    // P alone leaves a (6 7) ambiguity; the run pins it via GF(64)
    for (cfg, relabel) in [
        (config(CONWAY, OrderingChoice::Standard, 0), "identity"),
        (config(CONWAY, OrderingChoice::Standard, 1), "(6 7)"),
        (config(CONWAY, OrderingChoice::TauSwapped, 0), "(6 7)"),
        (config(CONWAY, OrderingChoice::TauSwapped, 1), "identity"),
        (config(SECOND, OrderingChoice::Standard, 0), "identity"),
        (config(SECOND, OrderingChoice::TauSwapped, 1), "identity"),
    ] {
        let c = run_full_certification(&cfg);
        assert!(c.is_confirmed(), "{cfg:?}");
        assert_eq!(roos(&c), roos(&base));
        assert_eq!(c.count(Status::Assumed), 2);
        assert_eq!(
            c.step("scheme.build").unwrap().value("relabelling"),
            Some(relabel),
            "{cfg:?}"
        );
    }
}

#[test]
fn corrupted_connection_set_fails_at_the_graph_step() {
    let c = construction(CONWAY);
    let mut set = c.connection.set.clone();
    set.remove(17);
    let cert = run_full_certification(&CertifyConfig {
        connection_override: Some(set),
        ..Default::default()
    });
    assert!(!cert.is_confirmed());
    let failed = cert.steps.iter().find(|s| s.status == Status::Failed).unwrap();
    assert_eq!(failed.anchor, "graph.connection_set");
    assert!(failed.notes.iter().any(|n| n.contains("parameter mismatch")));
    assert_eq!(cert.failed_step, Some(failed.index));
}

fn affine_form() -> impl Strategy<Value = AffineForm> {
    let rat = (-50i64..50, 1i64..9).prop_map(|(n, d)| Rat::new(n, d));
    (
        rat.clone(),
        prop::collection::btree_map(prop::sample::select(vec!["x1", "x8", "y5", "t"]), rat, 0..4),
    )
        .prop_map(|(c, terms)| {
            let terms: Vec<(&str, Rat)> = terms.into_iter().collect();
            AffineForm::from_terms(c, &terms)
        })
}

proptest! {
    #[test]
    fn affine_form_display_round_trips(f in affine_form()) {
        let text = f.to_string();
        prop_assert_eq!(AffineForm::parse(&text), Some(f));
    }

    #[test]
    fn substitution_commutes_with_evaluation(f in affine_form(), v in -20i64..20) {
        let m: BTreeMap<String, Rat> =
            ["x1", "x8", "y5", "t"].iter().map(|k| (k.to_string(), int(v))).collect();
        let g = f.substitute_value("t", int(v));
        prop_assert_eq!(g.evaluate(&m), f.evaluate(&m));
    }
}
