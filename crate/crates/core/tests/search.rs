mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use common::{brute_alpha, construction, gf_pow, CONWAY, SECOND};
use hillcap_core::ffield::{membership, Elem};
use hillcap_core::search::{
    self, validate_coclique, BitGraph, CocliqueVerdict, SearchConfig, Strategy, RATIO_BOUND,
};
use proptest::prelude::*;

/// The connection set from the oracle arithmetic: z^k with k = 0 or 7 mod 35.
fn oracle_connection(poly: u32) -> BTreeSet<u32> {
    (0..4095u64)
        .filter(|k| k % 35 == 0 || k % 35 == 7)
        .map(|k| gf_pow(2, k, poly))
        .collect()
}

fn pair_check(conn: &BTreeSet<u32>, set: &[Elem]) -> bool {
    let distinct: BTreeSet<_> = set.iter().collect();
    if distinct.len() != set.len() {
        return false;
    }
    set.iter()
        .all(|&u| set.iter().all(|&v| u == v || !conn.contains(&((u ^ v) as u32))))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn validation_agrees_with_pair_check(set in prop::collection::vec(0u16..4096, 0..40)) {
        let conn = oracle_connection(CONWAY);
        let table = membership(&construction(CONWAY).connection.set);
        let verdict = validate_coclique(&table, &set);
        prop_assert_eq!(verdict.is_valid(), pair_check(&conn, &set));
        if let CocliqueVerdict::Adjacent(u, v) = verdict {
            prop_assert!(conn.contains(&((u ^ v) as u32)));
        }
    }

    #[test]
    fn bit_rows_match_oracle(u in 0usize..4096, v in 0usize..4096) {
        let conn = oracle_connection(SECOND);
        let graph = BitGraph::cayley(&construction(SECOND).connection.set);
        prop_assert_eq!(graph.adjacent(u, v), conn.contains(&((u ^ v) as u32)));
    }
}

#[test]
fn cocliques_from_greedy_grow_into_valid_sets() {
    // grow a coclique by hand, then make sure validation accepts it and
    // rejects it after adding a neighbour
    let conn = oracle_connection(CONWAY);
    let mut set: Vec<Elem> = Vec::new();
    for x in 0..4096u16 {
        if set.iter().all(|&y| !conn.contains(&((x ^ y) as u32))) {
            set.push(x);
        }
    }
    let table = membership(&construction(CONWAY).connection.set);
    assert!(validate_coclique(&table, &set).is_valid());
    let mut bad = set.clone();
    bad.push(set[0] ^ construction(CONWAY).connection.set[0]);
    assert!(!validate_coclique(&table, &bad).is_valid());
    bad.pop();
    bad.push(set[1]);
    assert_eq!(validate_coclique(&table, &bad), CocliqueVerdict::Duplicate(set[1]));
}

#[test]
fn spot_check_rows() {
    for poly in [CONWAY, SECOND] {
        let conn = &construction(poly).connection.set;
        let graph = BitGraph::cayley(conn);
        assert!(search::spot_check_rows(&graph, conn, 100_000, 5));
        assert!((0..4096).all(|u| graph.degree(u) == 234));
    }
}

#[test]
fn exact_search_on_subfield_matches_brute_force() {
    for poly in [CONWAY, SECOND] {
        let c = construction(poly);
        let sub = c.field.subfield_elements(64).unwrap();
        let full = BitGraph::cayley(&c.connection.set);
        let induced = full.induced(&sub);
        assert_eq!(induced.len(), 64);
        assert!((0..64).all(|u| induced.degree(u) == 9));
        let conn = oracle_connection(poly);
        let adj: Vec<Vec<bool>> = sub
            .iter()
            .map(|&u| {
                sub.iter()
                    .map(|&v| u != v && conn.contains(&((u ^ v) as u32)))
                    .collect()
            })
            .collect();
        let alpha = brute_alpha(&adj);
        let report = search::branch_and_bound(
            &induced,
            &SearchConfig {
                strategy: Strategy::Exact,
                time_budget: 60.0,
                ..Default::default()
            },
        );
        assert!(report.proven_optimal);
        assert_eq!(report.size, alpha);
        assert_eq!(alpha, 16);
        assert!(pair_check(&conn, &report.best));
    }
}

#[test]
fn exact_search_small_graphs() {
    // C5 and C4 both have independence number 2
    let c5 = BitGraph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]);
    let c4 = BitGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
    let config = SearchConfig {
        strategy: Strategy::Exact,
        ..Default::default()
    };
    for (g, want) in [(c5, 2), (c4, 2)] {
        let r = search::branch_and_bound(&g, &config);
        assert_eq!(r.size, want);
        assert!(r.proven_optimal);
    }
}

#[test]
fn greedy_is_reproducible_and_fast() {
    let graph = BitGraph::cayley(&construction(CONWAY).connection.set);
    let config = SearchConfig {
        seed: 42,
        time_budget: 10.0,
        strategy: Strategy::Greedy,
        max_iterations: 32,
        ..Default::default()
    };
    let start = Instant::now();
    let a = search::search(&graph, &config).unwrap();
    assert!(start.elapsed() < Duration::from_secs(10));
    let b = search::search(&graph, &config).unwrap();
    assert_eq!(a.best, b.best);
    assert!(a.size >= 17);
    assert!(a.size <= RATIO_BOUND);
    assert!(!a.budget_exhausted);
    let table = membership(&construction(CONWAY).connection.set);
    assert!(validate_coclique(&table, &a.best).is_valid());
    // sizes in the history strictly increase and end at the best size
    assert!(a.history.windows(2).all(|w| w[0].size < w[1].size));
    assert_eq!(a.history.last().unwrap().size, a.size);

    let c = search::search(&graph, &SearchConfig { seed: 43, ..config }).unwrap();
    assert!(validate_coclique(&table, &c.best).is_valid());
}

#[test]
fn every_strategy_returns_valid_cocliques() {
    let c = construction(SECOND);
    let graph = BitGraph::cayley(&c.connection.set);
    let conn = oracle_connection(SECOND);
    for strategy in [Strategy::Greedy, Strategy::Local, Strategy::Exact] {
        let report = search::search(
            &graph,
            &SearchConfig {
                seed: 1,
                time_budget: 2.0,
                strategy,
                max_iterations: 20,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(report.size >= 17, "{strategy}");
        assert!(pair_check(&conn, &report.best), "{strategy}");
        assert_eq!(report.best.len(), report.size);
    }
}

#[test]
fn fixed_root_is_respected() {
    let graph = BitGraph::cayley(&construction(CONWAY).connection.set);
    let report = search::search(
        &graph,
        &SearchConfig {
            seed: 9,
            max_iterations: 4,
            fix_root: Some(0x123),
            ..Default::default()
        },
    )
    .unwrap();
    assert!(report.best.contains(&0x123));
}

#[test]
fn config_validation() {
    let bad = SearchConfig {
        target_size: RATIO_BOUND + 1,
        ..Default::default()
    };
    assert!(bad.validate().is_err());
    let bad = SearchConfig {
        time_budget: f64::NAN,
        ..Default::default()
    };
    assert!(bad.validate().is_err());
    assert!("simulated".parse::<Strategy>().is_err());
}
