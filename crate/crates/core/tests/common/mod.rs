//! Oracles shared by the integration tests. Nothing here calls into the
//! library's field tables or eigenmatrix code.

#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::OnceLock;

use hillcap_core::ffield::FieldSpec;
use hillcap_core::scheme::{self, Construction, ConstructionOptions};

pub const CONWAY: u32 = 0x10EB;
pub const SECOND: u32 = 0x1053;

/// Shift-and-add multiplication modulo a degree-12 polynomial.
pub fn gf_mul(mut a: u32, mut b: u32, poly: u32) -> u32 {
    let mut acc = 0;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a & 0x1000 != 0 {
            a ^= poly;
        }
    }
    acc
}

pub fn gf_pow(x: u32, mut e: u64, poly: u32) -> u32 {
    let (mut base, mut acc) = (x, 1);
    while e > 0 {
        if e & 1 == 1 {
            acc = gf_mul(acc, base, poly);
        }
        base = gf_mul(base, base, poly);
        e >>= 1;
    }
    acc
}

/// Evaluates a GF(2) polynomial (bit i = coefficient of t^i) at x.
pub fn eval_poly(coeffs: u32, x: u32, poly: u32) -> u32 {
    let mut acc = 0;
    for i in (0..32).rev() {
        acc = gf_mul(acc, x, poly);
        if coeffs >> i & 1 == 1 {
            acc ^= 1;
        }
    }
    acc
}

/// Tr_{GF(4096)/GF(4)}(x) = x + x^4 + ... + x^(4^5).
pub fn trace_to_gf4(x: u32, poly: u32) -> u32 {
    let mut acc = 0;
    let mut y = x;
    for _ in 0..6 {
        acc ^= y;
        y = gf_mul(gf_mul(y, y, poly), gf_mul(y, y, poly), poly);
    }
    acc
}

/// In-place Walsh-Hadamard transform for the dot-product characters
/// (-1)^popcount(x & y).
pub fn wht(v: &mut [i64]) {
    let n = v.len();
    let mut h = 1;
    while h < n {
        for i in (0..n).step_by(2 * h) {
            for j in i..i + h {
                let (a, b) = (v[j], v[j + h]);
                v[j] = a + b;
                v[j + h] = a - b;
            }
        }
        h *= 2;
    }
}

/// For each y, the vector (sum_{x in class i} (-1)^{x.y})_i, computed by a
/// WHT of each class indicator.
pub fn character_rows(coloring: &[u8], n_classes: usize) -> Vec<Vec<i64>> {
    let mut cols = Vec::with_capacity(n_classes);
    for i in 0..n_classes {
        let mut v: Vec<i64> = coloring.iter().map(|&c| (c as usize == i) as i64).collect();
        wht(&mut v);
        cols.push(v);
    }
    (0..coloring.len())
        .map(|y| cols.iter().map(|c| c[y]).collect())
        .collect()
}

/// Distinct character rows with the number of y producing each.
pub fn character_row_counts(coloring: &[u8], n_classes: usize) -> BTreeMap<Vec<i64>, usize> {
    let mut m = BTreeMap::new();
    for r in character_rows(coloring, n_classes) {
        *m.entry(r).or_insert(0) += 1;
    }
    m
}

/// Brute-force independence number by max-degree branching.
pub fn brute_alpha(adj: &[Vec<bool>]) -> usize {
    fn go(adj: &[Vec<bool>], alive: &mut Vec<bool>) -> usize {
        let live: Vec<usize> = (0..adj.len()).filter(|&v| alive[v]).collect();
        if live.is_empty() {
            return 0;
        }
        let deg = |v: usize| live.iter().filter(|&&u| adj[v][u]).count();
        let v = *live.iter().max_by_key(|&&v| deg(v)).unwrap();
        if deg(v) == 0 {
            return live.len();
        }
        // v excluded
        alive[v] = false;
        let without = go(adj, alive);
        // v included: drop its neighbours
        let nb: Vec<usize> = live.iter().copied().filter(|&u| adj[v][u]).collect();
        for &u in &nb {
            alive[u] = false;
        }
        let with = 1 + go(adj, alive);
        for &u in &nb {
            alive[u] = true;
        }
        alive[v] = true;
        without.max(with)
    }
    go(adj, &mut vec![true; adj.len()])
}

pub fn options(poly: u32) -> ConstructionOptions {
    ConstructionOptions {
        field: FieldSpec::new(poly),
        ..Default::default()
    }
}

pub fn construction(poly: u32) -> &'static Construction {
    static A: OnceLock<Construction> = OnceLock::new();
    static B: OnceLock<Construction> = OnceLock::new();
    let cell = match poly {
        CONWAY => &A,
        SECOND => &B,
        _ => panic!("no cached construction for {poly:#x}"),
    };
    cell.get_or_init(|| scheme::construct(&options(poly)).expect("construction succeeds"))
}
