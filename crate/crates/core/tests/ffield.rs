mod common;

use common::{eval_poly, gf_mul, gf_pow, CONWAY, SECOND};
use hillcap_core::ffield::{self, build_field, FieldSpec, SemilinearMap, GROUP_ORDER};
use proptest::prelude::*;

fn tables(poly: u32) -> ffield::FieldTables {
    build_field(FieldSpec::new(poly)).unwrap()
}

#[test]
fn table_multiplication_matches_shift_and_add() {
    for poly in [CONWAY, SECOND] {
        let f = tables(poly);
        for a in (0..4096u32).step_by(7) {
            for b in (0..4096u32).step_by(13) {
                assert_eq!(f.mul(a as _, b as _) as u32, gf_mul(a, b, poly));
            }
        }
        assert_eq!(f.exp(1), 2);
    }
}

#[test]
fn conway_compatibility() {
    // Conway polynomials of the subfields GF(4), GF(8), GF(16), GF(64)
    // vanish at the norm-compatible powers of the GF(4096) generator.
    let subfields = [(2, 0b111), (3, 0b1011), (4, 0b10011), (6, 0b101_1011)];
    for (d, conway) in subfields {
        let e = (GROUP_ORDER / ((1 << d) - 1)) as u64;
        let root = gf_pow(2, e, CONWAY);
        assert_eq!(eval_poly(conway, root, CONWAY), 0, "GF(2^{d})");
    }
    // the second polynomial is primitive but not Conway-compatible at GF(64)
    let root = gf_pow(2, 65, SECOND);
    assert_ne!(eval_poly(0b101_1011, root, SECOND), 0);
}

#[test]
fn rejects_non_primitive() {
    // x^12 + 1 is reducible; for the rest the order of z decides
    assert!(build_field(FieldSpec::new(0x1001)).is_err());
    for poly in [0x1009u32, 0x1053, 0x10EB, 0x1071] {
        let order = (1..=GROUP_ORDER as u64)
            .find(|&e| gf_pow(2, e, poly) == 1)
            .unwrap();
        assert_eq!(build_field(FieldSpec::new(poly)).is_ok(), order == GROUP_ORDER as u64, "{poly:#x}");
    }
}

#[test]
fn subfield_is_fixed_by_64th_power() {
    for poly in [CONWAY, SECOND] {
        let f = tables(poly);
        let mut got: Vec<u32> = f.subfield_elements(64).unwrap().iter().map(|&x| x as u32).collect();
        got.sort_unstable();
        let want: Vec<u32> = (0..4096).filter(|&x| gf_pow(x, 64, poly) == x).collect();
        assert_eq!(got, want);
        let mut gf4: Vec<u32> = f.gf4_scalars().iter().map(|&x| x as u32).collect();
        gf4.sort_unstable();
        let want4: Vec<u32> = (1..4096).filter(|&x| gf_pow(x, 3, poly) == 1).collect();
        assert_eq!(gf4, want4);
    }
}

#[test]
fn connection_set_is_coset_union() {
    for poly in [CONWAY, SECOND] {
        let f = tables(poly);
        let set = f.connection_set(7).unwrap();
        assert_eq!(set.len(), 234);
        // the subgroup <z^35> and its coset z^7 <z^35>
        let mut want: Vec<u32> = (0..GROUP_ORDER as u64)
            .filter(|k| k % 35 == 0 || k % 35 == 7)
            .map(|k| gf_pow(2, k, poly))
            .collect();
        want.sort_unstable();
        let got: Vec<u32> = set.iter().map(|&x| x as u32).collect();
        assert_eq!(got, want);
    }
}

#[test]
fn field_spec_hex_round_trip() {
    let s = FieldSpec::parse_hex("0x10EB").unwrap();
    assert_eq!(s, FieldSpec::new(CONWAY));
    assert_eq!(FieldSpec::parse_hex(&s.to_hex()).unwrap(), s);
    assert!(FieldSpec::parse_hex("zz").is_err());
}

proptest! {
    #[test]
    fn field_axioms(a in 0u16..4096, b in 0u16..4096, c in 0u16..4096) {
        let f = tables(CONWAY);
        prop_assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
        prop_assert_eq!(f.mul(a, b), f.mul(b, a));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.mul(a, 1), a);
        if a != 0 {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            prop_assert_eq!(f.div(f.mul(a, b), a), Some(b));
        } else {
            prop_assert_eq!(f.inv(a), None);
        }
        prop_assert_eq!(f.frobenius(f.add(a, b), 1), f.add(f.frobenius(a, 1), f.frobenius(b, 1)));
        prop_assert_eq!(f.frobenius(a, 12), a);
        prop_assert_eq!(f.pow(a, 4096), a);
    }

    #[test]
    fn semilinear_maps_compose_and_invert(m in 1u16..4096, k in 0u32..12, x in 0u16..4096) {
        let f = tables(SECOND);
        let g = SemilinearMap::new(m, k);
        let inv = g.inverse(&f);
        prop_assert_eq!(inv.apply(&f, g.apply(&f, x)), x);
        let h = g.compose(&f, &g);
        prop_assert_eq!(h.apply(&f, x), g.apply(&f, g.apply(&f, x)));
    }
}
