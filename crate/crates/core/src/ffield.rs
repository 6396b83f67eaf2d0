//! GF(2^12) viewed as GF(4^6).
//!
//! Elements are 12-bit words in the polynomial basis of a primitive degree-12
//! binary polynomial; addition is XOR and multiplication goes through
//! exponent/logarithm tables.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A field element as a 12-bit word.
pub type Elem = u16;

pub const DEGREE: u32 = 12;
pub const FIELD_SIZE: usize = 1 << DEGREE;
/// Order of the multiplicative group, 4^6 - 1.
pub const GROUP_ORDER: usize = FIELD_SIZE - 1;
/// Index of the subgroup generating the connection set (|<z^35>| = 117).
pub const COSET_INDEX: usize = 35;
/// z^1365 generates the GF(4) scalars.
pub const GF4_EXPONENT: usize = GROUP_ORDER / 3;
/// Order of the point stabilizer of the cyclotomic graph, 117 * 6.
pub const STABILIZER_ORDER: usize = 702;

const ORDER_PRIMES: [usize; 4] = [3, 5, 7, 13];

/// Conway polynomial x^12 + x^7 + x^6 + x^5 + x^3 + x + 1.
pub const CONWAY_POLY: u32 = 0x10EB;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("polynomial {0:#x} does not have degree 12")]
    WrongDegree(u32),
    #[error("polynomial {0:#x} has zero constant term")]
    ZeroConstantTerm(u32),
    #[error("polynomial {poly:#x} is not irreducible (z^4095 != 1)")]
    Reducible { poly: u32 },
    #[error("polynomial {poly:#x} is not primitive: z^(4095/{prime}) = 1")]
    NotPrimitive { poly: u32, prime: usize },
    #[error("cannot parse {0:?} as a hexadecimal polynomial word")]
    BadHex(String),
    #[error("subfield degree {0} does not divide 12")]
    BadSubfieldDegree(u32),
    #[error("{0} is not a subfield order in the GF(4) tower of GF(4096)")]
    BadSubfieldSize(usize),
    #[error("coset exponent {0} is outside 1..=34")]
    BadCosetExponent(usize),
    #[error("setwise stabilizer has order {found}, expected {expected}")]
    StabilizerOrder { found: usize, expected: usize },
}

/// The defining polynomial of the field, as a 13-bit coefficient word
/// (bit i = coefficient of x^i).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldSpec {
    pub primitive_poly: u32,
}

impl Default for FieldSpec {
    fn default() -> Self {
        FieldSpec { primitive_poly: CONWAY_POLY }
    }
}

impl FieldSpec {
    pub fn new(primitive_poly: u32) -> Self {
        FieldSpec { primitive_poly }
    }

    /// Parses `0x10eb`, `10EB` and similar.
    pub fn parse_hex(s: &str) -> Result<Self, FieldError> {
        let t = s.trim();
        let digits = t
            .strip_prefix("0x")
            .or_else(|| t.strip_prefix("0X"))
            .unwrap_or(t);
        u32::from_str_radix(digits, 16)
            .map(FieldSpec::new)
            .map_err(|_| FieldError::BadHex(s.to_string()))
    }

    pub fn to_hex(self) -> String {
        format!("{:#06x}", self.primitive_poly)
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = (0..=DEGREE)
            .rev()
            .filter(|i| self.primitive_poly >> i & 1 == 1)
            .map(|i| match i {
                0 => "1".to_string(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

/// Exponent and logarithm tables for GF(4096).
#[derive(Clone)]
pub struct FieldTables {
    spec: FieldSpec,
    // doubled so that exp[a + b] needs no reduction for a, b < 4095
    exp: Vec<Elem>,
    log: Vec<u16>,
    trace: Vec<u8>,
}

impl fmt::Debug for FieldTables {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldTables").field("spec", &self.spec).finish()
    }
}

/// Builds the exponent/logarithm tables, rejecting polynomials that are not
/// primitive.
pub fn build_field(spec: FieldSpec) -> Result<FieldTables, FieldError> {
    let poly = spec.primitive_poly;
    if poly >> DEGREE != 1 {
        return Err(FieldError::WrongDegree(poly));
    }
    if poly & 1 == 0 {
        return Err(FieldError::ZeroConstantTerm(poly));
    }

    let mut exp = vec![0 as Elem; 2 * GROUP_ORDER];
    let mut x: u32 = 1;
    for slot in exp.iter_mut().take(GROUP_ORDER) {
        *slot = x as Elem;
        x <<= 1;
        if x >> DEGREE & 1 == 1 {
            x ^= poly;
        }
    }
    if x != 1 {
        return Err(FieldError::Reducible { poly });
    }
    for p in ORDER_PRIMES {
        if exp[GROUP_ORDER / p] == 1 {
            return Err(FieldError::NotPrimitive { poly, prime: p });
        }
    }
    for k in GROUP_ORDER..2 * GROUP_ORDER {
        exp[k] = exp[k - GROUP_ORDER];
    }

    let mut log = vec![u16::MAX; FIELD_SIZE];
    for (k, &e) in exp.iter().take(GROUP_ORDER).enumerate() {
        debug_assert_eq!(log[e as usize], u16::MAX, "exp is not injective");
        log[e as usize] = k as u16;
    }

    let mut tables = FieldTables {
        spec,
        exp,
        log,
        trace: Vec::new(),
    };
    let trace = (0..FIELD_SIZE)
        .map(|x| tables.trace_sum(x as Elem, 1) as u8)
        .collect();
    tables.trace = trace;
    Ok(tables)
}

impl FieldTables {
    pub fn spec(&self) -> FieldSpec {
        self.spec
    }

    /// z^k for any k.
    #[inline]
    pub fn exp(&self, k: usize) -> Elem {
        self.exp[k % GROUP_ORDER]
    }

    #[inline]
    pub fn log(&self, x: Elem) -> Option<usize> {
        match self.log[x as usize] {
            u16::MAX => None,
            l => Some(l as usize),
        }
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        a ^ b
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[self.log[a as usize] as usize + self.log[b as usize] as usize]
    }

    #[inline]
    pub fn inv(&self, a: Elem) -> Option<Elem> {
        self.log(a).map(|l| self.exp[(GROUP_ORDER - l) % GROUP_ORDER])
    }

    pub fn div(&self, a: Elem, b: Elem) -> Option<Elem> {
        self.inv(b).map(|ib| self.mul(a, ib))
    }

    pub fn pow(&self, x: Elem, e: u64) -> Elem {
        if e == 0 {
            return 1;
        }
        match self.log(x) {
            None => 0,
            Some(l) => self.exp((l as u64 * (e % GROUP_ORDER as u64) % GROUP_ORDER as u64) as usize),
        }
    }

    /// x^(2^k).
    #[inline]
    pub fn frobenius(&self, x: Elem, k: u32) -> Elem {
        match self.log(x) {
            None => 0,
            Some(l) => self.exp((l << (k % DEGREE)) % GROUP_ORDER),
        }
    }

    /// Absolute trace Tr(x) in {0, 1}.
    #[inline]
    pub fn abs_trace(&self, x: Elem) -> u8 {
        self.trace[x as usize]
    }

    /// Additive character value (-1)^Tr(a*x).
    #[inline]
    pub fn character(&self, a: Elem, x: Elem) -> i64 {
        1 - 2 * self.abs_trace(self.mul(a, x)) as i64
    }

    fn trace_sum(&self, x: Elem, d: u32) -> Elem {
        (0..DEGREE / d).fold(0, |acc, i| acc ^ self.frobenius(x, d * i))
    }

    /// Relative trace to the subfield of degree `d` over GF(2), the sum of
    /// x^(2^(d*i)) for i in 0..12/d.
    pub fn trace_to_base(&self, x: Elem, d: u32) -> Result<Elem, FieldError> {
        if d == 0 || DEGREE % d != 0 {
            return Err(FieldError::BadSubfieldDegree(d));
        }
        Ok(self.trace_sum(x, d))
    }

    /// All solutions of x^size = x, sorted. Only the subfields compatible
    /// with the GF(4) tower (orders 2, 4, 16, 64, 4096) are accepted.
    pub fn subfield_elements(&self, size: usize) -> Result<Vec<Elem>, FieldError> {
        if ![2, 4, 16, 64, 4096].contains(&size) {
            return Err(FieldError::BadSubfieldSize(size));
        }
        Ok((0..FIELD_SIZE as u32)
            .map(|x| x as Elem)
            .filter(|&x| self.pow(x, size as u64) == x)
            .collect())
    }

    /// The cyclic subgroup generated by z^step.
    pub fn cyclic_subgroup(&self, step: usize) -> Vec<Elem> {
        let order = GROUP_ORDER / num_integer::gcd(step, GROUP_ORDER);
        let mut v: Vec<Elem> = (0..order).map(|i| self.exp(i * step)).collect();
        v.sort_unstable();
        v
    }

    /// The nonzero GF(4) scalars 1, w, w^2 with w = z^1365.
    pub fn gf4_scalars(&self) -> [Elem; 3] {
        [1, self.exp(GF4_EXPONENT), self.exp(2 * GF4_EXPONENT)]
    }

    /// <z^35> union <z^35> z^e, sorted.
    pub fn connection_set(&self, coset_exponent: usize) -> Result<Vec<Elem>, FieldError> {
        if !(1..COSET_INDEX).contains(&coset_exponent) {
            return Err(FieldError::BadCosetExponent(coset_exponent));
        }
        let mut v: Vec<Elem> = (0..GROUP_ORDER / COSET_INDEX)
            .flat_map(|i| {
                [
                    self.exp(i * COSET_INDEX),
                    self.exp(i * COSET_INDEX + coset_exponent),
                ]
            })
            .collect();
        v.sort_unstable();
        Ok(v)
    }
}

/// Membership table over all 4096 words.
pub fn membership(set: &[Elem]) -> Vec<bool> {
    let mut m = vec![false; FIELD_SIZE];
    for &x in set {
        m[x as usize] = true;
    }
    m
}

/// x -> c * x^(2^k), with c nonzero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SemilinearMap {
    pub frobenius_power: u32,
    pub multiplier: Elem,
}

impl SemilinearMap {
    pub fn identity() -> Self {
        SemilinearMap {
            frobenius_power: 0,
            multiplier: 1,
        }
    }

    pub fn new(multiplier: Elem, frobenius_power: u32) -> Self {
        assert!(multiplier != 0, "semilinear map multiplier must be nonzero");
        SemilinearMap {
            frobenius_power: frobenius_power % DEGREE,
            multiplier,
        }
    }

    #[inline]
    pub fn apply(&self, f: &FieldTables, x: Elem) -> Elem {
        f.mul(self.multiplier, f.frobenius(x, self.frobenius_power))
    }

    /// `self` after `other`.
    pub fn compose(&self, f: &FieldTables, other: &SemilinearMap) -> SemilinearMap {
        SemilinearMap::new(
            f.mul(
                self.multiplier,
                f.frobenius(other.multiplier, self.frobenius_power),
            ),
            self.frobenius_power + other.frobenius_power,
        )
    }

    pub fn inverse(&self, f: &FieldTables) -> SemilinearMap {
        let back = (DEGREE - self.frobenius_power) % DEGREE;
        let c = f.inv(self.multiplier).expect("nonzero multiplier");
        SemilinearMap::new(f.frobenius(c, back), back)
    }

    pub fn image(&self, f: &FieldTables, set: &[Elem]) -> Vec<Elem> {
        let mut v: Vec<Elem> = set.iter().map(|&x| self.apply(f, x)).collect();
        v.sort_unstable();
        v
    }

    /// Human-readable form `x -> z^e * x^(2^k)`.
    pub fn describe(&self, f: &FieldTables) -> String {
        let e = f.log(self.multiplier).expect("nonzero multiplier");
        format!("x -> z^{e} * x^(2^{})", self.frobenius_power)
    }
}

/// All semilinear maps fixing `set` setwise, sorted.
pub fn setwise_stabilizer(f: &FieldTables, set: &[Elem]) -> Vec<SemilinearMap> {
    let Some(&anchor) = set.iter().find(|&&x| x != 0) else {
        return Vec::new();
    };
    let member = membership(set);
    let mut maps = Vec::new();
    for k in 0..DEGREE {
        let anchor_img = f.frobenius(anchor, k);
        // c must send anchor^(2^k) into the set
        for &target in set.iter().filter(|&&t| t != 0) {
            let c = f.div(target, anchor_img).expect("nonzero");
            let m = SemilinearMap::new(c, k);
            if set.iter().all(|&x| member[m.apply(f, x) as usize]) {
                maps.push(m);
            }
        }
    }
    maps.sort_unstable();
    maps.dedup();
    maps
}

/// The stabilizer of the connection set, required to have order 702.
pub fn semilinear_stabilizer(
    f: &FieldTables,
    set: &[Elem],
) -> Result<Vec<SemilinearMap>, FieldError> {
    let maps = setwise_stabilizer(f, set);
    if maps.len() != STABILIZER_ORDER {
        return Err(FieldError::StabilizerOrder {
            found: maps.len(),
            expected: STABILIZER_ORDER,
        });
    }
    Ok(maps)
}

/// Maps x -> c x^2 whose square lies in `stabilizer` but which move `set`.
/// Sorted by the logarithm of the multiplier.
pub fn frobenius_twists(
    f: &FieldTables,
    set: &[Elem],
    stabilizer: &[SemilinearMap],
) -> Vec<SemilinearMap> {
    let stab: HashSet<SemilinearMap> = stabilizer.iter().copied().collect();
    let mut sorted_set = set.to_vec();
    sorted_set.sort_unstable();
    (0..GROUP_ORDER)
        .map(|e| SemilinearMap::new(f.exp(e), 1))
        .filter(|m| stab.contains(&m.compose(f, m)))
        .filter(|m| m.image(f, set) != sorted_set)
        .collect()
}
