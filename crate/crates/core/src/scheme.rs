//! The 9-class translation scheme on GF(4096) and its fusions.
//!
//! Relations are never stored as 4096x4096 matrices. Because the scheme is a
//! translation scheme, the class of a pair (x, y) is the class of x ^ y, so a
//! single 4096-entry difference coloring carries everything.

use std::collections::{BTreeMap, HashMap, VecDeque};

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exec::Exec;
use crate::ffield::{
    self, frobenius_twists, membership, semilinear_stabilizer, Elem, FieldError, FieldSpec,
    FieldTables, SemilinearMap, COSET_INDEX, FIELD_SIZE, GROUP_ORDER,
};
use crate::rational::{common_denominator, Rat};

pub const VERTICES: usize = FIELD_SIZE;
/// Canonical class valencies of the 9-class scheme.
pub const VALENCIES: [u64; 10] = [1, 117, 234, 234, 351, 351, 702, 702, 702, 702];
/// The coset exponent e in <z^35> u <z^35> z^e.
pub const DEFAULT_COSET_EXPONENT: usize = 7;
/// Canonical class index of the graph's own relation.
pub const GRAPH_CLASS: usize = 2;

/// Reference eigenmatrix; canonical class and eigenspace orderings are
/// defined by exact agreement with it.
pub const REFERENCE_P: [[i64; 10]; 10] = [
    [1, 117, 234, 234, 351, 351, 702, 702, 702, 702],
    [1, -27, 10, 10, 15, 63, 30, 30, -66, -66],
    [1, 5, -22, 10, 15, -33, 30, 30, 30, -66],
    [1, 5, 10, -22, 15, -33, 30, 30, -66, 30],
    [1, 5, 10, 10, 47, -1, -34, -34, -2, -2],
    [1, 21, -22, -22, -1, 31, -2, -2, -2, -2],
    [1, 5, 10, 10, -17, -1, 30, -34, -2, -2],
    [1, 5, 10, 10, -17, -1, -34, 30, -2, -2],
    [1, -11, 10, -22, -1, -1, -2, -2, 30, -2],
    [1, -11, -22, 10, -1, -1, -2, -2, -2, 30],
];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SchemeError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("Cayley graph is not strongly regular: {0}")]
    NotStronglyRegular(String),
    #[error("graph parameters {found} differ from expected {expected}")]
    ParameterMismatch { found: SrgParams, expected: SrgParams },
    #[error("no coset exponent in 1..=34 yields the expected graph")]
    NoValidCosetExponent,
    #[error("orbit sizes {found:?} differ from the expected {expected:?}")]
    OrbitSizes { found: Vec<usize>, expected: Vec<usize> },
    #[error("intersection numbers not constant on class {class}: differences {first:#05x} and {other:#05x} disagree")]
    IntersectionNotConstant { class: usize, first: Elem, other: Elem },
    #[error("character sums produce {found} distinct rows, expected {expected}")]
    EigenRowCount { found: usize, expected: usize },
    #[error("P Q differs from {VERTICES} I")]
    NotInverse,
    #[error("no class ordering reproduces the reference eigenmatrix")]
    NoCanonicalOrdering,
    #[error("Q differs from P under the canonical ordering")]
    NotFormallySelfDual,
    #[error("invalid class partition: {0}")]
    BadPartition(String),
    #[error("class partition is not a fusion: {0}")]
    NotAFusion(String),
    #[error("map does not permute the classes: class {class} is split")]
    NotNormalizing { class: usize },
    #[error("no Frobenius twist normalizes the scheme")]
    NoInvolution,
    #[error("scheme axiom violated: {0}")]
    Axiom(String),
}

/// Parameters (v, k, lambda, mu) of a strongly regular graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SrgParams {
    pub v: i64,
    pub k: i64,
    pub lambda: i64,
    pub mu: i64,
}

impl std::fmt::Display for SrgParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "SRG({}, {}, {}, {})", self.v, self.k, self.lambda, self.mu)
    }
}

impl SrgParams {
    pub const fn new(v: i64, k: i64, lambda: i64, mu: i64) -> Self {
        SrgParams { v, k, lambda, mu }
    }

    /// k (k - lambda - 1) = (v - k - 1) mu.
    pub fn is_feasible(&self) -> bool {
        self.k * (self.k - self.lambda - 1) == (self.v - self.k - 1) * self.mu
    }

    pub fn complement(&self) -> SrgParams {
        let (v, k, l, m) = (self.v, self.k, self.lambda, self.mu);
        SrgParams::new(v, v - k - 1, v - 2 - 2 * k + m, v - 2 * k + l)
    }

    /// Restricted eigenvalues (r, s) with r > s, when they are integers.
    pub fn eigenvalues(&self) -> Option<(i64, i64)> {
        let b = self.lambda - self.mu;
        let disc = b * b + 4 * (self.k - self.mu);
        if disc < 0 {
            return None;
        }
        let root = (disc as f64).sqrt().round() as i64;
        let root = (root - 1..=root + 1).find(|r| r * r == disc)?;
        if (b + root) % 2 != 0 {
            return None;
        }
        Some(((b + root) / 2, (b - root) / 2))
    }
}

pub const GRAPH_PARAMS: SrgParams = SrgParams::new(4096, 234, 2, 14);
pub const FUSION_F_PARAMS: SrgParams = SrgParams::new(4096, 1638, 662, 650);

/// Direct strong-regularity check of Cay(GF(2)^12, set) by counting, for
/// every nonzero d, the pairs (a, b) in set^2 with a ^ b = d.
pub fn srg_check(set: &[Elem]) -> Result<SrgParams, SchemeError> {
    let member = membership(set);
    if member[0] {
        return Err(SchemeError::NotStronglyRegular(
            "connection set contains 0".into(),
        ));
    }
    let mut common = vec![0i64; FIELD_SIZE];
    for &a in set {
        for &b in set {
            common[(a ^ b) as usize] += 1;
        }
    }
    let mut lambda = None;
    let mut mu = None;
    for d in 1..FIELD_SIZE {
        let slot = if member[d] { &mut lambda } else { &mut mu };
        match *slot {
            None => *slot = Some(common[d]),
            Some(c) if c != common[d] => {
                let kind = if member[d] { "adjacent" } else { "non-adjacent" };
                return Err(SchemeError::NotStronglyRegular(format!(
                    "k = {}, {kind} pairs have {c} and {} common neighbours (difference {d:#05x})",
                    set.len(),
                    common[d]
                )));
            }
            _ => {}
        }
    }
    Ok(SrgParams::new(
        FIELD_SIZE as i64,
        set.len() as i64,
        lambda.unwrap_or(0),
        mu.unwrap_or(0),
    ))
}

/// A validated connection set together with its point stabilizer.
#[derive(Clone, Debug)]
pub struct ConnectionChoice {
    pub exponent: usize,
    pub set: Vec<Elem>,
    pub params: SrgParams,
    pub stabilizer: Vec<SemilinearMap>,
    /// True when `preferred` failed and the exponent came from a scan.
    pub scanned: bool,
}

/// Checks one coset exponent: the graph must be SRG(4096,234,2,14) and its
/// semilinear point stabilizer must have order 702.
pub fn validate_connection_set(
    f: &FieldTables,
    exponent: usize,
) -> Result<ConnectionChoice, SchemeError> {
    let set = f.connection_set(exponent)?;
    let params = srg_check(&set)?;
    if params != GRAPH_PARAMS {
        return Err(SchemeError::ParameterMismatch {
            found: params,
            expected: GRAPH_PARAMS,
        });
    }
    let stabilizer = semilinear_stabilizer(f, &set)?;
    Ok(ConnectionChoice {
        exponent,
        set,
        params,
        stabilizer,
        scanned: false,
    })
}

/// All exponents in 1..=34 passing [`validate_connection_set`].
pub fn passing_exponents(f: &FieldTables) -> Vec<usize> {
    (1..COSET_INDEX)
        .filter(|&e| validate_connection_set(f, e).is_ok())
        .collect()
}

/// Uses `preferred` when it passes, otherwise the least passing exponent.
pub fn select_connection_set(
    f: &FieldTables,
    preferred: usize,
) -> Result<ConnectionChoice, SchemeError> {
    if let Ok(c) = validate_connection_set(f, preferred) {
        return Ok(c);
    }
    for e in 1..COSET_INDEX {
        if let Ok(mut c) = validate_connection_set(f, e) {
            c.scanned = true;
            return Ok(c);
        }
    }
    Err(SchemeError::NoValidCosetExponent)
}

/// Orbits of the stabilizer on nonzero elements, sorted by (size, least
/// element).
pub fn orbit_classes(
    f: &FieldTables,
    stabilizer: &[SemilinearMap],
) -> Result<Vec<Vec<Elem>>, SchemeError> {
    let mut seen = vec![false; FIELD_SIZE];
    let mut orbits = Vec::new();
    for start in 1..FIELD_SIZE {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut orbit = vec![start as Elem];
        let mut queue = VecDeque::from([start as Elem]);
        while let Some(x) = queue.pop_front() {
            for m in stabilizer {
                let y = m.apply(f, x);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    orbit.push(y);
                    queue.push_back(y);
                }
            }
        }
        orbit.sort_unstable();
        orbits.push(orbit);
    }
    orbits.sort_by_key(|o| (o.len(), o[0]));
    let found: Vec<usize> = orbits.iter().map(Vec::len).collect();
    let expected: Vec<usize> = VALENCIES[1..].iter().map(|&k| k as usize).collect();
    if found != expected {
        return Err(SchemeError::OrbitSizes { found, expected });
    }
    Ok(orbits)
}

/// A symmetric translation scheme on GF(2)^12 with exact eigenmatrices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemeDescriptor {
    /// Classes including the identity class 0.
    pub n_classes: usize,
    /// Class of each difference word; `coloring[0] == 0`.
    pub coloring: Vec<u8>,
    pub valencies: Vec<u64>,
    /// `p[j][i]`: eigenvalue of A_i on eigenspace j.
    pub p: Vec<Vec<i64>>,
    /// `q[i][j] = m_j p[j][i] / k_i`.
    pub q: Vec<Vec<Rat>>,
    pub multiplicities: Vec<u64>,
    /// Eigenspace of each additive character a -> (-1)^Tr(a x).
    pub eigenspace_of: Vec<u8>,
    /// `tensor[(i * n + j) * n + k] = p_ij^k`.
    pub tensor: Vec<u64>,
}

impl SchemeDescriptor {
    #[inline]
    pub fn color(&self, d: Elem) -> usize {
        self.coloring[d as usize] as usize
    }

    pub fn intersection(&self, i: usize, j: usize, k: usize) -> u64 {
        let n = self.n_classes;
        self.tensor[(i * n + j) * n + k]
    }

    /// The connection set D_i, sorted.
    pub fn class_elements(&self, i: usize) -> Vec<Elem> {
        (0..FIELD_SIZE)
            .filter(|&x| self.coloring[x] as usize == i)
            .map(|x| x as Elem)
            .collect()
    }

    pub fn connection_sets(&self) -> Vec<Vec<Elem>> {
        let mut sets = vec![Vec::new(); self.n_classes];
        for (x, &c) in self.coloring.iter().enumerate() {
            sets[c as usize].push(x as Elem);
        }
        sets
    }

    /// Elements of eigenspace j among characters.
    pub fn eigenspace_characters(&self, j: usize) -> Vec<Elem> {
        (0..FIELD_SIZE)
            .filter(|&a| self.eigenspace_of[a] as usize == j)
            .map(|a| a as Elem)
            .collect()
    }

    /// Checks the identities a translation scheme must satisfy. Everything
    /// here is re-derivable from the stored data.
    pub fn verify_axioms(&self) -> Result<(), SchemeError> {
        let n = self.n_classes;
        let v = VERTICES as i64;
        let ax = |m: String| Err(SchemeError::Axiom(m));
        if self.coloring[0] != 0 || self.coloring[1..].contains(&0) {
            return ax("class 0 must be exactly the zero difference".into());
        }
        if self.valencies.iter().sum::<u64>() != VERTICES as u64 {
            return ax("valencies do not sum to 4096".into());
        }
        if self.multiplicities.iter().sum::<u64>() != VERTICES as u64 {
            return ax("multiplicities do not sum to 4096".into());
        }
        if self.p[0].iter().map(|&x| x as u64).ne(self.valencies.iter().copied()) {
            return ax("P row 0 is not the valency row".into());
        }
        if self.p.iter().any(|row| row[0] != 1) {
            return ax("P column 0 is not all ones".into());
        }
        for i in 0..n {
            for j in 0..n {
                let ki = self.valencies[i];
                let kj = self.valencies[j];
                let row_sum: u64 = (0..n).map(|l| self.intersection(i, l, j)).sum();
                if row_sum != ki {
                    return ax(format!("sum_l p_{i}{l}^{j} != k_{i}", l = "l"));
                }
                let weighted: u64 = (0..n)
                    .map(|k| self.intersection(i, j, k) * self.valencies[k])
                    .sum();
                if weighted != ki * kj {
                    return ax(format!("sum_k p_{i}{j}^k k_k != k_{i} k_{j}"));
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                let s: Rat = (0..n).map(|l| Rat::from(self.p[i][l]) * self.q[l][j]).sum();
                let want = if i == j { Rat::from(v) } else { Rat::zero() };
                if s != want {
                    return Err(SchemeError::NotInverse);
                }
            }
        }
        Ok(())
    }

    /// Renumbers classes and eigenspaces: `class_map[old] = new`.
    pub fn relabel(&self, class_map: &[usize], eigen_map: &[usize]) -> SchemeDescriptor {
        let n = self.n_classes;
        let mut p = vec![vec![0i64; n]; n];
        let mut q = vec![vec![Rat::zero(); n]; n];
        let mut valencies = vec![0; n];
        let mut multiplicities = vec![0; n];
        let mut tensor = vec![0; n * n * n];
        for j in 0..n {
            multiplicities[eigen_map[j]] = self.multiplicities[j];
            for i in 0..n {
                p[eigen_map[j]][class_map[i]] = self.p[j][i];
                q[class_map[i]][eigen_map[j]] = self.q[i][j];
            }
        }
        for i in 0..n {
            valencies[class_map[i]] = self.valencies[i];
            for j in 0..n {
                for k in 0..n {
                    tensor[(class_map[i] * n + class_map[j]) * n + class_map[k]] =
                        self.intersection(i, j, k);
                }
            }
        }
        SchemeDescriptor {
            n_classes: n,
            coloring: self
                .coloring
                .iter()
                .map(|&c| class_map[c as usize] as u8)
                .collect(),
            valencies,
            p,
            q,
            multiplicities,
            eigenspace_of: self
                .eigenspace_of
                .iter()
                .map(|&e| eigen_map[e as usize] as u8)
                .collect(),
            tensor,
        }
    }

    /// For every vertex x, the sums (A_i v)(x) = sum over y with class(x^y) = i
    /// of v(y).
    pub fn class_sums(&self, exec: Exec, v: &[i64]) -> Vec<Vec<i64>> {
        assert_eq!(v.len(), VERTICES);
        let n = self.n_classes;
        exec.map_range(VERTICES, |x| {
            let mut sums = vec![0i64; n];
            for (y, &vy) in v.iter().enumerate() {
                sums[self.coloring[x ^ y] as usize] += vy;
            }
            sums
        })
    }

    /// Projections E_j v for every eigenspace j, with
    /// E_j = (1/4096) sum_i Q_ij A_i. Returned as `[j][x]`.
    pub fn eigenspace_components(&self, exec: Exec, v: &[Rat]) -> Vec<Vec<Rat>> {
        let n = self.n_classes;
        let den = common_denominator(v);
        let ints: Vec<i64> = v.iter().map(|r| (r * den).to_integer()).collect();
        let sums = self.class_sums(exec, &ints);
        let scale = Rat::from(VERTICES as i64 * den);
        (0..n)
            .map(|j| {
                sums.iter()
                    .map(|w| {
                        let acc: Rat = (0..n).map(|i| self.q[i][j] * w[i]).sum();
                        acc / scale
                    })
                    .collect()
            })
            .collect()
    }

    /// Projection of `v` onto eigenspace `j`.
    pub fn apply_idempotent(&self, v: &[Rat], j: usize) -> Vec<Rat> {
        self.eigenspace_components(Exec::default(), v).swap_remove(j)
    }
}

/// Exhaustive intersection numbers: for every class k and every d in D_k the
/// table (color(w), color(d ^ w)) over all w must be the same.
pub fn intersection_tensor(
    exec: Exec,
    coloring: &[u8],
    n: usize,
) -> Result<Vec<u64>, SchemeError> {
    let tables = exec.map_range(FIELD_SIZE, |d| {
        let mut t = vec![0u64; n * n];
        for w in 0..FIELD_SIZE {
            t[coloring[w] as usize * n + coloring[d ^ w] as usize] += 1;
        }
        t
    });
    let mut first: Vec<Option<usize>> = vec![None; n];
    for d in 0..FIELD_SIZE {
        let k = coloring[d] as usize;
        match first[k] {
            None => first[k] = Some(d),
            Some(d0) if tables[d0] != tables[d] => {
                return Err(SchemeError::IntersectionNotConstant {
                    class: k,
                    first: d0 as Elem,
                    other: d as Elem,
                })
            }
            _ => {}
        }
    }
    let mut tensor = vec![0u64; n * n * n];
    for (k, d) in first.iter().enumerate() {
        let d = d.ok_or_else(|| SchemeError::BadPartition(format!("class {k} is empty")))?;
        for i in 0..n {
            for j in 0..n {
                tensor[(i * n + j) * n + k] = tables[d][i * n + j];
            }
        }
    }
    Ok(tensor)
}

/// Eigenmatrix data from character sums.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Eigenmatrix {
    pub p: Vec<Vec<i64>>,
    pub multiplicities: Vec<u64>,
    pub eigenspace_of: Vec<u8>,
}

/// Rows (sum over d in D_i of (-1)^Tr(a d))_i for all 4096 characters,
/// grouped into exactly `n` distinct rows. The trivial character's row comes
/// first; the others are ordered by decreasing row.
pub fn eigenmatrix(
    exec: Exec,
    f: &FieldTables,
    coloring: &[u8],
    n: usize,
) -> Result<Eigenmatrix, SchemeError> {
    let rows = exec.map_range(FIELD_SIZE, |a| {
        let mut row = vec![0i64; n];
        for (x, &c) in coloring.iter().enumerate() {
            row[c as usize] += f.character(a as Elem, x as Elem);
        }
        row
    });
    let mut distinct: Vec<Vec<i64>> = rows.clone();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() != n {
        return Err(SchemeError::EigenRowCount {
            found: distinct.len(),
            expected: n,
        });
    }
    let principal = rows[0].clone();
    distinct.retain(|r| *r != principal);
    distinct.sort_unstable_by(|a, b| b.cmp(a));
    distinct.insert(0, principal);
    let index: HashMap<&Vec<i64>, u8> = distinct
        .iter()
        .enumerate()
        .map(|(j, r)| (r, j as u8))
        .collect();
    let eigenspace_of: Vec<u8> = rows.iter().map(|r| index[r]).collect();
    let mut multiplicities = vec![0u64; n];
    for &e in &eigenspace_of {
        multiplicities[e as usize] += 1;
    }
    Ok(Eigenmatrix {
        p: distinct,
        multiplicities,
        eigenspace_of,
    })
}

/// Q_ij = m_j P_ji / k_i, checked against P Q = 4096 I.
pub fn dual_eigenmatrix(
    p: &[Vec<i64>],
    valencies: &[u64],
    multiplicities: &[u64],
) -> Result<Vec<Vec<Rat>>, SchemeError> {
    let n = p.len();
    let q: Vec<Vec<Rat>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| Rat::new(multiplicities[j] as i64 * p[j][i], valencies[i] as i64))
                .collect()
        })
        .collect();
    for i in 0..n {
        for j in 0..n {
            let s: Rat = (0..n).map(|l| Rat::from(p[i][l]) * q[l][j]).sum();
            let want = if i == j { Rat::from(VERTICES as i64) } else { Rat::zero() };
            if s != want {
                return Err(SchemeError::NotInverse);
            }
        }
    }
    Ok(q)
}

/// Builds a scheme from a difference coloring with `n` classes.
pub fn scheme_from_coloring(
    exec: Exec,
    f: &FieldTables,
    coloring: Vec<u8>,
    n: usize,
) -> Result<SchemeDescriptor, SchemeError> {
    let mut valencies = vec![0u64; n];
    for &c in &coloring {
        valencies[c as usize] += 1;
    }
    let tensor = intersection_tensor(exec, &coloring, n)?;
    let eig = eigenmatrix(exec, f, &coloring, n)?;
    let q = dual_eigenmatrix(&eig.p, &valencies, &eig.multiplicities)?;
    let s = SchemeDescriptor {
        n_classes: n,
        coloring,
        valencies,
        p: eig.p,
        q,
        multiplicities: eig.multiplicities,
        eigenspace_of: eig.eigenspace_of,
        tensor,
    };
    s.verify_axioms()?;
    Ok(s)
}

/// Builds the scheme whose class i (1-based) is `partition[i - 1]`.
pub fn build_scheme(
    f: &FieldTables,
    partition: &[Vec<Elem>],
) -> Result<SchemeDescriptor, SchemeError> {
    build_scheme_with(Exec::default(), f, partition)
}

pub fn build_scheme_with(
    exec: Exec,
    f: &FieldTables,
    partition: &[Vec<Elem>],
) -> Result<SchemeDescriptor, SchemeError> {
    let mut coloring = vec![u8::MAX; FIELD_SIZE];
    coloring[0] = 0;
    for (i, class) in partition.iter().enumerate() {
        for &x in class {
            if x == 0 || coloring[x as usize] != u8::MAX {
                return Err(SchemeError::BadPartition(format!(
                    "element {x:#05x} is zero or repeated"
                )));
            }
            coloring[x as usize] = (i + 1) as u8;
        }
    }
    if coloring.contains(&u8::MAX) {
        return Err(SchemeError::BadPartition("classes do not cover GF(4096)*".into()));
    }
    scheme_from_coloring(exec, f, coloring, partition.len() + 1)
}

/// Which 234-orbit plays the graph relation in canonical order.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum OrderingChoice {
    /// The connection set itself is class 2.
    #[default]
    Standard,
    /// Its image under the normalizing involution is class 2.
    TauSwapped,
}

/// How the raw class and eigenspace labels map to canonical ones.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CanonicalOrdering {
    pub choice: OrderingChoice,
    pub class_map: Vec<usize>,
    pub eigen_map: Vec<usize>,
    /// Number of class orderings (with the anchor fixed) that reproduce the
    /// reference.
    pub matching_orderings: usize,
    pub variant: usize,
}

/// Relabels `raw` so that `anchor_class` becomes class 2 and P equals
/// [`REFERENCE_P`] entrywise; then checks Q = P.
///
/// Several orderings can match (P is invariant under some simultaneous row
/// and column swaps); `variant` picks one of them in enumeration order.
pub fn canonicalize(
    raw: &SchemeDescriptor,
    anchor_class: usize,
    choice: OrderingChoice,
    variant: usize,
) -> Result<(SchemeDescriptor, CanonicalOrdering), SchemeError> {
    let n = raw.n_classes;
    if n != REFERENCE_P.len() {
        return Err(SchemeError::NoCanonicalOrdering);
    }
    let mut found: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
    let mut assign = vec![usize::MAX; n]; // canonical -> raw
    assign[0] = 0;
    let mut used = vec![false; n];
    used[0] = true;
    search_orderings(raw, anchor_class, 1, &mut assign, &mut used, &mut found);
    let matching = found.len();
    let (class_map, eigen_map) = found
        .into_iter()
        .nth(variant)
        .ok_or(SchemeError::NoCanonicalOrdering)?;
    let canon = raw.relabel(&class_map, &eigen_map);
    debug_assert!(canon
        .p
        .iter()
        .zip(REFERENCE_P.iter())
        .all(|(a, b)| a.as_slice() == b.as_slice()));
    if (0..n).any(|i| (0..n).any(|j| canon.q[i][j] != Rat::from(canon.p[i][j]))) {
        return Err(SchemeError::NotFormallySelfDual);
    }
    Ok((
        canon,
        CanonicalOrdering {
            choice,
            class_map,
            eigen_map,
            matching_orderings: matching,
            variant,
        },
    ))
}

fn search_orderings(
    raw: &SchemeDescriptor,
    anchor: usize,
    pos: usize,
    assign: &mut Vec<usize>,
    used: &mut Vec<bool>,
    found: &mut Vec<(Vec<usize>, Vec<usize>)>,
) {
    let n = raw.n_classes;
    if pos == n {
        if let Some(eigen_map) = match_rows(raw, assign) {
            let mut class_map = vec![0; n];
            for (canon, &r) in assign.iter().enumerate() {
                class_map[r] = canon;
            }
            found.push((class_map, eigen_map));
        }
        return;
    }
    for r in 1..n {
        let allowed = if pos == GRAPH_CLASS { r == anchor } else { r != anchor };
        if used[r] || !allowed || raw.valencies[r] != VALENCIES[pos] {
            continue;
        }
        used[r] = true;
        assign[pos] = r;
        search_orderings(raw, anchor, pos + 1, assign, used, found);
        used[r] = false;
    }
}

/// With columns permuted by `assign` (canonical -> raw), finds the row map
/// raw eigenspace -> canonical eigenspace reproducing the reference.
fn match_rows(raw: &SchemeDescriptor, assign: &[usize]) -> Option<Vec<usize>> {
    let n = raw.n_classes;
    let mut eigen_map = vec![usize::MAX; n];
    let mut taken = vec![false; n];
    for j in 0..n {
        let row: Vec<i64> = (0..n).map(|c| raw.p[j][assign[c]]).collect();
        let target = REFERENCE_P
            .iter()
            .position(|r| r.as_slice() == row.as_slice())?;
        if taken[target] {
            return None;
        }
        taken[target] = true;
        eigen_map[j] = target;
    }
    Some(eigen_map)
}

/// A fusion of a scheme together with how classes and eigenspaces merge.
#[derive(Clone, Debug)]
pub struct Fusion {
    pub scheme: SchemeDescriptor,
    pub class_groups: Vec<Vec<usize>>,
    /// Parent eigenspaces folded into each fused eigenspace.
    pub eigen_groups: Vec<Vec<usize>>,
    pub srg: Option<SrgParams>,
}

/// Merges classes according to `groups` (which must partition 0..n with
/// {0} alone). The partition is a fusion exactly when the summed columns of
/// P take as many distinct row values as there are groups; the fused
/// intersection numbers are then recounted from the merged coloring.
pub fn fuse(scheme: &SchemeDescriptor, groups: &[Vec<usize>]) -> Result<Fusion, SchemeError> {
    fuse_with(Exec::default(), scheme, groups)
}

pub fn fuse_with(
    exec: Exec,
    scheme: &SchemeDescriptor,
    groups: &[Vec<usize>],
) -> Result<Fusion, SchemeError> {
    let n = scheme.n_classes;
    let mut group_of = vec![usize::MAX; n];
    for (g, members) in groups.iter().enumerate() {
        for &i in members {
            if i >= n || group_of[i] != usize::MAX {
                return Err(SchemeError::BadPartition(format!(
                    "class {i} is out of range or repeated"
                )));
            }
            group_of[i] = g;
        }
    }
    if group_of.contains(&usize::MAX) {
        return Err(SchemeError::BadPartition("not every class is covered".into()));
    }
    if groups.first().map(Vec::as_slice) != Some(&[0][..]) {
        return Err(SchemeError::BadPartition(
            "the first group must be exactly {0}".into(),
        ));
    }
    let m = groups.len();

    let summed: Vec<Vec<i64>> = scheme
        .p
        .iter()
        .map(|row| groups.iter().map(|g| g.iter().map(|&i| row[i]).sum()).collect())
        .collect();
    let mut rows: BTreeMap<Vec<i64>, Vec<usize>> = BTreeMap::new();
    for (j, r) in summed.iter().enumerate() {
        rows.entry(r.clone()).or_default().push(j);
    }
    if rows.len() != m {
        return Err(SchemeError::NotAFusion(format!(
            "{} distinct eigenvalue rows for {m} fused classes",
            rows.len()
        )));
    }
    let principal = summed[0].clone();
    let mut ordered: Vec<(Vec<i64>, Vec<usize>)> = rows.into_iter().collect();
    ordered.sort_by(|a, b| {
        (a.0 != principal)
            .cmp(&(b.0 != principal))
            .then_with(|| b.0.cmp(&a.0))
    });
    let mut eigen_group_of = vec![0usize; n];
    for (g, (_, members)) in ordered.iter().enumerate() {
        for &j in members {
            eigen_group_of[j] = g;
        }
    }
    let p: Vec<Vec<i64>> = ordered.iter().map(|(r, _)| r.clone()).collect();
    let eigen_groups: Vec<Vec<usize>> = ordered.into_iter().map(|(_, g)| g).collect();
    let valencies: Vec<u64> = groups
        .iter()
        .map(|g| g.iter().map(|&i| scheme.valencies[i]).sum())
        .collect();
    let multiplicities: Vec<u64> = eigen_groups
        .iter()
        .map(|g| g.iter().map(|&j| scheme.multiplicities[j]).sum())
        .collect();
    let q = dual_eigenmatrix(&p, &valencies, &multiplicities)?;
    let coloring: Vec<u8> = scheme
        .coloring
        .iter()
        .map(|&c| group_of[c as usize] as u8)
        .collect();
    let tensor = intersection_tensor(exec, &coloring, m)?;
    let fused = SchemeDescriptor {
        n_classes: m,
        coloring,
        valencies,
        p,
        q,
        multiplicities,
        eigenspace_of: scheme
            .eigenspace_of
            .iter()
            .map(|&e| eigen_group_of[e as usize] as u8)
            .collect(),
        tensor,
    };
    fused.verify_axioms()?;
    let srg = (m == 3).then(|| {
        SrgParams::new(
            VERTICES as i64,
            fused.valencies[1] as i64,
            fused.intersection(1, 1, 1) as i64,
            fused.intersection(1, 1, 2) as i64,
        )
    });
    Ok(Fusion {
        scheme: fused,
        class_groups: groups.to_vec(),
        eigen_groups,
        srg,
    })
}

/// The partition {{0}, group, rest}.
pub fn two_class_partition(n: usize, group: &[usize]) -> Vec<Vec<usize>> {
    let rest: Vec<usize> = (1..n).filter(|i| !group.contains(i)).collect();
    vec![vec![0], group.to_vec(), rest]
}

/// Class and eigenspace permutations induced by a semilinear map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationPermutation {
    /// `classes[i] = j` when the map sends D_i onto D_j.
    pub classes: Vec<usize>,
    /// `eigenspaces[j] = j'` when the image of a set whose characteristic
    /// vector has a component in V_j has it in V_j'.
    pub eigenspaces: Vec<usize>,
}

impl RelationPermutation {
    pub fn is_identity(&self) -> bool {
        self.classes.iter().enumerate().all(|(i, &c)| i == c)
            && self.eigenspaces.iter().enumerate().all(|(i, &c)| i == c)
    }

    /// Nontrivial cycles of the class permutation, e.g. [[2, 3], [6, 7]].
    pub fn class_cycles(&self) -> Vec<Vec<usize>> {
        cycles(&self.classes)
    }

    pub fn eigen_cycles(&self) -> Vec<Vec<usize>> {
        cycles(&self.eigenspaces)
    }
}

fn cycles(perm: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; perm.len()];
    let mut out = Vec::new();
    for s in 0..perm.len() {
        if seen[s] {
            continue;
        }
        let mut c = vec![s];
        seen[s] = true;
        let mut x = perm[s];
        while x != s {
            seen[x] = true;
            c.push(x);
            x = perm[x];
        }
        if c.len() > 1 {
            out.push(c);
        }
    }
    out
}

/// Verifies that `map` permutes the classes and returns the induced class and
/// eigenspace permutations.
///
/// For phi(x) = c x^(2^k), the Fourier coefficient of 1_{phi(S)} at b equals
/// that of 1_S at phi*(b) = (b c)^(2^(12-k)), so eigenspace j of S moves to
/// the eigenspace of (phi*)^-1(a) = a^(2^k) / c for a in V_j.
pub fn relation_permutation_under(
    f: &FieldTables,
    map: &SemilinearMap,
    scheme: &SchemeDescriptor,
) -> Result<RelationPermutation, SchemeError> {
    let n = scheme.n_classes;
    let mut classes = vec![usize::MAX; n];
    classes[0] = 0;
    for x in 1..FIELD_SIZE {
        let from = scheme.coloring[x] as usize;
        let to = scheme.color(map.apply(f, x as Elem));
        if classes[from] == usize::MAX {
            classes[from] = to;
        } else if classes[from] != to {
            return Err(SchemeError::NotNormalizing { class: from });
        }
    }
    let mut eigenspaces = vec![usize::MAX; n];
    let c_inv = f.inv(map.multiplier).expect("nonzero multiplier");
    for a in 0..FIELD_SIZE {
        let from = scheme.eigenspace_of[a] as usize;
        let b = f.mul(f.frobenius(a as Elem, map.frobenius_power), c_inv);
        let to = scheme.eigenspace_of[b as usize] as usize;
        if eigenspaces[from] == usize::MAX {
            eigenspaces[from] = to;
        } else if eigenspaces[from] != to {
            return Err(SchemeError::NotNormalizing { class: from });
        }
    }
    Ok(RelationPermutation {
        classes,
        eigenspaces,
    })
}

/// The least (by multiplier exponent) Frobenius twist of the connection set
/// that normalizes the scheme.
pub fn find_involution(
    f: &FieldTables,
    set: &[Elem],
    stabilizer: &[SemilinearMap],
    scheme: &SchemeDescriptor,
) -> Result<SemilinearMap, SchemeError> {
    frobenius_twists(f, set, stabilizer)
        .into_iter()
        .find(|m| relation_permutation_under(f, m, scheme).is_ok())
        .ok_or(SchemeError::NoInvolution)
}

/// Options for [`construct`].
#[derive(Clone, Debug, Default)]
pub struct ConstructionOptions {
    pub field: FieldSpec,
    /// Coset exponent to try first; defaults to 7.
    pub coset_exponent: Option<usize>,
    pub ordering: OrderingChoice,
    /// Index among the orderings that reproduce the reference eigenmatrix.
    pub ordering_variant: usize,
}

/// Everything needed downstream: the field, the graph's connection set, its
/// stabilizer, the normalizing involution and the canonical scheme.
#[derive(Clone, Debug)]
pub struct Construction {
    pub field: FieldTables,
    pub connection: ConnectionChoice,
    pub tau: SemilinearMap,
    pub rho: SemilinearMap,
    pub scheme: SchemeDescriptor,
    pub ordering: CanonicalOrdering,
}

impl Construction {
    /// The graph's connection set in the canonical frame (class 2).
    pub fn graph_set(&self) -> Vec<Elem> {
        self.scheme.class_elements(GRAPH_CLASS)
    }

    /// Map carrying the connection set onto class 2: the identity, or tau
    /// for [`OrderingChoice::TauSwapped`].
    pub fn frame_map(&self) -> SemilinearMap {
        match self.ordering.choice {
            OrderingChoice::Standard => SemilinearMap::identity(),
            OrderingChoice::TauSwapped => self.tau,
        }
    }

    /// The subfield of the given size, carried into the canonical frame.
    pub fn frame_subfield(&self, size: usize) -> Result<Vec<Elem>, SchemeError> {
        let sub = self.field.subfield_elements(size)?;
        Ok(self.frame_map().image(&self.field, &sub))
    }

    /// P does not determine the labels completely: with class 2 fixed, it is
    /// invariant under a simultaneous class/eigenspace swap. This relabels by
    /// that symmetry when needed so that the frame's GF(64) meets classes 2,
    /// 7 and 8, and returns the class cycles applied.
    pub fn pin_to_subfield(&mut self) -> Result<Vec<Vec<usize>>, SchemeError> {
        let sub = self.frame_subfield(64)?;
        let pinned = |s: &SchemeDescriptor| {
            let mut counts = vec![0usize; s.n_classes];
            for &x in &sub {
                counts[s.color(x ^ sub[0])] += 1;
            }
            counts[2] == 9 && counts[7] == 27 && counts[8] == 27
        };
        if pinned(&self.scheme) {
            return Ok(Vec::new());
        }
        for v in 0..self.ordering.matching_orderings {
            let (s, o) = canonicalize(&self.scheme, GRAPH_CLASS, self.ordering.choice, v)?;
            if pinned(&s) {
                let cycles = cycles(&o.class_map);
                for c in self.ordering.class_map.iter_mut() {
                    *c = o.class_map[*c];
                }
                for e in self.ordering.eigen_map.iter_mut() {
                    *e = o.eigen_map[*e];
                }
                self.scheme = s;
                return Ok(cycles);
            }
        }
        Err(SchemeError::NoCanonicalOrdering)
    }
}

pub fn construct(options: &ConstructionOptions) -> Result<Construction, SchemeError> {
    let field = ffield::build_field(options.field)?;
    let connection = select_connection_set(
        &field,
        options.coset_exponent.unwrap_or(DEFAULT_COSET_EXPONENT),
    )?;
    let orbits = orbit_classes(&field, &connection.stabilizer)?;
    let raw = build_scheme(&field, &orbits)?;
    let tau = find_involution(&field, &connection.set, &connection.stabilizer, &raw)?;
    let rho = tau.compose(&field, &tau);
    let anchor_elem = match options.ordering {
        OrderingChoice::Standard => connection.set[0],
        OrderingChoice::TauSwapped => tau.apply(&field, connection.set[0]),
    };
    let anchor = raw.color(anchor_elem);
    let (scheme, ordering) = canonicalize(&raw, anchor, options.ordering, options.ordering_variant)?;
    Ok(Construction {
        field,
        connection,
        tau,
        rho,
        scheme,
        ordering,
    })
}

/// The multiplier exponent of a map relative to z, for reporting.
pub fn multiplier_exponent(f: &FieldTables, m: &SemilinearMap) -> usize {
    f.log(m.multiplier).expect("nonzero multiplier") % GROUP_ORDER
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn srg_param_helpers() {
        assert!(GRAPH_PARAMS.is_feasible());
        assert_eq!(GRAPH_PARAMS.eigenvalues(), Some((10, -22)));
        assert_eq!(GRAPH_PARAMS.complement(), SrgParams::new(4096, 3861, 3640, 3630));
        assert!(GRAPH_PARAMS.complement().is_feasible());
        assert_eq!(GRAPH_PARAMS.complement().eigenvalues(), Some((21, -11)));
        assert_eq!(SrgParams::new(10, 3, 0, 1).eigenvalues(), Some((1, -2)));
        // pentagon, a conference graph
        assert_eq!(SrgParams::new(5, 2, 0, 1).eigenvalues(), None);
        assert!(!SrgParams::new(10, 3, 1, 1).is_feasible());
    }

    #[test]
    fn cycles_of_permutation() {
        let r = RelationPermutation {
            classes: vec![0, 1, 3, 2, 4],
            eigenspaces: vec![0, 1, 2, 3, 4],
        };
        assert_eq!(r.class_cycles(), vec![vec![2, 3]]);
        assert!(!r.is_identity());
    }

    #[test]
    fn partition_validation() {
        let f = ffield::build_field(FieldSpec::default()).unwrap();
        assert!(matches!(
            build_scheme(&f, &[vec![1, 2]]),
            Err(SchemeError::BadPartition(_))
        ));
        assert!(matches!(
            build_scheme(&f, &[vec![0]]),
            Err(SchemeError::BadPartition(_))
        ));
    }
}
