//! Inner and outer distributions, MacWilliams transforms and the design
//! machinery built on them.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::exec::Exec;
use crate::ffield::{Elem, FIELD_SIZE};
use crate::rational::{fmt_vec, int, Rat};
use crate::scheme::{SchemeDescriptor, SrgParams, VERTICES};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DelsarteError {
    #[error("the empty set has no inner distribution")]
    EmptySet,
    #[error("element {0:#05x} is not a vertex or is repeated")]
    BadVertex(Elem),
    #[error("MacWilliams transform entry {index} is negative ({value}) for an actual set")]
    NegativeTransform { index: usize, value: String },
    #[error("graph eigenvalues of {0} are not rational")]
    IrrationalEigenvalues(SrgParams),
    #[error("{u:#05x} and {v:#05x} are adjacent, so the set is not a coclique")]
    NotCoclique { u: Elem, v: Elem },
    #[error("outer distribution invariant failed: {0}")]
    OuterInvariant(String),
}

/// An inner distribution (or any length-(d+1) exact vector indexed by
/// classes).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Distribution(pub Vec<Rat>);

impl Distribution {
    pub fn entries(&self) -> &[Rat] {
        &self.0
    }

    /// Sum of entries; |C| for an inner distribution.
    pub fn total(&self) -> Rat {
        self.0.iter().copied().sum()
    }
}

impl std::fmt::Display for Distribution {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&fmt_vec(&self.0))
    }
}

fn check_set(set: &[Elem]) -> Result<(), DelsarteError> {
    let mut seen = vec![false; FIELD_SIZE];
    for &x in set {
        if x as usize >= FIELD_SIZE || seen[x as usize] {
            return Err(DelsarteError::BadVertex(x));
        }
        seen[x as usize] = true;
    }
    Ok(())
}

/// a_i = |{(x, y) in S^2 : class(x ^ y) = i}| / |S|.
pub fn inner_distribution(
    scheme: &SchemeDescriptor,
    set: &[Elem],
) -> Result<Distribution, DelsarteError> {
    if set.is_empty() {
        return Err(DelsarteError::EmptySet);
    }
    check_set(set)?;
    let mut counts = vec![0i64; scheme.n_classes];
    for &x in set {
        for &y in set {
            counts[scheme.color(x ^ y)] += 1;
        }
    }
    let n = set.len() as i64;
    Ok(Distribution(
        counts.into_iter().map(|c| Rat::new(c, n)).collect(),
    ))
}

/// The row vector a Q.
pub fn macwilliams(a: &Distribution, scheme: &SchemeDescriptor) -> Vec<Rat> {
    let n = scheme.n_classes;
    (0..n)
        .map(|j| (0..n).map(|i| a.0[i] * scheme.q[i][j]).sum())
        .collect()
}

/// Rejects a transform with a negative entry; only meaningful for
/// transforms of actual vertex sets.
pub fn check_nonnegative(transform: &[Rat]) -> Result<(), DelsarteError> {
    match transform.iter().position(|r| r.is_negative()) {
        Some(index) => Err(DelsarteError::NegativeTransform {
            index,
            value: crate::rational::fmt_rat(&transform[index]),
        }),
        None => Ok(()),
    }
}

/// (4096 / |S|) <1_S, E_j 1_S> for every j, via the idempotents. Agrees
/// with `macwilliams(inner_distribution(S))`.
pub fn macwilliams_from_projections(
    scheme: &SchemeDescriptor,
    set: &[Elem],
) -> Result<Vec<Rat>, DelsarteError> {
    if set.is_empty() {
        return Err(DelsarteError::EmptySet);
    }
    check_set(set)?;
    let ind = indicator(set);
    let comps = scheme.eigenspace_components(Exec::default(), &ind);
    let scale = Rat::new(VERTICES as i64, set.len() as i64);
    Ok(comps
        .iter()
        .map(|e| set.iter().map(|&x| e[x as usize]).sum::<Rat>() * scale)
        .collect())
}

/// Characteristic vector of a vertex set.
pub fn indicator(set: &[Elem]) -> Vec<Rat> {
    let mut v = vec![Rat::zero(); VERTICES];
    for &x in set {
        v[x as usize] = int(1);
    }
    v
}

/// Outer distribution: B[x][i] = |{y in S : class(x ^ y) = i}|.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OuterTable {
    pub rows: Vec<Vec<i64>>,
}

impl OuterTable {
    /// Row sums equal |S|, column sums equal |S| k_i, and the rows of
    /// members average to the inner distribution.
    pub fn verify(&self, scheme: &SchemeDescriptor, set: &[Elem]) -> Result<(), DelsarteError> {
        let s = set.len() as i64;
        let n = scheme.n_classes;
        if let Some(x) = self.rows.iter().position(|r| r.iter().sum::<i64>() != s) {
            return Err(DelsarteError::OuterInvariant(format!(
                "row {x:#05x} does not sum to {s}"
            )));
        }
        for i in 0..n {
            let col: i64 = self.rows.iter().map(|r| r[i]).sum();
            if col != s * scheme.valencies[i] as i64 {
                return Err(DelsarteError::OuterInvariant(format!(
                    "column {i} sums to {col}, not |S| k_{i}"
                )));
            }
        }
        if !set.is_empty() {
            let avg: Vec<Rat> = (0..n)
                .map(|i| Rat::new(set.iter().map(|&x| self.rows[x as usize][i]).sum(), s))
                .collect();
            if avg != inner_distribution(scheme, set)?.0 {
                return Err(DelsarteError::OuterInvariant(
                    "member rows do not average to the inner distribution".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let n = self.rows.first().map_or(0, Vec::len);
        let mut s = String::from("vertex");
        for i in 0..n {
            let _ = write!(s, ",B{i}");
        }
        s.push('\n');
        for (x, row) in self.rows.iter().enumerate() {
            let _ = write!(s, "{x:#05x}");
            for b in row {
                let _ = write!(s, ",{b}");
            }
            s.push('\n');
        }
        s
    }
}

pub fn outer_distribution(scheme: &SchemeDescriptor, set: &[Elem]) -> OuterTable {
    outer_distribution_with(Exec::default(), scheme, set)
}

pub fn outer_distribution_with(
    exec: Exec,
    scheme: &SchemeDescriptor,
    set: &[Elem],
) -> OuterTable {
    let n = scheme.n_classes;
    OuterTable {
        rows: exec.map_range(VERTICES, |x| {
            let mut row = vec![0i64; n];
            for &y in set {
                row[scheme.color(x as Elem ^ y)] += 1;
            }
            row
        }),
    }
}

/// Nonzero non-principal indices of a transform.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct DualDegreeSet(pub BTreeSet<usize>);

impl DualDegreeSet {
    pub fn from_indices<I: IntoIterator<Item = usize>>(it: I) -> Self {
        DualDegreeSet(it.into_iter().collect())
    }

    pub fn is_disjoint(&self, other: &DualDegreeSet) -> bool {
        self.0.is_disjoint(&other.0)
    }

    pub fn is_subset(&self, other: &DualDegreeSet) -> bool {
        self.0.is_subset(&other.0)
    }

    /// Image under an eigenspace permutation.
    pub fn permuted(&self, perm: &[usize]) -> DualDegreeSet {
        DualDegreeSet(self.0.iter().map(|&j| perm[j]).collect())
    }

    pub fn indices(&self) -> Vec<usize> {
        self.0.iter().copied().collect()
    }
}

impl std::fmt::Display for DualDegreeSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let v: Vec<String> = self.0.iter().map(|j| j.to_string()).collect();
        write!(f, "{{{}}}", v.join(", "))
    }
}

pub fn dual_degree(transform: &[Rat]) -> DualDegreeSet {
    DualDegreeSet(
        transform
            .iter()
            .enumerate()
            .skip(1)
            .filter(|(_, r)| !r.is_zero())
            .map(|(j, _)| j)
            .collect(),
    )
}

pub fn design_orthogonal(a: &DualDegreeSet, b: &DualDegreeSet) -> bool {
    a.is_disjoint(b)
}

/// |S| |T| / |Omega|; the forced intersection of design-orthogonal sets.
pub fn roos_intersection(size_s: i64, size_t: i64, ambient: i64) -> Rat {
    Rat::new(size_s * size_t, ambient)
}

/// v (-s) / (k - s) for the least eigenvalue s.
pub fn ratio_bound(params: &SrgParams) -> Result<Rat, DelsarteError> {
    let (_, s) = params
        .eigenvalues()
        .ok_or(DelsarteError::IrrationalEigenvalues(*params))?;
    Ok(Rat::new(params.v * -s, params.k - s))
}

/// For each j in `annihilated`, the residual sum_i (P_ji / P_0i) row_i.
/// All vanish when row is an outer-distribution row of a set whose
/// characteristic vector has no component in those eigenspaces.
pub fn delsarte_row_constraints(
    row: &[Rat],
    annihilated: &[usize],
    scheme: &SchemeDescriptor,
) -> Vec<Rat> {
    annihilated
        .iter()
        .map(|&j| {
            (0..scheme.n_classes)
                .map(|i| Rat::new(scheme.p[j][i], scheme.p[0][i]) * row[i])
                .sum()
        })
        .collect()
}

/// Eigenspaces split by the eigenvalue of A_class: those where it equals
/// the larger restricted eigenvalue r, and those where it equals s.
pub fn eigenvalue_split(
    scheme: &SchemeDescriptor,
    classes: &[usize],
) -> std::collections::BTreeMap<i64, Vec<usize>> {
    let mut out = std::collections::BTreeMap::new();
    for j in 1..scheme.n_classes {
        let ev: i64 = classes.iter().map(|&i| scheme.p[j][i]).sum();
        out.entry(ev).or_insert_with(Vec::new).push(j);
    }
    out
}

/// A finitely supported rational weighting of the vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedSet {
    pub weight: Vec<Rat>,
}

impl WeightedSet {
    pub fn total(&self) -> Rat {
        self.weight.iter().copied().sum()
    }

    pub fn inner_product(&self, set: &[Elem]) -> Rat {
        set.iter().map(|&x| self.weight[x as usize]).sum()
    }

    pub fn support(&self) -> Vec<Elem> {
        (0..VERTICES)
            .filter(|&x| !self.weight[x].is_zero())
            .map(|x| x as Elem)
            .collect()
    }

    /// Eigenspaces j >= 1 with E_j w != 0.
    pub fn dual_degree(&self, scheme: &SchemeDescriptor) -> DualDegreeSet {
        let comps = scheme.eigenspace_components(Exec::default(), &self.weight);
        DualDegreeSet(
            comps
                .iter()
                .enumerate()
                .skip(1)
                .filter(|(_, c)| c.iter().any(|r| !r.is_zero()))
                .map(|(j, _)| j)
                .collect(),
        )
    }
}

/// -s 1_{point} + 1_{neighbours of point}, i.e. the row of A - s I at
/// `point`, for the graph formed by `graph_classes` with least eigenvalue s.
pub fn point_design(
    scheme: &SchemeDescriptor,
    graph_classes: &[usize],
    least_eigenvalue: i64,
    point: Elem,
) -> WeightedSet {
    let mut weight = vec![Rat::zero(); VERTICES];
    weight[point as usize] = int(-least_eigenvalue);
    for x in 0..VERTICES {
        if graph_classes.contains(&scheme.color(x as Elem ^ point)) {
            weight[x] = int(1);
        }
    }
    WeightedSet { weight }
}

/// First adjacent pair in `set` for the graph formed by `graph_classes`.
pub fn coclique_violation(
    scheme: &SchemeDescriptor,
    graph_classes: &[usize],
    set: &[Elem],
) -> Option<(Elem, Elem)> {
    for (i, &u) in set.iter().enumerate() {
        for &v in &set[i + 1..] {
            if graph_classes.contains(&scheme.color(u ^ v)) {
                return Some((u, v));
            }
        }
    }
    None
}

/// Outcome of checking the point design against a candidate coclique.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedDesignVerdict {
    /// Eigenspaces on which the point design was verified to vanish.
    pub killed: Vec<usize>,
    pub design_dual_degree: DualDegreeSet,
    pub total_weight: Rat,
    pub candidate_dual_degree: DualDegreeSet,
    pub design_orthogonal: bool,
    /// |S| total / 4096, the forced inner product when design-orthogonal.
    pub predicted: Rat,
    pub actual: Rat,
    pub point_in_candidate: bool,
    pub neighbours_in_candidate: usize,
}

/// Verifies E_j v_P = 0 on the eigenspaces where the graph has its least
/// eigenvalue, and compares <1_S, v_P> with the value forced by design
/// orthogonality.
pub fn weighted_design_check(
    scheme: &SchemeDescriptor,
    graph_classes: &[usize],
    point: Elem,
    candidate: &[Elem],
) -> Result<WeightedDesignVerdict, DelsarteError> {
    check_set(candidate)?;
    if let Some((u, v)) = coclique_violation(scheme, graph_classes, candidate) {
        return Err(DelsarteError::NotCoclique { u, v });
    }
    let split = eigenvalue_split(scheme, graph_classes);
    let (&least, killed) = split.iter().next().expect("nontrivial scheme");
    let design = point_design(scheme, graph_classes, least, point);
    let design_dual_degree = design.dual_degree(scheme);
    let killed = killed.clone();
    debug_assert!(killed.iter().all(|j| !design_dual_degree.0.contains(j)));
    let candidate_dual_degree = if candidate.is_empty() {
        DualDegreeSet::default()
    } else {
        dual_degree(&macwilliams(&inner_distribution(scheme, candidate)?, scheme))
    };
    let total_weight = design.total();
    let in_candidate = membership_of(candidate);
    let neighbours = design
        .support()
        .into_iter()
        .filter(|&x| x != point && in_candidate[x as usize])
        .count();
    Ok(WeightedDesignVerdict {
        design_orthogonal: design_dual_degree.is_disjoint(&candidate_dual_degree),
        killed,
        design_dual_degree,
        total_weight,
        candidate_dual_degree,
        predicted: total_weight * Rat::new(candidate.len() as i64, VERTICES as i64),
        actual: design.inner_product(candidate),
        point_in_candidate: in_candidate[point as usize],
        neighbours_in_candidate: neighbours,
    })
}

fn membership_of(set: &[Elem]) -> Vec<bool> {
    crate::ffield::membership(set)
}
