//! The nonexistence argument for a 352-coclique meeting the ratio bound:
//! outer and inner parametric families, the fusion case split and the two
//! Roos contradictions.

use num_traits::{One, Zero};
use thiserror::Error;

use super::parametric::{
    nonnegativity_interval, reparametrize, solve_parametric, AffineForm, LinearSystem,
    ParametricSolution, ParametricVector,
};
use crate::delsarte::{roos_intersection, DualDegreeSet};
use crate::rational::{int, Rat};
use crate::scheme::{Fusion, SchemeDescriptor, VERTICES};

/// Size of a coclique meeting the ratio bound.
pub const COCLIQUE_SIZE: i64 = 352;
/// Eigenspaces on which the characteristic vector of such a coclique
/// vanishes: those where the graph has eigenvalue 10.
pub const ANNIHILATED: [usize; 6] = [1, 3, 4, 6, 7, 8];
/// Neighbours in the coclique of a vertex outside it.
pub const OUTSIDE_NEIGHBOURS: i64 = 22;
/// Classes fused into the graph F.
pub const FUSION_F: [usize; 3] = [2, 7, 8];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProofError {
    #[error("{what}: expected {expected}, found {found}")]
    Mismatch {
        what: String,
        expected: String,
        found: String,
    },
    #[error("{what}: system is inconsistent (combination {witness})")]
    Infeasible { what: String, witness: String },
    #[error("{what}: expected a {expected}-parameter family, found {found}")]
    Dimension {
        what: String,
        expected: usize,
        found: usize,
    },
    #[error("{0}")]
    Other(String),
}

fn mismatch(what: &str, expected: impl ToString, found: impl ToString) -> ProofError {
    ProofError::Mismatch {
        what: what.to_string(),
        expected: expected.to_string(),
        found: found.to_string(),
    }
}

fn parsed(entries: &[&str]) -> ParametricVector {
    ParametricVector::parse(entries).expect("well-formed display")
}

fn solve(system: &LinearSystem, what: &str) -> Result<ParametricSolution, ProofError> {
    solve_parametric(system).map_err(|w| ProofError::Infeasible {
        what: what.to_string(),
        witness: crate::rational::fmt_vec(&w.combination),
    })
}

fn positional(prefix: &str, n: usize, fixed: &[usize]) -> Vec<String> {
    (0..n)
        .filter(|i| !fixed.contains(i))
        .map(|i| format!("{prefix}{i}"))
        .collect()
}

/// Entries identically nonzero as forms (the dual degree of a family).
pub fn support(v: &ParametricVector) -> DualDegreeSet {
    DualDegreeSet::from_indices(
        v.entries
            .iter()
            .enumerate()
            .skip(1)
            .filter(|(_, e)| !e.is_zero())
            .map(|(j, _)| j),
    )
}

/// A printed relation `form = 0` and whether the family implies it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub label: String,
    pub form: AffineForm,
    pub implied: bool,
}

fn relation(solution: &ParametricSolution, label: &str, lhs: &str, rhs: &str) -> Relation {
    let form = AffineForm::parse(lhs).expect("lhs") - AffineForm::parse(rhs).expect("rhs");
    Relation {
        label: label.to_string(),
        implied: solution.implies(&form),
        form,
    }
}

/// Outer distribution row of a vertex outside the coclique.
#[derive(Clone, Debug)]
pub struct OuterFamily {
    pub system: LinearSystem,
    pub solution: ParametricSolution,
    /// B_{x,0..9} in the parameters y5, y8.
    pub row: ParametricVector,
    pub printed_row: ParametricVector,
    pub table: Vec<Relation>,
    pub reduced: Vec<Relation>,
    pub max_residual_zero: bool,
}

impl OuterFamily {
    pub fn matches_printed(&self) -> bool {
        self.row == self.printed_row
            && self.table.iter().all(|r| r.implied)
            && self.reduced.iter().all(|r| r.implied)
            && self.max_residual_zero
    }
}

/// Weighted constraint sum_i (P_ji / P_0i) B_i for a parametric row.
fn outer_constraint(scheme: &SchemeDescriptor, row: &[AffineForm], j: usize) -> AffineForm {
    (0..scheme.n_classes).fold(AffineForm::default(), |acc, i| {
        acc + row[i].clone() * Rat::new(scheme.p[j][i], scheme.p[0][i])
    })
}

/// Solves the row-sum and annihilation equations for B_{x,.} with
/// B_{x,0} = 0 and B_{x,2} = 22 and checks the printed two-parameter row.
pub fn outer_family(scheme: &SchemeDescriptor) -> Result<OuterFamily, ProofError> {
    let n = scheme.n_classes;
    let names = positional("y", n, &[0, 2]);
    let row: Vec<AffineForm> = (0..n)
        .map(|i| match i {
            0 => AffineForm::default(),
            2 => AffineForm::constant(int(OUTSIDE_NEIGHBOURS)),
            _ => AffineForm::var(&format!("y{i}")),
        })
        .collect();
    let mut system = LinearSystem::new(&names.iter().map(String::as_str).collect::<Vec<_>>());
    let total = row.iter().cloned().fold(AffineForm::default(), |a, b| a + b);
    system.push_form(&(total - AffineForm::constant(int(COCLIQUE_SIZE))));
    for &j in &ANNIHILATED {
        system.push_form(&outer_constraint(scheme, &row, j));
    }
    let raw = solve(&system, "outer system")?;
    if raw.free.len() != 2 {
        return Err(ProofError::Dimension {
            what: "outer system".into(),
            expected: 2,
            found: raw.free.len(),
        });
    }
    let solution = reparametrize(&raw, &["y5", "y8"])
        .ok_or_else(|| ProofError::Other("y5, y8 do not parametrize the outer family".into()))?;
    let mut family = ParametricVector::new(row);
    for (u, v) in solution.unknowns.iter().zip(&solution.values.entries) {
        family = family.substitute(u, v);
    }
    let max_residual_zero = system.residuals(&solution).iter().all(AffineForm::is_zero);
    let printed_row = parsed(&[
        "0",
        "y5 + 3/2 y8 - 110",
        "22",
        "110 - y5 - y8",
        "1/2 y8",
        "y5",
        "y8",
        "y8",
        "y8",
        "330 - y5 - 4 y8",
    ]);
    let table = vec![
        relation(&solution, "j=1", "220 + y1 - y3 - y4 - 2 y5 - y6 - y7", "0"),
        relation(&solution, "j=3", "y3 + y5 + y8", "110"),
        relation(&solution, "j=4", "y1 + y3 + 3 y4 - y6 - y7", "0"),
        relation(&solution, "j=6", "y1 + y3 + y6 - y4 - y7", "0"),
        relation(&solution, "j=7", "y1 + y3 + y7 - y4 - y6", "0"),
        relation(&solution, "j=8", "2 y1 + 2 y3 - y8", "0"),
    ];
    let reduced = vec![
        relation(&solution, "2 y4 = y8", "2 y4", "y8"),
        relation(&solution, "y6 = y8", "y6", "y8"),
        relation(&solution, "y7 = y8", "y7", "y8"),
        relation(&solution, "y3 = 110 - y5 - y8", "y3", "110 - y5 - y8"),
        relation(&solution, "y1 = y5 + 3/2 y8 - 110", "y1", "y5 + 3/2 y8 - 110"),
    ];
    Ok(OuterFamily {
        system,
        solution,
        row: family,
        printed_row,
        table,
        reduced,
        max_residual_zero,
    })
}

/// Inner distribution family of a coclique and its MacWilliams transform.
#[derive(Clone, Debug)]
pub struct InnerFamily {
    pub system: LinearSystem,
    pub solution: ParametricSolution,
    pub a: ParametricVector,
    pub aq: ParametricVector,
    pub printed_a: ParametricVector,
    pub printed_aq: ParametricVector,
    pub reduced: Vec<Relation>,
    /// The general transform of (1, x1, 0, x3, ..., x8, 351 - sum) matches
    /// the printed general transform when the last entry subtracts all of
    /// x1, x3, ..., x8.
    pub general_aq_matches: bool,
    /// Same comparison with x7 left out of the last entry, as displayed.
    pub general_aq_matches_without_x7: bool,
    pub residuals_zero: bool,
}

impl InnerFamily {
    pub fn matches_printed(&self) -> bool {
        self.a == self.printed_a
            && self.aq == self.printed_aq
            && self.reduced.iter().all(|r| r.implied)
            && self.general_aq_matches
            && self.residuals_zero
    }
}

/// Generic family: a_0 = 1, a_zero = 0, sum 352, (aQ)_j = 0 on
/// `annihilated`; parameters named x_i by position.
pub fn inner_family_for(
    scheme: &SchemeDescriptor,
    zero_class: usize,
    annihilated: &[usize],
) -> Result<(LinearSystem, ParametricSolution, ParametricVector, ParametricVector), ProofError> {
    let n = scheme.n_classes;
    let names = positional("x", n, &[0, zero_class]);
    let a: Vec<AffineForm> = (0..n)
        .map(|i| {
            if i == 0 {
                AffineForm::constant(Rat::one())
            } else if i == zero_class {
                AffineForm::default()
            } else {
                AffineForm::var(&format!("x{i}"))
            }
        })
        .collect();
    let a = ParametricVector::new(a);
    let aq = a.times_matrix(&scheme.q);
    let mut system = LinearSystem::new(&names.iter().map(String::as_str).collect::<Vec<_>>());
    system.push_form(&(a.sum() - AffineForm::constant(int(COCLIQUE_SIZE))));
    for &j in annihilated {
        system.push_form(&aq.entries[j]);
    }
    let solution = solve(&system, "inner system")?;
    let mut fa = a;
    for (u, v) in solution.unknowns.iter().zip(&solution.values.entries) {
        fa = fa.substitute(u, v);
    }
    let faq = fa.times_matrix(&scheme.q);
    Ok((system, solution, fa, faq))
}

pub fn inner_family(scheme: &SchemeDescriptor) -> Result<InnerFamily, ProofError> {
    let (system, raw, _, _) = inner_family_for(scheme, 2, &ANNIHILATED)?;
    if raw.free.len() != 2 {
        return Err(ProofError::Dimension {
            what: "inner system".into(),
            expected: 2,
            found: raw.free.len(),
        });
    }
    let solution = reparametrize(&raw, &["x1", "x8"])
        .ok_or_else(|| ProofError::Other("x1, x8 do not parametrize the inner family".into()))?;
    let base = ParametricVector::new(
        (0..scheme.n_classes)
            .map(|i| match i {
                0 => AffineForm::constant(Rat::one()),
                2 => AffineForm::default(),
                _ => AffineForm::var(&format!("x{i}")),
            })
            .collect(),
    );
    let mut a = base;
    for (u, v) in solution.unknowns.iter().zip(&solution.values.entries) {
        a = a.substitute(u, v);
    }
    let aq = a.times_matrix(&scheme.q);
    let residuals_zero = system.residuals(&solution).iter().all(AffineForm::is_zero);

    let printed_a = parsed(&[
        "1",
        "x1",
        "0",
        "1/2 x8 - x1",
        "1/2 x8",
        "x1 - 3/2 x8 + 117",
        "x8",
        "x8",
        "x8",
        "-x1 - 5/2 x8 + 234",
    ]);
    let printed_aq = parsed(&[
        "352",
        "0",
        "128 x8 - 7488",
        "0",
        "0",
        "3744 + 128 x1 - 64 x8",
        "0",
        "0",
        "0",
        "7488 - 128 x1 - 64 x8",
    ]);
    let reduced = vec![
        relation(&solution, "2 x4 = x8", "2 x4", "x8"),
        relation(&solution, "x6 = x8", "x6", "x8"),
        relation(&solution, "x7 = x8", "x7", "x8"),
        relation(&solution, "x3 = 117 - x5 - x8", "x3", "117 - x5 - x8"),
        relation(&solution, "x5 = x1 - 3/2 x8 + 117", "x5", "x1 - 3/2 x8 + 117"),
    ];

    let general = |last: &str| {
        let mut e = vec!["1", "x1", "0", "x3", "x4", "x5", "x6", "x7", "x8"];
        e.push(last);
        parsed(&e).times_matrix(&scheme.q)
    };
    let printed_general = parsed(&[
        "11",
        "-1/2 x1 + 1/2 x3 + 1/2 x4 + x5 + 1/2 x6 + 1/2 x7 - 117",
        "x1 + x3 + x4 + x6 + x7 + x8 - 234",
        "117 - x3 - x5 - x8",
        "1/2 x1 + 1/2 x3 + 3/2 x4 - 1/2 x6 - 1/2 x7",
        "2 x1 - x3 + x5",
        "x1 + x3 - x4 + x6 - x7",
        "x1 + x3 - x4 - x6 + x7",
        "-2 x1 - 2 x3 + x8",
        "351 - 3 x1 - x4 - x5 - x6 - x7 - x8",
    ]);
    let printed_general = ParametricVector::new(
        printed_general
            .entries
            .into_iter()
            .map(|e| e * int(32))
            .collect(),
    );
    let general_aq_matches =
        general("351 - x1 - x3 - x4 - x5 - x6 - x7 - x8") == printed_general;
    let general_aq_matches_without_x7 =
        general("351 - x1 - x3 - x4 - x5 - x6 - x8") == printed_general;

    Ok(InnerFamily {
        system,
        solution,
        a,
        aq,
        printed_a,
        printed_aq,
        reduced,
        general_aq_matches,
        general_aq_matches_without_x7,
        residuals_zero,
    })
}

/// Inner family of the image under a class permutation: the zero class and
/// annihilated eigenspaces are moved, and the resulting transform family is
/// supported on the image of {2, 5, 9}.
pub fn permuted_inner_support(
    scheme: &SchemeDescriptor,
    class_perm: &[usize],
    eigen_perm: &[usize],
) -> Result<DualDegreeSet, ProofError> {
    let annihilated: Vec<usize> = ANNIHILATED.iter().map(|&j| eigen_perm[j]).collect();
    let (_, _, _, aq) = inner_family_for(scheme, class_perm[2], &annihilated)?;
    Ok(support(&aq))
}

/// One branch of the fusion case split.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseBranch {
    pub label: String,
    /// Non-principal fused eigenspace assumed to annihilate the coclique.
    pub fused_eigenspace: usize,
    pub bindings: Vec<(String, Rat)>,
    pub a: ParametricVector,
    pub aq: ParametricVector,
    pub printed_a: ParametricVector,
    pub printed_aq: ParametricVector,
    pub dual_degree: DualDegreeSet,
    /// Set the coclique is design-orthogonal to, and its dual degree.
    pub partner: String,
    pub partner_dual_degree: DualDegreeSet,
    pub partner_size: i64,
    pub roos_value: Rat,
    /// Interval for the remaining parameter from nonnegativity.
    pub interval: (Option<Rat>, Option<Rat>),
    pub contradiction: bool,
}

#[derive(Clone, Debug)]
pub struct CaseSplit {
    pub a_f: ParametricVector,
    pub afq_f: ParametricVector,
    pub printed_a_f: ParametricVector,
    pub printed_afq_f: ParametricVector,
    /// (fused eigenspace, x8 value) for each root.
    pub roots: Vec<(usize, Rat)>,
    /// Every non-principal entry is degree one in x8 alone.
    pub exhaustive: bool,
    pub inner: InnerFamily,
}

/// Fuses the inner family over `fusion` and solves each non-principal
/// entry of the fused transform for x8.
pub fn fusion_case_split(inner: &InnerFamily, fusion: &Fusion) -> Result<CaseSplit, ProofError> {
    let groups = &fusion.class_groups;
    let a_f = ParametricVector::new(
        groups
            .iter()
            .map(|g| {
                g.iter()
                    .fold(AffineForm::default(), |acc, &i| acc + inner.a.entries[i].clone())
            })
            .collect(),
    );
    let afq_f = a_f.times_matrix(&fusion.scheme.q);
    let printed_a_f = parsed(&["1", "2 x8", "351 - 2 x8"]);
    let printed_afq_f = parsed(&["352", "128 x8 - 7488", "11232 - 128 x8"]);
    if a_f != printed_a_f {
        return Err(mismatch("fused inner distribution", &printed_a_f, &a_f));
    }
    if afq_f != printed_afq_f {
        return Err(mismatch("fused transform", &printed_afq_f, &afq_f));
    }
    let mut roots = Vec::new();
    let mut exhaustive = true;
    for (j, e) in afq_f.entries.iter().enumerate().skip(1) {
        let c = e.coeff("x8");
        if e.parameters() != ["x8"] || c.is_zero() {
            exhaustive = false;
            continue;
        }
        roots.push((j, -e.constant / c));
    }
    Ok(CaseSplit {
        a_f,
        afq_f,
        printed_a_f,
        printed_afq_f,
        roots,
        exhaustive,
        inner: inner.clone(),
    })
}

fn bind(split: &CaseSplit, fused: usize) -> Result<(Rat, ParametricVector, ParametricVector), ProofError> {
    let x8 = split
        .roots
        .iter()
        .find(|(j, _)| *j == fused)
        .map(|&(_, r)| r)
        .ok_or_else(|| ProofError::Other(format!("no root for fused eigenspace {fused}")))?;
    Ok((
        x8,
        split.inner.a.substitute_value("x8", x8),
        split.inner.aq.substitute_value("x8", x8),
    ))
}

/// Case (a_F Q_F)_1 = 0: the coclique is design-orthogonal to the subfield
/// GF(64), whose dual degree is `subfield_dual_degree`.
pub fn close_case_1(
    split: &CaseSplit,
    subfield_dual_degree: &DualDegreeSet,
    subfield_size: i64,
) -> Result<CaseBranch, ProofError> {
    let (x8, a, aq) = bind(split, 1)?;
    let printed_a = parsed(&[
        "1",
        "x1",
        "0",
        "117/4 - x1",
        "117/4",
        "117/4 + x1",
        "117/2",
        "117/2",
        "117/2",
        "351/4 - x1",
    ]);
    let printed_aq = parsed(&[
        "352", "0", "0", "0", "0", "128 x1", "0", "0", "0", "3744 - 128 x1",
    ]);
    if a != printed_a {
        return Err(mismatch("case 1 inner distribution", &printed_a, &a));
    }
    if aq != printed_aq {
        return Err(mismatch("case 1 transform", &printed_aq, &aq));
    }
    let dual_degree = support(&aq);
    let mut forms = a.entries.clone();
    forms.extend(aq.entries.iter().cloned());
    let interval = nonnegativity_interval(&forms, "x1")
        .map_err(|_| ProofError::Other("case 1 family has no nonnegative member".into()))?;
    let roos_value = roos_intersection(COCLIQUE_SIZE, subfield_size, VERTICES as i64);
    Ok(CaseBranch {
        label: "case 1".into(),
        fused_eigenspace: 1,
        bindings: vec![("x8".into(), x8)],
        a,
        aq,
        printed_a,
        printed_aq,
        contradiction: dual_degree.is_disjoint(subfield_dual_degree) && !roos_value.is_integer(),
        dual_degree,
        partner: "GF(64)".into(),
        partner_dual_degree: subfield_dual_degree.clone(),
        partner_size: subfield_size,
        roos_value,
        interval,
    })
}

/// Case (a_F Q_F)_2 = 0: nonnegativity pins x1, leaving dual degree {2};
/// the image of the coclique under the involution has the permuted dual
/// degree.
pub fn close_case_2(split: &CaseSplit, eigen_perm: &[usize]) -> Result<CaseBranch, ProofError> {
    let (x8, a, aq) = bind(split, 2)?;
    let printed_a = parsed(&[
        "1",
        "x1",
        "0",
        "351/8 - x1",
        "351/8",
        "x1 - 117/8",
        "351/4",
        "351/4",
        "351/4",
        "117/8 - x1",
    ]);
    let printed_aq = parsed(&[
        "352",
        "0",
        "3744",
        "0",
        "0",
        "128 x1 - 1872",
        "0",
        "0",
        "0",
        "1872 - 128 x1",
    ]);
    if a != printed_a {
        return Err(mismatch("case 2 inner distribution", &printed_a, &a));
    }
    if aq != printed_aq {
        return Err(mismatch("case 2 transform", &printed_aq, &aq));
    }
    let mut forms = a.entries.clone();
    forms.extend(aq.entries.iter().cloned());
    let interval = nonnegativity_interval(&forms, "x1")
        .map_err(|_| ProofError::Other("case 2 family has no nonnegative member".into()))?;
    let x1 = match interval {
        (Some(lo), Some(hi)) if lo == hi => lo,
        _ => {
            return Err(ProofError::Other(format!(
                "nonnegativity does not pin x1: interval {interval:?}"
            )))
        }
    };
    let a = a.substitute_value("x1", x1);
    let aq = aq.substitute_value("x1", x1);
    let dual_degree = support(&aq);
    let partner_dual_degree = dual_degree.permuted(eigen_perm);
    let roos_value = roos_intersection(COCLIQUE_SIZE, COCLIQUE_SIZE, VERTICES as i64);
    Ok(CaseBranch {
        label: "case 2".into(),
        fused_eigenspace: 2,
        bindings: vec![("x8".into(), x8), ("x1".into(), x1)],
        a,
        aq,
        printed_a,
        printed_aq,
        contradiction: dual_degree.is_disjoint(&partner_dual_degree) && !roos_value.is_integer(),
        dual_degree,
        partner: "image under the involution".into(),
        partner_dual_degree,
        partner_size: COCLIQUE_SIZE,
        roos_value,
        interval,
    })
}

/// Classes of the fusion's graph and the complement, as used for F.
pub fn fusion_f_groups(n: usize) -> Vec<Vec<usize>> {
    crate::scheme::two_class_partition(n, &FUSION_F)
}
