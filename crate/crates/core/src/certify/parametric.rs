//! Exact affine forms over named parameters and parametric linear solving.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use crate::rational::{fmt_rat, Rat};

/// c_0 + sum_p c_p t_p with exact rational coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AffineForm {
    pub constant: Rat,
    pub coeffs: BTreeMap<String, Rat>,
}

impl AffineForm {
    pub fn constant(c: Rat) -> Self {
        AffineForm {
            constant: c,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn var(name: &str) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(name.to_string(), Rat::one());
        AffineForm {
            constant: Rat::zero(),
            coeffs,
        }
    }

    /// Builds c_0 + sum c_p t_p, dropping zero coefficients.
    pub fn from_terms(constant: Rat, terms: &[(&str, Rat)]) -> Self {
        let mut f = AffineForm::constant(constant);
        for (name, c) in terms {
            f = f + AffineForm::var(name) * *c;
        }
        f
    }

    pub fn coeff(&self, name: &str) -> Rat {
        self.coeffs.get(name).copied().unwrap_or_else(Rat::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.is_constant() && self.constant.is_zero()
    }

    pub fn parameters(&self) -> Vec<String> {
        self.coeffs.keys().cloned().collect()
    }

    fn normalized(mut self) -> Self {
        self.coeffs.retain(|_, c| !c.is_zero());
        self
    }

    /// Replaces parameter `name` by `value`.
    pub fn substitute(&self, name: &str, value: &AffineForm) -> AffineForm {
        let c = self.coeff(name);
        if c.is_zero() {
            return self.clone();
        }
        let mut rest = self.clone();
        rest.coeffs.remove(name);
        rest + value.clone() * c
    }

    pub fn substitute_value(&self, name: &str, value: Rat) -> AffineForm {
        self.substitute(name, &AffineForm::constant(value))
    }

    /// Parses the `Display` syntax: terms like "3/2 y8", "y5", "-110" joined
    /// by " + " or " - ".
    pub fn parse(s: &str) -> Option<AffineForm> {
        let mut out = AffineForm::default();
        let mut sign = Rat::one();
        let mut coeff: Option<Rat> = None;
        let mut pending = false;
        let flush = |out: &mut AffineForm, sign: Rat, coeff: Option<Rat>, name: Option<&str>| {
            let c = sign * coeff.unwrap_or_else(Rat::one);
            match name {
                Some(n) => *out = out.clone() + AffineForm::var(n) * c,
                None => out.constant += c,
            }
        };
        for tok in s.split_whitespace() {
            match tok {
                "+" | "-" => {
                    if pending {
                        flush(&mut out, sign, coeff.take(), None);
                        pending = false;
                    }
                    sign = if tok == "-" { -Rat::one() } else { Rat::one() };
                }
                _ => {
                    let (neg, body) = match tok.strip_prefix('-') {
                        Some(b) => (true, b),
                        None => (false, tok),
                    };
                    if neg {
                        sign = -sign;
                    }
                    if body.starts_with(|c: char| c.is_ascii_digit()) {
                        if pending {
                            return None;
                        }
                        coeff = Some(crate::rational::parse_rat(body)?);
                        pending = true;
                    } else {
                        if body.is_empty() {
                            return None;
                        }
                        flush(&mut out, sign, coeff.take(), Some(body));
                        pending = false;
                        sign = Rat::one();
                    }
                }
            }
        }
        if pending {
            flush(&mut out, sign, coeff, None);
        }
        Some(out.normalized())
    }

    /// Value when every parameter is bound; None if one is missing.
    pub fn evaluate(&self, bindings: &BTreeMap<String, Rat>) -> Option<Rat> {
        let mut acc = self.constant;
        for (p, c) in &self.coeffs {
            acc += *c * *bindings.get(p)?;
        }
        Some(acc)
    }
}

impl Add for AffineForm {
    type Output = AffineForm;
    fn add(mut self, rhs: AffineForm) -> AffineForm {
        self.constant += rhs.constant;
        for (p, c) in rhs.coeffs {
            *self.coeffs.entry(p).or_insert_with(Rat::zero) += c;
        }
        self.normalized()
    }
}

impl Sub for AffineForm {
    type Output = AffineForm;
    fn sub(self, rhs: AffineForm) -> AffineForm {
        self + (-rhs)
    }
}

impl Neg for AffineForm {
    type Output = AffineForm;
    fn neg(self) -> AffineForm {
        self * -Rat::one()
    }
}

impl Mul<Rat> for AffineForm {
    type Output = AffineForm;
    fn mul(mut self, rhs: Rat) -> AffineForm {
        self.constant *= rhs;
        for c in self.coeffs.values_mut() {
            *c *= rhs;
        }
        self.normalized()
    }
}

impl fmt::Display for AffineForm {
    /// e.g. "y5 + 3/2 y8 - 110"; parameters first, constant last.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut term = |f: &mut fmt::Formatter<'_>, c: &Rat, name: &str| -> fmt::Result {
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            if name.is_empty() {
                f.write_str(&fmt_rat(&mag))
            } else if mag.is_one() {
                f.write_str(name)
            } else {
                write!(f, "{} {name}", fmt_rat(&mag))
            }
        };
        for (p, c) in &self.coeffs {
            term(f, c, p)?;
        }
        if !self.constant.is_zero() || self.coeffs.is_empty() {
            term(f, &self.constant, "")?;
        }
        Ok(())
    }
}

/// A vector of affine forms, e.g. a family of inner distributions.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ParametricVector {
    pub entries: Vec<AffineForm>,
}

impl ParametricVector {
    pub fn new(entries: Vec<AffineForm>) -> Self {
        ParametricVector { entries }
    }

    /// Parses each entry with [`AffineForm::parse`].
    pub fn parse(entries: &[&str]) -> Option<ParametricVector> {
        entries
            .iter()
            .map(|e| AffineForm::parse(e))
            .collect::<Option<Vec<_>>>()
            .map(ParametricVector::new)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn parameters(&self) -> Vec<String> {
        let mut all: Vec<String> = self.entries.iter().flat_map(|e| e.parameters()).collect();
        all.sort();
        all.dedup();
        all
    }

    pub fn substitute(&self, name: &str, value: &AffineForm) -> ParametricVector {
        ParametricVector::new(self.entries.iter().map(|e| e.substitute(name, value)).collect())
    }

    pub fn substitute_value(&self, name: &str, value: Rat) -> ParametricVector {
        self.substitute(name, &AffineForm::constant(value))
    }

    /// Row vector times matrix: entry j is sum_i v_i m[i][j].
    pub fn times_matrix(&self, m: &[Vec<Rat>]) -> ParametricVector {
        let cols = m.first().map_or(0, Vec::len);
        ParametricVector::new(
            (0..cols)
                .map(|j| {
                    self.entries
                        .iter()
                        .zip(m)
                        .fold(AffineForm::default(), |acc, (v, row)| acc + v.clone() * row[j])
                })
                .collect(),
        )
    }

    /// Constant entries, if every entry is constant.
    pub fn as_constants(&self) -> Option<Vec<Rat>> {
        self.entries
            .iter()
            .map(|e| e.is_constant().then_some(e.constant))
            .collect()
    }

    pub fn sum(&self) -> AffineForm {
        self.entries
            .iter()
            .cloned()
            .fold(AffineForm::default(), |a, b| a + b)
    }
}

impl fmt::Display for ParametricVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str(")")
    }
}

/// Linear equations sum_k coeffs[k] u_k = rhs over named unknowns.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinearSystem {
    pub unknowns: Vec<String>,
    pub equations: Vec<(Vec<Rat>, Rat)>,
}

impl LinearSystem {
    pub fn new(unknowns: &[&str]) -> Self {
        LinearSystem {
            unknowns: unknowns.iter().map(|s| s.to_string()).collect(),
            equations: Vec::new(),
        }
    }

    /// Adds `form = 0`, where `form` is affine in the unknowns.
    pub fn push_form(&mut self, form: &AffineForm) {
        let coeffs = self.unknowns.iter().map(|u| form.coeff(u)).collect();
        debug_assert!(
            form.coeffs.keys().all(|k| self.unknowns.contains(k)),
            "form mentions an unknown outside the system"
        );
        self.equations.push((coeffs, -form.constant));
    }

    /// Equation i as `lhs - rhs`, an affine form in the unknowns.
    pub fn residual_form(&self, i: usize) -> AffineForm {
        let (coeffs, rhs) = &self.equations[i];
        let mut f = AffineForm::constant(-*rhs);
        for (u, c) in self.unknowns.iter().zip(coeffs) {
            f = f + AffineForm::var(u) * *c;
        }
        f
    }

    /// Substitutes a solution into every equation; all residuals are zero
    /// for a correct general solution.
    pub fn residuals(&self, solution: &ParametricSolution) -> Vec<AffineForm> {
        (0..self.equations.len())
            .map(|i| {
                let mut f = self.residual_form(i);
                for (u, value) in self.unknowns.iter().zip(&solution.values.entries) {
                    f = f.substitute(u, value);
                }
                f
            })
            .collect()
    }
}

/// General solution: one affine form per unknown, in the free unknowns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParametricSolution {
    pub unknowns: Vec<String>,
    pub values: ParametricVector,
    pub free: Vec<String>,
    pub rank: usize,
}

impl ParametricSolution {
    pub fn value(&self, unknown: &str) -> Option<&AffineForm> {
        let i = self.unknowns.iter().position(|u| u == unknown)?;
        Some(&self.values.entries[i])
    }

    /// Whether `form = 0` holds identically on the family.
    pub fn implies(&self, form: &AffineForm) -> bool {
        let mut f = form.clone();
        for (u, value) in self.unknowns.iter().zip(&self.values.entries) {
            f = f.substitute(u, value);
        }
        f.is_zero()
    }
}

/// Inconsistent system: `combination` weights the equations so that every
/// unknown cancels while the right-hand sides sum to `contradiction` != 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Infeasible {
    pub combination: Vec<Rat>,
    pub contradiction: Rat,
}

/// Reduced row-echelon elimination. Pivots are taken in the leftmost column
/// still available, from the lowest-index remaining row with a nonzero
/// entry; free parameters keep the names of the non-pivot unknowns.
pub fn solve_parametric(system: &LinearSystem) -> Result<ParametricSolution, Infeasible> {
    let n = system.unknowns.len();
    let m = system.equations.len();
    // row = [coeffs | rhs | combination]
    let mut rows: Vec<Vec<Rat>> = system
        .equations
        .iter()
        .enumerate()
        .map(|(i, (c, r))| {
            let mut row = c.clone();
            row.push(*r);
            row.extend((0..m).map(|k| if k == i { Rat::one() } else { Rat::zero() }));
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..n {
        let Some(p) = (r..m).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = Rat::one() / rows[r][col];
        for x in rows[r].iter_mut() {
            *x *= inv;
        }
        for i in 0..m {
            if i != r && !rows[i][col].is_zero() {
                let factor = rows[i][col];
                for k in 0..rows[i].len() {
                    let delta = factor * rows[r][k];
                    rows[i][k] -= delta;
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == m {
            break;
        }
    }
    if let Some(bad) = rows[r..].iter().find(|row| !row[n].is_zero()) {
        return Err(Infeasible {
            combination: bad[n + 1..].to_vec(),
            contradiction: bad[n],
        });
    }
    let free: Vec<String> = (0..n)
        .filter(|c| !pivots.contains(c))
        .map(|c| system.unknowns[c].clone())
        .collect();
    let mut values: Vec<AffineForm> = system
        .unknowns
        .iter()
        .map(|u| AffineForm::var(u))
        .collect();
    for (row, &col) in rows.iter().zip(&pivots) {
        let mut f = AffineForm::constant(row[n]);
        for c in 0..n {
            if c != col && !row[c].is_zero() {
                f = f - AffineForm::var(&system.unknowns[c]) * row[c];
            }
        }
        values[col] = f;
    }
    Ok(ParametricSolution {
        unknowns: system.unknowns.clone(),
        values: ParametricVector::new(values),
        free,
        rank: pivots.len(),
    })
}

/// Re-expresses a family in terms of new parameters: `targets[i]` names an
/// unknown whose current form becomes the new parameter of the same name.
/// Fails when the target forms are not independent in the old parameters.
pub fn reparametrize(
    solution: &ParametricSolution,
    targets: &[&str],
) -> Option<ParametricSolution> {
    let old = solution.free.clone();
    if old.len() != targets.len() {
        return None;
    }
    // target_i = c_i + sum_k M_ik old_k, solve for old_k.
    let mut system = LinearSystem::new(&old.iter().map(String::as_str).collect::<Vec<_>>());
    let tmp: Vec<String> = targets.iter().map(|t| format!("{t}'")).collect();
    for t in targets {
        let form = solution.value(t)?.clone();
        let coeffs = old.iter().map(|u| form.coeff(u)).collect();
        system.equations.push((coeffs, -form.constant));
    }
    let inverse = solve_generic_rhs(&system, &tmp)?;
    let mut values = solution.values.clone();
    for (o, form) in old.iter().zip(&inverse) {
        values = values.substitute(o, form);
    }
    for (name, t) in tmp.iter().zip(targets) {
        values = values.substitute(name, &AffineForm::var(t));
    }
    Some(ParametricSolution {
        unknowns: solution.unknowns.clone(),
        values,
        free: targets.iter().map(|t| t.to_string()).collect(),
        rank: solution.rank,
    })
}

/// Solves M u = rhs + (s_1, ..., s_k) for square invertible M with symbolic
/// right-hand side parameters s_i.
fn solve_generic_rhs(system: &LinearSystem, symbols: &[String]) -> Option<Vec<AffineForm>> {
    let k = system.unknowns.len();
    if system.equations.len() != k {
        return None;
    }
    let mut rows: Vec<(Vec<Rat>, AffineForm)> = system
        .equations
        .iter()
        .zip(symbols)
        .map(|((c, r), s)| (c.clone(), AffineForm::constant(*r) + AffineForm::var(s)))
        .collect();
    for col in 0..k {
        let p = (col..k).find(|&i| !rows[i].0[col].is_zero())?;
        rows.swap(col, p);
        let inv = Rat::one() / rows[col].0[col];
        rows[col].0.iter_mut().for_each(|x| *x *= inv);
        rows[col].1 = rows[col].1.clone() * inv;
        for i in 0..k {
            if i != col && !rows[i].0[col].is_zero() {
                let factor = rows[i].0[col];
                let (pc, pr) = (rows[col].0.clone(), rows[col].1.clone());
                for (x, y) in rows[i].0.iter_mut().zip(&pc) {
                    *x -= factor * *y;
                }
                rows[i].1 = rows[i].1.clone() - pr * factor;
            }
        }
    }
    Some(rows.into_iter().map(|(_, r)| r).collect())
}

/// Interval of t where every form (affine in the single parameter t) is
/// nonnegative. Returns (lower, upper) with None meaning unbounded, or Err
/// when a constant form is negative or the interval is empty.
pub fn nonnegativity_interval(
    forms: &[AffineForm],
    t: &str,
) -> Result<(Option<Rat>, Option<Rat>), usize> {
    let mut lo: Option<Rat> = None;
    let mut hi: Option<Rat> = None;
    for (i, f) in forms.iter().enumerate() {
        if f.coeffs.keys().any(|k| k != t) {
            return Err(i);
        }
        let c = f.coeff(t);
        if c.is_zero() {
            if f.constant.is_negative() {
                return Err(i);
            }
            continue;
        }
        let root = -f.constant / c;
        if c.is_positive() {
            lo = Some(lo.map_or(root, |l| l.max(root)));
        } else {
            hi = Some(hi.map_or(root, |h| h.min(root)));
        }
    }
    if let (Some(l), Some(h)) = (lo, hi) {
        if l > h {
            return Err(forms.len());
        }
    }
    Ok((lo, hi))
}
