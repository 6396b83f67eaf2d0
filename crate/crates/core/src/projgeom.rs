//! Points, caps and hyperplanes of PG(5,4), realized inside GF(4^6).
//!
//! A point is a GF(4)*-orbit of nonzero field elements; a hyperplane is the
//! kernel of x -> Tr_{GF(4^6)/GF(4)}(a x) for a nonzero multiplier a.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::exec::Exec;
use crate::ffield::{Elem, FieldTables, FIELD_SIZE};

/// Projective dimension of the ambient space.
pub const AMBIENT_DIMENSION: u32 = 5;
pub const Q: u64 = 4;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeomError {
    #[error("the zero vector does not define a projective point")]
    ZeroVector,
    #[error("the zero functional does not define a hyperplane")]
    ZeroFunctional,
    #[error("moment identity {name} failed: expected {expected}, found {found}")]
    MomentMismatch {
        name: &'static str,
        expected: i128,
        found: i128,
    },
    #[error("intersection size {size} exceeds the bound {bound}")]
    BoundExceeded { size: usize, bound: i128 },
}

/// A point of PG(5,4), stored as the least word among its three GF(4)*
/// multiples.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjectivePoint(Elem);

impl ProjectivePoint {
    pub fn canonical(f: &FieldTables, x: Elem) -> Result<Self, GeomError> {
        if x == 0 {
            return Err(GeomError::ZeroVector);
        }
        let rep = f
            .gf4_scalars()
            .iter()
            .map(|&w| f.mul(w, x))
            .min()
            .expect("three scalars");
        Ok(ProjectivePoint(rep))
    }

    pub fn representative(self) -> Elem {
        self.0
    }
}

/// Canonical points of the given vectors, sorted and deduplicated.
pub fn points_of(f: &FieldTables, vectors: &[Elem]) -> Result<Vec<ProjectivePoint>, GeomError> {
    let mut pts = vectors
        .iter()
        .map(|&x| ProjectivePoint::canonical(f, x))
        .collect::<Result<Vec<_>, _>>()?;
    pts.sort_unstable();
    pts.dedup();
    Ok(pts)
}

/// All 1365 points of PG(5,4).
pub fn all_points(f: &FieldTables) -> Vec<ProjectivePoint> {
    let nonzero: Vec<Elem> = (1..FIELD_SIZE as u32).map(|x| x as Elem).collect();
    points_of(f, &nonzero).expect("nonzero vectors")
}

/// A set of points of PG(5,4). Whether it is actually a cap is decided by
/// [`is_cap`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cap {
    pub points: Vec<ProjectivePoint>,
}

impl Cap {
    pub fn new(mut points: Vec<ProjectivePoint>) -> Self {
        points.sort_unstable();
        points.dedup();
        Cap { points }
    }

    pub fn from_vectors(f: &FieldTables, vectors: &[Elem]) -> Result<Self, GeomError> {
        points_of(f, vectors).map(|points| Cap { points })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn ambient_dimension(&self) -> u32 {
        AMBIENT_DIMENSION
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CapVerdict {
    Cap,
    Collinear([ProjectivePoint; 3]),
}

impl CapVerdict {
    pub fn is_cap(&self) -> bool {
        matches!(self, CapVerdict::Cap)
    }
}

/// Whether w lies on the line through u and v, tested as
/// w in {a u + b v : a, b in GF(4)*}.
pub fn collinear(f: &FieldTables, u: ProjectivePoint, v: ProjectivePoint, w: ProjectivePoint) -> bool {
    let s = f.gf4_scalars();
    s.iter().any(|&a| {
        s.iter()
            .any(|&b| f.mul(a, u.0) ^ f.mul(b, v.0) == w.0)
    })
}

/// Exhaustive check over all triples; returns the lexicographically first
/// collinear triple on failure.
pub fn is_cap(f: &FieldTables, points: &[ProjectivePoint]) -> CapVerdict {
    is_cap_with(Exec::default(), f, points)
}

pub fn is_cap_with(exec: Exec, f: &FieldTables, points: &[ProjectivePoint]) -> CapVerdict {
    let n = points.len();
    let witness = exec.find_first(n, |i| {
        for j in i + 1..n {
            for k in j + 1..n {
                if collinear(f, points[i], points[j], points[k]) {
                    return Some([points[i], points[j], points[k]]);
                }
            }
        }
        None
    });
    match witness {
        Some(t) => CapVerdict::Collinear(t),
        None => CapVerdict::Cap,
    }
}

#[inline]
fn on_hyperplane(f: &FieldTables, a: Elem, x: Elem) -> bool {
    f.trace_to_base(f.mul(a, x), 2).expect("2 divides 12") == 0
}

/// Points of the hyperplane Tr_{GF(4^6)/GF(4)}(a x) = 0.
pub fn hyperplane_points(f: &FieldTables, a: Elem) -> Result<Vec<ProjectivePoint>, GeomError> {
    if a == 0 {
        return Err(GeomError::ZeroFunctional);
    }
    Ok(all_points(f)
        .into_iter()
        .filter(|p| on_hyperplane(f, a, p.0))
        .collect())
}

/// One canonical multiplier per hyperplane; 1365 in total.
pub fn hyperplane_multipliers(f: &FieldTables) -> Vec<Elem> {
    all_points(f).into_iter().map(|p| p.0).collect()
}

/// Multiset of hyperplane intersection sizes.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HyperplaneProfile {
    pub counts: BTreeMap<usize, usize>,
}

impl HyperplaneProfile {
    pub fn total_hyperplanes(&self) -> usize {
        self.counts.values().sum()
    }

    pub fn support(&self) -> Vec<usize> {
        self.counts.keys().copied().collect()
    }

    /// Sum over hyperplanes of mu (mu-1) ... (mu-r+1).
    pub fn factorial_moment(&self, r: u32) -> i128 {
        self.counts
            .iter()
            .map(|(&mu, &c)| falling(mu as i128, r) * c as i128)
            .sum()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("size,count\n");
        for (k, v) in &self.counts {
            let _ = writeln!(s, "{k},{v}");
        }
        s
    }
}

fn falling(x: i128, r: u32) -> i128 {
    (0..r as i128).map(|i| x - i).product()
}

pub fn intersection_profile(f: &FieldTables, cap: &Cap) -> HyperplaneProfile {
    intersection_profile_with(Exec::default(), f, cap)
}

pub fn intersection_profile_with(exec: Exec, f: &FieldTables, cap: &Cap) -> HyperplaneProfile {
    let sizes = exec.map_slice(&hyperplane_multipliers(f), |&a| {
        cap.points.iter().filter(|p| on_hyperplane(f, a, p.0)).count()
    });
    let mut counts = BTreeMap::new();
    for s in sizes {
        *counts.entry(s).or_insert(0) += 1;
    }
    HyperplaneProfile { counts }
}

/// The q-binomial coefficient [n choose k]_q.
pub fn gaussian_binomial(n: u32, k: u32, q: u64) -> u128 {
    assert!(k <= n, "gaussian_binomial needs k <= n");
    let q = q as u128;
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (q.pow(n - i) - 1) / (q.pow(i + 1) - 1);
    }
    acc
}

/// Three factorial moments of a hyperplane-intersection multiset.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MomentSums {
    pub first: i128,
    pub second: i128,
    pub third: i128,
}

/// Result of the two-character counting argument for a cap section.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaRecord {
    pub cap_size: i128,
    pub bound: i128,
    pub targets: (i128, i128),
    /// cap_size * [5 1], cap_size (cap_size-1) [4 1], ... over GF(4).
    pub expected: MomentSums,
    /// Per-point constants 341, 6545, 122892.
    pub per_point: MomentSums,
    /// Coefficients (c3, c2, c1, c0) with (mu-lo)^2 (hi-mu) = c3 f3 + c2 f2 + c1 f1 + c0.
    pub cubic: (i128, i128, i128, i128),
    /// c0 * hyperplanes / cap_size (75460 for the 78-cap).
    pub constant_per_point: i128,
    /// -122892 + 47*6545 - 763*341 + 75460 for the 78-cap.
    pub cubic_combination: i128,
    pub actual: Option<MomentSums>,
    pub actual_polynomial_sum: Option<i128>,
}

/// Largest intersection of a section's hyperplane with the big cap:
/// q (max - |H cap C|) + section >= total.
pub fn section_bound(total: i128, section: i128, max_intersection: i128, q: i128) -> i128 {
    max_intersection - (total - section) / q
}

/// Verifies the moment identities and the cubic combination that force a
/// two-character section; with a profile, also evaluates them on the actual
/// intersection multiset.
pub fn lemma_counting_check(
    cap_size: i128,
    bound: i128,
    targets: (i128, i128),
    profile: Option<&HyperplaneProfile>,
) -> Result<LemmaRecord, GeomError> {
    let g = |n| gaussian_binomial(n, 1, Q) as i128;
    let hyperplanes = g(6);
    let per_point = MomentSums {
        first: g(5),
        second: (cap_size - 1) * g(4),
        third: (cap_size - 1) * (cap_size - 2) * g(3),
    };
    let expected = MomentSums {
        first: cap_size * per_point.first,
        second: cap_size * per_point.second,
        third: cap_size * per_point.third,
    };
    let (lo, hi) = targets;
    // (mu - lo)^2 (hi - mu) = -mu^3 + (2lo + hi) mu^2 - (lo^2 + 2 lo hi) mu + lo^2 hi
    let (m3, m2, m1, m0) = (-1, 2 * lo + hi, -(lo * lo + 2 * lo * hi), lo * lo * hi);
    // mu^3 = f3 + 3 f2 + f1, mu^2 = f2 + f1
    let cubic = (m3, 3 * m3 + m2, m3 + m2 + m1, m0);
    let total0 = cubic.3 * hyperplanes;
    if total0 % cap_size != 0 {
        return Err(GeomError::MomentMismatch {
            name: "constant term divisibility",
            expected: 0,
            found: total0 % cap_size,
        });
    }
    let constant_per_point = total0 / cap_size;
    let cubic_combination = cubic.0 * per_point.third
        + cubic.1 * per_point.second
        + cubic.2 * per_point.first
        + constant_per_point;
    if cubic_combination != 0 {
        return Err(GeomError::MomentMismatch {
            name: "cubic combination",
            expected: 0,
            found: cubic_combination,
        });
    }

    let mut record = LemmaRecord {
        cap_size,
        bound,
        targets,
        expected,
        per_point,
        cubic,
        constant_per_point,
        cubic_combination,
        actual: None,
        actual_polynomial_sum: None,
    };

    if let Some(p) = profile {
        if let Some(&size) = p.counts.keys().find(|&&s| s as i128 > bound) {
            return Err(GeomError::BoundExceeded { size, bound });
        }
        let actual = MomentSums {
            first: p.factorial_moment(1),
            second: p.factorial_moment(2),
            third: p.factorial_moment(3),
        };
        for (name, e, a) in [
            ("first factorial moment", expected.first, actual.first),
            ("second factorial moment", expected.second, actual.second),
            ("third factorial moment", expected.third, actual.third),
        ] {
            if e != a {
                return Err(GeomError::MomentMismatch {
                    name,
                    expected: e,
                    found: a,
                });
            }
        }
        let poly: i128 = p
            .counts
            .iter()
            .map(|(&mu, &c)| {
                let mu = mu as i128;
                (mu - lo) * (mu - lo) * (hi - mu) * c as i128
            })
            .sum();
        if poly != 0 {
            return Err(GeomError::MomentMismatch {
                name: "cubic polynomial sum",
                expected: 0,
                found: poly,
            });
        }
        record.actual = Some(actual);
        record.actual_polynomial_sum = Some(poly);
    }
    Ok(record)
}
