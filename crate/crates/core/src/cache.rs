//! On-disk cache of constructed schemes.
//!
//! Layout: an 8-byte magic, a little-endian u32 format version, the field
//! polynomial (u32), the coset exponent (u32), ordering choice and variant
//! (one byte each); then the difference coloring of 1..4095 (4095 bytes)
//! and the eigenspace of every character (4096 bytes); then a UTF-8 text
//! body with valencies, multiplicities, P and Q as exact fractions, the
//! intersection tensor and the ordering record.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::ffield::{self, FieldSpec, SemilinearMap, FIELD_SIZE};
use crate::rational::{fmt_rat, parse_rat, Rat};
use crate::scheme::{
    self, CanonicalOrdering, Construction, ConstructionOptions, OrderingChoice, SchemeDescriptor,
    REFERENCE_P,
};

pub const MAGIC: &[u8; 8] = b"HILLCAPS";
pub const FORMAT_VERSION: u32 = 2;

const HEADER_LEN: usize = 8 + 4 + 4 + 4 + 2;

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("cache I/O on {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("not a scheme cache file")]
    BadMagic,
    #[error("cache version {found}, expected {FORMAT_VERSION}")]
    StaleVersion { found: u32 },
    #[error("cache was written for {found}, requested {requested}")]
    WrongKey { found: String, requested: String },
    #[error("malformed cache body: {0}")]
    Malformed(String),
    #[error(transparent)]
    Scheme(#[from] scheme::SchemeError),
}

/// How `load_or_build` obtained its construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CacheStatus {
    Hit,
    Miss,
    /// A file existed but was unreadable or out of date; it was rebuilt.
    Rebuilt,
    Disabled,
}

/// Cached data beyond the scheme itself.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CachedScheme {
    pub field: FieldSpec,
    pub coset_exponent: usize,
    pub tau: SemilinearMap,
    pub rho: SemilinearMap,
    pub ordering: CanonicalOrdering,
    pub scheme: SchemeDescriptor,
}

fn ordering_byte(o: OrderingChoice) -> u8 {
    match o {
        OrderingChoice::Standard => 0,
        OrderingChoice::TauSwapped => 1,
    }
}

fn ordering_from(b: u8) -> Result<OrderingChoice, CacheError> {
    match b {
        0 => Ok(OrderingChoice::Standard),
        1 => Ok(OrderingChoice::TauSwapped),
        _ => Err(CacheError::Malformed(format!("ordering byte {b}"))),
    }
}

/// File name for a set of construction options.
pub fn cache_file_name(options: &ConstructionOptions) -> String {
    format!(
        "scheme-{}-e{}-{}{}.hcs",
        options.field.to_hex().trim_start_matches("0x"),
        options
            .coset_exponent
            .unwrap_or(scheme::DEFAULT_COSET_EXPONENT),
        match options.ordering {
            OrderingChoice::Standard => "std",
            OrderingChoice::TauSwapped => "tau",
        },
        options.ordering_variant
    )
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

pub fn encode(c: &CachedScheme) -> Vec<u8> {
    let s = &c.scheme;
    let mut out = Vec::with_capacity(HEADER_LEN + 2 * FIELD_SIZE + 8192);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    out.extend_from_slice(&c.field.primitive_poly.to_le_bytes());
    out.extend_from_slice(&(c.coset_exponent as u32).to_le_bytes());
    out.push(ordering_byte(c.ordering.choice));
    out.push(c.ordering.variant as u8);
    out.extend_from_slice(&s.coloring[1..]);
    out.extend_from_slice(&s.eigenspace_of);
    let mut body = String::new();
    let _ = writeln!(body, "classes {}", s.n_classes);
    let _ = writeln!(body, "valencies {}", join(&s.valencies));
    let _ = writeln!(body, "multiplicities {}", join(&s.multiplicities));
    for row in &s.p {
        let _ = writeln!(body, "P {}", join(row));
    }
    for row in &s.q {
        let v: Vec<String> = row.iter().map(fmt_rat).collect();
        let _ = writeln!(body, "Q {}", v.join(" "));
    }
    let _ = writeln!(body, "tensor {}", join(&s.tensor));
    let _ = writeln!(
        body,
        "tau {} {}",
        c.tau.multiplier, c.tau.frobenius_power
    );
    let _ = writeln!(
        body,
        "rho {} {}",
        c.rho.multiplier, c.rho.frobenius_power
    );
    let _ = writeln!(body, "class_map {}", join(&c.ordering.class_map));
    let _ = writeln!(body, "eigen_map {}", join(&c.ordering.eigen_map));
    let _ = writeln!(body, "matching_orderings {}", c.ordering.matching_orderings);
    out.extend_from_slice(body.as_bytes());
    out
}

fn nums<T: std::str::FromStr>(line: &str, key: &str) -> Result<Vec<T>, CacheError> {
    let rest = line
        .strip_prefix(key)
        .and_then(|r| r.strip_prefix(' ').or(Some(r)))
        .ok_or_else(|| CacheError::Malformed(format!("expected {key}")))?;
    rest.split_whitespace()
        .map(|t| t.parse().map_err(|_| CacheError::Malformed(format!("{key}: {t:?}"))))
        .collect()
}

pub fn decode(bytes: &[u8]) -> Result<CachedScheme, CacheError> {
    if bytes.len() < HEADER_LEN || &bytes[..8] != MAGIC {
        return Err(CacheError::BadMagic);
    }
    let u32_at = |i: usize| u32::from_le_bytes(bytes[i..i + 4].try_into().expect("4 bytes"));
    let version = u32_at(8);
    if version != FORMAT_VERSION {
        return Err(CacheError::StaleVersion { found: version });
    }
    let field = FieldSpec::new(u32_at(12));
    let coset_exponent = u32_at(16) as usize;
    let choice = ordering_from(bytes[20])?;
    let variant = bytes[21] as usize;
    let body_start = HEADER_LEN + (FIELD_SIZE - 1) + FIELD_SIZE;
    if bytes.len() < body_start {
        return Err(CacheError::Malformed("truncated coloring".into()));
    }
    let mut coloring = vec![0u8];
    coloring.extend_from_slice(&bytes[HEADER_LEN..HEADER_LEN + FIELD_SIZE - 1]);
    let eigenspace_of = bytes[HEADER_LEN + FIELD_SIZE - 1..body_start].to_vec();
    let body = std::str::from_utf8(&bytes[body_start..])
        .map_err(|_| CacheError::Malformed("body is not UTF-8".into()))?;
    let mut lines = body.lines();
    let mut next = || {
        lines
            .next()
            .ok_or_else(|| CacheError::Malformed("truncated body".into()))
    };
    let n: usize = nums::<usize>(next()?, "classes")?
        .first()
        .copied()
        .ok_or_else(|| CacheError::Malformed("classes".into()))?;
    let valencies = nums(next()?, "valencies")?;
    let multiplicities = nums(next()?, "multiplicities")?;
    let mut p = Vec::with_capacity(n);
    for _ in 0..n {
        p.push(nums::<i64>(next()?, "P")?);
    }
    let mut q = Vec::with_capacity(n);
    for _ in 0..n {
        let words: Vec<String> = nums(next()?, "Q")?;
        let row: Option<Vec<Rat>> = words.iter().map(|w| parse_rat(w)).collect();
        q.push(row.ok_or_else(|| CacheError::Malformed("Q entry".into()))?);
    }
    let tensor = nums(next()?, "tensor")?;
    let map = |v: Vec<u32>| -> Result<SemilinearMap, CacheError> {
        match v[..] {
            [m, k] => Ok(SemilinearMap::new(m as u16, k)),
            _ => Err(CacheError::Malformed("map".into())),
        }
    };
    let tau = map(nums(next()?, "tau")?)?;
    let rho = map(nums(next()?, "rho")?)?;
    let class_map = nums(next()?, "class_map")?;
    let eigen_map = nums(next()?, "eigen_map")?;
    let matching_orderings = nums::<usize>(next()?, "matching_orderings")?
        .first()
        .copied()
        .unwrap_or(0);
    let scheme = SchemeDescriptor {
        n_classes: n,
        coloring,
        valencies,
        p,
        q,
        multiplicities,
        eigenspace_of,
        tensor,
    };
    if scheme.valencies.len() != n
        || scheme.tensor.len() != n * n * n
        || scheme.coloring.iter().any(|&c| c as usize >= n)
        || scheme.eigenspace_of.iter().any(|&c| c as usize >= n)
    {
        return Err(CacheError::Malformed("inconsistent dimensions".into()));
    }
    Ok(CachedScheme {
        field,
        coset_exponent,
        tau,
        rho,
        ordering: CanonicalOrdering {
            choice,
            class_map,
            eigen_map,
            matching_orderings,
            variant,
        },
        scheme,
    })
}

/// Writes to a temporary file in the same directory, then renames it into
/// place so readers never see a partial file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), CacheError> {
    let io = |source| CacheError::Io {
        path: path.to_path_buf(),
        source,
    };
    let dir = path.parent().unwrap_or(Path::new("."));
    std::fs::create_dir_all(dir).map_err(io)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(bytes).map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    Ok(())
}

pub fn to_cached(c: &Construction) -> CachedScheme {
    CachedScheme {
        field: c.field.spec(),
        coset_exponent: c.connection.exponent,
        tau: c.tau,
        rho: c.rho,
        ordering: c.ordering.clone(),
        scheme: c.scheme.clone(),
    }
}

/// Rebuilds a full construction from cached data. The field tables and the
/// connection set are recomputed (both cheap); the scheme is taken from the
/// cache after checking it against the reference eigenmatrix.
pub fn from_cached(c: CachedScheme) -> Result<Construction, CacheError> {
    let field = ffield::build_field(c.field).map_err(scheme::SchemeError::from)?;
    let connection = scheme::validate_connection_set(&field, c.coset_exponent)?;
    let reference: Vec<Vec<i64>> = REFERENCE_P.iter().map(|r| r.to_vec()).collect();
    if c.scheme.p != reference {
        return Err(CacheError::Malformed("P differs from the reference".into()));
    }
    Ok(Construction {
        field,
        connection,
        tau: c.tau,
        rho: c.rho,
        scheme: c.scheme,
        ordering: c.ordering,
    })
}

/// Loads the construction for `options` from `dir`, building and storing it
/// on a miss. A stale or unreadable file is rebuilt and overwritten.
pub fn load_or_build(
    dir: Option<&Path>,
    options: &ConstructionOptions,
) -> Result<(Construction, CacheStatus), CacheError> {
    let Some(dir) = dir else {
        return Ok((scheme::construct(options)?, CacheStatus::Disabled));
    };
    let path = dir.join(cache_file_name(options));
    let mut status = CacheStatus::Miss;
    if let Ok(bytes) = std::fs::read(&path) {
        match decode(&bytes).and_then(|c| {
            let key_ok = c.field == options.field
                && c.ordering.choice == options.ordering
                && c.ordering.variant == options.ordering_variant;
            if key_ok {
                from_cached(c)
            } else {
                Err(CacheError::WrongKey {
                    found: c.field.to_hex(),
                    requested: options.field.to_hex(),
                })
            }
        }) {
            Ok(c) => return Ok((c, CacheStatus::Hit)),
            Err(_) => status = CacheStatus::Rebuilt,
        }
    }
    let c = scheme::construct(options)?;
    write_atomic(&path, &encode(&to_cached(&c)))?;
    Ok((c, status))
}

/// P (integers) or Q (fractions) as CSV with a header row.
pub fn matrix_csv(scheme: &SchemeDescriptor, dual: bool) -> String {
    let n = scheme.n_classes;
    let mut s = String::from(if dual { "i" } else { "j" });
    for c in 0..n {
        let _ = write!(s, ",{c}");
    }
    s.push('\n');
    for r in 0..n {
        let _ = write!(s, "{r}");
        for c in 0..n {
            if dual {
                let _ = write!(s, ",{}", fmt_rat(&scheme.q[r][c]));
            } else {
                let _ = write!(s, ",{}", scheme.p[r][c]);
            }
        }
        s.push('\n');
    }
    s
}
