//! Run configuration: TOML file, then environment and flags on top.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use hillcap_core::ffield::FieldSpec;
use hillcap_core::scheme::{ConstructionOptions, OrderingChoice};
use hillcap_core::search::Strategy;
use serde::Deserialize;

/// Contents of a `--config` file. Every key is optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct FileConfig {
    pub field_poly: Option<String>,
    pub cache_dir: Option<PathBuf>,
    pub coset_exponent: Option<usize>,
    pub ordering: Option<String>,
    pub ordering_variant: Option<usize>,
    #[serde(default)]
    pub search: SearchSection,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct SearchSection {
    pub seed: Option<u64>,
    pub budget: Option<f64>,
    pub strategy: Option<String>,
    pub target: Option<usize>,
    pub max_iterations: Option<u64>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }
}

/// Effective settings after merging file, environment and flags.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub field: FieldSpec,
    pub cache_dir: Option<PathBuf>,
    pub coset_exponent: Option<usize>,
    pub ordering: OrderingChoice,
    pub ordering_variant: usize,
    pub seed: u64,
    pub budget: f64,
    pub strategy: Strategy,
    pub target: Option<usize>,
    pub max_iterations: Option<u64>,
}

pub fn parse_ordering(s: &str) -> Result<OrderingChoice> {
    match s {
        "standard" => Ok(OrderingChoice::Standard),
        "tau-swapped" => Ok(OrderingChoice::TauSwapped),
        _ => bail!("unknown ordering {s:?} (standard, tau-swapped)"),
    }
}

/// Overrides coming from flags or their environment mirrors.
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub field_poly: Option<String>,
    pub cache_dir: Option<PathBuf>,
    pub no_cache: bool,
    pub seed: Option<u64>,
    pub budget: Option<f64>,
    pub ordering: Option<String>,
    pub ordering_variant: Option<usize>,
}

impl RunConfig {
    pub fn resolve(file: Option<FileConfig>, o: &Overrides) -> Result<Self> {
        let file = file.unwrap_or_default();
        let poly = o.field_poly.clone().or(file.field_poly);
        let field = match poly {
            Some(p) => FieldSpec::parse_hex(&p).with_context(|| format!("field polynomial {p:?}"))?,
            None => FieldSpec::default(),
        };
        hillcap_core::ffield::build_field(field).context("field polynomial")?;
        let ordering = match o.ordering.as_deref().or(file.ordering.as_deref()) {
            Some(s) => parse_ordering(s)?,
            None => OrderingChoice::Standard,
        };
        let strategy = match file.search.strategy.as_deref() {
            Some(s) => s.parse().map_err(anyhow::Error::msg)?,
            None => Strategy::Greedy,
        };
        let budget = o.budget.or(file.search.budget).unwrap_or(10.0);
        if !(budget.is_finite() && budget >= 0.0) {
            bail!("budget must be a nonnegative number of seconds");
        }
        Ok(RunConfig {
            field,
            cache_dir: if o.no_cache {
                None
            } else {
                o.cache_dir.clone().or(file.cache_dir)
            },
            coset_exponent: file.coset_exponent,
            ordering,
            ordering_variant: o.ordering_variant.or(file.ordering_variant).unwrap_or(0),
            seed: o.seed.or(file.search.seed).unwrap_or(0),
            budget,
            strategy,
            target: file.search.target,
            max_iterations: file.search.max_iterations,
        })
    }

    pub fn construction_options(&self) -> ConstructionOptions {
        ConstructionOptions {
            field: self.field,
            coset_exponent: self.coset_exponent,
            ordering: self.ordering,
            ordering_variant: self.ordering_variant,
        }
    }
}
