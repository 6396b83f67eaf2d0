//! One function per subcommand. Each returns a rendered report on success;
//! mathematical failures surface as [`Verification`] errors.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use hillcap_core::cache::{self, CacheStatus};
use hillcap_core::certify::{self, CertifyConfig};
use hillcap_core::delsarte::{self, Distribution};
use hillcap_core::ffield::{self, Elem, FieldTables, FIELD_SIZE, GROUP_ORDER};
use hillcap_core::io::{format_elements, parse_elements};
use hillcap_core::projgeom::{self, Cap};
use hillcap_core::rational::fmt_rat;
use hillcap_core::scheme::{self, Construction, SchemeDescriptor};
use hillcap_core::search::{self, BitGraph, SearchConfig, Strategy};

use crate::config::RunConfig;
use crate::output::{record, Format, Report, Table};

/// A check on mathematical content failed (exit status 1).
#[derive(Debug)]
pub struct Verification(pub String);

impl fmt::Display for Verification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "verification failed: {}", self.0)
    }
}

impl std::error::Error for Verification {}

fn fail(msg: impl Into<String>) -> anyhow::Error {
    Verification(msg.into()).into()
}

/// Output of a command, plus the failure to report after printing it.
pub struct Outcome {
    pub text: String,
    pub failure: Option<Verification>,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, failure: None }
    }
}

/// Resolved configuration shared by all commands.
pub struct Ctx {
    pub run: RunConfig,
    pub format: Format,
}

impl Ctx {
    fn field(&self) -> Result<FieldTables> {
        ffield::build_field(self.run.field).map_err(|e| fail(e.to_string()))
    }

    fn construction(&self) -> Result<Construction> {
        let dir = self.run.cache_dir.as_deref();
        if let Some(d) = dir {
            std::fs::create_dir_all(d)
                .with_context(|| format!("creating cache directory {}", d.display()))?;
        }
        let (mut c, status) = cache::load_or_build(dir, &self.run.construction_options())
            .map_err(|e| match e {
                cache::CacheError::Io { .. } => anyhow!(e),
                other => fail(other.to_string()),
            })?;
        if status != CacheStatus::Disabled {
            eprintln!("cache: {status:?}");
        }
        // same labels as the certificate
        c.pin_to_subfield().map_err(|e| fail(e.to_string()))?;
        Ok(c)
    }
}

fn read_elements(path: &Path) -> Result<Vec<Elem>> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_elements(&text).with_context(|| format!("parsing {}", path.display()))
}

/// Writes to `path`, or returns the text for stdout.
fn emit(path: Option<&PathBuf>, text: String) -> Result<String> {
    match path {
        Some(p) => {
            std::fs::write(p, text).with_context(|| format!("writing {}", p.display()))?;
            Ok(String::new())
        }
        None => Ok(text),
    }
}

fn join<T: ToString>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(", ")
}

pub fn build_field(ctx: &Ctx) -> Result<Outcome> {
    let f = ctx.field()?;
    let sub64 = f.subfield_elements(64).map_err(|e| fail(e.to_string()))?;
    let gf4 = f.gf4_scalars();
    let mut r = Report::new("build-field");
    r.field("polynomial", f.spec().to_hex())
        .field("conway", f.spec().primitive_poly == ffield::CONWAY_POLY)
        .field("size", FIELD_SIZE)
        .field("multiplicative_order", GROUP_ORDER)
        .field("generator", format!("{:#05x}", f.exp(1)))
        .field("gf64_elements", sub64.len())
        .field(
            "gf4_scalars",
            gf4.iter().map(|x| format!("{x:#05x}")).collect::<Vec<_>>().join(" "),
        );
    Ok(Outcome::ok(r.render(ctx.format)))
}

fn profile_table(profile: &projgeom::HyperplaneProfile) -> Table {
    let mut t = Table::new("profile", &["size", "count"]);
    for (k, v) in &profile.counts {
        t.push([k, v]);
    }
    t
}

pub fn verify_cap(ctx: &Ctx, cap_file: Option<&Path>, profile_csv: Option<&PathBuf>) -> Result<Outcome> {
    let (f, vectors, imported) = match cap_file {
        Some(p) => (ctx.field()?, read_elements(p)?, true),
        None => {
            let c = ctx.construction()?;
            let set = c.connection.set.clone();
            (c.field, set, false)
        }
    };
    let cap = Cap::from_vectors(&f, &vectors).map_err(|e| anyhow!("{e}"))?;
    let verdict = projgeom::is_cap(&f, &cap.points);
    let profile = projgeom::intersection_profile(&f, &cap);
    let mut r = Report::new("verify-cap");
    r.field("source", if imported { "file" } else { "connection-set" })
        .field("points", cap.len())
        .field("cap", verdict.is_cap())
        .field("hyperplanes", profile.total_hyperplanes())
        .field(
            "profile",
            format!(
                "{{{}}}",
                profile
                    .counts
                    .iter()
                    .map(|(k, v)| format!("{k}: {v}"))
                    .collect::<Vec<_>>()
                    .join(", ")
            ),
        );
    let mut failure = None;
    if !verdict.is_cap() {
        failure = Some(Verification(format!("not a cap: {verdict:?}")));
    }
    if !imported {
        let expect = BTreeMap::from([(14usize, 429usize), (22, 936)]);
        let bound = projgeom::section_bound(430, 78, 110, 4);
        match projgeom::lemma_counting_check(78, bound, (14, 22), Some(&profile)) {
            Ok(l) => {
                r.field("section_bound", bound)
                    .field("moment_1", l.expected.first)
                    .field("moment_2", l.expected.second)
                    .field("moment_3", l.expected.third)
                    .field("cubic_combination", l.cubic_combination);
            }
            Err(e) => failure = Some(Verification(e.to_string())),
        }
        if cap.len() != 78 || profile.counts != expect {
            failure.get_or_insert(Verification(format!(
                "expected 78 points with profile {{14: 429, 22: 936}}, found {} points",
                cap.len()
            )));
        }
    }
    if let Some(p) = profile_csv {
        emit(Some(p), profile.to_csv())?;
    }
    r.table(profile_table(&profile));
    Ok(Outcome {
        text: r.render(ctx.format),
        failure,
    })
}

pub fn build_scheme(ctx: &Ctx) -> Result<Outcome> {
    let c = ctx.construction()?;
    let s = &c.scheme;
    let mut r = Report::new("build-scheme");
    r.field("polynomial", c.field.spec().to_hex())
        .field("coset_exponent", c.connection.exponent)
        .field("graph", c.connection.params)
        .field("stabilizer_order", c.connection.stabilizer.len())
        .field("classes", s.n_classes - 1)
        .field("valencies", join(&s.valencies))
        .field("multiplicities", join(&s.multiplicities))
        .field("tau", c.tau.describe(&c.field))
        .field("rho", c.rho.describe(&c.field))
        .field("matching_orderings", c.ordering.matching_orderings)
        .field("ordering_variant", c.ordering.variant)
        .field(
            "cache_file",
            cache::cache_file_name(&ctx.run.construction_options()),
        );
    Ok(Outcome::ok(r.render(ctx.format)))
}

fn p_table(s: &SchemeDescriptor) -> Table {
    let header: Vec<String> = std::iter::once("j".to_string())
        .chain((0..s.n_classes).map(|i| i.to_string()))
        .collect();
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut t = Table::new("P", &header);
    for (j, row) in s.p.iter().enumerate() {
        t.push(std::iter::once(j as i64).chain(row.iter().copied()));
    }
    t
}

fn q_table(s: &SchemeDescriptor) -> Table {
    let header: Vec<String> = std::iter::once("i".to_string())
        .chain((0..s.n_classes).map(|j| j.to_string()))
        .collect();
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut t = Table::new("Q", &header);
    for (i, row) in s.q.iter().enumerate() {
        t.push(std::iter::once(i.to_string()).chain(row.iter().map(fmt_rat)));
    }
    t
}

pub fn verify_scheme(ctx: &Ctx) -> Result<Outcome> {
    let c = ctx.construction()?;
    let s = &c.scheme;
    let p_ok = s
        .p
        .iter()
        .zip(scheme::REFERENCE_P.iter())
        .all(|(a, b)| a.as_slice() == b.as_slice());
    let checks = [
        ("axioms", s.verify_axioms().is_ok()),
        ("valencies", s.valencies == scheme::VALENCIES),
        ("p_matches_reference", p_ok && s.p.len() == 10),
        ("q_equals_p", certify::q_equals_p(s)),
        ("pq_is_4096_identity", certify::pq_is_scalar(s)),
    ];
    let mut r = Report::new("verify-scheme");
    r.field("classes", s.n_classes - 1)
        .field("valencies", join(&s.valencies));
    for (name, ok) in checks {
        r.field(name, ok);
    }
    r.table(p_table(s));
    let failed: Vec<&str> = checks.iter().filter(|c| !c.1).map(|c| c.0).collect();
    Ok(Outcome {
        text: r.render(ctx.format),
        failure: (!failed.is_empty()).then(|| Verification(format!("failed: {}", failed.join(", ")))),
    })
}

pub fn distributions(ctx: &Ctx, set_file: &Path, outer_csv: Option<&PathBuf>) -> Result<Outcome> {
    let set = read_elements(set_file)?;
    let c = ctx.construction()?;
    let s = &c.scheme;
    let a: Distribution =
        delsarte::inner_distribution(s, &set).map_err(|e| anyhow!("{e}"))?;
    let aq = delsarte::macwilliams(&a, s);
    let conn = ffield::membership(&c.connection.set);
    let coclique = search::validate_coclique(&conn, &set);
    let mut r = Report::new("distributions");
    r.field("size", set.len())
        .field("inner", &a)
        .field("transform", hillcap_core::rational::fmt_vec(&aq))
        .field("dual_degree", delsarte::dual_degree(&aq))
        .field("coclique", coclique.is_valid());
    let mut t = Table::new("distribution", &["class", "a", "aQ"]);
    for (i, (x, y)) in a.0.iter().zip(&aq).enumerate() {
        t.push([i.to_string(), fmt_rat(x), fmt_rat(y)]);
    }
    r.table(t);
    let failure = delsarte::check_nonnegative(&aq)
        .err()
        .map(|e| Verification(e.to_string()));
    if let Some(p) = outer_csv {
        let outer = delsarte::outer_distribution(s, &set);
        outer.verify(s, &set).map_err(|e| fail(e.to_string()))?;
        emit(Some(p), outer.to_csv())?;
    }
    Ok(Outcome {
        text: r.render(ctx.format),
        failure,
    })
}

fn certify_config(ctx: &Ctx, connection_file: Option<&Path>) -> Result<CertifyConfig> {
    Ok(CertifyConfig {
        field: ctx.run.field,
        coset_exponent: ctx.run.coset_exponent,
        ordering: ctx.run.ordering,
        ordering_variant: ctx.run.ordering_variant,
        connection_override: connection_file.map(read_elements).transpose()?,
    })
}

fn render_certificate(cert: &certify::Certificate, format: Format) -> String {
    match format {
        Format::Text => cert.render_text(),
        Format::Machine => cert.render_jsonl(),
        Format::Csv => {
            let mut t = Table::new("steps", &["index", "anchor", "status"]);
            for s in &cert.steps {
                t.push([s.index.to_string(), s.anchor.clone(), s.status.label().to_string()]);
            }
            t.to_csv()
        }
    }
}

pub fn certify(ctx: &Ctx, connection_file: Option<&Path>, output: Option<&PathBuf>) -> Result<Outcome> {
    let cert = certify::run_full_certification(&certify_config(ctx, connection_file)?);
    let text = emit(output, render_certificate(&cert, ctx.format))?;
    let failure = (!cert.is_confirmed()).then(|| {
        let step = cert
            .failed_step
            .and_then(|i| cert.steps.iter().find(|s| s.index == i));
        Verification(match step {
            Some(s) => format!("step {} ({}): {}", s.index, s.anchor, s.notes.join("; ")),
            None => "verdict FAILED".to_string(),
        })
    });
    if output.is_some() {
        eprintln!("verdict: {}", cert.verdict.label());
    }
    Ok(Outcome { text, failure })
}

pub struct SearchArgs {
    pub strategy: Option<Strategy>,
    pub target: Option<usize>,
    pub max_iterations: Option<u64>,
    pub max_nodes: Option<u64>,
    pub fix_root: Option<String>,
    pub output: Option<PathBuf>,
}

pub fn search(ctx: &Ctx, args: &SearchArgs) -> Result<Outcome> {
    let fix_root = match &args.fix_root {
        Some(s) => match parse_elements(s).map_err(|e| anyhow!("--fix-root: {e}"))?[..] {
            [x] => Some(x),
            _ => bail!("--fix-root takes one element"),
        },
        None => None,
    };
    let defaults = SearchConfig::default();
    let config = SearchConfig {
        seed: ctx.run.seed,
        time_budget: ctx.run.budget,
        target_size: args.target.or(ctx.run.target).unwrap_or(defaults.target_size),
        strategy: args.strategy.unwrap_or(ctx.run.strategy),
        max_iterations: args
            .max_iterations
            .or(ctx.run.max_iterations)
            .unwrap_or(defaults.max_iterations),
        max_nodes: args.max_nodes,
        fix_root,
    };
    config.validate().map_err(anyhow::Error::msg)?;
    eprintln!("search: strategy {} seed {}", config.strategy, config.seed);
    let c = ctx.construction()?;
    let graph = BitGraph::cayley(&c.connection.set);
    let report = search::search(&graph, &config).map_err(anyhow::Error::msg)?;
    let conn = ffield::membership(&c.connection.set);
    let verdict = search::validate_coclique(&conn, &report.best);
    if let Some(p) = &args.output {
        emit(Some(p), format_elements(&report.best))?;
    }
    let text = match ctx.format {
        Format::Text => {
            let mut s = report.render_text();
            s.push_str(&format!("revalidated: {}\n", verdict.is_valid()));
            s
        }
        Format::Csv => {
            let mut t = Table::new("history", &["step", "size", "elapsed_ms"]);
            for h in &report.history {
                t.push([h.step as u128, h.size as u128, h.elapsed_ms]);
            }
            t.to_csv()
        }
        Format::Machine => {
            let mut v = serde_json::to_value(&report)?;
            v["record"] = "search".into();
            v["revalidated"] = verdict.is_valid().into();
            record(v)
        }
    };
    Ok(Outcome {
        text,
        failure: (!verdict.is_valid())
            .then(|| Verification(format!("reported coclique invalid: {verdict:?}"))),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Artifact {
    P,
    Q,
    ConnectionSet,
    Cap,
    Profile,
    Subfield,
    Coloring,
    Certificate,
}

fn element_table(set: &[Elem], format: Format) -> String {
    match format {
        Format::Text => format_elements(set),
        _ => {
            let mut t = Table::new("elements", &["element"]);
            for x in set {
                t.push([format!("{x:#05x}")]);
            }
            let mut r = Report::new("export");
            r.field("count", set.len()).table(t);
            r.render(format)
        }
    }
}

pub fn export(ctx: &Ctx, artifact: Artifact, output: Option<&PathBuf>) -> Result<Outcome> {
    let single = |t: Table| {
        let mut r = Report::new("export");
        r.field("artifact", &t.name).table(t);
        match ctx.format {
            Format::Text => r.tables[0].to_csv(),
            f => r.render(f),
        }
    };
    let text = match artifact {
        Artifact::Certificate => {
            let cert = certify::run_full_certification(&certify_config(ctx, None)?);
            render_certificate(&cert, ctx.format)
        }
        Artifact::Subfield => {
            let f = ctx.field()?;
            let sub = f.subfield_elements(64).map_err(|e| fail(e.to_string()))?;
            element_table(&sub, ctx.format)
        }
        _ => {
            let c = ctx.construction()?;
            match artifact {
                Artifact::P => single(p_table(&c.scheme)),
                Artifact::Q => single(q_table(&c.scheme)),
                Artifact::ConnectionSet => element_table(&c.connection.set, ctx.format),
                Artifact::Cap => {
                    let cap = Cap::from_vectors(&c.field, &c.connection.set)
                        .map_err(|e| fail(e.to_string()))?;
                    let reps: Vec<Elem> = cap.points.iter().map(|p| p.representative()).collect();
                    element_table(&reps, ctx.format)
                }
                Artifact::Profile => {
                    let cap = Cap::from_vectors(&c.field, &c.connection.set)
                        .map_err(|e| fail(e.to_string()))?;
                    single(profile_table(&projgeom::intersection_profile(&c.field, &cap)))
                }
                Artifact::Coloring => {
                    let mut t = Table::new("coloring", &["element", "class"]);
                    for (x, class) in c.scheme.coloring.iter().enumerate() {
                        t.push([format!("{x:#05x}"), class.to_string()]);
                    }
                    single(t)
                }
                Artifact::Certificate | Artifact::Subfield => unreachable!(),
            }
        }
    };
    Ok(Outcome::ok(emit(output, text)?))
}
