//! Command-line interface: argument types and the command runners.

use std::fs;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use orbit_site_core::cohomology::{category_cohomology, cech_cohomology, ext_over_category, g_m};
use orbit_site_core::fincat::FinCat;
use orbit_site_core::kan::right_kan;
use orbit_site_core::orbit::{OrbitCategory, OrbitTower, Variant};
use orbit_site_core::picard::{character_embedding, h1_units, pic_bruteforce};
use orbit_site_core::presheaf::z_constant;
use orbit_site_core::site::sipp_topology;
use orbit_site_core::{Error, Guards};
use serde::Serialize;
use serde_json::{json, Value};

use crate::battery::{build_group, default_battery, Case};
use crate::codec::{
    invariant_factors, parse_variant, CategoryJson, CodecError, IntJson, OrbitJson, TopologyJson, SCHEMA,
};
use crate::coeff::parse_coeff;
use crate::report::{unix_now, GuardOverrides, VerificationReport};
use crate::verify::{run_suite, Suite};

pub const GUARDS_ENV: &str = "ORBIT_SITE_GUARDS";

#[derive(Debug, Parser)]
#[command(name = "orbit-site", version, about = "Sites, cohomology and Picard groups of orbit categories")]
pub struct Cli {
    /// Print JSON instead of the human-readable form.
    #[arg(long, global = true)]
    pub json: bool,
    /// Leave timestamps and runtimes out of reports.
    #[arg(long, global = true)]
    pub no_timestamp: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build an orbit category and write it as JSON.
    Build(BuildArgs),
    /// Cohomology of a category with coefficients.
    Cohomology(CohomologyArgs),
    /// Run verification suites.
    Verify(VerifyArgs),
    /// The Sylow-trivial group computed along several paths.
    Picard(PicardArgs),
}

#[derive(Debug, clap::Args)]
pub struct BuildArgs {
    #[arg(long)]
    pub group: String,
    #[arg(long)]
    pub p: Option<u64>,
    /// all, p-subgroups, p-nontrivial or p-coprime-index
    #[arg(long, default_value = "all")]
    pub variant: String,
    /// Attach the sipp topology (needs `--p` and the variant `all`).
    #[arg(long)]
    pub sipp: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Engine {
    Bar,
    Ext,
    Both,
}

#[derive(Debug, clap::Args)]
pub struct CohomologyArgs {
    /// A category or orbit category JSON file.
    #[arg(long, conflicts_with_all = ["group", "p"])]
    pub cat: Option<PathBuf>,
    #[arg(long, requires = "p")]
    pub group: Option<String>,
    #[arg(long)]
    pub p: Option<u64>,
    /// Z, Z/n, random:SEED or @presheaf.json
    #[arg(long, default_value = "Z")]
    pub coeff: String,
    #[arg(long, default_value_t = 1)]
    pub degree: usize,
    #[arg(long, value_enum, default_value = "bar")]
    pub engine: Engine,
}

#[derive(Debug, clap::Args)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub suite: Suite,
    /// Restrict to one case; needs `--p` and `--q`.
    #[arg(long, requires_all = ["p", "q"], conflicts_with = "battery")]
    pub group: Option<String>,
    #[arg(long)]
    pub p: Option<u64>,
    #[arg(long)]
    pub q: Option<u64>,
    /// JSON list of `{group, p, q}` cases.
    #[arg(long)]
    pub battery: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Path {
    Bar,
    CechExt,
    Bruteforce,
}

#[derive(Debug, clap::Args)]
pub struct PicardArgs {
    #[arg(long)]
    pub group: String,
    #[arg(long)]
    pub p: u64,
    #[arg(long)]
    pub q: u64,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "bar,cech-ext,bruteforce")]
    pub paths: Vec<Path>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{0}")]
    Check(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl From<CodecError> for CliError {
    fn from(e: CodecError) -> Self {
        match e {
            CodecError::Core(e) => CliError::Core(e),
            other => CliError::Usage(other.to_string()),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 1,
            CliError::Core(e) if e.is_guard() => 2,
            CliError::Core(
                Error::MalformedPermutation(_) | Error::BadDescriptor(_) | Error::NotPrime(_) | Error::Invalid(_),
            ) => 1,
            CliError::Core(_) | CliError::Check(_) => 3,
        }
    }
}

/// What a command produced: text for stdout, and optionally a failed check
/// with its witness for stderr.
#[derive(Debug)]
pub struct Output {
    pub stdout: String,
    pub failure: Option<String>,
}

pub fn guards_from_env() -> Result<Guards, CliError> {
    match std::env::var(GUARDS_ENV) {
        Ok(s) if !s.trim().is_empty() => {
            let o: GuardOverrides =
                serde_json::from_str(&s).map_err(|e| CliError::Usage(format!("{GUARDS_ENV}: {e}")))?;
            Ok(o.apply(Guards::default()))
        }
        _ => Ok(Guards::default()),
    }
}

pub fn run(cli: &Cli, guards: &Guards) -> Result<Output, CliError> {
    match &cli.command {
        Command::Build(a) => build(a, cli, guards),
        Command::Cohomology(a) => cohomology(a, cli, guards),
        Command::Verify(a) => verify(a, cli, guards),
        Command::Picard(a) => picard(a, cli, guards),
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn stamp(v: &mut Value, cli: &Cli, start: Instant) {
    if !cli.no_timestamp {
        v["timestamp"] = json!(unix_now());
        v["runtime_ms"] = json!(start.elapsed().as_millis() as u64);
    }
}

fn factors_text(f: &[IntJson]) -> String {
    if f.is_empty() {
        return "0".into();
    }
    f.iter()
        .map(|x| match x {
            IntJson::Small(0) => "Z".to_string(),
            IntJson::Small(n) => format!("Z/{n}"),
            IntJson::Big(s) => format!("Z/{s}"),
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

fn build(a: &BuildArgs, cli: &Cli, guards: &Guards) -> Result<Output, CliError> {
    let variant =
        parse_variant(&a.variant).ok_or_else(|| CliError::Usage(format!("unknown variant {:?}", a.variant)))?;
    let group = build_group(&a.group, guards)?;
    let o = OrbitCategory::new(group.clone(), a.p, variant)?;
    let mut doc = OrbitJson::from_orbit(&a.group, &o);
    if a.sipp {
        let p = a.p.ok_or_else(|| CliError::Usage("--sipp needs --p".into()))?;
        if variant != Variant::All {
            return Err(CliError::Usage("--sipp needs the variant all".into()));
        }
        let t = OrbitTower::new(group, p)?;
        doc.topology = Some(TopologyJson::from_topology(&t.full.cat, &sipp_topology(&t)));
    }
    let text = to_json(&doc);
    let summary = format!("{} objects, {} morphisms", o.cat.object_count(), o.cat.morphism_count());
    let stdout = match &a.out {
        Some(path) => {
            fs::write(path, &text)?;
            if cli.json {
                to_json(&json!({
                    "schema": SCHEMA,
                    "out": path,
                    "objects": o.cat.object_count(),
                    "morphisms": o.cat.morphism_count(),
                }))
            } else {
                format!("{summary}\nwritten to {}\n", path.display())
            }
        }
        None => text,
    };
    Ok(Output { stdout, failure: None })
}

/// Either a bare category or an orbit category with its group data.
fn load_category(path: &PathBuf, guards: &Guards) -> Result<(FinCat, Option<OrbitJson>), CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    if v.get("group").is_some() {
        let o: OrbitJson = serde_json::from_value(v).map_err(|e| CliError::Usage(e.to_string()))?;
        let cat = o.to_orbit(guards)?.cat;
        Ok((cat, Some(o)))
    } else {
        let c: CategoryJson = serde_json::from_value(v).map_err(|e| CliError::Usage(e.to_string()))?;
        Ok((c.to_cat()?, None))
    }
}

fn cohomology(a: &CohomologyArgs, cli: &Cli, guards: &Guards) -> Result<Output, CliError> {
    let start = Instant::now();
    let (bar, ext, inputs) = match (&a.cat, &a.group) {
        (Some(path), _) => {
            let (c, _) = load_category(path, guards)?;
            let m = parse_coeff(&a.coeff, &c)?;
            let bar = matches!(a.engine, Engine::Bar | Engine::Both)
                .then(|| category_cohomology(&c, &m, a.degree, guards))
                .transpose()?;
            let ext = matches!(a.engine, Engine::Ext | Engine::Both)
                .then(|| {
                    ext_over_category(&c, &z_constant(&c), &m, a.degree, guards.max_matrix_dim)
                        .map(|mut v| v.swap_remove(a.degree))
                })
                .transpose()?;
            (bar, ext, json!({ "cat": path, "coeff": a.coeff, "degree": a.degree }))
        }
        (None, Some(g)) => {
            let p = a.p.expect("clap requires --p");
            let t = OrbitTower::new(build_group(g, guards)?, p)?;
            let d = &t.p_nontrivial.cat;
            let m = parse_coeff(&a.coeff, d)?;
            let bar = matches!(a.engine, Engine::Bar | Engine::Both)
                .then(|| category_cohomology(d, &m, a.degree, guards))
                .transpose()?;
            let ext = matches!(a.engine, Engine::Ext | Engine::Both)
                .then(|| {
                    let o = &t.full.cat;
                    let rk = right_kan(d, o, &t.iota, &m).presheaf;
                    cech_cohomology(o, t.top(), &rk, &sipp_topology(&t), a.degree, guards)
                })
                .transpose()?;
            (bar, ext, json!({ "group": g, "p": p, "coeff": a.coeff, "degree": a.degree }))
        }
        (None, None) => return Err(CliError::Usage("give --cat or --group with --p".into())),
    };
    let agree = match (&bar, &ext) {
        (Some(b), Some(e)) => Some(b.is_isomorphic(e)),
        _ => None,
    };
    let value = bar.as_ref().or(ext.as_ref()).expect("one engine ran");
    let mut doc = json!({
        "schema": SCHEMA,
        "command": "cohomology",
        "inputs": inputs,
        "engine": format!("{:?}", a.engine).to_lowercase(),
        "invariant_factors": invariant_factors(value),
        "bar": bar.as_ref().map(invariant_factors),
        "ext": ext.as_ref().map(invariant_factors),
        "agree": agree,
    });
    stamp(&mut doc, cli, start);
    let stdout = if cli.json {
        to_json(&doc)
    } else {
        let mut s = format!("H^{} = {}\n", a.degree, factors_text(&invariant_factors(value)));
        if let Some(ok) = agree {
            s.push_str(&format!("engines agree: {ok}\n"));
        }
        s
    };
    let failure = (agree == Some(false)).then(|| {
        format!(
            "engines disagree in degree {}: bar {} vs ext {}",
            a.degree,
            factors_text(&invariant_factors(bar.as_ref().unwrap())),
            factors_text(&invariant_factors(ext.as_ref().unwrap()))
        )
    });
    Ok(Output { stdout, failure })
}

fn load_battery(a: &VerifyArgs) -> Result<Vec<Case>, CliError> {
    if let Some(g) = &a.group {
        return Ok(vec![Case::new(g, a.p.expect("clap"), a.q.expect("clap"))]);
    }
    if let Some(path) = &a.battery {
        let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        return serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())));
    }
    Ok(default_battery())
}

fn verify(a: &VerifyArgs, cli: &Cli, guards: &Guards) -> Result<Output, CliError> {
    let cases = load_battery(a)?;
    for c in &cases {
        if c.q < 2 {
            return Err(CliError::Usage(format!("q must be at least 2 in {}", c.label())));
        }
    }
    let checks = run_suite(a.suite, &cases, guards);
    let mut report = VerificationReport::new(a.suite.name(), guards, checks);
    if cli.no_timestamp {
        report.strip_timing();
    } else {
        report.stamp();
    }
    let failure = (!report.passed()).then(|| {
        report
            .failures()
            .map(|c| format!("FAIL {}: witness {}", c.id, c.witness.clone().unwrap_or(Value::Null)))
            .collect::<Vec<_>>()
            .join("\n")
    });
    let stdout = if cli.json { to_json(&report) } else { report.human() };
    Ok(Output { stdout, failure })
}

fn picard(a: &PicardArgs, cli: &Cli, guards: &Guards) -> Result<Output, CliError> {
    let start = Instant::now();
    let group = build_group(&a.group, guards)?;
    let t = OrbitTower::new(group.clone(), a.p)?;
    let want = |p: Path| a.paths.contains(&p);
    let bar = want(Path::Bar).then(|| h1_units(&group, a.p, a.q, guards)).transpose()?;
    let cech = want(Path::CechExt)
        .then(|| cech_cohomology(&t.full.cat, t.top(), &g_m(&t, a.q), &sipp_topology(&t), 1, guards))
        .transpose()?;
    let mut brute_skipped = None;
    let brute = if want(Path::Bruteforce) {
        match pic_bruteforce(&t.p_nontrivial.cat, a.q.saturating_sub(1), guards.max_enumeration) {
            Ok(r) => Some(r.group),
            Err(e) if e.is_guard() => {
                brute_skipped = Some(e.to_string());
                None
            }
            Err(e) => return Err(e.into()),
        }
    } else {
        None
    };
    let found: Vec<_> = [&bar, &cech, &brute].into_iter().flatten().collect();
    let Some(first) = found.first() else {
        return Err(CliError::Usage("no path could be computed".into()));
    };
    let agree = found.iter().all(|g| g.is_isomorphic(first));
    let emb = character_embedding(&group, a.p, a.q)?;
    let mut paths = json!({});
    if let Some(g) = &bar {
        paths["bar"] = json!(invariant_factors(g));
    }
    if let Some(g) = &cech {
        paths["cech_ext"] = json!(invariant_factors(g));
    }
    if let Some(g) = &brute {
        paths["bruteforce"] = json!(invariant_factors(g));
    }
    if let Some(why) = &brute_skipped {
        paths["bruteforce_skipped"] = json!(why);
    }
    let factors = invariant_factors(first);
    let mut doc = json!({
        "schema": SCHEMA,
        "group": a.group,
        "p": a.p,
        "q": a.q,
        "paths": paths,
        "invariant_factors": factors,
        "agree": agree,
        "character_image_order": emb.cocycles.len(),
    });
    stamp(&mut doc, cli, start);
    let stdout = if cli.json {
        to_json(&doc)
    } else {
        let mut s = format!("{} p={} q={}\n", a.group, a.p, a.q);
        for (name, g) in [("bar", &bar), ("cech-ext", &cech), ("bruteforce", &brute)] {
            if let Some(g) = g {
                s.push_str(&format!("  {name:<11} {}\n", factors_text(&invariant_factors(g))));
            }
        }
        if let Some(why) = &brute_skipped {
            s.push_str(&format!("  {:<11} skipped: {why}\n", "bruteforce"));
        }
        s.push_str(&format!("  agree       {agree}\n  characters  {}\n", emb.cocycles.len()));
        s
    };
    let failure = (!agree).then(|| format!("paths disagree: {paths}"));
    Ok(Output { stdout, failure })
}
