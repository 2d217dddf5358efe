//! `hcembed` command-line front end.
//!
//! Exit codes: 0 all assertions pass, 1 counterexample or failed assertion,
//! 2 usage or parse error, 3 budget exceeded.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use hcembed::corpus::{build, default_corpus, load_catalog, split_generators, CatalogEntry};
use hcembed::embeddings::{validate_witness, EmbeddingWitness, SigmaContext};
use hcembed::error::Error;
use hcembed::harness::{
    reproduce_examples, subjects_for, sweep, sweep_groups, verify_cases, ExampleReport,
    HarnessConfig, LemmaData, LemmaReport, PartitionFamily, Status, SweepCase, SweepConfig,
    SweepCounts, SweepReport, Target,
};
use hcembed::lattice::{Caps, SubId, SubgroupLattice};
use hcembed::permgroup::{GroupHandle, Permutation};
use hcembed::sigma::{DProperty, SigmaPartition};

const SCHEMA: u32 = 1;

// Writes to stdout, ignoring a closed pipe.
macro_rules! out {
    ($($arg:tt)*) => {{
        use std::io::Write as _;
        let _ = write!(std::io::stdout().lock(), $($arg)*);
    }};
}

macro_rules! outln {
    ($($arg:tt)*) => {{
        use std::io::Write as _;
        let _ = writeln!(std::io::stdout().lock(), $($arg)*);
    }};
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
enum Format {
    #[default]
    Text,
    Json,
}

/// Contents of the TOML config file. Every field is optional; flags win.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    lattice_cap: Option<usize>,
    modularity_cap: Option<usize>,
    max_order: Option<u64>,
    partitions: Option<String>,
    d_property: Option<String>,
    representatives_only: Option<bool>,
    workers: Option<usize>,
    format: Option<Format>,
}

/// Resolved settings.
#[derive(Debug)]
struct Config {
    caps: Caps,
    max_order: u64,
    partitions: PartitionFamily,
    harness: HarnessConfig,
    workers: usize,
    format: Format,
}

#[derive(Parser)]
#[command(
    name = "hcembed",
    version,
    about = "Subgroup embedding properties of finite permutation groups"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalArgs {
    /// TOML config file.
    #[arg(long, global = true, env = "HCEMBED_CONFIG")]
    config: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Largest group order whose subgroup lattice is enumerated.
    #[arg(long, global = true)]
    lattice_cap: Option<usize>,
    /// Largest group order for the modularity scan.
    #[arg(long, global = true)]
    modularity_cap: Option<usize>,
    /// `full` (existence, conjugacy, dominance) or `ec` (existence, conjugacy).
    #[arg(long, global = true)]
    d_property: Option<String>,
    /// Quantify over one Hall σi-subgroup per block only.
    #[arg(long, global = true)]
    representatives_only: bool,
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Catalog file whose entry names may be used as group specs.
    #[arg(long, global = true)]
    catalog: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate every embedding predicate for one subgroup.
    Props {
        group: String,
        #[arg(long)]
        sigma: String,
        /// Index into the complete Hall σ-sets, in enumeration order.
        #[arg(long, default_value_t = 0)]
        hall: usize,
        /// Generators in cycle notation, comma separated; empty for the trivial subgroup.
        #[arg(long)]
        subgroup: String,
    },
    /// Reproduce the three worked examples.
    Examples,
    /// Check one statement on one group.
    Verify {
        target: String,
        group: String,
        /// One partition; all partitions of π(G) when omitted.
        #[arg(long)]
        sigma: Option<String>,
        /// E, or P for prop32; every applicable normal subgroup when omitted.
        #[arg(long)]
        subgroup: Option<String>,
    },
    /// Check one statement over the built-in corpus or a catalog.
    Sweep {
        #[arg(long)]
        max_order: Option<u64>,
        #[arg(long)]
        target: String,
        /// `all` or `classical`.
        #[arg(long)]
        partitions: Option<String>,
    },
    /// Run the lemma property suites on one group.
    Lemmas {
        group: String,
        /// One partition; all partitions of π(G) when omitted.
        #[arg(long)]
        sigma: Option<String>,
    },
    /// Dump the subgroup lattice.
    Lattice { group: String },
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Budget { .. } => 3,
            Error::Inconsistent(_) => 1,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

type Run<T> = Result<T, Failure>;

fn resolve_config(g: &GlobalArgs) -> Run<Config> {
    let file = match &g.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| usage(format!("{}: {e}", path.display())))?;
            toml::from_str::<FileConfig>(&text)
                .map_err(|e| usage(format!("{}: {e}", path.display())))?
        }
        None => FileConfig::default(),
    };
    let d_property = match g.d_property.as_deref().or(file.d_property.as_deref()) {
        Some(s) => s.parse::<DProperty>().map_err(|e| usage(e.to_string()))?,
        None => DProperty::default(),
    };
    let partitions = match file.partitions.as_deref() {
        Some(s) => s
            .parse::<PartitionFamily>()
            .map_err(|e| usage(e.to_string()))?,
        None => PartitionFamily::default(),
    };
    let defaults = Caps::default();
    let caps = Caps {
        lattice: g
            .lattice_cap
            .or(file.lattice_cap)
            .unwrap_or(defaults.lattice),
        modularity: g
            .modularity_cap
            .or(file.modularity_cap)
            .unwrap_or(defaults.modularity),
    };
    let max_order = file.max_order.unwrap_or(100);
    if caps.lattice == 0 || caps.modularity == 0 || max_order == 0 {
        return Err(usage("caps must be positive"));
    }
    Ok(Config {
        caps,
        max_order,
        partitions,
        harness: HarnessConfig {
            d_property,
            representatives_only: g.representatives_only
                || file.representatives_only.unwrap_or(false),
            lemma_budget: None,
        },
        workers: g.workers.or(file.workers).unwrap_or(0),
        format: g.format.or(file.format).unwrap_or_default(),
    })
}

/// Resolves a group spec: a catalog entry name, a builder expression, or a
/// catalog file path (`path` with one entry, or `path#name`).
fn resolve_group(spec: &str, catalog: Option<&Path>) -> Run<Arc<GroupHandle>> {
    if let Some(path) = catalog {
        let entries = load_catalog(path)?;
        if let Some((_, g)) = entries.into_iter().find(|(e, _)| e.name == spec) {
            return Ok(g);
        }
    }
    let (path, name) = match spec.split_once('#') {
        Some((p, n)) => (p, Some(n)),
        None => (spec, None),
    };
    if Path::new(path).is_file() {
        let entries = load_catalog(Path::new(path))?;
        return match name {
            Some(n) => entries
                .into_iter()
                .find(|(e, _)| e.name == n)
                .map(|(_, g)| g)
                .ok_or_else(|| usage(format!("no entry {n:?} in {path}"))),
            None if entries.len() == 1 => Ok(entries.into_iter().next().expect("one entry").1),
            None => Err(usage(format!(
                "{path} has {} entries; use {path}#name",
                entries.len()
            ))),
        };
    }
    Ok(build(spec)?)
}

fn parse_sigma(s: &str) -> Run<SigmaPartition> {
    s.parse().map_err(|e: Error| usage(e.to_string()))
}

fn parse_target(s: &str) -> Run<Target> {
    s.parse().map_err(|e: Error| usage(e.to_string()))
}

fn resolve_subgroup(lat: &SubgroupLattice, text: &str) -> Run<SubId> {
    let group = lat.group();
    let gens = split_generators(text)
        .iter()
        .map(|g| Permutation::parse_cycles(group.degree(), g))
        .collect::<Result<Vec<_>, _>>()?;
    for g in &gens {
        if !group.contains(g)? {
            return Err(usage(format!("{g} is not an element of the group")));
        }
    }
    let h = group.subgroup(&gens)?;
    lat.id_of(&h)
        .ok_or_else(|| usage("subgroup not found in the lattice"))
}

fn print_json<T: Serialize>(value: &T) {
    outln!(
        "{}",
        serde_json::to_string_pretty(value).expect("reports serialize")
    );
}

#[derive(Serialize)]
struct Predicates {
    order: usize,
    subgroup: String,
    normal: bool,
    sigma_subnormal: bool,
    modular: bool,
    sigma_permutable: bool,
    m_sigma_permutable: bool,
    weakly_m_sigma_permutable: bool,
    c_normal: bool,
    hall_sets: usize,
    hall: Option<Vec<String>>,
    h_permutable: Option<bool>,
    m_h_permutable: Option<bool>,
    weakly_m_h_permutable: Option<bool>,
    witnesses: Vec<EmbeddingWitness>,
}

#[derive(Serialize)]
struct PropsReport {
    schema: u32,
    group: String,
    sigma: String,
    predicates: Predicates,
}

fn props(
    cfg: &Config,
    group: &str,
    g: &Arc<GroupHandle>,
    sigma: &str,
    hall: usize,
    subgroup: &str,
) -> Run<()> {
    let sigma = parse_sigma(sigma)?;
    let lat = SubgroupLattice::with_caps(g, cfg.caps)?;
    let h = resolve_subgroup(&lat, subgroup)?;
    let ctx = SigmaContext::new(lat.top(), sigma.clone());
    let sets = ctx.hall_sets();
    if hall > 0 && hall >= sets.len() {
        return Err(usage(format!(
            "--hall {hall} out of range: {} complete Hall σ-sets",
            sets.len()
        )));
    }
    // Each witness with the Hall set it is relative to.
    let mut witnesses = Vec::new();
    if let Some(chain) = ctx.sigma_subnormal_chain(h) {
        witnesses.push((EmbeddingWitness::SigmaSubnormal { chain }, None));
    }
    if let Some(hs) = ctx.sigma_permutable_witness(h) {
        witnesses.push((EmbeddingWitness::SigmaPermutable { hall: hs.clone() }, None));
    }
    if let Some(w) = ctx.weakly_m_sigma_witness(h)? {
        let w = EmbeddingWitness::WeaklyMPermutable {
            t: w.t,
            s: w.s,
            a: w.a,
            b: w.b,
        };
        witnesses.push((w, None));
    }
    if let Some(t) = ctx.c_normal_witness(h) {
        witnesses.push((EmbeddingWitness::CNormal { t }, None));
    }
    let mut p = Predicates {
        order: lat.order(h),
        subgroup: lat.describe(h),
        normal: lat.top().is_normal(h),
        sigma_subnormal: ctx.is_sigma_subnormal(h),
        modular: ctx.is_modular(h)?,
        sigma_permutable: ctx.is_sigma_permutable(h),
        m_sigma_permutable: ctx.is_m_sigma_permutable(h)?,
        weakly_m_sigma_permutable: ctx.is_weakly_m_sigma_permutable(h)?,
        c_normal: ctx.is_c_normal(h),
        hall_sets: sets.len(),
        hall: None,
        h_permutable: None,
        m_h_permutable: None,
        weakly_m_h_permutable: None,
        witnesses: Vec::new(),
    };
    if let Some(hs) = sets.get(hall) {
        let hc = ctx.hall(hs.clone());
        p.hall = Some(hs.ids().map(|x| lat.describe(x)).collect());
        p.h_permutable = Some(hc.is_h_permutable(h));
        p.m_h_permutable = Some(hc.is_m_h_permutable(h)?);
        p.weakly_m_h_permutable = Some(hc.is_weakly_m_h_permutable(h)?);
        if let Some(w) = hc.weakly_m_h_witness(h)? {
            let w = EmbeddingWitness::WeaklyMPermutable {
                t: w.t,
                s: w.s,
                a: w.a,
                b: w.b,
            };
            witnesses.push((w, Some(hs)));
        }
    }
    for (w, hs) in &witnesses {
        if !validate_witness(&ctx, *hs, h, w)? {
            return Err(Failure {
                code: 1,
                message: format!("witness {w:?} failed re-validation"),
            });
        }
    }
    p.witnesses = witnesses.into_iter().map(|(w, _)| w).collect();
    match cfg.format {
        Format::Json => print_json(&PropsReport {
            schema: SCHEMA,
            group: group.to_string(),
            sigma: sigma.to_string(),
            predicates: p,
        }),
        Format::Text => {
            let opt = |b: Option<bool>| b.map_or("n/a".to_string(), |b| b.to_string());
            let rows = [
                ("group", group.to_string()),
                ("sigma", sigma.to_string()),
                ("subgroup", p.subgroup.clone()),
                ("order", p.order.to_string()),
                ("normal", p.normal.to_string()),
                ("σ-subnormal", p.sigma_subnormal.to_string()),
                ("modular", p.modular.to_string()),
                ("σ-permutable", p.sigma_permutable.to_string()),
                ("m-σ-permutable", p.m_sigma_permutable.to_string()),
                (
                    "weakly m-σ-permutable",
                    p.weakly_m_sigma_permutable.to_string(),
                ),
                ("c-normal", p.c_normal.to_string()),
                ("complete Hall σ-sets", p.hall_sets.to_string()),
                (
                    "ℋ",
                    p.hall.as_ref().map_or("n/a".to_string(), |h| h.join(" ")),
                ),
                ("H-permutable", opt(p.h_permutable)),
                ("m-H-permutable", opt(p.m_h_permutable)),
                ("weakly-m-H-permutable", opt(p.weakly_m_h_permutable)),
            ];
            for (k, v) in rows {
                outln!("{:<24}{v}", k);
            }
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct ExamplesOutput {
    schema: u32,
    passed: bool,
    examples: Vec<ExampleReport>,
}

fn examples(cfg: &Config) -> Run<()> {
    let reports = reproduce_examples()?;
    let passed = reports.iter().all(ExampleReport::passed);
    match cfg.format {
        Format::Json => print_json(&ExamplesOutput {
            schema: SCHEMA,
            passed,
            examples: reports,
        }),
        Format::Text => {
            for r in &reports {
                if r.passed() {
                    outln!("PASS {} ({} claims)", r.name, r.checks.len());
                } else {
                    let failed: Vec<&str> = r
                        .checks
                        .iter()
                        .filter(|c| !c.passed)
                        .map(|c| c.claim.as_str())
                        .collect();
                    outln!("FAIL {}: {}", r.name, failed.join("; "));
                }
            }
        }
    }
    if passed {
        Ok(())
    } else {
        Err(Failure {
            code: 1,
            message: "an example claim failed".into(),
        })
    }
}

#[derive(Serialize)]
struct VerifyReport {
    schema: u32,
    target: Target,
    group: String,
    counts: SweepCounts,
    cases: Vec<SweepCase>,
}

fn verify(
    cfg: &Config,
    group: &str,
    g: &Arc<GroupHandle>,
    target: &str,
    sigma: Option<&str>,
    sub: Option<&str>,
) -> Run<()> {
    let target = parse_target(target)?;
    let lat = SubgroupLattice::with_caps(g, cfg.caps)?;
    let sigmas = match sigma {
        Some(s) => vec![parse_sigma(s)?],
        None => cfg.partitions.partitions(g.order()),
    };
    let subjects = match sub {
        Some(s) => vec![resolve_subgroup(&lat, s)?],
        None => subjects_for(&lat, target),
    };
    let cases = verify_cases(group, &lat, target, cfg.harness, &sigmas, &subjects)?;
    let mut counts = SweepCounts::default();
    for c in &cases {
        counts.cases += 1;
        match c.verdict.status {
            Status::HypothesisFails => counts.hypothesis_fails += 1,
            Status::Vacuous => counts.vacuous += 1,
            Status::Holds => counts.holds += 1,
            Status::Counterexample => counts.counterexample += 1,
        }
        counts.holds_non_vacuous += c.verdict.is_non_vacuous_hold() as usize;
        counts.hall_set_dependent += c.verdict.hall_set_dependent as usize;
    }
    match cfg.format {
        Format::Json => print_json(&VerifyReport {
            schema: SCHEMA,
            target,
            group: group.to_string(),
            counts,
            cases,
        }),
        Format::Text => {
            outln!(
                "{:<14}{:<18}{:>10}{:>8}  subgroup",
                "σ",
                "status",
                "quantified",
                "ℋ pass"
            );
            for c in &cases {
                let v = &c.verdict;
                outln!(
                    "{:<14}{:<18}{:>10}{:>8}  {}",
                    c.sigma,
                    v.status.to_string(),
                    v.quantified,
                    format!("{}/{}", v.hall_sets_passing, v.hall_sets),
                    c.subgroup.as_deref().unwrap_or("G"),
                );
                if let Some(r) = &v.reason {
                    outln!("    {r}");
                }
                for w in &v.witnesses {
                    outln!("    {}: {}", w.role, w.subgroup);
                }
            }
        }
    }
    if counts.counterexample > 0 {
        return Err(Failure {
            code: 1,
            message: format!("{} counterexamples", counts.counterexample),
        });
    }
    Ok(())
}

fn run_sweep(
    cfg: &Config,
    catalog: Option<&Path>,
    target: &str,
    max_order: Option<u64>,
    partitions: Option<&str>,
) -> Run<()> {
    let sweep_cfg = SweepConfig {
        max_order: max_order.unwrap_or(cfg.max_order),
        target: parse_target(target)?,
        harness: cfg.harness,
        caps: cfg.caps,
        partitions: match partitions {
            Some(s) => s.parse().map_err(|e: Error| usage(e.to_string()))?,
            None => cfg.partitions,
        },
    };
    let report: SweepReport = match catalog {
        Some(path) => {
            let groups: Vec<(String, Arc<GroupHandle>)> = load_catalog(path)?
                .into_iter()
                .map(|(e, g): (CatalogEntry, _)| (e.name, g))
                .collect();
            sweep_groups(&groups, &sweep_cfg)?
        }
        None => sweep(&default_corpus(), &sweep_cfg)?,
    };
    match cfg.format {
        Format::Json => print_json(&report),
        Format::Text => {
            out!("{}", report.summary_table());
            for n in &report.budget_notes {
                outln!("  note: {n}");
            }
        }
    }
    if report.counts.counterexample > 0 {
        return Err(Failure {
            code: 1,
            message: format!("{} counterexamples", report.counts.counterexample),
        });
    }
    Ok(())
}

#[derive(Serialize)]
struct LemmasOutput {
    schema: u32,
    group: String,
    reports: Vec<LemmaReport>,
}

fn lemmas(cfg: &Config, group: &str, g: &Arc<GroupHandle>, sigma: Option<&str>) -> Run<()> {
    let sigmas = match sigma {
        Some(s) => vec![parse_sigma(s)?],
        None => cfg.partitions.partitions(g.order()),
    };
    let data = LemmaData::new(g, cfg.caps)?;
    let mut reports = Vec::new();
    for s in &sigmas {
        reports.push(data.run(s, cfg.harness)?);
    }
    let violations: usize = reports.iter().map(LemmaReport::violation_count).sum();
    let exhausted = reports
        .iter()
        .flat_map(|r| &r.outcomes)
        .any(|o| o.budget_exhausted);
    match cfg.format {
        Format::Json => print_json(&LemmasOutput {
            schema: SCHEMA,
            group: group.to_string(),
            reports,
        }),
        Format::Text => {
            for r in &reports {
                outln!("σ = {}", r.sigma);
                for o in &r.outcomes {
                    let mark = if o.violations.is_empty() {
                        "ok"
                    } else {
                        "FAIL"
                    };
                    outln!(
                        "  {:<4} {:>8} {:>4}  {}",
                        mark,
                        o.instances,
                        o.violations.len(),
                        o.lemma
                    );
                    for v in &o.violations {
                        outln!("        {v}");
                    }
                }
            }
        }
    }
    if violations > 0 {
        return Err(Failure {
            code: 1,
            message: format!("{violations} lemma violations"),
        });
    }
    if exhausted {
        return Err(Failure {
            code: 3,
            message: "lemma budget exhausted".into(),
        });
    }
    Ok(())
}

#[derive(Serialize)]
struct LatticeEntry {
    id: usize,
    order: usize,
    subgroup: String,
    normal: bool,
    class: usize,
    /// Maximal subgroups, by id.
    maximal: Vec<usize>,
}

#[derive(Serialize)]
struct LatticeOutput {
    schema: u32,
    group: String,
    order: u64,
    subgroups: Vec<LatticeEntry>,
}

fn lattice(cfg: &Config, group: &str, g: &Arc<GroupHandle>) -> Run<()> {
    let lat = SubgroupLattice::with_caps(g, cfg.caps)?;
    let top = lat.top();
    let subgroups: Vec<LatticeEntry> = lat
        .ids()
        .map(|x| {
            let proper: Vec<SubId> = lat.below(x).ones().map(SubId).filter(|&y| y != x).collect();
            let maximal = proper
                .iter()
                .filter(|&&y| !proper.iter().any(|&z| z != y && lat.le(y, z)))
                .map(|y| y.0)
                .collect();
            LatticeEntry {
                id: x.0,
                order: lat.order(x),
                subgroup: lat.describe(x),
                normal: top.is_normal(x),
                class: lat.class_of(x),
                maximal,
            }
        })
        .collect();
    match cfg.format {
        Format::Json => print_json(&LatticeOutput {
            schema: SCHEMA,
            group: group.to_string(),
            order: g.order(),
            subgroups,
        }),
        Format::Text => {
            outln!(
                "{group}: order {}, {} subgroups",
                g.order(),
                subgroups.len()
            );
            outln!(
                "{:>5}{:>7}{:>7}{:>7}  {:<28}maximal",
                "id",
                "order",
                "class",
                "normal",
                "generators"
            );
            for s in &subgroups {
                let maximal: Vec<String> = s.maximal.iter().map(usize::to_string).collect();
                outln!(
                    "{:>5}{:>7}{:>7}{:>7}  {:<28}{}",
                    s.id,
                    s.order,
                    s.class,
                    if s.normal { "yes" } else { "" },
                    s.subgroup,
                    maximal.join(" ")
                );
            }
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Run<()> {
    let cfg = resolve_config(&cli.global)?;
    if cfg.workers > 0 {
        // Fails only if a pool already exists, in which case it is kept.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.workers)
            .build_global();
    }
    let catalog = cli.global.catalog.as_deref();
    match &cli.command {
        Command::Props {
            group,
            sigma,
            hall,
            subgroup,
        } => props(
            &cfg,
            group,
            &resolve_group(group, catalog)?,
            sigma,
            *hall,
            subgroup,
        ),
        Command::Examples => examples(&cfg),
        Command::Verify {
            target,
            group,
            sigma,
            subgroup,
        } => verify(
            &cfg,
            group,
            &resolve_group(group, catalog)?,
            target,
            sigma.as_deref(),
            subgroup.as_deref(),
        ),
        Command::Sweep {
            max_order,
            target,
            partitions,
        } => run_sweep(&cfg, catalog, target, *max_order, partitions.as_deref()),
        Command::Lemmas { group, sigma } => lemmas(
            &cfg,
            group,
            &resolve_group(group, catalog)?,
            sigma.as_deref(),
        ),
        Command::Lattice { group } => lattice(&cfg, group, &resolve_group(group, catalog)?),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
