//! Corpus sweeps over all σ-partitions and normal subgroups, and the
//! implication chain between the embedding predicates.

use std::fmt::Write as _;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{Checker, HarnessConfig, Status, Target, Verdict};
use crate::arith::prime_divisors;
use crate::corpus::{build, CorpusEntry};
use crate::embeddings::SigmaContext;
use crate::error::{Error, Result};
use crate::lattice::{Caps, SubId, SubgroupLattice};
use crate::permgroup::GroupHandle;
use crate::series::is_p_group;
use crate::sigma::SigmaPartition;

/// Which σ-partitions a sweep visits.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PartitionFamily {
    /// Every set partition of π(G), each with the implicit complement.
    #[default]
    All,
    /// Only the partition into single primes.
    Classical,
}

impl PartitionFamily {
    pub fn partitions(self, order: u64) -> Vec<SigmaPartition> {
        match self {
            PartitionFamily::All => partitions_for(order),
            PartitionFamily::Classical => vec![SigmaPartition::classical()],
        }
    }
}

impl std::str::FromStr for PartitionFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "all" => Ok(PartitionFamily::All),
            "classical" => Ok(PartitionFamily::Classical),
            other => Err(Error::Validation(format!(
                "unknown partition family {other:?} (expected all or classical)"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct SweepConfig {
    pub max_order: u64,
    pub target: Target,
    pub harness: HarnessConfig,
    pub caps: Caps,
    #[serde(default)]
    pub partitions: PartitionFamily,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepCase {
    pub group: String,
    pub order: u64,
    pub sigma: String,
    /// E, or P for the normal p-subgroup criterion.
    pub subgroup: Option<String>,
    pub verdict: Verdict,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepCounts {
    pub cases: usize,
    pub hypothesis_fails: usize,
    pub vacuous: usize,
    pub holds: usize,
    pub holds_non_vacuous: usize,
    pub counterexample: usize,
    pub hall_set_dependent: usize,
}

impl SweepCounts {
    fn add(&mut self, v: &Verdict) {
        self.cases += 1;
        match v.status {
            Status::HypothesisFails => self.hypothesis_fails += 1,
            Status::Vacuous => self.vacuous += 1,
            Status::Holds => self.holds += 1,
            Status::Counterexample => self.counterexample += 1,
        }
        if v.is_non_vacuous_hold() {
            self.holds_non_vacuous += 1;
        }
        if v.hall_set_dependent {
            self.hall_set_dependent += 1;
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SweepReport {
    pub schema: u32,
    pub target: Target,
    pub max_order: u64,
    pub groups: usize,
    pub counts: SweepCounts,
    pub counterexamples: Vec<SweepCase>,
    pub budget_notes: Vec<String>,
    pub cases: Vec<SweepCase>,
}

impl SweepReport {
    /// Fixed-width summary table.
    pub fn summary_table(&self) -> String {
        let c = &self.counts;
        let mut s = String::new();
        let _ = writeln!(
            s,
            "target {}  max order {}  groups {}",
            self.target, self.max_order, self.groups
        );
        let rows = [
            ("cases", c.cases),
            ("hypothesis_fails", c.hypothesis_fails),
            ("vacuous", c.vacuous),
            ("holds", c.holds),
            ("holds (non-vacuous)", c.holds_non_vacuous),
            ("counterexample", c.counterexample),
            ("hall-set dependent", c.hall_set_dependent),
            ("budget notes", self.budget_notes.len()),
        ];
        for (k, v) in rows {
            let _ = writeln!(s, "  {k:<22}{v:>10}");
        }
        for ce in &self.counterexamples {
            let _ = writeln!(
                s,
                "  COUNTEREXAMPLE {} σ={} {}",
                ce.group,
                ce.sigma,
                ce.subgroup.as_deref().unwrap_or("")
            );
        }
        s
    }
}

/// σ-partitions of `π(n)`; the single trivial partition when `n = 1`.
pub fn partitions_for(order: u64) -> Vec<SigmaPartition> {
    let primes = prime_divisors(order);
    if primes.is_empty() {
        vec![SigmaPartition::whole()]
    } else {
        SigmaPartition::all_for_primes(&primes)
    }
}

/// Subjects of `target` in `lat`: the whole group for prop31, normal
/// p-subgroups for prop32, all normal subgroups otherwise.
pub fn subjects_for(lat: &SubgroupLattice, target: Target) -> Vec<SubId> {
    let top = lat.top();
    match target {
        Target::Prop31 => vec![lat.whole()],
        Target::Theorem15 | Target::Cor41 => top.normal_subgroups(),
        Target::Prop32 => top
            .normal_subgroups()
            .into_iter()
            .filter(|&x| is_p_group(&lat.view(x)))
            .collect(),
    }
}

/// Verdicts for every pair of partition and subject, partitions outermost.
pub fn verify_cases(
    name: &str,
    lat: &SubgroupLattice,
    target: Target,
    harness: HarnessConfig,
    sigmas: &[SigmaPartition],
    subjects: &[SubId],
) -> Result<Vec<SweepCase>> {
    let order = lat.group().order();
    let mut out = Vec::new();
    for sigma in sigmas {
        let ctx = SigmaContext::new(lat.top(), sigma.clone());
        let checker = Checker::new(&ctx, harness);
        for &s in subjects {
            let verdict = checker.verify(target, s)?;
            out.push(SweepCase {
                group: name.to_string(),
                order,
                sigma: sigma.to_string(),
                subgroup: (target != Target::Prop31).then(|| lat.describe(s)),
                verdict,
            });
        }
    }
    Ok(out)
}

/// Every case of `target` for one group, in deterministic order.
pub fn sweep_group(
    name: &str,
    group: &Arc<GroupHandle>,
    cfg: &SweepConfig,
) -> Result<Vec<SweepCase>> {
    let lat = SubgroupLattice::with_caps(group, cfg.caps)?;
    let sigmas = cfg.partitions.partitions(group.order());
    verify_cases(
        name,
        &lat,
        cfg.target,
        cfg.harness,
        &sigmas,
        &subjects_for(&lat, cfg.target),
    )
}

impl SweepReport {
    /// Collects per-group results; budget errors become notes, other errors abort.
    pub fn collect(
        cfg: &SweepConfig,
        results: impl IntoIterator<Item = (String, Result<Vec<SweepCase>>)>,
    ) -> Result<SweepReport> {
        let mut report = SweepReport {
            schema: 1,
            target: cfg.target,
            max_order: cfg.max_order,
            groups: 0,
            counts: SweepCounts::default(),
            counterexamples: Vec::new(),
            budget_notes: Vec::new(),
            cases: Vec::new(),
        };
        for (name, r) in results {
            report.groups += 1;
            match r {
                Ok(cases) => {
                    for c in cases {
                        report.counts.add(&c.verdict);
                        if c.verdict.status == Status::Counterexample {
                            report.counterexamples.push(c.clone());
                        }
                        report.cases.push(c);
                    }
                }
                Err(err @ Error::Budget { .. }) => {
                    report.budget_notes.push(format!("{name}: {err}"))
                }
                Err(err) => return Err(err),
            }
        }
        Ok(report)
    }
}

/// Runs `target` over the entries of order at most `max_order`, in parallel
/// across groups; the report is ordered as the input.
pub fn sweep(entries: &[CorpusEntry], cfg: &SweepConfig) -> Result<SweepReport> {
    let selected: Vec<&CorpusEntry> = entries
        .iter()
        .filter(|e| e.order <= cfg.max_order)
        .collect();
    let results: Vec<Result<Vec<SweepCase>>> = selected
        .par_iter()
        .map(|e| sweep_group(&e.name, &build(&e.name)?, cfg))
        .collect();
    SweepReport::collect(cfg, selected.iter().map(|e| e.name.clone()).zip(results))
}

/// As [`sweep`], over groups that are already built (a catalog file, say).
pub fn sweep_groups(
    groups: &[(String, Arc<GroupHandle>)],
    cfg: &SweepConfig,
) -> Result<SweepReport> {
    let selected: Vec<&(String, Arc<GroupHandle>)> = groups
        .iter()
        .filter(|(_, g)| g.order() <= cfg.max_order)
        .collect();
    let results: Vec<Result<Vec<SweepCase>>> = selected
        .par_iter()
        .map(|(n, g)| sweep_group(n, g, cfg))
        .collect();
    SweepReport::collect(cfg, selected.iter().map(|(n, _)| n.clone()).zip(results))
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct ImplicationReport {
    pub instances: usize,
    pub violations: Vec<String>,
}

/// Checks, for every subgroup: modular ⇒ m-ℋ ⇒ weakly m-ℋ and
/// ℋ-permutable ⇒ m-ℋ for every ℋ; σ-permutable ⇒ ℋ-permutable for some ℋ;
/// σ-permutable ⇒ weakly m-σ ⇒ weakly m-ℋ for some ℋ.
pub fn implication_chain(ctx: &SigmaContext<'_>) -> Result<ImplicationReport> {
    let lat = ctx.view().lattice();
    let mut rep = ImplicationReport::default();
    let modular = ctx.modular_set()?.clone();
    let halls: Vec<_> = ctx
        .hall_sets()
        .iter()
        .map(|hs| ctx.hall(hs.clone()))
        .collect();
    let mut weak_sets = Vec::with_capacity(halls.len());
    for hc in &halls {
        weak_sets.push(hc.weakly_m_h_permutable_set()?);
    }
    let mut check = |ok: bool, what: &str, h: SubId| {
        rep.instances += 1;
        if !ok {
            rep.violations.push(format!(
                "σ = {}: {what} fails for {}",
                ctx.sigma(),
                lat.describe(h)
            ));
        }
    };
    for h in ctx.view().subgroups() {
        for (hc, weak) in halls.iter().zip(&weak_sets) {
            let m = hc.is_m_h_permutable(h)?;
            if modular.contains(h.0) {
                check(m, "modular ⇒ m-ℋ-permutable", h);
            }
            if hc.is_h_permutable(h) {
                check(m, "ℋ-permutable ⇒ m-ℋ-permutable", h);
            }
            if m {
                check(
                    weak.contains(h.0),
                    "m-ℋ-permutable ⇒ weakly m-ℋ-permutable",
                    h,
                );
            }
        }
        let weak_sigma = ctx.is_weakly_m_sigma_permutable(h)?;
        if ctx.is_sigma_permutable(h) {
            check(weak_sigma, "σ-permutable ⇒ weakly m-σ-permutable", h);
            check(
                halls.iter().any(|hc| hc.is_h_permutable(h)),
                "σ-permutable ⇒ ℋ-permutable for some ℋ",
                h,
            );
        }
        if weak_sigma {
            check(
                weak_sets.iter().any(|w| w.contains(h.0)),
                "weakly m-σ-permutable ⇒ weakly m-ℋ-permutable for some ℋ",
                h,
            );
        }
    }
    Ok(rep)
}
