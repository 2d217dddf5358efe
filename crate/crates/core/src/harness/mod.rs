//! Hypothesis gates and verdicts for the hypercyclic-embedding criteria,
//! lemma property suites, corpus sweeps and the worked examples.
//!
//! A [`Checker`] is built once per (group, σ) and answers every gate for
//! every complete Hall σ-set, memoising weak m-ℋ-permutability per
//! (ℋ, H) so that sweeping over all normal subgroups stays cheap.

mod examples;
mod lemmas;
mod sweep;

pub use examples::{
    example_a4, example_a5, example_module_product, reproduce_examples, ExampleCheck, ExampleReport,
};
pub use lemmas::{lemma_suite, LemmaData, LemmaOutcome, LemmaReport};
pub use sweep::{
    implication_chain, partitions_for, subjects_for, sweep, sweep_group, sweep_groups,
    verify_cases, ImplicationReport, PartitionFamily, SweepCase, SweepConfig, SweepCounts,
    SweepReport,
};

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::arith::{is_prime, p_part, prime_divisors};
use crate::embeddings::{validate_witness, EmbeddingWitness, HallContext, SigmaContext};
use crate::error::{Error, Result};
use crate::lattice::{SubId, SubgroupLattice, View};
use crate::series::{
    chief_factors_cyclic_between, chief_series_through, generalized_fitting, hypercenter,
    is_hypercyclically_embedded, is_p_group, is_p_nilpotent, is_supersoluble,
};
use crate::sigma::{hall_subgroups, sylow_type_violation, DProperty, HallSet, SylowTypeViolation};

/// Reading of the hypotheses.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct HarnessConfig {
    pub d_property: DProperty,
    /// Quantify over one Hall σi-subgroup per block instead of all of them.
    pub representatives_only: bool,
    /// Maximum instances checked per lemma; `None` is unlimited.
    pub lemma_budget: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    HypothesisFails,
    /// No complete Hall σ-set applies, so nothing is asserted.
    Vacuous,
    Holds,
    Counterexample,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::HypothesisFails => "hypothesis_fails",
            Status::Vacuous => "vacuous",
            Status::Holds => "holds",
            Status::Counterexample => "counterexample",
        })
    }
}

/// Which statement a verdict is about.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    Theorem15,
    Prop31,
    Prop32,
    Cor41,
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Target::Theorem15 => "theorem15",
            Target::Prop31 => "prop31",
            Target::Prop32 => "prop32",
            Target::Cor41 => "cor41",
        })
    }
}

impl FromStr for Target {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "theorem15" => Ok(Target::Theorem15),
            "prop31" => Ok(Target::Prop31),
            "prop32" => Ok(Target::Prop32),
            "cor41" => Ok(Target::Cor41),
            other => Err(Error::Validation(format!(
                "unknown target {other:?} (expected theorem15, prop31, prop32 or cor41)"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Named {
    pub role: String,
    pub subgroup: String,
}

impl Named {
    fn new(role: impl Into<String>, lat: &SubgroupLattice, id: SubId) -> Self {
        Named {
            role: role.into(),
            subgroup: lat.describe(id),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Verdict {
    pub status: Status,
    /// Size of the set of cyclic subgroups the hypothesis quantifies over.
    pub quantified: usize,
    pub hall_sets: usize,
    pub hall_sets_passing: usize,
    /// The gate passed for some complete Hall σ-set and failed for another.
    pub hall_set_dependent: bool,
    pub reason: Option<String>,
    pub witnesses: Vec<Named>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl Verdict {
    fn new(status: Status, reason: impl Into<String>) -> Self {
        Verdict {
            status,
            quantified: 0,
            hall_sets: 0,
            hall_sets_passing: 0,
            hall_set_dependent: false,
            reason: Some(reason.into()),
            witnesses: Vec::new(),
            elapsed: Duration::ZERO,
        }
    }

    /// `holds` with a non-empty quantified set.
    pub fn is_non_vacuous_hold(&self) -> bool {
        self.status == Status::Holds && self.quantified > 0
    }
}

/// Outcome of one gate for one complete Hall σ-set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GateOutcome {
    pub pass: bool,
    pub quantified: usize,
    pub reason: Option<String>,
    pub witnesses: Vec<Named>,
}

fn describe_hall(lat: &SubgroupLattice, hs: &HallSet) -> Vec<Named> {
    hs.members
        .iter()
        .map(|&(b, x)| Named::new(format!("hall member {b}"), lat, x))
        .collect()
}

/// Gates of every statement for one group and one σ.
pub struct Checker<'c, 'a> {
    ctx: &'c SigmaContext<'a>,
    cfg: HarnessConfig,
    halls: Vec<HallContext<'c, 'a>>,
    sylow: Option<SylowTypeViolation>,
    zinf: SubId,
    supersoluble: RefCell<HashMap<SubId, bool>>,
    weak: RefCell<HashMap<(usize, SubId), bool>>,
}

impl<'c, 'a> Checker<'c, 'a> {
    /// The ambient view of `ctx` must be the whole group.
    pub fn new(ctx: &'c SigmaContext<'a>, cfg: HarnessConfig) -> Self {
        let view = ctx.view();
        let halls: Vec<HallContext<'c, 'a>> = ctx
            .hall_sets()
            .iter()
            .map(|hs| ctx.hall(hs.clone()))
            .collect();
        let sylow = if halls.is_empty() {
            None
        } else {
            sylow_type_violation(view, ctx.sigma(), cfg.d_property)
        };
        Checker {
            ctx,
            cfg,
            halls,
            sylow,
            zinf: hypercenter(view),
            supersoluble: RefCell::new(HashMap::new()),
            weak: RefCell::new(HashMap::new()),
        }
    }

    pub fn context(&self) -> &'c SigmaContext<'a> {
        self.ctx
    }

    fn view(&self) -> &View<'a> {
        self.ctx.view()
    }

    fn lat(&self) -> &'a SubgroupLattice {
        self.ctx.view().lattice()
    }

    fn is_supersoluble(&self, x: SubId) -> bool {
        *self
            .supersoluble
            .borrow_mut()
            .entry(x)
            .or_insert_with(|| is_supersoluble(&self.lat().view(x)))
    }

    fn is_weak(&self, i: usize, h: SubId) -> Result<bool> {
        if let Some(&v) = self.weak.borrow().get(&(i, h)) {
            return Ok(v);
        }
        let v = self.halls[i].is_weakly_m_h_permutable(h)?;
        self.weak.borrow_mut().insert((i, h), v);
        Ok(v)
    }

    fn sylow2_nonabelian(&self, x: SubId) -> bool {
        let lat = self.lat();
        let n = lat.order(x) as u64;
        let s = p_part(n, 2) as usize;
        if s < 8 {
            return false;
        }
        let sylow = lat
            .below(x)
            .ones()
            .map(SubId)
            .find(|&y| lat.order(y) == s)
            .expect("Sylow subgroups exist");
        !lat.view(sylow).is_abelian()
    }

    /// Cyclic subgroups of prime order inside the containers, plus cyclic
    /// subgroups of order 4 outside `Z_∞(G)` when `order_four`.
    fn clause_subgroups(&self, containers: &[SubId], order_four: bool) -> Vec<SubId> {
        let lat = self.lat();
        let mut set = FixedBitSet::with_capacity(lat.len());
        for &v in containers {
            for h in lat.below(v).ones().map(SubId) {
                let n = lat.order(h);
                if is_prime(n as u64)
                    || (order_four && n == 4 && lat.view(h).is_cyclic() && !lat.le(h, self.zinf))
                {
                    set.insert(h.0);
                }
            }
        }
        set.ones().map(SubId).collect()
    }

    /// Non-cyclic Hall σi-subgroups of `x` over `σ(x)`.
    fn noncyclic_halls(&self, x: SubId) -> Vec<SubId> {
        let lat = self.lat();
        let xv = lat.view(x);
        let sigma = self.ctx.sigma();
        let mut out = Vec::new();
        for b in sigma.sigma_of(lat.order(x) as u64) {
            let halls = hall_subgroups(&xv, sigma, b);
            let mut noncyclic = halls.into_iter().filter(|&v| !lat.view(v).is_cyclic());
            if self.cfg.representatives_only {
                out.extend(noncyclic.next());
            } else {
                out.extend(noncyclic);
            }
        }
        out
    }

    /// The subgroups the hypothesis of `target` quantifies over.
    pub fn targets(&self, target: Target, sub: SubId) -> Result<Vec<SubId>> {
        let lat = self.lat();
        Ok(match target {
            Target::Theorem15 => {
                self.clause_subgroups(&self.noncyclic_halls(sub), self.sylow2_nonabelian(sub))
            }
            Target::Cor41 => {
                let f = generalized_fitting(self.view(), sub)?;
                self.clause_subgroups(&self.noncyclic_halls(f), self.sylow2_nonabelian(sub))
            }
            Target::Prop31 => {
                let Some(&p) = prime_divisors(self.view().order() as u64).first() else {
                    return Ok(Vec::new());
                };
                let four = p == 2 && self.sylow2_nonabelian(self.view().top());
                self.view()
                    .subgroups()
                    .filter(|&h| {
                        let n = lat.order(h);
                        n as u64 == p
                            || (four && n == 4 && lat.view(h).is_cyclic() && !lat.le(h, self.zinf))
                    })
                    .collect()
            }
            Target::Prop32 => {
                let n = lat.order(sub);
                let four = n.is_multiple_of(2) && n >= 8 && !lat.view(sub).is_abelian();
                self.clause_subgroups(&[sub], four)
            }
        })
    }

    /// Parts (b) and (c) of the gate for the `i`-th complete Hall σ-set.
    pub fn gate(&self, i: usize, targets: &[SubId]) -> Result<GateOutcome> {
        let lat = self.lat();
        let hs = self.halls[i].hall_set();
        let fail = |reason: String, witnesses: Vec<Named>| GateOutcome {
            pass: false,
            quantified: targets.len(),
            reason: Some(reason),
            witnesses,
        };
        if let Some(m) = hs.ids().find(|&m| !self.is_supersoluble(m)) {
            return Ok(fail(
                "a member of the Hall set is not supersoluble".into(),
                vec![Named::new("non-supersoluble member", lat, m)],
            ));
        }
        for &h in targets {
            if !self.is_weak(i, h)? {
                let mut w = vec![Named::new("not weakly m-H-permutable", lat, h)];
                w.extend(describe_hall(lat, hs));
                return Ok(fail(
                    "a quantified subgroup is not weakly m-H-permutable".into(),
                    w,
                ));
            }
        }
        Ok(GateOutcome {
            pass: true,
            quantified: targets.len(),
            reason: None,
            witnesses: Vec::new(),
        })
    }

    /// Full hypothesis of `target` for the `i`-th complete Hall σ-set.
    pub fn hypothesis(&self, target: Target, sub: SubId, i: usize) -> Result<GateOutcome> {
        let lat = self.lat();
        if let Some(v) = &self.sylow {
            return Ok(GateOutcome {
                pass: false,
                quantified: 0,
                reason: Some(format!(
                    "not σ-full of Sylow type: {:?} for block {}",
                    v.failure, v.block
                )),
                witnesses: vec![Named::new(
                    "subgroup failing the D-property",
                    lat,
                    v.subgroup,
                )],
            });
        }
        if target == Target::Cor41
            && !chief_factors_cyclic_between(self.view(), sub, self.view().top())?
        {
            return Ok(GateOutcome {
                pass: false,
                quantified: 0,
                reason: Some("G/E is not supersoluble".into()),
                witnesses: Vec::new(),
            });
        }
        if target == Target::Prop32 && !self.halls[i].hall_set().ids().any(|m| lat.le(sub, m)) {
            return Ok(GateOutcome {
                pass: false,
                quantified: 0,
                reason: Some("P lies in no member of the Hall set".into()),
                witnesses: Vec::new(),
            });
        }
        let targets = self.targets(target, sub)?;
        self.gate(i, &targets)
    }

    fn conclusion(&self, target: Target, sub: SubId) -> Result<bool> {
        let view = self.view();
        Ok(match target {
            Target::Theorem15 | Target::Prop32 => is_hypercyclically_embedded(view, sub)?,
            Target::Prop31 => match prime_divisors(view.order() as u64).first() {
                Some(&p) => is_p_nilpotent(view, p),
                None => true,
            },
            Target::Cor41 => is_supersoluble(view),
        })
    }

    fn check_preconditions(&self, target: Target, sub: SubId) -> Result<()> {
        let lat = self.lat();
        match target {
            Target::Prop31 => Ok(()),
            _ if !self.view().is_normal(sub) => Err(Error::NotNormal(lat.describe(sub))),
            Target::Prop32 if !is_p_group(&lat.view(sub)) => Err(Error::Validation(format!(
                "{} is not a p-group",
                lat.describe(sub)
            ))),
            _ => Ok(()),
        }
    }

    /// Verdict for `target`; `sub` is E, P, or ignored for the p-nilpotency criterion.
    pub fn verify(&self, target: Target, sub: SubId) -> Result<Verdict> {
        let start = Instant::now();
        let mut v = self.verify_inner(target, sub)?;
        v.elapsed = start.elapsed();
        Ok(v)
    }

    fn verify_inner(&self, target: Target, sub: SubId) -> Result<Verdict> {
        self.check_preconditions(target, sub)?;
        let lat = self.lat();
        let trivial = lat.trivial();
        match target {
            Target::Theorem15 if sub == trivial => return Ok(Verdict::new(Status::Holds, "E = 1")),
            Target::Prop32 if sub == trivial => return Ok(Verdict::new(Status::Holds, "P = 1")),
            Target::Prop31 if is_p_group(self.view()) => {
                return Ok(Verdict::new(Status::Holds, "G is a p-group"));
            }
            _ => {}
        }
        if self.halls.is_empty() {
            return Ok(Verdict::new(
                Status::Vacuous,
                "G has no complete Hall σ-set",
            ));
        }
        let mut passing = Vec::new();
        let mut applicable = 0;
        let mut first_failure: Option<GateOutcome> = None;
        let mut quantified = 0;
        for i in 0..self.halls.len() {
            if target == Target::Prop32 && !self.halls[i].hall_set().ids().any(|m| lat.le(sub, m)) {
                continue;
            }
            applicable += 1;
            let g = self.hypothesis(target, sub, i)?;
            quantified = quantified.max(g.quantified);
            if g.pass {
                passing.push(i);
            } else if first_failure.is_none() {
                first_failure = Some(g);
            }
            if self.sylow.is_some() {
                // Sylow type does not depend on the Hall set.
                break;
            }
        }
        let mut verdict = Verdict {
            status: Status::HypothesisFails,
            quantified,
            hall_sets: self.halls.len(),
            hall_sets_passing: passing.len(),
            hall_set_dependent: !passing.is_empty() && first_failure.is_some(),
            reason: None,
            witnesses: Vec::new(),
            elapsed: Duration::ZERO,
        };
        if applicable == 0 {
            verdict.status = Status::Vacuous;
            verdict.reason = Some("P lies in no member of any complete Hall σ-set".into());
            return Ok(verdict);
        }
        let Some(&first_pass) = passing.first() else {
            let f = first_failure.expect("some Hall set was checked");
            verdict.reason = f.reason;
            verdict.witnesses = f.witnesses;
            return Ok(verdict);
        };
        if self.conclusion(target, sub)? {
            verdict.status = Status::Holds;
            return Ok(verdict);
        }
        let hs = self.halls[first_pass].hall_set();
        if !revalidate_counterexample(lat, self.ctx.sigma(), self.cfg, target, sub, hs)? {
            return Err(Error::Inconsistent(format!(
                "{target} counterexample on {} did not re-validate",
                lat.describe(sub)
            )));
        }
        verdict.status = Status::Counterexample;
        verdict.reason = Some("hypothesis holds but the conclusion fails".into());
        verdict.witnesses = describe_hall(lat, hs);
        verdict.witnesses.push(Named::new("subgroup", lat, sub));
        if matches!(target, Target::Theorem15 | Target::Prop32) {
            let series = chief_series_through(self.view(), sub)?;
            if let Some(f) = series.factors.iter().find(|f| !is_prime(f.order as u64)) {
                verdict
                    .witnesses
                    .push(Named::new("non-cyclic chief factor, lower", lat, f.lower));
                verdict
                    .witnesses
                    .push(Named::new("non-cyclic chief factor, upper", lat, f.upper));
            }
        }
        Ok(verdict)
    }
}

/// Rebuilds the lattice and every cache from the generators and re-checks
/// that the hypothesis holds and the conclusion fails, also re-validating
/// each weak m-ℋ-permutability witness against the definition.
fn revalidate_counterexample(
    lat: &SubgroupLattice,
    sigma: &crate::sigma::SigmaPartition,
    cfg: HarnessConfig,
    target: Target,
    sub: SubId,
    hall: &HallSet,
) -> Result<bool> {
    let fresh = SubgroupLattice::with_caps(lat.group(), lat.caps())?;
    let map = |x: SubId| fresh.id_of(lat.get(x)).expect("same group, same subgroups");
    let ctx = SigmaContext::new(fresh.top(), sigma.clone());
    let mapped = HallSet {
        members: hall.members.iter().map(|&(b, x)| (b, map(x))).collect(),
    };
    let Some(i) = ctx.hall_sets().iter().position(|h| *h == mapped) else {
        return Ok(false);
    };
    let checker = Checker::new(&ctx, cfg);
    let sub = map(sub);
    if !checker.hypothesis(target, sub, i)?.pass || checker.conclusion(target, sub)? {
        return Ok(false);
    }
    let hc = &checker.halls[i];
    for h in checker.targets(target, sub)? {
        let Some(w) = hc.weakly_m_h_witness(h)? else {
            return Ok(false);
        };
        let ew = EmbeddingWitness::WeaklyMPermutable {
            t: w.t,
            s: w.s,
            a: w.a,
            b: w.b,
        };
        if !validate_witness(&ctx, Some(hc.hall_set()), h, &ew)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Parts (a)–(c) of the hypercyclic-embedding criterion for one complete Hall σ-set.
pub fn theorem15_hypothesis(
    ctx: &SigmaContext<'_>,
    hall: &HallSet,
    e: SubId,
    cfg: HarnessConfig,
) -> Result<GateOutcome> {
    let checker = Checker::new(ctx, cfg);
    let i = ctx
        .hall_sets()
        .iter()
        .position(|h| h == hall)
        .ok_or_else(|| Error::Validation("not a complete Hall σ-set of the group".into()))?;
    checker.check_preconditions(Target::Theorem15, e)?;
    checker.hypothesis(Target::Theorem15, e, i)
}

pub fn verify_theorem15(ctx: &SigmaContext<'_>, e: SubId, cfg: HarnessConfig) -> Result<Verdict> {
    Checker::new(ctx, cfg).verify(Target::Theorem15, e)
}

pub fn verify_prop31(ctx: &SigmaContext<'_>, cfg: HarnessConfig) -> Result<Verdict> {
    Checker::new(ctx, cfg).verify(Target::Prop31, ctx.view().top())
}

pub fn verify_prop32(ctx: &SigmaContext<'_>, p: SubId, cfg: HarnessConfig) -> Result<Verdict> {
    Checker::new(ctx, cfg).verify(Target::Prop32, p)
}

pub fn verify_cor41(ctx: &SigmaContext<'_>, e: SubId, cfg: HarnessConfig) -> Result<Verdict> {
    Checker::new(ctx, cfg).verify(Target::Cor41, e)
}
