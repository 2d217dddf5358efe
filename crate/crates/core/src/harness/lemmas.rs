//! Exhaustive instantiation of the closure lemmas for σ-subnormality,
//! m-ℋ-permutability and weak m-ℋ-permutability, the Hall-intersection
//! identity and the chief-factor property of modular subgroups.

use std::sync::Arc;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use super::HarnessConfig;
use crate::arith::gcd;
use crate::embeddings::SigmaContext;
use crate::error::Result;
use crate::lattice::{Caps, SubId, SubgroupLattice};
use crate::permgroup::{quotient, GroupHandle, Quotient};
use crate::series::chief_factors_cyclic_between;
use crate::sigma::{o_upper_pi, reduce_into, Block, HallSet, SigmaPartition};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaOutcome {
    pub lemma: String,
    pub instances: usize,
    pub violations: Vec<String>,
    pub budget_exhausted: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LemmaReport {
    pub sigma: String,
    pub outcomes: Vec<LemmaOutcome>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl LemmaReport {
    pub fn violation_count(&self) -> usize {
        self.outcomes.iter().map(|o| o.violations.len()).sum()
    }

    pub fn passed(&self) -> bool {
        self.violation_count() == 0
    }
}

struct Tally {
    out: LemmaOutcome,
    budget: Option<usize>,
}

impl Tally {
    fn new(lemma: &str, budget: Option<usize>) -> Self {
        Tally {
            out: LemmaOutcome {
                lemma: lemma.to_string(),
                instances: 0,
                violations: Vec::new(),
                budget_exhausted: false,
            },
            budget,
        }
    }

    /// Records one instance; false once the budget is spent.
    fn check(&mut self, ok: bool, detail: impl FnOnce() -> String) -> bool {
        if self.budget.is_some_and(|b| self.out.instances >= b) {
            self.out.budget_exhausted = true;
            return false;
        }
        self.out.instances += 1;
        if !ok {
            self.out.violations.push(detail());
        }
        true
    }
}

struct QuotientData {
    n: SubId,
    map: Quotient,
    lat: Arc<SubgroupLattice>,
}

/// A group with its lattice and the lattices of all its quotients, shared
/// across σ-partitions.
pub struct LemmaData {
    lat: Arc<SubgroupLattice>,
    quotients: Vec<QuotientData>,
}

impl LemmaData {
    pub fn new(group: &Arc<GroupHandle>, caps: Caps) -> Result<Self> {
        let lat = SubgroupLattice::with_caps(group, caps)?;
        let mut quotients = Vec::new();
        for n in lat.top().normal_subgroups() {
            let map = quotient(group, lat.get(n))?;
            let qlat = SubgroupLattice::with_caps(map.group(), caps)?;
            quotients.push(QuotientData { n, map, lat: qlat });
        }
        Ok(LemmaData { lat, quotients })
    }

    pub fn lattice(&self) -> &Arc<SubgroupLattice> {
        &self.lat
    }

    fn image(&self, q: &QuotientData, x: SubId) -> SubId {
        q.lat
            .id_of(&q.map.map_subgroup(self.lat.get(x)))
            .expect("image of a subgroup is a subgroup")
    }

    fn image_hall(&self, q: &QuotientData, hs: &HallSet) -> HallSet {
        HallSet {
            members: hs
                .members
                .iter()
                .map(|&(b, x)| (b, self.image(q, x)))
                .filter(|&(_, x)| x != q.lat.trivial())
                .collect(),
        }
    }

    /// Runs every lemma for one σ-partition.
    pub fn run(&self, sigma: &SigmaPartition, cfg: HarnessConfig) -> Result<LemmaReport> {
        let start = Instant::now();
        let lat = &*self.lat;
        let top = lat.top();
        let budget = cfg.lemma_budget;
        let describe = |x: SubId| lat.describe(x);
        let ctx = SigmaContext::new(top, sigma.clone());
        let sub_ctx: Vec<SigmaContext<'_>> = lat
            .ids()
            .map(|k| SigmaContext::new(lat.view(k), sigma.clone()))
            .collect();
        let q_ctx: Vec<SigmaContext<'_>> = self
            .quotients
            .iter()
            .map(|q| SigmaContext::new(q.lat.top(), sigma.clone()))
            .collect();
        let sn: Vec<SubId> = ctx.sigma_subnormal_set().ones().map(SubId).collect();

        // σ-subnormality passes to intersections and quotients.
        let mut l211 = Tally::new("2.1(1) A∩K is σ-subnormal in K", budget);
        'outer: for k in lat.ids() {
            for &a in &sn {
                let m = lat.meet(a, k);
                if !l211.check(sub_ctx[k.0].is_sigma_subnormal(m), || {
                    format!("A = {}, K = {}", describe(a), describe(k))
                }) {
                    break 'outer;
                }
            }
        }
        let mut l212 = Tally::new("2.1(2) AN/N is σ-subnormal in G/N", budget);
        'outer: for (q, qc) in self.quotients.iter().zip(&q_ctx) {
            for &a in &sn {
                let img = self.image(q, a);
                if !l212.check(qc.is_sigma_subnormal(img), || {
                    format!("A = {}, N = {}", describe(a), describe(q.n))
                }) {
                    break 'outer;
                }
            }
        }
        let mut l213 = Tally::new("2.1(3) |G:A| a Π-number gives O^Π(A) = O^Π(G)", budget);
        let blocks = sigma.sigma_of(lat.order(lat.whole()) as u64);
        let subsets: Vec<Vec<Block>> = (1u32..(1 << blocks.len()))
            .map(|mask| {
                blocks
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, &b)| b)
                    .collect()
            })
            .collect();
        'outer: for &a in &sn {
            let index = (top.order() / lat.order(a)) as u64;
            for pi in &subsets {
                if !sigma.is_pi_number(index, pi) {
                    continue;
                }
                let ok = o_upper_pi(&lat.view(a), sigma, pi) == o_upper_pi(&top, sigma, pi);
                if !l213.check(ok, || format!("A = {}, Π = {pi:?}", describe(a))) {
                    break 'outer;
                }
            }
        }

        let mut l221 = Tally::new("2.2(1) HR/R is m-(ℋR/R)-permutable", budget);
        let mut l222 = Tally::new(
            "2.2(2) H is m-(E∩ℋ)-permutable in E when ℋ reduces into E",
            budget,
        );
        let mut l223 = Tally::new("2.2(3) ℋ reduces into every normal E", budget);
        let mut l224 = Tally::new("2.2(4) <H, K> is m-ℋ-permutable", budget);
        let mut l231 = Tally::new(
            "2.3(1) H is weakly m-(E∩ℋ)-permutable in E when ℋ reduces into E",
            budget,
        );
        let mut l232 = Tally::new("2.3(2) ℋ reduces into every normal E", budget);
        let mut l233 = Tally::new(
            "2.3(3) H/N is weakly m-(ℋN/N)-permutable for N <= H",
            budget,
        );
        let mut l234 = Tally::new(
            "2.3(4) HN/N is weakly m-(ℋN/N)-permutable for (|H|,|N|) = 1",
            budget,
        );
        for hs in ctx.hall_sets() {
            let hc = ctx.hall(hs.clone());
            let m_set: Vec<SubId> = hc.m_h_permutable_set()?.ones().map(SubId).collect();
            let w_set: Vec<SubId> = hc.weakly_m_h_permutable_set()?.ones().map(SubId).collect();
            let hall_name = || format!("{:?}", hs.ids().map(describe).collect::<Vec<_>>());

            for (q, qc) in self.quotients.iter().zip(&q_ctx) {
                let qh = self.image_hall(q, hs);
                let qhc = qc.hall(qh);
                for &h in &m_set {
                    let ok = qhc.is_m_h_permutable(self.image(q, h))?;
                    if !l221.check(ok, || {
                        format!(
                            "H = {}, R = {}, ℋ = {}",
                            describe(h),
                            describe(q.n),
                            hall_name()
                        )
                    }) {
                        break;
                    }
                }
                let nn = lat.order(q.n);
                for &h in &w_set {
                    if lat.le(q.n, h) {
                        let ok = qhc.is_weakly_m_h_permutable(self.image(q, h))?;
                        l233.check(ok, || {
                            format!(
                                "H = {}, N = {}, ℋ = {}",
                                describe(h),
                                describe(q.n),
                                hall_name()
                            )
                        });
                    }
                    if gcd(lat.order(h) as u64, nn as u64) == 1 {
                        let ok = qhc.is_weakly_m_h_permutable(self.image(q, h))?;
                        l234.check(ok, || {
                            format!(
                                "H = {}, N = {}, ℋ = {}",
                                describe(h),
                                describe(q.n),
                                hall_name()
                            )
                        });
                    }
                }
            }

            for e in lat.ids() {
                let reduced = reduce_into(&top, sigma, hs, e);
                if top.is_normal(e) {
                    l223.check(reduced.is_some(), || {
                        format!("E = {}, ℋ = {}", describe(e), hall_name())
                    });
                    l232.check(reduced.is_some(), || {
                        format!("E = {}, ℋ = {}", describe(e), hall_name())
                    });
                }
                let Some(eh) = reduced else { continue };
                let ehc = sub_ctx[e.0].hall(eh);
                for &h in m_set.iter().filter(|&&h| lat.le(h, e)) {
                    let ok = ehc.is_m_h_permutable(h)?;
                    l222.check(ok, || {
                        format!(
                            "H = {}, E = {}, ℋ = {}",
                            describe(h),
                            describe(e),
                            hall_name()
                        )
                    });
                }
                for &h in w_set.iter().filter(|&&h| lat.le(h, e)) {
                    let ok = ehc.is_weakly_m_h_permutable(h)?;
                    l231.check(ok, || {
                        format!(
                            "H = {}, E = {}, ℋ = {}",
                            describe(h),
                            describe(e),
                            hall_name()
                        )
                    });
                }
            }

            let m_bits = hc.m_h_permutable_set()?;
            'pairs: for (i, &h) in m_set.iter().enumerate() {
                for &k in &m_set[i..] {
                    let j = lat.join(h, k);
                    if !l224.check(m_bits.contains(j.0), || {
                        format!(
                            "H = {}, K = {}, ℋ = {}",
                            describe(h),
                            describe(k),
                            hall_name()
                        )
                    }) {
                        break 'pairs;
                    }
                }
            }
        }

        // Hall-intersection identity for pairwise permutable triples.
        let mut l24 = Tally::new("2.4 N∩HK = (N∩H)(N∩K)", budget);
        let g = top.order();
        let ids: Vec<SubId> = lat.ids().collect();
        'outer: for &h in &ids {
            let nh = lat.order(h);
            if gcd(nh as u64, (g / nh) as u64) != 1 {
                continue;
            }
            for &k in &ids {
                if !lat.permutes(h, k) {
                    continue;
                }
                let hk = lat.join(h, k);
                for &n in &ids {
                    if !lat.permutes(n, h) || !lat.permutes(n, k) {
                        continue;
                    }
                    let (a, b) = (lat.meet(n, h), lat.meet(n, k));
                    let product = lat.order(a) * lat.order(b) / lat.order(lat.meet(a, b));
                    let ok = product == lat.order(lat.meet(n, hk));
                    if !l24.check(ok, || {
                        format!(
                            "H = {}, K = {}, N = {}",
                            describe(h),
                            describe(k),
                            describe(n)
                        )
                    }) {
                        break 'outer;
                    }
                }
            }
        }

        let mut l25 = Tally::new(
            "2.5 chief factors between H_G and H^G are cyclic for modular H",
            budget,
        );
        if top.check_modularity_cap().is_ok() {
            for h in ctx.modular_set()?.ones().map(SubId) {
                let ok = chief_factors_cyclic_between(&top, top.core(h), top.normal_closure(h))?;
                if !l25.check(ok, || format!("H = {}", describe(h))) {
                    break;
                }
            }
        } else {
            l25.out.budget_exhausted = true;
        }

        let outcomes = [
            l211, l212, l213, l221, l222, l223, l224, l231, l232, l233, l234, l24, l25,
        ]
        .into_iter()
        .map(|t| t.out)
        .collect();
        Ok(LemmaReport {
            sigma: sigma.to_string(),
            outcomes,
            elapsed: start.elapsed(),
        })
    }
}

/// Every lemma for one group and one σ-partition.
pub fn lemma_suite(
    group: &Arc<GroupHandle>,
    sigma: &SigmaPartition,
    cfg: HarnessConfig,
) -> Result<LemmaReport> {
    LemmaData::new(group, Caps::default())?.run(sigma, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::build;

    #[test]
    fn trivial_group_passes() {
        let r = lemma_suite(
            &build("1").unwrap(),
            &SigmaPartition::whole(),
            HarnessConfig::default(),
        )
        .unwrap();
        assert!(r.passed());
    }

    #[test]
    fn a4_one_block_passes() {
        let r = lemma_suite(
            &build("A4").unwrap(),
            &"2,3|*".parse().unwrap(),
            HarnessConfig::default(),
        )
        .unwrap();
        assert!(r.passed(), "{:?}", r.outcomes);
        assert!(r
            .outcomes
            .iter()
            .all(|o| o.instances > 0 || o.lemma.starts_with("2.1(3)")));
    }

    #[test]
    fn budget_is_reported() {
        let cfg = HarnessConfig {
            lemma_budget: Some(3),
            ..Default::default()
        };
        let r = lemma_suite(&build("S3").unwrap(), &SigmaPartition::classical(), cfg).unwrap();
        assert!(r.outcomes.iter().any(|o| o.budget_exhausted));
        assert!(r.outcomes.iter().all(|o| o.instances <= 3));
    }
}
