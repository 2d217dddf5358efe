//! Subgroup embedding predicates: σ-subnormal, σ-permutable, ℋ-permutable,
//! m-ℋ-permutable, weakly m-ℋ-permutable, their σ-versions and c-normality.
//!
//! [`SigmaContext`] holds the sets that do not depend on a Hall set
//! (σ-subnormal, modular, σ-permutable) for one ambient group and partition;
//! [`HallContext`] adds the ℋ-permutable and m-ℋ-permutable sets for one
//! complete Hall σ-set. Everything is computed once and then answered by
//! bitset lookups.

use std::collections::HashMap;
use std::sync::OnceLock;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::error::Result;
use crate::lattice::{SubId, View};
use crate::permgroup::{product_permutes, SubgroupRef};
use crate::sigma::{complete_hall_sets, HallSet, SigmaPartition};

/// `H = <A, B>` with `A` modular and `B` permutable in the relevant sense.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct JoinWitness {
    pub a: SubId,
    pub b: SubId,
}

/// `G = HT`, `H∩T <= S <= H`, `S = <A, B>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct WeakWitness {
    pub t: SubId,
    pub s: SubId,
    pub a: SubId,
    pub b: SubId,
}

/// Named subgroups proving that a predicate holds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EmbeddingWitness {
    SigmaSubnormal {
        chain: Vec<SubId>,
    },
    SigmaPermutable {
        hall: HallSet,
    },
    HPermutable,
    MPermutable {
        a: SubId,
        b: SubId,
    },
    WeaklyMPermutable {
        t: SubId,
        s: SubId,
        a: SubId,
        b: SubId,
    },
    CNormal {
        t: SubId,
    },
}

/// Joins `<A, B>` of a modular `A` and a permutable `B`, with one witness each.
#[derive(Clone, Debug)]
pub struct JoinSet {
    pub set: FixedBitSet,
    witness: Vec<Option<JoinWitness>>,
}

impl JoinSet {
    pub fn contains(&self, x: SubId) -> bool {
        self.set.contains(x.0)
    }

    pub fn witness(&self, x: SubId) -> Option<JoinWitness> {
        self.witness[x.0]
    }
}

fn build_join_set(view: &View<'_>, modular: Option<&FixedBitSet>, perm: &FixedBitSet) -> JoinSet {
    let lat = view.lattice();
    let n = lat.len();
    let triv = lat.trivial();
    let mut witness: Vec<Option<JoinWitness>> = vec![None; n];
    for b in perm.ones() {
        witness[b] = Some(JoinWitness {
            a: triv,
            b: SubId(b),
        });
    }
    if let Some(modular) = modular {
        if perm.contains(triv.0) {
            for a in modular.ones() {
                witness[a].get_or_insert(JoinWitness {
                    a: SubId(a),
                    b: triv,
                });
            }
        }
        for a in modular.ones() {
            for b in perm.ones() {
                let j = lat.join(SubId(a), SubId(b));
                witness[j.0].get_or_insert(JoinWitness {
                    a: SubId(a),
                    b: SubId(b),
                });
            }
        }
    }
    let mut set = FixedBitSet::with_capacity(n);
    for (i, w) in witness.iter().enumerate() {
        if w.is_some() {
            set.insert(i);
        }
    }
    JoinSet { set, witness }
}

/// Search for `T` in `covers` (ascending) with `G = HT` and `S` in `joins`
/// between `H∩T` and `H` (descending).
fn weak_search(
    view: &View<'_>,
    h: SubId,
    covers: &FixedBitSet,
    joins: &JoinSet,
) -> Option<WeakWitness> {
    let lat = view.lattice();
    let g = view.order();
    let nh = lat.order(h);
    for t in covers.ones().map(SubId) {
        let ht = lat.meet(h, t);
        if nh * lat.order(t) != g * lat.order(ht) {
            continue;
        }
        let mut between = lat.below(h).clone();
        between.intersect_with(lat.above(ht));
        between.intersect_with(&joins.set);
        if let Some(s) = between.ones().next_back() {
            let w = joins.witness(SubId(s)).expect("member of the join set");
            return Some(WeakWitness {
                t,
                s: SubId(s),
                a: w.a,
                b: w.b,
            });
        }
    }
    None
}

struct SubnormalSet {
    set: FixedBitSet,
    /// Next term of a witness chain towards the ambient group.
    next: Vec<Option<SubId>>,
}

struct SigmaPermSet {
    set: FixedBitSet,
    /// First Hall set witnessing σ-permutability.
    hall: Vec<Option<usize>>,
}

/// Caches for one ambient group (a lattice view) and one σ-partition.
pub struct SigmaContext<'a> {
    view: View<'a>,
    sigma: SigmaPartition,
    subnormal: OnceLock<SubnormalSet>,
    modular: OnceLock<FixedBitSet>,
    hall_sets: OnceLock<Vec<HallSet>>,
    sigma_perm: OnceLock<SigmaPermSet>,
    m_sigma: OnceLock<JoinSet>,
}

impl<'a> SigmaContext<'a> {
    pub fn new(view: View<'a>, sigma: SigmaPartition) -> Self {
        SigmaContext {
            view,
            sigma,
            subnormal: OnceLock::new(),
            modular: OnceLock::new(),
            hall_sets: OnceLock::new(),
            sigma_perm: OnceLock::new(),
            m_sigma: OnceLock::new(),
        }
    }

    pub fn view(&self) -> &View<'a> {
        &self.view
    }

    pub fn sigma(&self) -> &SigmaPartition {
        &self.sigma
    }

    fn is_primary_ambient(&self) -> bool {
        self.sigma.is_primary(self.view.order() as u64)
    }

    fn subnormal(&self) -> &SubnormalSet {
        self.subnormal.get_or_init(|| {
            let lat = self.view.lattice();
            let top = self.view.top();
            let mut set = FixedBitSet::with_capacity(lat.len());
            let mut next = vec![None; lat.len()];
            set.insert(top.0);
            if self.is_primary_ambient() {
                for x in self.view.subgroups() {
                    set.insert(x.0);
                    if x != top {
                        next[x.0] = Some(top);
                    }
                }
                return SubnormalSet { set, next };
            }
            let mut stack = vec![top];
            while let Some(y) = stack.pop() {
                let normal = lat.normal_in(y);
                let ny = lat.order(y) as u64;
                for x in lat.below(y).ones() {
                    if set.contains(x) {
                        continue;
                    }
                    let ok = normal.contains(x) || {
                        let core = lat
                            .below(SubId(x))
                            .intersection(normal)
                            .next_back()
                            .expect("trivial subgroup is normal");
                        self.sigma.is_primary(ny / lat.order(SubId(core)) as u64)
                    };
                    if ok {
                        set.insert(x);
                        next[x] = Some(y);
                        stack.push(SubId(x));
                    }
                }
            }
            SubnormalSet { set, next }
        })
    }

    /// All σ-subnormal subgroups of the ambient group.
    pub fn sigma_subnormal_set(&self) -> &FixedBitSet {
        &self.subnormal().set
    }

    pub fn is_sigma_subnormal(&self, a: SubId) -> bool {
        self.subnormal().set.contains(a.0)
    }

    /// Chain `A = A_0 <= ... <= A_n = G` witnessing σ-subnormality.
    pub fn sigma_subnormal_chain(&self, a: SubId) -> Option<Vec<SubId>> {
        let sn = self.subnormal();
        if !sn.set.contains(a.0) {
            return None;
        }
        let mut chain = vec![a];
        let mut cur = a;
        while let Some(n) = sn.next[cur.0] {
            chain.push(n);
            cur = n;
        }
        Some(chain)
    }

    /// Modular subgroups of the ambient group; fails if the ambient order exceeds the cap.
    pub fn modular_set(&self) -> Result<&FixedBitSet> {
        if let Some(m) = self.modular.get() {
            return Ok(m);
        }
        let m = self.view.modular_set()?;
        Ok(self.modular.get_or_init(|| m))
    }

    pub fn is_modular(&self, h: SubId) -> Result<bool> {
        Ok(self.modular_set()?.contains(h.0))
    }

    pub fn hall_sets(&self) -> &[HallSet] {
        self.hall_sets
            .get_or_init(|| complete_hall_sets(&self.view, &self.sigma))
    }

    pub fn is_sigma_full(&self) -> bool {
        !self.hall_sets().is_empty()
    }

    /// Context for one complete Hall σ-set of the ambient group.
    pub fn hall(&self, hall: HallSet) -> HallContext<'_, 'a> {
        let lat = self.view.lattice();
        let mut hperm = self.view.subgroup_set().clone();
        for m in hall.ids() {
            for x in self.view.subgroups() {
                if hperm.contains(x.0) && !lat.permutes(x, m) {
                    hperm.set(x.0, false);
                }
            }
        }
        HallContext {
            ctx: self,
            hall,
            hperm,
            joins: OnceLock::new(),
        }
    }

    fn sigma_perm(&self) -> &SigmaPermSet {
        self.sigma_perm.get_or_init(|| {
            let lat = self.view.lattice();
            let n = lat.len();
            let mut set = FixedBitSet::with_capacity(n);
            let mut hall = vec![None; n];
            let sets = self.hall_sets();
            if self.is_primary_ambient() && !sets.is_empty() {
                for x in self.view.subgroups() {
                    set.insert(x.0);
                    hall[x.0] = Some(0);
                }
                return SigmaPermSet { set, hall };
            }
            // The permuting set depends only on the conjugacy classes of the members.
            let mut by_classes: HashMap<Vec<SubId>, FixedBitSet> = HashMap::new();
            let mut class_cache: HashMap<SubId, Vec<SubId>> = HashMap::new();
            for (i, hs) in sets.iter().enumerate() {
                let classes: Vec<Vec<SubId>> = hs
                    .ids()
                    .map(|m| {
                        class_cache
                            .entry(m)
                            .or_insert_with(|| self.view.conjugates(m))
                            .clone()
                    })
                    .collect();
                let key: Vec<SubId> = classes.iter().map(|c| c[0]).collect();
                let perm = by_classes.entry(key).or_insert_with(|| {
                    let mut p = self.view.subgroup_set().clone();
                    for class in &classes {
                        for &c in class {
                            for x in self.view.subgroups() {
                                if p.contains(x.0) && !lat.permutes(x, c) {
                                    p.set(x.0, false);
                                }
                            }
                        }
                    }
                    p
                });
                for x in perm.ones() {
                    if !set.put(x) {
                        hall[x] = Some(i);
                    }
                }
            }
            SigmaPermSet { set, hall }
        })
    }

    pub fn sigma_permutable_set(&self) -> &FixedBitSet {
        &self.sigma_perm().set
    }

    /// Some complete Hall σ-set all of whose members' conjugates permute with `h`.
    pub fn sigma_permutable_witness(&self, h: SubId) -> Option<&HallSet> {
        self.sigma_perm().hall[h.0].map(|i| &self.hall_sets()[i])
    }

    /// False when the ambient group is not σ-full.
    pub fn is_sigma_permutable(&self, h: SubId) -> bool {
        self.sigma_perm().set.contains(h.0)
    }

    fn m_sigma(&self) -> Result<&JoinSet> {
        if let Some(j) = self.m_sigma.get() {
            return Ok(j);
        }
        let perm = &self.sigma_perm().set;
        let modular = if perm == self.view.subgroup_set() || perm.is_clear() {
            None
        } else {
            Some(self.modular_set()?)
        };
        let j = build_join_set(&self.view, modular, perm);
        Ok(self.m_sigma.get_or_init(|| j))
    }

    /// `(A, B)` with `A` modular, `B` σ-permutable and `<A, B> = h`.
    pub fn m_sigma_witness(&self, h: SubId) -> Result<Option<JoinWitness>> {
        Ok(self.m_sigma()?.witness(h))
    }

    pub fn is_m_sigma_permutable(&self, h: SubId) -> Result<bool> {
        Ok(self.m_sigma()?.contains(h))
    }

    pub fn weakly_m_sigma_witness(&self, h: SubId) -> Result<Option<WeakWitness>> {
        let joins = self.m_sigma()?;
        Ok(weak_search(
            &self.view,
            h,
            self.sigma_subnormal_set(),
            joins,
        ))
    }

    pub fn is_weakly_m_sigma_permutable(&self, h: SubId) -> Result<bool> {
        Ok(self.weakly_m_sigma_witness(h)?.is_some())
    }

    /// Normal `T` with `G = HT` and `H∩T <= H_G`, smallest first.
    pub fn c_normal_witness(&self, h: SubId) -> Option<SubId> {
        let lat = self.view.lattice();
        let g = self.view.order();
        let core = self.view.core(h);
        self.view.normal_set().ones().map(SubId).find(|&t| {
            let ht = lat.meet(h, t);
            lat.order(h) * lat.order(t) == g * lat.order(ht) && lat.le(ht, core)
        })
    }

    pub fn is_c_normal(&self, h: SubId) -> bool {
        self.c_normal_witness(h).is_some()
    }
}

/// ℋ-dependent caches on top of a [`SigmaContext`].
pub struct HallContext<'c, 'a> {
    ctx: &'c SigmaContext<'a>,
    hall: HallSet,
    hperm: FixedBitSet,
    joins: OnceLock<JoinSet>,
}

impl<'c, 'a> HallContext<'c, 'a> {
    pub fn context(&self) -> &'c SigmaContext<'a> {
        self.ctx
    }

    pub fn hall_set(&self) -> &HallSet {
        &self.hall
    }

    pub fn h_permutable_set(&self) -> &FixedBitSet {
        &self.hperm
    }

    pub fn is_h_permutable(&self, h: SubId) -> bool {
        self.hperm.contains(h.0)
    }

    fn joins(&self) -> Result<&JoinSet> {
        if let Some(j) = self.joins.get() {
            return Ok(j);
        }
        let modular = if &self.hperm == self.ctx.view.subgroup_set() {
            None
        } else {
            Some(self.ctx.modular_set()?)
        };
        let j = build_join_set(&self.ctx.view, modular, &self.hperm);
        Ok(self.joins.get_or_init(|| j))
    }

    pub fn m_h_permutable_set(&self) -> Result<&FixedBitSet> {
        Ok(&self.joins()?.set)
    }

    /// `(A, B)` with `A` modular, `B` ℋ-permutable and `<A, B> = h`.
    pub fn m_h_witness(&self, h: SubId) -> Result<Option<JoinWitness>> {
        Ok(self.joins()?.witness(h))
    }

    pub fn is_m_h_permutable(&self, h: SubId) -> Result<bool> {
        Ok(self.joins()?.contains(h))
    }

    pub fn weakly_m_h_witness(&self, h: SubId) -> Result<Option<WeakWitness>> {
        let joins = self.joins()?;
        Ok(weak_search(
            &self.ctx.view,
            h,
            self.ctx.sigma_subnormal_set(),
            joins,
        ))
    }

    pub fn is_weakly_m_h_permutable(&self, h: SubId) -> Result<bool> {
        Ok(self.weakly_m_h_witness(h)?.is_some())
    }

    /// Weak m-ℋ-permutability for every subgroup of the ambient group.
    pub fn weakly_m_h_permutable_set(&self) -> Result<FixedBitSet> {
        let lat = self.ctx.view.lattice();
        let mut out = FixedBitSet::with_capacity(lat.len());
        for h in self.ctx.view.subgroups() {
            if self.weakly_m_h_witness(h)?.is_some() {
                out.insert(h.0);
            }
        }
        Ok(out)
    }
}

/// `HA = AH` for every member `A`, using only subgroup operations.
pub fn is_h_permutable_ref(h: &SubgroupRef, members: &[SubgroupRef]) -> Result<bool> {
    for m in members {
        if !product_permutes(h, m)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Elements of `x` fixed under conjugation by all of `y`, as the core `x_y`.
fn core_in(x: &SubgroupRef, y: &SubgroupRef) -> FixedBitSet {
    let t = x.table();
    let mut core = x.elements().clone();
    for g in y.elements().ones() {
        core.intersect_with(&t.conjugate_set(x.elements(), g));
    }
    core
}

/// Re-checks a witness against the definitions with subgroup operations
/// only. With `hall` the join witnesses are read relative to ℋ, without
/// it relative to σ-permutability; `HPermutable` requires it.
pub fn validate_witness(
    ctx: &SigmaContext<'_>,
    hall: Option<&HallSet>,
    h: SubId,
    w: &EmbeddingWitness,
) -> Result<bool> {
    let lat = ctx.view.lattice();
    let top = lat.get(ctx.view.top());
    let sub = |x: SubId| lat.get(x);
    let members = |hs: &HallSet| hs.ids().map(|m| sub(m).clone()).collect::<Vec<_>>();
    let sigma = &ctx.sigma;
    let chain_ok = |chain: &[SubId]| -> bool {
        if chain.first() != Some(&h) && !matches!(w, EmbeddingWitness::WeaklyMPermutable { .. }) {
            return false;
        }
        if chain.last().map(|&x| sub(x)) != Some(top) {
            return false;
        }
        chain.windows(2).all(|pair| {
            let (x, y) = (sub(pair[0]), sub(pair[1]));
            if !x.is_subgroup_of(y) {
                return false;
            }
            if x.is_normal_in(y) {
                return true;
            }
            let core = core_in(x, y);
            sigma.is_primary((y.order() / core.count_ones(..)) as u64)
        })
    };
    let permutes_all = |b: &SubgroupRef, ms: &[SubgroupRef]| is_h_permutable_ref(b, ms);
    // B permutes with every conjugate of every member of `hs`.
    let permutes_conjugates = |b: &SubgroupRef, hs: &HallSet| -> Result<bool> {
        for m in hs.ids() {
            for g in top.elements().ones() {
                if !product_permutes(b, &sub(m).conjugate(g))? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    };
    // Relative to ℋ when given, otherwise σ-permutability with the Hall set
    // the context reports, re-checked from scratch.
    let b_ok = |b: &SubgroupRef| -> Result<bool> {
        match hall {
            Some(hs) => permutes_all(b, &members(hs)),
            None => match lat.id_of(b).and_then(|id| ctx.sigma_permutable_witness(id)) {
                Some(hs) => permutes_conjugates(b, hs),
                None => Ok(false),
            },
        }
    };
    let join_ok = |a: SubId, b: SubId, target: SubId| -> Result<bool> {
        Ok(sub(a).join(sub(b))? == *sub(target) && ctx.view.is_modular(a)? && b_ok(sub(b))?)
    };
    match w {
        EmbeddingWitness::SigmaSubnormal { chain } => Ok(chain_ok(chain)),
        EmbeddingWitness::SigmaPermutable { hall } => permutes_conjugates(sub(h), hall),
        EmbeddingWitness::HPermutable => {
            let hs = hall.expect("Hall set for an ℋ-witness");
            permutes_all(sub(h), &members(hs))
        }
        EmbeddingWitness::MPermutable { a, b } => join_ok(*a, *b, h),
        EmbeddingWitness::WeaklyMPermutable { t, s, a, b } => {
            let (hh, tt, ss) = (sub(h), sub(*t), sub(*s));
            let product = hh.table().product_set(hh.elements(), tt.elements());
            if &product != top.elements() {
                return Ok(false);
            }
            let meet = hh.intersection(tt)?;
            if !meet.is_subgroup_of(ss) || !ss.is_subgroup_of(hh) {
                return Ok(false);
            }
            let Some(chain) = ctx.sigma_subnormal_chain(*t) else {
                return Ok(false);
            };
            if chain.first() != Some(t) || !chain_ok(&chain) {
                return Ok(false);
            }
            join_ok(*a, *b, *s)
        }
        EmbeddingWitness::CNormal { t } => {
            let (hh, tt) = (sub(h), sub(*t));
            let product = hh.table().product_set(hh.elements(), tt.elements());
            let core = core_in(hh, top);
            let meet = hh.intersection(tt)?;
            Ok(tt.is_normal_in(top)
                && &product == top.elements()
                && meet.elements().is_subset(&core))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::build;
    use crate::lattice::SubgroupLattice;
    use crate::sigma::Block;
    use std::sync::Arc;

    fn lattice(name: &str) -> Arc<SubgroupLattice> {
        SubgroupLattice::new(&build(name).unwrap()).unwrap()
    }

    fn sp(s: &str) -> SigmaPartition {
        s.parse().unwrap()
    }

    #[test]
    fn a4_with_one_block() {
        let lat = lattice("A4");
        let ctx = SigmaContext::new(lat.top(), sp("2,3|*"));
        assert_eq!(ctx.hall_sets().len(), 1);
        let hc = ctx.hall(ctx.hall_sets()[0].clone());
        for x in lat.ids() {
            assert!(ctx.is_sigma_subnormal(x));
            assert!(hc.is_h_permutable(x));
            assert!(hc.is_weakly_m_h_permutable(x).unwrap());
            assert!(ctx.is_sigma_permutable(x));
        }
        for x in lat.ids().filter(|&x| lat.order(x) == 2) {
            assert!(!ctx.is_modular(x).unwrap());
            assert!(!ctx.is_c_normal(x));
        }
    }

    #[test]
    fn a5_example() {
        let lat = lattice("A5");
        let ctx = SigmaContext::new(lat.top(), sp("2,3|*"));
        let sn: Vec<SubId> = ctx.sigma_subnormal_set().ones().map(SubId).collect();
        assert_eq!(sn, vec![lat.trivial(), lat.whole()]);
        let hs = ctx.hall_sets()[0].clone();
        let c5 = hs.member(Block::COMPLEMENT).unwrap();
        let hc = ctx.hall(hs.clone());
        assert!(hc.is_h_permutable(c5));
        let w = hc.weakly_m_h_witness(c5).unwrap().unwrap();
        let ew = EmbeddingWitness::WeaklyMPermutable {
            t: w.t,
            s: w.s,
            a: w.a,
            b: w.b,
        };
        assert!(validate_witness(&ctx, Some(&hs), c5, &ew).unwrap());
        assert!(!ctx.is_sigma_permutable(c5));
        assert!(!ctx.is_weakly_m_sigma_permutable(c5).unwrap());
        assert!(!ctx.is_c_normal(c5));
        assert!(ctx.is_weakly_m_sigma_permutable(lat.whole()).unwrap());
    }

    #[test]
    fn nothing_is_m_sigma_without_hall_sets() {
        let lat = lattice("A5");
        let ctx = SigmaContext::new(lat.top(), sp("2,5|3|*"));
        assert!(!ctx.is_sigma_full());
        for x in lat.ids() {
            assert!(!ctx.is_sigma_permutable(x));
            assert!(!ctx.is_m_sigma_permutable(x).unwrap());
            assert!(!ctx.is_weakly_m_sigma_permutable(x).unwrap());
        }
    }

    #[test]
    fn a4_classical_involutions_fail() {
        let lat = lattice("A4");
        let ctx = SigmaContext::new(lat.top(), SigmaPartition::classical());
        for hs in ctx.hall_sets() {
            let hc = ctx.hall(hs.clone());
            for x in lat.ids().filter(|&x| lat.order(x) == 2) {
                assert!(!hc.is_weakly_m_h_permutable(x).unwrap());
            }
        }
    }

    #[test]
    fn chains_and_witnesses_validate() {
        for (name, sigma) in [
            ("S4", "classical"),
            ("S4", "2|*"),
            ("D8xC3", "classical"),
            ("S3xC5", "3,5|*"),
        ] {
            let lat = lattice(name);
            let ctx = SigmaContext::new(lat.top(), sp(sigma));
            for x in lat.ids() {
                if let Some(chain) = ctx.sigma_subnormal_chain(x) {
                    let w = EmbeddingWitness::SigmaSubnormal { chain };
                    assert!(
                        validate_witness(&ctx, None, x, &w).unwrap(),
                        "{name} {sigma}"
                    );
                }
                if let Some(t) = ctx.c_normal_witness(x) {
                    assert!(
                        validate_witness(&ctx, None, x, &EmbeddingWitness::CNormal { t }).unwrap()
                    );
                }
                if let Some(hs) = ctx.sigma_permutable_witness(x) {
                    let w = EmbeddingWitness::SigmaPermutable { hall: hs.clone() };
                    assert!(validate_witness(&ctx, None, x, &w).unwrap());
                }
                if let Some(w) = ctx.weakly_m_sigma_witness(x).unwrap() {
                    let ew = EmbeddingWitness::WeaklyMPermutable {
                        t: w.t,
                        s: w.s,
                        a: w.a,
                        b: w.b,
                    };
                    assert!(validate_witness(&ctx, None, x, &ew).unwrap());
                }
            }
            for hs in ctx.hall_sets().iter().take(3) {
                let hc = ctx.hall(hs.clone());
                for x in lat.ids() {
                    if hc.is_h_permutable(x) {
                        assert!(validate_witness(
                            &ctx,
                            Some(hs),
                            x,
                            &EmbeddingWitness::HPermutable
                        )
                        .unwrap());
                    }
                    if let Some(w) = hc.m_h_witness(x).unwrap() {
                        let ew = EmbeddingWitness::MPermutable { a: w.a, b: w.b };
                        assert!(validate_witness(&ctx, Some(hs), x, &ew).unwrap());
                    }
                    if let Some(w) = hc.weakly_m_h_witness(x).unwrap() {
                        let ew = EmbeddingWitness::WeaklyMPermutable {
                            t: w.t,
                            s: w.s,
                            a: w.a,
                            b: w.b,
                        };
                        assert!(validate_witness(&ctx, Some(hs), x, &ew).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn trivial_witness_shapes() {
        let lat = lattice("S3");
        let ctx = SigmaContext::new(lat.top(), SigmaPartition::classical());
        let hs = ctx.hall_sets()[0].clone();
        let hc = ctx.hall(hs.clone());
        let c3 = lat.ids().find(|&x| lat.order(x) == 3).unwrap();
        assert_eq!(
            hc.m_h_witness(c3).unwrap(),
            Some(JoinWitness {
                a: lat.trivial(),
                b: c3
            })
        );
        let c2 = lat
            .ids()
            .find(|&x| lat.order(x) == 2 && !hc.is_h_permutable(x))
            .unwrap();
        let w = hc.weakly_m_h_witness(c2).unwrap().unwrap();
        assert_eq!(w.t, c3);
        // Every subgroup of S3 is modular, so S = H with A = H.
        assert_eq!((w.s, w.a, w.b), (c2, c2, lat.trivial()));
        assert!(ctx.is_c_normal(c2));
    }
}
