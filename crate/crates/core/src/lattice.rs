//! Subgroup lattices.
//!
//! Subgroups are stored sorted by `(order, element set)`, so the join of two
//! members is the first common upper bound and the meet is the last common
//! lower bound. A [`View`] restricts the lattice to the subgroups of one
//! member, which then plays the role of the ambient group; every subgroup of
//! a subgroup is already in the lattice, so predicates relative to a subgroup
//! never need a second enumeration.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::permgroup::{CayleyTable, GroupHandle, SubgroupRef};

pub const DEFAULT_LATTICE_CAP: usize = 512;
pub const DEFAULT_MODULARITY_CAP: usize = 200;

/// Index of a subgroup within its lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SubId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    /// Largest group order whose lattice is enumerated.
    pub lattice: usize,
    /// Largest ambient order for the modularity scan.
    pub modularity: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            lattice: DEFAULT_LATTICE_CAP,
            modularity: DEFAULT_MODULARITY_CAP,
        }
    }
}

pub struct SubgroupLattice {
    group: Arc<GroupHandle>,
    caps: Caps,
    subs: Vec<SubgroupRef>,
    index: HashMap<FixedBitSet, SubId>,
    up: Vec<FixedBitSet>,
    down: Vec<FixedBitSet>,
    /// `normal_in[y]`: members of `down[y]` normal in `y`.
    normal_in: Vec<FixedBitSet>,
    /// `conj[g][i]`: id of `subs[i]^g` for every element `g`.
    conj: Vec<Vec<u32>>,
    class_of: Vec<usize>,
    classes: Vec<Vec<SubId>>,
    modular_top: OnceLock<FixedBitSet>,
}

impl std::fmt::Debug for SubgroupLattice {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SubgroupLattice")
            .field("order", &self.group.order())
            .field("subgroups", &self.subs.len())
            .finish()
    }
}

/// Witness that a subgroup is not modular.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModularityViolation {
    /// `<X, H∩Z> != <X,H> ∩ Z` with `X <= Z`.
    First { x: SubId, z: SubId },
    /// `<H, Y∩Z> != <H,Y> ∩ Z` with `H <= Z`.
    Second { y: SubId, z: SubId },
}

impl SubgroupLattice {
    pub fn new(group: &Arc<GroupHandle>) -> Result<Arc<Self>> {
        Self::with_caps(group, Caps::default())
    }

    pub fn with_caps(group: &Arc<GroupHandle>, caps: Caps) -> Result<Arc<Self>> {
        if group.order() > caps.lattice as u64 {
            return Err(Error::Budget {
                what: "group order for lattice enumeration",
                cap: caps.lattice,
                actual: group.order() as usize,
            });
        }
        let table = group.table()?.clone();
        let n = table.len();

        // Cyclic subgroups, one generator each.
        let mut cyclic: Vec<(FixedBitSet, usize)> = Vec::new();
        let mut cyclic_seen: HashMap<FixedBitSet, ()> = HashMap::new();
        for e in 1..n {
            let set = table.closure(&[e], None);
            if cyclic_seen.insert(set.clone(), ()).is_none() {
                cyclic.push((set, e));
            }
        }

        // Every subgroup is reached from 1 by successively joining cyclic subgroups.
        let mut trivial = FixedBitSet::with_capacity(n);
        trivial.insert(0);
        let mut found: HashMap<FixedBitSet, usize> = HashMap::new();
        let mut list: Vec<(FixedBitSet, Vec<usize>)> = vec![(trivial.clone(), Vec::new())];
        found.insert(trivial, 0);
        let mut qi = 0;
        while qi < list.len() {
            let (set, gens) = list[qi].clone();
            for (cset, c) in &cyclic {
                if cset.is_subset(&set) {
                    continue;
                }
                let mut g2 = gens.clone();
                g2.push(*c);
                let joined = table.closure(&g2, Some(&set));
                if !found.contains_key(&joined) {
                    found.insert(joined.clone(), list.len());
                    list.push((joined, g2));
                }
            }
            qi += 1;
        }

        list.sort_by(|a, b| {
            a.0.count_ones(..)
                .cmp(&b.0.count_ones(..))
                .then_with(|| a.0.cmp(&b.0))
        });
        let subs: Vec<SubgroupRef> = list
            .into_iter()
            .map(|(set, gens)| SubgroupRef::from_parts(group.clone(), set, gens))
            .collect();
        let l = subs.len();
        let index: HashMap<FixedBitSet, SubId> = subs
            .iter()
            .enumerate()
            .map(|(i, s)| (s.elements().clone(), SubId(i)))
            .collect();

        let mut up = vec![FixedBitSet::with_capacity(l); l];
        let mut down = vec![FixedBitSet::with_capacity(l); l];
        for i in 0..l {
            for j in i..l {
                if subs[j].order().is_multiple_of(subs[i].order())
                    && subs[i].elements().is_subset(subs[j].elements())
                {
                    up[i].insert(j);
                    down[j].insert(i);
                }
            }
        }

        let conj = conjugation_action(group, &table, &subs, &index);

        let normal_in: Vec<FixedBitSet> = (0..l)
            .into_par_iter()
            .map(|y| {
                let mut set = FixedBitSet::with_capacity(l);
                for x in down[y].ones() {
                    if subs[y]
                        .generator_indices()
                        .iter()
                        .all(|&s| conj[s][x] as usize == x)
                    {
                        set.insert(x);
                    }
                }
                set
            })
            .collect();

        let mut class_of = vec![usize::MAX; l];
        let mut classes = Vec::new();
        for i in 0..l {
            if class_of[i] != usize::MAX {
                continue;
            }
            let mut members: Vec<usize> = conj.iter().map(|row| row[i] as usize).collect();
            members.sort_unstable();
            members.dedup();
            for &m in &members {
                class_of[m] = classes.len();
            }
            classes.push(members.into_iter().map(SubId).collect());
        }

        Ok(Arc::new(SubgroupLattice {
            group: group.clone(),
            caps,
            subs,
            index,
            up,
            down,
            normal_in,
            conj,
            class_of,
            classes,
            modular_top: OnceLock::new(),
        }))
    }

    pub fn group(&self) -> &Arc<GroupHandle> {
        &self.group
    }

    pub fn table(&self) -> &CayleyTable {
        self.group.table().expect("lattice groups are enumerated")
    }

    pub fn caps(&self) -> Caps {
        self.caps
    }

    pub fn len(&self) -> usize {
        self.subs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subs.is_empty()
    }

    pub fn ids(&self) -> impl Iterator<Item = SubId> + '_ {
        (0..self.subs.len()).map(SubId)
    }

    pub fn trivial(&self) -> SubId {
        SubId(0)
    }

    pub fn whole(&self) -> SubId {
        SubId(self.subs.len() - 1)
    }

    pub fn top(&self) -> View<'_> {
        View {
            lat: self,
            top: self.whole(),
        }
    }

    pub fn view(&self, top: SubId) -> View<'_> {
        View { lat: self, top }
    }

    pub fn get(&self, id: SubId) -> &SubgroupRef {
        &self.subs[id.0]
    }

    pub fn order(&self, id: SubId) -> usize {
        self.subs[id.0].order()
    }

    pub fn id_of(&self, h: &SubgroupRef) -> Option<SubId> {
        if !Arc::ptr_eq(h.parent(), &self.group) {
            return None;
        }
        self.index.get(h.elements()).copied()
    }

    pub fn id_of_set(&self, set: &FixedBitSet) -> Option<SubId> {
        self.index.get(set).copied()
    }

    /// Members containing `id`.
    pub fn above(&self, id: SubId) -> &FixedBitSet {
        &self.up[id.0]
    }

    /// Members contained in `id`.
    pub fn below(&self, id: SubId) -> &FixedBitSet {
        &self.down[id.0]
    }

    /// Members of `below(y)` that are normal in `y`.
    pub fn normal_in(&self, y: SubId) -> &FixedBitSet {
        &self.normal_in[y.0]
    }

    pub fn le(&self, a: SubId, b: SubId) -> bool {
        self.up[a.0].contains(b.0)
    }

    pub fn join(&self, a: SubId, b: SubId) -> SubId {
        SubId(
            self.up[a.0]
                .intersection(&self.up[b.0])
                .next()
                .expect("the whole group is an upper bound"),
        )
    }

    pub fn meet(&self, a: SubId, b: SubId) -> SubId {
        SubId(
            self.down[a.0]
                .intersection(&self.down[b.0])
                .next_back()
                .expect("the trivial group is a lower bound"),
        )
    }

    pub fn join_all(&self, parts: impl IntoIterator<Item = SubId>) -> SubId {
        parts
            .into_iter()
            .fold(self.trivial(), |acc, x| self.join(acc, x))
    }

    /// `AB = BA`, i.e. `|<A,B>| |A∩B| = |A| |B|`.
    pub fn permutes(&self, a: SubId, b: SubId) -> bool {
        self.order(self.join(a, b)) * self.order(self.meet(a, b)) == self.order(a) * self.order(b)
    }

    /// `subs[x]^g` for an element index `g`.
    pub fn conj(&self, x: SubId, g: usize) -> SubId {
        SubId(self.conj[g][x.0] as usize)
    }

    pub fn class_of(&self, x: SubId) -> usize {
        self.class_of[x.0]
    }

    /// Conjugacy classes of subgroups under the whole group.
    pub fn classes(&self) -> &[Vec<SubId>] {
        &self.classes
    }

    /// Lattice id of the subgroup generated by an element set.
    pub fn generated(&self, gens: &[usize]) -> SubId {
        let set = self.table().closure(gens, None);
        self.index[&set]
    }

    pub fn describe(&self, id: SubId) -> String {
        self.subs[id.0].describe()
    }

    pub(crate) fn modular_top_cache(&self) -> &OnceLock<FixedBitSet> {
        &self.modular_top
    }
}

fn conjugation_action(
    group: &Arc<GroupHandle>,
    table: &CayleyTable,
    subs: &[SubgroupRef],
    index: &HashMap<FixedBitSet, SubId>,
) -> Vec<Vec<u32>> {
    let n = table.len();
    let l = subs.len();
    let gens: Vec<usize> = group
        .generators()
        .iter()
        .filter_map(|g| table.index_of(g))
        .filter(|&g| g != 0)
        .collect();
    let gen_action: Vec<Vec<u32>> = gens
        .iter()
        .map(|&s| {
            subs.iter()
                .map(|h| index[&table.conjugate_set(h.elements(), s)].0 as u32)
                .collect()
        })
        .collect();
    let mut conj: Vec<Vec<u32>> = vec![Vec::new(); n];
    conj[0] = (0..l as u32).collect();
    let mut bfs = vec![0usize];
    let mut i = 0;
    while i < bfs.len() {
        let e = bfs[i];
        for (k, &s) in gens.iter().enumerate() {
            let f = table.mul(e, s);
            if conj[f].is_empty() {
                // x^(es) = (x^e)^s
                let row: Vec<u32> = conj[e].iter().map(|&x| gen_action[k][x as usize]).collect();
                conj[f] = row;
                bfs.push(f);
            }
        }
        i += 1;
    }
    conj
}

/// The lattice restricted to the subgroups of `top`, with `top` as ambient group.
#[derive(Clone, Copy)]
pub struct View<'a> {
    lat: &'a SubgroupLattice,
    top: SubId,
}

impl<'a> View<'a> {
    pub fn lattice(&self) -> &'a SubgroupLattice {
        self.lat
    }

    pub fn top(&self) -> SubId {
        self.top
    }

    pub fn order(&self) -> usize {
        self.lat.order(self.top)
    }

    pub fn is_whole(&self) -> bool {
        self.top == self.lat.whole()
    }

    pub fn subgroups(&self) -> impl DoubleEndedIterator<Item = SubId> + 'a {
        self.lat.down[self.top.0].ones().map(SubId)
    }

    pub fn subgroup_set(&self) -> &'a FixedBitSet {
        &self.lat.down[self.top.0]
    }

    pub fn contains(&self, x: SubId) -> bool {
        self.lat.le(x, self.top)
    }

    /// Element indices of the ambient group.
    pub fn elements(&self) -> impl Iterator<Item = usize> + 'a {
        self.lat.subs[self.top.0].elements().ones()
    }

    pub fn generators(&self) -> &'a [usize] {
        self.lat.subs[self.top.0].generator_indices()
    }

    pub fn is_normal(&self, x: SubId) -> bool {
        self.lat.normal_in[self.top.0].contains(x.0)
    }

    pub fn normal_set(&self) -> &'a FixedBitSet {
        &self.lat.normal_in[self.top.0]
    }

    pub fn normal_subgroups(&self) -> Vec<SubId> {
        self.normal_set().ones().map(SubId).collect()
    }

    pub fn minimal_normal_subgroups(&self) -> Vec<SubId> {
        let normals = self.normal_set();
        normals
            .ones()
            .skip(1)
            .filter(|&m| {
                let mut below = self.lat.down[m].clone();
                below.intersect_with(normals);
                below.count_ones(..) == 2
            })
            .map(SubId)
            .collect()
    }

    /// Subnormal subgroups: downward closure under "normal in a member".
    pub fn subnormal_subgroups(&self) -> Vec<SubId> {
        let l = self.lat.len();
        let mut set = FixedBitSet::with_capacity(l);
        set.insert(self.top.0);
        let mut stack = vec![self.top.0];
        while let Some(y) = stack.pop() {
            for x in self.lat.normal_in[y].ones() {
                if !set.put(x) {
                    stack.push(x);
                }
            }
        }
        set.ones().map(SubId).collect()
    }

    /// Largest normal subgroup of the ambient group inside `x`.
    pub fn core(&self, x: SubId) -> SubId {
        SubId(
            self.lat.down[x.0]
                .intersection(self.normal_set())
                .next_back()
                .expect("trivial subgroup is normal"),
        )
    }

    /// Smallest normal subgroup of the ambient group containing `x`.
    pub fn normal_closure(&self, x: SubId) -> SubId {
        SubId(
            self.lat.up[x.0]
                .intersection(self.normal_set())
                .next()
                .expect("ambient group is normal in itself"),
        )
    }

    /// Conjugates of `x` by elements of the ambient group.
    pub fn conjugates(&self, x: SubId) -> Vec<SubId> {
        let mut out: Vec<SubId> = self.elements().map(|g| self.lat.conj(x, g)).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn are_conjugate(&self, a: SubId, b: SubId) -> bool {
        self.lat.order(a) == self.lat.order(b)
            && self.lat.class_of(a) == self.lat.class_of(b)
            && self.elements().any(|g| self.lat.conj(a, g) == b)
    }

    fn element_subgroup(&self, pred: impl Fn(usize) -> bool) -> SubId {
        let t = self.lat.table();
        let mut set = FixedBitSet::with_capacity(t.len());
        for g in self.elements() {
            if pred(g) {
                set.insert(g);
            }
        }
        self.lat.id_of_set(&set).expect("element set is a subgroup")
    }

    pub fn normalizer(&self, x: SubId) -> SubId {
        self.element_subgroup(|g| self.lat.conj(x, g) == x)
    }

    pub fn centralizer(&self, x: SubId) -> SubId {
        let t = self.lat.table();
        let gens = self.lat.subs[x.0].generator_indices();
        self.element_subgroup(|g| gens.iter().all(|&h| t.mul(g, h) == t.mul(h, g)))
    }

    pub fn center(&self) -> SubId {
        self.centralizer(self.top)
    }

    pub fn is_abelian(&self) -> bool {
        let t = self.lat.table();
        let gens = self.generators();
        gens.iter()
            .all(|&a| gens.iter().all(|&b| t.mul(a, b) == t.mul(b, a)))
    }

    pub fn is_cyclic(&self) -> bool {
        let t = self.lat.table();
        let n = self.order();
        self.elements().any(|g| t.element_order(g) as usize == n)
    }

    /// Commutator subgroup of the ambient group.
    pub fn derived_subgroup(&self) -> SubId {
        let t = self.lat.table();
        let gens = self.generators();
        let mut comms = Vec::new();
        for &a in gens {
            for &b in gens {
                let c = t.commutator(a, b);
                if c != 0 {
                    comms.push(c);
                }
            }
        }
        let x = self.lat.generated(&comms);
        self.normal_closure(x)
    }

    pub fn view(&self, top: SubId) -> View<'a> {
        debug_assert!(self.contains(top));
        View { lat: self.lat, top }
    }

    pub fn check_modularity_cap(&self) -> Result<()> {
        let cap = self.lat.caps.modularity;
        if self.order() > cap {
            return Err(Error::Budget {
                what: "ambient order for the modularity scan",
                cap,
                actual: self.order(),
            });
        }
        Ok(())
    }

    /// Kurosh modularity of `h` in the ambient group.
    pub fn is_modular(&self, h: SubId) -> Result<bool> {
        Ok(self.modularity_violation(h)?.is_none())
    }

    /// First violated modular identity for `h`, if any.
    pub fn modularity_violation(&self, h: SubId) -> Result<Option<ModularityViolation>> {
        self.check_modularity_cap()?;
        if h == self.top || h == self.lat.trivial() {
            return Ok(None);
        }
        Ok(self.scan_modularity(h))
    }

    fn scan_modularity(&self, h: SubId) -> Option<ModularityViolation> {
        let lat = self.lat;
        let sub = self.subgroup_set();
        let join_h: HashMap<usize, SubId> =
            sub.ones().map(|x| (x, lat.join(SubId(x), h))).collect();
        // <X, H∩Z> = <X,H> ∩ Z for X <= Z
        for z in sub.ones() {
            let z = SubId(z);
            let hz = lat.meet(h, z);
            for x in lat.down[z.0].ones() {
                let lhs = lat.join(SubId(x), hz);
                let rhs = lat.meet(join_h[&x], z);
                if lhs != rhs {
                    return Some(ModularityViolation::First { x: SubId(x), z });
                }
            }
        }
        // <H, Y∩Z> = <H,Y> ∩ Z for H <= Z
        let mut above_h = lat.up[h.0].clone();
        above_h.intersect_with(sub);
        for z in above_h.ones() {
            let z = SubId(z);
            for y in sub.ones() {
                let lhs = lat.join(h, lat.meet(SubId(y), z));
                let rhs = lat.meet(join_h[&y], z);
                if lhs != rhs {
                    return Some(ModularityViolation::Second { y: SubId(y), z });
                }
            }
        }
        None
    }

    /// All modular subgroups of the ambient group; cached for the whole group.
    pub fn modular_set(&self) -> Result<FixedBitSet> {
        self.check_modularity_cap()?;
        if self.is_whole() {
            if let Some(set) = self.lat.modular_top_cache().get() {
                return Ok(set.clone());
            }
        }
        let ids: Vec<usize> = self.subgroup_set().ones().collect();
        let flags: Vec<bool> = ids
            .par_iter()
            .map(|&h| {
                let h = SubId(h);
                h == self.top || h == self.lat.trivial() || self.scan_modularity(h).is_none()
            })
            .collect();
        let mut set = FixedBitSet::with_capacity(self.lat.len());
        for (&h, ok) in ids.iter().zip(flags) {
            if ok {
                set.insert(h);
            }
        }
        if self.is_whole() {
            let _ = self.lat.modular_top_cache().set(set.clone());
        }
        Ok(set)
    }
}
