//! Permutation groups: construction, membership, subgroup closure operations
//! and quotients by normal subgroups.
//!
//! A [`GroupHandle`] certifies its order with a base and strong generating
//! set. Subgroup-level work goes through an enumerated [`CayleyTable`]:
//! every group in scope is small enough to list, so a [`SubgroupRef`] is just
//! a bitset over the parent's sorted element list.

mod bsgs;
mod perm;

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock};

use fixedbitset::FixedBitSet;

pub use bsgs::Bsgs;
pub use perm::Permutation;

use crate::error::{Error, Result};

/// Largest order for which a group's elements are enumerated.
pub const DEFAULT_ENUMERATION_CAP: usize = 5000;

/// A finite permutation group given by generators.
pub struct GroupHandle {
    degree: usize,
    generators: Vec<Permutation>,
    bsgs: Bsgs,
    order: u64,
    enumeration_cap: usize,
    table: OnceLock<Arc<CayleyTable>>,
}

impl fmt::Debug for GroupHandle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GroupHandle")
            .field("degree", &self.degree)
            .field("order", &self.order)
            .field("generators", &self.generators)
            .finish()
    }
}

impl GroupHandle {
    pub fn from_generators(degree: usize, gens: Vec<Permutation>) -> Result<Arc<Self>> {
        Self::with_enumeration_cap(degree, gens, DEFAULT_ENUMERATION_CAP)
    }

    pub fn with_enumeration_cap(
        degree: usize,
        gens: Vec<Permutation>,
        enumeration_cap: usize,
    ) -> Result<Arc<Self>> {
        if degree == 0 {
            return Err(Error::Validation("degree must be positive".into()));
        }
        for g in &gens {
            if g.degree() != degree {
                return Err(Error::DegreeMismatch {
                    expected: degree,
                    actual: g.degree(),
                });
            }
        }
        let bsgs = Bsgs::new(degree, &gens);
        let order = bsgs.order();
        Ok(Arc::new(GroupHandle {
            degree,
            generators: gens,
            bsgs,
            order,
            enumeration_cap: enumeration_cap.min(u16::MAX as usize),
            table: OnceLock::new(),
        }))
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn bsgs(&self) -> &Bsgs {
        &self.bsgs
    }

    pub fn contains(&self, g: &Permutation) -> Result<bool> {
        if g.degree() != self.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                actual: g.degree(),
            });
        }
        Ok(self.bsgs.contains(g))
    }

    /// The enumerated element table, built on first use.
    pub fn table(&self) -> Result<&Arc<CayleyTable>> {
        if self.order > self.enumeration_cap as u64 {
            return Err(Error::Budget {
                what: "group order for element enumeration",
                cap: self.enumeration_cap,
                actual: self.order as usize,
            });
        }
        Ok(self
            .table
            .get_or_init(|| Arc::new(CayleyTable::build(self.degree, &self.generators))))
    }

    pub fn whole(self: &Arc<Self>) -> Result<SubgroupRef> {
        let table = self.table()?;
        let mut elements = FixedBitSet::with_capacity(table.len());
        elements.insert_range(..);
        let gens = self
            .generators
            .iter()
            .filter(|g| !g.is_identity())
            .map(|g| table.index_of(g).expect("generator is an element"))
            .collect();
        Ok(SubgroupRef::from_parts(self.clone(), elements, gens))
    }

    pub fn trivial_subgroup(self: &Arc<Self>) -> Result<SubgroupRef> {
        let table = self.table()?;
        let mut elements = FixedBitSet::with_capacity(table.len());
        elements.insert(0);
        Ok(SubgroupRef::from_parts(self.clone(), elements, Vec::new()))
    }

    /// Subgroup generated by the given permutations, which must lie in this group.
    pub fn subgroup(self: &Arc<Self>, gens: &[Permutation]) -> Result<SubgroupRef> {
        let table = self.table()?;
        let mut idx = Vec::with_capacity(gens.len());
        for g in gens {
            if g.degree() != self.degree {
                return Err(Error::DegreeMismatch {
                    expected: self.degree,
                    actual: g.degree(),
                });
            }
            match table.index_of(g) {
                Some(i) => idx.push(i),
                None => {
                    return Err(Error::Validation(format!(
                        "{g} is not an element of the parent group"
                    )))
                }
            }
        }
        Ok(self.subgroup_from_indices(&idx))
    }

    /// Subgroup generated by elements given as table indices.
    pub fn subgroup_from_indices(self: &Arc<Self>, gens: &[usize]) -> SubgroupRef {
        let table = self.table().expect("table available for indexed elements");
        let gens: Vec<usize> = gens.iter().copied().filter(|&g| g != 0).collect();
        let elements = table.closure(&gens, None);
        SubgroupRef::from_parts(self.clone(), elements, gens)
    }

    /// Wraps an element set already known to be a subgroup.
    pub fn subgroup_from_set(self: &Arc<Self>, elements: FixedBitSet) -> SubgroupRef {
        let table = self.table().expect("table available for indexed elements");
        let gens = table.generating_set(&elements);
        SubgroupRef::from_parts(self.clone(), elements, gens)
    }

    /// Enumerates all elements by closure, independently of the table.
    pub fn enumerate_elements(&self) -> Vec<Permutation> {
        enumerate_closure(self.degree, &self.generators)
    }
}

fn enumerate_closure(degree: usize, gens: &[Permutation]) -> Vec<Permutation> {
    let id = Permutation::identity(degree);
    let mut seen: HashMap<Permutation, ()> = HashMap::new();
    seen.insert(id.clone(), ());
    let mut list = vec![id];
    let mut i = 0;
    while i < list.len() {
        for s in gens {
            let e = list[i].compose(s);
            if seen.insert(e.clone(), ()).is_none() {
                list.push(e);
            }
        }
        i += 1;
    }
    list
}

/// Sorted element list with full multiplication and inverse tables.
pub struct CayleyTable {
    elements: Vec<Permutation>,
    index: HashMap<Permutation, usize>,
    mul: Vec<u16>,
    inv: Vec<u16>,
    element_orders: Vec<u32>,
}

impl CayleyTable {
    fn build(degree: usize, gens: &[Permutation]) -> Self {
        let gens: Vec<Permutation> = gens.iter().filter(|g| !g.is_identity()).cloned().collect();
        let mut elements = enumerate_closure(degree, &gens);
        elements.sort();
        let n = elements.len();
        let index: HashMap<Permutation, usize> = elements
            .iter()
            .enumerate()
            .map(|(i, e)| (e.clone(), i))
            .collect();
        // Right multiplication by each generator.
        let right: Vec<Vec<u16>> = gens
            .iter()
            .map(|s| {
                elements
                    .iter()
                    .map(|e| index[&e.compose(s)] as u16)
                    .collect()
            })
            .collect();
        // BFS tree from the identity: every other element b = parent(b) * gen.
        let mut parent_of = vec![(0usize, 0usize); n];
        let mut seen = vec![false; n];
        seen[0] = true;
        let mut bfs = vec![0usize];
        let mut i = 0;
        while i < bfs.len() {
            let b = bfs[i];
            for (k, r) in right.iter().enumerate() {
                let c = r[b] as usize;
                if !seen[c] {
                    seen[c] = true;
                    bfs.push(c);
                    parent_of[c] = (b, k);
                }
            }
            i += 1;
        }
        let mut mul = vec![0u16; n * n];
        for a in 0..n {
            let row = &mut mul[a * n..(a + 1) * n];
            row[0] = a as u16;
            for &b in &bfs[1..] {
                let (p, k) = parent_of[b];
                row[b] = right[k][row[p] as usize];
            }
        }
        let mut inv = vec![0u16; n];
        for a in 0..n {
            let row = &mul[a * n..(a + 1) * n];
            let b = row
                .iter()
                .position(|&x| x == 0)
                .expect("group has inverses");
            inv[a] = b as u16;
        }
        let mut element_orders = vec![1u32; n];
        for a in 1..n {
            let mut x = a;
            let mut k = 1;
            while x != 0 {
                x = mul[x * n + a] as usize;
                k += 1;
            }
            element_orders[a] = k;
        }
        CayleyTable {
            elements,
            index,
            mul,
            inv,
            element_orders,
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn element(&self, i: usize) -> &Permutation {
        &self.elements[i]
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn index_of(&self, g: &Permutation) -> Option<usize> {
        self.index.get(g).copied()
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.elements.len() + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    /// `g^-1 x g`.
    #[inline]
    pub fn conj(&self, x: usize, g: usize) -> usize {
        self.mul(self.mul(self.inv(g), x), g)
    }

    /// `x^-1 y^-1 x y`.
    #[inline]
    pub fn commutator(&self, x: usize, y: usize) -> usize {
        self.mul(self.mul(self.inv(x), self.inv(y)), self.mul(x, y))
    }

    pub fn element_order(&self, a: usize) -> u32 {
        self.element_orders[a]
    }

    /// Subgroup generated by `gens`, optionally seeded with a subgroup already
    /// known to lie inside the result.
    pub fn closure(&self, gens: &[usize], seed: Option<&FixedBitSet>) -> FixedBitSet {
        let n = self.len();
        let mut set = FixedBitSet::with_capacity(n);
        let mut list: Vec<usize> = match seed {
            Some(s) => {
                set.union_with(s);
                s.ones().collect()
            }
            None => Vec::new(),
        };
        if !set.contains(0) {
            set.insert(0);
            list.push(0);
        }
        let mut i = 0;
        while i < list.len() {
            let x = list[i];
            for &g in gens {
                let y = self.mul(x, g);
                if !set.put(y) {
                    list.push(y);
                }
            }
            i += 1;
        }
        set
    }

    /// Greedy small generating set for a subgroup given as an element set.
    pub fn generating_set(&self, elements: &FixedBitSet) -> Vec<usize> {
        let mut candidates: Vec<usize> = elements.ones().filter(|&e| e != 0).collect();
        candidates.sort_by_key(|&e| (std::cmp::Reverse(self.element_order(e)), e));
        let mut gens = Vec::new();
        let mut current = FixedBitSet::with_capacity(self.len());
        current.insert(0);
        let target = elements.count_ones(..);
        for e in candidates {
            if current.count_ones(..) == target {
                break;
            }
            if !current.contains(e) {
                gens.push(e);
                current = self.closure(&gens, Some(&current));
            }
        }
        gens
    }

    pub fn conjugate_set(&self, set: &FixedBitSet, g: usize) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(self.len());
        for x in set.ones() {
            out.insert(self.conj(x, g));
        }
        out
    }

    /// Element set `{ab : a in A, b in B}`.
    pub fn product_set(&self, a: &FixedBitSet, b: &FixedBitSet) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(self.len());
        let bs: Vec<usize> = b.ones().collect();
        for x in a.ones() {
            for &y in &bs {
                out.insert(self.mul(x, y));
            }
        }
        out
    }
}

/// A subgroup of a fixed parent group, keyed by its element set.
#[derive(Clone)]
pub struct SubgroupRef {
    parent: Arc<GroupHandle>,
    elements: FixedBitSet,
    order: usize,
    gens: Vec<usize>,
}

impl PartialEq for SubgroupRef {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.parent, &other.parent) && self.elements == other.elements
    }
}

impl Eq for SubgroupRef {}

impl Hash for SubgroupRef {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.elements.hash(state);
    }
}

impl fmt::Debug for SubgroupRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.describe())
    }
}

impl SubgroupRef {
    pub(crate) fn from_parts(
        parent: Arc<GroupHandle>,
        elements: FixedBitSet,
        gens: Vec<usize>,
    ) -> Self {
        let order = elements.count_ones(..);
        SubgroupRef {
            parent,
            elements,
            order,
            gens,
        }
    }

    pub fn parent(&self) -> &Arc<GroupHandle> {
        &self.parent
    }

    pub fn table(&self) -> &CayleyTable {
        self.parent
            .table()
            .expect("subgroup refs only exist over enumerated parents")
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn elements(&self) -> &FixedBitSet {
        &self.elements
    }

    /// Canonical key: the sorted list of element indices.
    pub fn key(&self) -> Vec<usize> {
        self.elements.ones().collect()
    }

    pub fn generator_indices(&self) -> &[usize] {
        &self.gens
    }

    pub fn generators(&self) -> Vec<Permutation> {
        let t = self.table();
        self.gens.iter().map(|&g| t.element(g).clone()).collect()
    }

    pub fn contains_index(&self, e: usize) -> bool {
        self.elements.contains(e)
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        self.table()
            .index_of(g)
            .is_some_and(|i| self.elements.contains(i))
    }

    pub fn is_trivial(&self) -> bool {
        self.order == 1
    }

    pub fn is_subgroup_of(&self, other: &SubgroupRef) -> bool {
        self.elements.is_subset(&other.elements)
    }

    fn same_parent(&self, other: &SubgroupRef) -> Result<()> {
        if Arc::ptr_eq(&self.parent, &other.parent) {
            Ok(())
        } else {
            Err(Error::MixedParents)
        }
    }

    pub fn intersection(&self, other: &SubgroupRef) -> Result<SubgroupRef> {
        self.same_parent(other)?;
        let mut e = self.elements.clone();
        e.intersect_with(&other.elements);
        Ok(self.parent.subgroup_from_set(e))
    }

    pub fn join(&self, other: &SubgroupRef) -> Result<SubgroupRef> {
        self.same_parent(other)?;
        if other.elements.is_subset(&self.elements) {
            return Ok(self.clone());
        }
        if self.elements.is_subset(&other.elements) {
            return Ok(other.clone());
        }
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().copied());
        let elements = self.table().closure(&gens, Some(&self.elements));
        let gens = self.table().generating_set(&elements);
        Ok(SubgroupRef::from_parts(self.parent.clone(), elements, gens))
    }

    pub fn conjugate(&self, g: usize) -> SubgroupRef {
        let t = self.table();
        let elements = t.conjugate_set(&self.elements, g);
        let gens = self.gens.iter().map(|&x| t.conj(x, g)).collect();
        SubgroupRef::from_parts(self.parent.clone(), elements, gens)
    }

    fn parent_gen_indices(&self) -> Vec<usize> {
        let t = self.table();
        self.parent
            .generators
            .iter()
            .filter_map(|g| t.index_of(g))
            .filter(|&g| g != 0)
            .collect()
    }

    /// Normal in the parent group.
    pub fn is_normal(&self) -> bool {
        let t = self.table();
        self.parent_gen_indices().into_iter().all(|s| {
            self.gens
                .iter()
                .all(|&h| self.elements.contains(t.conj(h, s)))
        })
    }

    /// Normal in `other`, which must contain it.
    pub fn is_normal_in(&self, other: &SubgroupRef) -> bool {
        let t = self.table();
        self.is_subgroup_of(other)
            && other.gens.iter().all(|&s| {
                self.gens
                    .iter()
                    .all(|&h| self.elements.contains(t.conj(h, s)))
            })
    }

    /// Smallest normal subgroup of the parent containing this one.
    pub fn normal_closure(&self) -> SubgroupRef {
        let t = self.table();
        let pgens = self.parent_gen_indices();
        let mut gens = self.gens.clone();
        let mut elements = self.elements.clone();
        let mut k = 0;
        while k < gens.len() {
            let h = gens[k];
            for &s in &pgens {
                let c = t.conj(h, s);
                if !elements.contains(c) {
                    gens.push(c);
                    elements = t.closure(&gens, Some(&elements));
                }
            }
            k += 1;
        }
        self.parent.subgroup_from_set(elements)
    }

    /// Largest normal subgroup of the parent contained in this one.
    pub fn core(&self) -> SubgroupRef {
        let t = self.table();
        let pgens = self.parent_gen_indices();
        let mut current = self.elements.clone();
        loop {
            let mut next = current.clone();
            for &s in &pgens {
                let c = t.conjugate_set(&current, s);
                next.intersect_with(&c);
            }
            if next == current {
                break;
            }
            current = next;
        }
        self.parent.subgroup_from_set(current)
    }

    pub fn normalizer(&self) -> SubgroupRef {
        let t = self.table();
        let mut out = FixedBitSet::with_capacity(t.len());
        for g in 0..t.len() {
            if self
                .gens
                .iter()
                .all(|&h| self.elements.contains(t.conj(h, g)))
            {
                out.insert(g);
            }
        }
        self.parent.subgroup_from_set(out)
    }

    pub fn centralizer(&self) -> SubgroupRef {
        let t = self.table();
        let mut out = FixedBitSet::with_capacity(t.len());
        for g in 0..t.len() {
            if self.gens.iter().all(|&h| t.mul(h, g) == t.mul(g, h)) {
                out.insert(g);
            }
        }
        self.parent.subgroup_from_set(out)
    }

    /// `HK = KH` as element sets.
    pub fn permutes_with(&self, other: &SubgroupRef) -> Result<bool> {
        self.same_parent(other)?;
        let meet = self.elements.intersection_count(&other.elements);
        let j = self.join(other)?;
        Ok(j.order * meet == self.order * other.order)
    }

    /// Short human-readable description used in witnesses and reports.
    pub fn describe(&self) -> String {
        let gens: Vec<String> = self.generators().iter().map(|g| g.to_string()).collect();
        if gens.is_empty() {
            format!("order {} <()>", self.order)
        } else {
            format!("order {} <{}>", self.order, gens.join(", "))
        }
    }
}

/// Smallest subgroup of `parent` containing every part.
pub fn join(parent: &Arc<GroupHandle>, parts: &[SubgroupRef]) -> Result<SubgroupRef> {
    let mut acc = parent.trivial_subgroup()?;
    for p in parts {
        if !Arc::ptr_eq(p.parent(), parent) {
            return Err(Error::MixedParents);
        }
        acc = acc.join(p)?;
    }
    Ok(acc)
}

/// `HK = KH`.
pub fn product_permutes(h: &SubgroupRef, k: &SubgroupRef) -> Result<bool> {
    h.permutes_with(k)
}

/// Action of the parent on the right cosets of a normal subgroup.
pub struct Quotient {
    group: Arc<GroupHandle>,
    kernel: SubgroupRef,
    /// Parent element index to quotient element index.
    image: Vec<usize>,
}

impl Quotient {
    pub fn group(&self) -> &Arc<GroupHandle> {
        &self.group
    }

    pub fn kernel(&self) -> &SubgroupRef {
        &self.kernel
    }

    pub fn map_element(&self, e: usize) -> usize {
        self.image[e]
    }

    /// Image `HN/N` of a parent subgroup.
    pub fn map_subgroup(&self, h: &SubgroupRef) -> SubgroupRef {
        let n = self.group.table().expect("quotient enumerated").len();
        let mut set = FixedBitSet::with_capacity(n);
        for e in h.elements().ones() {
            set.insert(self.image[e]);
        }
        self.group.subgroup_from_set(set)
    }

    /// Full preimage of a quotient subgroup.
    pub fn preimage(&self, q: &SubgroupRef) -> SubgroupRef {
        let parent = self.kernel.parent();
        let n = self.image.len();
        let mut set = FixedBitSet::with_capacity(n);
        for (e, &img) in self.image.iter().enumerate() {
            if q.contains_index(img) {
                set.insert(e);
            }
        }
        parent.subgroup_from_set(set)
    }
}

/// Quotient of `parent` by the normal subgroup `n`, realised as the
/// permutation action on right cosets.
pub fn quotient(parent: &Arc<GroupHandle>, n: &SubgroupRef) -> Result<Quotient> {
    if !Arc::ptr_eq(n.parent(), parent) {
        return Err(Error::MixedParents);
    }
    if !n.is_normal() {
        return Err(Error::NotNormal(n.describe()));
    }
    let t = parent.table()?;
    let size = t.len();
    let mut coset_of = vec![usize::MAX; size];
    let mut reps = Vec::new();
    let kernel: Vec<usize> = n.elements().ones().collect();
    for e in 0..size {
        if coset_of[e] != usize::MAX {
            continue;
        }
        let id = reps.len();
        reps.push(e);
        for &k in &kernel {
            coset_of[t.mul(k, e)] = id;
        }
    }
    let index = reps.len();
    let action = |g: usize| -> Permutation {
        let images: Vec<usize> = reps.iter().map(|&r| coset_of[t.mul(r, g)]).collect();
        Permutation::from_images(images).expect("coset action is a bijection")
    };
    let gens: Vec<Permutation> = parent
        .generators()
        .iter()
        .filter_map(|g| t.index_of(g))
        .map(action)
        .filter(|p| !p.is_identity())
        .collect();
    let group = GroupHandle::with_enumeration_cap(index, gens, parent.enumeration_cap)?;
    let qt = group.table()?;
    let image: Vec<usize> = (0..size)
        .map(|e| qt.index_of(&action(e)).expect("image lies in quotient"))
        .collect();
    Ok(Quotient {
        group,
        kernel: n.clone(),
        image,
    })
}
