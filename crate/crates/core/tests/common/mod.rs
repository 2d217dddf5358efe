//! Independent oracles: nothing here goes through the Cayley table, the
//! lattice or the Schreier–Sims code.

#![allow(dead_code)]

use std::collections::{HashMap, HashSet};

use hcembed::permgroup::{GroupHandle, Permutation};

/// Multiplication table of the enumerated elements, built with `compose` only.
pub struct RawGroup {
    pub elements: Vec<Permutation>,
    pub mul: Vec<Vec<usize>>,
    pub identity: usize,
}

impl RawGroup {
    pub fn new(g: &GroupHandle) -> Self {
        let elements = g.enumerate_elements();
        let index: HashMap<&Permutation, usize> =
            elements.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let mul = elements
            .iter()
            .map(|a| elements.iter().map(|b| index[&a.compose(b)]).collect())
            .collect();
        let identity = elements
            .iter()
            .position(|p| p.is_identity())
            .expect("identity present");
        RawGroup {
            elements,
            mul,
            identity,
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    /// Subgroup generated by `gens`, as a sorted element list.
    pub fn closure(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.len()];
        seen[self.identity] = true;
        let mut queue = vec![self.identity];
        while let Some(x) = queue.pop() {
            for &g in gens {
                let y = self.mul[x][g];
                if !seen[y] {
                    seen[y] = true;
                    queue.push(y);
                }
            }
        }
        (0..self.len()).filter(|&i| seen[i]).collect()
    }
}

/// Number of subgroups: all cyclic subgroups closed under pairwise joins.
pub fn lattice_size_by_join_closure(g: &GroupHandle) -> usize {
    let raw = RawGroup::new(g);
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut subs: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
    for x in 0..raw.len() {
        let s = raw.closure(&[x]);
        if seen.insert(s.clone()) {
            subs.push((s, vec![x]));
        }
    }
    let mut i = 0;
    while i < subs.len() {
        for j in 0..i {
            let mut gens = subs[i].1.clone();
            gens.extend_from_slice(&subs[j].1);
            let s = raw.closure(&gens);
            if seen.insert(s.clone()) {
                subs.push((s, gens));
            }
        }
        i += 1;
    }
    subs.len()
}

/// Normal subgroups of the raw group: subgroups closed under conjugation.
pub fn is_normal_set(raw: &RawGroup, set: &[usize]) -> bool {
    let inv: Vec<usize> = (0..raw.len())
        .map(|a| {
            (0..raw.len())
                .find(|&b| raw.mul[a][b] == raw.identity)
                .expect("inverse")
        })
        .collect();
    let member: HashSet<usize> = set.iter().copied().collect();
    set.iter()
        .all(|&h| (0..raw.len()).all(|g| member.contains(&raw.mul[raw.mul[inv[g]][h]][g])))
}

/// Supersolubility as a normal series with prime-order factors, extended
/// greedily one normal step `M = <N, x>` at a time.
pub fn supersoluble_by_normal_series(g: &GroupHandle) -> bool {
    let raw = RawGroup::new(g);
    let n = raw.len();
    let mut cur = vec![raw.identity];
    while cur.len() < n {
        let mut next = None;
        for x in 0..n {
            if cur.binary_search(&x).is_ok() {
                continue;
            }
            let mut gens = cur.clone();
            gens.push(x);
            let m = raw.closure(&gens);
            let index = m.len() / cur.len();
            if is_prime(index) && is_normal_set(&raw, &m) {
                next = Some(m);
                break;
            }
        }
        match next {
            Some(m) => cur = m,
            None => return false,
        }
    }
    true
}

fn is_prime(n: usize) -> bool {
    n >= 2
        && (2..n)
            .take_while(|d| d * d <= n)
            .all(|d| !n.is_multiple_of(d))
}
