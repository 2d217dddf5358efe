//! Deterministic Schreier–Sims.
//!
//! Base points are chosen as the smallest point moved by the first generator
//! (or sifting residue) that fixes every existing base point, so the same
//! generating sequence always yields the same base.

use std::collections::{HashMap, HashSet};

use super::perm::Permutation;

#[derive(Clone, Debug)]
struct Level {
    base: usize,
    /// Strong generators fixing every earlier base point.
    gens: Vec<Permutation>,
    /// Basic orbit in discovery order.
    orbit: Vec<usize>,
    /// `reps[b]` maps the base point to `b`.
    reps: HashMap<usize, Permutation>,
    /// Schreier generators (orbit point, generator index) already sifted.
    tested: HashSet<(usize, usize)>,
}

impl Level {
    fn new(base: usize, degree: usize) -> Self {
        let mut reps = HashMap::new();
        reps.insert(base, Permutation::identity(degree));
        Level {
            base,
            gens: Vec::new(),
            orbit: vec![base],
            reps,
            tested: HashSet::new(),
        }
    }

    fn extend_orbit(&mut self) {
        let mut idx = 0;
        while idx < self.orbit.len() {
            let p = self.orbit[idx];
            for s in &self.gens {
                let q = s.apply(p);
                if !self.reps.contains_key(&q) {
                    let rep = self.reps[&p].compose(s);
                    self.reps.insert(q, rep);
                    self.orbit.push(q);
                }
            }
            idx += 1;
        }
    }
}

/// Base and strong generating set with basic orbit transversals.
#[derive(Clone, Debug)]
pub struct Bsgs {
    degree: usize,
    levels: Vec<Level>,
}

impl Bsgs {
    pub fn new(degree: usize, generators: &[Permutation]) -> Self {
        let gens: Vec<Permutation> = generators
            .iter()
            .filter(|g| !g.is_identity())
            .cloned()
            .collect();
        let mut bsgs = Bsgs {
            degree,
            levels: Vec::new(),
        };
        if gens.is_empty() {
            return bsgs;
        }
        // Initial base: every generator must move some base point.
        for g in &gens {
            if bsgs.levels.iter().all(|l| g.apply(l.base) == l.base) {
                let p = first_moved(g).expect("non-identity");
                bsgs.levels.push(Level::new(p, degree));
            }
        }
        for i in 0..bsgs.levels.len() {
            let fixing: Vec<Permutation> = gens
                .iter()
                .filter(|g| bsgs.levels[..i].iter().all(|l| g.apply(l.base) == l.base))
                .cloned()
                .collect();
            bsgs.levels[i].gens = fixing;
            bsgs.levels[i].extend_orbit();
        }

        let mut i = bsgs.levels.len() as isize - 1;
        'outer: while i >= 0 {
            let lvl = i as usize;
            let mut oi = 0;
            while oi < bsgs.levels[lvl].orbit.len() {
                let b = bsgs.levels[lvl].orbit[oi];
                let mut si = 0;
                while si < bsgs.levels[lvl].gens.len() {
                    if bsgs.levels[lvl].tested.insert((b, si)) {
                        let level = &bsgs.levels[lvl];
                        let s = &level.gens[si];
                        let bs = s.apply(b);
                        let h = level.reps[&b]
                            .compose(s)
                            .compose(&level.reps[&bs].inverse());
                        let (residue, stuck) = bsgs.strip(h, lvl + 1);
                        if !residue.is_identity() {
                            if stuck == bsgs.levels.len() {
                                let p = first_moved(&residue).expect("non-identity");
                                bsgs.levels.push(Level::new(p, degree));
                            }
                            for l in lvl + 1..=stuck {
                                bsgs.levels[l].gens.push(residue.clone());
                                bsgs.levels[l].extend_orbit();
                            }
                            i = stuck as isize;
                            continue 'outer;
                        }
                    }
                    si += 1;
                }
                oi += 1;
            }
            i -= 1;
        }
        bsgs
    }

    /// Sifts `g` through the levels starting at `from`; returns the residue and
    /// the level where sifting stopped (`levels.len()` if it passed them all).
    fn strip(&self, mut g: Permutation, from: usize) -> (Permutation, usize) {
        for (l, level) in self.levels.iter().enumerate().skip(from) {
            let b = g.apply(level.base);
            if b == level.base {
                continue;
            }
            match level.reps.get(&b) {
                Some(rep) => g = g.compose(&rep.inverse()),
                None => return (g, l),
            }
        }
        (g, self.levels.len())
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn order(&self) -> u64 {
        self.levels.iter().map(|l| l.orbit.len() as u64).product()
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        g.degree() == self.degree && self.strip(g.clone(), 0).0.is_identity()
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.base).collect()
    }

    pub fn basic_orbit_lengths(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn strong_generators(&self) -> Vec<Permutation> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for l in &self.levels {
            for g in &l.gens {
                if seen.insert(g.clone()) {
                    out.push(g.clone());
                }
            }
        }
        out
    }
}

fn first_moved(g: &Permutation) -> Option<usize> {
    (0..g.degree()).find(|&p| g.apply(p) != p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(deg: usize, s: &str) -> Permutation {
        Permutation::parse_cycles(deg, s).unwrap()
    }

    #[test]
    fn alternating_orders() {
        let a4 = Bsgs::new(4, &[p(4, "(0 1 2)"), p(4, "(0 1)(2 3)")]);
        assert_eq!(a4.order(), 12);
        assert!(a4.contains(&p(4, "(0 1)(2 3)")));
        assert!(!a4.contains(&p(4, "(0 1)")));
        let a5 = Bsgs::new(5, &[p(5, "(0 1 2)"), p(5, "(0 1 2 3 4)")]);
        assert_eq!(a5.order(), 60);
    }

    #[test]
    fn symmetric_larger() {
        let s7 = Bsgs::new(7, &[p(7, "(0 1)"), p(7, "(0 1 2 3 4 5 6)")]);
        assert_eq!(s7.order(), 5040);
        let trivial = Bsgs::new(4, &[]);
        assert_eq!(trivial.order(), 1);
        assert!(trivial.contains(&Permutation::identity(4)));
    }
}
