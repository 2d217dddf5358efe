//! σ-partitions of the primes, Hall σ-subgroups, complete Hall σ-sets and the
//! Sylow-type (D_π) check.

use std::fmt;
use std::str::FromStr;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize, Serializer};

use crate::arith::{is_prime, prime_divisors};
use crate::error::{Error, Result};
use crate::lattice::{SubId, View};

/// Label of a block: its smallest prime, or 0 for the implicit complement.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Block(pub u64);

impl Block {
    pub const COMPLEMENT: Block = Block(0);
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if *self == Block::COMPLEMENT {
            write!(f, "*")
        } else {
            write!(f, "[{}]", self.0)
        }
    }
}

/// Explicit prime blocks plus one block holding every other prime.
///
/// The classical partition (every prime its own block) is a separate mode,
/// because its complement is not a single block.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SigmaPartition {
    blocks: Vec<Vec<u64>>,
    classical: bool,
}

impl SigmaPartition {
    pub fn new(blocks: Vec<Vec<u64>>) -> Result<Self> {
        let mut blocks = blocks;
        let mut seen = Vec::new();
        for b in &mut blocks {
            if b.is_empty() {
                return Err(Error::Validation("empty block in σ-partition".into()));
            }
            b.sort_unstable();
            b.dedup();
            for &p in b.iter() {
                if !is_prime(p) {
                    return Err(Error::Validation(format!("{p} is not prime")));
                }
                if seen.contains(&p) {
                    return Err(Error::Validation(format!(
                        "prime {p} appears in two blocks"
                    )));
                }
                seen.push(p);
            }
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        Ok(SigmaPartition {
            blocks,
            classical: false,
        })
    }

    /// Every prime in its own block.
    pub fn classical() -> Self {
        SigmaPartition {
            blocks: Vec::new(),
            classical: true,
        }
    }

    /// All primes in one block.
    pub fn whole() -> Self {
        SigmaPartition {
            blocks: Vec::new(),
            classical: false,
        }
    }

    pub fn is_classical(&self) -> bool {
        self.classical
    }

    pub fn blocks(&self) -> &[Vec<u64>] {
        &self.blocks
    }

    pub fn block_of(&self, p: u64) -> Block {
        if let Some(b) = self.blocks.iter().find(|b| b.contains(&p)) {
            return Block(b[0]);
        }
        if self.classical {
            Block(p)
        } else {
            Block::COMPLEMENT
        }
    }

    fn in_block(&self, p: u64, b: Block) -> bool {
        self.block_of(p) == b
    }

    /// Blocks meeting `π(n)`, sorted.
    pub fn sigma_of(&self, n: u64) -> Vec<Block> {
        let mut out: Vec<Block> = prime_divisors(n)
            .into_iter()
            .map(|p| self.block_of(p))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// `|σ(n)| <= 1`.
    pub fn is_primary(&self, n: u64) -> bool {
        self.sigma_of(n).len() <= 1
    }

    /// Largest divisor of `n` that is a `b`-number.
    pub fn block_part(&self, n: u64, b: Block) -> u64 {
        crate::arith::part(n, |p| self.in_block(p, b))
    }

    /// `π(n)` lies in the union of `pi`.
    pub fn is_pi_number(&self, n: u64, pi: &[Block]) -> bool {
        prime_divisors(n)
            .into_iter()
            .all(|p| pi.contains(&self.block_of(p)))
    }

    /// Same partition with one extra explicit block.
    pub fn padded(&self, extra: Vec<u64>) -> Result<Self> {
        if self.classical {
            return Err(Error::Validation(
                "cannot pad the classical partition".into(),
            ));
        }
        let mut blocks = self.blocks.clone();
        blocks.push(extra);
        SigmaPartition::new(blocks)
    }

    /// Every set partition of `primes`, each as explicit blocks with the
    /// remaining primes in the complement.
    pub fn all_for_primes(primes: &[u64]) -> Vec<SigmaPartition> {
        let mut out = Vec::new();
        let mut cur: Vec<Vec<u64>> = Vec::new();
        set_partitions(primes, 0, &mut cur, &mut out);
        out.into_iter()
            .map(|b| SigmaPartition::new(b).expect("distinct primes"))
            .collect()
    }
}

fn set_partitions(primes: &[u64], i: usize, cur: &mut Vec<Vec<u64>>, out: &mut Vec<Vec<Vec<u64>>>) {
    if i == primes.len() {
        out.push(cur.clone());
        return;
    }
    for k in 0..cur.len() {
        cur[k].push(primes[i]);
        set_partitions(primes, i + 1, cur, out);
        cur[k].pop();
    }
    cur.push(vec![primes[i]]);
    set_partitions(primes, i + 1, cur, out);
    cur.pop();
}

impl fmt::Display for SigmaPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.classical {
            return write!(f, "classical");
        }
        for b in &self.blocks {
            let s: Vec<String> = b.iter().map(u64::to_string).collect();
            write!(f, "{}|", s.join(","))?;
        }
        write!(f, "*")
    }
}

impl Serialize for SigmaPartition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl FromStr for SigmaPartition {
    type Err = Error;

    /// `2,3|*`, `2|3|5`, `*` or `classical`.
    fn from_str(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.eq_ignore_ascii_case("classical") {
            return Ok(SigmaPartition::classical());
        }
        let mut parts: Vec<&str> = text.split('|').map(str::trim).collect();
        if parts.last() == Some(&"*") {
            parts.pop();
        }
        let mut blocks = Vec::new();
        for part in parts {
            let mut block = Vec::new();
            for tok in part.split(',').map(str::trim) {
                let p: u64 = tok.parse().map_err(|_| Error::Parse {
                    line: 0,
                    message: format!("bad prime {tok:?} in σ-partition {text:?}"),
                })?;
                block.push(p);
            }
            blocks.push(block);
        }
        SigmaPartition::new(blocks)
    }
}

/// One Hall σ_i-subgroup per block of σ(G). Trivial members are not stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct HallSet {
    pub members: Vec<(Block, SubId)>,
}

impl HallSet {
    pub fn ids(&self) -> impl Iterator<Item = SubId> + '_ {
        self.members.iter().map(|&(_, s)| s)
    }

    pub fn member(&self, b: Block) -> Option<SubId> {
        self.members.iter().find(|m| m.0 == b).map(|m| m.1)
    }
}

/// Subgroups whose order is the full `b`-part of the ambient order.
pub fn hall_subgroups(view: &View<'_>, sigma: &SigmaPartition, b: Block) -> Vec<SubId> {
    let lat = view.lattice();
    let target = sigma.block_part(view.order() as u64, b) as usize;
    view.subgroups()
        .filter(|&x| lat.order(x) == target)
        .collect()
}

/// Cartesian product of the per-block Hall subgroup lists over σ(G).
pub fn complete_hall_sets(view: &View<'_>, sigma: &SigmaPartition) -> Vec<HallSet> {
    let blocks = sigma.sigma_of(view.order() as u64);
    let lists: Vec<Vec<SubId>> = blocks
        .iter()
        .map(|&b| hall_subgroups(view, sigma, b))
        .collect();
    let mut out = vec![HallSet {
        members: Vec::new(),
    }];
    for (b, list) in blocks.iter().zip(&lists) {
        let mut next = Vec::with_capacity(out.len() * list.len());
        for hs in &out {
            for &x in list {
                let mut m = hs.members.clone();
                m.push((*b, x));
                next.push(HallSet { members: m });
            }
        }
        out = next;
    }
    out
}

pub fn is_sigma_full(view: &View<'_>, sigma: &SigmaPartition) -> bool {
    sigma
        .sigma_of(view.order() as u64)
        .into_iter()
        .all(|b| !hall_subgroups(view, sigma, b).is_empty())
}

/// Which reading of "D_π-group" the Sylow-type check uses.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum DProperty {
    /// Existence, conjugacy and dominance.
    #[default]
    Full,
    /// Existence and conjugacy only.
    ExistenceConjugacy,
}

impl FromStr for DProperty {
    type Err = Error;

    /// `full` or `EC`.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "full" => Ok(DProperty::Full),
            "ec" | "existence-conjugacy" => Ok(DProperty::ExistenceConjugacy),
            other => Err(Error::Validation(format!(
                "unknown D-property mode {other:?} (expected full or EC)"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DFailure {
    NoHall,
    NotConjugate,
    NotDominated { subgroup: SubId },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SylowTypeViolation {
    pub subgroup: SubId,
    pub block: Block,
    pub failure: DFailure,
}

/// First subgroup `K` and block where `K` is not a `D_{σ_i}`-group.
pub fn sylow_type_violation(
    view: &View<'_>,
    sigma: &SigmaPartition,
    mode: DProperty,
) -> Option<SylowTypeViolation> {
    let lat = view.lattice();
    for k in view.subgroups() {
        let kv = view.view(k);
        for b in sigma.sigma_of(lat.order(k) as u64) {
            let halls = hall_subgroups(&kv, sigma, b);
            let fail = |failure| {
                Some(SylowTypeViolation {
                    subgroup: k,
                    block: b,
                    failure,
                })
            };
            let Some(&first) = halls.first() else {
                return fail(DFailure::NoHall);
            };
            let class = kv.conjugates(first);
            if class.len() != halls.len() {
                return fail(DFailure::NotConjugate);
            }
            if mode == DProperty::Full {
                let mut hall_bits = FixedBitSet::with_capacity(lat.len());
                for h in &halls {
                    hall_bits.insert(h.0);
                }
                for x in kv.subgroups() {
                    if sigma.is_pi_number(lat.order(x) as u64, &[b])
                        && lat.above(x).is_disjoint(&hall_bits)
                    {
                        return fail(DFailure::NotDominated { subgroup: x });
                    }
                }
            }
        }
    }
    None
}

pub fn is_sigma_full_of_sylow_type(
    view: &View<'_>,
    sigma: &SigmaPartition,
    mode: DProperty,
) -> bool {
    sylow_type_violation(view, sigma, mode).is_none()
}

/// `O^Π`: join of all subgroups whose order is a Π'-number.
pub fn o_upper_pi(view: &View<'_>, sigma: &SigmaPartition, pi: &[Block]) -> SubId {
    let lat = view.lattice();
    lat.join_all(view.subgroups().filter(|&x| {
        sigma
            .sigma_of(lat.order(x) as u64)
            .iter()
            .all(|b| !pi.contains(b))
    }))
}

/// `E ∩ ℋ` as a complete Hall σ-set of `e`, if ℋ reduces into `e`.
pub fn reduce_into(
    view: &View<'_>,
    sigma: &SigmaPartition,
    hall: &HallSet,
    e: SubId,
) -> Option<HallSet> {
    let lat = view.lattice();
    let ne = lat.order(e) as u64;
    let mut members = Vec::new();
    for &(b, x) in &hall.members {
        let m = lat.meet(x, e);
        if lat.order(m) as u64 != sigma.block_part(ne, b) {
            return None;
        }
        if m != lat.trivial() {
            members.push((b, m));
        }
    }
    // Blocks of σ(E) are all blocks of σ(G), so every block of E is covered.
    Some(HallSet { members })
}

pub fn reduces_into(view: &View<'_>, sigma: &SigmaPartition, hall: &HallSet, e: SubId) -> bool {
    reduce_into(view, sigma, hall, e).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::build;
    use crate::lattice::SubgroupLattice;
    use std::sync::Arc;

    fn lattice(name: &str) -> Arc<SubgroupLattice> {
        SubgroupLattice::new(&build(name).unwrap()).unwrap()
    }

    fn sp(s: &str) -> SigmaPartition {
        s.parse().unwrap()
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(sp("2,3|*").to_string(), "2,3|*");
        assert_eq!(sp("5|3,2").to_string(), "2,3|5|*");
        assert_eq!(sp("2|3|5"), sp("2|3|5|*"));
        assert_eq!(sp("*"), SigmaPartition::whole());
        assert!(sp("classical").is_classical());
        assert!("2,2|2".parse::<SigmaPartition>().is_err());
        assert!("4|*".parse::<SigmaPartition>().is_err());
        assert!("x".parse::<SigmaPartition>().is_err());
    }

    #[test]
    fn pi_numbers() {
        let s = sp("2,3|*");
        let b = s.block_of(2);
        assert!(s.is_pi_number(1, &[b]));
        assert!(s.is_pi_number(12, &[b]));
        assert!(!s.is_pi_number(60, &[b]));
        assert!(s.is_primary(1));
        assert!(s.is_primary(12));
        assert!(!SigmaPartition::classical().is_primary(12));
        assert_eq!(s.block_part(60, b), 12);
        assert_eq!(s.block_part(60, Block::COMPLEMENT), 5);
    }

    #[test]
    fn partitions_of_prime_sets() {
        assert_eq!(SigmaPartition::all_for_primes(&[]).len(), 1);
        assert_eq!(SigmaPartition::all_for_primes(&[2, 3]).len(), 2);
        assert_eq!(SigmaPartition::all_for_primes(&[2, 3, 5]).len(), 5);
        assert_eq!(SigmaPartition::all_for_primes(&[2, 3, 5, 7]).len(), 15);
    }

    #[test]
    fn hall_subgroups_of_a5() {
        let lat = lattice("A5");
        let top = lat.top();
        let s = sp("2,3|*");
        let a4s = hall_subgroups(&top, &s, s.block_of(2));
        assert_eq!(a4s.len(), 5);
        assert!(a4s.iter().all(|&x| lat.order(x) == 12));
        let c5s = hall_subgroups(&top, &s, Block::COMPLEMENT);
        assert_eq!(c5s.len(), 6);
        assert_eq!(
            hall_subgroups(&top, &s.padded(vec![7]).unwrap(), Block(7)),
            vec![lat.trivial()]
        );
        assert_eq!(complete_hall_sets(&top, &s).len(), 30);
        // Every Hall {2,3}-subgroup fixes a point; the S3 on all five points lies in none.
        let v = sylow_type_violation(&top, &s, DProperty::Full).unwrap();
        assert_eq!(v.subgroup, lat.whole());
        let DFailure::NotDominated { subgroup } = v.failure else {
            panic!("expected a dominance failure, got {v:?}");
        };
        assert_eq!(lat.order(subgroup), 6);
        assert!(is_sigma_full_of_sylow_type(
            &top,
            &s,
            DProperty::ExistenceConjugacy
        ));
    }

    #[test]
    fn hall_sets_of_a4() {
        let lat = lattice("A4");
        let top = lat.top();
        let s = sp("2,3|*");
        let sets = complete_hall_sets(&top, &s);
        assert_eq!(
            sets,
            vec![HallSet {
                members: vec![(Block(2), lat.whole())]
            }]
        );
        let classical = complete_hall_sets(&top, &SigmaPartition::classical());
        assert_eq!(classical.len(), 4);
        assert!(reduces_into(&top, &s, &sets[0], lat.whole()));
    }

    #[test]
    fn sylow_type_examples() {
        for (name, sigma) in [
            ("D8xC3", "classical"),
            ("D8xC3", "2,3|*"),
            ("S4", "2|*"),
            ("S3xC5", "3,5|*"),
            ("S4", "classical"),
        ] {
            let lat = lattice(name);
            assert!(
                is_sigma_full_of_sylow_type(&lat.top(), &sp(sigma), DProperty::Full),
                "{name} {sigma}"
            );
        }
        // A5 has no subgroup of order 15, so {3,5} has no Hall subgroup.
        let lat = lattice("A5");
        let v = sylow_type_violation(&lat.top(), &sp("3,5|*"), DProperty::Full).unwrap();
        assert_eq!(v.failure, DFailure::NoHall);
        // {2,5}: Hall subgroups of A5 would need order 20.
        assert!(!is_sigma_full(&lat.top(), &sp("2,5|*")));
    }

    #[test]
    fn o_upper_pi_examples() {
        let lat = lattice("A4");
        let s = sp("2|*");
        assert_eq!(o_upper_pi(&lat.top(), &s, &[Block(2)]), lat.whole());
        assert_eq!(
            o_upper_pi(&lat.top(), &s, &[Block(2), Block::COMPLEMENT]),
            lat.trivial()
        );
        let lat = lattice("S3xC5");
        let s = sp("5|*");
        let o = o_upper_pi(&lat.top(), &s, &[Block(5)]);
        assert_eq!(lat.order(o), 6);
    }

    #[test]
    fn reduction_fails_off_the_hall_member() {
        let lat = lattice("A5");
        let top = lat.top();
        let s = sp("2,3|*");
        let hs = &complete_hall_sets(&top, &s)[0];
        let a4 = hs.member(Block(2)).unwrap();
        let c2 = top
            .subgroups()
            .find(|&x| lat.order(x) == 2 && !lat.le(x, a4))
            .unwrap();
        assert!(!reduces_into(&top, &s, hs, c2));
        assert!(reduces_into(&top, &s, hs, lat.whole()));
    }
}
