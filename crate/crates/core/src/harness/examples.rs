//! End-to-end reproduction of the three worked examples: A4 with the
//! partition `{2,3} | rest`, the module product `(Q ⋊ C_p) × (C_r ⋊ C_t)`,
//! and the order-5 subgroup of A5.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::corpus::{alternating, example132};
use crate::embeddings::{is_h_permutable_ref, validate_witness, EmbeddingWitness, SigmaContext};
use crate::error::Result;
use crate::lattice::{SubId, SubgroupLattice};
use crate::sigma::{Block, SigmaPartition};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExampleCheck {
    pub claim: String,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExampleReport {
    pub name: String,
    pub checks: Vec<ExampleCheck>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl ExampleReport {
    fn new(name: &str) -> Self {
        ExampleReport {
            name: name.to_string(),
            checks: Vec::new(),
            elapsed: Duration::ZERO,
        }
    }

    fn claim(&mut self, claim: impl Into<String>, passed: bool) {
        self.checks.push(ExampleCheck {
            claim: claim.into(),
            passed,
        });
    }

    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.passed)
    }
}

fn one_block() -> SigmaPartition {
    SigmaPartition::new(vec![vec![2, 3]]).expect("valid partition")
}

/// A4 with `σ = {2,3} | rest`: every subgroup is ℋ-permutable and weakly
/// m-ℋ-permutable for ℋ = {A4}, yet no subgroup of order 2 is modular.
pub fn example_a4() -> Result<ExampleReport> {
    let start = Instant::now();
    let mut r = ExampleReport::new("A4, σ = 2,3|*");
    let lat = SubgroupLattice::new(&alternating(4)?)?;
    let ctx = SigmaContext::new(lat.top(), one_block());
    r.claim("A4 has 10 subgroups", lat.len() == 10);
    let sets = ctx.hall_sets();
    let unique = sets.len() == 1 && sets[0].ids().eq([lat.whole()]);
    r.claim("the unique complete Hall σ-set is {A4}", unique);
    if unique {
        let hc = ctx.hall(sets[0].clone());
        let mut all_perm = true;
        let mut all_weak = true;
        for x in lat.ids() {
            all_perm &= hc.is_h_permutable(x);
            all_weak &= hc.is_weakly_m_h_permutable(x)?;
        }
        r.claim("every subgroup is ℋ-permutable", all_perm);
        r.claim("every subgroup is weakly m-ℋ-permutable", all_weak);
    }
    let involutions: Vec<SubId> = lat.ids().filter(|&x| lat.order(x) == 2).collect();
    let mut none_modular = involutions.len() == 3;
    for &x in &involutions {
        none_modular &= !ctx.is_modular(x)?;
    }
    r.claim("no subgroup of order 2 is modular", none_modular);
    r.elapsed = start.elapsed();
    Ok(r)
}

/// `(Q ⋊ C_p) × (C_r ⋊ C_t)` with `σ = {p,q} | {r} | rest` and
/// ℋ = {Q ⋊ C_p, C_r, T}: `B` is ℋ-permutable while `A × B` is not.
pub fn example_module_product(p: usize, q: usize, r_: usize, t: usize) -> Result<ExampleReport> {
    let start = Instant::now();
    let mut r = ExampleReport::new(&format!("(Q ⋊ C{p}) × (C{r_} ⋊ C{t}), q = {q}"));
    let ex = example132(p, q, r_, t, true)?;
    let g = &ex.group;
    let qd = q.pow(ex.dimension as u32);
    let n = (qd * p * r_ * t) as u64;
    r.claim(format!("|G| = {n}"), g.order() == n);
    r.claim(format!("|V| = {}", qd * p), ex.v.order() == qd * p);
    r.claim(
        "V and C_r are normal",
        ex.v.is_normal() && ex.c_r.is_normal(),
    );
    r.claim("T has order t and T ≠ A", ex.t.order() == t && ex.t != ex.a);
    r.claim("A ∩ V = 1", ex.a.intersection(&ex.v)?.is_trivial());
    r.claim(
        "B < Q",
        ex.b.is_subgroup_of(&ex.q_module) && ex.b.order() < ex.q_module.order(),
    );

    let sigma = SigmaPartition::new(vec![vec![p as u64, q as u64], vec![r_ as u64]])?;
    let members = [ex.v.clone(), ex.c_r.clone(), ex.t.clone()];
    let is_hall = members.iter().all(|m| {
        let b = sigma.block_of(
            *crate::arith::prime_divisors(m.order() as u64)
                .first()
                .expect("nontrivial"),
        );
        sigma.is_pi_number(m.order() as u64, &[b]) && sigma.block_part(n, b) == m.order() as u64
    }) && sigma.sigma_of(n).len() == members.len();
    r.claim("{V, C_r, T} is a complete Hall σ-set", is_hall);
    r.claim("B is ℋ-permutable", is_h_permutable_ref(&ex.b, &members)?);
    let h = ex.a.join(&ex.b)?;
    r.claim("H = <A, B> has order t·q", h.order() == t * q);
    r.claim("H is not ℋ-permutable", !is_h_permutable_ref(&h, &members)?);
    r.claim("H does not permute with T", !h.permutes_with(&ex.t)?);
    r.elapsed = start.elapsed();
    Ok(r)
}

/// A5 with `σ = {2,3} | rest`: an order-5 subgroup is ℋ-permutable and
/// weakly m-ℋ-permutable but neither σ-permutable nor weakly m-σ-permutable.
pub fn example_a5() -> Result<ExampleReport> {
    let start = Instant::now();
    let mut r = ExampleReport::new("A5, σ = 2,3|*");
    let lat = SubgroupLattice::new(&alternating(5)?)?;
    let ctx = SigmaContext::new(lat.top(), one_block());
    r.claim("A5 has 59 subgroups", lat.len() == 59);
    let sn: Vec<SubId> = ctx.sigma_subnormal_set().ones().map(SubId).collect();
    r.claim(
        "the σ-subnormal subgroups are exactly 1 and A5",
        sn == [lat.trivial(), lat.whole()],
    );
    let Some(hs) = ctx.hall_sets().first().cloned() else {
        r.claim("A5 has a complete Hall σ-set", false);
        return Ok(r);
    };
    let (Some(k), Some(h)) = (hs.member(Block(2)), hs.member(Block::COMPLEMENT)) else {
        r.claim("the Hall set has an A4 member and a C5 member", false);
        return Ok(r);
    };
    r.claim("ℋ = {A4-copy, C5}", lat.order(k) == 12 && lat.order(h) == 5);
    let hc = ctx.hall(hs.clone());
    r.claim("H is ℋ-permutable", hc.is_h_permutable(h));
    let w = hc.weakly_m_h_witness(h)?;
    r.claim("H is weakly m-ℋ-permutable", w.is_some());
    if let Some(w) = w {
        let ew = EmbeddingWitness::WeaklyMPermutable {
            t: w.t,
            s: w.s,
            a: w.a,
            b: w.b,
        };
        r.claim(
            "the witness (T, S, A, B) re-validates",
            validate_witness(&ctx, Some(&hs), h, &ew)?,
        );
    }
    r.claim("H is not σ-permutable", !ctx.is_sigma_permutable(h));
    r.claim(
        "H is not weakly m-σ-permutable",
        !ctx.is_weakly_m_sigma_permutable(h)?,
    );
    r.elapsed = start.elapsed();
    Ok(r)
}

/// All three examples, the module product with `(p,q,r,t) = (5,2,7,3)`.
pub fn reproduce_examples() -> Result<Vec<ExampleReport>> {
    Ok(vec![
        example_a4()?,
        example_module_product(5, 2, 7, 3)?,
        example_a5()?,
    ])
}
