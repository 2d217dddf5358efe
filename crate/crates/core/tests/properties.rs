mod common;

use proptest::prelude::*;

use hcembed::corpus::{build, corpus_up_to};
use hcembed::embeddings::{validate_witness, EmbeddingWitness, SigmaContext};
use hcembed::harness::{partitions_for, theorem15_hypothesis, verify_theorem15, HarnessConfig};
use hcembed::lattice::SubgroupLattice;
use hcembed::permgroup::{GroupHandle, Permutation};
use hcembed::series::{is_hypercyclically_embedded, is_supersoluble};
use hcembed::sigma::SigmaPartition;

fn perm(degree: usize) -> impl Strategy<Value = Permutation> {
    Just((0..degree).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(|v| Permutation::from_images(v).unwrap())
}

fn perms(degree: usize, n: usize) -> impl Strategy<Value = Vec<Permutation>> {
    prop::collection::vec(perm(degree), 1..=n)
}

const PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];

/// A partition of a random prime set, as block labels per prime.
fn partition() -> impl Strategy<Value = Vec<Vec<u64>>> {
    prop::collection::vec(0usize..4, 1..=PRIMES.len()).prop_map(|labels| {
        let mut blocks: Vec<Vec<u64>> = vec![Vec::new(); 4];
        for (p, l) in PRIMES.iter().zip(labels) {
            blocks[l].push(*p);
        }
        blocks.retain(|b| !b.is_empty());
        blocks
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn permutations_form_a_group(a in perm(7), b in perm(7), c in perm(7)) {
        let e = Permutation::identity(7);
        prop_assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
        prop_assert_eq!(a.compose(&e), a.clone());
        prop_assert_eq!(e.compose(&a), a.clone());
        prop_assert!(a.compose(&a.inverse()).is_identity());
        prop_assert_eq!(a.order(), (1..=420u64).find(|&k| {
            (1..k).fold(a.clone(), |x, _| x.compose(&a)).is_identity()
        }).unwrap());
    }

    #[test]
    fn cycle_notation_round_trips(a in perm(9)) {
        prop_assert_eq!(Permutation::parse_cycles(9, &a.to_string()).unwrap(), a);
    }

    #[test]
    fn group_order_matches_enumeration(gens in perms(6, 3)) {
        let g = GroupHandle::from_generators(6, gens.clone()).unwrap();
        let elements = g.enumerate_elements();
        prop_assert_eq!(g.order(), elements.len() as u64);
        for x in elements.iter().take(20) {
            for s in &gens {
                prop_assert!(g.contains(&x.compose(s)).unwrap());
            }
        }
    }

    #[test]
    fn sigma_partitions_round_trip(blocks in partition()) {
        let s = SigmaPartition::new(blocks).unwrap();
        let back: SigmaPartition = s.to_string().parse().unwrap();
        prop_assert_eq!(&back, &s);
        for p in PRIMES {
            prop_assert_eq!(back.block_of(p), s.block_of(p));
        }
    }

    #[test]
    fn lattice_matches_join_closure(gens in perms(5, 2)) {
        let g = GroupHandle::from_generators(5, gens).unwrap();
        let lat = SubgroupLattice::new(&g).unwrap();
        prop_assert_eq!(lat.len(), common::lattice_size_by_join_closure(&g));
    }
}

#[test]
fn supersolubility_matches_normal_series_oracle() {
    for e in corpus_up_to(100) {
        let g = build(&e.name).unwrap();
        let lat = SubgroupLattice::new(&g).unwrap();
        assert_eq!(
            is_supersoluble(&lat.top()),
            common::supersoluble_by_normal_series(&g),
            "{}",
            e.name
        );
    }
}

#[test]
fn hypercyclic_embedding_is_inherited_by_normal_subgroups() {
    for e in corpus_up_to(72) {
        let lat = SubgroupLattice::new(&build(&e.name).unwrap()).unwrap();
        let top = lat.top();
        let normal = top.normal_subgroups();
        let embedded: Vec<bool> = normal
            .iter()
            .map(|&x| is_hypercyclically_embedded(&top, x).unwrap())
            .collect();
        for (i, &big) in normal.iter().enumerate() {
            for (j, &small) in normal.iter().enumerate() {
                if embedded[i] && lat.le(small, big) {
                    assert!(
                        embedded[j],
                        "{}: {} under {}",
                        e.name,
                        lat.describe(small),
                        lat.describe(big)
                    );
                }
            }
        }
    }
}

/// Gate open for some ℋ implies E hypercyclically embedded; a closed
/// conclusion closes every gate.
#[test]
fn gate_never_opens_above_the_hypercentre() {
    let cfg = HarnessConfig::default();
    let mut open = 0;
    for e in corpus_up_to(60) {
        let lat = SubgroupLattice::new(&build(&e.name).unwrap()).unwrap();
        let top = lat.top();
        for sigma in partitions_for(lat.group().order()) {
            let ctx = SigmaContext::new(lat.top(), sigma);
            for n in top.normal_subgroups() {
                let embedded = is_hypercyclically_embedded(&top, n).unwrap();
                for hs in ctx.hall_sets() {
                    let gate = theorem15_hypothesis(&ctx, hs, n, cfg).unwrap();
                    if gate.pass {
                        open += 1;
                        assert!(
                            embedded,
                            "{} σ={} E={}",
                            e.name,
                            ctx.sigma(),
                            lat.describe(n)
                        );
                    }
                }
            }
        }
    }
    assert!(open > 0);
}

#[test]
fn verdicts_are_deterministic() {
    let cfg = HarnessConfig::default();
    for name in ["S4", "A4xC2", "D8xC3", "F21"] {
        let run = || {
            let lat = SubgroupLattice::new(&build(name).unwrap()).unwrap();
            let mut out = Vec::new();
            for sigma in partitions_for(lat.group().order()) {
                let ctx = SigmaContext::new(lat.top(), sigma);
                for n in lat.top().normal_subgroups() {
                    out.push(
                        serde_json::to_string(&verify_theorem15(&ctx, n, cfg).unwrap()).unwrap(),
                    );
                }
            }
            out
        };
        assert_eq!(run(), run(), "{name}");
    }
}

#[test]
fn every_witness_revalidates() {
    for e in corpus_up_to(48) {
        let lat = SubgroupLattice::new(&build(&e.name).unwrap()).unwrap();
        for sigma in partitions_for(lat.group().order()) {
            let ctx = SigmaContext::new(lat.top(), sigma);
            let halls: Vec<_> = ctx
                .hall_sets()
                .iter()
                .take(4)
                .map(|h| ctx.hall(h.clone()))
                .collect();
            for h in lat.ids() {
                let mut ws = Vec::new();
                if let Some(chain) = ctx.sigma_subnormal_chain(h) {
                    ws.push((EmbeddingWitness::SigmaSubnormal { chain }, None));
                }
                if let Some(hs) = ctx.sigma_permutable_witness(h) {
                    ws.push((EmbeddingWitness::SigmaPermutable { hall: hs.clone() }, None));
                }
                if let Some(w) = ctx.m_sigma_witness(h).unwrap() {
                    ws.push((EmbeddingWitness::MPermutable { a: w.a, b: w.b }, None));
                }
                if let Some(w) = ctx.weakly_m_sigma_witness(h).unwrap() {
                    ws.push((
                        EmbeddingWitness::WeaklyMPermutable {
                            t: w.t,
                            s: w.s,
                            a: w.a,
                            b: w.b,
                        },
                        None,
                    ));
                }
                if let Some(t) = ctx.c_normal_witness(h) {
                    ws.push((EmbeddingWitness::CNormal { t }, None));
                }
                for hc in &halls {
                    if hc.is_h_permutable(h) {
                        ws.push((EmbeddingWitness::HPermutable, Some(hc.hall_set())));
                    }
                    if let Some(w) = hc.m_h_witness(h).unwrap() {
                        ws.push((
                            EmbeddingWitness::MPermutable { a: w.a, b: w.b },
                            Some(hc.hall_set()),
                        ));
                    }
                    if let Some(w) = hc.weakly_m_h_witness(h).unwrap() {
                        let w = EmbeddingWitness::WeaklyMPermutable {
                            t: w.t,
                            s: w.s,
                            a: w.a,
                            b: w.b,
                        };
                        ws.push((w, Some(hc.hall_set())));
                    }
                }
                for (w, hs) in &ws {
                    assert!(
                        validate_witness(&ctx, *hs, h, w).unwrap(),
                        "{} σ={} {}: {w:?}",
                        e.name,
                        ctx.sigma(),
                        lat.describe(h)
                    );
                }
            }
        }
    }
}

#[test]
fn classical_partition_equals_all_singletons() {
    let lat = SubgroupLattice::new(&build("S4").unwrap()).unwrap();
    let a = SigmaContext::new(lat.top(), SigmaPartition::classical());
    let b = SigmaContext::new(lat.top(), "2|3".parse().unwrap());
    assert_eq!(a.sigma_subnormal_set(), b.sigma_subnormal_set());
    assert_eq!(a.hall_sets().len(), b.hall_sets().len());
    for h in lat.ids() {
        assert_eq!(a.is_sigma_permutable(h), b.is_sigma_permutable(h));
    }
}

/// A block of primes not dividing |G| changes no predicate and no verdict.
#[test]
fn padding_with_foreign_primes_changes_nothing() {
    let cfg = HarnessConfig::default();
    for e in corpus_up_to(36) {
        let lat = SubgroupLattice::new(&build(&e.name).unwrap()).unwrap();
        for sigma in partitions_for(lat.group().order()) {
            if sigma.is_classical() {
                continue;
            }
            let a = SigmaContext::new(lat.top(), sigma.clone());
            let b = SigmaContext::new(lat.top(), sigma.padded(vec![101, 103]).unwrap());
            let msg = format!("{} σ={}", e.name, sigma);
            assert_eq!(a.sigma_subnormal_set(), b.sigma_subnormal_set(), "{msg}");
            assert_eq!(a.hall_sets().len(), b.hall_sets().len(), "{msg}");
            for h in lat.ids() {
                assert_eq!(a.is_sigma_permutable(h), b.is_sigma_permutable(h), "{msg}");
                assert_eq!(
                    a.is_weakly_m_sigma_permutable(h).unwrap(),
                    b.is_weakly_m_sigma_permutable(h).unwrap(),
                    "{msg}"
                );
            }
            for n in lat.top().normal_subgroups() {
                let va = verify_theorem15(&a, n, cfg).unwrap();
                let vb = verify_theorem15(&b, n, cfg).unwrap();
                assert_eq!(va.status, vb.status, "{msg}");
                assert_eq!(va.quantified, vb.quantified, "{msg}");
            }
        }
    }
}
