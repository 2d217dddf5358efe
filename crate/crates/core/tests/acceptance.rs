//! Acceptance criteria, one PASS/FAIL line each. Runs without the libtest
//! harness so the lines appear in plain `cargo test` output.

mod common;

use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use hcembed::corpus::{build, corpus_up_to, default_corpus};
use hcembed::embeddings::SigmaContext;
use hcembed::harness::{
    example_a4, example_a5, example_module_product, implication_chain, sweep, verify_prop31,
    HarnessConfig, LemmaData, PartitionFamily, Status, SweepConfig, Target,
};
use hcembed::lattice::{Caps, SubgroupLattice};
use hcembed::series::{chief_series_through, random_chief_series};
use hcembed::sigma::SigmaPartition;

type Outcome = Result<String, String>;
/// Partitions run, instances checked and violations for one group.
type SuiteTally = Result<(usize, usize, Vec<String>), String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    ensure(
        elapsed < limit,
        format!("took {elapsed:.2?}, limit {limit:?}"),
    )
}

fn failed_claims(r: &hcembed::harness::ExampleReport) -> Vec<String> {
    r.checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| c.claim.clone())
        .collect()
}

fn a4_example() -> Outcome {
    let r = example_a4().map_err(|e| e.to_string())?;
    ensure(
        r.passed(),
        format!("failed claims: {:?}", failed_claims(&r)),
    )?;
    within(r.elapsed, Duration::from_secs(1))?;
    Ok(format!("{} claims in {:.2?}", r.checks.len(), r.elapsed))
}

fn a5_example() -> Outcome {
    let r = example_a5().map_err(|e| e.to_string())?;
    ensure(
        r.passed(),
        format!("failed claims: {:?}", failed_claims(&r)),
    )?;
    within(r.elapsed, Duration::from_secs(30))?;
    Ok(format!("{} claims in {:.2?}", r.checks.len(), r.elapsed))
}

/// Module product of order 1680, plus normal ⇒ modular and quasinormal ⇒
/// modular on every corpus group of order at most 200.
fn module_product_example() -> Outcome {
    let start = Instant::now();
    let r = example_module_product(5, 2, 7, 3).map_err(|e| e.to_string())?;
    ensure(
        r.passed(),
        format!("failed claims: {:?}", failed_claims(&r)),
    )?;
    let entries = corpus_up_to(200);
    let problems: Vec<String> = entries
        .par_iter()
        .map(|e| -> Result<Vec<String>, String> {
            let lat = SubgroupLattice::new(&build(&e.name).map_err(|x| x.to_string())?)
                .map_err(|x| x.to_string())?;
            let top = lat.top();
            let modular = top.modular_set().map_err(|x| x.to_string())?;
            let mut bad = Vec::new();
            for h in lat.ids() {
                let quasinormal = lat.ids().all(|k| lat.permutes(h, k));
                if (top.is_normal(h) || quasinormal) && !modular.contains(h.0) {
                    bad.push(format!("{}: {}", e.name, lat.describe(h)));
                }
            }
            Ok(bad)
        })
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .flatten()
        .collect();
    ensure(
        problems.is_empty(),
        format!("modularity scan misses: {problems:?}"),
    )?;
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(60))?;
    Ok(format!(
        "{} claims; modularity scan checked on {} groups; {:.2?}",
        r.checks.len(),
        entries.len(),
        elapsed
    ))
}

fn sweep_cfg(target: Target) -> SweepConfig {
    SweepConfig {
        max_order: 100,
        target,
        harness: HarnessConfig::default(),
        caps: Caps::default(),
        partitions: PartitionFamily::All,
    }
}

fn theorem_sweep() -> Outcome {
    let start = Instant::now();
    let r = sweep(&default_corpus(), &sweep_cfg(Target::Theorem15)).map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let c = r.counts;
    ensure(
        r.budget_notes.is_empty(),
        format!("budget notes: {:?}", r.budget_notes),
    )?;
    ensure(
        c.counterexample == 0,
        format!(
            "{} counterexamples: {:?}",
            c.counterexample, r.counterexamples
        ),
    )?;
    ensure(
        c.holds_non_vacuous >= 20,
        format!("only {} non-vacuous holds", c.holds_non_vacuous),
    )?;
    within(elapsed, Duration::from_secs(600))?;
    Ok(format!(
        "{} groups, {} cases, {} non-vacuous holds, 0 counterexamples, {:.1?}",
        r.groups, c.cases, c.holds_non_vacuous, elapsed
    ))
}

fn p_nilpotency_sweep() -> Outcome {
    let start = Instant::now();
    let r = sweep(&default_corpus(), &sweep_cfg(Target::Prop31)).map_err(|e| e.to_string())?;
    let c = r.counts;
    ensure(
        r.budget_notes.is_empty(),
        format!("budget notes: {:?}", r.budget_notes),
    )?;
    ensure(
        c.counterexample == 0,
        format!(
            "{} counterexamples: {:?}",
            c.counterexample, r.counterexamples
        ),
    )?;
    let lat = SubgroupLattice::new(&build("A4").map_err(|e| e.to_string())?)
        .map_err(|e| e.to_string())?;
    let ctx = SigmaContext::new(lat.top(), SigmaPartition::classical());
    let v = verify_prop31(&ctx, HarnessConfig::default()).map_err(|e| e.to_string())?;
    ensure(
        v.status == Status::HypothesisFails,
        format!("A4 classical reported {}", v.status),
    )?;
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(600))?;
    Ok(format!(
        "{} groups, {} cases, {} non-vacuous holds, 0 counterexamples, A4 gate closed, {:.1?}",
        r.groups, c.cases, c.holds_non_vacuous, elapsed
    ))
}

fn lemma_suites() -> Outcome {
    let start = Instant::now();
    let names = ["A4", "S4", "A5", "D8xC3", "S3xC5"];
    let results: Vec<SuiteTally> = names
        .par_iter()
        .map(|name| {
            let g = build(name).map_err(|e| e.to_string())?;
            let data = LemmaData::new(&g, Caps::default()).map_err(|e| e.to_string())?;
            let primes = hcembed::arith::prime_divisors(g.order());
            let parts = SigmaPartition::all_for_primes(&primes);
            let reports: Vec<_> = parts
                .par_iter()
                .map(|s| data.run(s, HarnessConfig::default()))
                .collect::<Result<_, _>>()
                .map_err(|e| e.to_string())?;
            let mut instances = 0;
            let mut bad = Vec::new();
            for r in &reports {
                for o in &r.outcomes {
                    instances += o.instances;
                    if o.budget_exhausted {
                        bad.push(format!(
                            "{name} σ={} {}: budget exhausted",
                            r.sigma, o.lemma
                        ));
                    }
                    for v in &o.violations {
                        bad.push(format!("{name} σ={} {}: {v}", r.sigma, o.lemma));
                    }
                }
            }
            Ok((reports.len(), instances, bad))
        })
        .collect();
    let mut partitions = 0;
    let mut instances = 0;
    let mut bad = Vec::new();
    for r in results {
        let (p, i, b) = r?;
        partitions += p;
        instances += i;
        bad.extend(b);
    }
    ensure(
        bad.is_empty(),
        format!("{} violations: {:?}", bad.len(), &bad[..bad.len().min(10)]),
    )?;
    let elapsed = start.elapsed();
    within(elapsed, Duration::from_secs(900))?;
    Ok(format!(
        "5 groups, {partitions} partitions, {instances} instances, 0 violations, {elapsed:.1?}"
    ))
}

fn oracles() -> Outcome {
    let start = Instant::now();
    let entries = corpus_up_to(200);
    let bad: Vec<String> = entries
        .par_iter()
        .map(|e| -> Vec<String> {
            let mut bad = Vec::new();
            let g = match build(&e.name) {
                Ok(g) => g,
                Err(err) => return vec![format!("{}: {err}", e.name)],
            };
            let enumerated = g.enumerate_elements().len() as u64;
            if g.order() != enumerated || g.order() != e.order {
                bad.push(format!(
                    "{}: bsgs {} vs enumeration {enumerated}",
                    e.name,
                    g.order()
                ));
            }
            let lat = match SubgroupLattice::new(&g) {
                Ok(l) => l,
                Err(err) => return vec![format!("{}: {err}", e.name)],
            };
            let oracle = common::lattice_size_by_join_closure(&g);
            if lat.len() != oracle {
                bad.push(format!(
                    "{}: lattice {} vs oracle {oracle}",
                    e.name,
                    lat.len()
                ));
            }
            let top = lat.top();
            let base = chief_series_through(&top, top.top())
                .expect("whole group is normal")
                .factor_multiset();
            let mut rng = ChaCha8Rng::seed_from_u64(e.order);
            for _ in 0..3 {
                let s = random_chief_series(&top, lat.trivial(), top.top(), &mut rng)
                    .expect("normal endpoints");
                if s.factor_multiset() != base {
                    bad.push(format!("{}: chief factors depend on the series", e.name));
                }
            }
            bad
        })
        .flatten()
        .collect();
    ensure(bad.is_empty(), format!("{bad:?}"))?;
    Ok(format!("{} groups, {:.1?}", entries.len(), start.elapsed()))
}

fn implications() -> Outcome {
    let start = Instant::now();
    let entries = corpus_up_to(60);
    let results: Vec<Result<(usize, Vec<String>), String>> = entries
        .par_iter()
        .map(|e| {
            let g = build(&e.name).map_err(|x| x.to_string())?;
            let lat = SubgroupLattice::new(&g).map_err(|x| x.to_string())?;
            let mut instances = 0;
            let mut bad = Vec::new();
            for sigma in hcembed::harness::partitions_for(g.order()) {
                let ctx = SigmaContext::new(lat.top(), sigma);
                let r = implication_chain(&ctx).map_err(|x| format!("{}: {x}", e.name))?;
                instances += r.instances;
                bad.extend(r.violations.into_iter().map(|v| format!("{}: {v}", e.name)));
            }
            Ok((instances, bad))
        })
        .collect();
    let mut instances = 0;
    let mut bad = Vec::new();
    for r in results {
        let (i, b) = r?;
        instances += i;
        bad.extend(b);
    }
    ensure(
        bad.is_empty(),
        format!("{} violations: {:?}", bad.len(), &bad[..bad.len().min(10)]),
    )?;
    Ok(format!(
        "{} groups, {instances} implications checked, 0 violations, {:.1?}",
        entries.len(),
        start.elapsed()
    ))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("A4 with σ = 2,3|*", a4_example),
        ("A5 with σ = 2,3|*", a5_example),
        ("module product of order 1680", module_product_example),
        ("hypercyclic-embedding sweep, order <= 100", theorem_sweep),
        ("p-nilpotency sweep, order <= 100", p_nilpotency_sweep),
        ("lemma suites on A4, S4, A5, D8xC3, S3xC5", lemma_suites),
        ("oracle equivalence, order <= 200", oracles),
        ("implication chain, order <= 60", implications),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("PASS {} {name}: {detail}", i + 1),
            Err(why) => {
                failures += 1;
                println!("FAIL {} {name}: {why}", i + 1);
            }
        }
    }
    if failures > 0 {
        std::process::exit(1);
    }
}
