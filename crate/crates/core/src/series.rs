//! Chief series and the structural predicates built on them: hypercyclic
//! embedding, hypercenter, supersolubility, p-nilpotency and the generalized
//! Fitting subgroup.
//!
//! Everything here works inside a [`View`], so the same code answers the
//! question for the whole group, for a subgroup acting as ambient group, or
//! for a quotient once it has its own lattice.

use fixedbitset::FixedBitSet;
use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::arith::{is_prime, is_prime_power, p_part, prime_divisors};
use crate::error::{Error, Result};
use crate::lattice::{SubId, View};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChiefFactor {
    pub lower: SubId,
    pub upper: SubId,
    pub order: usize,
    pub cyclic: bool,
}

/// Ascending chain of normal subgroups, each step a chief factor.
#[derive(Clone, Debug, Serialize)]
pub struct ChiefSeries {
    pub terms: Vec<SubId>,
    pub factors: Vec<ChiefFactor>,
}

impl ChiefSeries {
    /// Factor orders with cyclicity flags, sorted; invariant under the choice of series.
    pub fn factor_multiset(&self) -> Vec<(usize, bool)> {
        let mut v: Vec<(usize, bool)> = self.factors.iter().map(|f| (f.order, f.cyclic)).collect();
        v.sort_unstable();
        v
    }
}

fn require_normal(view: &View<'_>, e: SubId) -> Result<()> {
    if view.is_normal(e) {
        Ok(())
    } else {
        Err(Error::NotNormal(view.lattice().describe(e)))
    }
}

/// Normal subgroups `M` of the ambient group with `lower < M <= upper` that
/// are minimal with that property.
fn minimal_steps(view: &View<'_>, lower: SubId, upper: SubId) -> Vec<SubId> {
    let lat = view.lattice();
    let mut cands = lat.above(lower).clone();
    cands.intersect_with(lat.below(upper));
    cands.intersect_with(view.normal_set());
    cands.set(lower.0, false);
    cands
        .ones()
        .filter(|&m| {
            let mut between = lat.below(SubId(m)).clone();
            between.intersect_with(&cands);
            between.count_ones(..) == 1
        })
        .map(SubId)
        .collect()
}

/// `upper/lower` is cyclic.
fn quotient_is_cyclic(view: &View<'_>, lower: SubId, upper: SubId) -> bool {
    let lat = view.lattice();
    let t = lat.table();
    let low = lat.get(lower).elements();
    let index = lat.order(upper) / lat.order(lower);
    lat.get(upper).elements().ones().any(|g| {
        let mut x = g;
        let mut k = 1;
        while !low.contains(x) {
            x = t.mul(x, g);
            k += 1;
        }
        k == index
    })
}

fn series_with(
    view: &View<'_>,
    lower: SubId,
    upper: SubId,
    mut pick: impl FnMut(&[SubId]) -> SubId,
) -> ChiefSeries {
    let lat = view.lattice();
    let mut terms = vec![lower];
    let mut factors = Vec::new();
    let mut cur = lower;
    while cur != upper {
        let steps = minimal_steps(view, cur, upper);
        let next = pick(&steps);
        factors.push(ChiefFactor {
            lower: cur,
            upper: next,
            order: lat.order(next) / lat.order(cur),
            cyclic: quotient_is_cyclic(view, cur, next),
        });
        terms.push(next);
        cur = next;
    }
    ChiefSeries { terms, factors }
}

/// Chief series of the ambient group from `lower` up to `upper`, both normal.
pub fn chief_series_between(view: &View<'_>, lower: SubId, upper: SubId) -> Result<ChiefSeries> {
    require_normal(view, lower)?;
    require_normal(view, upper)?;
    if !view.lattice().le(lower, upper) {
        return Err(Error::Validation(
            "lower term is not below upper term".into(),
        ));
    }
    Ok(series_with(view, lower, upper, |s| s[0]))
}

/// Chief series of the ambient group through `e`, truncated at `e`.
pub fn chief_series_through(view: &View<'_>, e: SubId) -> Result<ChiefSeries> {
    chief_series_between(view, view.lattice().trivial(), e)
}

/// Same as [`chief_series_between`] but choosing each refinement step at random.
pub fn random_chief_series<R: Rng>(
    view: &View<'_>,
    lower: SubId,
    upper: SubId,
    rng: &mut R,
) -> Result<ChiefSeries> {
    require_normal(view, lower)?;
    require_normal(view, upper)?;
    Ok(series_with(view, lower, upper, |s| {
        *s.choose(rng).expect("nonempty refinement step")
    }))
}

/// `E <= Z_U(G)`: every chief factor of the ambient group below `e` has prime order.
pub fn is_hypercyclically_embedded(view: &View<'_>, e: SubId) -> Result<bool> {
    require_normal(view, e)?;
    if e == view.lattice().trivial() {
        return Ok(true);
    }
    let series = chief_series_through(view, e)?;
    Ok(series.factors.iter().all(|f| is_prime(f.order as u64)))
}

/// Every chief factor of the ambient group between `lower` and `upper` is cyclic.
pub fn chief_factors_cyclic_between(view: &View<'_>, lower: SubId, upper: SubId) -> Result<bool> {
    let series = chief_series_between(view, lower, upper)?;
    Ok(series.factors.iter().all(|f| is_prime(f.order as u64)))
}

pub fn is_supersoluble(view: &View<'_>) -> bool {
    is_hypercyclically_embedded(view, view.top()).expect("ambient group is normal in itself")
}

/// Upper central series `1 = Z_0 <= Z_1 <= ...` up to stabilization.
pub fn upper_central_series(view: &View<'_>) -> Vec<SubId> {
    let lat = view.lattice();
    let t = lat.table();
    let gens = view.generators();
    let mut terms = vec![lat.trivial()];
    loop {
        let cur = *terms.last().expect("nonempty");
        let low = lat.get(cur).elements();
        let mut set = FixedBitSet::with_capacity(t.len());
        for g in view.elements() {
            if gens.iter().all(|&s| low.contains(t.commutator(g, s))) {
                set.insert(g);
            }
        }
        let next = lat
            .id_of_set(&set)
            .expect("center of a quotient lifts to a subgroup");
        if next == cur {
            return terms;
        }
        terms.push(next);
    }
}

/// `Z_∞`: terminal member of the upper central series.
pub fn hypercenter(view: &View<'_>) -> SubId {
    *upper_central_series(view).last().expect("nonempty")
}

pub fn is_nilpotent(view: &View<'_>) -> bool {
    hypercenter(view) == view.top()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PNilpotency {
    pub p_nilpotent: bool,
    /// `p` does not divide the order, so the answer is trivially yes.
    pub vacuous: bool,
}

/// Has a normal subgroup of order `|G|/|G|_p`.
pub fn p_nilpotency(view: &View<'_>, p: u64) -> PNilpotency {
    let n = view.order() as u64;
    if !n.is_multiple_of(p) {
        return PNilpotency {
            p_nilpotent: true,
            vacuous: true,
        };
    }
    let target = (n / p_part(n, p)) as usize;
    let lat = view.lattice();
    let found = view
        .normal_set()
        .ones()
        .any(|x| lat.order(SubId(x)) == target);
    PNilpotency {
        p_nilpotent: found,
        vacuous: false,
    }
}

pub fn is_p_nilpotent(view: &View<'_>, p: u64) -> bool {
    p_nilpotency(view, p).p_nilpotent
}

/// `O_p`: largest normal p-subgroup.
pub fn largest_normal_p_subgroup(view: &View<'_>, p: u64) -> SubId {
    let lat = view.lattice();
    lat.join_all(
        view.normal_set()
            .ones()
            .map(SubId)
            .filter(|&x| p_part(lat.order(x) as u64, p) == lat.order(x) as u64),
    )
}

/// Fitting subgroup: product of the `O_p` over primes dividing the order.
pub fn fitting(view: &View<'_>) -> SubId {
    let lat = view.lattice();
    lat.join_all(
        prime_divisors(view.order() as u64)
            .into_iter()
            .map(|p| largest_normal_p_subgroup(view, p)),
    )
}

/// Subnormal quasisimple subgroups: perfect, with simple central quotient.
pub fn components(view: &View<'_>) -> Vec<SubId> {
    let lat = view.lattice();
    view.subnormal_subgroups()
        .into_iter()
        .filter(|&l| {
            if l == lat.trivial() {
                return false;
            }
            let lv = view.view(l);
            if lv.derived_subgroup() != l {
                return false;
            }
            let z = lv.center();
            if z == l {
                return false;
            }
            // L/Z(L) simple: the only normal subgroups of L above Z(L) are Z(L) and L.
            let mut above = lat.above(z).clone();
            above.intersect_with(lv.normal_set());
            above.count_ones(..) == 2
        })
        .collect()
}

/// `F*(E)` for `e` normal in the ambient group.
pub fn generalized_fitting(view: &View<'_>, e: SubId) -> Result<SubId> {
    require_normal(view, e)?;
    let ev = view.view(e);
    let lat = view.lattice();
    let f = fitting(&ev);
    let layer = lat.join_all(components(&ev));
    Ok(lat.join(f, layer))
}

/// Order is a power of a single prime (or 1).
pub fn is_p_group(view: &View<'_>) -> bool {
    view.order() == 1 || is_prime_power(view.order() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::build;
    use crate::lattice::SubgroupLattice;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn lattice(name: &str) -> std::sync::Arc<SubgroupLattice> {
        SubgroupLattice::new(&build(name).unwrap()).unwrap()
    }

    fn normal_of_order(view: &View<'_>, n: usize) -> SubId {
        view.normal_subgroups()
            .into_iter()
            .find(|&x| view.lattice().order(x) == n)
            .unwrap()
    }

    #[test]
    fn chief_series_examples() {
        let lat = lattice("A4");
        let top = lat.top();
        let v4 = normal_of_order(&top, 4);
        assert!(chief_series_through(&top, lat.trivial())
            .unwrap()
            .factors
            .is_empty());
        let s = chief_series_through(&top, v4).unwrap();
        assert_eq!(s.factors.len(), 1);
        assert_eq!(s.factors[0].order, 4);
        assert!(!s.factors[0].cyclic);
        assert!(!is_hypercyclically_embedded(&top, v4).unwrap());
        assert!(is_hypercyclically_embedded(&top, lat.trivial()).unwrap());

        let lat = lattice("S3");
        let top = lat.top();
        let s = chief_series_through(&top, top.top()).unwrap();
        let orders: Vec<usize> = s.factors.iter().map(|f| f.order).collect();
        assert_eq!(orders, vec![3, 2]);
        assert!(is_hypercyclically_embedded(&top, top.top()).unwrap());

        let some_c2 = lat.ids().find(|&x| lat.order(x) == 2).unwrap();
        assert!(matches!(
            chief_series_through(&top, some_c2),
            Err(Error::NotNormal(_))
        ));
    }

    #[test]
    fn hypercenters() {
        let lat = lattice("C12");
        assert_eq!(hypercenter(&lat.top()), lat.whole());
        let lat = lattice("A4");
        assert_eq!(hypercenter(&lat.top()), lat.trivial());
        let lat = lattice("D8");
        assert_eq!(hypercenter(&lat.top()), lat.whole());
        let lat = lattice("S3");
        assert_eq!(hypercenter(&lat.top()), lat.trivial());
    }

    #[test]
    fn supersolubility() {
        assert!(is_supersoluble(&lattice("S3").top()));
        assert!(!is_supersoluble(&lattice("A4").top()));
        assert!(is_supersoluble(&lattice("C30").top()));
        assert!(!is_supersoluble(&lattice("S4").top()));
    }

    #[test]
    fn p_nilpotency_examples() {
        assert!(is_p_nilpotent(&lattice("S3").top(), 2));
        assert!(!is_p_nilpotent(&lattice("A4").top(), 2));
        assert!(is_p_nilpotent(&lattice("D8").top(), 2));
        let v = p_nilpotency(&lattice("C3").top(), 2);
        assert!(v.p_nilpotent && v.vacuous);
    }

    #[test]
    fn generalized_fitting_examples() {
        let lat = lattice("A4");
        let top = lat.top();
        let f = generalized_fitting(&top, top.top()).unwrap();
        assert_eq!(lat.order(f), 4);
        assert_eq!(f, fitting(&top));

        let lat = lattice("A5");
        let top = lat.top();
        assert_eq!(generalized_fitting(&top, top.top()).unwrap(), lat.whole());
        assert_eq!(fitting(&top), lat.trivial());

        let lat = lattice("S4");
        let top = lat.top();
        assert_eq!(lat.order(generalized_fitting(&top, top.top()).unwrap()), 4);
    }

    #[test]
    fn jordan_holder_random_refinements() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for name in ["C2xC2xC2", "S4", "D8xC3", "C6xC6"] {
            let lat = lattice(name);
            let top = lat.top();
            let base = chief_series_through(&top, top.top())
                .unwrap()
                .factor_multiset();
            for _ in 0..3 {
                let s = random_chief_series(&top, lat.trivial(), top.top(), &mut rng).unwrap();
                assert_eq!(s.factor_multiset(), base, "{name}");
            }
        }
    }
}
