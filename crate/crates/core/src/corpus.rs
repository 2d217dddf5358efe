//! Group builders, the named example groups, the built-in corpus and catalog
//! files.
//!
//! Builders act on small point sets: products act on disjoint unions, linear
//! and affine groups on vectors over a prime field. Only the non-split
//! dicyclic family uses a regular representation.

use std::path::Path;
use std::sync::Arc;

use serde::Serialize;

use crate::arith::{gcd, is_prime, multiplicative_order, prime_divisors};
use crate::error::{Error, Result};
use crate::permgroup::{GroupHandle, Permutation, SubgroupRef};

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParams(msg.into())
}

fn perm(images: Vec<usize>) -> Permutation {
    Permutation::from_images(images).expect("builder produces bijections")
}

fn group(degree: usize, gens: Vec<Permutation>) -> Result<Arc<GroupHandle>> {
    GroupHandle::from_generators(degree, gens)
}

pub fn cyclic(n: usize) -> Result<Arc<GroupHandle>> {
    if n == 0 {
        return Err(invalid("cyclic group of order 0"));
    }
    if n == 1 {
        return group(1, Vec::new());
    }
    group(n, vec![perm((0..n).map(|i| (i + 1) % n).collect())])
}

/// Dihedral group of order `order` (so `D8` is the symmetry group of a square).
pub fn dihedral(order: usize) -> Result<Arc<GroupHandle>> {
    if order < 2 || !order.is_multiple_of(2) {
        return Err(invalid(format!(
            "dihedral order {order} must be even and at least 2"
        )));
    }
    let m = order / 2;
    match m {
        1 => cyclic(2),
        2 => group(4, vec![perm(vec![1, 0, 3, 2]), perm(vec![2, 3, 0, 1])]),
        _ => group(
            m,
            vec![
                perm((0..m).map(|i| (i + 1) % m).collect()),
                perm((0..m).map(|i| (m - i) % m).collect()),
            ],
        ),
    }
}

pub fn symmetric(n: usize) -> Result<Arc<GroupHandle>> {
    if n == 0 {
        return Err(invalid("symmetric group on 0 points"));
    }
    if n == 1 {
        return group(1, Vec::new());
    }
    let mut swap: Vec<usize> = (0..n).collect();
    swap.swap(0, 1);
    group(
        n,
        vec![perm(swap), perm((0..n).map(|i| (i + 1) % n).collect())],
    )
}

pub fn alternating(n: usize) -> Result<Arc<GroupHandle>> {
    if n == 0 {
        return Err(invalid("alternating group on 0 points"));
    }
    if n < 3 {
        return group(n, Vec::new());
    }
    let three = Permutation::from_cycles(n, &[vec![0, 1, 2]])?;
    if n == 3 {
        return group(n, vec![three]);
    }
    let long: Vec<usize> = if n % 2 == 1 {
        (0..n).collect()
    } else {
        (1..n).collect()
    };
    let long = Permutation::from_cycles(n, &[long])?;
    group(n, vec![three, long])
}

/// Right regular representation of a group given by its multiplication on `0..n`.
fn regular(
    n: usize,
    gens: &[usize],
    mul: impl Fn(usize, usize) -> usize,
) -> Result<Arc<GroupHandle>> {
    let gens = gens
        .iter()
        .map(|&g| perm((0..n).map(|h| mul(h, g)).collect()))
        .collect();
    group(n, gens)
}

/// Dicyclic group of order `4n`: `<a, x | a^2n, x^2 = a^n, a^x = a^-1>`.
pub fn dicyclic(order: usize) -> Result<Arc<GroupHandle>> {
    if order < 8 || !order.is_multiple_of(4) {
        return Err(invalid(format!(
            "dicyclic order {order} must be a multiple of 4, at least 8"
        )));
    }
    let n2 = order / 2;
    let n = order / 4;
    // a^k x^e is stored as k + n2 * e.
    let mul = |g: usize, h: usize| {
        let (k, e) = (g % n2, g / n2);
        let (l, f) = (h % n2, h / n2);
        if e == 0 {
            (k + l) % n2 + n2 * f
        } else {
            let k2 = (k + n2 - l) % n2;
            if f == 0 {
                k2 + n2
            } else {
                (k2 + n) % n2
            }
        }
    };
    regular(order, &[1, n2], mul)
}

pub fn quaternion8() -> Result<Arc<GroupHandle>> {
    dicyclic(8)
}

pub fn elementary_abelian(p: usize, rank: usize) -> Result<Arc<GroupHandle>> {
    if !is_prime(p as u64) {
        return Err(invalid(format!("{p} is not prime")));
    }
    direct_product(&vec![cyclic(p)?; rank.max(1)])
}

/// Direct product acting on the disjoint union of the factors' point sets.
pub fn direct_product(factors: &[Arc<GroupHandle>]) -> Result<Arc<GroupHandle>> {
    if factors.is_empty() {
        return cyclic(1);
    }
    let degree: usize = factors.iter().map(|f| f.degree()).sum();
    let mut gens = Vec::new();
    let mut offset = 0;
    for f in factors {
        for g in f.generators() {
            gens.push(g.shifted(offset, degree));
        }
        offset += f.degree();
    }
    group(degree, gens)
}

/// `C_n ⋊ C_m` with the generator of `C_m` acting as `x -> kx`, on `Z_n ⊔ Z_m`.
pub fn semidirect(n: usize, k: usize, m: usize) -> Result<Arc<GroupHandle>> {
    if n < 2 || m < 2 {
        return Err(invalid("semidirect factors must be nontrivial"));
    }
    let (nn, kk) = (n as u64, k as u64 % n as u64);
    if gcd(kk, nn) != 1 {
        return Err(invalid(format!("{k} is not a unit modulo {n}")));
    }
    let ord = multiplicative_order(kk, nn).unwrap_or(1);
    if !(m as u64).is_multiple_of(ord) {
        return Err(invalid(format!(
            "{k} has order {ord} modulo {n}, which does not divide {m}"
        )));
    }
    let deg = n + m;
    let a: Vec<usize> = (0..n).map(|i| (i + 1) % n).chain(n..deg).collect();
    let b: Vec<usize> = (0..n)
        .map(|i| (i * k) % n)
        .chain((0..m).map(|j| n + (j + 1) % m))
        .collect();
    group(deg, vec![perm(a), perm(b)])
}

/// Modular p-group `C_{p^(e-1)} ⋊ C_p` of order `p^e`, `e >= 3`.
pub fn modular_p_group(order: usize) -> Result<Arc<GroupHandle>> {
    let ps = prime_divisors(order as u64);
    if ps.len() != 1 || order < 8 {
        return Err(invalid(format!(
            "{order} is not a prime power p^e with e >= 3"
        )));
    }
    let p = ps[0] as usize;
    if order < p * p * p || order == 8 {
        return Err(invalid(format!(
            "{order} is too small for a modular p-group"
        )));
    }
    let n = order / p;
    semidirect(n, 1 + n / p, p)
}

/// Semidihedral group of order `2^e`, `e >= 4`.
pub fn semidihedral(order: usize) -> Result<Arc<GroupHandle>> {
    if order < 16 || !order.is_power_of_two() {
        return Err(invalid(format!(
            "semidihedral order {order} must be a power of 2, at least 16"
        )));
    }
    let n = order / 2;
    semidirect(n, n / 2 - 1, 2)
}

/// Frobenius group `C_p ⋊ C_m` of order `n = pm` with `m | p-1`, `m > 1`.
pub fn frobenius(n: usize) -> Result<Arc<GroupHandle>> {
    for p in prime_divisors(n as u64).into_iter().rev() {
        let m = n as u64 / p;
        if m > 1 && (p - 1) % m == 0 {
            let g = (2..p)
                .find(|&g| multiplicative_order(g, p) == Some(p - 1))
                .unwrap_or(1);
            let k = crate::arith::pow_mod(g, (p - 1) / m, p);
            let p = p as usize;
            let mul = perm((0..p).map(|i| (i * k as usize) % p).collect());
            let shift = perm((0..p).map(|i| (i + 1) % p).collect());
            return group(p, vec![shift, mul]);
        }
    }
    Err(invalid(format!(
        "no Frobenius group C_p ⋊ C_m of order {n}"
    )))
}

/// Vectors of `F_p^dim`, encoded base p.
struct Space {
    p: usize,
    dim: usize,
}

impl Space {
    fn size(&self) -> usize {
        self.p.pow(self.dim as u32)
    }

    fn decode(&self, mut v: usize) -> Vec<usize> {
        let mut out = vec![0; self.dim];
        for c in out.iter_mut() {
            *c = v % self.p;
            v /= self.p;
        }
        out
    }

    fn encode(&self, c: &[usize]) -> usize {
        c.iter().rev().fold(0, |acc, &x| acc * self.p + x % self.p)
    }

    fn apply(&self, m: &[Vec<usize>], v: usize) -> usize {
        let c = self.decode(v);
        let out: Vec<usize> = m
            .iter()
            .map(|row| row.iter().zip(&c).map(|(a, b)| a * b).sum::<usize>() % self.p)
            .collect();
        self.encode(&out)
    }
}

/// Matrix group over `F_p` acting on nonzero vectors.
pub fn linear_group(p: usize, mats: &[Vec<Vec<usize>>]) -> Result<Arc<GroupHandle>> {
    let dim = mats.first().map_or(1, |m| m.len());
    let s = Space { p, dim };
    let n = s.size() - 1;
    let gens = mats
        .iter()
        .map(|m| Permutation::from_images((1..=n).map(|v| s.apply(m, v) - 1).collect()))
        .collect::<Result<Vec<_>>>()
        .map_err(|_| invalid("matrix is not invertible"))?;
    group(n, gens)
}

/// Translations of `F_p^dim` together with the given matrices.
pub fn affine_group(p: usize, dim: usize, mats: &[Vec<Vec<usize>>]) -> Result<Arc<GroupHandle>> {
    let s = Space { p, dim };
    let n = s.size();
    let mut gens = Vec::new();
    for i in 0..dim {
        let mut e = vec![0; dim];
        e[i] = 1;
        gens.push(perm(
            (0..n)
                .map(|v| {
                    let mut c = s.decode(v);
                    c[i] = (c[i] + 1) % p;
                    s.encode(&c)
                })
                .collect(),
        ));
    }
    for m in mats {
        gens.push(
            Permutation::from_images((0..n).map(|v| s.apply(m, v)).collect())
                .map_err(|_| invalid("matrix is not invertible"))?,
        );
    }
    group(n, gens)
}

/// `PSL(2,p)` on the projective line; point `p` is infinity.
pub fn psl2(p: usize) -> Result<Arc<GroupHandle>> {
    if !is_prime(p as u64) || p < 3 {
        return Err(invalid(format!("PSL(2,{p}) needs an odd prime")));
    }
    let inv = |z: usize| (1..p).find(|&w| z * w % p == 1).expect("field");
    let shift: Vec<usize> = (0..p).map(|z| (z + 1) % p).chain([p]).collect();
    let flip: Vec<usize> = (0..p)
        .map(|z| if z == 0 { p } else { (p - inv(z)) % p })
        .chain([0])
        .collect();
    group(p + 1, vec![perm(shift), perm(flip)])
}

/// Polynomials over `F_q`, lowest coefficient first.
fn poly_rem(a: &[u64], f: &[u64], q: u64) -> Vec<u64> {
    let mut r = a.to_vec();
    let d = f.len() - 1;
    while r.len() > d {
        let lead = r.pop().expect("nonempty");
        if lead != 0 {
            let shift = r.len() - d;
            for (i, &c) in f[..d].iter().enumerate() {
                r[shift + i] = (r[shift + i] + (q - c) * lead) % q;
            }
        }
    }
    r
}

/// Monic irreducible factor of degree `ord_p(q)` of the p-th cyclotomic polynomial over `F_q`.
fn cyclotomic_factor(q: u64, p: u64) -> Vec<u64> {
    let d = multiplicative_order(q, p).expect("q != p") as usize;
    let phi = vec![1; p as usize];
    for code in 0..q.pow(d as u32) {
        let mut f: Vec<u64> = (0..d).map(|i| code / q.pow(i as u32) % q).collect();
        f.push(1);
        if poly_rem(&phi, &f, q).iter().all(|&c| c == 0) {
            return f;
        }
    }
    unreachable!("cyclotomic polynomial has a factor of degree ord_p(q)")
}

/// `F_q^d ⋊ C_p` with `C_p` acting faithfully and irreducibly, `d = ord_p(q)`.
pub fn module_semidirect(q: usize, p: usize) -> Result<Arc<GroupHandle>> {
    Ok(module_parts(q, p)?.0)
}

/// The group plus the translation and the order-p linear map.
fn module_parts(q: usize, p: usize) -> Result<(Arc<GroupHandle>, Permutation, Permutation)> {
    if !is_prime(q as u64) || !is_prime(p as u64) || p == q {
        return Err(invalid(format!("module F_{q} C_{p} needs distinct primes")));
    }
    let f = cyclotomic_factor(q as u64, p as u64);
    let d = f.len() - 1;
    let s = Space { p: q, dim: d };
    let n = s.size();
    let translate = perm(
        (0..n)
            .map(|v| {
                let mut c = s.decode(v);
                c[0] = (c[0] + 1) % q;
                s.encode(&c)
            })
            .collect(),
    );
    // Multiplication by x in F_q[x]/(f).
    let times_x = perm(
        (0..n)
            .map(|v| {
                let mut c: Vec<u64> = s.decode(v).into_iter().map(|x| x as u64).collect();
                c.insert(0, 0);
                let r = poly_rem(&c, &f, q as u64);
                s.encode(&r.into_iter().map(|x| x as usize).collect::<Vec<_>>())
            })
            .collect(),
    );
    let g = group(n, vec![translate.clone(), times_x.clone()])?;
    Ok((g, translate, times_x))
}

/// The group `(Q ⋊ C_p) × (C_r ⋊ C_t)` with its named subgroups.
#[derive(Clone, Debug)]
pub struct Example132 {
    pub group: Arc<GroupHandle>,
    /// `d` with `|Q| = q^d`.
    pub dimension: usize,
    pub q_module: SubgroupRef,
    /// `V = Q ⋊ C_p`.
    pub v: SubgroupRef,
    pub c_r: SubgroupRef,
    /// `A = C_t`.
    pub a: SubgroupRef,
    /// A second subgroup of order t, different from `A`.
    pub t: SubgroupRef,
    /// Order-q subgroup of `Q`.
    pub b: SubgroupRef,
}

/// Builds the order `q^d p r t` group; `require_q_divides_p_minus_1` enforces `q | p-1`.
pub fn example132(
    p: usize,
    q: usize,
    r: usize,
    t: usize,
    require_q_divides_p_minus_1: bool,
) -> Result<Example132> {
    let ps = [p, q, r, t];
    if ps.iter().any(|&x| !is_prime(x as u64)) {
        return Err(invalid(format!(
            "ex132({p},{q},{r},{t}): parameters must be primes"
        )));
    }
    for i in 0..4 {
        for j in i + 1..4 {
            if ps[i] == ps[j] {
                return Err(invalid(format!(
                    "ex132({p},{q},{r},{t}): primes must be distinct"
                )));
            }
        }
    }
    if !(r - 1).is_multiple_of(t) {
        return Err(invalid(format!(
            "ex132: t = {t} does not divide r - 1 = {}",
            r - 1
        )));
    }
    if require_q_divides_p_minus_1 && !(p - 1).is_multiple_of(q) {
        return Err(invalid(format!(
            "ex132: q = {q} does not divide p - 1 = {}",
            p - 1
        )));
    }
    let (v_group, translate, times_x) = module_parts(q, p)?;
    let dimension = (multiplicative_order(q as u64, p as u64).expect("q != p")) as usize;
    let nv = v_group.degree();
    let deg = nv + r;
    let k = {
        let rr = r as u64;
        let g = (2..rr)
            .find(|&g| multiplicative_order(g, rr) == Some(rr - 1))
            .expect("primitive root");
        crate::arith::pow_mod(g, (rr - 1) / t as u64, rr) as usize
    };
    let tau = perm((0..nv).chain((0..r).map(|i| nv + (i + 1) % r)).collect());
    let mu = perm((0..nv).chain((0..r).map(|i| nv + (i * k) % r)).collect());
    let translate = translate.shifted(0, deg);
    let times_x = times_x.shifted(0, deg);
    let group = GroupHandle::from_generators(
        deg,
        vec![translate.clone(), times_x.clone(), tau.clone(), mu.clone()],
    )?;

    let mut q_gens = vec![translate.clone()];
    let mut cur = translate.clone();
    for _ in 1..dimension {
        cur = cur.conjugate_by(&times_x);
        q_gens.push(cur.clone());
    }
    let q_module = group.subgroup(&q_gens)?;
    let v = group.subgroup(&[translate.clone(), times_x])?;
    let c_r = group.subgroup(std::slice::from_ref(&tau))?;
    let a = group.subgroup(std::slice::from_ref(&mu))?;
    let t_sub = group.subgroup(&[mu.conjugate_by(&tau)])?;
    let b = group.subgroup(&[translate])?;
    Ok(Example132 {
        group,
        dimension,
        q_module,
        v,
        c_r,
        a,
        t: t_sub,
        b,
    })
}

fn square(rows: [[usize; 2]; 2]) -> Vec<Vec<usize>> {
    rows.iter().map(|r| r.to_vec()).collect()
}

fn parse_args(name: &str, args: &str) -> Result<Vec<usize>> {
    args.split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| invalid(format!("bad argument {s:?} in {name}")))
        })
        .collect()
}

fn split_product(expr: &str) -> Vec<&str> {
    let bytes = expr.as_bytes();
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, &c) in bytes.iter().enumerate() {
        match c {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b'*' if depth == 0 => {
                out.push(&expr[start..i]);
                start = i + 1;
            }
            b'x' if depth == 0 && bytes.get(i + 1).is_some_and(|n| n.is_ascii_uppercase()) => {
                out.push(&expr[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&expr[start..]);
    out
}

fn number_after(s: &str, prefix: &str) -> Option<usize> {
    s.strip_prefix(prefix)?.parse().ok()
}

fn build_factor(f: &str) -> Result<Arc<GroupHandle>> {
    let f = f.trim();
    if let Some((base, exp)) = f.split_once('^') {
        let k: usize = exp
            .parse()
            .map_err(|_| invalid(format!("bad exponent in {f:?}")))?;
        let g = build_factor(base)?;
        return direct_product(&vec![g; k.max(1)]);
    }
    if let Some(open) = f.find('(') {
        let name = &f[..open];
        let args = f[open + 1..]
            .strip_suffix(')')
            .ok_or_else(|| invalid(format!("unbalanced parentheses in {f:?}")))?;
        let a = parse_args(f, args)?;
        return match (name, a.as_slice()) {
            ("ex132", &[p, q, r, t]) => Ok(example132(p, q, r, t, true)?.group),
            ("ex132relaxed", &[p, q, r, t]) => Ok(example132(p, q, r, t, false)?.group),
            ("sd", &[n, k, m]) => semidirect(n, k, m),
            ("aff", &[q, p]) => module_semidirect(q, p),
            ("PSL", &[2, p]) => psl2(p),
            ("E", &[p, k]) => elementary_abelian(p, k),
            _ => Err(invalid(format!("unknown group expression {f:?}"))),
        };
    }
    match f {
        "1" => return cyclic(1),
        "V4" => return dihedral(4),
        "Q8" => return quaternion8(),
        "He3" => return affine_group(3, 2, &[square([[1, 1], [0, 1]])]),
        "SL23" => return linear_group(3, &[square([[1, 1], [0, 1]]), square([[0, 2], [1, 0]])]),
        "GL23" => {
            return linear_group(
                3,
                &[
                    square([[1, 1], [0, 1]]),
                    square([[0, 2], [1, 0]]),
                    square([[2, 0], [0, 1]]),
                ],
            )
        }
        "PSL27" => return psl2(7),
        "V80" => return module_semidirect(2, 5),
        "AGL18" => return module_semidirect(2, 7),
        _ => {}
    }
    if let Some(n) = number_after(f, "Dic") {
        return dicyclic(n);
    }
    if let Some(n) = number_after(f, "SD") {
        return semidihedral(n);
    }
    if let Some(n) = number_after(f, "C") {
        return cyclic(n);
    }
    if let Some(n) = number_after(f, "D") {
        return dihedral(n);
    }
    if let Some(n) = number_after(f, "S") {
        return symmetric(n);
    }
    if let Some(n) = number_after(f, "A") {
        return alternating(n);
    }
    if let Some(n) = number_after(f, "Q") {
        if n.is_power_of_two() {
            return dicyclic(n);
        }
    }
    if let Some(n) = number_after(f, "M") {
        return modular_p_group(n);
    }
    if let Some(n) = number_after(f, "F") {
        return frobenius(n);
    }
    Err(invalid(format!("unknown group name {f:?}")))
}

/// Builds a group from a name such as `A4`, `D8xC3`, `C2^3`, `sd(7,2,3)` or
/// `ex132(5,2,7,3)`. Factors are joined by `x` (before an uppercase letter) or `*`.
pub fn build(expr: &str) -> Result<Arc<GroupHandle>> {
    let factors = split_product(expr.trim());
    if factors.len() == 1 {
        return build_factor(factors[0]);
    }
    let built = factors
        .into_iter()
        .map(build_factor)
        .collect::<Result<Vec<_>>>()?;
    direct_product(&built)
}

/// A named member of the built-in corpus.
#[derive(Clone, Debug, Serialize)]
pub struct CorpusEntry {
    pub name: String,
    pub order: u64,
}

const NONABELIAN: &[(&str, u64)] = &[
    ("Q8", 8),
    ("A4", 12),
    ("Dic12", 12),
    ("Q16", 16),
    ("SD16", 16),
    ("M16", 16),
    ("sd(4,3,4)", 16),
    ("D8xC2", 16),
    ("Q8xC2", 16),
    ("S3xC3", 18),
    ("sd(3,2,6)", 18),
    ("F20", 20),
    ("Dic20", 20),
    ("F21", 21),
    ("S4", 24),
    ("SL23", 24),
    ("A4xC2", 24),
    ("D8xC3", 24),
    ("Q8xC3", 24),
    ("Dic12xC2", 24),
    ("S3xC4", 24),
    ("sd(3,2,8)", 24),
    ("He3", 27),
    ("M27", 27),
    ("S3xC5", 30),
    ("D10xC3", 30),
    ("S3xS3", 36),
    ("A4xC3", 36),
    ("sd(9,8,4)", 36),
    ("F42", 42),
    ("S3xC7", 42),
    ("GL23", 48),
    ("S4xC2", 48),
    ("A4xC4", 48),
    ("SL23xC2", 48),
    ("D8xS3", 48),
    ("F55", 55),
    ("AGL18", 56),
    ("A5", 60),
    ("A4xC5", 60),
    ("S3xD10", 60),
    ("F20xC3", 60),
    ("D8xD8", 64),
    ("A4xS3", 72),
    ("V80", 80),
    ("A4xC7", 84),
    ("S3xC3xC5", 90),
    ("S5", 120),
    ("A5xC2", 120),
    ("PSL27", 168),
    ("ex132(5,2,7,3)", 1680),
];

const HIGHER_RANK_ABELIAN: &[(&str, u64)] = &[
    ("C2^3", 8),
    ("C2xC2xC4", 16),
    ("C2^4", 16),
    ("C2xC2xC6", 24),
    ("C3^3", 27),
    ("C2xC4xC4", 32),
    ("C2xC2xC8", 32),
    ("C2^3xC4", 32),
    ("C2^5", 32),
    ("C2xC2xC10", 40),
    ("C2xC2xC12", 48),
    ("C2xC6xC6", 72),
    ("C3^4", 81),
];

/// Names and orders of the built-in corpus, sorted by order then name.
pub fn default_corpus() -> Vec<CorpusEntry> {
    let mut out = Vec::new();
    let mut push = |name: String, order: u64| out.push(CorpusEntry { name, order });
    for n in 1..=100 {
        push(format!("C{n}"), n);
    }
    for n in (6..=100).step_by(2) {
        push(format!("D{n}"), n);
    }
    for m in 2..=10u64 {
        let mut n = m;
        while m * n <= 100 {
            push(format!("C{m}xC{n}"), m * n);
            n += m;
        }
    }
    for &(name, order) in HIGHER_RANK_ABELIAN.iter().chain(NONABELIAN) {
        push(name.to_string(), order);
    }
    out.sort_by(|a, b| a.order.cmp(&b.order).then_with(|| a.name.cmp(&b.name)));
    out
}

/// Corpus entries with order at most `max_order`.
pub fn corpus_up_to(max_order: u64) -> Vec<CorpusEntry> {
    default_corpus()
        .into_iter()
        .filter(|e| e.order <= max_order)
        .collect()
}

/// One line of a catalog file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CatalogEntry {
    pub name: String,
    pub degree: usize,
    pub generators: Vec<String>,
    pub expected_order: Option<u64>,
    pub tags: Vec<String>,
}

impl CatalogEntry {
    pub fn build(&self) -> Result<Arc<GroupHandle>> {
        let gens = self
            .generators
            .iter()
            .map(|g| Permutation::parse_cycles(self.degree, g))
            .collect::<Result<Vec<_>>>()?;
        let g = GroupHandle::from_generators(self.degree, gens)?;
        if let Some(expected) = self.expected_order {
            if g.order() != expected {
                return Err(Error::OrderMismatch {
                    name: self.name.clone(),
                    expected,
                    actual: g.order(),
                });
            }
        }
        Ok(g)
    }

    /// Catalog line for `g` under `name`.
    pub fn from_group(name: &str, g: &GroupHandle) -> Self {
        CatalogEntry {
            name: name.to_string(),
            degree: g.degree(),
            generators: g.generators().iter().map(|p| p.to_string()).collect(),
            expected_order: Some(g.order()),
            tags: Vec::new(),
        }
    }

    pub fn to_line(&self) -> String {
        let mut line = format!(
            "{}; {}; {}",
            self.name,
            self.degree,
            self.generators.join(", ")
        );
        if let Some(o) = self.expected_order {
            line.push_str(&format!("; {o}"));
        } else if !self.tags.is_empty() {
            line.push_str("; ");
        }
        if !self.tags.is_empty() {
            line.push_str(&format!("; {}", self.tags.join(" ")));
        }
        line
    }
}

/// Splits on commas outside parentheses.
pub fn split_generators(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for c in s.chars() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                out.push(cur.trim().to_string());
                cur.clear();
                continue;
            }
            _ => {}
        }
        cur.push(c);
    }
    if !cur.trim().is_empty() {
        out.push(cur.trim().to_string());
    }
    out.retain(|g| !g.is_empty());
    out
}

/// Parses catalog text: `name; degree; gen1, gen2; [order]; [tags]` per line, `#` comments.
pub fn parse_catalog(text: &str) -> Result<Vec<CatalogEntry>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| Error::Parse {
            line: line_no,
            message,
        };
        let fields: Vec<&str> = line.split(';').map(str::trim).collect();
        if fields.len() < 3 || fields.len() > 5 {
            return Err(err(format!(
                "expected 3 to 5 ';'-separated fields, found {}",
                fields.len()
            )));
        }
        let name = fields[0].to_string();
        if name.is_empty() {
            return Err(err("empty name".into()));
        }
        let degree: usize = fields[1]
            .parse()
            .map_err(|_| err(format!("bad degree {:?}", fields[1])))?;
        if degree == 0 {
            return Err(err("degree must be positive".into()));
        }
        let generators = split_generators(fields[2]);
        for g in &generators {
            Permutation::parse_cycles(degree, g).map_err(|e| err(format!("entry {name}: {e}")))?;
        }
        let expected_order = match fields.get(3) {
            Some(s) if !s.is_empty() => {
                Some(s.parse().map_err(|_| err(format!("bad order {s:?}")))?)
            }
            _ => None,
        };
        let tags = fields
            .get(4)
            .map(|s| s.split_whitespace().map(str::to_string).collect())
            .unwrap_or_default();
        out.push(CatalogEntry {
            name,
            degree,
            generators,
            expected_order,
            tags,
        });
    }
    Ok(out)
}

/// Reads, builds and order-checks every entry of a catalog file.
pub fn load_catalog(path: &Path) -> Result<Vec<(CatalogEntry, Arc<GroupHandle>)>> {
    let text = std::fs::read_to_string(path)?;
    let entries = parse_catalog(&text)?;
    use rayon::prelude::*;
    entries
        .into_par_iter()
        .map(|e| {
            let g = e.build()?;
            Ok((e, g))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn order(name: &str) -> u64 {
        build(name).unwrap().order()
    }

    #[test]
    fn named_orders() {
        assert_eq!(order("C1"), 1);
        assert_eq!(order("A4"), 12);
        assert_eq!(order("A5"), 60);
        assert_eq!(order("S4"), 24);
        assert_eq!(order("D8"), 8);
        assert_eq!(order("D4"), 4);
        assert_eq!(order("Q8"), 8);
        assert_eq!(order("PSL27"), 168);
        assert_eq!(order("PSL(2,5)"), 60);
        assert_eq!(order("V80"), 80);
        assert_eq!(order("AGL18"), 56);
        assert_eq!(order("aff(2,3)"), 12);
        assert_eq!(order("C2^3"), 8);
        assert_eq!(order("D8xC3"), 24);
        assert_eq!(order("A4*C3"), 36);
    }

    #[test]
    fn every_corpus_entry_has_its_order() {
        for e in default_corpus() {
            assert_eq!(order(&e.name), e.order, "{}", e.name);
        }
    }

    #[test]
    fn isomorphism_type_spot_checks() {
        let exps = |name: &str| -> Vec<u32> {
            let g = build(name).unwrap();
            let t = g.table().unwrap().clone();
            let mut v: Vec<u32> = (0..t.len()).map(|i| t.element_order(i)).collect();
            v.sort_unstable();
            v
        };
        // Q8 has one involution, D8 has five.
        assert_eq!(exps("Q8").iter().filter(|&&o| o == 2).count(), 1);
        assert_eq!(exps("D8").iter().filter(|&&o| o == 2).count(), 5);
        // Q16: one involution; SD16: five; M16: three.
        assert_eq!(exps("Q16").iter().filter(|&&o| o == 2).count(), 1);
        assert_eq!(exps("SD16").iter().filter(|&&o| o == 2).count(), 5);
        assert_eq!(exps("M16").iter().filter(|&&o| o == 2).count(), 3);
        // He3 has exponent 3, M27 has elements of order 9.
        assert_eq!(*exps("He3").last().unwrap(), 3);
        assert_eq!(*exps("M27").last().unwrap(), 9);
        // SL(2,3) has a unique involution.
        assert_eq!(exps("SL23").iter().filter(|&&o| o == 2).count(), 1);
        // GL(2,3) has elements of order 8.
        assert_eq!(*exps("GL23").last().unwrap(), 8);
        // A5 and PSL(2,5) have the same element-order statistics.
        assert_eq!(exps("A5"), exps("PSL(2,5)"));
    }

    #[test]
    fn invalid_parameters() {
        assert!(cyclic(0).is_err());
        assert!(dihedral(7).is_err());
        assert!(semidirect(7, 2, 2).is_err());
        assert!(build("Foo3").is_err());
        assert!(build("ex132(3,2,7,2)").is_err());
        assert!(build("ex132(3,2,7,3)").is_err());
    }

    #[test]
    fn example_132_structure() {
        let ex = example132(5, 2, 7, 3, true).unwrap();
        assert_eq!(ex.group.order(), 1680);
        assert_eq!(ex.group.degree(), 23);
        assert_eq!(ex.dimension, 4);
        assert_eq!(ex.q_module.order(), 16);
        assert_eq!(ex.v.order(), 80);
        assert!(ex.v.is_normal());
        assert_eq!(ex.c_r.order(), 7);
        assert_eq!(ex.a.order(), 3);
        assert_eq!(ex.t.order(), 3);
        assert_ne!(ex.a, ex.t);
        assert!(ex.a.intersection(&ex.v).unwrap().is_trivial());
        assert_eq!(ex.b.order(), 2);
        assert!(ex.b.is_subgroup_of(&ex.q_module));
        assert_eq!(ex.a.join(&ex.b).unwrap().order(), 6);
        // p does not need to exceed q once the constraint is relaxed.
        assert!(example132(3, 5, 7, 2, false).is_ok());
        assert!(example132(3, 5, 7, 2, true).is_err());
    }

    #[test]
    fn module_action_is_irreducible() {
        for (q, p) in [(2, 3), (2, 5), (2, 7), (3, 2), (3, 5)] {
            let (g, translate, times_x) = module_parts(q, p).unwrap();
            let q_gens: Vec<Permutation> = {
                let d = multiplicative_order(q as u64, p as u64).unwrap();
                let mut v = vec![translate.clone()];
                for _ in 1..d {
                    let next = v.last().unwrap().conjugate_by(&times_x);
                    v.push(next);
                }
                v
            };
            let module = g.subgroup(&q_gens).unwrap();
            let cp = g.subgroup(&[times_x]).unwrap();
            // Every nontrivial C_p-invariant subgroup of Q is Q.
            let t = g.table().unwrap().clone();
            for e in module.elements().ones().skip(1) {
                let sub = g.subgroup_from_indices(&[e]);
                let mut gens = vec![e];
                for c in cp.elements().ones() {
                    gens.push(t.conj(e, c));
                }
                let closed = g.subgroup_from_indices(&gens);
                assert_eq!(closed, module, "q={q} p={p}");
                assert!(sub.is_subgroup_of(&module));
            }
        }
    }

    #[test]
    fn catalog_round_trip() {
        assert!(parse_catalog("").unwrap().is_empty());
        let entries = parse_catalog("# comment\nA4; 4; (0 1 2), (0 1)(2 3); 12\n").unwrap();
        assert_eq!(entries.len(), 1);
        assert_eq!(entries[0].build().unwrap().order(), 12);
        let err = parse_catalog("bad; 4; (0 1; 2").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }));
        let wrong = parse_catalog("A4; 4; (0 1 2), (0 1)(2 3); 24").unwrap();
        assert!(matches!(wrong[0].build(), Err(Error::OrderMismatch { .. })));

        for name in ["S4", "D8xC3", "SL23", "C1"] {
            let g = build(name).unwrap();
            let line = CatalogEntry::from_group(name, &g).to_line();
            let back = parse_catalog(&line).unwrap().remove(0).build().unwrap();
            let mut a = back.enumerate_elements();
            let mut b = g.enumerate_elements();
            a.sort();
            b.sort();
            assert_eq!(a, b);
        }
    }
}
