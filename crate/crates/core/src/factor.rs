//! Factorization of integer polynomials: squarefree decomposition, modular
//! factorization, multifactor Hensel lifting and Zassenhaus recombination.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::modp;
use crate::poly::{exact_div, IntPoly, PolyError, PolyJson};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum FactorError {
    #[error("polynomial is not squarefree modulo {0}")]
    NotSquarefreeModP(u64),
    #[error("{0} divides the leading coefficient")]
    BadPrime(u64),
    #[error("no usable prime found")]
    NoGoodPrime,
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    /// Sign of the leading coefficient.
    pub unit: i32,
    pub content: BigInt,
    pub factors: Vec<(IntPoly, u32)>,
    /// Seed used for the randomized splitting.
    pub seed: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FactorJson {
    pub poly: PolyJson,
    pub mult: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FactorizationJson {
    pub content: String,
    pub unit: i32,
    pub factors: Vec<FactorJson>,
    pub seed: u64,
}

impl Factorization {
    /// `unit * content * prod factor^mult`.
    pub fn expand(&self) -> IntPoly {
        let mut acc = IntPoly::constant(&self.content * BigInt::from(self.unit));
        for (f, m) in &self.factors {
            acc = &acc * &f.pow(*m);
        }
        acc
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (f, m) in &self.factors {
            for _ in 0..*m {
                out.push(f.deg());
            }
        }
        out
    }

    pub fn to_json(&self) -> FactorizationJson {
        FactorizationJson {
            content: self.content.to_string(),
            unit: self.unit,
            factors: self.factors.iter().map(|(f, m)| FactorJson { poly: f.to_json(), mult: *m }).collect(),
            seed: self.seed,
        }
    }

    pub fn from_json(j: &FactorizationJson) -> Result<Self, PolyError> {
        let content = j.content.parse().map_err(|_| PolyError::BadJson(j.content.clone()))?;
        let factors =
            j.factors.iter().map(|f| Ok((IntPoly::from_json(&f.poly)?, f.mult))).collect::<Result<_, PolyError>>()?;
        Ok(Factorization { unit: j.unit, content, factors, seed: j.seed })
    }
}

/// Musser-style squarefree decomposition of the primitive part.
/// Factors are canonical; the product reconstructs `f` up to content and sign.
pub fn squarefree(f: &IntPoly) -> Vec<(IntPoly, u32)> {
    let f = f.canonical();
    if f.deg() == 0 {
        return Vec::new();
    }
    // squarefree mod a prime not dividing lc implies squarefree
    let lc = f.lc();
    // small primes often all divide the discriminant, so word-size ones too
    let witnessed = modp::odd_primes_from(3)
        .take(20)
        .chain(modp::word_primes(4))
        .any(|p| !modp::big_is_zero_mod(&lc, p) && modp::is_squarefree(&modp::monic(&f.mod_u64(p), p), p));
    if witnessed {
        return vec![(f, 1)];
    }
    let mut out = Vec::new();
    let mut g = f.gcd(&f.derivative());
    let mut w = exact_div(&f, &g).expect("gcd divides").canonical();
    let mut i = 1;
    while w.deg() > 0 {
        let y = w.gcd(&g);
        let z = exact_div(&w, &y).expect("gcd divides").canonical();
        if z.deg() > 0 {
            out.push((z, i));
        }
        i += 1;
        g = exact_div(&g, &y).expect("gcd divides");
        w = y;
    }
    out
}

/// Product of the distinct irreducible factors (the radical), canonical.
pub fn squarefree_part(f: &IntPoly) -> IntPoly {
    squarefree(f).into_iter().fold(IntPoly::one(), |acc, (g, _)| &acc * &g).canonical().renamed(f.var())
}

/// Monic irreducible factors of `f` over `Z/p`, sorted.
pub fn factor_mod_p(f: &IntPoly, p: u64) -> Result<Vec<IntPoly>, FactorError> {
    if modp::big_is_zero_mod(&f.lc(), p) {
        return Err(FactorError::BadPrime(p));
    }
    let fp = modp::monic(&f.mod_u64(p), p);
    if !modp::is_squarefree(&fp, p) {
        return Err(FactorError::NotSquarefreeModP(p));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(p);
    Ok(modp::factor_squarefree(&fp, p, &mut rng)
        .into_iter()
        .map(|g| IntPoly::with_var(g.into_iter().map(BigInt::from).collect(), f.var()))
        .collect())
}

/// Degrees of the irreducible factors of a squarefree `f` mod `p` (via
/// distinct-degree factorization only).
pub fn degree_pattern(f: &IntPoly, p: u64) -> Result<Vec<usize>, FactorError> {
    if modp::big_is_zero_mod(&f.lc(), p) {
        return Err(FactorError::BadPrime(p));
    }
    let fp = modp::monic(&f.mod_u64(p), p);
    if fp.len() <= 1 {
        return Ok(Vec::new());
    }
    if !modp::is_squarefree(&fp, p) {
        return Err(FactorError::NotSquarefreeModP(p));
    }
    let mut out = Vec::new();
    for (d, g) in modp::distinct_degree(&fp, p) {
        for _ in 0..(g.len() - 1) / d {
            out.push(d);
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// Good odd primes for `f`: not dividing `lc(f)`, `f` squarefree mod `p`.
pub fn good_primes(f: &IntPoly, count: usize) -> Vec<u64> {
    let lc = f.lc();
    modp::odd_primes_from(3)
        .filter(|&p| !modp::big_is_zero_mod(&lc, p) && modp::is_squarefree(&modp::monic(&f.mod_u64(p), p), p))
        .take(count)
        .collect()
}

/// Number of good primes whose modular factor counts are compared before
/// choosing the lifting prime.
pub const PRIME_SCAN: usize = 40;

/// Complete factorization over the integers.
pub fn factor(f: &IntPoly) -> Factorization {
    factor_with_seed(f, 0)
}

pub fn factor_with_seed(f: &IntPoly, seed: u64) -> Factorization {
    let var = f.var().to_string();
    if f.is_zero() {
        return Factorization { unit: 1, content: BigInt::zero(), factors: Vec::new(), seed };
    }
    let unit = if f.lc().is_negative() { -1 } else { 1 };
    let content = f.content();
    let prim = f.canonical();
    let mut factors: Vec<(IntPoly, u32)> = Vec::new();
    let mut rest = prim.clone();
    // strip powers of x
    let zeros = rest.coeffs().iter().take_while(|c| c.is_zero()).count();
    if zeros > 0 {
        factors.push((IntPoly::x().renamed(&var), zeros as u32));
        rest = IntPoly::with_var(rest.coeffs()[zeros..].to_vec(), &var);
    }
    for (sf, mult) in squarefree(&rest) {
        for g in factor_squarefree_int(&sf, seed) {
            factors.push((g.renamed(&var), mult));
        }
    }
    sort_factors(&mut factors);
    let out = Factorization { unit, content, factors, seed };
    debug_assert_eq!(out.expand(), *f);
    out
}

fn cmp_poly(a: &IntPoly, b: &IntPoly) -> std::cmp::Ordering {
    a.deg().cmp(&b.deg()).then_with(|| a.coeffs().iter().rev().cmp(b.coeffs().iter().rev()))
}

fn sort_factors(v: &mut [(IntPoly, u32)]) {
    v.sort_by(|a, b| cmp_poly(&a.0, &b.0).then(a.1.cmp(&b.1)));
}

/// Irreducible factors of a squarefree primitive polynomial with positive
/// leading coefficient.
pub fn factor_squarefree_int(f: &IntPoly, seed: u64) -> Vec<IntPoly> {
    let f = f.canonical();
    match f.deg() {
        0 => return Vec::new(),
        1 => return vec![f],
        _ => {}
    }
    let started = std::time::Instant::now();
    let candidates = good_primes(&f, PRIME_SCAN);
    let counts: Vec<(usize, u64)> =
        candidates.par_iter().map(|&p| (degree_pattern(&f, p).map(|d| d.len()).unwrap_or(usize::MAX), p)).collect();
    let (count, p) = *counts.iter().min().expect("at least one good prime");
    log::debug!("factoring degree {}: prime {p} gives {count} modular factors ({:?})", f.deg(), started.elapsed());
    if count == 1 {
        return vec![f];
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ p);
    let fp = modp::monic(&f.mod_u64(p), p);
    let modular = modp::factor_squarefree(&fp, p, &mut rng);
    let bound = mignotte_bound(&f);
    // p^k > 2^21 * B leaves room for the coefficient filters
    let target: BigInt = &bound << 21u32;
    let mut k = 1u32;
    let pb = BigInt::from(p);
    let mut pk = pb.clone();
    while pk <= target {
        k *= 2;
        pk = pb.pow(k);
    }
    let lifted = hensel_lift(&f, &modular, p, k);
    log::debug!("lifted to {p}^{k} ({:?})", started.elapsed());
    let mut out = recombine(&f, lifted, &pk, &bound);
    log::debug!("recombined into {} factors ({:?})", out.len(), started.elapsed());
    out.sort_by(cmp_poly);
    out
}

/// `2^deg * ||f||_2 * |lc|`.
pub fn mignotte_bound(f: &IntPoly) -> BigInt {
    let norm = f.norm2_sq().sqrt() + 1u32;
    (norm * f.lc().abs()) << f.deg()
}

// --- arithmetic in (Z/m)[x], coefficients in [0, m) ---

fn pm_trim(v: &mut Vec<BigInt>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

fn pm_reduce(v: Vec<BigInt>, m: &BigInt) -> Vec<BigInt> {
    let mut out: Vec<BigInt> = v.into_iter().map(|c| c.mod_floor(m)).collect();
    pm_trim(&mut out);
    out
}

/// Kronecker-substitution product of two nonnegative vectors.
fn kron_mul(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let ma = a.iter().map(|c| c.bits()).max().unwrap_or(0);
    let mb = b.iter().map(|c| c.bits()).max().unwrap_or(0);
    let n = a.len().min(b.len()) as u64;
    let slot = ma + mb + 64 - n.leading_zeros() as u64 + 1;
    let pack = |v: &[BigInt]| -> BigInt {
        let mut acc = BigInt::zero();
        for c in v.iter().rev() {
            acc <<= slot;
            acc += c;
        }
        acc
    };
    let mut prod = pack(a) * pack(b);
    let mask = (BigInt::one() << slot) - 1;
    let len = a.len() + b.len() - 1;
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(&prod & &mask);
        prod >>= slot;
    }
    out
}

fn pm_mul(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    pm_reduce(kron_mul(a, b), m)
}

fn pm_add(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    let zero = BigInt::zero();
    let v = (0..n).map(|i| a.get(i).unwrap_or(&zero) + b.get(i).unwrap_or(&zero)).collect();
    pm_reduce(v, m)
}

fn pm_sub(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let n = a.len().max(b.len());
    let zero = BigInt::zero();
    let v = (0..n).map(|i| a.get(i).unwrap_or(&zero) - b.get(i).unwrap_or(&zero)).collect();
    pm_reduce(v, m)
}

/// Division by a monic polynomial.
fn pm_divrem_monic(a: &[BigInt], b: &[BigInt], m: &BigInt) -> (Vec<BigInt>, Vec<BigInt>) {
    let db = b.len() - 1;
    if a.len() <= db {
        return (Vec::new(), a.to_vec());
    }
    let mut r = a.to_vec();
    let mut q = vec![BigInt::zero(); a.len() - db];
    for k in (0..q.len()).rev() {
        let c = r[k + db].mod_floor(m);
        if !c.is_zero() {
            for (j, bj) in b.iter().enumerate().take(db) {
                r[k + j] -= &c * bj;
            }
        }
        r[k + db] = BigInt::zero();
        q[k] = c;
    }
    r.truncate(db);
    (pm_reduce(q, m), pm_reduce(r, m))
}

fn to_big(v: &[u64]) -> Vec<BigInt> {
    v.iter().map(|&c| BigInt::from(c)).collect()
}

/// Left and right subtrees with their Bezout cofactors.
type Split = (Node, Node, Vec<BigInt>, Vec<BigInt>);

struct Node {
    /// Lifted value of this node's product.
    value: Vec<BigInt>,
    children: Option<Box<Split>>,
    /// Leaf index range.
    range: (usize, usize),
}

/// Builds the factor tree mod p; the leftmost path carries `lc`.
fn build_tree(factors: &[Vec<u64>], range: (usize, usize), lc: u64, p: u64) -> Node {
    if range.1 - range.0 == 1 {
        let v = modp::scale(&factors[range.0], lc, p);
        return Node { value: to_big(&v), children: None, range };
    }
    let mid = (range.0 + range.1) / 2;
    let left = build_tree(factors, (range.0, mid), lc, p);
    let right = build_tree(factors, (mid, range.1), 1, p);
    let lv: Vec<u64> = left.value.iter().map(|c| c.to_u64().unwrap()).collect();
    let rv: Vec<u64> = right.value.iter().map(|c| c.to_u64().unwrap()).collect();
    let (g, s, t) = modp::xgcd(&lv, &rv, p);
    debug_assert_eq!(g, vec![1]);
    let value = to_big(&modp::mul(&lv, &rv, p));
    Node { value, children: Some(Box::new((left, right, to_big(&s), to_big(&t)))), range }
}

/// One quadratic Hensel step at every node; `f` is the new target for this node.
fn lift_node(node: &mut Node, f: &[BigInt], m: &BigInt, m2: &BigInt) {
    node.value = f.to_vec();
    let Some(ch) = node.children.as_mut() else {
        return;
    };
    let (left, right, s, t) = &mut **ch;
    let (g, h) = (&left.value, &right.value);
    // e = f - g h
    let e = pm_sub(f, &pm_mul(g, h, m2), m2);
    let (q, r) = pm_divrem_monic(&pm_mul(s, &e, m2), h, m2);
    let g2 = pm_add(g, &pm_add(&pm_mul(t, &e, m2), &pm_mul(&q, g, m2), m2), m2);
    let h2 = pm_add(h, &r, m2);
    let b = pm_sub(&pm_add(&pm_mul(s, &g2, m2), &pm_mul(t, &h2, m2), m2), &[BigInt::one()], m2);
    let (c, d) = pm_divrem_monic(&pm_mul(s, &b, m2), &h2, m2);
    let s2 = pm_sub(s, &d, m2);
    let t2 = pm_sub(&pm_sub(t, &pm_mul(t, &b, m2), m2), &pm_mul(&c, &g2, m2), m2);
    *s = s2;
    *t = t2;
    let _ = m;
    lift_node(left, &g2, m, m2);
    lift_node(right, &h2, m, m2);
}

fn collect_leaves(node: &Node, out: &mut Vec<(usize, Vec<BigInt>)>) {
    match &node.children {
        None => out.push((node.range.0, node.value.clone())),
        Some(ch) => {
            collect_leaves(&ch.0, out);
            collect_leaves(&ch.1, out);
        }
    }
}

/// Lifts `f = lc * prod factors (mod p)` to modulus `p^k` (k a power of two).
/// Returns monic lifted factors.
fn hensel_lift(f: &IntPoly, factors: &[Vec<u64>], p: u64, k: u32) -> Vec<Vec<BigInt>> {
    let lc_p = modp::reduce_big(&f.lc(), p);
    let mut root = build_tree(factors, (0, factors.len()), lc_p, p);
    let mut m = BigInt::from(p);
    let mut e = 1;
    while e < k {
        let m2 = &m * &m;
        let target = pm_reduce(f.coeffs().to_vec(), &m2);
        lift_node(&mut root, &target, &m, &m2);
        m = m2;
        e *= 2;
    }
    let mut leaves = Vec::new();
    collect_leaves(&root, &mut leaves);
    leaves.sort_by_key(|l| l.0);
    leaves
        .into_iter()
        .map(|(_, v)| {
            let lc = v.last().unwrap().clone();
            let inv = lc.modinv(&m).expect("unit leading coefficient");
            pm_reduce(v.into_iter().map(|c| c * &inv).collect(), &m)
        })
        .collect()
}

fn symmetric(c: &BigInt, m: &BigInt) -> BigInt {
    modp::symmetric(c.mod_floor(m), m)
}

/// Zassenhaus subset recombination, smallest subsets first.
fn recombine(f: &IntPoly, lifted: Vec<Vec<BigInt>>, pk: &BigInt, bound: &BigInt) -> Vec<IntPoly> {
    let var = f.var().to_string();
    let mut rest = f.clone();
    let mut pool: Vec<Vec<BigInt>> = lifted;
    let mut found = Vec::new();
    let mut s = 1;
    while 2 * s <= pool.len() {
        let lc = rest.lc();
        let sub_lead: Vec<BigInt> = pool.iter().map(|u| u[u.len() - 2].clone()).collect();
        let consts: Vec<BigInt> = pool.iter().map(|u| u[0].clone()).collect();
        let rest0 = rest.coeff(0);
        let target0 = &rest0 * &lc;
        let hit = combinations(pool.len(), s).find_map_any_seq(|combo| {
            // coefficient of x^(d-1)
            let tr: BigInt = combo.iter().map(|&i| &sub_lead[i]).sum::<BigInt>() * &lc;
            if symmetric(&tr, pk).abs() > *bound {
                return None;
            }
            // constant term divides lc * f(0)
            let mut c0 = lc.clone();
            for &i in combo {
                c0 = (c0 * &consts[i]).mod_floor(pk);
            }
            let c0 = modp::symmetric(c0, pk);
            if c0.is_zero() || (!target0.is_zero() && !(&target0 % &c0).is_zero()) {
                return None;
            }
            let mut prod = vec![lc.mod_floor(pk)];
            for &i in combo {
                prod = pm_mul(&prod, &pool[i], pk);
            }
            let cand =
                IntPoly::with_var(prod.iter().map(|c| modp::symmetric(c.clone(), pk)).collect(), &var).canonical();
            let q = exact_div(&rest, &cand).ok()?;
            Some((combo.to_vec(), cand, q))
        });
        match hit {
            Some((combo, cand, q)) => {
                found.push(cand);
                rest = q;
                let mut idx = 0;
                pool.retain(|_| {
                    let keep = !combo.contains(&idx);
                    idx += 1;
                    keep
                });
            }
            None => s += 1,
        }
    }
    if rest.deg() > 0 {
        found.push(rest.canonical());
    }
    found
}

/// Lexicographic k-subsets of `0..n`.
struct Combinations {
    n: usize,
    idx: Vec<usize>,
    done: bool,
}

fn combinations(n: usize, k: usize) -> Combinations {
    Combinations { n, idx: (0..k).collect(), done: k > n }
}

impl Combinations {
    fn advance(&mut self) {
        let k = self.idx.len();
        let mut i = k;
        while i > 0 {
            i -= 1;
            if self.idx[i] < self.n - k + i {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                return;
            }
        }
        self.done = true;
    }

    /// First hit in lexicographic order, batches checked in parallel.
    fn find_map_any_seq<T: Send, F>(mut self, f: F) -> Option<T>
    where
        F: Fn(&[usize]) -> Option<T> + Sync,
    {
        const BATCH: usize = 4096;
        while !self.done {
            let mut batch = Vec::with_capacity(BATCH);
            while !self.done && batch.len() < BATCH {
                batch.push(self.idx.clone());
                self.advance();
            }
            let hits: Vec<Option<T>> = batch.par_iter().map(|c| f(c)).collect();
            if let Some(h) = hits.into_iter().flatten().next() {
                return Some(h);
            }
        }
        None
    }
}
