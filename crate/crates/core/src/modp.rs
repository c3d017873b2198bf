//! Word-sized prime field arithmetic and dense polynomials over `Z/p`.
//!
//! Polynomials are `Vec<u64>` in ascending order with no trailing zeros.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rand::Rng;

#[inline]
pub fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
pub fn addmod(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
pub fn submod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

pub fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

/// Inverse of a nonzero residue mod a prime.
pub fn invmod(a: u64, p: u64) -> u64 {
    debug_assert!(!a.is_multiple_of(p));
    powmod(a, p - 2, p)
}

pub fn reduce_big(c: &BigInt, p: u64) -> u64 {
    c.mod_floor(&BigInt::from(p)).to_u64().expect("reduced residue fits")
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Largest primes below `2^62`, descending.
pub fn word_primes(count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut c = (1u64 << 62) - 1;
    while out.len() < count {
        if is_prime_u64(c) {
            out.push(c);
        }
        c -= 2;
    }
    out
}

/// Odd primes ascending from `start`.
pub fn odd_primes_from(start: u64) -> impl Iterator<Item = u64> {
    (start.max(3)..).filter(|&c| c % 2 == 1 && is_prime_u64(c))
}

pub fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

pub fn deg(f: &[u64]) -> Option<usize> {
    f.len().checked_sub(1)
}

pub fn lc(f: &[u64]) -> u64 {
    *f.last().unwrap_or(&0)
}

pub fn eval(f: &[u64], x: u64, p: u64) -> u64 {
    f.iter().rev().fold(0, |acc, &c| addmod(mulmod(acc, x, p), c, p))
}

pub fn add(f: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    let n = f.len().max(g.len());
    let mut out: Vec<u64> = (0..n).map(|i| addmod(*f.get(i).unwrap_or(&0), *g.get(i).unwrap_or(&0), p)).collect();
    trim(&mut out);
    out
}

pub fn sub(f: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    let n = f.len().max(g.len());
    let mut out: Vec<u64> = (0..n).map(|i| submod(*f.get(i).unwrap_or(&0), *g.get(i).unwrap_or(&0), p)).collect();
    trim(&mut out);
    out
}

pub fn scale(f: &[u64], c: u64, p: u64) -> Vec<u64> {
    let mut out: Vec<u64> = f.iter().map(|&a| mulmod(a, c, p)).collect();
    trim(&mut out);
    out
}

pub fn mul(f: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    if f.is_empty() || g.is_empty() {
        return Vec::new();
    }
    // Accumulate in u128 and reduce lazily; each product is < 2^124.
    let mut acc = vec![0u128; f.len() + g.len() - 1];
    let p128 = p as u128;
    let small = p < (1 << 31);
    for (i, &a) in f.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, &b) in g.iter().enumerate() {
            if small {
                acc[i + j] += a as u128 * b as u128;
            } else {
                acc[i + j] = (acc[i + j] + a as u128 * b as u128) % p128;
            }
        }
    }
    let mut out: Vec<u64> = acc.into_iter().map(|c| (c % p128) as u64).collect();
    trim(&mut out);
    out
}

/// Quotient and remainder by a nonzero divisor.
pub fn divrem(f: &[u64], g: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    assert!(!g.is_empty(), "division by zero polynomial");
    if f.len() < g.len() {
        return (Vec::new(), f.to_vec());
    }
    let inv = invmod(lc(g), p);
    let dg = g.len() - 1;
    if p < (1 << 31) {
        return divrem_small(f, g, inv, p);
    }
    let mut r = f.to_vec();
    let mut q = vec![0u64; f.len() - dg];
    for k in (0..q.len()).rev() {
        let c = mulmod(r[k + dg], inv, p);
        q[k] = c;
        if c == 0 {
            continue;
        }
        for (j, &b) in g.iter().enumerate() {
            r[k + j] = submod(r[k + j], mulmod(c, b, p), p);
        }
    }
    r.truncate(dg);
    trim(&mut r);
    trim(&mut q);
    (q, r)
}

/// Long division with lazily reduced `u128` accumulators; needs `p < 2^31`.
fn divrem_small(f: &[u64], g: &[u64], inv: u64, p: u64) -> (Vec<u64>, Vec<u64>) {
    let dg = g.len() - 1;
    let p128 = p as u128;
    let neg_g: Vec<u64> = g.iter().map(|&b| if b == 0 { 0 } else { p - b }).collect();
    let mut r: Vec<u128> = f.iter().map(|&c| c as u128).collect();
    let mut q = vec![0u64; f.len() - dg];
    for k in (0..q.len()).rev() {
        let top = (r[k + dg] % p128) as u64;
        let c = mulmod(top, inv, p);
        q[k] = c;
        if c == 0 {
            continue;
        }
        let c = c as u128;
        for (j, &b) in neg_g[..dg].iter().enumerate() {
            r[k + j] += c * b as u128;
        }
    }
    let mut rem: Vec<u64> = r[..dg].iter().map(|&c| (c % p128) as u64).collect();
    trim(&mut rem);
    trim(&mut q);
    (q, rem)
}

pub fn rem(f: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    divrem(f, g, p).1
}

pub fn monic(f: &[u64], p: u64) -> Vec<u64> {
    if f.is_empty() {
        return Vec::new();
    }
    scale(f, invmod(lc(f), p), p)
}

/// Monic gcd.
pub fn gcd(f: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    let (mut a, mut b) = (f.to_vec(), g.to_vec());
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    monic(&a, p)
}

/// Extended gcd: returns `(g, s, t)` with `s f + t g = gcd`, gcd monic.
pub fn xgcd(f: &[u64], g: &[u64], p: u64) -> (Vec<u64>, Vec<u64>, Vec<u64>) {
    let (mut r0, mut r1) = (f.to_vec(), g.to_vec());
    let (mut s0, mut s1) = (vec![1u64], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
    while !r1.is_empty() {
        let (q, r) = divrem(&r0, &r1, p);
        let s2 = sub(&s0, &mul(&q, &s1, p), p);
        let t2 = sub(&t0, &mul(&q, &t1, p), p);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if r0.is_empty() {
        return (r0, s0, t0);
    }
    let inv = invmod(lc(&r0), p);
    (scale(&r0, inv, p), scale(&s0, inv, p), scale(&t0, inv, p))
}

pub fn derivative(f: &[u64], p: u64) -> Vec<u64> {
    let mut out: Vec<u64> = f.iter().enumerate().skip(1).map(|(i, &c)| mulmod(c, i as u64 % p, p)).collect();
    trim(&mut out);
    out
}

/// `base^e mod modulus`.
pub fn powmod_poly(base: &[u64], mut e: u128, modulus: &[u64], p: u64) -> Vec<u64> {
    let mut result = vec![1u64];
    let mut b = rem(base, modulus, p);
    while e > 0 {
        if e & 1 == 1 {
            result = rem(&mul(&result, &b, p), modulus, p);
        }
        e >>= 1;
        if e > 0 {
            b = rem(&mul(&b, &b, p), modulus, p);
        }
    }
    if modulus.len() == 1 {
        return Vec::new();
    }
    result
}

/// Resultant with formal degrees `m = f.len()-1`, `n = g.len()-1`.
pub fn resultant(f: &[u64], g: &[u64], p: u64) -> u64 {
    if f.is_empty() || g.is_empty() {
        return 0;
    }
    let mut a = f.to_vec();
    let mut b = g.to_vec();
    let mut acc = 1u64;
    loop {
        let m = a.len() - 1;
        let n = b.len() - 1;
        if n == 0 {
            return mulmod(acc, powmod(b[0], m as u64, p), p);
        }
        let r = rem(&a, &b, p);
        if r.is_empty() {
            return 0;
        }
        let k = r.len() - 1;
        // Res(a, b) = (-1)^(mn) lc(b)^(m-k) Res(b, r)
        if (m * n) % 2 == 1 {
            acc = submod(0, acc, p);
        }
        acc = mulmod(acc, powmod(lc(&b), (m - k) as u64, p), p);
        a = b;
        b = r;
    }
}

/// Resultant with explicit formal degrees, allowing vanishing leading
/// coefficients in one argument.
pub fn resultant_formal(f: &[u64], m: usize, g: &[u64], n: usize, p: u64) -> u64 {
    let c0 = |h: &[u64]| *h.first().unwrap_or(&0);
    if n == 0 {
        return powmod(c0(g), m as u64, p);
    }
    if m == 0 {
        return powmod(c0(f), n as u64, p);
    }
    if f.is_empty() || g.is_empty() {
        return 0;
    }
    let (mf, ng) = (f.len() - 1, g.len() - 1);
    if mf < m && ng < n {
        return 0;
    }
    if mf < m {
        // Res_{m,n}(f,g) = (-1)^(mn + m'n) lc(g)^(m-m') Res_{m',n}(f,g)
        let mut r = mulmod(resultant(f, g, p), powmod(lc(g), (m - mf) as u64, p), p);
        if (m * n + mf * n) % 2 == 1 {
            r = submod(0, r, p);
        }
        return r;
    }
    if ng < n {
        return mulmod(resultant(f, g, p), powmod(lc(f), (n - ng) as u64, p), p);
    }
    resultant(f, g, p)
}

/// Newton interpolation through `(xs[i], ys[i])`, returns ascending coefficients.
pub fn interpolate(xs: &[u64], ys: &[u64], p: u64) -> Vec<u64> {
    let n = xs.len();
    let mut dd = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            let num = submod(dd[i], dd[i - 1], p);
            let den = submod(xs[i], xs[i - j], p);
            dd[i] = mulmod(num, invmod(den, p), p);
        }
    }
    let mut out = vec![0u64; n];
    let mut poly: Vec<u64> = Vec::with_capacity(n);
    // Horner on the Newton form.
    for i in (0..n).rev() {
        // poly = poly * (x - xs[i]) + dd[i]
        let mut next = vec![0u64; poly.len() + 1];
        for (k, &c) in poly.iter().enumerate() {
            next[k + 1] = addmod(next[k + 1], c, p);
            next[k] = submod(next[k], mulmod(c, xs[i], p), p);
        }
        next[0] = addmod(next[0], dd[i], p);
        poly = next;
    }
    out[..poly.len().min(n)].copy_from_slice(&poly[..poly.len().min(n)]);
    trim(&mut out);
    out
}

/// Symmetric lift of a CRT-combined residue.
pub fn symmetric(c: BigInt, modulus: &BigInt) -> BigInt {
    let half: BigInt = modulus >> 1;
    if c > half {
        c - modulus
    } else {
        c
    }
}

/// Incremental CRT: combine `x mod m` with `r mod p`.
pub fn crt_step(x: &BigInt, m: &BigInt, r: u64, p: u64) -> BigInt {
    let xm = reduce_big(x, p);
    let minv = invmod(reduce_big(m, p), p);
    let t = mulmod(submod(r, xm, p), minv, p);
    x + m * BigInt::from(t)
}

/// Distinct-degree factorization of a monic squarefree polynomial.
/// Returns `(degree, product of all irreducible factors of that degree)`.
pub fn distinct_degree(f: &[u64], p: u64) -> Vec<(usize, Vec<u64>)> {
    let mut out = Vec::new();
    let mut rest = f.to_vec();
    let x = vec![0u64, 1];
    let mut h = x.clone();
    let mut d = 0;
    while rest.len() > 1 {
        d += 1;
        if 2 * d > rest.len() - 1 {
            out.push((rest.len() - 1, rest.clone()));
            break;
        }
        h = powmod_poly(&h, p as u128, &rest, p);
        let g = gcd(&sub(&h, &x, p), &rest, p);
        if g.len() > 1 {
            out.push((d, g.clone()));
            rest = divrem(&rest, &g, p).0;
            h = rem(&h, &rest, p);
        }
    }
    out
}

/// Splits a monic product of irreducibles of common degree `d` (Cantor-Zassenhaus).
pub fn equal_degree<R: Rng>(f: &[u64], d: usize, p: u64, rng: &mut R) -> Vec<Vec<u64>> {
    let n = f.len() - 1;
    if n == d {
        return vec![f.to_vec()];
    }
    let e = (num_bigint::BigUint::from(p).pow(d as u32) - 1u32) / 2u32;
    loop {
        let mut a: Vec<u64> = (0..n).map(|_| rng.gen_range(0..p)).collect();
        trim(&mut a);
        if a.len() < 2 {
            continue;
        }
        let b = powmod_poly_big(&a, &e, f, p);
        let g = gcd(&sub(&b, &[1], p), f, p);
        if g.len() > 1 && g.len() < f.len() {
            let h = divrem(f, &g, p).0;
            let mut out = equal_degree(&g, d, p, rng);
            out.extend(equal_degree(&h, d, p, rng));
            return out;
        }
    }
}

fn powmod_poly_big(base: &[u64], e: &num_bigint::BigUint, modulus: &[u64], p: u64) -> Vec<u64> {
    let mut result = vec![1u64];
    let b = rem(base, modulus, p);
    for i in (0..e.bits()).rev() {
        result = rem(&mul(&result, &result, p), modulus, p);
        if e.bit(i) {
            result = rem(&mul(&result, &b, p), modulus, p);
        }
    }
    result
}

/// Full factorization of a monic squarefree polynomial into monic irreducibles.
pub fn factor_squarefree<R: Rng>(f: &[u64], p: u64, rng: &mut R) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    for (d, g) in distinct_degree(f, p) {
        out.extend(equal_degree(&g, d, p, rng));
    }
    out.sort();
    out
}

pub fn is_squarefree(f: &[u64], p: u64) -> bool {
    let df = derivative(f, p);
    !df.is_empty() && gcd(f, &df, p).len() == 1
}

/// True when every coefficient is zero mod p.
pub fn big_is_zero_mod(c: &BigInt, p: u64) -> bool {
    (c % BigInt::from(p)).is_zero()
}
