//! Unramified extensions of the 2-adic integers at fixed precision, and the
//! periodic points of `F` inside them.
//!
//! Elements of `Z_2[t]/(f_n)` are stored as `n` residues mod `2^prec` in the
//! power basis of `t`. Since `f_n` is irreducible mod 2 the basis is integral
//! and the valuation of an element is the minimum over its coordinates.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::poly::IntPoly;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum PadicError {
    #[error("no defining polynomial shipped for residue degree {0}")]
    BadDegree(u32),
    #[error("precision {0} is too small")]
    PrecisionExhausted(u32),
    #[error("argument is not in the open unit disc")]
    NotInDisc,
    #[error("element is not a unit")]
    NotUnit,
    #[error("seed {0:#b} does not have exact squaring period {1}")]
    BadSeed(u32, u32),
    #[error("Newton iteration stalled")]
    NewtonStall,
    #[error("no union of orbits rounds to an integer polynomial")]
    NoIntegerCombination,
}

/// Bit masks of polynomials over GF(2), bit `i` for `t^i`, irreducible of
/// degree `n` (index `n - 1`). These are the Conway polynomials.
const DEFINING: [u32; 16] = [
    0b11,
    0b111,
    0b1011,
    0b10011,
    0b100101,
    0b1011011,
    0b10000011,
    0b100011101,
    0b1000010001,
    0b10001101111,
    0b100000000101,
    0b1000011101011,
    0b10000000011011,
    0b100000010101001,
    0b1000000000110101,
    0b10000000000101101,
];

pub const MAX_DEGREE: u32 = DEFINING.len() as u32;

pub fn defining_mask(n: u32) -> Result<u32, PadicError> {
    if n == 0 || n > MAX_DEGREE {
        return Err(PadicError::BadDegree(n));
    }
    Ok(DEFINING[n as usize - 1])
}

/// Product in GF(2)[t]/(f) on bit masks.
pub fn gf2_mulmod(mut a: u32, mut b: u32, f: u32) -> u32 {
    let n = 31 - f.leading_zeros();
    let top = 1u32 << n;
    let mut r = 0;
    while b != 0 {
        if b & 1 != 0 {
            r ^= a;
        }
        b >>= 1;
        a <<= 1;
        if a & top != 0 {
            a ^= f;
        }
    }
    r
}

fn gf2_poly_gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let db = 63 - b.leading_zeros();
        while a != 0 && 63 - a.leading_zeros() >= db {
            a ^= b << (63 - a.leading_zeros() - db);
        }
        std::mem::swap(&mut a, &mut b);
    }
    a
}

/// Rabin's irreducibility test over GF(2).
pub fn gf2_is_irreducible(f: u32) -> bool {
    let n = 31 - f.leading_zeros();
    if n == 0 {
        return false;
    }
    // t reduced mod f
    let t = if n == 1 { 0b10 ^ f } else { 0b10 };
    let frob = |k: u32| (0..k).fold(t, |y, _| gf2_mulmod(y, y, f));
    if frob(n) != t {
        return false;
    }
    let mut m = n;
    let mut q = 2;
    while m > 1 {
        if m.is_multiple_of(q) {
            while m.is_multiple_of(q) {
                m /= q;
            }
            if gf2_poly_gcd(f as u64, (frob(n / q) ^ t) as u64) != 1 {
                return false;
            }
        }
        q += 1;
    }
    true
}

/// `Z_2[t]/(f_n(t))` truncated mod `2^prec`, with its Frobenius lift.
#[derive(Debug)]
pub struct WittRing {
    n: u32,
    prec: u32,
    mask: u32,
    modulus: BigInt,
    /// `f_n` lifted with 0/1 coefficients, low degree first, monic.
    f: Vec<BigInt>,
    /// `sigma(t)^i` for `i < n`.
    frob_powers: Vec<Vec<BigInt>>,
}

/// Element of a [`WittRing`].
#[derive(Clone, Debug)]
pub struct Witt {
    ring: Arc<WittRing>,
    coeffs: Vec<BigInt>,
}

impl PartialEq for Witt {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.ring, &other.ring) && self.coeffs == other.coeffs
    }
}

impl Eq for Witt {}

impl WittRing {
    pub fn new(n: u32, prec: u32) -> Result<Arc<WittRing>, PadicError> {
        let mask = defining_mask(n)?;
        if prec < 8 {
            return Err(PadicError::PrecisionExhausted(prec));
        }
        let f = (0..=n).map(|i| BigInt::from((mask >> i) & 1)).collect();
        let mut ring = WittRing { n, prec, mask, modulus: BigInt::one() << prec, f, frob_powers: Vec::new() };
        let theta = ring.frobenius_root()?;
        let mut powers = vec![ring.reduce(vec![BigInt::one()])];
        for i in 1..n as usize {
            let next = ring.mul_raw(&powers[i - 1], &theta);
            powers.push(next);
        }
        ring.frob_powers = powers;
        Ok(Arc::new(ring))
    }

    pub fn degree(&self) -> u32 {
        self.n
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    /// `f_n` as an integer polynomial.
    pub fn defining_poly(&self) -> IntPoly {
        IntPoly::with_var(self.f.clone(), "t")
    }

    pub fn residue_modulus(&self) -> u32 {
        self.mask
    }

    fn reduce(&self, mut c: Vec<BigInt>) -> Vec<BigInt> {
        let n = self.n as usize;
        while c.len() > n {
            let top = c.pop().expect("nonempty");
            if top.is_zero() {
                continue;
            }
            let shift = c.len() - n;
            for (i, fi) in self.f[..n].iter().enumerate() {
                if !fi.is_zero() {
                    c[shift + i] -= &top * fi;
                }
            }
        }
        c.resize(n, BigInt::zero());
        for x in c.iter_mut() {
            *x = x.mod_floor(&self.modulus);
        }
        c
    }

    fn mul_raw(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        self.reduce(out)
    }

    /// Hensel lift of the root of `f_n` congruent to `t^2`.
    fn frobenius_root(&self) -> Result<Vec<BigInt>, PadicError> {
        let n = self.n as usize;
        let mut t2 = vec![BigInt::zero(); n.max(3)];
        t2[2] = BigInt::one();
        let mut theta = self.reduce(t2);
        let fprime: Vec<BigInt> = self.f.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect();
        for _ in 0..2 * self.prec.ilog2() + 8 {
            let fv = self.horner(&self.f, &theta);
            if fv.iter().all(Zero::is_zero) {
                return Ok(theta);
            }
            let dv = self.horner(&fprime, &theta);
            let inv = self.inverse_raw(&dv)?;
            let step = self.mul_raw(&fv, &inv);
            theta = self.reduce(theta.iter().zip(&step).map(|(a, b)| a - b).collect());
        }
        Err(PadicError::NewtonStall)
    }

    fn horner(&self, poly: &[BigInt], at: &[BigInt]) -> Vec<BigInt> {
        let mut acc = vec![BigInt::zero(); self.n as usize];
        for c in poly.iter().rev() {
            acc = self.mul_raw(&acc, at);
            acc[0] += c;
            acc = self.reduce(acc);
        }
        acc
    }

    fn inverse_raw(&self, a: &[BigInt]) -> Result<Vec<BigInt>, PadicError> {
        if a.iter().all(|c| c.is_even()) {
            return Err(PadicError::NotUnit);
        }
        // a^(2^n - 2) inverts a mod 2
        let mut x = self.reduce(vec![BigInt::one()]);
        let mut base = a.to_vec();
        let mut e: u64 = (1u64 << self.n) - 2;
        while e > 0 {
            if e & 1 == 1 {
                x = self.mul_raw(&x, &base);
            }
            base = self.mul_raw(&base, &base);
            e >>= 1;
        }
        let mut one = vec![BigInt::zero(); self.n as usize];
        one[0] = BigInt::one();
        for _ in 0..self.prec.ilog2() + 4 {
            let ax = self.mul_raw(a, &x);
            if ax == one {
                return Ok(x);
            }
            let two_minus: Vec<BigInt> = ax.iter().zip(&one).map(|(c, o)| o * 2 - c).collect();
            x = self.mul_raw(&x, &two_minus);
        }
        Err(PadicError::NewtonStall)
    }

    fn residue_square(&self, r: u32) -> u32 {
        gf2_mulmod(r, r, self.mask)
    }

    /// Period of the residue `r` under squaring.
    pub fn residue_period(&self, r: u32) -> u32 {
        let mut s = self.residue_square(r);
        let mut k = 1;
        while s != r {
            s = self.residue_square(s);
            k += 1;
        }
        k
    }

    /// Smallest representative of every squaring orbit of exact length `n`
    /// among the nonzero residues.
    pub fn primitive_residue_orbits(&self) -> Vec<u32> {
        let mut seen = vec![false; 1usize << self.n];
        let mut reps = Vec::new();
        for r in 1u32..(1u32 << self.n) {
            if seen[r as usize] {
                continue;
            }
            let mut s = r;
            let mut len = 0;
            loop {
                seen[s as usize] = true;
                len += 1;
                s = self.residue_square(s);
                if s == r {
                    break;
                }
            }
            if len == self.n {
                reps.push(r);
            }
        }
        reps
    }
}

fn same_ring(a: &Witt, b: &Witt) {
    assert!(Arc::ptr_eq(&a.ring, &b.ring), "elements of different rings");
}

impl Witt {
    pub fn from_int(ring: &Arc<WittRing>, v: impl Into<BigInt>) -> Witt {
        let c = ring.reduce(vec![v.into()]);
        Witt { ring: ring.clone(), coeffs: c }
    }

    pub fn zero(ring: &Arc<WittRing>) -> Witt {
        Witt::from_int(ring, 0)
    }

    pub fn one(ring: &Arc<WittRing>) -> Witt {
        Witt::from_int(ring, 1)
    }

    /// Coordinates in the power basis, reduced mod `2^prec`.
    pub fn from_coeffs(ring: &Arc<WittRing>, coeffs: Vec<BigInt>) -> Witt {
        Witt { ring: ring.clone(), coeffs: ring.reduce(coeffs) }
    }

    /// Lift of a residue given as a bit mask over the power basis.
    pub fn from_residue(ring: &Arc<WittRing>, r: u32) -> Witt {
        let c = (0..ring.n).map(|i| BigInt::from((r >> i) & 1)).collect();
        Witt::from_coeffs(ring, c)
    }

    pub fn ring(&self) -> &Arc<WittRing> {
        &self.ring
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn residue(&self) -> u32 {
        self.coeffs.iter().enumerate().fold(0, |acc, (i, c)| acc | ((c.is_odd() as u32) << i))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// 2-adic valuation, `None` for zero at this precision.
    pub fn valuation(&self) -> Option<u32> {
        self.coeffs.iter().filter_map(|c| c.trailing_zeros()).min().map(|v| v as u32)
    }

    pub fn add(&self, o: &Witt) -> Witt {
        same_ring(self, o);
        let c = self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect();
        Witt::from_coeffs(&self.ring, c)
    }

    pub fn sub(&self, o: &Witt) -> Witt {
        same_ring(self, o);
        let c = self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a - b).collect();
        Witt::from_coeffs(&self.ring, c)
    }

    pub fn neg(&self) -> Witt {
        Witt::from_coeffs(&self.ring, self.coeffs.iter().map(|a| -a).collect())
    }

    pub fn mul(&self, o: &Witt) -> Witt {
        same_ring(self, o);
        Witt { ring: self.ring.clone(), coeffs: self.ring.mul_raw(&self.coeffs, &o.coeffs) }
    }

    pub fn scale(&self, k: &BigInt) -> Witt {
        Witt::from_coeffs(&self.ring, self.coeffs.iter().map(|a| a * k).collect())
    }

    pub fn add_int(&self, k: i64) -> Witt {
        let mut c = self.coeffs.clone();
        c[0] += k;
        Witt::from_coeffs(&self.ring, c)
    }

    pub fn square(&self) -> Witt {
        self.mul(self)
    }

    pub fn inverse(&self) -> Result<Witt, PadicError> {
        Ok(Witt { ring: self.ring.clone(), coeffs: self.ring.inverse_raw(&self.coeffs)? })
    }

    /// `self / 2`; the top digit of the result is unknown and set to zero.
    pub fn half(&self) -> Result<Witt, PadicError> {
        if self.coeffs.iter().any(|c| c.is_odd()) {
            return Err(PadicError::NotInDisc);
        }
        Ok(Witt { ring: self.ring.clone(), coeffs: self.coeffs.iter().map(|c| c >> 1).collect() })
    }

    /// Canonical Frobenius lift, `sigma(w) = w^2 (mod 2)`.
    pub fn frobenius(&self) -> Witt {
        let mut out = vec![BigInt::zero(); self.ring.n as usize];
        for (a, p) in self.coeffs.iter().zip(&self.ring.frob_powers) {
            if a.is_zero() {
                continue;
            }
            for (o, q) in out.iter_mut().zip(p) {
                *o += a * q;
            }
        }
        Witt::from_coeffs(&self.ring, out)
    }

    /// The value as a symmetric integer if it lies in `Z_2` and is smaller
    /// than `2^bound` in absolute value.
    pub fn to_small_int(&self, bound: u32) -> Option<BigInt> {
        if self.coeffs[1..].iter().any(|c| !c.is_zero()) {
            return None;
        }
        let half = &self.ring.modulus >> 1;
        let c = &self.coeffs[0];
        let v = if *c > half { c - &self.ring.modulus } else { c.clone() };
        (v.abs().bits() < bound as u64).then_some(v)
    }
}

/// `C_0, C_1, ..., C_{k-1}`.
fn catalan(k: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(k);
    let mut c = BigInt::one();
    for i in 0..k {
        out.push(c.clone());
        c = c * BigInt::from(2 * (2 * i + 1)) / BigInt::from(i + 2);
    }
    out
}

/// `F(2z)/2 = -sum_{k>=1} 4^(k-1) C_(k-1) z^(4k-2)`, integral for every
/// integral `z` and congruent to `z^2` mod 2.
pub fn f_scaled(z: &Witt) -> Witt {
    let terms = z.ring.prec as usize / 2 + 1;
    let cat = catalan(terms);
    let z2 = z.square();
    let z4 = z2.square();
    let mut pow = z2;
    let mut acc = Witt::zero(&z.ring);
    let mut four = BigInt::one();
    for c in &cat {
        acc = acc.sub(&pow.scale(&(&four * c)));
        pow = pow.mul(&z4);
        four <<= 2;
    }
    acc
}

/// Derivative of [`f_scaled`].
fn f_scaled_derivative(z: &Witt) -> Witt {
    let terms = z.ring.prec as usize / 2 + 1;
    let cat = catalan(terms);
    let z4 = z.square().square();
    let mut pow = z.clone();
    let mut acc = Witt::zero(&z.ring);
    let mut four = BigInt::one();
    for (k, c) in cat.iter().enumerate() {
        let e = BigInt::from(4 * k + 2);
        acc = acc.sub(&pow.scale(&(&four * c * e)));
        pow = pow.mul(&z4);
        four <<= 2;
    }
    acc
}

/// `F(w)` for `v(w) >= 1`, via the binomial series of `sqrt(1 - w^4)`.
pub fn eval_f(w: &Witt) -> Result<Witt, PadicError> {
    if w.valuation() == Some(0) {
        return Err(PadicError::NotInDisc);
    }
    let z = w.half()?;
    let v = f_scaled(&z);
    Ok(v.add(&v))
}

/// Lifts the `F`-orbit whose scaled points reduce to the squaring orbit of
/// `seed`. Returns the points `pi_0, ..., pi_(n-1)` with `F(pi_i) = pi_(i+1)`.
pub fn lift_periodic(ring: &Arc<WittRing>, seed: u32) -> Result<Vec<Witt>, PadicError> {
    let n = ring.n;
    if seed == 0 || seed >> n != 0 || ring.residue_period(seed) != n {
        return Err(PadicError::BadSeed(seed, n));
    }
    let mut z = Witt::from_residue(ring, seed);
    let one = Witt::one(ring);
    let mut converged = false;
    for _ in 0..2 * ring.prec.ilog2() + 8 {
        let mut w = z.clone();
        let mut deriv = one.clone();
        for _ in 0..n {
            deriv = deriv.mul(&f_scaled_derivative(&w));
            w = f_scaled(&w);
        }
        let phi = w.sub(&z);
        if phi.is_zero() {
            converged = true;
            break;
        }
        let dphi = deriv.sub(&one);
        let inv = dphi.inverse().map_err(|_| PadicError::NewtonStall)?;
        z = z.sub(&phi.mul(&inv));
    }
    if !converged {
        return Err(PadicError::NewtonStall);
    }
    let mut orbit = Vec::with_capacity(n as usize);
    for _ in 0..n {
        orbit.push(z.add(&z));
        z = f_scaled(&z);
    }
    Ok(orbit)
}

/// Lifts every primitive orbit of the degree-`n` ring, in parallel.
pub fn lift_all(ring: &Arc<WittRing>) -> Result<Vec<Vec<Witt>>, PadicError> {
    ring.primitive_residue_orbits().par_iter().map(|&s| lift_periodic(ring, s)).collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FrobeniusReport {
    pub n: u32,
    pub prec: u32,
    pub points_ok: Vec<bool>,
    /// `F^n(pi) = pi` on every point.
    pub periodic_ok: bool,
}

impl FrobeniusReport {
    pub fn ok(&self) -> bool {
        self.periodic_ok && self.points_ok.iter().all(|&b| b)
    }
}

/// Checks `F(pi) = sigma(pi)` digit-exactly on every orbit point.
pub fn verify_frobenius(orbit: &[Witt]) -> Result<FrobeniusReport, PadicError> {
    let ring = orbit.first().ok_or(PadicError::NoIntegerCombination)?.ring.clone();
    let mut points_ok = Vec::new();
    let mut periodic_ok = true;
    for (i, p) in orbit.iter().enumerate() {
        let fp = eval_f(p)?;
        points_ok.push(fp == p.frobenius());
        periodic_ok &= fp == orbit[(i + 1) % orbit.len()];
    }
    Ok(FrobeniusReport { n: ring.n, prec: ring.prec, points_ok, periodic_ok })
}

/// `(x + 1)/(x - 1)`, which carries disc points to unit roots.
pub fn involution(p: &Witt) -> Result<Witt, PadicError> {
    Ok(p.add_int(1).mul(&p.add_int(-1).inverse()?))
}

/// Guard digits kept between the coefficient size and the precision.
pub const GUARD_BITS: u32 = 8;

fn product_poly(roots: &[Witt], ring: &Arc<WittRing>) -> Vec<Witt> {
    let mut acc = vec![Witt::one(ring)];
    for r in roots {
        let mut next = vec![Witt::zero(ring); acc.len() + 1];
        for (i, c) in acc.iter().enumerate() {
            next[i + 1] = next[i + 1].add(c);
            next[i] = next[i].sub(&c.mul(r));
        }
        acc = next;
    }
    acc
}

fn integer_poly(coeffs: &[Witt], bound: u32) -> Option<IntPoly> {
    coeffs.iter().map(|c| c.to_small_int(bound)).collect::<Option<Vec<_>>>().map(IntPoly::new)
}

/// Minimal polynomial of a union of orbits together with their images under
/// [`involution`]. Tries unions of increasing size, in index order, and
/// returns the first whose coefficients are small integers, with the indices
/// used.
pub fn orbit_minpoly(orbits: &[Vec<Witt>]) -> Result<(IntPoly, Vec<usize>), PadicError> {
    let ring = orbits.first().and_then(|o| o.first()).ok_or(PadicError::NoIntegerCombination)?.ring.clone();
    let bound = ring.prec - GUARD_BITS;
    let mut roots_of = Vec::with_capacity(orbits.len());
    for o in orbits {
        let mut r = o.clone();
        for p in o {
            r.push(involution(p)?);
        }
        roots_of.push(r);
    }
    for size in 1..=orbits.len() {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            let roots: Vec<Witt> = idx.iter().flat_map(|&i| roots_of[i].iter().cloned()).collect();
            if let Some(p) = integer_poly(&product_poly(&roots, &ring), bound) {
                return Ok((p, idx));
            }
            // next combination
            let mut k = size;
            while k > 0 && idx[k - 1] == orbits.len() - size + k - 1 {
                k -= 1;
            }
            if k == 0 {
                break;
            }
            idx[k - 1] += 1;
            for j in k..size {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    Err(PadicError::NoIntegerCombination)
}

/// Splits all orbits into groups with integral minimal polynomials,
/// smallest unions first.
pub fn reconstruct_all(orbits: &[Vec<Witt>]) -> Result<Vec<(IntPoly, Vec<usize>)>, PadicError> {
    let mut remaining: Vec<usize> = (0..orbits.len()).collect();
    let mut out = Vec::new();
    while !remaining.is_empty() {
        let pool: Vec<Vec<Witt>> = remaining.iter().map(|&i| orbits[i].clone()).collect();
        let (p, used) = orbit_minpoly(&pool)?;
        let used_global: Vec<usize> = used.iter().map(|&j| remaining[j]).collect();
        remaining.retain(|i| !used_global.contains(i));
        out.push((p, used_global));
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointValuations {
    pub pi: Option<u32>,
    pub xi: Option<u32>,
    pub xi_minus_1: Option<u32>,
    pub xi_plus_1: Option<u32>,
    pub one_plus_pi2: Option<u32>,
    pub one_minus_pi2: Option<u32>,
}

impl PointValuations {
    pub fn expected() -> Self {
        PointValuations {
            pi: Some(1),
            xi: Some(0),
            xi_minus_1: Some(1),
            xi_plus_1: Some(2),
            one_plus_pi2: Some(0),
            one_minus_pi2: Some(0),
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ValuationReport {
    pub points: Vec<PointValuations>,
}

impl ValuationReport {
    pub fn ok(&self) -> bool {
        let e = PointValuations::expected();
        self.points.iter().all(|p| *p == e)
    }
}

/// Local valuations of the disc roots `pi` and unit roots `xi = (pi+1)/(pi-1)`.
pub fn valuation_profile(pis: &[Witt]) -> Result<ValuationReport, PadicError> {
    let mut points = Vec::new();
    for p in pis {
        let xi = involution(p)?;
        let p2 = p.square();
        points.push(PointValuations {
            pi: p.valuation(),
            xi: xi.valuation(),
            xi_minus_1: xi.add_int(-1).valuation(),
            xi_plus_1: xi.add_int(1).valuation(),
            one_plus_pi2: p2.add_int(1).valuation(),
            one_minus_pi2: p2.neg().add_int(1).valuation(),
        });
    }
    Ok(ValuationReport { points })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random(ring: &Arc<WittRing>, rng: &mut ChaCha8Rng) -> Witt {
        let c =
            (0..ring.degree()).map(|_| BigInt::from(rng.gen::<u64>()) << 64 | BigInt::from(rng.gen::<u64>())).collect();
        Witt::from_coeffs(ring, c)
    }

    #[test]
    fn defining_polys_irreducible() {
        for n in 1..=MAX_DEGREE {
            let f = defining_mask(n).unwrap();
            assert_eq!(31 - f.leading_zeros(), n);
            assert!(gf2_is_irreducible(f), "degree {n}");
        }
        assert!(!gf2_is_irreducible(0b101));
    }

    #[test]
    fn frobenius_order() {
        let ring = WittRing::new(3, 64).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..5 {
            let w = random(&ring, &mut rng);
            let mut s = w.clone();
            for _ in 0..3 {
                s = s.frobenius();
            }
            assert_eq!(s, w);
            assert_eq!(w.frobenius().residue(), gf2_mulmod(w.residue(), w.residue(), ring.residue_modulus()));
            assert_eq!(w.frobenius().mul(&w.frobenius()), w.square().frobenius());
        }
        let z2 = WittRing::new(1, 64).unwrap();
        let w = Witt::from_int(&z2, 12345);
        assert_eq!(w.frobenius(), w);
    }

    #[test]
    fn series_and_valuations() {
        let cat = catalan(6);
        assert_eq!(cat, [1, 1, 2, 5, 14, 42].map(BigInt::from).to_vec());
        let ring = WittRing::new(2, 96).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for v in 1..=3u32 {
            let mut u = random(&ring, &mut rng);
            while u.valuation() != Some(0) {
                u = random(&ring, &mut rng);
            }
            let w = u.scale(&(BigInt::one() << v));
            assert_eq!(eval_f(&w).unwrap().valuation(), Some(2 * v - 1));
        }
        assert_eq!(eval_f(&Witt::one(&ring)), Err(PadicError::NotInDisc));
    }

    #[test]
    fn fixed_point_is_root_of_b7() {
        let ring = WittRing::new(1, 64).unwrap();
        let orbit = lift_periodic(&ring, 1).unwrap();
        let pi = &orbit[0];
        assert_eq!(pi.square().sub(pi).add_int(2), Witt::zero(&ring));
        assert!(verify_frobenius(&orbit).unwrap().ok());
        let (p, _) = orbit_minpoly(std::slice::from_ref(&orbit)).unwrap();
        assert_eq!(p, "x^2 - x + 2".parse().unwrap());
        assert!(valuation_profile(&orbit).unwrap().ok());
    }

    #[test]
    fn period_two_and_three() {
        let ring = WittRing::new(2, 64).unwrap();
        let orbits = lift_all(&ring).unwrap();
        assert_eq!(orbits.len(), 1);
        let (p, _) = orbit_minpoly(&orbits).unwrap();
        assert_eq!(p, "x^4 - 4x^3 + 5x^2 - 2x + 4".parse().unwrap());
        assert!(verify_frobenius(&orbits[0]).unwrap().ok());

        let ring = WittRing::new(3, 128).unwrap();
        let orbits = lift_all(&ring).unwrap();
        assert_eq!(orbits.len(), 2);
        let all = reconstruct_all(&orbits).unwrap();
        assert_eq!(all.len(), 2);
        for (p, used) in &all {
            assert_eq!(p.deg(), 6);
            assert_eq!(used.len(), 1);
        }
        for o in &orbits {
            assert!(verify_frobenius(o).unwrap().ok());
            assert!(valuation_profile(o).unwrap().ok());
        }
    }

    #[test]
    fn bad_seeds() {
        let ring = WittRing::new(2, 32).unwrap();
        assert_eq!(lift_periodic(&ring, 1), Err(PadicError::BadSeed(1, 2)));
        assert_eq!(WittRing::new(17, 32).unwrap_err(), PadicError::BadDegree(17));
    }
}
