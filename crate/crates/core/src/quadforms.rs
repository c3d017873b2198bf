//! Positive definite binary quadratic forms of discriminant `-d`, class
//! numbers, composition, and the order of the class of the prime-2 form.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::numtheory::primitive_count;
use crate::poly::{discriminant, IntPoly};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum QuadError {
    #[error("-{0} is not a negative discriminant congruent to 1 mod 4")]
    BadDiscriminant(u64),
    #[error("forms have different discriminants")]
    DiscriminantMismatch,
    #[error("{0} is not 7 mod 8, so 2 does not split")]
    BadResidue(u64),
    #[error("class-number sum {sum} exceeds the target {target} at d = {d}")]
    LedgerOvershoot { d: u64, sum: u64, target: u64 },
    #[error("period {0} outside 1..=40")]
    PeriodOutOfRange(u32),
}

/// The form `a x^2 + b x y + c y^2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuadForm {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
}

impl QuadForm {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>) -> Self {
        QuadForm { a: a.into(), b: b.into(), c: c.into() }
    }

    /// `b^2 - 4ac`.
    pub fn discriminant(&self) -> BigInt {
        &self.b * &self.b - BigInt::from(4) * &self.a * &self.c
    }

    /// `d` where the discriminant is `-d`.
    fn d(&self) -> BigInt {
        -self.discriminant()
    }

    pub fn is_reduced(&self) -> bool {
        let (a, b, c) = (&self.a, &self.b, &self.c);
        b.abs() <= *a && a <= c && (!(b.abs() == *a || a == c) || !b.is_negative())
    }

    pub fn is_primitive(&self) -> bool {
        self.a.gcd(&self.b).gcd(&self.c).is_one()
    }

    /// The principal form of discriminant `-d`, `d = 3 (mod 4)`.
    pub fn principal(d: u64) -> Self {
        QuadForm::new(1, 1, (d + 1) / 4)
    }

    pub fn inverse(&self) -> Self {
        QuadForm { a: self.a.clone(), b: -&self.b, c: self.c.clone() }.reduced()
    }

    fn normalized(mut self) -> Self {
        let a2 = &self.a * 2;
        if !(-&self.a < self.b && self.b <= self.a) {
            let d = self.d_from_abc();
            let r = (&self.a - &self.b).div_floor(&a2);
            self.b += &a2 * r;
            self.c = (&self.b * &self.b + d) / (&self.a * 4);
        }
        self
    }

    fn d_from_abc(&self) -> BigInt {
        // kept invariant by every transformation
        BigInt::from(4) * &self.a * &self.c - &self.b * &self.b
    }

    /// Equivalent reduced form.
    pub fn reduced(&self) -> Self {
        let mut f = self.clone().normalized();
        loop {
            if f.a > f.c {
                std::mem::swap(&mut f.a, &mut f.c);
                f.b = -f.b;
                f = f.normalized();
            } else if f.a == f.c && f.b.is_negative() {
                f.b = -f.b;
            } else {
                return f;
            }
        }
    }

    fn with_c(a: BigInt, b: BigInt, d: &BigInt) -> Self {
        let c = (&b * &b + d) / (&a * 4);
        QuadForm { a, b, c }
    }
}

impl std::fmt::Display for QuadForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

/// Composition of primitive forms of equal discriminant (Shanks), reduced.
pub fn compose(f: &QuadForm, g: &QuadForm) -> Result<QuadForm, QuadError> {
    if f.discriminant() != g.discriminant() {
        return Err(QuadError::DiscriminantMismatch);
    }
    let d = f.d();
    let (f1, f2) = if f.a > g.a { (g, f) } else { (f, g) };
    let (a1, b1) = (&f1.a, &f1.b);
    let (a2, b2, c2) = (&f2.a, &f2.b, &f2.c);
    let s: BigInt = (b1 + b2) / 2;
    let n = b2 - &s;
    let (y1, dd) = if (a2 % a1).is_zero() {
        (BigInt::zero(), a1.clone())
    } else {
        let e = a2.extended_gcd(a1);
        (e.x, e.gcd)
    };
    let (x2, y2, d1) = if (&s % &dd).is_zero() {
        (BigInt::zero(), BigInt::from(-1), dd.clone())
    } else {
        let e = s.extended_gcd(&dd);
        (e.x, -e.y, e.gcd)
    };
    let v1 = a1 / &d1;
    let v2 = a2 / &d1;
    let r = (&y1 * &y2 * &n - &x2 * c2).mod_floor(&v1);
    let b3 = b2 + BigInt::from(2) * &v2 * &r;
    let a3 = &v1 * &v2;
    Ok(QuadForm::with_c(a3, b3, &d).reduced())
}

fn check_disc(d: u64) -> Result<(), QuadError> {
    if d == 0 || d % 4 != 3 {
        return Err(QuadError::BadDiscriminant(d));
    }
    Ok(())
}

/// Reduced primitive forms of discriminant `-d`, sorted; their number is `h(-d)`.
pub fn reduced_forms(d: u64) -> Result<Vec<QuadForm>, QuadError> {
    check_disc(d)?;
    let mut out = Vec::new();
    let mut a: u64 = 1;
    while 3 * a * a <= d {
        let a_i = a as i64;
        for b in -a_i + 1..=a_i {
            if b.rem_euclid(2) != 1 {
                continue;
            }
            let num = (b * b) as u64 + d;
            if !num.is_multiple_of(4 * a) {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (b < 0 && a == c) {
                continue;
            }
            let f = QuadForm::new(a, b, c);
            if f.is_primitive() {
                out.push(f);
            }
        }
        a += 1;
    }
    out.sort();
    Ok(out)
}

/// `(h(-d), reduced forms)`.
pub fn class_number(d: u64) -> Result<(u64, Vec<QuadForm>), QuadError> {
    let forms = reduced_forms(d)?;
    Ok((forms.len() as u64, forms))
}

/// The form `(2, 1, (d+1)/8)` above the prime 2.
pub fn two_form(d: u64) -> Result<QuadForm, QuadError> {
    if d % 8 != 7 {
        return Err(QuadError::BadResidue(d));
    }
    Ok(QuadForm::new(2, 1, (d + 1) / 8).reduced())
}

/// Order of the class of `(2, 1, (d+1)/8)`.
pub fn two_class_order(d: u64) -> Result<u64, QuadError> {
    let g = two_form(d)?;
    let id = QuadForm::principal(d);
    let mut acc = g.clone();
    let mut n = 1;
    while acc != id {
        acc = compose(&acc, &g)?;
        n += 1;
    }
    Ok(n)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Member {
    pub d: u64,
    pub h: u64,
}

/// The discriminants `-d = 1 (mod 8)` whose prime-2 class has order `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiscriminantSet {
    pub n: u32,
    pub target: u64,
    pub members: Vec<Member>,
}

impl DiscriminantSet {
    pub fn h_sum(&self) -> u64 {
        self.members.iter().map(|m| m.h).sum()
    }

    pub fn is_complete(&self) -> bool {
        self.h_sum() == self.target
    }

    pub fn get(&self, d: u64) -> Option<&Member> {
        self.members.iter().find(|m| m.d == d)
    }
}

/// Any `d` with `two_class_order(d) | n` satisfies `d < 2^(n+2)`: a generator
/// `(x + y sqrt(-d))/2`, `y != 0`, of the `n`-th power of the prime above 2
/// has norm `2^n`, so `x^2 + d y^2 = 2^(n+2)`.
pub fn search_radius(n: u32) -> u64 {
    1u64 << (n + 2)
}

/// Enumerates the discriminant set for period `n`, ascending in `d`, and
/// certifies it by scanning the whole search radius.
pub fn discriminant_set(n: u32) -> Result<DiscriminantSet, QuadError> {
    if !(1..=40).contains(&n) {
        return Err(QuadError::PeriodOutOfRange(n));
    }
    if n == 1 {
        // the fixed points 0 and -1 take one of the two residues
        return Ok(DiscriminantSet { n, target: 1, members: vec![Member { d: 7, h: 1 }] });
    }
    let target = primitive_count(n as u64) as u64;
    let radius = search_radius(n);
    let candidates: Vec<u64> = (7..radius).step_by(8).collect();
    let hits: Vec<Option<Member>> = candidates
        .par_iter()
        .map(|&d| {
            let order = two_class_order(d).expect("d = 7 mod 8");
            (order == n as u64).then(|| Member { d, h: class_number(d).expect("valid").0 })
        })
        .collect();
    let mut members = Vec::new();
    let mut sum = 0;
    for m in hits.into_iter().flatten() {
        sum += m.h;
        if sum > target {
            return Err(QuadError::LedgerOvershoot { d: m.d, sum, target });
        }
        members.push(m);
    }
    Ok(DiscriminantSet { n, target, members })
}

/// Jacobi symbol `(m | k)` for odd positive `k`; the Legendre symbol when `k` is prime.
pub fn kronecker(m: i64, k: u64) -> i32 {
    assert!(k % 2 == 1, "modulus must be odd");
    let mut a = m.rem_euclid(k as i64) as u64;
    let mut n = k;
    let mut t = 1;
    while a != 0 {
        while a.is_multiple_of(2) {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

/// Outcome of the prime-divisor checks on `disc(b_d)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DiscPrimeReport {
    pub d: u64,
    pub h: u64,
    /// Exponent of 2 in the discriminant.
    pub two_adic: u64,
    pub two_power_ok: bool,
    /// Odd primes up to the trial bound dividing the discriminant.
    pub odd_primes: Vec<u64>,
    pub residues_ok: bool,
}

/// Checks `2^(3h(h-1)) | disc(b_d)` and that no odd prime `p <= bound`
/// dividing the discriminant has `(-d | p) = 1`.
pub fn discriminant_prime_check(b: &IntPoly, d: u64, bound: u64) -> Result<DiscPrimeReport, QuadError> {
    let h = class_number(d)?.0;
    let disc = discriminant(b);
    let two_adic = disc.trailing_zeros().unwrap_or(u64::MAX);
    let two_power_ok = !disc.is_zero() && two_adic >= 3 * h * (h - 1);
    let mut odd_primes = Vec::new();
    let mut rest = disc.abs() >> two_adic.min(disc.bits());
    for p in crate::modp::odd_primes_from(3).take_while(|&p| p <= bound) {
        let pb = BigInt::from(p);
        if (&rest % &pb).is_zero() {
            odd_primes.push(p);
            while (&rest % &pb).is_zero() {
                rest /= &pb;
            }
        }
        if rest.is_one() {
            break;
        }
    }
    let residues_ok = odd_primes.iter().all(|&p| kronecker(-(d as i64), p) != 1);
    Ok(DiscPrimeReport { d, h, two_adic, two_power_ok, odd_primes, residues_ok })
}

/// `d` as an `i64` discriminant, for callers that need the signed value.
pub fn signed_disc(d: u64) -> i64 {
    -(d.to_i64().expect("small discriminant"))
}
