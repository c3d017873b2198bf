//! Truncated Laurent series in `q` with exact rational coefficients, and the
//! q-expansion of the modular lambda function.
//!
//! Convention: `q = exp(pi i z)`, so `lambda(2z)` is obtained by `q -> q^2`.
//! (Product formulas written with `q = exp(2 pi i tau)` differ by that
//! substitution; only the first convention is used here.)

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::poly::IntPoly;

/// `sum_{i < len} coeffs[i] q^(lead + i) + O(q^(lead + len))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSeries {
    lead: i64,
    coeffs: Vec<BigRational>,
}

impl QSeries {
    pub fn new(lead: i64, coeffs: Vec<BigRational>) -> Self {
        QSeries { lead, coeffs }
    }

    pub fn from_ints(lead: i64, coeffs: &[BigInt]) -> Self {
        QSeries::new(lead, coeffs.iter().map(|c| BigRational::from_integer(c.clone())).collect())
    }

    /// The constant `c` known to `len` terms.
    pub fn constant(c: BigRational, len: usize) -> Self {
        let mut coeffs = vec![BigRational::zero(); len];
        if len > 0 {
            coeffs[0] = c;
        }
        QSeries::new(0, coeffs)
    }

    pub fn lead(&self) -> i64 {
        self.lead
    }

    /// Number of known terms.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Exclusive upper end of the known exponents.
    pub fn precision(&self) -> i64 {
        self.lead + self.coeffs.len() as i64
    }

    /// Coefficient of `q^e`, zero below the lead. Panics beyond the precision.
    pub fn coeff(&self, e: i64) -> BigRational {
        assert!(e < self.precision(), "q^{e} is beyond the known terms");
        if e < self.lead {
            BigRational::zero()
        } else {
            self.coeffs[(e - self.lead) as usize].clone()
        }
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn valuation(&self) -> Option<i64> {
        self.coeffs.iter().position(|c| !c.is_zero()).map(|i| self.lead + i as i64)
    }

    pub fn truncate(&self, len: usize) -> Self {
        QSeries::new(self.lead, self.coeffs[..len.min(self.len())].to_vec())
    }

    /// Drops leading zero coefficients.
    pub fn normalized(&self) -> Self {
        let skip = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        QSeries::new(self.lead + skip as i64, self.coeffs[skip..].to_vec())
    }

    pub fn add(&self, o: &Self) -> Self {
        let lead = self.lead.min(o.lead);
        let prec = self.precision().min(o.precision());
        let coeffs = (lead..prec).map(|e| self.coeff(e) + o.coeff(e)).collect();
        QSeries::new(lead, coeffs)
    }

    pub fn neg(&self) -> Self {
        QSeries::new(self.lead, self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        QSeries::new(self.lead, self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        let a = self.normalized();
        let b = o.normalized();
        let len = a.len().min(b.len());
        let mut coeffs = vec![BigRational::zero(); len];
        for (i, x) in a.coeffs.iter().take(len).enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().take(len - i).enumerate() {
                coeffs[i + j] += x * y;
            }
        }
        QSeries::new(a.lead + b.lead, coeffs)
    }

    /// Multiplicative inverse; `None` when no nonzero term is known.
    pub fn inverse(&self) -> Option<Self> {
        let a = self.normalized();
        let c0 = a.coeffs.first()?.clone();
        let inv0 = c0.recip();
        let n = a.len();
        let mut out: Vec<BigRational> = Vec::with_capacity(n);
        out.push(inv0.clone());
        for k in 1..n {
            let mut s = BigRational::zero();
            for i in 1..=k {
                s += &a.coeffs[i] * &out[k - i];
            }
            out.push(-s * &inv0);
        }
        Some(QSeries::new(-a.lead, out))
    }

    pub fn div(&self, o: &Self) -> Option<Self> {
        Some(self.mul(&o.inverse()?))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = QSeries::constant(BigRational::one(), self.normalized().len());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// True when every known coefficient is an integer.
    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }
}

/// `q -> q^k`. All information is kept: a series known to `len` terms
/// becomes one known to `k * len` terms.
pub fn substitute_q_power(s: &QSeries, k: u32) -> QSeries {
    assert!(k >= 1, "dilation factor must be positive");
    let k = k as usize;
    let mut coeffs = vec![BigRational::zero(); s.len() * k];
    for (i, c) in s.coeffs.iter().enumerate() {
        coeffs[i * k] = c.clone();
    }
    QSeries::new(s.lead * k as i64, coeffs)
}

/// Multiplies an integer series (truncated to `n` terms) by `(1 + q^m)^8`.
fn mul_one_plus_pow8(v: &mut [BigInt], m: usize) {
    for _ in 0..8 {
        for i in (m..v.len()).rev() {
            let t = v[i - m].clone();
            v[i] += t;
        }
    }
}

/// `lambda = 16 q prod (1 + q^(2n))^8 / prod (1 + q^(2n-1))^8` to `terms`
/// terms, i.e. through `q^terms`.
pub fn lambda_series(terms: usize) -> QSeries {
    assert!(terms >= 1);
    let n = terms;
    let mut num = vec![BigInt::zero(); n];
    num[0] = BigInt::one();
    let mut den = num.clone();
    for m in 1..n {
        if m % 2 == 0 {
            mul_one_plus_pow8(&mut num, m);
        } else {
            mul_one_plus_pow8(&mut den, m);
        }
    }
    // den has constant term 1: invert over the integers
    let mut inv = vec![BigInt::zero(); n];
    inv[0] = BigInt::one();
    for k in 1..n {
        let mut s = BigInt::zero();
        for i in 1..=k {
            if !den[i].is_zero() {
                s += &den[i] * &inv[k - i];
            }
        }
        inv[k] = -s;
    }
    let mut out = vec![BigInt::zero(); n];
    for (i, a) in num.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (j, b) in inv.iter().take(n - i).enumerate() {
            out[i + j] += a * b;
        }
    }
    for c in out.iter_mut() {
        *c *= 16;
    }
    QSeries::from_ints(1, &out)
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Outcome of the modular-equation checks.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModularEquationReport {
    pub terms: usize,
    /// `lambda^2(z) (lambda(2z) - 1)^2 + 16 lambda(2z) (lambda(z) - 1)` vanishes.
    pub identity_ok: bool,
    pub first_failure: Option<i64>,
    /// The rearranged form `(l2 - 1)^2 / l2 + 16 (l - 1) / l^2` vanishes.
    pub rearranged_ok: bool,
    pub lambda_integral: bool,
    /// Leading coefficients of `(lambda(2z) - 1)^2 / lambda(2z)` from `q^-2`.
    pub f_head: Vec<String>,
    pub f_head_ok: bool,
}

impl ModularEquationReport {
    pub fn ok(&self) -> bool {
        self.identity_ok && self.rearranged_ok && self.lambda_integral && self.f_head_ok
    }
}

/// Expected opening of the `f` series, exponents `-2..=4`.
pub fn f_head_expected() -> Vec<BigRational> {
    vec![rat(1, 16), rat(0, 1), rat(-3, 2), rat(0, 1), rat(69, 4), rat(0, 1), rat(-128, 1)]
}

pub fn verify_modular_equation(terms: usize) -> ModularEquationReport {
    assert!(terms >= 8, "need at least 8 terms");
    let l = lambda_series(terms);
    let l2 = substitute_q_power(&l, 2);
    let one = QSeries::constant(BigRational::one(), 2 * terms + 2);
    let l2m1 = l2.sub(&one);
    let lm1 = l.sub(&one.truncate(terms + 1));
    let lhs = l.mul(&l).mul(&l2m1.mul(&l2m1));
    let rhs = l2.mul(&lm1).scale(&rat(-16, 1));
    let diff = lhs.sub(&rhs).truncate(terms);
    let first_failure = diff.valuation();

    let f = l2m1.mul(&l2m1).div(&l2).expect("nonzero series");
    let g = lm1.scale(&rat(16, 1)).div(&l.mul(&l)).expect("nonzero series");
    let sum = f.add(&g);
    let rearranged_ok = sum.is_zero() && sum.len() >= terms / 2;

    let expected = f_head_expected();
    let head: Vec<BigRational> = (-2..=4).map(|e| f.coeff(e)).collect();
    ModularEquationReport {
        terms,
        identity_ok: first_failure.is_none() && diff.len() == terms,
        first_failure,
        rearranged_ok,
        lambda_integral: l.is_integral(),
        f_head: head.iter().map(|c| c.to_string()).collect(),
        f_head_ok: head == expected,
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct JLambdaReport {
    pub trials: usize,
    pub seed: u64,
    pub failures: Vec<String>,
    /// The two expressions agree as rational functions of lambda.
    pub symbolic_ok: bool,
}

impl JLambdaReport {
    pub fn ok(&self) -> bool {
        self.symbolic_ok && self.failures.is_empty()
    }
}

/// `256 (s + 1)^3 / s` with `s = (l - 1)^2 / l`.
pub fn j_via_s(l: &BigRational) -> BigRational {
    let one = BigRational::one();
    let s = (l - &one) * (l - &one) / l;
    let s1 = &s + &one;
    rat(256, 1) * &s1 * &s1 * &s1 / s
}

/// `256 (t - 1)^3 / t` with `t = l^2 / (l - 1)`.
pub fn j_via_t(l: &BigRational) -> BigRational {
    let one = BigRational::one();
    let t = l * l / (l - &one);
    let t1 = &t - &one;
    rat(256, 1) * &t1 * &t1 * &t1 / t
}

/// Exact comparison at random rationals plus the polynomial identity after
/// clearing denominators.
pub fn verify_j_lambda_identity(trials: usize, seed: u64) -> JLambdaReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = Vec::new();
    let mut done = 0;
    while done < trials {
        let l = rat(rng.gen_range(-1000..=1000), rng.gen_range(1..=1000));
        if l.is_zero() || l.is_one() {
            continue;
        }
        if j_via_s(&l) != j_via_t(&l) {
            failures.push(l.to_string());
        }
        done += 1;
    }
    let x = IntPoly::x();
    let one = IntPoly::one();
    let xm1 = &x - &one;
    // s = sn / sd, t = tn / td
    let (sn, sd) = (&xm1 * &xm1, x.clone());
    let (tn, td) = (&x * &x, xm1.clone());
    let s1 = &sn + &sd;
    let t1 = &tn - &td;
    // (s1/sd)^3 * sd/sn  vs  (t1/td)^3 * td/tn
    let n1 = s1.pow(3) * sd.clone();
    let d1 = sd.pow(3) * sn;
    let n2 = t1.pow(3) * td.clone();
    let d2 = td.pow(3) * tn;
    let symbolic_ok = (&n1 * &d2 - &n2 * &d1).is_zero();
    JLambdaReport { trials, seed, failures, symbolic_ok }
}

/// Integer value of a rational, if it is one.
pub fn as_integer(r: &BigRational) -> Option<BigInt> {
    r.is_integer().then(|| r.to_integer())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda_opening() {
        let l = lambda_series(8);
        let head: Vec<BigRational> = (1..=6).map(|e| l.coeff(e)).collect();
        let expected: Vec<BigRational> = [16, -128, 704, -3072, 11488, -38400].iter().map(|&c| rat(c, 1)).collect();
        assert_eq!(head, expected);
        assert!(lambda_series(128).is_integral());
    }

    #[test]
    fn dilation_laws() {
        let l = lambda_series(10);
        assert_eq!(substitute_q_power(&l, 1), l);
        let twice = substitute_q_power(&substitute_q_power(&l, 2), 2);
        assert_eq!(twice, substitute_q_power(&l, 4));
        let l2 = substitute_q_power(&l, 2);
        assert_eq!(l2.coeff(2), rat(16, 1));
        assert_eq!(l2.coeff(3), rat(0, 1));
        assert_eq!(l2.coeff(4), rat(-128, 1));
    }

    #[test]
    fn series_arithmetic() {
        let l = lambda_series(12);
        let inv = l.inverse().unwrap();
        let prod = l.mul(&inv);
        assert_eq!(prod.lead(), 0);
        assert_eq!(prod.coeff(0), rat(1, 1));
        assert!(prod.truncate(prod.len()).coeffs()[1..].iter().all(Zero::is_zero));
    }

    #[test]
    fn modular_equation() {
        let r = verify_modular_equation(16);
        assert!(r.ok(), "{r:?}");
        assert_eq!(r.f_head[2], "-3/2");
    }

    #[test]
    fn j_lambda() {
        assert_eq!(j_via_s(&rat(2, 1)), rat(1728, 1));
        assert_eq!(j_via_t(&rat(2, 1)), rat(1728, 1));
        assert_eq!(j_via_s(&rat(-1, 1)), j_via_t(&rat(-1, 1)));
        let r = verify_j_lambda_identity(50, 7);
        assert!(r.ok());
    }
}
