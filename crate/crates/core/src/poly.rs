//! Dense univariate and sparse bivariate polynomials over the integers.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::resultant::resultant_uni;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("polynomial is not divisible")]
    NotDivisible,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("malformed polynomial JSON: {0}")]
    BadJson(String),
}

/// Dense polynomial with integer coefficients, ascending degree order.
///
/// The zero polynomial has an empty coefficient vector. The variable name is
/// presentation only and does not take part in equality.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(into = "PolyJson", try_from = "PolyJson")]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
    var: String,
}

impl PartialEq for IntPoly {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl Eq for IntPoly {}

impl std::hash::Hash for IntPoly {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

fn trim(coeffs: &mut Vec<BigInt>) {
    while coeffs.last().is_some_and(|c| c.is_zero()) {
        coeffs.pop();
    }
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        trim(&mut coeffs);
        IntPoly { coeffs, var: "x".to_string() }
    }

    pub fn with_var(mut coeffs: Vec<BigInt>, var: &str) -> Self {
        trim(&mut coeffs);
        IntPoly { coeffs, var: var.to_string() }
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        Self::new(Vec::new())
    }

    pub fn one() -> Self {
        Self::constant(BigInt::one())
    }

    pub fn constant(c: BigInt) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Self::from_i64s(&[0, 1])
    }

    pub fn monomial(c: BigInt, k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn renamed(mut self, var: &str) -> Self {
        self.var = var.to_string();
        self
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0.
    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn lc(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero().renamed(&self.var);
        }
        IntPoly { coeffs: self.coeffs.iter().map(|a| a * c).collect(), var: self.var.clone() }
    }

    /// Exact division of every coefficient by `c`.
    pub fn div_scalar(&self, c: &BigInt) -> Result<Self, PolyError> {
        if c.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            let (q, r) = a.div_rem(c);
            if !r.is_zero() {
                return Err(PolyError::NotDivisible);
            }
            out.push(q);
        }
        Ok(IntPoly { coeffs: out, var: self.var.clone() })
    }

    /// Nonnegative gcd of the coefficients; zero for the zero polynomial.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Content-free, positive leading coefficient.
    pub fn canonical(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = self.content();
        if self.lc().is_negative() {
            c = -c;
        }
        self.div_scalar(&c).expect("content divides")
    }

    /// Same polynomial with a positive leading coefficient.
    pub fn with_positive_lc(&self) -> Self {
        if self.lc().is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self.coeffs.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect();
        Self::with_var(coeffs, &self.var)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one().renamed(&self.var);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `self(inner)`.
    pub fn compose(&self, inner: &IntPoly) -> Self {
        let mut acc = IntPoly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * inner) + &IntPoly::constant(c.clone());
        }
        acc.renamed(&self.var)
    }

    /// `self(c * x)`.
    pub fn scale_var(&self, c: &BigInt) -> Self {
        let mut pw = BigInt::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            out.push(a * &pw);
            pw *= c;
        }
        Self::with_var(out, &self.var)
    }

    /// `self(x^k)`.
    pub fn inflate(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut out = vec![BigInt::zero(); self.deg() * k + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[i * k] = c.clone();
        }
        Self::with_var(out, &self.var)
    }

    /// `self(-x)`.
    pub fn negate_var(&self) -> Self {
        self.scale_var(&BigInt::from(-1))
    }

    /// Splits `f(x) = E(x^2) + x O(x^2)`.
    pub fn even_odd(&self) -> (IntPoly, IntPoly) {
        let even = self.coeffs.iter().step_by(2).cloned().collect();
        let odd = self.coeffs.iter().skip(1).step_by(2).cloned().collect();
        (Self::with_var(even, &self.var), Self::with_var(odd, &self.var))
    }

    /// `x^deg * f(1/x)` with the formal degree `deg(f)`.
    pub fn reversed(&self) -> Self {
        let mut c = self.coeffs.clone();
        c.reverse();
        Self::with_var(c, &self.var)
    }

    /// Quotient and remainder when the divisor's leading coefficient divides
    /// every step exactly; errors otherwise.
    pub fn div_rem_exact(&self, divisor: &IntPoly) -> Result<(IntPoly, IntPoly), PolyError> {
        if divisor.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        let dd = divisor.deg();
        let lc = divisor.lc();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((IntPoly::zero(), self.clone()));
        }
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let top = &rem[k + dd];
            if top.is_zero() {
                continue;
            }
            let (q, r) = top.div_rem(&lc);
            if !r.is_zero() {
                return Err(PolyError::NotDivisible);
            }
            for (j, c) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &q * c;
            }
            quot[k] = q;
        }
        Ok((Self::with_var(quot, &self.var), Self::with_var(rem, &self.var)))
    }

    /// Pseudo-remainder: `lc(b)^(deg a - deg b + 1) * a mod b`.
    pub fn pseudo_rem(&self, b: &IntPoly) -> IntPoly {
        let db = b.deg();
        if self.is_zero() || self.deg() < db {
            return self.clone();
        }
        let lc = b.lc();
        let mut r = self.coeffs.clone();
        let mut steps = 0u32;
        let total = (self.deg() - db + 1) as u32;
        while r.len() > db && !r.is_empty() {
            let k = r.len() - 1 - db;
            let top = r.last().cloned().unwrap();
            for c in r.iter_mut() {
                *c *= &lc;
            }
            for (j, c) in b.coeffs.iter().enumerate() {
                r[k + j] -= &top * c;
            }
            trim(&mut r);
            steps += 1;
        }
        let fix = num_traits::pow(lc, (total - steps) as usize);
        Self::with_var(r.into_iter().map(|c| c * &fix).collect(), &self.var)
    }

    /// Greatest common divisor over the integers, canonical form.
    pub fn gcd(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() {
            return other.canonical();
        }
        if other.is_zero() {
            return self.canonical();
        }
        let cont = self.content().gcd(&other.content());
        let (mut a, mut b) = (self.canonical(), other.canonical());
        if a.deg() < b.deg() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            if b.deg() == 0 {
                return IntPoly::constant(cont).renamed(&self.var);
            }
            let r = a.pseudo_rem(&b);
            a = b;
            b = if r.is_zero() { r } else { r.canonical() };
        }
        a.scale(&cont).canonical_sign()
    }

    fn canonical_sign(self) -> Self {
        self.with_positive_lc()
    }

    /// Coefficients reduced into `[0, p)`.
    pub fn mod_u64(&self, p: u64) -> Vec<u64> {
        let pb = BigInt::from(p);
        let mut v: Vec<u64> = self.coeffs.iter().map(|c| c.mod_floor(&pb).to_u64().expect("reduced")).collect();
        while v.last() == Some(&0) {
            v.pop();
        }
        v
    }

    /// Max absolute coefficient.
    pub fn height(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).max().unwrap_or_default()
    }

    pub fn norm1(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).sum()
    }

    /// Square of the Euclidean norm.
    pub fn norm2_sq(&self) -> BigInt {
        self.coeffs.iter().map(|c| c * c).sum()
    }

    pub fn to_json(&self) -> PolyJson {
        PolyJson { var: self.var.clone(), coeffs: self.coeffs.iter().map(|c| c.to_string()).collect() }
    }

    pub fn from_json(j: &PolyJson) -> Result<Self, PolyError> {
        let coeffs = j
            .coeffs
            .iter()
            .map(|s| s.parse::<BigInt>().map_err(|e| PolyError::BadJson(format!("{s:?}: {e}"))))
            .collect::<Result<Vec<_>, _>>()?;
        let p = Self::with_var(coeffs, &j.var);
        if p.coeffs.len() != j.coeffs.len() {
            return Err(PolyError::BadJson("trailing zero coefficients".into()));
        }
        Ok(p)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&self.to_json()).expect("serializable")
    }

    pub fn from_json_str(s: &str) -> Result<Self, PolyError> {
        let j: PolyJson = serde_json::from_str(s).map_err(|e| PolyError::BadJson(e.to_string()))?;
        Self::from_json(&j)
    }
}

impl std::str::FromStr for IntPoly {
    type Err = PolyError;

    /// Parses sums of terms like `-13x^3`, `5*x^{10}`, `x`, `8`.
    fn from_str(s: &str) -> Result<Self, PolyError> {
        let bad = || PolyError::BadJson(format!("cannot parse polynomial {s:?}"));
        let text: String = s.chars().filter(|c| !c.is_whitespace() && *c != '{' && *c != '}').collect();
        if text.is_empty() {
            return Err(bad());
        }
        let mut var: Option<String> = None;
        let mut coeffs: Vec<BigInt> = Vec::new();
        let bytes = text.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            let mut neg = false;
            if bytes[i] == b'+' || bytes[i] == b'-' {
                neg = bytes[i] == b'-';
                i += 1;
            }
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let mut c: BigInt = if i > start { text[start..i].parse().map_err(|_| bad())? } else { BigInt::one() };
            if i < bytes.len() && bytes[i] == b'*' {
                i += 1;
            }
            let mut exp = 0usize;
            if i < bytes.len() && bytes[i].is_ascii_alphabetic() {
                let vstart = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                let name = &text[vstart..i];
                match &var {
                    Some(v) if v != name => return Err(bad()),
                    _ => var = Some(name.to_string()),
                }
                exp = 1;
                if i < bytes.len() && bytes[i] == b'^' {
                    i += 1;
                    let estart = i;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    exp = text[estart..i].parse().map_err(|_| bad())?;
                }
            } else if i == start {
                return Err(bad());
            }
            if neg {
                c = -c;
            }
            if coeffs.len() <= exp {
                coeffs.resize(exp + 1, BigInt::zero());
            }
            coeffs[exp] += c;
        }
        Ok(IntPoly::with_var(coeffs, var.as_deref().unwrap_or("x")))
    }
}

/// Wire form `{"var": "x", "coeffs": ["c0", "c1", ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct PolyJson {
    pub var: String,
    pub coeffs: Vec<String>,
}

impl From<IntPoly> for PolyJson {
    fn from(p: IntPoly) -> Self {
        p.to_json()
    }
}

impl TryFrom<PolyJson> for IntPoly {
    type Error = PolyError;

    fn try_from(j: PolyJson) -> Result<Self, PolyError> {
        IntPoly::from_json(&j)
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_mag = i == 0 || !mag.is_one();
            if show_mag {
                write!(f, "{mag}")?;
            }
            if i > 0 {
                if show_mag {
                    write!(f, "*")?;
                }
                write!(f, "{}", self.var)?;
                if i > 1 {
                    write!(f, "^{i}")?;
                }
            }
        }
        Ok(())
    }
}

impl Add for &IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n)
            .map(|i| match (self.coeffs.get(i), rhs.coeffs.get(i)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        IntPoly::with_var(coeffs, &self.var)
    }
}

impl Sub for &IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        self + &(-rhs)
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly { coeffs: self.coeffs.iter().map(|c| -c).collect(), var: self.var.clone() }
    }
}

impl Mul for &IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero().renamed(&self.var);
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::with_var(out, &self.var)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for IntPoly {
            type Output = IntPoly;
            fn $m(self, rhs: IntPoly) -> IntPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        -&self
    }
}

/// Exact quotient `f / g`; fails unless `g` divides `f` over the integers.
pub fn exact_div(f: &IntPoly, g: &IntPoly) -> Result<IntPoly, PolyError> {
    let (q, r) = f.div_rem_exact(g)?;
    if !r.is_zero() {
        return Err(PolyError::NotDivisible);
    }
    Ok(q.renamed(f.var()))
}

/// `(c x + d)^deg(f) * f((a x + b)/(c x + d))` for `m = [a, b, c, d]`.
pub fn linear_fractional(f: &IntPoly, m: [i64; 4]) -> IntPoly {
    let [a, b, c, d] = m;
    let deg = f.deg();
    let num = IntPoly::from_i64s(&[b, a]);
    let den = IntPoly::from_i64s(&[d, c]);
    let mut nums = vec![IntPoly::one()];
    let mut dens = vec![IntPoly::one()];
    for k in 1..=deg {
        nums.push(&nums[k - 1] * &num);
        dens.push(&dens[k - 1] * &den);
    }
    let mut acc = IntPoly::zero();
    for (i, coef) in f.coeffs().iter().enumerate() {
        if coef.is_zero() {
            continue;
        }
        acc = &acc + &(&nums[i] * &dens[deg - i]).scale(coef);
    }
    acc.renamed(f.var())
}

/// `(x - 1)^deg(f) * f((x + 1)/(x - 1))`.
pub fn moebius_numerator(f: &IntPoly) -> IntPoly {
    linear_fractional(f, [1, 1, 1, -1])
}

/// True when `f = c * g` for a nonzero rational `c`.
pub fn proportional(f: &IntPoly, g: &IntPoly) -> bool {
    f.is_zero() == g.is_zero() && f.canonical() == g.canonical()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rescale {
    /// `f(2x) / 2^k`, `k` maximal.
    In,
    /// `2^k f(x/2)`, `k` minimal for integrality, then made odd-content-free in 2.
    Out,
}

fn two_adic_val(c: &BigInt) -> u64 {
    c.trailing_zeros().unwrap_or(u64::MAX)
}

/// Rescales the variable by 2 and removes the largest power of 2 dividing the
/// coefficients.
pub fn dyadic_rescale(f: &IntPoly, direction: Rescale) -> IntPoly {
    if f.is_zero() {
        return f.clone();
    }
    let d = f.deg();
    let scaled: Vec<BigInt> = match direction {
        Rescale::In => f.coeffs().iter().enumerate().map(|(i, c)| c << i).collect(),
        Rescale::Out => f.coeffs().iter().enumerate().map(|(i, c)| c << (d - i)).collect(),
    };
    let k = scaled.iter().filter(|c| !c.is_zero()).map(two_adic_val).min().unwrap_or(0);
    IntPoly::with_var(scaled.into_iter().map(|c| c >> k).collect(), f.var())
}

/// `(-1)^(d(d-1)/2) Res(f, f') / lc(f)`.
pub fn discriminant(f: &IntPoly) -> BigInt {
    let d = f.deg();
    assert!(d >= 1, "discriminant needs degree >= 1");
    let res = resultant_uni(f, &f.derivative());
    let (q, r) = res.div_rem(&f.lc());
    debug_assert!(r.is_zero());
    if (d * (d - 1) / 2) % 2 == 1 {
        -q
    } else {
        q
    }
}

/// Sparse bivariate integer polynomial; keys are `(deg_x, deg_y)`.
#[derive(Clone, Debug)]
pub struct BiPoly {
    terms: BTreeMap<(u32, u32), BigInt>,
    var_x: String,
    var_y: String,
}

impl PartialEq for BiPoly {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl Eq for BiPoly {}

impl BiPoly {
    pub fn zero_in(var_x: &str, var_y: &str) -> Self {
        BiPoly { terms: BTreeMap::new(), var_x: var_x.into(), var_y: var_y.into() }
    }

    pub fn from_terms<I>(terms: I, var_x: &str, var_y: &str) -> Self
    where
        I: IntoIterator<Item = ((u32, u32), BigInt)>,
    {
        let mut p = Self::zero_in(var_x, var_y);
        for (k, c) in terms {
            p.add_term(k, c);
        }
        p
    }

    pub fn from_i64_terms(terms: &[((u32, u32), i64)], var_x: &str, var_y: &str) -> Self {
        Self::from_terms(terms.iter().map(|&(k, c)| (k, BigInt::from(c))), var_x, var_y)
    }

    pub fn constant(c: BigInt, var_x: &str, var_y: &str) -> Self {
        Self::from_terms([((0, 0), c)], var_x, var_y)
    }

    /// Univariate polynomial embedded in the x slot.
    pub fn from_x_poly(p: &IntPoly, var_x: &str, var_y: &str) -> Self {
        Self::from_terms(p.coeffs().iter().enumerate().map(|(i, c)| ((i as u32, 0), c.clone())), var_x, var_y)
    }

    /// Univariate polynomial embedded in the y slot.
    pub fn from_y_poly(p: &IntPoly, var_x: &str, var_y: &str) -> Self {
        Self::from_terms(p.coeffs().iter().enumerate().map(|(i, c)| ((0, i as u32), c.clone())), var_x, var_y)
    }

    pub fn add_term(&mut self, key: (u32, u32), c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(key) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn var_x(&self) -> &str {
        &self.var_x
    }

    pub fn var_y(&self) -> &str {
        &self.var_y
    }

    pub fn renamed(mut self, var_x: &str, var_y: &str) -> Self {
        self.var_x = var_x.into();
        self.var_y = var_y.into();
        self
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &BigInt)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, i: u32, j: u32) -> BigInt {
        self.terms.get(&(i, j)).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn deg_x(&self) -> u32 {
        self.terms.keys().map(|k| k.0).max().unwrap_or(0)
    }

    pub fn deg_y(&self) -> u32 {
        self.terms.keys().map(|k| k.1).max().unwrap_or(0)
    }

    /// Swaps the roles of the two variables.
    pub fn swapped(&self) -> Self {
        BiPoly {
            terms: self.terms.iter().map(|(&(i, j), c)| ((j, i), c.clone())).collect(),
            var_x: self.var_y.clone(),
            var_y: self.var_x.clone(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero_in(&self.var_x, &self.var_y);
        }
        BiPoly {
            terms: self.terms.iter().map(|(k, a)| (*k, a * c)).collect(),
            var_x: self.var_x.clone(),
            var_y: self.var_y.clone(),
        }
    }

    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in self.terms.values() {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    pub fn div_scalar(&self, c: &BigInt) -> Result<Self, PolyError> {
        let mut terms = BTreeMap::new();
        for (k, a) in &self.terms {
            let (q, r) = a.div_rem(c);
            if !r.is_zero() {
                return Err(PolyError::NotDivisible);
            }
            terms.insert(*k, q);
        }
        Ok(BiPoly { terms, var_x: self.var_x.clone(), var_y: self.var_y.clone() })
    }

    /// Substitutes `y := x`.
    pub fn diagonal(&self) -> IntPoly {
        let n = self.terms.keys().map(|&(i, j)| (i + j) as usize).max().unwrap_or(0);
        let mut out = vec![BigInt::zero(); n + 1];
        for (&(i, j), c) in &self.terms {
            out[(i + j) as usize] += c;
        }
        IntPoly::with_var(out, &self.var_x)
    }

    /// Substitutes a value for y, leaving a polynomial in x.
    pub fn eval_y(&self, y: &BigInt) -> IntPoly {
        let mut out = vec![BigInt::zero(); self.deg_x() as usize + 1];
        let mut pows = vec![BigInt::one()];
        for _ in 0..self.deg_y() {
            let next = pows.last().unwrap() * y;
            pows.push(next);
        }
        for (&(i, j), c) in &self.terms {
            out[i as usize] += c * &pows[j as usize];
        }
        IntPoly::with_var(out, &self.var_x)
    }

    /// Substitutes a value for x, leaving a polynomial in y.
    pub fn eval_x(&self, x: &BigInt) -> IntPoly {
        self.swapped().eval_y(x)
    }

    pub fn eval(&self, x: &BigInt, y: &BigInt) -> BigInt {
        self.eval_y(y).eval(x)
    }

    /// Coefficients with respect to y, as polynomials in x.
    pub fn coeffs_in_y(&self) -> Vec<IntPoly> {
        let mut out = vec![Vec::new(); self.deg_y() as usize + 1];
        for (&(i, j), c) in &self.terms {
            let row = &mut out[j as usize];
            if row.len() <= i as usize {
                row.resize(i as usize + 1, BigInt::zero());
            }
            row[i as usize] = c.clone();
        }
        out.into_iter().map(|c| IntPoly::with_var(c, &self.var_x)).collect()
    }

    /// Leading term in lex order (x before y).
    fn leading(&self) -> Option<((u32, u32), &BigInt)> {
        self.terms.iter().next_back().map(|(k, c)| (*k, c))
    }

    /// Exact quotient; fails if `divisor` does not divide `self`.
    pub fn exact_div(&self, divisor: &BiPoly) -> Result<BiPoly, PolyError> {
        let ((dx, dy), dc) = divisor.leading().ok_or(PolyError::DivisionByZero)?;
        let dc = dc.clone();
        if divisor.terms.len() == 1 {
            let mut terms = BTreeMap::new();
            for (&(i, j), c) in &self.terms {
                if i < dx || j < dy {
                    return Err(PolyError::NotDivisible);
                }
                let (q, r) = c.div_rem(&dc);
                if !r.is_zero() {
                    return Err(PolyError::NotDivisible);
                }
                terms.insert((i - dx, j - dy), q);
            }
            return Ok(BiPoly { terms, var_x: self.var_x.clone(), var_y: self.var_y.clone() });
        }
        let mut rem = self.clone();
        let mut quot = BiPoly::zero_in(&self.var_x, &self.var_y);
        while let Some(((rx, ry), rc)) = rem.leading() {
            if rx < dx || ry < dy {
                return Err(PolyError::NotDivisible);
            }
            let (q, r) = rc.div_rem(&dc);
            if !r.is_zero() {
                return Err(PolyError::NotDivisible);
            }
            let (sx, sy) = (rx - dx, ry - dy);
            for (&(i, j), c) in &divisor.terms {
                rem.add_term((i + sx, j + sy), -(c * &q));
            }
            quot.add_term((sx, sy), q);
        }
        Ok(quot)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = BiPoly::constant(BigInt::one(), &self.var_x, &self.var_y);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn to_json(&self) -> BiPolyJson {
        BiPolyJson {
            vars: [self.var_x.clone(), self.var_y.clone()],
            terms: self.terms.iter().map(|(&(i, j), c)| (i, j, c.to_string())).collect(),
        }
    }

    pub fn from_json(j: &BiPolyJson) -> Result<Self, PolyError> {
        let mut p = BiPoly::zero_in(&j.vars[0], &j.vars[1]);
        for (i, jj, c) in &j.terms {
            let c: BigInt = c.parse().map_err(|e| PolyError::BadJson(format!("{c:?}: {e}")))?;
            p.add_term((*i, *jj), c);
        }
        Ok(p)
    }
}

/// Wire form of a bivariate polynomial: `{"vars": ["x","y"], "terms": [[i, j, "c"], ...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BiPolyJson {
    pub vars: [String; 2],
    pub terms: Vec<(u32, u32, String)>,
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&(i, j), c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let mag = c.abs();
            let mut parts = Vec::new();
            if !mag.is_one() || (i == 0 && j == 0) {
                parts.push(mag.to_string());
            }
            for (v, e) in [(&self.var_x, i), (&self.var_y, j)] {
                match e {
                    0 => {}
                    1 => parts.push(v.clone()),
                    _ => parts.push(format!("{v}^{e}")),
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

impl Add for &BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(*k, c.clone());
        }
        out
    }
}

impl Sub for &BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: &BiPoly) -> BiPoly {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(*k, -c);
        }
        out
    }
}

impl Neg for &BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        self.scale(&BigInt::from(-1))
    }
}

impl Mul for &BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: &BiPoly) -> BiPoly {
        let mut acc: std::collections::HashMap<(u32, u32), BigInt> = std::collections::HashMap::new();
        for (&(i1, j1), a) in &self.terms {
            for (&(i2, j2), b) in &rhs.terms {
                *acc.entry((i1 + i2, j1 + j2)).or_default() += a * b;
            }
        }
        BiPoly::from_terms(acc, &self.var_x, &self.var_y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    #[test]
    fn exact_div_examples() {
        assert_eq!(exact_div(&p(&[-1, 0, 1]), &p(&[-1, 1])).unwrap(), p(&[1, 1]));
        assert_eq!(exact_div(&p(&[1, 0, 1]), &p(&[1, 1])), Err(PolyError::NotDivisible));
        assert_eq!(exact_div(&p(&[1]), &IntPoly::zero()), Err(PolyError::DivisionByZero));
    }

    #[test]
    fn zero_is_empty() {
        let z = p(&[0, 0, 0]);
        assert!(z.is_zero());
        assert_eq!(z.degree(), None);
        assert_eq!(z.coeffs().len(), 0);
        assert_eq!(p(&[1, 2, 0]).degree(), Some(1));
    }

    #[test]
    fn moebius_examples() {
        assert_eq!(moebius_numerator(&p(&[0, 1])), p(&[1, 1]));
        assert_eq!(moebius_numerator(&p(&[2, -1, 1])), p(&[4, -2, 2]));
        let f = p(&[1, 0, 0, 1]);
        assert_eq!(moebius_numerator(&moebius_numerator(&f)), f.scale(&BigInt::from(8)));
    }

    #[test]
    fn parse_examples() {
        let f: IntPoly = "x^4-4x^3+5x^2-2x+4".parse().unwrap();
        assert_eq!(f, p(&[4, -2, 5, -4, 1]));
        let g: IntPoly = "x^{10} - 15*x^9 + 32".parse().unwrap();
        assert_eq!(g.deg(), 10);
        assert_eq!(g.coeff(9), BigInt::from(-15));
        assert_eq!("7".parse::<IntPoly>().unwrap(), p(&[7]));
        assert!("x^2 + y".parse::<IntPoly>().is_err());
        assert!("".parse::<IntPoly>().is_err());
    }

    #[test]
    fn linear_fractional_examples() {
        // u = x/(x-1) in u^2 - u + 16
        assert_eq!(linear_fractional(&p(&[16, -1, 1]), [1, 0, 1, -1]), p(&[16, -31, 16]));
        assert!(proportional(&p(&[2, 4]), &p(&[-1, -2])));
    }

    #[test]
    fn dyadic_examples() {
        let r1 = p(&[0, 2, 1, 0, 1]);
        let t = dyadic_rescale(&r1, Rescale::In);
        assert_eq!(t, p(&[0, 1, 1, 0, 4]));
        assert_eq!(t.mod_u64(2), vec![0, 1, 1]);
        assert_eq!(dyadic_rescale(&p(&[0, 1]), Rescale::In), p(&[0, 1]));
    }

    #[test]
    fn discriminant_examples() {
        assert_eq!(discriminant(&p(&[2, -1, 1])), BigInt::from(-7));
        assert_eq!(discriminant(&p(&[0, 0, 1])), BigInt::zero());
        // cubic x^3 + x + 1: -4 - 27
        assert_eq!(discriminant(&p(&[1, 1, 0, 1])), BigInt::from(-31));
    }

    #[test]
    fn gcd_and_pseudo_rem() {
        let a = &p(&[-1, 1]) * &p(&[2, -1, 1]);
        let b = &p(&[-1, 1]) * &p(&[3, 1]);
        assert_eq!(a.gcd(&b), p(&[-1, 1]));
        assert_eq!(p(&[2, 4]).gcd(&p(&[6, 12])), p(&[2, 4]));
        assert_eq!(p(&[1, 0, 1]).gcd(&p(&[1, 1])), IntPoly::one());
    }

    #[test]
    fn display_is_readable() {
        assert_eq!(p(&[4, -2, 5, -4, 1]).to_string(), "x^4 - 4*x^3 + 5*x^2 - 2*x + 4");
        assert_eq!(p(&[0, -1]).to_string(), "-x");
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        let f = p(&[3375, 1]);
        let s = f.to_json_string();
        assert_eq!(s, r#"{"var":"x","coeffs":["3375","1"]}"#);
        assert_eq!(IntPoly::from_json_str(&s).unwrap(), f);
        assert!(IntPoly::from_json_str(r#"{"var":"x","coeffs":["1","0"]}"#).is_err());
        assert!(IntPoly::from_json_str(r#"{"var":"x","coeffs":["1.5"]}"#).is_err());
    }

    #[test]
    fn bipoly_basics() {
        // g(x, y) = x^2 y^2 + 2x + y^2
        let g = BiPoly::from_i64_terms(&[((2, 2), 1), ((1, 0), 2), ((0, 2), 1)], "x", "y");
        assert_eq!(g.diagonal(), p(&[0, 2, 1, 0, 1]));
        assert_eq!(g.deg_x(), 2);
        assert_eq!(g.eval(&BigInt::from(1), &BigInt::from(2)), BigInt::from(4 + 2 + 4));
        let h = BiPoly::from_i64_terms(&[((1, 0), 1), ((0, 1), -1)], "x", "y");
        let prod = &g * &h;
        assert_eq!(prod.exact_div(&h).unwrap(), g);
        assert_eq!(prod.exact_div(&g).unwrap(), h);
        assert!(g.exact_div(&h).is_err());
        assert_eq!(g.swapped().swapped(), g);
        let j = g.to_json();
        assert_eq!(BiPoly::from_json(&j).unwrap(), g);
    }
}
