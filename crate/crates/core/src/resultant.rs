//! Exact resultants.
//!
//! Two independent algorithms: the subresultant PRS over an integral domain
//! (integers, or bivariate integer polynomials for elimination), and a modular
//! path that evaluates at integer points, takes resultants over word-sized
//! prime fields, interpolates and recombines by CRT under a Hadamard bound.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::modp;
use crate::poly::{BiPoly, IntPoly};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ResultantError {
    #[error("input has degree 0 in the eliminated variable {0}")]
    DegenerateElimination(String),
    #[error("resultant survives in more than two variables: {0:?}")]
    TooManyVariables(Vec<String>),
    #[error("CRT with {used} primes cannot reach the {needed}-bit coefficient bound")]
    InsufficientPrecision { used: usize, needed: u64 },
    #[error("modular reconstruction failed its verification check")]
    VerificationFailed,
}

/// Integral domain with exact division, enough for the subresultant PRS.
pub trait Ring: Clone {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Division known to be exact.
    fn div_exact(&self, o: &Self) -> Self;
}

impl Ring for BigInt {
    fn zero_like(&self) -> Self {
        BigInt::zero()
    }
    fn one_like(&self) -> Self {
        BigInt::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div_exact(&self, o: &Self) -> Self {
        debug_assert!(Zero::is_zero(&(self % o)));
        self / o
    }
}

impl Ring for BiPoly {
    fn zero_like(&self) -> Self {
        BiPoly::zero_in(self.var_x(), self.var_y())
    }
    fn one_like(&self) -> Self {
        BiPoly::constant(BigInt::one(), self.var_x(), self.var_y())
    }
    fn is_zero(&self) -> bool {
        BiPoly::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div_exact(&self, o: &Self) -> Self {
        BiPoly::exact_div(self, o).expect("subresultant division is exact")
    }
}

fn rtrim<R: Ring>(v: &mut Vec<R>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

fn rpow<R: Ring>(a: &R, e: usize) -> R {
    let mut acc = a.one_like();
    for _ in 0..e {
        acc = acc.mul(a);
    }
    acc
}

/// `lc(b)^(deg a - deg b + 1) * a mod b`.
fn prem<R: Ring>(a: &[R], b: &[R]) -> Vec<R> {
    let db = b.len() - 1;
    let lc = b[db].clone();
    let mut r = a.to_vec();
    let mut steps = 0;
    let total = a.len() - db;
    while r.len() > db && !r.is_empty() {
        let k = r.len() - 1 - db;
        let top = r.last().unwrap().clone();
        for c in r.iter_mut() {
            *c = c.mul(&lc);
        }
        for (j, c) in b.iter().enumerate() {
            r[k + j] = r[k + j].sub(&top.mul(c));
        }
        r.pop();
        rtrim(&mut r);
        steps += 1;
    }
    if steps < total {
        let fix = rpow(&lc, total - steps);
        for c in r.iter_mut() {
            *c = c.mul(&fix);
        }
    }
    r
}

/// Resultant of two nonzero polynomials over a domain via the subresultant PRS.
pub fn subresultant<R: Ring>(f: &[R], g: &[R]) -> R {
    let zero = f.first().or(g.first()).expect("nonempty input").zero_like();
    let (mut a, mut b) = (f.to_vec(), g.to_vec());
    rtrim(&mut a);
    rtrim(&mut b);
    if a.is_empty() || b.is_empty() {
        return zero;
    }
    let mut sign_neg = false;
    if a.len() < b.len() {
        if (a.len() - 1) * (b.len() - 1) % 2 == 1 {
            sign_neg = true;
        }
        std::mem::swap(&mut a, &mut b);
    }
    if b.len() == 1 {
        let r = rpow(&b[0], a.len() - 1);
        return if sign_neg { r.neg() } else { r };
    }
    let mut g_ = zero.one_like();
    let mut h = zero.one_like();
    loop {
        let da = a.len() - 1;
        let db = b.len() - 1;
        let delta = da - db;
        if da % 2 == 1 && db % 2 == 1 {
            sign_neg = !sign_neg;
        }
        let r = prem(&a, &b);
        a = b;
        if r.is_empty() {
            return zero;
        }
        let div = g_.mul(&rpow(&h, delta));
        b = r.iter().map(|c| c.div_exact(&div)).collect();
        g_ = a.last().unwrap().clone();
        h = if delta == 0 { h } else { rpow(&g_, delta).div_exact(&rpow(&h, delta - 1)) };
        if b.len() == 1 {
            break;
        }
    }
    let da = a.len() - 1;
    let lb = b[0].clone();
    let res = if da == 0 { h } else { rpow(&lb, da).div_exact(&rpow(&h, da - 1)) };
    if sign_neg {
        res.neg()
    } else {
        res
    }
}

/// Classical resultant of two integer polynomials.
pub fn resultant_uni(f: &IntPoly, g: &IntPoly) -> BigInt {
    if f.is_zero() || g.is_zero() {
        return BigInt::zero();
    }
    subresultant(f.coeffs(), g.coeffs())
}

/// Role of each variable of an input polynomial relative to the elimination.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Slot {
    Elim,
    S1,
    S2,
    Absent,
}

/// Placeholder name for an unused variable slot.
pub const NO_VAR: &str = "_";

/// Triple-indexed view `(e_elim, e_s1, e_s2) -> c`.
type Tri = Vec<((u32, u32, u32), BigInt)>;

struct Layout {
    survivors: Vec<String>,
    f: Tri,
    g: Tri,
}

fn layout(f: &BiPoly, g: &BiPoly, eliminate: &str) -> Result<Layout, ResultantError> {
    let mut survivors: Vec<String> = Vec::new();
    for v in [f.var_x(), f.var_y(), g.var_x(), g.var_y()] {
        if v != eliminate && v != NO_VAR && !survivors.iter().any(|s| s == v) {
            survivors.push(v.to_string());
        }
    }
    // drop survivors that never occur with a positive exponent
    let occurs = |name: &str| {
        [f, g]
            .iter()
            .any(|p| p.terms().any(|(&(i, j), _)| (p.var_x() == name && i > 0) || (p.var_y() == name && j > 0)))
    };
    if survivors.len() > 2 {
        survivors.retain(|s| occurs(s));
    }
    if survivors.len() > 2 {
        return Err(ResultantError::TooManyVariables(survivors));
    }
    let slot = |v: &str| -> Slot {
        if v == eliminate {
            Slot::Elim
        } else if survivors.first().is_some_and(|s| s == v) {
            Slot::S1
        } else if survivors.get(1).is_some_and(|s| s == v) {
            Slot::S2
        } else {
            Slot::Absent
        }
    };
    let tri = |p: &BiPoly| -> Result<Tri, ResultantError> {
        let (sx, sy) = (slot(p.var_x()), slot(p.var_y()));
        let mut out = Tri::new();
        let mut elim_deg = 0;
        for (&(i, j), c) in p.terms() {
            let mut e = [0u32; 3];
            for (s, k) in [(sx, i), (sy, j)] {
                match s {
                    Slot::Elim => e[0] += k,
                    Slot::S1 => e[1] += k,
                    Slot::S2 => e[2] += k,
                    Slot::Absent => debug_assert_eq!(k, 0),
                }
            }
            elim_deg = elim_deg.max(e[0]);
            out.push(((e[0], e[1], e[2]), c.clone()));
        }
        if elim_deg == 0 {
            return Err(ResultantError::DegenerateElimination(eliminate.to_string()));
        }
        Ok(out)
    };
    Ok(Layout { f: tri(f)?, g: tri(g)?, survivors })
}

fn tri_deg(t: &Tri, k: usize) -> u32 {
    t.iter()
        .map(|(e, _)| match k {
            0 => e.0,
            1 => e.1,
            _ => e.2,
        })
        .max()
        .unwrap_or(0)
}

fn output_vars(survivors: &[String]) -> (String, String) {
    (
        survivors.first().cloned().unwrap_or_else(|| NO_VAR.to_string()),
        survivors.get(1).cloned().unwrap_or_else(|| NO_VAR.to_string()),
    )
}

/// Resultant eliminating one variable, by the subresultant PRS with
/// coefficients in the bivariate ring of the surviving variables.
pub fn resultant_bi(f: &BiPoly, g: &BiPoly, eliminate: &str) -> Result<BiPoly, ResultantError> {
    let lay = layout(f, g, eliminate)?;
    let (vx, vy) = output_vars(&lay.survivors);
    let to_coeffs = |t: &Tri| -> Vec<BiPoly> {
        let d = tri_deg(t, 0) as usize;
        let mut out = vec![BiPoly::zero_in(&vx, &vy); d + 1];
        for ((e0, e1, e2), c) in t {
            out[*e0 as usize].add_term((*e1, *e2), c.clone());
        }
        out
    };
    Ok(subresultant(&to_coeffs(&lay.f), &to_coeffs(&lay.g)))
}

/// Number of primes in the modular path, or a forced count for testing.
#[derive(Clone, Copy, Debug, Default)]
pub enum PrimeBudget {
    #[default]
    Auto,
    Fixed(usize),
}

/// log2 of the Hadamard bound on the coefficients of `Res_elim(f, g)`.
fn hadamard_bits(t_f: &Tri, t_g: &Tri) -> u64 {
    fn row_norm_sq(t: &Tri) -> BigInt {
        let d = tri_deg(t, 0) as usize;
        let mut norms = vec![BigInt::zero(); d + 1];
        for ((e0, _, _), c) in t {
            norms[*e0 as usize] += c.abs();
        }
        norms.iter().map(|n| n * n).sum()
    }
    let (m, n) = (tri_deg(t_f, 0) as u64, tri_deg(t_g, 0) as u64);
    let bf = row_norm_sq(t_f).bits();
    let bg = row_norm_sq(t_g).bits();
    // sqrt(a)^n * sqrt(b)^m
    (n * bf).div_ceil(2) + (m * bg).div_ceil(2) + 1
}

fn reduce_tri(t: &Tri, p: u64) -> Vec<((u32, u32, u32), u64)> {
    t.iter().map(|(e, c)| (*e, modp::reduce_big(c, p))).filter(|(_, c)| *c != 0).collect()
}

/// Evaluates at `s1 = a` and returns a map `e_s2 -> poly in elim`.
fn eval_s1(t: &[((u32, u32, u32), u64)], a: u64, p: u64, de: usize, d2: usize) -> Vec<Vec<u64>> {
    let d1 = t.iter().map(|(e, _)| e.1).max().unwrap_or(0) as usize;
    let mut pw = vec![1u64; d1 + 1];
    for i in 1..=d1 {
        pw[i] = modp::mulmod(pw[i - 1], a, p);
    }
    let mut out = vec![vec![0u64; de + 1]; d2 + 1];
    for ((e0, e1, e2), c) in t {
        let v = modp::mulmod(*c, pw[*e1 as usize], p);
        let slot = &mut out[*e2 as usize][*e0 as usize];
        *slot = modp::addmod(*slot, v, p);
    }
    out
}

fn eval_s2(rows: &[Vec<u64>], b: u64, p: u64) -> Vec<u64> {
    let de = rows[0].len();
    let mut out = vec![0u64; de];
    for row in rows.iter().rev() {
        for k in 0..de {
            out[k] = modp::addmod(modp::mulmod(out[k], b, p), row[k], p);
        }
    }
    modp::trim(&mut out);
    out
}

/// Image of the resultant mod `p` as a dense grid `coeff[i][j]` of
/// `s1^i s2^j`, verified at one extra point in each direction.
fn image_mod_p(lay: &Layout, p: u64, deg1: usize, deg2: usize) -> Option<Vec<Vec<u64>>> {
    let (m, n) = (tri_deg(&lay.f, 0) as usize, tri_deg(&lay.g, 0) as usize);
    let rf = reduce_tri(&lay.f, p);
    let rg = reduce_tri(&lay.g, p);
    let (f2, g2) = (tri_deg(&lay.f, 2) as usize, tri_deg(&lay.g, 2) as usize);
    let xs2: Vec<u64> = (0..=deg2 as u64 + 1).collect();
    let xs1: Vec<u64> = (0..=deg1 as u64 + 1).collect();
    // for each s1 point: the interpolated polynomial in s2
    let columns: Vec<Option<Vec<u64>>> = xs1
        .par_iter()
        .map(|&a| {
            let fr = eval_s1(&rf, a, p, m, f2);
            let gr = eval_s1(&rg, a, p, n, g2);
            let vals: Vec<u64> = xs2
                .iter()
                .map(|&b| {
                    let fe = eval_s2(&fr, b, p);
                    let ge = eval_s2(&gr, b, p);
                    modp::resultant_formal(&fe, m, &ge, n, p)
                })
                .collect();
            let poly = modp::interpolate(&xs2[..=deg2], &vals[..=deg2], p);
            if modp::eval(&poly, xs2[deg2 + 1], p) != vals[deg2 + 1] {
                return None;
            }
            Some(poly)
        })
        .collect();
    let columns: Vec<Vec<u64>> = columns.into_iter().collect::<Option<_>>()?;
    let mut grid = vec![vec![0u64; deg2 + 1]; deg1 + 1];
    for j in 0..=deg2 {
        let vals: Vec<u64> = columns.iter().map(|c| *c.get(j).unwrap_or(&0)).collect();
        let poly = modp::interpolate(&xs1[..=deg1], &vals[..=deg1], p);
        if modp::eval(&poly, xs1[deg1 + 1], p) != vals[deg1 + 1] {
            return None;
        }
        for (i, c) in poly.into_iter().enumerate() {
            grid[i][j] = c;
        }
    }
    Some(grid)
}

/// Modular resultant with the Hadamard-bounded prime count.
pub fn resultant_bi_modular(f: &BiPoly, g: &BiPoly, eliminate: &str) -> Result<BiPoly, ResultantError> {
    resultant_bi_modular_with(f, g, eliminate, PrimeBudget::Auto)
}

/// Modular resultant with an explicit prime budget.
///
/// With `PrimeBudget::Fixed(k)` fewer primes than the bound requires yields
/// `InsufficientPrecision`.
pub fn resultant_bi_modular_with(
    f: &BiPoly,
    g: &BiPoly,
    eliminate: &str,
    budget: PrimeBudget,
) -> Result<BiPoly, ResultantError> {
    let lay = layout(f, g, eliminate)?;
    let (vx, vy) = output_vars(&lay.survivors);
    let (m, n) = (tri_deg(&lay.f, 0), tri_deg(&lay.g, 0));
    let deg1 = (tri_deg(&lay.f, 1) * n + tri_deg(&lay.g, 1) * m) as usize;
    let deg2 = (tri_deg(&lay.f, 2) * n + tri_deg(&lay.g, 2) * m) as usize;
    let bits = hadamard_bits(&lay.f, &lay.g);
    // each 62-bit prime contributes at least 61 bits; one more for the sign
    let needed = (bits + 1).div_ceil(61) as usize;
    let count = match budget {
        PrimeBudget::Auto => needed,
        PrimeBudget::Fixed(k) => {
            if k < needed {
                return Err(ResultantError::InsufficientPrecision { used: k, needed: bits });
            }
            k
        }
    };
    // one extra prime as an independent check
    let primes = modp::word_primes(count + 1);
    log::debug!("modular resultant: {} primes, {}x{} grid, {bits}-bit bound", count, deg1 + 2, deg2 + 2);
    let images: Vec<Vec<Vec<u64>>> = primes
        .iter()
        .map(|&p| image_mod_p(&lay, p, deg1, deg2).ok_or(ResultantError::VerificationFailed))
        .collect::<Result<_, _>>()?;
    let mut modulus = BigInt::one();
    let mut acc = vec![vec![BigInt::zero(); deg2 + 1]; deg1 + 1];
    for (img, &p) in images.iter().zip(&primes).take(count) {
        for i in 0..=deg1 {
            for j in 0..=deg2 {
                acc[i][j] = modp::crt_step(&acc[i][j], &modulus, img[i][j], p);
            }
        }
        modulus *= BigInt::from(p);
    }
    let check_p = primes[count];
    let mut out = BiPoly::zero_in(&vx, &vy);
    for (i, row) in acc.into_iter().enumerate() {
        for (j, c) in row.into_iter().enumerate() {
            let c = modp::symmetric(c, &modulus);
            if modp::reduce_big(&c, check_p) != images[count][i][j] {
                return Err(ResultantError::VerificationFailed);
            }
            out.add_term((i as u32, j as u32), c);
        }
    }
    Ok(out)
}

/// Univariate integer resultant by the modular path; cross-check for
/// `resultant_uni`.
pub fn resultant_uni_modular(f: &IntPoly, g: &IntPoly) -> BigInt {
    if f.is_zero() || g.is_zero() {
        return BigInt::zero();
    }
    if f.deg() == 0 || g.deg() == 0 {
        return resultant_uni(f, g);
    }
    let fb = BiPoly::from_x_poly(f, "y", NO_VAR);
    let gb = BiPoly::from_x_poly(g, "y", NO_VAR);
    let r = resultant_bi_modular(&fb, &gb, "y").expect("positive degrees");
    r.coeff(0, 0)
}

/// Groups a bivariate polynomial by the exponent of one variable.
pub fn collect_in(p: &BiPoly, var: &str) -> BTreeMap<u32, IntPoly> {
    let mut out: BTreeMap<u32, Vec<BigInt>> = BTreeMap::new();
    let on_x = p.var_x() == var;
    for (&(i, j), c) in p.terms() {
        let (k, other) = if on_x { (i, j) } else { (j, i) };
        let row = out.entry(k).or_default();
        if row.len() <= other as usize {
            row.resize(other as usize + 1, BigInt::zero());
        }
        row[other as usize] = c.clone();
    }
    let other_var = if on_x { p.var_y() } else { p.var_x() };
    out.into_iter().map(|(k, v)| (k, IntPoly::with_var(v, other_var))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(terms: &[((u32, u32), i64)], x: &str, y: &str) -> BiPoly {
        BiPoly::from_i64_terms(terms, x, y)
    }

    #[test]
    fn uni_examples() {
        let f = IntPoly::from_i64s(&[-2, 1]);
        let g = IntPoly::from_i64s(&[-3, 0, 1]);
        assert_eq!(resultant_uni(&f, &g), BigInt::one());
        assert_eq!(resultant_uni(&g, &g), BigInt::zero());
        assert_eq!(resultant_uni_modular(&f, &g), BigInt::one());
    }

    #[test]
    fn uni_sign_convention() {
        // Res(x^2 + 1, x) = 1, Res(x, x^2 + 1) = 1; Res(x^2, x - 1) = 1
        let a = IntPoly::from_i64s(&[1, 0, 1]);
        let b = IntPoly::from_i64s(&[0, 1]);
        assert_eq!(resultant_uni(&a, &b), BigInt::one());
        assert_eq!(resultant_uni(&b, &a), BigInt::one());
        // Res(x - 1, x - 2) = -1 ; Res(x-2, x-1) = 1
        let c = IntPoly::from_i64s(&[-1, 1]);
        let d = IntPoly::from_i64s(&[-2, 1]);
        assert_eq!(resultant_uni(&c, &d), BigInt::from(-1));
        assert_eq!(resultant_uni(&d, &c), BigInt::from(1));
    }

    #[test]
    fn bi_substitution_example() {
        let f = bi(&[((1, 1), 1), ((0, 0), -1)], "x", "y");
        let g = bi(&[((0, 1), 1), ((1, 0), -1)], "x", "y");
        let r = resultant_bi(&f, &g, "y").unwrap();
        // lc(f) * g(1/x) = 1 - x^2
        let expect = bi(&[((2, 0), -1), ((0, 0), 1)], "x", NO_VAR);
        assert_eq!(r, expect);
        assert_eq!(resultant_bi_modular(&f, &g, "y").unwrap(), expect);
    }

    #[test]
    fn bi_shared_root_and_degenerate() {
        let f = bi(&[((0, 2), 1)], "x", "y");
        let g = bi(&[((0, 1), 1)], "x", "y");
        assert!(resultant_bi(&f, &g, "y").unwrap().is_zero());
        assert!(resultant_bi_modular(&f, &g, "y").unwrap().is_zero());
        let c = bi(&[((1, 0), 1)], "x", "y");
        assert_eq!(resultant_bi(&c, &g, "y"), Err(ResultantError::DegenerateElimination("y".into())));
    }

    #[test]
    fn insufficient_primes() {
        let f = bi(&[((2, 2), 1), ((1, 0), 2), ((0, 2), 1)], "x", "x1");
        let g = bi(&[((2, 2), 1), ((1, 0), 2), ((0, 2), 1)], "x1", "x2");
        let r = resultant_bi_modular_with(&f, &g, "x1", PrimeBudget::Fixed(0));
        assert!(matches!(r, Err(ResultantError::InsufficientPrecision { .. })));
    }
}
