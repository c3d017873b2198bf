//! Class polynomials: numerically from the modular lambda function at CM
//! points, and algebraically from the periodic-point factors `b_d`.

use astro_float::{BigFloat, Consts, RoundingMode, Sign};
use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::dynamics::sqrt_up_to_content;
use crate::poly::{BiPoly, IntPoly};
use crate::quadforms::{reduced_forms, DiscriminantSet, QuadError, QuadForm};
use crate::resultant::{resultant_bi_modular, ResultantError};

#[derive(Debug, thiserror::Error)]
pub enum CmError {
    #[error("imaginary part too small for {0} bits")]
    PrecisionLoss(usize),
    #[error("lambda is too close to 0 or 1")]
    PoleAtExcludedValue,
    #[error("rounding residual too large at {bits} bits")]
    InsufficientPrecision { bits: usize },
    #[error("resultant is not a constant times a square")]
    NotAPerfectSquare,
    #[error("no candidate discriminant matches")]
    NoMatch,
    #[error("candidates {0} and {1} both match")]
    AmbiguousMatch(u64, u64),
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error(transparent)]
    Resultant(#[from] ResultantError),
}

const RM: RoundingMode = RoundingMode::ToEven;

/// Working context: precision plus the constants cache.
pub struct Ctx {
    pub bits: usize,
    cc: Consts,
}

impl Ctx {
    pub fn new(bits: usize) -> Self {
        Ctx { bits: bits.max(64), cc: Consts::new().expect("constants cache") }
    }

    fn pi(&mut self) -> BigFloat {
        self.cc.pi(self.bits, RM)
    }
}

/// Complex number with `BigFloat` parts.
#[derive(Clone, Debug)]
pub struct BigFloatComplex {
    pub re: BigFloat,
    pub im: BigFloat,
    pub bits: usize,
}

impl BigFloatComplex {
    pub fn new(re: BigFloat, im: BigFloat, bits: usize) -> Self {
        BigFloatComplex { re, im, bits }
    }

    pub fn from_i64(v: i64, bits: usize) -> Self {
        Self::new(BigFloat::from_i64(v, bits), BigFloat::from_i64(0, bits), bits)
    }

    pub fn add(&self, o: &Self) -> Self {
        let p = self.bits;
        Self::new(self.re.add(&o.re, p, RM), self.im.add(&o.im, p, RM), p)
    }

    pub fn sub(&self, o: &Self) -> Self {
        let p = self.bits;
        Self::new(self.re.sub(&o.re, p, RM), self.im.sub(&o.im, p, RM), p)
    }

    pub fn mul(&self, o: &Self) -> Self {
        let p = self.bits;
        let re = self.re.mul(&o.re, p, RM).sub(&self.im.mul(&o.im, p, RM), p, RM);
        let im = self.re.mul(&o.im, p, RM).add(&self.im.mul(&o.re, p, RM), p, RM);
        Self::new(re, im, p)
    }

    pub fn norm_sq(&self) -> BigFloat {
        let p = self.bits;
        self.re.mul(&self.re, p, RM).add(&self.im.mul(&self.im, p, RM), p, RM)
    }

    pub fn div(&self, o: &Self) -> Self {
        let p = self.bits;
        let n = o.norm_sq();
        let conj = Self::new(o.re.clone(), o.im.neg(), p);
        let t = self.mul(&conj);
        Self::new(t.re.div(&n, p, RM), t.im.div(&n, p, RM), p)
    }

    pub fn scale_i64(&self, k: i64) -> Self {
        let p = self.bits;
        let k = BigFloat::from_i64(k, p);
        Self::new(self.re.mul(&k, p, RM), self.im.mul(&k, p, RM), p)
    }

    /// `log2 |z|`, approximately.
    pub fn log2_abs(&self) -> f64 {
        let e = |x: &BigFloat| -> f64 {
            if x.is_zero() {
                f64::NEG_INFINITY
            } else {
                x.exponent().map(|e| e as f64).unwrap_or(f64::NEG_INFINITY)
            }
        };
        e(&self.re).max(e(&self.im))
    }
}

/// Exact conversion of an integral `BigFloat` to `BigInt`.
pub fn bigfloat_to_bigint(x: &BigFloat) -> BigInt {
    if x.is_zero() {
        return BigInt::zero();
    }
    let (words, _, sign, exp, _) = x.as_raw_parts().expect("finite value");
    let digits: Vec<u32> = words.iter().flat_map(|w| [*w as u32, (*w >> 32) as u32]).collect();
    let m = BigUint::new(digits);
    let mbits = (words.len() * 64) as i64;
    let shift = exp as i64 - mbits;
    let mag = if shift >= 0 { m << shift as u64 } else { m >> (-shift) as u64 };
    let v = BigInt::from(mag);
    if sign == Sign::Neg {
        -v
    } else {
        v
    }
}

/// `lambda(tau) = (theta_2 / theta_3)^4` with `q = exp(pi i tau)`.
pub fn lambda_at(tau: &BigFloatComplex, ctx: &mut Ctx) -> Result<BigFloatComplex, CmError> {
    let p = ctx.bits;
    if !tau.im.is_positive() {
        return Err(CmError::PrecisionLoss(p));
    }
    let pi = ctx.pi();
    let mag = tau.im.mul(&pi, p, RM).neg().exp(p, RM, &mut ctx.cc);
    let arg = tau.re.mul(&pi, p, RM);
    let q = BigFloatComplex::new(
        mag.mul(&arg.cos(p, RM, &mut ctx.cc), p, RM),
        mag.mul(&arg.sin(p, RM, &mut ctx.cc), p, RM),
        p,
    );
    let log2_q = q.log2_abs();
    if log2_q.is_nan() || log2_q >= -0.05 {
        return Err(CmError::PrecisionLoss(p));
    }
    let cutoff = -((p + 16) as f64);
    if cutoff / log2_q > 4.0e6 {
        return Err(CmError::PrecisionLoss(p));
    }
    let one = BigFloatComplex::from_i64(1, p);
    let q2 = q.mul(&q);
    // theta_3 = 1 + 2 sum q^(n^2); a = sum_{n>=0} q^(n(n+1))
    let mut theta3 = one.clone();
    let mut sq = q.clone(); // q^(n^2)
    let mut step = q.mul(&q2); // q^(2n+1)
    let mut n = 1f64;
    while n * n * log2_q > cutoff {
        theta3 = theta3.add(&sq.scale_i64(2));
        sq = sq.mul(&step);
        step = step.mul(&q2);
        n += 1.0;
    }
    let mut a = one.clone();
    let mut pr = q2.clone(); // q^(n(n+1))
    let mut step = q2.mul(&q2); // q^(2n+2)
    let mut n = 1f64;
    while n * (n + 1.0) * log2_q > cutoff {
        a = a.add(&pr);
        pr = pr.mul(&step);
        step = step.mul(&q2);
        n += 1.0;
    }
    let ratio = a.div(&theta3);
    let r2 = ratio.mul(&ratio);
    Ok(r2.mul(&r2).mul(&q).scale_i64(16))
}

/// `J(l) = 256 (l^2 - l + 1)^3 / (l^2 (l - 1)^2)`.
pub fn j_from_lambda(l: &BigFloatComplex) -> Result<BigFloatComplex, CmError> {
    let p = l.bits;
    let one = BigFloatComplex::from_i64(1, p);
    let lm1 = l.sub(&one);
    let guard = -(p as f64) / 2.0;
    if l.log2_abs() < guard || lm1.log2_abs() < guard {
        return Err(CmError::PoleAtExcludedValue);
    }
    let l2 = l.mul(l);
    let num = l2.sub(l).add(&one);
    let num3 = num.mul(&num).mul(&num).scale_i64(256);
    let den = l2.mul(&lm1.mul(&lm1));
    Ok(num3.div(&den))
}

/// The CM point `(-b + i sqrt(d)) / (2a)` of a form.
pub fn cm_point(f: &QuadForm, d: u64, ctx: &mut Ctx) -> BigFloatComplex {
    let p = ctx.bits;
    let a2 = BigFloat::from_i64(f.a.to_i64().expect("small form") * 2, p);
    let b = BigFloat::from_i64(f.b.to_i64().expect("small form"), p);
    let sd = BigFloat::from_u64(d, p).sqrt(p, RM);
    BigFloatComplex::new(b.neg().div(&a2, p, RM), sd.div(&a2, p, RM), p)
}

/// Working precision for the class polynomial of discriminant `-d`.
pub fn precision_estimate(d: u64) -> Result<usize, CmError> {
    let forms = reduced_forms(d)?;
    let inv_a: f64 = forms.iter().map(|f| 1.0 / f.a.to_f64().unwrap_or(f64::MAX)).sum();
    let est = 1.5 * (std::f64::consts::PI * (d as f64).sqrt() / std::f64::consts::LN_2) * inv_a;
    Ok(est.ceil() as usize + 128)
}

/// Class polynomial at a fixed precision, with the largest rounding residual
/// as `log2` (below `-2` is required).
pub fn class_poly_at(d: u64, bits: usize) -> Result<(IntPoly, f64), CmError> {
    let forms = reduced_forms(d)?;
    let roots: Vec<BigFloatComplex> = forms
        .par_iter()
        .map(|f| {
            let mut ctx = Ctx::new(bits);
            let tau = cm_point(f, d, &mut ctx);
            let l = lambda_at(&tau, &mut ctx)?;
            j_from_lambda(&l)
        })
        .collect::<Result<_, _>>()?;
    let p = roots[0].bits;
    let mut coeffs = vec![BigFloatComplex::from_i64(1, p)];
    for r in &roots {
        let mut next = vec![BigFloatComplex::from_i64(0, p); coeffs.len() + 1];
        for (i, c) in coeffs.iter().enumerate() {
            next[i + 1] = next[i + 1].add(c);
            next[i] = next[i].sub(&c.mul(r));
        }
        coeffs = next;
    }
    let mut worst = f64::NEG_INFINITY;
    let mut ints = Vec::with_capacity(coeffs.len());
    for c in &coeffs {
        let rounded = c.re.round(0, RM);
        let res = BigFloatComplex::new(c.re.sub(&rounded, p, RM), c.im.clone(), p);
        worst = worst.max(res.log2_abs());
        ints.push(bigfloat_to_bigint(&rounded));
    }
    if worst.is_nan() || worst >= -2.0 {
        return Err(CmError::InsufficientPrecision { bits });
    }
    Ok((IntPoly::new(ints), worst))
}

/// Class polynomial `H_{-d}`, monic, doubling the precision on failure.
pub fn class_poly(d: u64) -> Result<IntPoly, CmError> {
    let mut bits = precision_estimate(d)?;
    let mut tries = 0;
    loop {
        match class_poly_at(d, bits) {
            Err(CmError::InsufficientPrecision { .. }) if tries < 4 => {
                log::debug!("class polynomial for d = {d}: retrying above {bits} bits");
                bits *= 2;
                tries += 1;
            }
            other => return other.map(|(p, _)| p),
        }
    }
}

/// `y^16 (1 - y^4) x - 16 (y^8 - 16 y^4 + 16)^3`.
pub fn lambda_j_relation() -> BiPoly {
    let inner = BiPoly::from_i64_terms(&[((0, 8), 1), ((0, 4), -16), ((0, 0), 16)], "x", "y");
    let cube = inner.pow(3).scale(&BigInt::from(-16));
    let lead = BiPoly::from_i64_terms(&[((1, 16), 1), ((1, 20), -1)], "x", "y");
    &lead + &cube
}

/// `H_{-d}` from a factor `b_d`: eliminates `y` against the lambda-j
/// relation, drops the constant and takes the square root.
pub fn class_poly_via_bd(b: &IntPoly) -> Result<IntPoly, CmError> {
    let by = BiPoly::from_y_poly(b, "x", "y");
    let res = resultant_bi_modular(&by, &lambda_j_relation(), "y")?;
    let mut coeffs = vec![BigInt::zero(); res.deg_x() as usize + 1];
    for (&(i, j), c) in res.terms() {
        if j != 0 {
            return Err(CmError::NotAPerfectSquare);
        }
        coeffs[i as usize] = c.clone();
    }
    let r = IntPoly::new(coeffs).canonical();
    let h = sqrt_up_to_content(&r).map_err(|_| CmError::NotAPerfectSquare)?;
    let h = h.canonical();
    if !h.lc().abs().eq(&BigInt::from(1)) {
        return Err(CmError::NotAPerfectSquare);
    }
    Ok(h.with_positive_lc())
}

/// The unique candidate `d` whose class polynomial is that of `factor`.
pub fn match_discriminant(factor: &IntPoly, candidates: &DiscriminantSet) -> Result<u64, CmError> {
    let h = class_poly_via_bd(factor)?;
    let hits: Vec<u64> = candidates
        .members
        .iter()
        .filter(|m| 2 * m.h as usize == factor.deg())
        .map(|m| class_poly(m.d).map(|c| (m.d, c == h)))
        .collect::<Result<Vec<_>, _>>()?
        .into_iter()
        .filter_map(|(d, ok)| ok.then_some(d))
        .collect();
    match hits.as_slice() {
        [] => Err(CmError::NoMatch),
        [d] => Ok(*d),
        [a, b, ..] => Err(CmError::AmbiguousMatch(*a, *b)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conversion() {
        for v in [0i64, 1, -1, 5, -3375, 1 << 40, -(1 << 62) + 7] {
            let x = BigFloat::from_i64(v, 128);
            assert_eq!(bigfloat_to_bigint(&x), BigInt::from(v));
        }
    }

    #[test]
    fn lambda_at_i() {
        let mut ctx = Ctx::new(192);
        let tau = BigFloatComplex::new(BigFloat::from_i64(0, 192), BigFloat::from_i64(1, 192), 192);
        let l = lambda_at(&tau, &mut ctx).unwrap();
        let half = BigFloatComplex::new(BigFloat::from_f64(0.5, 192), BigFloat::from_i64(0, 192), 192);
        assert!(l.sub(&half).log2_abs() < -180.0);
        let j = j_from_lambda(&l).unwrap();
        assert!(j.sub(&BigFloatComplex::from_i64(1728, 192)).log2_abs() < -170.0);
    }

    #[test]
    fn lambda_periodic() {
        let mut ctx = Ctx::new(128);
        let re = BigFloat::from_f64(0.3, 128);
        let im = BigFloat::from_f64(0.9, 128);
        let tau = BigFloatComplex::new(re.clone(), im.clone(), 128);
        let tau2 = BigFloatComplex::new(re.add(&BigFloat::from_i64(2, 128), 128, RM), im, 128);
        let a = lambda_at(&tau, &mut ctx).unwrap();
        let b = lambda_at(&tau2, &mut ctx).unwrap();
        assert!(a.sub(&b).log2_abs() < -110.0);
    }

    #[test]
    fn j_symmetries() {
        let l = BigFloatComplex::new(BigFloat::from_f64(0.37, 128), BigFloat::from_f64(-1.25, 128), 128);
        let one = BigFloatComplex::from_i64(1, 128);
        let a = j_from_lambda(&l).unwrap();
        let b = j_from_lambda(&one.sub(&l)).unwrap();
        let c = j_from_lambda(&one.div(&l)).unwrap();
        assert!(a.sub(&b).log2_abs() < -100.0);
        assert!(a.sub(&c).log2_abs() < -100.0);
        assert!(matches!(j_from_lambda(&BigFloatComplex::from_i64(0, 128)), Err(CmError::PoleAtExcludedValue)));
    }

    #[test]
    fn small_class_polys() {
        assert_eq!(class_poly(7).unwrap(), "x + 3375".parse().unwrap());
        let h15 = class_poly(15).unwrap();
        assert_eq!(h15.deg(), 2);
        let h23 = class_poly(23).unwrap();
        assert_eq!(h23.deg(), 3);
        assert_eq!(crate::factor::factor(&h23).factors.len(), 1);
    }

    #[test]
    fn dual_route_small() {
        let b7: IntPoly = "x^2 - x + 2".parse().unwrap();
        assert_eq!(class_poly_via_bd(&b7).unwrap(), class_poly(7).unwrap());
        let b15: IntPoly = "x^4-4x^3+5x^2-2x+4".parse().unwrap();
        assert_eq!(class_poly_via_bd(&b15).unwrap(), class_poly(15).unwrap());
    }
}
