//! Iterated resultants of the dynamics kernels, their diagonals `R_n`, the
//! Möbius assembly `P_n`, pre-periodic towers and the `p_d` pushforward.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::factor::{squarefree, squarefree_part};
use crate::numtheory::{divisors, moebius};
use crate::poly::{exact_div, linear_fractional, proportional, BiPoly, BiPolyJson, IntPoly, PolyError};
use crate::resultant::{resultant_bi_modular, ResultantError};

#[derive(Debug, thiserror::Error)]
pub enum DynamicsError {
    #[error(transparent)]
    Resultant(#[from] ResultantError),
    #[error("Möbius quotient failed: {0}")]
    NotDivisible(#[from] PolyError),
    #[error("mod 2 structure mismatch at n = {0}")]
    Mismatch(u32),
    #[error("operation needs the F-kernel, got {0}")]
    WrongKernel(&'static str),
    #[error("resultant is not a constant times a square")]
    SquareRootFailure,
    #[error("product identity failed for {0}")]
    IdentityFailure(String),
    #[error("period must be at least 1")]
    BadPeriod,
    #[error("cache i/o: {0}")]
    Cache(#[from] std::io::Error),
}

/// Dynamics kernels `g(x, y)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Kernel {
    /// `x^2 y^2 + 2x + y^2`
    F,
    /// `x^2 y^2 - 2(x^2 - 8x + 8) y + x^2`
    T,
    /// `4x^2 y^2 + x + y^2`, the F-kernel after `x -> 2x`.
    Scaled,
}

impl Kernel {
    pub fn name(self) -> &'static str {
        match self {
            Kernel::F => "F",
            Kernel::T => "T",
            Kernel::Scaled => "G1",
        }
    }

    pub fn from_name(s: &str) -> Option<Kernel> {
        match s {
            "F" => Some(Kernel::F),
            "T" => Some(Kernel::T),
            "G1" => Some(Kernel::Scaled),
            _ => None,
        }
    }

    /// The kernel with the given variable names.
    pub fn poly_in(self, vx: &str, vy: &str) -> BiPoly {
        let terms: &[((u32, u32), i64)] = match self {
            Kernel::F => &[((2, 2), 1), ((1, 0), 2), ((0, 2), 1)],
            Kernel::T => &[((2, 2), 1), ((2, 1), -2), ((1, 1), 16), ((0, 1), -16), ((2, 0), 1)],
            Kernel::Scaled => &[((2, 2), 4), ((1, 0), 1), ((0, 2), 1)],
        };
        BiPoly::from_i64_terms(terms, vx, vy)
    }

    pub fn poly(self) -> BiPoly {
        self.poly_in("x", "y")
    }

    /// Stable fingerprint of the kernel polynomial (FNV-1a over its JSON).
    pub fn fingerprint(self) -> String {
        let text = serde_json::to_string(&self.poly().to_json()).expect("serializable");
        let mut h: u64 = 0xcbf29ce484222325;
        for b in text.bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
        format!("{h:016x}")
    }
}

#[derive(Debug, Default, Serialize, Deserialize)]
struct Manifest {
    version: u32,
    kernels: BTreeMap<String, String>,
}

/// Disk cache of `R^(n)` and `R_n`, one JSON file per (kernel, n).
#[derive(Clone, Debug, Default)]
pub struct Cache {
    dir: Option<PathBuf>,
}

const MANIFEST: &str = "manifest.json";
const CACHE_VERSION: u32 = 1;

impl Cache {
    /// A cache that never stores anything.
    pub fn none() -> Self {
        Cache { dir: None }
    }

    /// Opens (or creates) a cache directory; entries recorded under a
    /// different kernel fingerprint are discarded.
    pub fn open(dir: impl AsRef<Path>) -> Result<Self, DynamicsError> {
        let dir = dir.as_ref().to_path_buf();
        fs::create_dir_all(&dir)?;
        let path = dir.join(MANIFEST);
        let mut manifest: Manifest =
            fs::read(&path).ok().and_then(|b| serde_json::from_slice(&b).ok()).unwrap_or_default();
        let mut dirty = manifest.version != CACHE_VERSION;
        for k in [Kernel::F, Kernel::T, Kernel::Scaled] {
            let fp = k.fingerprint();
            let stale =
                manifest.version != CACHE_VERSION || manifest.kernels.get(k.name()).is_some_and(|old| *old != fp);
            if stale {
                purge(&dir, k)?;
            }
            if manifest.kernels.get(k.name()) != Some(&fp) {
                manifest.kernels.insert(k.name().to_string(), fp);
                dirty = true;
            }
        }
        manifest.version = CACHE_VERSION;
        if dirty {
            write_atomic(&path, &serde_json::to_vec_pretty(&manifest).expect("serializable"))?;
        }
        Ok(Cache { dir: Some(dir) })
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    fn path(&self, prefix: &str, k: Kernel, n: u32) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(format!("{prefix}_{}_{n}.json", k.name())))
    }

    fn load_rn(&self, k: Kernel, n: u32) -> Option<IntPoly> {
        let bytes = fs::read(self.path("RN", k, n)?).ok()?;
        let text = String::from_utf8(bytes).ok()?;
        IntPoly::from_json_str(&text).ok()
    }

    fn store_rn(&self, k: Kernel, n: u32, f: &IntPoly) -> Result<(), DynamicsError> {
        if let Some(p) = self.path("RN", k, n) {
            write_atomic(&p, f.to_json_string().as_bytes())?;
        }
        Ok(())
    }

    fn load_bi(&self, k: Kernel, n: u32) -> Option<BiPoly> {
        let bytes = fs::read(self.path("RB", k, n)?).ok()?;
        let j: BiPolyJson = serde_json::from_slice(&bytes).ok()?;
        BiPoly::from_json(&j).ok()
    }

    fn store_bi(&self, k: Kernel, n: u32, f: &BiPoly) -> Result<(), DynamicsError> {
        if let Some(p) = self.path("RB", k, n) {
            write_atomic(&p, &serde_json::to_vec(&f.to_json()).expect("serializable"))?;
        }
        Ok(())
    }
}

fn purge(dir: &Path, k: Kernel) -> std::io::Result<()> {
    for prefix in ["RN", "RB"] {
        let stem = format!("{prefix}_{}_", k.name());
        for entry in fs::read_dir(dir)? {
            let entry = entry?;
            if entry.file_name().to_string_lossy().starts_with(&stem) {
                fs::remove_file(entry.path())?;
            }
        }
    }
    Ok(())
}

fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path)
}

/// `R^(n)(x, x_n)`, with `R^(1)` the kernel itself.
pub fn iterated_resultant(k: Kernel, n: u32, cache: &Cache) -> Result<BiPoly, DynamicsError> {
    if n == 0 {
        return Err(DynamicsError::BadPeriod);
    }
    let var_n = format!("x{n}");
    if n == 1 {
        return Ok(k.poly_in("x", &var_n));
    }
    if let Some(r) = cache.load_bi(k, n) {
        return Ok(r.renamed("x", &var_n));
    }
    let prev = iterated_resultant(k, n - 1, cache)?;
    let elim = prev.var_y().to_string();
    let step = k.poly_in(&elim, &var_n);
    let r = resultant_bi_modular(&prev, &step, &elim)?;
    let content = r.content();
    if !content.is_one() {
        log::info!("R^({n}) for kernel {} has content {content}", k.name());
    }
    cache.store_bi(k, n, &r)?;
    Ok(r)
}

/// `R_n(x) = R^(n)(x, x)`, content-free with positive leading coefficient.
pub fn rn(k: Kernel, n: u32, cache: &Cache) -> Result<IntPoly, DynamicsError> {
    if n == 0 {
        return Err(DynamicsError::BadPeriod);
    }
    if let Some(r) = cache.load_rn(k, n) {
        return Ok(r);
    }
    let raw = if n == 1 {
        k.poly().diagonal()
    } else {
        // Res_y(R^(n-1)(x, y), g(y, x)) is R^(n)(x, x_n) at x_n = x
        let prev = iterated_resultant(k, n - 1, cache)?.renamed("x", "y");
        let step = k.poly_in("y", "x");
        let r = resultant_bi_modular(&prev, &step, "y")?;
        let mut coeffs = Vec::new();
        for (&(i, _), c) in r.terms() {
            if coeffs.len() <= i as usize {
                coeffs.resize(i as usize + 1, BigInt::zero());
            }
            coeffs[i as usize] = c.clone();
        }
        IntPoly::new(coeffs)
    };
    let content = raw.content();
    if !content.is_one() {
        log::info!("R_{n} for kernel {}: stripped content {content}", k.name());
    }
    let out = raw.canonical();
    cache.store_rn(k, n, &out)?;
    Ok(out)
}

/// `P_n = prod_{k | n} R_k^mu(n/k)`.
pub fn pn(k: Kernel, n: u32, cache: &Cache) -> Result<IntPoly, DynamicsError> {
    if n == 0 {
        return Err(DynamicsError::BadPeriod);
    }
    let mut num = IntPoly::one();
    let mut den = IntPoly::one();
    for d in divisors(n as u64) {
        match moebius(n as u64 / d) {
            1 => num = &num * &rn(k, d as u32, cache)?,
            -1 => den = &den * &rn(k, d as u32, cache)?,
            _ => {}
        }
    }
    Ok(exact_div(&num, &den)?.canonical())
}

/// Factor-degree profile of `R~_n mod 2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mod2Profile {
    pub n: u32,
    /// `degree -> number of irreducible factors` over GF(2).
    pub degrees: BTreeMap<usize, usize>,
}

/// Checks `R~_n = x^(2^n) + x (mod 2)` and returns its factor-degree profile.
pub fn mod2_profile(k: Kernel, n: u32, cache: &Cache) -> Result<Mod2Profile, DynamicsError> {
    if k != Kernel::F {
        return Err(DynamicsError::WrongKernel(k.name()));
    }
    let scaled = crate::poly::dyadic_rescale(&rn(k, n, cache)?, crate::poly::Rescale::In);
    let reduced = scaled.mod_u64(2);
    let mut expect = vec![0u64; (1usize << n) + 1];
    expect[1] = 1;
    expect[1 << n] = 1;
    if reduced != expect {
        return Err(DynamicsError::Mismatch(n));
    }
    let mut degrees = BTreeMap::new();
    for (d, g) in crate::modp::distinct_degree(&reduced, 2) {
        *degrees.entry(d).or_insert(0) += (g.len() - 1) / d;
    }
    Ok(Mod2Profile { n, degrees })
}

/// Outcome of comparing `R_n(2x)` with `2^(2^n) R~_n(x)`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ScalingReport {
    pub n: u32,
    /// `log2(R_n(2x) / R~_n(x))` when that ratio is a power of two.
    pub ratio_log2: Option<u64>,
    pub expected_log2: u64,
    /// Powers of two removed from both sides by normalization.
    pub content_log2: (u64, u64),
    pub ok: bool,
}

fn v2(c: &BigInt) -> u64 {
    c.trailing_zeros().unwrap_or(0)
}

fn is_pow2(c: &BigInt) -> Option<u64> {
    let v = v2(c);
    (c.magnitude() == &(num_bigint::BigUint::one() << v)).then_some(v)
}

/// Compares `R_n(2x)` with `2^(2^n) R~_n(x)`, where `R~_n` is `R_n` for the
/// scaled kernel.
pub fn scaling_law(n: u32, cache: &Cache) -> Result<ScalingReport, DynamicsError> {
    let lhs = rn(Kernel::F, n, cache)?.scale_var(&BigInt::from(2));
    let rhs = rn(Kernel::Scaled, n, cache)?;
    let expected_log2 = 1u64 << n;
    let ratio = if proportional(&lhs, &rhs) {
        let (q, r) = num_integer::Integer::div_rem(&lhs.lc(), &rhs.lc());
        if r.is_zero() {
            is_pow2(&q)
        } else {
            None
        }
    } else {
        None
    };
    let content_log2 = (v2(&rn(Kernel::F, n, cache)?.content()), v2(&rhs.content()));
    if let Some(e) = ratio {
        log::info!("scaling law n={n}: ratio 2^{e}, expected 2^{expected_log2}");
    }
    Ok(ScalingReport { n, ratio_log2: ratio, expected_log2, content_log2, ok: ratio == Some(expected_log2) })
}

fn even_odd_neg(b: &IntPoly) -> (IntPoly, IntPoly) {
    let (e, o) = b.even_odd();
    // E(-x^2), O(-x^2)
    (e.negate_var().inflate(2), o.negate_var().inflate(2))
}

/// `b(ix) b(-ix) = E(-x^2)^2 + x^2 O(-x^2)^2` for `b(x) = E(x^2) + x O(x^2)`.
pub fn conj_product(b: &IntPoly) -> IntPoly {
    let (e, o) = even_odd_neg(b);
    let x2 = IntPoly::monomial(BigInt::one(), 2);
    (&(&e * &e) + &(&x2 * &(&o * &o))).renamed(b.var())
}

/// `p_d`, the minimal polynomial of the fourth powers of the roots of `b_d`,
/// checked against `p_d(x^4) = b_d(x) b_d(-x) b_d(ix) b_d(-ix)`.
pub fn pd_from_bd(b: &IntPoly) -> Result<IntPoly, DynamicsError> {
    let by = BiPoly::from_x_poly(b, "y", crate::resultant::NO_VAR);
    // x - y^4
    let push = BiPoly::from_i64_terms(&[((1, 0), 1), ((0, 4), -1)], "x", "y");
    let r = resultant_bi_modular(&by, &push, "y")?;
    let mut coeffs = vec![BigInt::zero(); r.deg_x() as usize + 1];
    for (&(i, _), c) in r.terms() {
        coeffs[i as usize] = c.clone();
    }
    let p = squarefree_part(&IntPoly::new(coeffs)).renamed(b.var());
    let lhs = p.inflate(4);
    let rhs = &(b * &b.negate_var()) * &conj_product(b);
    let exact_needed = b.lc().is_one();
    if !proportional(&lhs, &rhs) || (exact_needed && lhs != rhs) {
        return Err(DynamicsError::IdentityFailure(b.to_string()));
    }
    Ok(p)
}

/// Level-`r` pre-periodic polynomial `s^(r)` of the T-kernel above `p_d`.
pub fn preperiodic_poly(pd: &IntPoly, r: u32) -> Result<IntPoly, DynamicsError> {
    if r == 0 {
        return Err(DynamicsError::BadPeriod);
    }
    let s1 = linear_fractional(pd, [1, 0, 1, -1]).canonical();
    if r == 1 {
        return Ok(s1);
    }
    let kernel = Kernel::T.poly_in("x", "y");
    let mut s = s1;
    for level in 2..=r {
        let sy = BiPoly::from_x_poly(&s, "y", crate::resultant::NO_VAR);
        let res = resultant_bi_modular(&kernel, &sy, "y")?;
        let mut coeffs = vec![BigInt::zero(); res.deg_x() as usize + 1];
        for (&(i, _), c) in res.terms() {
            coeffs[i as usize] = c.clone();
        }
        let full = IntPoly::new(coeffs);
        s = if level == 2 { sqrt_up_to_content(&full)? } else { full.canonical() };
        log::debug!("s^({level}) has degree {}", s.deg());
    }
    Ok(s.renamed(pd.var()))
}

/// `s` with `f = c s^2`, via the squarefree part.
pub fn sqrt_up_to_content(f: &IntPoly) -> Result<IntPoly, DynamicsError> {
    let parts = squarefree(f);
    if parts.iter().any(|(_, m)| *m != 2) {
        return Err(DynamicsError::SquareRootFailure);
    }
    let s = squarefree_part(f);
    let sq = &s * &s;
    let (c, rem) = num_integer::Integer::div_rem(&f.lc(), &sq.lc());
    if !rem.is_zero() || sq.scale(&c) != *f {
        return Err(DynamicsError::SquareRootFailure);
    }
    Ok(s)
}

/// True when `(x - 1)^deg f * f(x/(x - 1))` is a scalar multiple of `f`.
pub fn invariant_under_x_over_x_minus_1(f: &IntPoly) -> bool {
    proportional(&linear_fractional(f, [1, 0, 1, -1]), f)
}

/// True when `(x - 1)^deg f * f(x/(x - 1))` is a scalar multiple of `g`.
pub fn maps_onto_under_x_over_x_minus_1(f: &IntPoly, g: &IntPoly) -> bool {
    proportional(&linear_fractional(f, [1, 0, 1, -1]), g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    #[test]
    fn base_cases() {
        let c = Cache::none();
        let r1 = iterated_resultant(Kernel::F, 1, &c).unwrap();
        assert_eq!(r1, Kernel::F.poly());
        assert_eq!(rn(Kernel::F, 1, &c).unwrap(), p(&[0, 2, 1, 0, 1]));
        assert_eq!(rn(Kernel::T, 1, &c).unwrap(), p(&[0, -16, 17, -2, 1]));
        assert_eq!(pn(Kernel::F, 1, &c).unwrap(), p(&[0, 2, 1, 0, 1]));
        assert_eq!(pn(Kernel::F, 2, &c).unwrap(), p(&[4, -2, 5, -4, 1]));
    }

    #[test]
    fn rn_matches_diagonal() {
        let c = Cache::none();
        for n in 2..=4 {
            let diag = iterated_resultant(Kernel::F, n, &c).unwrap().diagonal().canonical();
            assert_eq!(rn(Kernel::F, n, &c).unwrap(), diag);
            assert_eq!(diag.deg(), 1 << (n + 1));
        }
    }

    #[test]
    fn mod2_small() {
        let c = Cache::none();
        let prof = mod2_profile(Kernel::F, 3, &c).unwrap();
        assert_eq!(prof.degrees, BTreeMap::from([(1, 2), (3, 2)]));
        assert!(matches!(mod2_profile(Kernel::T, 1, &c), Err(DynamicsError::WrongKernel(_))));
    }

    #[test]
    fn pd_and_tower_d7() {
        let b7 = p(&[2, -1, 1]);
        let p7 = pd_from_bd(&b7).unwrap();
        assert_eq!(p7, p(&[16, -1, 1]));
        assert_eq!(p7.inflate(4), p(&[16, 0, 0, 0, -1, 0, 0, 0, 1]));
        let s1 = preperiodic_poly(&p7, 1).unwrap();
        assert_eq!(s1, p(&[16, -31, 16]));
        // level 1 is swapped with p_d itself
        assert!(proportional(&linear_fractional(&s1, [1, 0, 1, -1]), &p7));
        for r in 2..=4 {
            let s = preperiodic_poly(&p7, r).unwrap();
            assert_eq!(s.deg(), 1 << (r - 1));
            assert!(invariant_under_x_over_x_minus_1(&s));
        }
    }

    #[test]
    fn cache_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let c = Cache::open(dir.path()).unwrap();
        let a = rn(Kernel::F, 3, &c).unwrap();
        assert!(dir.path().join("RN_F_3.json").exists());
        assert!(dir.path().join("RB_F_2.json").exists());
        let c2 = Cache::open(dir.path()).unwrap();
        assert_eq!(c2.load_rn(Kernel::F, 3), Some(a));
        // a manifest recording another fingerprint invalidates entries
        let m = r#"{"version":1,"kernels":{"F":"0000000000000000"}}"#;
        fs::write(dir.path().join(MANIFEST), m).unwrap();
        let c3 = Cache::open(dir.path()).unwrap();
        assert_eq!(c3.load_rn(Kernel::F, 3), None);
    }
}
