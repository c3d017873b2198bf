//! End-to-end commands: each returns a serializable report whose `ok` says
//! whether every check it ran passed.

use serde::{Deserialize, Serialize};

use crate::cm::{class_poly, class_poly_via_bd, match_discriminant, CmError};
use crate::dynamics::{
    invariant_under_x_over_x_minus_1, maps_onto_under_x_over_x_minus_1, pd_from_bd, pn, preperiodic_poly, Cache,
    DynamicsError, Kernel,
};
use crate::factor::{factor_with_seed, FactorizationJson};
use crate::padic::{lift_all, reconstruct_all, valuation_profile, verify_frobenius, PadicError, WittRing};
use crate::poly::{IntPoly, PolyError};
use crate::qseries::{verify_j_lambda_identity, verify_modular_equation, JLambdaReport, ModularEquationReport};
use crate::quadforms::{class_number, discriminant_set, two_class_order, Member, QuadError};

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error("dynamics: {0}")]
    Dynamics(#[from] DynamicsError),
    #[error("quadforms: {0}")]
    Quad(#[from] QuadError),
    #[error("cm: {0}")]
    Cm(#[from] CmError),
    #[error("padic: {0}")]
    Padic(#[from] PadicError),
    #[error("poly: {0}")]
    Poly(#[from] PolyError),
    #[error("{0}")]
    OutOfRange(String),
    #[error("no factor of P_{n} belongs to d = {d}")]
    FactorNotFound { n: u32, d: u64 },
}

/// Largest period handled without `force`.
pub const MAX_PERIOD: u32 = 8;

/// One irreducible factor of `P_n` with its label.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FactorRow {
    /// `None` for the factors `x` and `x + 1` at period 1.
    pub d: Option<u64>,
    pub h: Option<u64>,
    pub b: IntPoly,
    pub class_poly: Option<IntPoly>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PnReport {
    pub n: u32,
    pub degree: usize,
    pub seed: u64,
    pub target: u64,
    pub rows: Vec<FactorRow>,
    /// Every factor has degree `2h(-d)` and the labels are distinct.
    pub degrees_ok: bool,
    /// Labelled degrees add up to `2 * target`.
    pub ledger_ok: bool,
    /// The product of the rows equals `P_n`.
    pub product_ok: bool,
}

impl PnReport {
    pub fn ok(&self) -> bool {
        self.degrees_ok && self.ledger_ok && self.product_ok
    }

    pub fn row(&self, d: u64) -> Option<&FactorRow> {
        self.rows.iter().find(|r| r.d == Some(d))
    }
}

fn check_period(n: u32, force: bool) -> Result<(), PipelineError> {
    if n == 0 || (n > MAX_PERIOD && !force) {
        return Err(PipelineError::OutOfRange(format!("period {n} outside 1..={MAX_PERIOD} (use --force)")));
    }
    Ok(())
}

/// Factors `P_n`, labels each factor by its discriminant, and attaches
/// the class polynomial.
pub fn cmd_pn(n: u32, cache: &Cache, seed: u64, force: bool) -> Result<PnReport, PipelineError> {
    check_period(n, force)?;
    log::info!("P_{n}: assembling");
    let p = pn(Kernel::F, n, cache)?;
    log::info!("P_{n}: factoring degree {}", p.deg());
    let fact = factor_with_seed(&p, seed);
    log::info!("P_{n}: labelling {} factors", fact.factors.len());
    let set = discriminant_set(n)?;
    let mut rows = Vec::new();
    for (b, mult) in &fact.factors {
        if *mult != 1 {
            return Err(PipelineError::OutOfRange(format!("P_{n} has a repeated factor {b}")));
        }
        if n == 1 && b.deg() == 1 {
            rows.push(FactorRow { d: None, h: None, b: b.clone(), class_poly: None });
            continue;
        }
        let d = match_discriminant(b, &set)?;
        let h = set.get(d).map(|m| m.h);
        rows.push(FactorRow { d: Some(d), h, b: b.clone(), class_poly: Some(class_poly(d)?) });
    }
    rows.sort_by_key(|r| (r.b.deg(), r.d));
    let mut labels: Vec<u64> = rows.iter().filter_map(|r| r.d).collect();
    labels.sort_unstable();
    labels.dedup();
    let labelled = rows.iter().filter(|r| r.d.is_some()).count();
    let degrees_ok =
        labels.len() == labelled && rows.iter().all(|r| r.h.map_or(r.b.deg() == 1, |h| r.b.deg() as u64 == 2 * h));
    let labelled_degree: u64 = rows.iter().filter(|r| r.d.is_some()).map(|r| r.b.deg() as u64).sum();
    let ledger_ok = labelled_degree == 2 * set.target && labels.len() == set.members.len();
    let product = rows.iter().fold(IntPoly::one(), |acc, r| &acc * &r.b);
    let product_ok = product == p;
    Ok(PnReport { n, degree: p.deg(), seed, target: set.target, rows, degrees_ok, ledger_ok, product_ok })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DeuringRow {
    pub n: u32,
    pub members: Vec<Member>,
    pub h_sum: u64,
    pub target: u64,
    pub ok: bool,
}

/// The class-number ledger for `2 <= n <= max_n`, from quadratic forms only.
pub fn cmd_deuring(max_n: u32) -> Result<Vec<DeuringRow>, PipelineError> {
    if !(2..=10).contains(&max_n) {
        return Err(PipelineError::OutOfRange(format!("max period {max_n} outside 2..=10")));
    }
    (2..=max_n)
        .map(|n| {
            let s = discriminant_set(n)?;
            let h_sum = s.h_sum();
            Ok(DeuringRow { n, h_sum, target: s.target, ok: h_sum == s.target, members: s.members })
        })
        .collect()
}

/// Finds `b_d` among the factors of `P_n`, `n` the order of the prime-2 class.
pub fn factor_for(d: u64, cache: &Cache, seed: u64) -> Result<(u32, FactorRow), PipelineError> {
    let n = two_class_order(d)? as u32;
    check_period(n, false)?;
    let report = cmd_pn(n, cache, seed, false)?;
    let row = report.row(d).cloned().ok_or(PipelineError::FactorNotFound { n, d })?;
    Ok((n, row))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PadicReport {
    pub d: u64,
    pub n: u32,
    pub prec: u32,
    pub frobenius_ok: bool,
    pub valuations_ok: bool,
    pub reconstruction_ok: bool,
    pub orbits: usize,
}

impl PadicReport {
    pub fn ok(&self) -> bool {
        self.frobenius_ok && self.valuations_ok && self.reconstruction_ok
    }
}

/// Lifts the periodic orbits belonging to `d` and checks them against `b_d`.
pub fn cmd_padic_verify(d: u64, prec: u32, cache: &Cache, seed: u64) -> Result<PadicReport, PipelineError> {
    let (n, row) = factor_for(d, cache, seed)?;
    if n > 6 {
        return Err(PipelineError::OutOfRange(format!("d = {d} has period {n} > 6")));
    }
    let ring = WittRing::new(n, prec)?;
    let orbits = lift_all(&ring)?;
    let groups = reconstruct_all(&orbits)?;
    let mine: Vec<&(IntPoly, Vec<usize>)> = groups.iter().filter(|(p, _)| *p == row.b).collect();
    let reconstruction_ok = mine.len() == 1;
    let used: Vec<usize> = mine.iter().flat_map(|(_, idx)| idx.iter().copied()).collect();
    let mut frobenius_ok = !used.is_empty();
    let mut valuations_ok = !used.is_empty();
    for &i in &used {
        frobenius_ok &= verify_frobenius(&orbits[i])?.ok();
        valuations_ok &= valuation_profile(&orbits[i])?.ok();
    }
    Ok(PadicReport { d, n, prec, frobenius_ok, valuations_ok, reconstruction_ok, orbits: used.len() })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PreperiodicReport {
    pub d: u64,
    pub r: u32,
    pub h: u64,
    pub poly: IntPoly,
    pub degree: usize,
    pub expected_degree: usize,
    pub invariant_ok: bool,
}

impl PreperiodicReport {
    pub fn ok(&self) -> bool {
        self.degree == self.expected_degree && self.invariant_ok
    }
}

/// `s_d^(r)` above the factor `b_d`.
pub fn cmd_preperiodic(d: u64, r: u32, cache: &Cache, seed: u64) -> Result<PreperiodicReport, PipelineError> {
    if !(1..=6).contains(&r) {
        return Err(PipelineError::OutOfRange(format!("level {r} outside 1..=6")));
    }
    let (_, row) = factor_for(d, cache, seed)?;
    let h = class_number(d)?.0;
    let pd = pd_from_bd(&row.b)?;
    let s = preperiodic_poly(&pd, r)?;
    let expected_degree = if r == 1 { 2 * h as usize } else { (1usize << (r - 1)) * h as usize };
    // level 1 is carried onto p_d; invariance holds from level 2 on
    let invariant_ok =
        if r == 1 { maps_onto_under_x_over_x_minus_1(&s, &pd) } else { invariant_under_x_over_x_minus_1(&s) };
    Ok(PreperiodicReport { d, r, h, degree: s.deg(), poly: s, expected_degree, invariant_ok })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    Bd,
    Cm,
    Both,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClassPolyReport {
    pub d: u64,
    pub h: u64,
    pub via_cm: Option<IntPoly>,
    pub via_bd: Option<IntPoly>,
    pub agree: Option<bool>,
}

impl ClassPolyReport {
    pub fn ok(&self) -> bool {
        self.agree.unwrap_or(true)
    }
}

pub fn cmd_classpoly(d: u64, route: Route, cache: &Cache, seed: u64) -> Result<ClassPolyReport, PipelineError> {
    let h = class_number(d)?.0;
    let via_cm = if route != Route::Bd { Some(class_poly(d)?) } else { None };
    let via_bd = if route != Route::Cm {
        let (_, row) = factor_for(d, cache, seed)?;
        Some(class_poly_via_bd(&row.b)?)
    } else {
        None
    };
    let agree = match (&via_cm, &via_bd) {
        (Some(a), Some(b)) => Some(a == b),
        _ => None,
    };
    Ok(ClassPolyReport { d, h, via_cm, via_bd, agree })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LambdaReport {
    pub modular: ModularEquationReport,
    pub j_lambda: JLambdaReport,
}

impl LambdaReport {
    pub fn ok(&self) -> bool {
        self.modular.ok() && self.j_lambda.ok()
    }
}

pub fn cmd_lambda_identity(terms: usize, seed: u64) -> Result<LambdaReport, PipelineError> {
    if terms < 8 {
        return Err(PipelineError::OutOfRange(format!("need at least 8 terms, got {terms}")));
    }
    Ok(LambdaReport { modular: verify_modular_equation(terms), j_lambda: verify_j_lambda_identity(32, seed) })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FactorReport {
    pub input: IntPoly,
    pub factorization: FactorizationJson,
    pub reconstructs: bool,
}

/// Parses a polynomial given as JSON (`{"var":..,"coeffs":[..]}`) or as an
/// expression such as `x^2 - 1`.
pub fn parse_poly(text: &str) -> Result<IntPoly, PolyError> {
    let t = text.trim();
    if t.starts_with('{') {
        IntPoly::from_json_str(t)
    } else {
        t.parse()
    }
}

pub fn cmd_factor(input: &IntPoly, seed: u64) -> FactorReport {
    let f = factor_with_seed(input, seed);
    let reconstructs = f.expand() == *input;
    FactorReport { input: input.clone(), factorization: f.to_json(), reconstructs }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn period_three() {
        let r = cmd_pn(3, &Cache::none(), 0, false).unwrap();
        assert!(r.ok());
        let ds: Vec<Option<u64>> = r.rows.iter().map(|r| r.d).collect();
        assert_eq!(ds, vec![Some(23), Some(31)]);
    }

    #[test]
    fn period_one() {
        let r = cmd_pn(1, &Cache::none(), 0, false).unwrap();
        assert!(r.ok(), "{r:?}");
        assert_eq!(r.rows.len(), 3);
        assert_eq!(r.row(7).unwrap().class_poly.as_ref().unwrap(), &"x + 3375".parse().unwrap());
    }

    #[test]
    fn guards() {
        assert!(matches!(cmd_pn(9, &Cache::none(), 0, false), Err(PipelineError::OutOfRange(_))));
        assert!(cmd_deuring(11).is_err());
        assert!(cmd_lambda_identity(4, 0).is_err());
    }

    #[test]
    fn level_one_tower() {
        let r = cmd_preperiodic(7, 1, &Cache::none(), 0).unwrap();
        assert!(r.ok());
        assert_eq!(r.poly, "16x^2 - 31x + 16".parse().unwrap());
    }

    #[test]
    fn parse_both_forms() {
        let a = parse_poly("x^2 - 1").unwrap();
        let b = parse_poly(r#"{"var":"x","coeffs":["-1","0","1"]}"#).unwrap();
        assert_eq!(a, b);
        let rep = cmd_factor(&a, 0);
        assert!(rep.reconstructs);
        assert_eq!(rep.factorization.factors.len(), 2);
    }
}
