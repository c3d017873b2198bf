mod common;

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed, TestRunner};

use cmdyn::cm::{class_poly, class_poly_via_bd};
use cmdyn::dynamics::{
    conj_product, invariant_under_x_over_x_minus_1, mod2_profile, pd_from_bd, preperiodic_poly, scaling_law, Cache,
    Kernel,
};
use cmdyn::factor::factor_with_seed;
use cmdyn::padic::{lift_all, reconstruct_all, verify_frobenius, WittRing};
use cmdyn::pipeline::{cmd_deuring, cmd_pn, PnReport};
use cmdyn::poly::{BiPoly, IntPoly};
use cmdyn::qseries::verify_modular_equation;
use cmdyn::quadforms::{class_number, compose, discriminant_prime_check, discriminant_set, QuadForm};
use cmdyn::resultant::{resultant_bi, resultant_bi_modular, resultant_uni, resultant_uni_modular};
use common::{poly, through_period_6, PERIOD_6, PERIOD_7, SMALL_PERIODS};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn cache() -> Cache {
    match std::env::var_os("CMDYN_CACHE_DIR") {
        Some(dir) => Cache::open(dir).expect("cache directory"),
        None => Cache::none(),
    }
}

fn pn_report(n: u32) -> Result<PnReport, String> {
    let r = cmd_pn(n, &cache(), 0, n > 8).map_err(|e| e.to_string())?;
    ensure(r.ok(), || format!("P_{n}: degrees {} ledger {} product {}", r.degrees_ok, r.ledger_ok, r.product_ok))?;
    Ok(r)
}

fn labelled(r: &PnReport) -> BTreeMap<u64, IntPoly> {
    r.rows.iter().filter_map(|row| row.d.map(|d| (d, row.b.clone()))).collect()
}

fn within(start: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t <= limit, || format!("{what} took {t:?}, limit {limit:?}"))
}

fn small_periods() -> Check {
    let start = Instant::now();
    for n in 1..=5 {
        let r = pn_report(n)?;
        let want: BTreeMap<u64, IntPoly> =
            SMALL_PERIODS.iter().filter(|(m, _, _)| *m == n).map(|&(_, d, s)| (d, poly(s))).collect();
        ensure(labelled(&r) == want, || format!("P_{n} factors differ"))?;
        if n == 1 {
            let rest: Vec<String> = r.rows.iter().filter(|x| x.d.is_none()).map(|x| x.b.to_string()).collect();
            ensure(rest == ["x", "x + 1"], || format!("P_1 extra factors {rest:?}"))?;
        }
    }
    let p2 = pn_report(2)?;
    ensure(p2.rows.len() == 1 && p2.rows[0].b == poly("x^4-4x^3+5x^2-2x+4"), || "P_2".into())?;
    within(start, Duration::from_secs(60), "periods 1..5")?;
    Ok(format!("12 factors, {:.1?}", start.elapsed()))
}

fn period_six() -> Check {
    let start = Instant::now();
    let r = pn_report(6)?;
    let want: BTreeMap<u64, IntPoly> = PERIOD_6.iter().map(|&(d, s)| (d, poly(s))).collect();
    ensure(labelled(&r) == want, || "P_6 factors differ".into())?;
    let degs: Vec<usize> = r.rows.iter().map(|x| x.b.deg()).collect();
    ensure(degs == [12, 12, 12, 12, 12, 24, 24], || format!("degrees {degs:?}"))?;
    within(start, Duration::from_secs(600), "period 6")?;
    Ok(format!("d = {:?}, {:.1?}", want.keys().collect::<Vec<_>>(), start.elapsed()))
}

fn period_seven() -> Check {
    let start = Instant::now();
    let set = discriminant_set(7).map_err(|e| e.to_string())?;
    let ledger: u64 = set.members.iter().map(|m| 2 * m.h).sum();
    ensure(ledger == 252 && set.target == 126, || format!("ledger {ledger}, target {}", set.target))?;
    let r = pn_report(7)?;
    let got = labelled(&r);
    for &(d, s) in PERIOD_7 {
        ensure(got.get(&d) == Some(&poly(s)), || format!("b_{d} differs"))?;
    }
    let extra: Vec<(u64, usize)> =
        got.iter().filter(|(d, _)| !PERIOD_7.iter().any(|(e, _)| e == *d)).map(|(d, b)| (*d, b.deg())).collect();
    ensure(extra.len() == 2 && extra.iter().all(|(_, deg)| *deg == 42), || format!("unlisted factors {extra:?}"))?;
    let total: usize = got.values().map(IntPoly::deg).sum();
    ensure(total == 252 && r.degree == 252, || format!("total degree {total}"))?;
    Ok(format!(
        "9 listed + degree-42 factors for d = {:?}, {:.1?}",
        extra.iter().map(|e| e.0).collect::<Vec<_>>(),
        start.elapsed()
    ))
}

fn deuring() -> Check {
    let rows = cmd_deuring(8).map_err(|e| e.to_string())?;
    ensure(rows.len() == 7, || format!("{} rows", rows.len()))?;
    for r in &rows {
        ensure(r.ok, || format!("n = {}: {} != {}", r.n, r.h_sum, r.target))?;
    }
    Ok(rows.iter().map(|r| format!("{}:{}", r.n, r.h_sum)).collect::<Vec<_>>().join(" "))
}

fn class_equations() -> Check {
    let h7 = class_poly(7).map_err(|e| e.to_string())?;
    ensure(h7 == poly("x + 3375"), || format!("H_7 = {h7}"))?;
    let all = through_period_6();
    for (d, b) in &all {
        let cm = class_poly(*d).map_err(|e| format!("d = {d}: {e}"))?;
        let bd = class_poly_via_bd(b).map_err(|e| format!("d = {d}: {e}"))?;
        ensure(cm == bd, || format!("d = {d}: routes differ"))?;
    }
    Ok(format!("{} discriminants, H_7 = {h7}", all.len()))
}

fn frobenius() -> Check {
    let mut orbits_checked = 0;
    for n in 1..=5u32 {
        let ring = WittRing::new(n, 128).map_err(|e| e.to_string())?;
        let orbits = lift_all(&ring).map_err(|e| e.to_string())?;
        for o in &orbits {
            let rep = verify_frobenius(o).map_err(|e| e.to_string())?;
            ensure(rep.ok(), || format!("n = {n}: {rep:?}"))?;
            orbits_checked += 1;
        }
        let mut rebuilt: Vec<IntPoly> =
            reconstruct_all(&orbits).map_err(|e| e.to_string())?.into_iter().map(|(p, _)| p).collect();
        let mut factored: Vec<IntPoly> = labelled(&pn_report(n)?).into_values().collect();
        rebuilt.sort_by_key(|p| p.to_string());
        factored.sort_by_key(|p| p.to_string());
        ensure(rebuilt == factored, || format!("n = {n}: reconstruction differs from factorization"))?;
    }
    Ok(format!("{orbits_checked} orbits at precision 2^128"))
}

fn mod_two() -> Check {
    for n in 1..=8 {
        mod2_profile(Kernel::F, n, &cache()).map_err(|e| format!("n = {n}: {e}"))?;
    }
    Ok("n = 1..8".into())
}

fn scaling() -> Check {
    let mut notes = Vec::new();
    for n in 1..=6 {
        let r = scaling_law(n, &cache()).map_err(|e| e.to_string())?;
        ensure(r.ok, || format!("{r:?}"))?;
        notes.push(format!("{}:{:?}", n, r.content_log2));
    }
    Ok(format!("2-contents {}", notes.join(" ")))
}

fn lambda() -> Check {
    let r = verify_modular_equation(128);
    ensure(r.identity_ok, || format!("nonzero at {:?}", r.first_failure))?;
    ensure(r.f_head_ok, || format!("f opens {:?}", r.f_head))?;
    Ok(format!("128 terms, f opens {}", r.f_head.join(" ")))
}

fn discriminants() -> Check {
    let mut primes = 0;
    for (d, b) in through_period_6() {
        let r = discriminant_prime_check(&b, d, 100_000).map_err(|e| e.to_string())?;
        ensure(r.two_power_ok, || format!("d = {d}: v2 = {} < 3h(h-1)", r.two_adic))?;
        ensure(r.residues_ok, || format!("d = {d}: split prime among {:?}", r.odd_primes))?;
        primes += r.odd_primes.len();
    }
    Ok(format!("19 discriminants, {primes} odd prime divisors checked"))
}

fn towers() -> Check {
    let s1 =
        preperiodic_poly(&pd_from_bd(&poly("x^2-x+2")).map_err(|e| e.to_string())?, 1).map_err(|e| e.to_string())?;
    ensure(s1 == poly("16x^2-31x+16"), || format!("s_7^(1) = {s1}"))?;
    for d in [7u64, 15, 23] {
        let (_, _, s) = SMALL_PERIODS.iter().find(|x| x.1 == d).unwrap();
        let h = class_number(d).map_err(|e| e.to_string())?.0 as usize;
        let pd = pd_from_bd(&poly(s)).map_err(|e| e.to_string())?;
        for r in 2..=5 {
            let t = preperiodic_poly(&pd, r).map_err(|e| e.to_string())?;
            ensure(t.deg() == (1 << (r - 1)) * h, || format!("d = {d}, r = {r}: degree {}", t.deg()))?;
            ensure(invariant_under_x_over_x_minus_1(&t), || format!("d = {d}, r = {r}: not invariant"))?;
        }
    }
    for &(_, d, s) in SMALL_PERIODS {
        let b = poly(s);
        let pd = pd_from_bd(&b).map_err(|e| e.to_string())?;
        ensure(pd.inflate(4) == &(&b * &b.negate_var()) * &conj_product(&b), || format!("d = {d}: p_d(x^4)"))?;
    }
    Ok("s_7^(1), degrees r = 2..5, invariance, p_d(x^4) identity".into())
}

fn runner(cases: u32, seed: u64) -> TestRunner {
    TestRunner::new(Config { cases, rng_seed: RngSeed::Fixed(seed), failure_persistence: None, ..Config::default() })
}

fn int_poly(max_deg: usize, bound: i64) -> impl Strategy<Value = IntPoly> {
    prop::collection::vec(-bound..=bound, 0..=max_deg + 1)
        .prop_map(|c| IntPoly::new(c.into_iter().map(BigInt::from).collect()))
}

fn nonconstant(max_deg: usize, bound: i64) -> impl Strategy<Value = IntPoly> {
    int_poly(max_deg, bound).prop_filter("degree >= 1", |p| !p.is_zero() && p.deg() >= 1)
}

fn bi_poly() -> impl Strategy<Value = BiPoly> {
    prop::collection::vec(((0u32..=3, 0u32..=3), -9i64..=9), 1..8)
        .prop_map(|t| BiPoly::from_terms(t.into_iter().map(|(k, c)| (k, BigInt::from(c))), "x", "y"))
}

fn fmt<T: std::fmt::Debug>(name: &'static str) -> impl Fn(proptest::test_runner::TestError<T>) -> String {
    move |e| format!("{name}: {e}")
}

fn properties() -> Check {
    runner(256, 1)
        .run(&(int_poly(6, 50), int_poly(6, 50), int_poly(6, 50)), |(a, b, c)| {
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&(&a + &b) - &b, a.clone());
            Ok(())
        })
        .map_err(fmt("ring axioms"))?;
    runner(128, 2)
        .run(&(nonconstant(4, 20), nonconstant(4, 20), nonconstant(4, 20)), |(f, g, h)| {
            prop_assert_eq!(resultant_uni(&(&f * &g), &h), resultant_uni(&f, &h) * resultant_uni(&g, &h));
            prop_assert_eq!(resultant_uni(&f, &g), resultant_uni_modular(&f, &g));
            Ok(())
        })
        .map_err(fmt("resultant"))?;
    runner(48, 3)
        .run(&(bi_poly(), bi_poly()), |(f, g)| {
            if f.deg_y() >= 1 && g.deg_y() >= 1 {
                prop_assert_eq!(resultant_bi(&f, &g, "y").unwrap(), resultant_bi_modular(&f, &g, "y").unwrap());
            }
            Ok(())
        })
        .map_err(fmt("bivariate resultant"))?;
    runner(64, 4)
        .run(&(prop::collection::vec(nonconstant(4, 12), 1..4), 0u64..1000), |(parts, seed)| {
            let f = parts.iter().fold(IntPoly::one(), |acc, p| &acc * p);
            let fac = factor_with_seed(&f, seed);
            prop_assert_eq!(fac.expand(), f);
            for (g, _) in &fac.factors {
                prop_assert_eq!(factor_with_seed(g, seed + 1).factors.len(), 1);
            }
            Ok(())
        })
        .map_err(fmt("factorization"))?;
    let disc = (1u64..125).prop_map(|k| 4 * k + 3);
    let idx = any::<prop::sample::Index>();
    runner(256, 5)
        .run(&(disc, idx.clone(), idx.clone(), idx), |(d, i, j, k)| {
            let (_, forms) = class_number(d).unwrap();
            let (f, g, e) = (i.get(&forms), j.get(&forms), k.get(&forms));
            let id = QuadForm::principal(d);
            let fg = compose(f, g).unwrap();
            prop_assert!(forms.contains(&fg));
            prop_assert_eq!(&fg, &compose(g, f).unwrap());
            prop_assert_eq!(compose(f, &id).unwrap(), f.clone());
            prop_assert_eq!(compose(f, &f.inverse()).unwrap(), id);
            prop_assert_eq!(compose(&fg, e).unwrap(), compose(f, &compose(g, e).unwrap()).unwrap());
            Ok(())
        })
        .map_err(fmt("class group"))?;
    Ok("ring, resultant, factorization, class group suites".into())
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("small periods reproduce the reference factors", small_periods),
        ("period 6 reproduces the reference factors", period_six),
        ("period 7 factors and degree ledger", period_seven),
        ("class number ledger for n = 2..8", deuring),
        ("class equations agree on both routes", class_equations),
        ("2-adic Frobenius lifts", frobenius),
        ("reduction mod 2", mod_two),
        ("scaling law", scaling),
        ("lambda modular equation", lambda),
        ("discriminant divisibility", discriminants),
        ("pre-periodic towers", towers),
        ("randomized property suites", properties),
    ];
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let id = (i + 1).to_string();
        if !filter.is_empty() && !filter.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("criterion {id:>2} PASS {name} [{detail}] ({:.1?})", start.elapsed()),
            Err(why) => {
                failed += 1;
                println!("criterion {id:>2} FAIL {name}: {why} ({:.1?})", start.elapsed());
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
