mod common;

use cmdyn::cm::{class_poly, class_poly_via_bd};
use cmdyn::dynamics::{conj_product, pd_from_bd, Cache};
use cmdyn::pipeline::cmd_pn;
use cmdyn::poly::IntPoly;
use cmdyn::quadforms::{class_number, discriminant_prime_check};
use common::{poly, through_period_6, PERIOD_6, PERIOD_7, SMALL_PERIODS};

fn labelled(n: u32) -> Vec<(u64, IntPoly)> {
    let r = cmd_pn(n, &Cache::none(), 0, false).unwrap();
    assert!(r.ok(), "P_{n} checks failed");
    let mut rows: Vec<(u64, IntPoly)> = r.rows.iter().filter_map(|row| row.d.map(|d| (d, row.b.clone()))).collect();
    rows.sort_by_key(|(d, _)| *d);
    rows
}

#[test]
fn small_periods_match_reference() {
    for n in 1..=5 {
        let mut want: Vec<(u64, IntPoly)> =
            SMALL_PERIODS.iter().filter(|(m, _, _)| *m == n).map(|&(_, d, s)| (d, poly(s))).collect();
        want.sort_by_key(|(d, _)| *d);
        assert_eq!(labelled(n), want, "period {n}");
    }
}

#[test]
fn period_one_has_the_two_fixed_points() {
    let r = cmd_pn(1, &Cache::none(), 0, false).unwrap();
    let unlabelled: Vec<String> = r.rows.iter().filter(|row| row.d.is_none()).map(|row| row.b.to_string()).collect();
    assert_eq!(unlabelled, vec!["x", "x + 1"]);
}

#[test]
fn period_six_matches_reference() {
    let mut want: Vec<(u64, IntPoly)> = PERIOD_6.iter().map(|&(d, s)| (d, poly(s))).collect();
    want.sort_by_key(|(d, _)| *d);
    assert_eq!(labelled(6), want);
}

#[test]
fn period_seven_contains_reference_and_two_more() {
    let got = labelled(7);
    for &(d, s) in PERIOD_7 {
        assert!(got.contains(&(d, poly(s))), "d = {d}");
    }
    let extra: Vec<(u64, usize)> =
        got.iter().filter(|(d, _)| !PERIOD_7.iter().any(|(e, _)| e == d)).map(|(d, b)| (*d, b.deg())).collect();
    assert_eq!(extra, vec![(431, 42), (503, 42)]);
}

#[test]
fn reference_factors_have_degree_twice_the_class_number() {
    for (d, b) in through_period_6() {
        let h = class_number(d).unwrap().0;
        assert_eq!(b.deg() as u64, 2 * h, "d = {d}");
        assert!(b.is_monic());
    }
}

#[test]
fn class_equations_agree_on_both_routes() {
    assert_eq!(class_poly(7).unwrap(), poly("x + 3375"));
    for (d, b) in through_period_6() {
        let cm = class_poly(d).unwrap();
        let bd = class_poly_via_bd(&b).unwrap();
        assert_eq!(cm, bd, "d = {d}");
        assert_eq!(cm.deg() as u64, class_number(d).unwrap().0);
    }
}

#[test]
fn discriminants_of_factors() {
    for (d, b) in through_period_6() {
        let r = discriminant_prime_check(&b, d, 100_000).unwrap();
        assert!(r.two_power_ok, "d = {d}: 2-adic valuation {}", r.two_adic);
        assert!(r.residues_ok, "d = {d}: {:?}", r.odd_primes);
    }
}

#[test]
fn fourth_power_identity() {
    for &(_, d, s) in SMALL_PERIODS {
        let b = poly(s);
        let pd = pd_from_bd(&b).unwrap();
        let lhs = pd.inflate(4);
        let rhs = &(&b * &b.negate_var()) * &conj_product(&b);
        assert_eq!(lhs, rhs, "d = {d}");
        // independent route to b(ix) b(-ix): negate the x^(4k+2) terms of b(x) b(-x)
        let even = &b * &b.negate_var();
        let twisted: Vec<_> =
            even.coeffs().iter().enumerate().map(|(i, c)| if i % 4 == 2 { -c.clone() } else { c.clone() }).collect();
        assert_eq!(conj_product(&b), IntPoly::new(twisted), "d = {d}");
    }
}
