mod common;

use cmdyn::dynamics::{
    invariant_under_x_over_x_minus_1, mod2_profile, pd_from_bd, preperiodic_poly, scaling_law, Cache, Kernel,
};
use cmdyn::quadforms::class_number;
use common::poly;

#[test]
fn reduction_mod_two() {
    for n in 1..=8 {
        let p = mod2_profile(Kernel::F, n, &Cache::none()).unwrap();
        // x^(2^n) + x splits into the irreducibles of degree dividing n
        let total: usize = p.degrees.iter().map(|(d, c)| d * c).sum();
        assert_eq!(total, 1 << n, "n = {n}");
        assert!(p.degrees.keys().all(|d| (n as usize).is_multiple_of(*d)));
    }
}

#[test]
fn scaling() {
    for n in 1..=6 {
        let r = scaling_law(n, &Cache::none()).unwrap();
        assert!(r.ok, "{r:?}");
    }
}

#[test]
fn preperiodic_towers() {
    let b7 = poly("x^2-x+2");
    assert_eq!(preperiodic_poly(&pd_from_bd(&b7).unwrap(), 1).unwrap(), poly("16x^2-31x+16"));
    for (d, s) in [(7, "x^2-x+2"), (15, "x^4-4x^3+5x^2-2x+4"), (23, "x^6+x^5+9x^4-13x^3+18x^2-16x+8")] {
        let h = class_number(d).unwrap().0 as usize;
        let pd = pd_from_bd(&poly(s)).unwrap();
        for r in 2..=5 {
            let t = preperiodic_poly(&pd, r).unwrap();
            assert_eq!(t.deg(), (1 << (r - 1)) * h, "d = {d}, r = {r}");
            assert!(invariant_under_x_over_x_minus_1(&t), "d = {d}, r = {r}");
        }
    }
}
