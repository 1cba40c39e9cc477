mod common;

use monocubic::cubicfield::{self, CubicFieldData, IntElement, MonicCubic};
use monocubic::cubicforms::{BinaryCubicForm, SignFilter};
use monocubic::{arith, cubicforms};
use proptest::prelude::*;

fn cubic() -> impl Strategy<Value = MonicCubic> {
    (-5i128..=5, -30i128..=30, -30i128..=30).prop_map(|(a, b, c)| MonicCubic::new(a, b, c))
}

fn element() -> impl Strategy<Value = IntElement> {
    [-20i128..=20, -20i128..=20, -20i128..=20]
}

/// Product in `Z[x]/(g)` by schoolbook multiplication then reduction of x^4, x^3.
fn naive_mul(g: &MonicCubic, a: &IntElement, b: &IntElement) -> IntElement {
    let mut c = [0i128; 5];
    for i in 0..3 {
        for j in 0..3 {
            c[i + j] += a[i] * b[j];
        }
    }
    let low = [g.g3, g.g2, g.g1];
    for d in (3..5).rev() {
        let t = c[d];
        c[d] = 0;
        for k in 0..3 {
            c[d - 3 + k] -= t * low[k];
        }
    }
    [c[0], c[1], c[2]]
}

proptest! {
    #[test]
    fn multiplication_matches_schoolbook(g in cubic(), a in element(), b in element()) {
        prop_assert_eq!(g.mul(&a, &b).unwrap(), naive_mul(&g, &a, &b));
        prop_assert_eq!(g.mul_theta(&a).unwrap(), naive_mul(&g, &a, &[0, 1, 0]));
    }

    #[test]
    fn order_is_associative(g in cubic(), a in element(), b in element(), c in element()) {
        let ab_c = g.mul(&g.mul(&a, &b).unwrap(), &c).unwrap();
        let a_bc = g.mul(&a, &g.mul(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(ab_c, a_bc);
    }

    #[test]
    fn norm_is_multiplicative(g in cubic(), a in element(), b in element()) {
        let ab = g.mul(&a, &b).unwrap();
        prop_assert_eq!(g.norm(&ab).unwrap(), g.norm(&a).unwrap() * g.norm(&b).unwrap());
    }

    #[test]
    fn norm_of_rationals_and_theta(g in cubic(), n in -50i128..=50) {
        prop_assert_eq!(g.norm(&[n, 0, 0]).unwrap(), n * n * n);
        prop_assert_eq!(g.norm(&[0, 1, 0]).unwrap(), -g.g3);
        prop_assert_eq!(g.discriminant().unwrap(), common::poly_disc(g.g1, g.g2, g.g3));
    }
}

fn maximal_fields(ymax: i128) -> Vec<CubicFieldData> {
    cubicforms::enumerate(ymax, SignFilter::Both)
        .unwrap()
        .map(Result::unwrap)
        .filter(|e| e.irreducible)
        .map(|e| CubicFieldData::from_form(&e.form).unwrap())
        .filter(|k| k.maximal)
        .collect()
}

#[test]
fn maximality_agrees_with_cas_fixture() {
    let oracle = common::cas_oracle();
    for e in cubicforms::enumerate(20_000, SignFilter::Both).unwrap().map(Result::unwrap) {
        if !e.irreducible {
            continue;
        }
        let k = CubicFieldData::from_form(&e.form).unwrap();
        let (field_disc, _) = oracle[&(e.form.f1, e.form.f2, e.form.f3)];
        assert_eq!(k.maximal, field_disc == e.inv.disc, "{}", e.form);
        if k.maximal {
            assert_eq!(k.disc, field_disc);
        }
    }
}

#[test]
fn prime_ideals_factor_p() {
    for k in maximal_fields(5_000) {
        let g = k.minpoly;
        for p in arith::primes_up_to(40) {
            let ideals = cubicfield::prime_ideals_above(&k, p).unwrap();
            let ef: u32 = ideals.iter().map(|q| q.ramification * q.residue_degree).sum();
            assert_eq!(ef, 3, "p = {p} in {g:?}");
            let mut product = monocubic::cubicfield::IdealLattice::unit();
            for q in &ideals {
                assert_eq!(q.norm(), (p as i128).pow(q.residue_degree));
                assert!(q.lattice.is_ideal(&g));
                assert!(q.lattice.contains(&[p as i128, 0, 0]));
                for _ in 0..q.ramification {
                    product = product.product(&q.lattice, &g).unwrap();
                }
            }
            assert_eq!(product, monocubic::cubicfield::IdealLattice::scalar(p as i128), "p = {p} in {g:?}");
            // ramified primes are exactly those dividing the discriminant
            let ramified = ideals.iter().any(|q| q.ramification > 1);
            assert_eq!(ramified, k.disc % p as i128 == 0, "p = {p} in {g:?}");
        }
    }
}

#[test]
fn non_maximal_orders_detected() {
    for (f1, f2, f3) in [(0, 0, 4), (0, 0, -12), (0, 0, 9)] {
        let f = BinaryCubicForm::monic(f1, f2, f3);
        assert!(!cubicfield::is_maximal(&f).unwrap(), "{f}");
    }
    assert!(cubicfield::is_maximal(&BinaryCubicForm::monic(0, -1, 1)).unwrap());
}
