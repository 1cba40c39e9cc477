mod common;

use std::collections::HashSet;

use monocubic::cubicforms::{self, BinaryCubicForm, ShearMap, SignFilter};
use proptest::prelude::*;

fn monic() -> impl Strategy<Value = BinaryCubicForm> {
    (-50i128..=50, -2000i128..=2000, -100_000i128..=100_000).prop_map(|(a, b, c)| BinaryCubicForm::monic(a, b, c))
}

fn count(ymax: i128) -> common::Counts {
    let mut c = common::Counts::default();
    for e in cubicforms::enumerate(ymax, SignFilter::Both).unwrap() {
        let e = e.unwrap();
        if e.inv.disc > 0 {
            c.pos += 1;
            c.pos_irreducible += u64::from(e.irreducible);
        } else {
            c.neg += 1;
            c.neg_irreducible += u64::from(e.irreducible);
        }
    }
    c
}

#[test]
fn enumeration_matches_coefficient_loop() {
    for ymax in [100, 1_000, 10_000, 54_321] {
        assert_eq!(count(ymax), common::brute_counts(ymax), "Ymax = {ymax}");
    }
}

#[test]
fn sign_filters_partition_the_family() {
    let n = |s| cubicforms::enumerate(20_000, s).unwrap().count();
    assert_eq!(n(SignFilter::Positive) + n(SignFilter::Negative), n(SignFilter::Both));
}

#[test]
fn enumeration_is_canonical_and_unique() {
    let mut seen = HashSet::new();
    for e in cubicforms::enumerate(100_000, SignFilter::Both).unwrap() {
        let e = e.unwrap();
        assert!(e.form.is_canonical());
        assert!(seen.insert((e.inv.i, e.inv.j)));
        assert!(e.inv.height4 < 400_000);
        assert_ne!(e.inv.disc, 0);
    }
}

#[test]
fn tiles_cover_the_full_range() {
    let ymax = 30_000;
    let all: Vec<_> = cubicforms::enumerate(ymax, SignFilter::Both).unwrap().map(Result::unwrap).collect();
    let r = cubicforms::i_range(ymax);
    let mut tiled = Vec::new();
    let mut lo = *r.start();
    while lo <= *r.end() {
        tiled.extend(cubicforms::enumerate_tile(ymax, SignFilter::Both, lo..=lo + 6).map(Result::unwrap));
        lo += 7;
    }
    assert_eq!(tiled, all);
}

#[test]
fn bad_bound_rejected() {
    assert!(cubicforms::enumerate(0, SignFilter::Both).is_err());
}

proptest! {
    #[test]
    fn invariants_match_closed_form(f in monic()) {
        let inv = cubicforms::invariants(&f).unwrap();
        prop_assert_eq!((inv.i, inv.j), common::ij(f.f1, f.f2, f.f3));
        prop_assert_eq!(inv.disc, common::poly_disc(f.f1, f.f2, f.f3));
        prop_assert_eq!(27 * inv.disc, 4 * inv.i.pow(3) - inv.j * inv.j);
    }

    #[test]
    fn shear_preserves_invariants(f in monic(), a in -1000i128..=1000) {
        let g = ShearMap::new(a).apply(&f).unwrap();
        prop_assert_eq!(g.f0, 1);
        prop_assert_eq!(common::ij(g.f1, g.f2, g.f3), common::ij(f.f1, f.f2, f.f3));
        // the general action agrees with the closed-form shear
        prop_assert_eq!(cubicforms::act(&ShearMap::new(a).matrix(), &f).unwrap(), g);
    }

    #[test]
    fn reduce_is_idempotent_and_shear_invariant(f in monic(), a in -1000i128..=1000) {
        let (r, s) = cubicforms::reduce(&f).unwrap();
        prop_assert!(r.is_canonical());
        prop_assert_eq!(s.apply(&f).unwrap(), r);
        prop_assert_eq!(cubicforms::reduce(&r).unwrap().0, r);
        let g = ShearMap::new(a).apply(&f).unwrap();
        prop_assert_eq!(cubicforms::reduce(&g).unwrap().0, r);
    }

    #[test]
    fn ij_roundtrip(f in monic()) {
        let (r, _) = cubicforms::reduce(&f).unwrap();
        let (i, j) = common::ij(r.f1, r.f2, r.f3);
        prop_assert_eq!(cubicforms::form_from_ij(i, j), Some(r));
    }

    #[test]
    fn form_from_ij_only_returns_matching_forms(i in -10_000i128..=10_000, j in -1_000_000i128..=1_000_000) {
        if let Some(g) = cubicforms::form_from_ij(i, j) {
            prop_assert!(g.is_canonical());
            prop_assert_eq!(common::ij(g.f1, g.f2, g.f3), (i, j));
        }
    }

    #[test]
    fn irreducibility_matches_root_search(a in -50i128..=50, b in -2000i128..=2000, c in -5000i128..=5000) {
        let f = BinaryCubicForm::monic(a, b, c);
        prop_assert_eq!(
            cubicforms::is_irreducible(&f).unwrap(),
            !common::has_integer_root(f.f1, f.f2, f.f3)
        );
    }
}
