use std::sync::Arc;

use blocklie::scalar::{ratio, Poly, Rational, SymbolTable};
use proptest::prelude::*;

fn table() -> Arc<SymbolTable> {
    SymbolTable::new(&["x", "y", "z"]).unwrap()
}

fn rational() -> impl Strategy<Value = Rational> {
    (-20i64..=20, 1i64..=7).prop_map(|(n, d)| ratio(n, d))
}

fn poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec((rational(), 0u32..=3, 0u32..=3, 0u32..=2), 0..5).prop_map(|terms| {
        let t = table();
        let v = |n| Poly::var(&t, n).unwrap();
        terms.into_iter().fold(Poly::zero().lift(&t).unwrap(), |acc, (c, a, b, e)| {
            acc + (v("x").pow(a) * v("y").pow(b) * v("z").pow(e)).scale(&c)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn ring_axioms(f in poly(), g in poly(), h in poly()) {
        prop_assert_eq!(&f + &g, &g + &f);
        prop_assert_eq!(&f * &g, &g * &f);
        prop_assert_eq!((&f + &g) + &h, &f + (&g + &h));
        prop_assert_eq!((&f * &g) * &h, &f * (&g * &h));
        prop_assert_eq!(&f * (&g + &h), &f * &g + &f * &h);
        prop_assert!((&f - &f).is_zero());
        prop_assert_eq!(&f * &Poly::one(), f.clone());
    }

    #[test]
    fn substitution_is_a_ring_homomorphism(f in poly(), g in poly(), x in rational(), y in rational()) {
        let s = |p: &Poly| p.subs(&[("x", x.clone()), ("y", y.clone())]);
        prop_assert_eq!(s(&(&f + &g)), s(&f) + s(&g));
        prop_assert_eq!(s(&(&f * &g)), s(&f) * s(&g));
        let full = |p: &Poly| s(p).subs(&[("z", ratio(3, 2))]).to_rational().unwrap();
        prop_assert_eq!(full(&(&f * &g)), full(&f) * full(&g));
    }

    #[test]
    fn degree_is_additive(f in poly(), g in poly()) {
        prop_assume!(!f.is_zero() && !g.is_zero());
        for s in ["x", "y", "z"] {
            prop_assert_eq!((&f * &g).degree_bound(s), f.degree_bound(s) + g.degree_bound(s));
        }
    }

    #[test]
    fn display_parses_back(f in poly()) {
        let back = Poly::parse(&f.to_string(), &table()).unwrap();
        prop_assert_eq!(back, f);
    }
}

#[test]
fn mismatched_tables_are_rejected_by_strict_ops() {
    let a = Poly::var(&SymbolTable::new(&["x"]).unwrap(), "x").unwrap();
    let b = Poly::var(&SymbolTable::new(&["y"]).unwrap(), "y").unwrap();
    assert!(a.checked_add(&b).is_err());
    assert_eq!(a.widening_add(&b), b.widening_add(&a));
}
