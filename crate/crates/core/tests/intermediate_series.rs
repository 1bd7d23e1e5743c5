use blocklie::block::BlockParams;
use blocklie::intermediate::{act, module_axiom_check, module_axiom_failures, IntermediateKind, ModuleVector};
use blocklie::lie::{BasisIndex, Element, Window};
use blocklie::scalar::{rat, ratio, Poly, Rational};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn draw(rng: &mut ChaCha8Rng, nonzero: bool) -> Rational {
    loop {
        let r = ratio(rng.gen_range(-9..=9), rng.gen_range(1..=5));
        if !nonzero || r != rat(0) {
            return r;
        }
    }
}

#[test]
fn axioms_hold_at_20_random_draws() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let w = Window::new(-3, 3, 2).unwrap();
    for _ in 0..20 {
        let params = BlockParams::rational(draw(&mut rng, false), draw(&mut rng, true)).unwrap();
        let (a, b) = (draw(&mut rng, false), draw(&mut rng, false));
        for kind in [
            IntermediateKind::Aab { a: a.clone(), b },
            IntermediateKind::Aa { a: a.clone() },
            IntermediateKind::Ba { a },
        ] {
            let v = module_axiom_check(&kind, &params, &w, -6..=6).unwrap();
            assert!(v.holds(), "{kind:?} {params:?}: {v:?}");
        }
    }
}

#[test]
fn central_perturbation_fails_only_on_the_cocycle_support() {
    let params = BlockParams::rational(ratio(-5, 2), ratio(2, 3)).unwrap();
    let w = Window::new(-3, 3, 2).unwrap();
    for kind in [IntermediateKind::Aa { a: rat(2) }, IntermediateKind::Ba { a: ratio(1, 3) }] {
        let failures = module_axiom_failures(&kind, &params, &w, -6..=6, &rat(1)).unwrap();
        let mut pairs: Vec<(i64, i64)> = failures.iter().map(|f| (f.alpha, f.beta)).collect();
        pairs.dedup();
        assert_eq!(pairs, vec![(-3, 3), (-2, 2), (2, -2), (3, -3)]);
        for f in &failures {
            assert_eq!((f.i, f.j), (0, 0));
            let cocycle = ratio(f.alpha.pow(3) - f.alpha, 12);
            assert_eq!(f.residual, ModuleVector::basis(f.mu).scale(&cocycle));
        }
    }
}

#[test]
fn degenerate_parameters_specialize_the_two_parameter_family() {
    let params = BlockParams::rational(ratio(4, 3), rat(-2)).unwrap();
    let a = ratio(5, 7);
    for al in -4..=4 {
        for mu in -6..=6 {
            let x = Element::l(al, 0);
            let v = ModuleVector::basis(mu);
            let aab = |b| act(&IntermediateKind::Aab { a: rat(0), b: rat(b) }, &params, &x, &v).unwrap();
            if mu != 0 {
                assert_eq!(aab(1), act(&IntermediateKind::Aa { a: a.clone() }, &params, &x, &v).unwrap());
            }
            if mu != -al {
                assert_eq!(aab(0), act(&IntermediateKind::Ba { a: a.clone() }, &params, &x, &v).unwrap());
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn action_is_bilinear(
        xs in prop::collection::vec((-3i64..=3, 0i64..=2, -5i64..=5), 1..4),
        vs in prop::collection::vec((-4i64..=4, -5i64..=5), 1..4),
        s in -3i64..=3,
    ) {
        let params = BlockParams::rational(ratio(1, 2), rat(3)).unwrap();
        let kind = IntermediateKind::Ba { a: ratio(-3, 2) };
        let x = Element::from_terms(xs.iter().map(|&(a, i, c)| (BasisIndex::l(a, i), Poly::int(c))));
        let mut v = ModuleVector::zero();
        for &(mu, c) in &vs {
            v.add_term(mu, rat(c));
        }
        let whole = act(&kind, &params, &x.scale(&Poly::int(s)), &v).unwrap();
        let mut parts = ModuleVector::zero();
        for (b, c) in x.terms() {
            for (mu, cv) in v.terms() {
                let y = Element::term(*b, c.clone());
                let piece = act(&kind, &params, &y, &ModuleVector::basis(*mu)).unwrap();
                parts = parts.add(&piece.scale(&(cv * rat(s))));
            }
        }
        prop_assert_eq!(whole, parts);
    }
}
