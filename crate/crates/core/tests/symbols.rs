use std::sync::Arc;

use bracketlab_core::exactalg::rat;
use bracketlab_core::sample;
use bracketlab_core::symbols::*;
use bracketlab_core::tensorcalc::Form;
use bracketlab_core::{Error, Multivector, Poly, VarContext};
use proptest::prelude::*;

fn line() -> (Arc<VarContext>, SymbolSpace) {
    let c = VarContext::new(&["x"]).unwrap();
    let sp = SymbolSpace::new(&c).unwrap();
    (c, sp)
}

fn plane() -> (Arc<VarContext>, SymbolSpace) {
    let c = VarContext::new(&["x", "y"]).unwrap();
    let sp = SymbolSpace::new(&c).unwrap();
    (c, sp)
}

#[test]
fn compose_examples() {
    let (c, _) = line();
    let d = DiffOp::partial(&c, 0);
    let x = DiffOp::mult(&Poly::var(&c, 0));
    assert_eq!(d.compose(&x).unwrap().to_string(), "x*∂x + 1");
    assert_eq!(d.compose(&d).unwrap().to_string(), "∂x^2");
    assert_eq!(
        x.compose(&x).unwrap(),
        DiffOp::mult(&Poly::var(&c, 0).pow(2))
    );
}

#[test]
fn symbol_of_examples() {
    let (c, sp) = line();
    let d = DiffOp::partial(&c, 0);
    let x = DiffOp::mult(&Poly::var(&c, 0));
    let xd_plus_1 = d.compose(&x).unwrap();
    assert_eq!(
        symbol_of(&sp, &xd_plus_1, 1).unwrap().poly(),
        &(&sp.x(0) * &sp.p(0))
    );
    assert_eq!(
        symbol_of(&sp, &d.compose(&d).unwrap(), 2).unwrap().poly(),
        &sp.p(0).pow(2)
    );
    assert!(symbol_of(&sp, &x, 1).unwrap().is_zero());
    assert!(matches!(
        symbol_of(&sp, &d, 0),
        Err(Error::OrderTooHigh { order: 1, grade: 0 })
    ));
}

#[test]
fn product_and_bracket_examples() {
    let (_, sp) = line();
    let p = Symbol::new(&sp, sp.p(0), 1).unwrap();
    let xp = Symbol::new(&sp, &sp.x(0) * &sp.p(0), 1).unwrap();
    let x = Symbol::new(&sp, sp.x(0), 0).unwrap();
    let one = Symbol::new(&sp, Poly::one(sp.ext()), 0).unwrap();
    let prod = symbol_mul(&p, &xp).unwrap();
    assert_eq!(prod.poly(), &(&sp.x(0) * &sp.p(0).pow(2)));
    assert_eq!(prod, symbol_mul_by_composition(&sp, &p, &xp).unwrap());
    assert_eq!(symbol_mul(&xp, &one).unwrap(), xp);
    assert_eq!(symbol_bracket(&sp, &p, &xp).unwrap().poly(), &sp.p(0));
    let px = symbol_bracket(&sp, &p, &x).unwrap();
    assert_eq!(px.poly(), &Poly::constant(sp.ext(), rat(bracket_sign(), 1)));
    assert!(symbol_bracket(&sp, &xp, &xp).unwrap().is_zero());
}

#[test]
fn rho_examples() {
    let (_, sp) = line();
    assert_eq!(canonical_rho(&sp).to_string(), "p_x*dx");
    // dρ = dp∧dx, printed in index order as -dx^dp_x
    assert_eq!(
        canonical_rho(&sp).d(),
        Form::basis(sp.ext(), &[1, 0], &Poly::one(sp.ext()))
    );
    let (_, sp2) = plane();
    let ext = sp2.ext();
    for i in 0..ext.n() {
        let field = Multivector::basis(ext, &[i], &Poly::one(ext));
        assert!(rho_relation_holds(&sp2, &field).unwrap());
    }
}

#[test]
fn section_examples() {
    let (c, sp) = plane();
    let y = Poly::var(&c, 1);
    let w = Form::basis(&c, &[0], &y);
    let phi = section_from_form(&sp, &w).unwrap();
    assert_eq!(phi.image_of_fiber(0), &y);
    assert!(phi.image_of_fiber(1).is_zero());
    assert_eq!(form_from_section(&sp, &phi), w);
    let bad = [
        Poly::var(&c, 1),
        Poly::var(&c, 1),
        Poly::one(&c),
        Poly::one(&c),
    ];
    assert!(matches!(
        Section::from_substitution(&sp, &bad),
        Err(Error::NotASection(_))
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn composition_is_associative_and_acts(seed in any::<u64>()) {
        let (c, _) = plane();
        let mut r = sample::rng(seed);
        let a = sample::diffop(&mut r, &c, 2, 2, 3);
        let b = sample::diffop(&mut r, &c, 2, 2, 3);
        let e = sample::diffop(&mut r, &c, 1, 1, 3);
        let ab = a.compose(&b).unwrap();
        prop_assert_eq!(ab.compose(&e).unwrap(), a.compose(&b.compose(&e).unwrap()).unwrap());
        let f = sample::poly(&mut r, &c, 3, 4);
        prop_assert_eq!(ab.apply(&f).unwrap(), a.apply(&b.apply(&f).unwrap()).unwrap());
        let k = ab.order().unwrap_or(0) as usize;
        let gens = [Poly::var(&c, 0), Poly::var(&c, 1)];
        prop_assert!(order_criterion(&ab, k, &gens).unwrap());
        if k > 0 && !ab.top_part(k as u32).is_zero() {
            prop_assert!(!order_criterion(&ab, k - 1, &gens).unwrap());
        }
    }

    #[test]
    fn symbols_form_a_graded_poisson_algebra(seed in any::<u64>()) {
        let (_, sp) = plane();
        let mut r = sample::rng(seed);
        let s = [1, 2, 1].map(|g| sample::symbol(&mut r, &sp, g, 2));
        let br = |a: &Symbol, b: &Symbol| symbol_bracket(&sp, a, b).unwrap();
        let add = |a: &Symbol, b: &Symbol| Symbol::from_poly(&sp, a.poly() + b.poly()).unwrap().poly().clone();
        prop_assert_eq!(symbol_mul(&s[0], &s[1]).unwrap(), symbol_mul(&s[1], &s[0]).unwrap());
        prop_assert_eq!(symbol_mul(&s[0], &s[1]).unwrap(), symbol_mul_by_composition(&sp, &s[0], &s[1]).unwrap());
        prop_assert_eq!(br(&s[0], &s[1]).poly().clone(), -br(&s[1], &s[0]).poly());
        let jac = &add(&br(&s[0], &br(&s[1], &s[2])), &br(&s[1], &br(&s[2], &s[0]))) + br(&s[2], &br(&s[0], &s[1])).poly();
        prop_assert!(jac.is_zero());
        let lhs = br(&s[0], &symbol_mul(&s[1], &s[2]).unwrap());
        let rhs = add(&symbol_mul(&br(&s[0], &s[1]), &s[2]).unwrap(), &symbol_mul(&s[1], &br(&s[0], &s[2])).unwrap());
        prop_assert_eq!(lhs.poly(), &rhs);
        prop_assert_eq!(br(&s[0], &s[1]), canonical_bracket(&sp, &s[0], &s[1]).unwrap());
    }

    #[test]
    fn bracket_ignores_lower_order_perturbations(seed in any::<u64>()) {
        let (c, sp) = plane();
        let mut r = sample::rng(seed);
        let a = sample::symbol(&mut r, &sp, 2, 2);
        let b = sample::symbol(&mut r, &sp, 1, 2);
        let da = &representative(&sp, &a) + &sample::diffop(&mut r, &c, 1, 2, 3);
        let db = &representative(&sp, &b) + &sample::diffop(&mut r, &c, 0, 2, 3);
        prop_assert_eq!(symbol_bracket_of(&sp, &da, 2, &db, 1).unwrap(), symbol_bracket(&sp, &a, &b).unwrap());
    }

    #[test]
    fn rho_bracket_agrees_on_generators(seed in any::<u64>()) {
        let (_, sp) = plane();
        let mut r = sample::rng(seed);
        let a = sample::symbol(&mut r, &sp, 1, 2);
        let b = sample::symbol(&mut r, &sp, 2, 1);
        let induced = symbol_bracket(&sp, &a, &b).unwrap();
        prop_assert_eq!(&rho_bracket(&sp, a.poly(), b.poly()).unwrap(), induced.poly());
    }

    #[test]
    fn sections_round_trip_and_multiply(seed in any::<u64>()) {
        let (c, sp) = plane();
        let mut r = sample::rng(seed);
        let w = sample::form(&mut r, &c, 1, 2);
        let phi = section_from_form(&sp, &w).unwrap();
        prop_assert_eq!(form_from_section(&sp, &phi), w);
        let px = Symbol::new(&sp, sp.p(0), 1).unwrap();
        let py = Symbol::new(&sp, sp.p(1), 1).unwrap();
        let prod = symbol_mul(&px, &py).unwrap();
        prop_assert_eq!(phi.apply(&sp, &prod).unwrap(), &phi.apply(&sp, &px).unwrap() * &phi.apply(&sp, &py).unwrap());
        let ext = sp.ext();
        let field = sample::multivector(&mut r, ext, 1, 2);
        prop_assert!(rho_relation_holds(&sp, &field).unwrap());
    }
}
