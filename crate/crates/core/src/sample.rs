//! Seeded random generators for property tests, benches and corpus building.

use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::exactalg::{rat, Monomial, Poly, VarContext};
use crate::symbols::{DiffOp, Symbol, SymbolSpace};
use crate::tensorcalc::blade::all_of_grade;
use crate::tensorcalc::{Form, Multivector};
use crate::vvforms::VForm;

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random polynomial with at most `max_terms` terms of degree at most
/// `max_degree`; coefficients are small integers with the odd half-integer.
pub fn poly(r: &mut SampleRng, ctx: &Arc<VarContext>, max_degree: u32, max_terms: usize) -> Poly {
    let monos = Monomial::up_to_degree(ctx.n(), max_degree);
    let k = r.gen_range(0..=max_terms);
    let mut p = Poly::zero(ctx);
    for _ in 0..k {
        let m = monos[r.gen_range(0..monos.len())].clone();
        let num = r.gen_range(-3i64..=3);
        let den = if r.gen_bool(0.15) { 2 } else { 1 };
        p += &Poly::monomial(ctx, m, rat(num, den));
    }
    p
}

fn tables(
    r: &mut SampleRng,
    ctx: &Arc<VarContext>,
    degree: usize,
    max_degree: u32,
) -> Vec<(u32, Poly)> {
    let mut out = Vec::new();
    for m in all_of_grade(ctx.n(), degree) {
        if r.gen_bool(0.6) {
            out.push((m, poly(r, ctx, max_degree, 2)));
        }
    }
    out
}

pub fn multivector(
    r: &mut SampleRng,
    ctx: &Arc<VarContext>,
    degree: usize,
    max_degree: u32,
) -> Multivector {
    let t = tables(r, ctx, degree, max_degree);
    Multivector::from_masks(ctx, degree, t)
}

pub fn form(r: &mut SampleRng, ctx: &Arc<VarContext>, degree: usize, max_degree: u32) -> Form {
    let t = tables(r, ctx, degree, max_degree);
    Form::from_masks(ctx, degree, t)
}

/// Random element of `D_i(Λ^j)`.
pub fn vform(
    r: &mut SampleRng,
    ctx: &Arc<VarContext>,
    j: usize,
    i: usize,
    max_degree: u32,
) -> VForm {
    let mut terms = Vec::new();
    for jm in all_of_grade(ctx.n(), j) {
        for im in all_of_grade(ctx.n(), i) {
            if r.gen_bool(0.4) {
                terms.push(((jm, im), poly(r, ctx, max_degree, 2)));
            }
        }
    }
    VForm::from_masks(ctx, j, i, terms)
}

/// Bivector with constant coefficients (always Poisson).
pub fn constant_bivector(r: &mut SampleRng, ctx: &Arc<VarContext>) -> Multivector {
    let terms: Vec<(u32, Poly)> = all_of_grade(ctx.n(), 2)
        .into_iter()
        .map(|m| (m, Poly::constant(ctx, rat(r.gen_range(-2i64..=2), 1))))
        .collect();
    Multivector::from_masks(ctx, 2, terms)
}

/// Random differential operator of order at most `max_order`.
pub fn diffop(
    r: &mut SampleRng,
    ctx: &Arc<VarContext>,
    max_order: u32,
    max_degree: u32,
    max_terms: usize,
) -> DiffOp {
    let xs = Monomial::up_to_degree(ctx.n(), max_degree);
    let ds = Monomial::up_to_degree(ctx.n(), max_order);
    let mut out = DiffOp::zero(ctx);
    for _ in 0..r.gen_range(1..=max_terms) {
        let x = xs[r.gen_range(0..xs.len())].clone();
        let d = ds[r.gen_range(0..ds.len())].clone();
        out = &out + &DiffOp::term(ctx, x, d, rat(r.gen_range(-3i64..=3), 1));
    }
    out
}

/// Random symbol of the given grade with coefficients of degree at most
/// `max_degree`.
pub fn symbol(r: &mut SampleRng, sp: &SymbolSpace, grade: u32, max_degree: u32) -> Symbol {
    let xs = Monomial::up_to_degree(sp.n(), max_degree);
    let ps = Monomial::all_of_degree(sp.n(), grade);
    let mut terms = Vec::new();
    for _ in 0..r.gen_range(1..=3) {
        let mut e = xs[r.gen_range(0..xs.len())].0.clone();
        e.extend_from_slice(&ps[r.gen_range(0..ps.len())].0);
        terms.push((Monomial(e), rat(r.gen_range(-3i64..=3), 1)));
    }
    Symbol::new(sp, Poly::from_terms(sp.ext(), terms), grade).expect("homogeneous by construction")
}
