use num_traits::Zero;

use super::{compatible, poisson_bracket, PoissonStructure};
use crate::error::{Error, Result};
use crate::exactalg::{Monomial, Poly, Rational, RowReducer};
use crate::tensorcalc::Multivector;

/// A sequence `a_1, a_2, ...` with `∂_P(a_s) = ∂_{P'}(a_{s+1})`.
#[derive(Clone, Debug)]
pub struct MagriChain {
    pub p: PoissonStructure,
    pub q: PoissonStructure,
    pub elements: Vec<Poly>,
    pub degree_cap: u32,
}

impl MagriChain {
    /// Whether consecutive elements satisfy the recursion.
    pub fn is_valid(&self) -> Result<bool> {
        for w in self.elements.windows(2) {
            if self.p.bivector().evaluate(&w[0])? != self.q.bivector().evaluate(&w[1])? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Solve `P'(b) = P(a)` for `b` with monomials of degree at most `cap`.
/// Among all solutions the one with zero free coordinates (in graded order
/// of monomials) is returned; `None` if the truncated system is
/// inconsistent.
pub fn magri_step(
    p: &PoissonStructure,
    q: &PoissonStructure,
    a: &Poly,
    cap: u32,
) -> Result<Option<Poly>> {
    if !compatible(p, q)?.compatible {
        return Err(Error::NotCompatible);
    }
    Ok(solve_step(p.bivector(), q.bivector(), a, cap))
}

fn solve_step(p: &Multivector, q: &Multivector, a: &Poly, cap: u32) -> Option<Poly> {
    let ctx = p.ctx();
    let n = ctx.n();
    let target = p.evaluate(a).expect("bivector").field_coeffs();
    let monos = Monomial::up_to_degree(n, cap);
    let images: Vec<Vec<Poly>> = monos
        .iter()
        .map(|m| {
            let b = Poly::monomial(ctx, m.clone(), crate::exactalg::int(1));
            q.evaluate(&b).expect("bivector").field_coeffs()
        })
        .collect();
    let mut keys = std::collections::BTreeSet::new();
    for l in 0..n {
        for (m, _) in target[l].terms() {
            keys.insert((l, m.clone()));
        }
        for im in &images {
            for (m, _) in im[l].terms() {
                keys.insert((l, m.clone()));
            }
        }
    }
    let mut red = RowReducer::new(monos.len());
    for (l, m) in keys {
        let row: Vec<Rational> = images.iter().map(|im| im[l].coeff(&m)).collect();
        red.add_row(row, target[l].coeff(&m));
        if red.is_inconsistent() {
            return None;
        }
    }
    let sol = red.solution()?;
    Some(Poly::from_terms(
        ctx,
        monos
            .into_iter()
            .zip(sol.particular)
            .filter(|(_, c)| !c.is_zero()),
    ))
}

/// Extend `seed` to a chain of `length` elements. Stops early (returning
/// the partial chain and `false`) when a step has no solution at the cap.
pub fn magri_chain(
    p: &PoissonStructure,
    q: &PoissonStructure,
    seed: &Poly,
    length: usize,
    cap: u32,
) -> Result<(MagriChain, bool)> {
    if !compatible(p, q)?.compatible {
        return Err(Error::NotCompatible);
    }
    let mut elements = vec![seed.clone()];
    let mut complete = true;
    while elements.len() < length {
        match solve_step(
            p.bivector(),
            q.bivector(),
            elements.last().expect("nonempty"),
            cap,
        ) {
            Some(b) => elements.push(b),
            None => {
                complete = false;
                break;
            }
        }
    }
    Ok((
        MagriChain {
            p: p.clone(),
            q: q.clone(),
            elements,
            degree_cap: cap,
        },
        complete,
    ))
}

/// All pairwise brackets of chain elements vanish for both structures.
pub fn involution_check(chain: &MagriChain) -> Result<bool> {
    let e = &chain.elements;
    for a in 0..e.len() {
        for b in a + 1..e.len() {
            for s in [&chain.p, &chain.q] {
                if !poisson_bracket(s.bivector(), &e[a], &e[b])?.is_zero() {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}
