//! Poisson bivectors, Hamiltonian and canonical derivations, the Poisson
//! cochain and chain differentials, the extended bracket on forms,
//! compatibility of pairs and the Magri recursion.

mod extended;
mod magri;

pub use extended::{
    contract_front, extended_bracket, extended_bracket_characterized, extended_bracket_oracle,
    lie_p_form,
};
pub use magri::{involution_check, magri_chain, magri_step, MagriChain};

use crate::error::{Error, Result};
use crate::exactalg::{same_ctx, Monomial, Poly};
use crate::tensorcalc::blade::all_of_grade;
use crate::tensorcalc::{contract_form, normalize_degree, schouten, Form, Multivector};

/// A bivector certified to satisfy `[[P, P]] = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoissonStructure {
    p: Multivector,
}

impl PoissonStructure {
    pub fn new(p: Multivector) -> Result<Self> {
        require_bivector(&p)?;
        let defect = jacobi_defect(&p)?;
        if !defect.is_zero() {
            return Err(Error::NotPoisson {
                defect_terms: defect.num_terms(),
            });
        }
        Ok(PoissonStructure { p })
    }

    pub fn bivector(&self) -> &Multivector {
        &self.p
    }

    pub fn verified(&self) -> bool {
        true
    }

    pub fn bracket(&self, a: &Poly, b: &Poly) -> Result<Poly> {
        poisson_bracket(&self.p, a, b)
    }
}

fn require_bivector(p: &Multivector) -> Result<()> {
    if p.degree() != 2 {
        return Err(Error::GradeMismatch {
            expected: "bivector".into(),
            got: format!("degree {}", p.degree()),
        });
    }
    Ok(())
}

/// `{a, b}_P = P(a)(b)`.
pub fn poisson_bracket(p: &Multivector, a: &Poly, b: &Poly) -> Result<Poly> {
    require_bivector(p)?;
    Ok(p.evaluate(a)?.evaluate(b)?.as_scalar())
}

/// `[[P, P]]`.
pub fn jacobi_defect(p: &Multivector) -> Result<Multivector> {
    require_bivector(p)?;
    schouten(p, p)
}

/// Jacobi identity of `{·,·}_P` on all triples of coordinate functions.
pub fn jacobi_on_generators(p: &Multivector) -> Result<bool> {
    let ctx = p.ctx();
    let n = ctx.n();
    let x: Vec<Poly> = (0..n).map(|i| Poly::var(ctx, i)).collect();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let mut s = Poly::zero(ctx);
                for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
                    s += &poisson_bracket(p, &x[a], &poisson_bracket(p, &x[b], &x[c])?)?;
                }
                if !s.is_zero() {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// `P(a)`, the Hamiltonian derivation of `a`.
pub fn hamiltonian(p: &Multivector, a: &Poly) -> Result<Multivector> {
    require_bivector(p)?;
    p.evaluate(a)
}

/// Whether `X` preserves `{·,·}_P`, decided by `[[X, P]] = 0`.
pub fn is_canonical(p: &Multivector, x: &Multivector) -> Result<bool> {
    require_bivector(p)?;
    if x.degree() != 1 {
        return Err(Error::GradeMismatch {
            expected: "derivation".into(),
            got: format!("degree {}", x.degree()),
        });
    }
    Ok(schouten(x, p)?.is_zero())
}

/// `X{a,b} = {Xa,b} + {a,Xb}` on every pair of coordinate functions.
pub fn is_canonical_on_generators(p: &Multivector, x: &Multivector) -> Result<bool> {
    let ctx = p.ctx();
    let n = ctx.n();
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = (Poly::var(ctx, i), Poly::var(ctx, j));
            let lhs = x.apply(&poisson_bracket(p, &a, &b)?)?;
            let rhs =
                &poisson_bracket(p, &x.apply(&a)?, &b)? + &poisson_bracket(p, &a, &x.apply(&b)?)?;
            if lhs != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `∂_P X = [[P, X]]`.
pub fn d_cochain(ps: &PoissonStructure, x: &Multivector) -> Result<Multivector> {
    schouten(&ps.p, x)
}

/// `d_P = i_P∘d - d∘i_P : Λ^j → Λ^{j-1}`, normalized so that
/// `d_P(a db) = {a, b}_P`. Defined for any bivector.
pub fn boundary(p: &Multivector, w: &Form) -> Form {
    let first = contract_form(p, &w.d()).expect("same context");
    let second = contract_form(p, w).expect("same context").d();
    let out = first.checked_add(&-&second).expect("same degree");
    normalize_degree(out, w.degree() as i64 - 1)
}

/// The Poisson chain differential `d_P`.
pub fn d_chain(ps: &PoissonStructure, w: &Form) -> Result<Form> {
    same_ctx(ps.p.ctx(), w.ctx())?;
    Ok(boundary(&ps.p, w))
}

/// Verdicts of the three equivalent Poisson conditions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoissonConditions {
    pub jacobi_on_generators: bool,
    pub schouten_vanishes: bool,
    /// `∂_P∘∂_P = 0` on a spanning sample: coordinate monomials of degree
    /// at most two and all constant basis multivectors.
    pub cochain_square_vanishes: bool,
}

impl PoissonConditions {
    pub fn agree(&self) -> bool {
        self.jacobi_on_generators == self.schouten_vanishes
            && self.schouten_vanishes == self.cochain_square_vanishes
    }
}

pub fn poisson_conditions(p: &Multivector) -> Result<PoissonConditions> {
    let ctx = p.ctx();
    let n = ctx.n();
    let mut sample: Vec<Multivector> = Monomial::up_to_degree(n, 2)
        .into_iter()
        .map(|m| Multivector::scalar(&Poly::monomial(ctx, m, crate::exactalg::int(1))))
        .collect();
    for k in 1..=n {
        for mask in all_of_grade(n, k) {
            sample.push(Multivector::from_masks(ctx, k, [(mask, Poly::one(ctx))]));
        }
    }
    let mut square_zero = true;
    for x in &sample {
        if !schouten(p, &schouten(p, x)?)?.is_zero() {
            square_zero = false;
            break;
        }
    }
    Ok(PoissonConditions {
        jacobi_on_generators: jacobi_on_generators(p)?,
        schouten_vanishes: jacobi_defect(p)?.is_zero(),
        cochain_square_vanishes: square_zero,
    })
}

/// Compatibility of two Poisson structures, with the defect `[[P, P']]`.
#[derive(Clone, Debug)]
pub struct Compatibility {
    pub compatible: bool,
    pub defect: Multivector,
}

pub fn compatible(p: &PoissonStructure, q: &PoissonStructure) -> Result<Compatibility> {
    same_ctx(p.p.ctx(), q.p.ctx())?;
    let defect = schouten(&p.p, &q.p)?;
    Ok(Compatibility {
        compatible: defect.is_zero(),
        defect,
    })
}
