use super::{contract_form, Form, Multivector};
use crate::error::Result;
use crate::vvforms::{self, VForm};

/// Lie derivative `L_X = d∘i_X - (-1)^i i_X∘d : Λ^j → Λ^{j-i+1}`.
pub fn lie_form(x: &Multivector, w: &Form) -> Result<Form> {
    let first = contract_form(x, w)?.d();
    let second = contract_form(x, &w.d())?;
    let out = first.checked_add(&second.signed(x.degree().is_multiple_of(2)))?;
    Ok(normalize(out, w.degree() as i64 + 1 - x.degree() as i64))
}

/// Re-tag a zero result with its nominal degree (clamped at zero).
pub(crate) fn normalize(w: Form, degree: i64) -> Form {
    if w.is_zero() {
        Form::zero(w.ctx(), degree.max(0) as usize)
    } else {
        w
    }
}

/// A graded operator on forms with a fixed degree shift.
#[derive(Clone, Debug)]
pub enum LieOperator {
    /// The de Rham differential.
    DeRham,
    /// `L_X` for a multiderivation.
    ByMultivector(Multivector),
    /// `L_Ω = [d, i_Ω]` for `Ω ∈ D_1(Λ^k)`.
    ByVForm(VForm),
    /// The Poisson boundary operator `d_P` (see [`crate::poisson::d_chain`]).
    PoissonBoundary(Multivector),
    /// `L_Ω = [d, i_Ω]` for `Ω ∈ D_i(Λ^j)`.
    General(VForm),
}

impl LieOperator {
    pub fn shift(&self) -> i64 {
        match self {
            LieOperator::DeRham => 1,
            LieOperator::ByMultivector(x) => 1 - x.degree() as i64,
            LieOperator::ByVForm(o) => o.form_degree() as i64,
            LieOperator::PoissonBoundary(_) => -1,
            LieOperator::General(o) => o.form_degree() as i64 - o.multi_degree() as i64 + 1,
        }
    }

    pub fn apply(&self, w: &Form) -> Result<Form> {
        match self {
            LieOperator::DeRham => Ok(w.d()),
            LieOperator::ByMultivector(x) => lie_form(x, w),
            LieOperator::ByVForm(o) => vvforms::vv_lie(o, w),
            LieOperator::PoissonBoundary(p) => Ok(crate::poisson::boundary(p, w)),
            LieOperator::General(o) => vvforms::lie_general(o, w),
        }
    }

    /// Graded commutator `[A, B] = A∘B - (-1)^{|A||B|} B∘A` applied to `w`.
    pub fn commutator_apply(a: &LieOperator, b: &LieOperator, w: &Form) -> Result<Form> {
        let ab = a.apply(&b.apply(w)?)?;
        let ba = b.apply(&a.apply(w)?)?;
        let odd = (a.shift() * b.shift()).rem_euclid(2) == 1;
        let out = ab.checked_add(&ba.signed(!odd))?;
        Ok(normalize(out, w.degree() as i64 + a.shift() + b.shift()))
    }
}
