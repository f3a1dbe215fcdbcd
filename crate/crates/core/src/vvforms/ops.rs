use super::VForm;
use crate::error::{Error, Result};
use crate::exactalg::same_ctx;
use crate::tensorcalc::{contract_form, contract_multi, lie_form, schouten, Form, Multivector};

fn require_multi_degree_one(o: &VForm) -> Result<()> {
    if o.multi_degree() != 1 {
        return Err(Error::GradeMismatch {
            expected: "multi-degree 1".into(),
            got: format!("multi-degree {}", o.multi_degree()),
        });
    }
    Ok(())
}

fn nominal(w: Form, degree: i64) -> Form {
    crate::tensorcalc::normalize_degree(w, degree)
}

/// Inner product `i_Ω ω` for `Ω ∈ D_i(Λ^j)` and `ω ∈ Λ^k`: insert the
/// multivector leg, then wedge the form leg on the left. Degree `k + j - i`.
pub fn contract_general(o: &VForm, w: &Form) -> Result<Form> {
    same_ctx(o.ctx(), w.ctx())?;
    let target = w.degree() as i64 + o.form_degree() as i64 - o.multi_degree() as i64;
    let mut acc = Form::zero(o.ctx(), target.max(0) as usize);
    if o.multi_degree() > w.degree() {
        return Ok(acc);
    }
    for (rho, x) in o.decompose() {
        let inner = contract_form(&x, w)?;
        acc = acc.checked_add(&rho.wedge(&inner)?)?;
    }
    Ok(nominal(acc, target))
}

/// `i_Ω ω` for `Ω ∈ D_1(Λ^k)`, a form of degree `k + j - 1`.
pub fn vv_contract(o: &VForm, w: &Form) -> Result<Form> {
    require_multi_degree_one(o)?;
    contract_general(o, w)
}

/// `L_Ω = [d, i_Ω] = d∘i_Ω - (-1)^{j-i} i_Ω∘d` for `Ω ∈ D_i(Λ^j)`; shifts
/// degree by `j - i + 1`.
pub fn lie_general(o: &VForm, w: &Form) -> Result<Form> {
    let first = contract_general(o, w)?.d();
    let second = contract_general(o, &w.d())?;
    let odd = (o.form_degree() + o.multi_degree()).is_multiple_of(2);
    let out = first.checked_add(&second.signed(odd))?;
    Ok(nominal(
        out,
        w.degree() as i64 + o.form_degree() as i64 - o.multi_degree() as i64 + 1,
    ))
}

/// `L_Ω = [d, i_Ω] : Λ^j → Λ^{j+k}` for `Ω ∈ D_1(Λ^k)`.
pub fn vv_lie(o: &VForm, w: &Form) -> Result<Form> {
    require_multi_degree_one(o)?;
    lie_general(o, w)
}

/// `i_Ω Ω'` for `Ω ∈ D_i(Λ^j)`, acting on the form leg of `Ω'`.
pub fn contract_vform(o: &VForm, op: &VForm) -> Result<VForm> {
    same_ctx(o.ctx(), op.ctx())?;
    let fd = (op.form_degree() + o.form_degree()) as i64 - o.multi_degree() as i64;
    let out = op.map_form_leg(|w| contract_general(o, w))?;
    Ok(out.retag(fd.max(0) as usize, op.multi_degree()))
}

/// Inner product `D_i(Λ^j) ⊗ D_k(A) → D_{k-j+i}(A)`:
/// `i_{ρ⊗Y} X = Y ∧ i_ρ X`.
pub fn contract_into_multivector(o: &VForm, x: &Multivector) -> Result<Multivector> {
    same_ctx(o.ctx(), x.ctx())?;
    let target = x.degree() as i64 - o.form_degree() as i64 + o.multi_degree() as i64;
    let mut acc = Multivector::zero(o.ctx(), target.max(0) as usize);
    if o.form_degree() > x.degree() {
        return Ok(acc);
    }
    for (rho, y) in o.decompose() {
        acc = acc.checked_add(&y.wedge(&contract_multi(&rho, x)?)?)?;
    }
    Ok(acc)
}

/// Frölicher–Nijenhuis bracket on `D_1(Λ^*)`, defined on decomposable
/// elements by
///
/// `[[ω⊗X, ω'⊗X']] = ω∧ω'⊗[X,X'] + ω∧L_X ω'⊗X' - L_{X'}ω∧ω'⊗X
///   + (-1)^j dω∧i_X ω'⊗X' + (-1)^j i_{X'}ω∧dω'⊗X`
///
/// and extended bilinearly.
pub fn fn_bracket(o: &VForm, op: &VForm) -> Result<VForm> {
    require_multi_degree_one(o)?;
    require_multi_degree_one(op)?;
    same_ctx(o.ctx(), op.ctx())?;
    let j = o.form_degree();
    let deg = j + op.form_degree();
    let mut acc = VForm::zero(o.ctx(), deg, 1);
    let sj = j % 2 == 1;
    let rhs = op.decompose();
    for (w, x) in o.decompose() {
        let dw = w.d();
        for (wp, xp) in &rhs {
            let terms = [
                VForm::tensor(&w.wedge(wp)?, &x.commutator(xp)?)?,
                VForm::tensor(&w.wedge(&lie_form(&x, wp)?)?, xp)?,
                -&VForm::tensor(&lie_form(xp, &w)?.wedge(wp)?, &x)?,
                VForm::tensor(&dw.wedge(&contract_form(&x, wp)?)?, xp)?.signed(sj),
                VForm::tensor(&contract_form(xp, &w)?.wedge(&wp.d())?, &x)?.signed(sj),
            ];
            for t in &terms {
                acc = acc.checked_add(t)?;
            }
        }
    }
    Ok(acc.retag(deg, 1))
}

/// Nijenhuis–Richardson bracket
/// `[Ω, Ω']^NR = i_Ω Ω' - (-1)^{(j-1)(j'-1)} i_{Ω'} Ω` on `D_1(Λ^*)`.
pub fn nr_bracket(o: &VForm, op: &VForm) -> Result<VForm> {
    require_multi_degree_one(o)?;
    require_multi_degree_one(op)?;
    let (j, jp) = (o.form_degree(), op.form_degree());
    let deg = (j + jp).saturating_sub(1);
    let a = contract_vform(o, op)?;
    let b = contract_vform(op, o)?;
    let odd = ((j as i64 - 1) * (jp as i64 - 1)).rem_euclid(2) == 1;
    Ok(a.checked_add(&b.signed(!odd))?.retag(deg, 1))
}

/// Integrability certificate for `N ∈ D_1(Λ^1)`.
#[derive(Clone, Debug)]
pub struct Integrability {
    pub integrable: bool,
    /// `[[N, N]]`.
    pub defect: VForm,
}

pub fn is_integrable(n: &VForm) -> Result<Integrability> {
    if n.form_degree() != 1 || n.multi_degree() != 1 {
        return Err(Error::GradeMismatch {
            expected: "element of D_1(Λ^1)".into(),
            got: format!("bidegree ({}, {})", n.form_degree(), n.multi_degree()),
        });
    }
    let defect = fn_bracket(n, n)?;
    Ok(Integrability {
        integrable: defect.is_zero(),
        defect,
    })
}

/// `d_N = L_N` for an integrable `N`.
pub fn d_n(n: &VForm, w: &Form) -> Result<Form> {
    if !is_integrable(n)?.integrable {
        return Err(Error::NotIntegrable);
    }
    vv_lie(n, w)
}

/// `d̄_N = d - d_N`.
pub fn d_n_bar(n: &VForm, w: &Form) -> Result<Form> {
    let dn = d_n(n, w)?;
    w.d().checked_add(&-&dn)
}

/// `∂_N = [[N, ·]]` on `D_1(Λ^k)`.
pub fn d_nijenhuis(n: &VForm, o: &VForm) -> Result<VForm> {
    fn_bracket(n, o)
}

/// `L^P_Ω = [∂_P, i_Ω] = ∂_P∘i_Ω - (-1)^{i-j} i_Ω∘∂_P` on `D_k(A)` for
/// `Ω ∈ D_i(Λ^j)`, landing in `D_{k+i-j+1}(A)`.
pub fn lie_p_general(p: &Multivector, o: &VForm, x: &Multivector) -> Result<Multivector> {
    if p.degree() != 2 {
        return Err(Error::GradeMismatch {
            expected: "bivector".into(),
            got: format!("degree {}", p.degree()),
        });
    }
    if !schouten(p, p)?.is_zero() {
        return Err(Error::NotPoisson {
            defect_terms: schouten(p, p)?.num_terms(),
        });
    }
    lie_p_unchecked(p, o, x)
}

pub(crate) fn lie_p_unchecked(p: &Multivector, o: &VForm, x: &Multivector) -> Result<Multivector> {
    let target = x.degree() as i64 + o.multi_degree() as i64 - o.form_degree() as i64 + 1;
    let first = schouten(p, &contract_into_multivector(o, x)?)?;
    let second = contract_into_multivector(o, &schouten(p, x)?)?;
    let odd = (o.multi_degree() + o.form_degree()).is_multiple_of(2);
    let out = first.checked_add(&second.signed(odd))?;
    if out.is_zero() {
        return Ok(Multivector::zero(p.ctx(), target.max(0) as usize));
    }
    Ok(out)
}

/// `L^N_Ω = [∂_N, i_Ω] = ∂_N∘i_Ω - (-1)^{j-1} i_Ω∘∂_N` on `D_1(Λ^k)` for
/// `Ω ∈ D_1(Λ^j)`.
pub fn lie_n_general(n: &VForm, o: &VForm, arg: &VForm) -> Result<VForm> {
    require_multi_degree_one(o)?;
    let target = arg.form_degree() + o.form_degree();
    let first = fn_bracket(n, &contract_vform(o, arg)?)?;
    let second = contract_vform(o, &fn_bracket(n, arg)?)?;
    let odd = o.form_degree() % 2 == 1;
    Ok(first.checked_add(&second.signed(odd))?.retag(target, 1))
}
