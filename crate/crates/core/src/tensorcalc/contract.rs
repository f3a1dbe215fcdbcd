use super::blade::{bit, bits, count_above, count_below};
use super::table::Table;
use super::{Form, Multivector};
use crate::error::Result;
use crate::exactalg::{same_ctx, Poly};

/// Inner product `i_X ω` of `X ∈ D_i(A)` and `ω ∈ Λ^j`, a form of degree
/// `j - i` (zero when `i > j`).
///
/// For `X = X_1 ^ ... ^ X_i` this is `i_{X_1} ∘ ... ∘ i_{X_i}`; when `i = j`
/// it equals the full evaluation `X(a_1)...(a_i)` on `da_1 ^ ... ^ da_i`.
pub fn contract_form(x: &Multivector, w: &Form) -> Result<Form> {
    same_ctx(x.ctx(), w.ctx())?;
    if x.degree() > w.degree() {
        return Ok(Form::zero(x.ctx(), 0));
    }
    let mut t = Table::zero(x.ctx(), w.degree() - x.degree());
    for (i_mask, xc) in x.terms() {
        for (j_mask, wc) in w.terms() {
            if i_mask & !j_mask != 0 {
                continue;
            }
            let mut cur = j_mask;
            let mut parity = 0;
            for l in bits(i_mask).collect::<Vec<_>>().into_iter().rev() {
                parity += count_below(cur, l);
                cur &= !bit(l);
            }
            t.add_signed(cur, &(xc * wc), parity % 2 == 1);
        }
    }
    Ok(Form(t))
}

/// Inner product `i_ω X` of `ω ∈ Λ^j` into `X ∈ D_i(A)`, a multivector of
/// degree `i - j` (zero when `j > i`): `i(X ⊗ da ∧ ω') = i(X(a) ⊗ ω')` and
/// `i(X ⊗ a) = aX`.
pub fn contract_multi(w: &Form, x: &Multivector) -> Result<Multivector> {
    same_ctx(x.ctx(), w.ctx())?;
    if w.degree() > x.degree() {
        return Ok(Multivector::zero(x.ctx(), 0));
    }
    let mut t = Table::zero(x.ctx(), x.degree() - w.degree());
    for (j_mask, wc) in w.terms() {
        for (i_mask, xc) in x.terms() {
            if j_mask & !i_mask != 0 {
                continue;
            }
            let mut cur = i_mask;
            let mut parity = 0;
            for l in bits(j_mask) {
                parity += count_above(cur, l);
                cur &= !bit(l);
            }
            t.add_signed(cur, &(xc * wc), parity % 2 == 1);
        }
    }
    Ok(Multivector(t))
}

/// Reference implementation of `i_X ω` that goes through multiderivation
/// evaluation (for `i = j`) and single-field contractions (for `i < j`)
/// instead of index-set signs.
pub fn contract_form_by_evaluation(x: &Multivector, w: &Form) -> Result<Form> {
    same_ctx(x.ctx(), w.ctx())?;
    let ctx = x.ctx();
    if x.degree() > w.degree() {
        return Ok(Form::zero(ctx, 0));
    }
    let mut acc = Form::zero(ctx, w.degree() - x.degree());
    if x.degree() == w.degree() {
        for (j_mask, wc) in w.terms() {
            let args: Vec<Poly> = bits(j_mask).map(|l| Poly::var(ctx, l)).collect();
            let v = x.evaluate_all(&args)?.as_scalar();
            acc = &acc + &Form::scalar(&(&v * wc));
        }
        return Ok(acc);
    }
    for (i_mask, xc) in x.terms() {
        let mut cur = w.clone();
        for l in bits(i_mask).collect::<Vec<_>>().into_iter().rev() {
            cur = cur.contract_coord(l);
        }
        acc = &acc + &cur.mul_poly(xc);
    }
    Ok(acc)
}
