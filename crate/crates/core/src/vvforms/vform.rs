use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exactalg::{same_ctx, Poly, Rational, VarContext};
use crate::tensorcalc::blade::{self, bit, bits, grade, merge_sign, sort_indices, Mask};
use crate::tensorcalc::{Form, Multivector};

/// Vector-valued form `Ω = sum c_{J,I} dx_J ⊗ @x_I`, an element of
/// `Λ^j ⊗ D_i(A) ≅ D_i(Λ^j)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VForm {
    ctx: Arc<VarContext>,
    form_degree: usize,
    multi_degree: usize,
    coeffs: BTreeMap<(Mask, Mask), Poly>,
}

impl VForm {
    pub fn zero(ctx: &Arc<VarContext>, form_degree: usize, multi_degree: usize) -> Self {
        VForm {
            ctx: ctx.clone(),
            form_degree,
            multi_degree,
            coeffs: BTreeMap::new(),
        }
    }

    /// `coeff * dx_{form_idx} ⊗ @x_{multi_idx}`, indices in any order.
    pub fn basis(
        ctx: &Arc<VarContext>,
        form_idx: &[usize],
        multi_idx: &[usize],
        coeff: &Poly,
    ) -> Self {
        let mut out = VForm::zero(ctx, form_idx.len(), multi_idx.len());
        if let (Some((j, pj)), Some((i, pi))) = (sort_indices(form_idx), sort_indices(multi_idx)) {
            out.add_signed(j, i, coeff, (pj + pi) % 2 == 1);
        }
        out
    }

    pub fn from_masks(
        ctx: &Arc<VarContext>,
        form_degree: usize,
        multi_degree: usize,
        terms: impl IntoIterator<Item = ((Mask, Mask), Poly)>,
    ) -> Self {
        let mut out = VForm::zero(ctx, form_degree, multi_degree);
        for ((j, i), p) in terms {
            assert_eq!(grade(j), form_degree);
            assert_eq!(grade(i), multi_degree);
            out.add_signed(j, i, &p, false);
        }
        out
    }

    /// `ω ⊗ X`.
    pub fn tensor(w: &Form, x: &Multivector) -> Result<Self> {
        same_ctx(w.ctx(), x.ctx())?;
        let mut out = VForm::zero(w.ctx(), w.degree(), x.degree());
        for (j, a) in w.terms() {
            for (i, b) in x.terms() {
                out.add_signed(j, i, &(a * b), false);
            }
        }
        Ok(out)
    }

    /// `X ∈ D_i(A) = D_i(Λ^0)`.
    pub fn from_multivector(x: &Multivector) -> Self {
        let one = Form::scalar(&Poly::one(x.ctx()));
        VForm::tensor(&one, x).expect("same context")
    }

    /// The identity `N = sum_l dx_l ⊗ @x_l` of `D_1(Λ^1)`.
    pub fn identity(ctx: &Arc<VarContext>) -> Self {
        let one = Poly::one(ctx);
        let mut out = VForm::zero(ctx, 1, 1);
        for l in 0..ctx.n() {
            out.add_signed(bit(l), bit(l), &one, false);
        }
        out
    }

    pub(crate) fn add_signed(&mut self, j: Mask, i: Mask, p: &Poly, odd: bool) {
        debug_assert_eq!(grade(j), self.form_degree);
        debug_assert_eq!(grade(i), self.multi_degree);
        if p.is_zero() {
            return;
        }
        let p = if odd { -p } else { p.clone() };
        match self.coeffs.get_mut(&(j, i)) {
            Some(c) => {
                *c += &p;
                if c.is_zero() {
                    self.coeffs.remove(&(j, i));
                }
            }
            None => {
                self.coeffs.insert((j, i), p);
            }
        }
    }

    pub fn ctx(&self) -> &Arc<VarContext> {
        &self.ctx
    }

    pub fn form_degree(&self) -> usize {
        self.form_degree
    }

    pub fn multi_degree(&self) -> usize {
        self.multi_degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, form_mask: Mask, multi_mask: Mask) -> Poly {
        self.coeffs
            .get(&(form_mask, multi_mask))
            .cloned()
            .unwrap_or_else(|| Poly::zero(&self.ctx))
    }

    pub fn terms(&self) -> impl Iterator<Item = (Mask, Mask, &Poly)> {
        self.coeffs.iter().map(|((j, i), p)| (*j, *i, p))
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    /// Decomposition into `(c dx_J, @x_I)` pairs.
    pub fn decompose(&self) -> Vec<(Form, Multivector)> {
        let one = Poly::one(&self.ctx);
        self.terms()
            .map(|(j, i, c)| {
                (
                    Form::from_masks(&self.ctx, self.form_degree, [(j, c.clone())]),
                    Multivector::from_masks(&self.ctx, self.multi_degree, [(i, one.clone())]),
                )
            })
            .collect()
    }

    /// For `i = 0`, the underlying form.
    pub fn as_form(&self) -> Result<Form> {
        if self.multi_degree != 0 {
            return Err(Error::GradeMismatch {
                expected: "multi-degree 0".into(),
                got: format!("multi-degree {}", self.multi_degree),
            });
        }
        Ok(Form::from_masks(
            &self.ctx,
            self.form_degree,
            self.terms().map(|(j, _, c)| (j, c.clone())),
        ))
    }

    /// For `j = 0`, the underlying multivector.
    pub fn as_multivector(&self) -> Result<Multivector> {
        if self.form_degree != 0 {
            return Err(Error::GradeMismatch {
                expected: "form degree 0".into(),
                got: format!("form degree {}", self.form_degree),
            });
        }
        Ok(Multivector::from_masks(
            &self.ctx,
            self.multi_degree,
            self.terms().map(|(_, i, c)| (i, c.clone())),
        ))
    }

    /// Form coefficient of the multivector basis element `@x_I`.
    pub fn form_part(&self, multi_mask: Mask) -> Form {
        Form::from_masks(
            &self.ctx,
            self.form_degree,
            self.terms()
                .filter(|(_, i, _)| *i == multi_mask)
                .map(|(j, _, c)| (j, c.clone())),
        )
    }

    pub fn max_coeff_degree(&self) -> Option<u32> {
        self.coeffs.values().filter_map(Poly::degree).max()
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        same_ctx(&self.ctx, &other.ctx)?;
        if self.coeffs.is_empty() {
            return Ok(other.clone());
        }
        if other.coeffs.is_empty() {
            return Ok(self.clone());
        }
        if (self.form_degree, self.multi_degree) != (other.form_degree, other.multi_degree) {
            return Err(Error::GradeMismatch {
                expected: format!("bidegree ({}, {})", self.form_degree, self.multi_degree),
                got: format!("bidegree ({}, {})", other.form_degree, other.multi_degree),
            });
        }
        let mut out = self.clone();
        for ((j, i), p) in &other.coeffs {
            out.add_signed(*j, *i, p, false);
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = VForm::zero(&self.ctx, self.form_degree, self.multi_degree);
        for ((j, i), p) in &self.coeffs {
            out.add_signed(*j, *i, &p.scale(c), false);
        }
        out
    }

    pub fn mul_poly(&self, f: &Poly) -> Self {
        let mut out = VForm::zero(&self.ctx, self.form_degree, self.multi_degree);
        for ((j, i), p) in &self.coeffs {
            out.add_signed(*j, *i, &(p * f), false);
        }
        out
    }

    pub fn signed(&self, odd: bool) -> Self {
        if odd {
            -self
        } else {
            self.clone()
        }
    }

    /// `ω ∧ Ω`, wedging into the form leg from the left.
    pub fn wedge_form(w: &Form, o: &VForm) -> Result<VForm> {
        same_ctx(w.ctx(), o.ctx())?;
        let mut out = VForm::zero(&o.ctx, w.degree() + o.form_degree, o.multi_degree);
        for (a, p) in w.terms() {
            for ((j, i), q) in &o.coeffs {
                if let Some(s) = merge_sign(a, *j) {
                    out.add_signed(a | j, *i, &(p * q), s % 2 == 1);
                }
            }
        }
        Ok(out)
    }

    /// Apply a map to each form leg: `sum f(ω_I) ⊗ @x_I`.
    pub fn map_form_leg(&self, f: impl Fn(&Form) -> Result<Form>) -> Result<VForm> {
        let mut groups: BTreeMap<Mask, Form> = BTreeMap::new();
        for (_, i, _) in self.terms() {
            groups.entry(i).or_insert_with(|| self.form_part(i));
        }
        let mut out: Option<VForm> = None;
        for (i, w) in groups {
            let image = f(&w)?;
            let x =
                Multivector::from_masks(&self.ctx, self.multi_degree, [(i, Poly::one(&self.ctx))]);
            let t = VForm::tensor(&image, &x)?;
            out = Some(match out {
                None => t,
                Some(acc) => acc.checked_add(&t)?,
            });
        }
        Ok(out.unwrap_or_else(|| VForm::zero(&self.ctx, self.form_degree, self.multi_degree)))
    }

    /// Re-tag a zero element with the given bidegree.
    pub(crate) fn retag(self, form_degree: usize, multi_degree: usize) -> VForm {
        if self.is_zero() {
            VForm::zero(&self.ctx, form_degree, multi_degree)
        } else {
            self
        }
    }

    pub fn embed(&self, target: &Arc<VarContext>) -> Result<Self> {
        let mut out = VForm::zero(target, self.form_degree, self.multi_degree);
        for (w, x) in self.decompose() {
            let t = VForm::tensor(&w.embed(target)?, &x.embed(target)?)?;
            out = out.checked_add(&t)?;
        }
        Ok(out.retag(self.form_degree, self.multi_degree))
    }
}

impl fmt::Display for VForm {
    /// Groups terms by multivector leg: `(F_1)#@x_I + ...`; the whole sum is
    /// parenthesized per group when there is more than one.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut legs: Vec<Mask> = self.terms().map(|(_, i, _)| i).collect();
        legs.sort_by_key(|m| blade::lex_key(*m));
        legs.dedup();
        let parts: Vec<String> = legs
            .iter()
            .map(|&i| {
                let w = self.form_part(i);
                let ws = if w.num_terms() > 1 || w.to_string().starts_with('-') {
                    format!("({w})")
                } else {
                    w.to_string()
                };
                let xs = if i == 0 {
                    "1".to_string()
                } else {
                    bits(i)
                        .map(|l| format!("@{}", self.ctx.name(l)))
                        .collect::<Vec<_>>()
                        .join("^")
                };
                format!("{ws}#{xs}")
            })
            .collect();
        if parts.len() == 1 {
            write!(f, "{}", parts[0])
        } else {
            let wrapped: Vec<String> = parts.iter().map(|p| format!("({p})")).collect();
            write!(f, "{}", wrapped.join(" + "))
        }
    }
}

impl fmt::Debug for VForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "VForm[{},{}]({})",
            self.form_degree, self.multi_degree, self
        )
    }
}

impl Add for &VForm {
    type Output = VForm;
    fn add(self, rhs: &VForm) -> VForm {
        self.checked_add(rhs).expect("vform addition")
    }
}

impl Sub for &VForm {
    type Output = VForm;
    fn sub(self, rhs: &VForm) -> VForm {
        self.checked_add(&-rhs).expect("vform subtraction")
    }
}

impl Neg for &VForm {
    type Output = VForm;
    fn neg(self) -> VForm {
        VForm {
            ctx: self.ctx.clone(),
            form_degree: self.form_degree,
            multi_degree: self.multi_degree,
            coeffs: self.coeffs.iter().map(|(k, p)| (*k, -p)).collect(),
        }
    }
}
