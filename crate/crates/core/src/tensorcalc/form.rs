use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use super::blade::{self, bit, count_below, merge_sign, sort_indices, Mask};
use super::table::Table;
use crate::error::{Error, Result};
use crate::exactalg::{same_ctx, Poly, Rational, VarContext};

/// Homogeneous differential form `sum_J w_J dx_{J_1} ^ ... ^ dx_{J_j}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Form(pub(crate) Table);

impl Form {
    pub fn zero(ctx: &Arc<VarContext>, degree: usize) -> Self {
        Form(Table::zero(ctx, degree))
    }

    pub fn scalar(p: &Poly) -> Self {
        let mut t = Table::zero(p.ctx(), 0);
        t.add_to(0, p);
        Form(t)
    }

    /// `coeff * dx_{idx[0]} ^ dx_{idx[1]} ^ ...` with indices in any order.
    pub fn basis(ctx: &Arc<VarContext>, idx: &[usize], coeff: &Poly) -> Self {
        let mut t = Table::zero(ctx, idx.len());
        if let Some((mask, parity)) = sort_indices(idx) {
            t.add_signed(mask, coeff, parity % 2 == 1);
        }
        Form(t)
    }

    pub fn from_masks(
        ctx: &Arc<VarContext>,
        degree: usize,
        terms: impl IntoIterator<Item = (Mask, Poly)>,
    ) -> Self {
        let mut t = Table::zero(ctx, degree);
        for (m, p) in terms {
            assert_eq!(blade::grade(m), degree);
            t.add_to(m, &p);
        }
        Form(t)
    }

    /// Exact 1-form `da`.
    pub fn exact(a: &Poly) -> Self {
        let mut t = Table::zero(a.ctx(), 1);
        for l in 0..a.ctx().n() {
            t.add_to(bit(l), &a.d(l));
        }
        Form(t)
    }

    pub fn ctx(&self) -> &Arc<VarContext> {
        &self.0.ctx
    }

    pub fn degree(&self) -> usize {
        self.0.degree
    }

    pub fn is_zero(&self) -> bool {
        self.0.coeffs.is_empty()
    }

    pub fn coeff(&self, mask: Mask) -> Poly {
        self.0.coeff(mask)
    }

    pub fn terms(&self) -> impl Iterator<Item = (Mask, &Poly)> {
        self.0.coeffs.iter().map(|(m, p)| (*m, p))
    }

    pub fn num_terms(&self) -> usize {
        self.0.coeffs.len()
    }

    pub fn as_scalar(&self) -> Poly {
        self.0.coeff(0)
    }

    pub fn max_coeff_degree(&self) -> Option<u32> {
        self.0.max_coeff_degree()
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.0.checked_add(&other.0).map(Form)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Form(self.0.scale(c))
    }

    pub fn mul_poly(&self, f: &Poly) -> Self {
        Form(self.0.mul_poly(f))
    }

    pub fn signed(&self, odd: bool) -> Self {
        if odd {
            -self
        } else {
            self.clone()
        }
    }

    pub fn wedge(&self, other: &Self) -> Result<Self> {
        same_ctx(self.ctx(), other.ctx())?;
        let mut t = Table::zero(self.ctx(), self.degree() + other.degree());
        for (a, p) in &self.0.coeffs {
            for (b, q) in &other.0.coeffs {
                if let Some(s) = merge_sign(*a, *b) {
                    t.add_signed(a | b, &(p * q), s % 2 == 1);
                }
            }
        }
        Ok(Form(t))
    }

    /// Exterior derivative.
    pub fn d(&self) -> Self {
        let mut t = Table::zero(self.ctx(), self.degree() + 1);
        for (m, p) in &self.0.coeffs {
            for l in 0..self.ctx().n() {
                if m & bit(l) != 0 {
                    continue;
                }
                let dp = p.d(l);
                if !dp.is_zero() {
                    t.add_signed(m | bit(l), &dp, count_below(*m, l) % 2 == 1);
                }
            }
        }
        Form(t)
    }

    /// Interior product with the coordinate field `@x_l` (a graded
    /// derivation of degree -1).
    pub fn contract_coord(&self, l: usize) -> Self {
        let mut t = Table::zero(self.ctx(), self.degree().saturating_sub(1));
        if self.degree() == 0 {
            return Form(t);
        }
        for (m, p) in &self.0.coeffs {
            if m & bit(l) != 0 {
                t.add_signed(m & !bit(l), p, count_below(*m, l) % 2 == 1);
            }
        }
        Form(t)
    }

    pub fn embed(&self, target: &Arc<VarContext>) -> Result<Self> {
        let map: Vec<Option<usize>> = self
            .ctx()
            .names()
            .iter()
            .map(|n| target.index_of(n))
            .collect();
        let mut t = Table::zero(target, self.degree());
        for (m, p) in &self.0.coeffs {
            let idx: Option<Vec<usize>> = blade::bits(*m).map(|i| map[i]).collect();
            let idx = idx.ok_or_else(|| Error::ContextMismatch {
                left: self.ctx().names().join(","),
                right: target.names().join(","),
            })?;
            let (mask, parity) = sort_indices(&idx).expect("distinct");
            t.add_signed(mask, &p.embed(target)?, parity % 2 == 1);
        }
        Ok(Form(t))
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        super::fmt_table(f, &self.0, "d")
    }
}

impl fmt::Debug for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Form[{}]({})", self.degree(), self)
    }
}

impl Add for &Form {
    type Output = Form;
    fn add(self, rhs: &Form) -> Form {
        self.checked_add(rhs).expect("form addition")
    }
}

impl Sub for &Form {
    type Output = Form;
    fn sub(self, rhs: &Form) -> Form {
        self.checked_add(&-rhs).expect("form subtraction")
    }
}

impl Neg for &Form {
    type Output = Form;
    fn neg(self) -> Form {
        Form(self.0.neg())
    }
}
