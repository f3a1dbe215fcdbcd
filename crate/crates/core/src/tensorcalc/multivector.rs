use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use super::blade::{self, bit, bits, count_above, merge_sign, sort_indices, Mask};
use super::table::Table;
use crate::error::{Error, Result};
use crate::exactalg::{same_ctx, Poly, Rational, VarContext};

/// Homogeneous multiderivation `X = sum_I X_I @x_{I_1} ^ ... ^ @x_{I_i}`.
///
/// Evaluation on a function removes the *last* wedge factor first:
/// `(X ^ Y)(a) = X ^ Y(a) + (-1)^j X(a) ^ Y` for `Y` of degree `j`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Multivector(pub(crate) Table);

impl Multivector {
    pub fn zero(ctx: &Arc<VarContext>, degree: usize) -> Self {
        Multivector(Table::zero(ctx, degree))
    }

    /// Degree-0 multivector (an element of A).
    pub fn scalar(p: &Poly) -> Self {
        let mut t = Table::zero(p.ctx(), 0);
        t.add_to(0, p);
        Multivector(t)
    }

    /// Derivation `sum_l coeffs[l] @x_l`.
    pub fn field(ctx: &Arc<VarContext>, coeffs: &[Poly]) -> Self {
        assert_eq!(coeffs.len(), ctx.n());
        let mut t = Table::zero(ctx, 1);
        for (l, c) in coeffs.iter().enumerate() {
            t.add_to(bit(l), c);
        }
        Multivector(t)
    }

    /// `coeff * @x_{idx[0]} ^ @x_{idx[1]} ^ ...` with indices in any order.
    pub fn basis(ctx: &Arc<VarContext>, idx: &[usize], coeff: &Poly) -> Self {
        let mut t = Table::zero(ctx, idx.len());
        if let Some((mask, parity)) = sort_indices(idx) {
            t.add_signed(mask, coeff, parity % 2 == 1);
        }
        Multivector(t)
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
        Multivector(t)
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

    /// Value of a degree-0 multivector.
    pub fn as_scalar(&self) -> Poly {
        self.0.coeff(0)
    }

    /// Coefficients `X^l` of a derivation.
    pub fn field_coeffs(&self) -> Vec<Poly> {
        (0..self.ctx().n()).map(|l| self.0.coeff(bit(l))).collect()
    }

    pub fn max_coeff_degree(&self) -> Option<u32> {
        self.0.max_coeff_degree()
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.0.checked_add(&other.0).map(Multivector)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Multivector(self.0.scale(c))
    }

    pub fn mul_poly(&self, f: &Poly) -> Self {
        Multivector(self.0.mul_poly(f))
    }

    pub fn signed(&self, odd: bool) -> Self {
        if odd {
            -self
        } else {
            self.clone()
        }
    }

    /// Exterior product `X ^ Y`.
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
        Ok(Multivector(t))
    }

    /// `X(x_l)`: evaluation on the `l`-th coordinate function.
    pub fn eval_coord(&self, l: usize) -> Self {
        let deg = self.degree().saturating_sub(1);
        let mut t = Table::zero(self.ctx(), deg);
        if self.degree() == 0 {
            return Multivector(t);
        }
        for (m, p) in &self.0.coeffs {
            if m & bit(l) != 0 {
                t.add_signed(m & !bit(l), p, count_above(*m, l) % 2 == 1);
            }
        }
        Multivector(t)
    }

    /// `X(a)`, the multiderivation of degree `i - 1` obtained by evaluating
    /// on `a`.
    pub fn evaluate(&self, a: &Poly) -> Result<Self> {
        same_ctx(self.ctx(), a.ctx())?;
        if self.degree() == 0 {
            return Err(Error::DegreeZeroEvaluation);
        }
        let mut t = Table::zero(self.ctx(), self.degree() - 1);
        for l in 0..self.ctx().n() {
            let da = a.d(l);
            if da.is_zero() {
                continue;
            }
            for (m, p) in &self.0.coeffs {
                if m & bit(l) != 0 {
                    t.add_signed(m & !bit(l), &(p * &da), count_above(*m, l) % 2 == 1);
                }
            }
        }
        Ok(Multivector(t))
    }

    /// For a derivation, `X(a) = sum_l X^l da/dx_l`.
    pub fn apply(&self, a: &Poly) -> Result<Poly> {
        if self.degree() != 1 {
            return Err(Error::GradeMismatch {
                expected: "derivation (degree 1)".into(),
                got: format!("degree {}", self.degree()),
            });
        }
        Ok(self.evaluate(a)?.as_scalar())
    }

    /// Iterated evaluation `X(a_1)(a_2)...(a_k)`.
    pub fn evaluate_all(&self, args: &[Poly]) -> Result<Self> {
        let mut cur = self.clone();
        for a in args {
            cur = cur.evaluate(a)?;
        }
        Ok(cur)
    }

    /// Commutator of derivations `[X, Y] = X∘Y - Y∘X`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        same_ctx(self.ctx(), other.ctx())?;
        if self.degree() != 1 || other.degree() != 1 {
            return Err(Error::GradeMismatch {
                expected: "two derivations".into(),
                got: format!("degrees {} and {}", self.degree(), other.degree()),
            });
        }
        let xs = self.field_coeffs();
        let ys = other.field_coeffs();
        let coeffs: Vec<Poly> = (0..self.ctx().n())
            .map(|l| {
                let mut c = Poly::zero(self.ctx());
                for k in 0..self.ctx().n() {
                    c += &(&xs[k] * &ys[l].d(k));
                    c -= &(&ys[k] * &xs[l].d(k));
                }
                c
            })
            .collect();
        Ok(Multivector::field(self.ctx(), &coeffs))
    }

    /// Reassemble a multivector of degree `m >= 1` from its values on the
    /// coordinate functions: `values[l] = Z(x_l)`.
    pub fn from_coordinate_values(ctx: &Arc<VarContext>, m: usize, values: &[Multivector]) -> Self {
        let mut t = Table::zero(ctx, m);
        if m > ctx.n() {
            return Multivector(t);
        }
        for mask in blade::all_of_grade(ctx.n(), m) {
            let last = bits(mask).last().expect("nonempty");
            let c = values[last].coeff(mask & !bit(last));
            t.add_to(mask, &c);
        }
        Multivector(t)
    }

    /// Express in another context (matching variables by name).
    pub fn embed(&self, target: &Arc<VarContext>) -> Result<Self> {
        let map: Vec<Option<usize>> = self
            .ctx()
            .names()
            .iter()
            .map(|n| target.index_of(n))
            .collect();
        let mut t = Table::zero(target, self.degree());
        for (m, p) in &self.0.coeffs {
            let idx: Option<Vec<usize>> = bits(*m).map(|i| map[i]).collect();
            let idx = idx.ok_or_else(|| Error::ContextMismatch {
                left: self.ctx().names().join(","),
                right: target.names().join(","),
            })?;
            let (mask, parity) = sort_indices(&idx).expect("distinct");
            t.add_signed(mask, &p.embed(target)?, parity % 2 == 1);
        }
        Ok(Multivector(t))
    }
}

impl fmt::Display for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        super::fmt_table(f, &self.0, "@")
    }
}

impl fmt::Debug for Multivector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Multivector[{}]({})", self.degree(), self)
    }
}

impl Add for &Multivector {
    type Output = Multivector;
    fn add(self, rhs: &Multivector) -> Multivector {
        self.checked_add(rhs).expect("multivector addition")
    }
}

impl Sub for &Multivector {
    type Output = Multivector;
    fn sub(self, rhs: &Multivector) -> Multivector {
        self.checked_add(&-rhs).expect("multivector subtraction")
    }
}

impl Neg for &Multivector {
    type Output = Multivector;
    fn neg(self) -> Multivector {
        Multivector(self.0.neg())
    }
}
