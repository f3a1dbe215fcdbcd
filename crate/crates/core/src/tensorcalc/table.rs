use std::collections::BTreeMap;
use std::sync::Arc;

use super::blade::{grade, Mask};
use crate::error::Result;
use crate::exactalg::{same_ctx, Poly, Rational, VarContext};

/// Coefficient table shared by multivectors and forms: a homogeneous element
/// of degree `degree`, one polynomial per strictly increasing index set.
#[derive(Clone, PartialEq, Eq, Hash)]
pub(crate) struct Table {
    pub ctx: Arc<VarContext>,
    pub degree: usize,
    pub coeffs: BTreeMap<Mask, Poly>,
}

impl Table {
    pub fn zero(ctx: &Arc<VarContext>, degree: usize) -> Self {
        Table {
            ctx: ctx.clone(),
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn add_to(&mut self, mask: Mask, p: &Poly) {
        debug_assert_eq!(grade(mask), self.degree);
        if p.is_zero() {
            return;
        }
        match self.coeffs.get_mut(&mask) {
            Some(c) => {
                *c += p;
                if c.is_zero() {
                    self.coeffs.remove(&mask);
                }
            }
            None => {
                self.coeffs.insert(mask, p.clone());
            }
        }
    }

    pub fn sub_from(&mut self, mask: Mask, p: &Poly) {
        self.add_to(mask, &-p);
    }

    pub fn add_signed(&mut self, mask: Mask, p: &Poly, odd: bool) {
        if odd {
            self.sub_from(mask, p)
        } else {
            self.add_to(mask, p)
        }
    }

    pub fn coeff(&self, mask: Mask) -> Poly {
        self.coeffs
            .get(&mask)
            .cloned()
            .unwrap_or_else(|| Poly::zero(&self.ctx))
    }

    pub fn checked_add(&self, other: &Table) -> Result<Table> {
        same_ctx(&self.ctx, &other.ctx)?;
        if self.degree != other.degree && !(self.coeffs.is_empty() || other.coeffs.is_empty()) {
            return Err(crate::Error::GradeMismatch {
                expected: format!("degree {}", self.degree),
                got: format!("degree {}", other.degree),
            });
        }
        if self.coeffs.is_empty() {
            return Ok(other.clone());
        }
        let mut out = self.clone();
        for (m, p) in &other.coeffs {
            out.add_to(*m, p);
        }
        Ok(out)
    }

    pub fn neg(&self) -> Table {
        Table {
            ctx: self.ctx.clone(),
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|(m, p)| (*m, -p)).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Table {
        let mut out = Table::zero(&self.ctx, self.degree);
        for (m, p) in &self.coeffs {
            out.add_to(*m, &p.scale(c));
        }
        out
    }

    pub fn mul_poly(&self, f: &Poly) -> Table {
        let mut out = Table::zero(&self.ctx, self.degree);
        for (m, p) in &self.coeffs {
            out.add_to(*m, &(p * f));
        }
        out
    }

    pub fn max_coeff_degree(&self) -> Option<u32> {
        self.coeffs.values().filter_map(Poly::degree).max()
    }
}
