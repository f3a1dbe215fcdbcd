use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::Result;
use crate::exactalg::{same_ctx, Monomial, Poly, Rational, VarContext};

/// Differential operator `Σ c x^α ∂^β` in normal form (all multiplications
/// to the left of all derivatives).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DiffOp {
    ctx: Arc<VarContext>,
    terms: BTreeMap<(Monomial, Monomial), Rational>,
}

fn binom(n: u32, k: u32) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| {
        acc * BigInt::from(n - i) / BigInt::from(i + 1)
    })
}

fn falling(n: u32, k: u32) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i))
}

impl DiffOp {
    pub fn zero(ctx: &Arc<VarContext>) -> Self {
        DiffOp {
            ctx: ctx.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn term(ctx: &Arc<VarContext>, x: Monomial, d: Monomial, c: Rational) -> Self {
        let mut out = Self::zero(ctx);
        out.add_term(x, d, c);
        out
    }

    /// Multiplication by `f`.
    pub fn mult(f: &Poly) -> Self {
        let mut out = Self::zero(f.ctx());
        for (m, c) in f.terms() {
            out.add_term(m.clone(), Monomial::one(f.ctx().n()), c.clone());
        }
        out
    }

    /// `∂/∂x_i`.
    pub fn partial(ctx: &Arc<VarContext>, i: usize) -> Self {
        Self::term(
            ctx,
            Monomial::one(ctx.n()),
            Monomial::var(ctx.n(), i),
            Rational::one(),
        )
    }

    pub fn identity(ctx: &Arc<VarContext>) -> Self {
        Self::mult(&Poly::one(ctx))
    }

    fn add_term(&mut self, x: Monomial, d: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let key = (x, d);
        let v = self.terms.entry(key.clone()).or_insert_with(Rational::zero);
        *v += c;
        if v.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn ctx(&self) -> &Arc<VarContext> {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Monomial, &Rational)> {
        self.terms.iter().map(|((x, d), c)| (x, d, c))
    }

    /// Highest derivative order, `None` for the zero operator.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|(_, d)| d.degree()).max()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(&self.ctx);
        for ((x, d), v) in &self.terms {
            out.add_term(x.clone(), d.clone(), v * c);
        }
        out
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        same_ctx(&self.ctx, &other.ctx)?;
        let mut out = self.clone();
        for ((x, d), v) in &other.terms {
            out.add_term(x.clone(), d.clone(), v.clone());
        }
        Ok(out)
    }

    pub fn apply(&self, f: &Poly) -> Result<Poly> {
        same_ctx(&self.ctx, f.ctx())?;
        let mut acc = Poly::zero(&self.ctx);
        for ((x, d), c) in &self.terms {
            let mut g = f.clone();
            for (i, &k) in d.0.iter().enumerate() {
                for _ in 0..k {
                    g = g.diff(i)?;
                }
            }
            acc = &acc + &(&g * &Poly::monomial(&self.ctx, x.clone(), c.clone()));
        }
        Ok(acc)
    }

    /// `self ∘ other`, normalized with `∂^b x^c = Σ_k C(b,k) c!/(c-k)! x^{c-k} ∂^{b-k}`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        same_ctx(&self.ctx, &other.ctx)?;
        let n = self.ctx.n();
        let mut out = Self::zero(&self.ctx);
        for ((a, b), c1) in &self.terms {
            for ((g, dl), c2) in &other.terms {
                // enumerate κ ≤ min(b, g) componentwise
                let bounds: Vec<u32> = (0..n).map(|i| b.0[i].min(g.0[i])).collect();
                let mut k = vec![0u32; n];
                loop {
                    let mut coeff = c1 * c2;
                    for (i, &ki) in k.iter().enumerate() {
                        coeff *= Rational::from_integer(binom(b.0[i], ki) * falling(g.0[i], ki));
                    }
                    let x = Monomial((0..n).map(|i| a.0[i] + g.0[i] - k[i]).collect());
                    let d = Monomial((0..n).map(|i| b.0[i] - k[i] + dl.0[i]).collect());
                    out.add_term(x, d, coeff);
                    // odometer
                    let mut i = 0;
                    while i < n && k[i] == bounds[i] {
                        k[i] = 0;
                        i += 1;
                    }
                    if i == n {
                        break;
                    }
                    k[i] += 1;
                }
            }
        }
        Ok(out)
    }

    /// `[Δ, Δ'] = Δ∘Δ' - Δ'∘Δ`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.compose(other)?.checked_add(&-&other.compose(self)?)
    }

    /// Part with derivative order exactly `k`.
    pub fn top_part(&self, k: u32) -> Self {
        let mut out = Self::zero(&self.ctx);
        for ((x, d), c) in &self.terms {
            if d.degree() == k {
                out.add_term(x.clone(), d.clone(), c.clone());
            }
        }
        out
    }
}

/// The order criterion `[a_0,[a_1,…[a_k,Δ]…]] = 0` over all `(k+1)`-tuples
/// drawn from `elements`.
pub fn order_criterion(op: &DiffOp, k: usize, elements: &[Poly]) -> Result<bool> {
    fn rec(op: &DiffOp, left: usize, elements: &[Poly]) -> Result<bool> {
        if left == 0 {
            return Ok(op.is_zero());
        }
        for a in elements {
            if !rec(&DiffOp::mult(a).commutator(op)?, left - 1, elements)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
    rec(op, k + 1, elements)
}

impl Neg for &DiffOp {
    type Output = DiffOp;
    fn neg(self) -> DiffOp {
        self.scale(&-Rational::one())
    }
}

impl Add for &DiffOp {
    type Output = DiffOp;
    fn add(self, other: &DiffOp) -> DiffOp {
        self.checked_add(other)
            .expect("operators over the same variables")
    }
}

impl Sub for &DiffOp {
    type Output = DiffOp;
    fn sub(self, other: &DiffOp) -> DiffOp {
        self.checked_add(&-other)
            .expect("operators over the same variables")
    }
}

impl fmt::Display for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // highest order first, then the usual monomial order
        let mut keys: Vec<_> = self.terms.keys().collect();
        keys.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| b.0.cmp(&a.0)));
        for (k, key) in keys.iter().enumerate() {
            let c = &self.terms[*key];
            let coeff = Poly::monomial(&self.ctx, key.0.clone(), c.clone());
            let mut ds = Vec::new();
            for (i, &e) in key.1 .0.iter().enumerate() {
                match e {
                    0 => {}
                    1 => ds.push(format!("∂{}", self.ctx.name(i))),
                    _ => ds.push(format!("∂{}^{e}", self.ctx.name(i))),
                }
            }
            let term = crate::tensorcalc::coeff_times(&coeff, &ds.join("*"));
            if k == 0 {
                write!(f, "{term}")?;
            } else if let Some(rest) = term.strip_prefix('-') {
                write!(f, " - {rest}")?;
            } else {
                write!(f, " + {term}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DiffOp({self})")
    }
}
