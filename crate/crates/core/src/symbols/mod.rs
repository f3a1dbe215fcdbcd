//! Differential operators on `Q[x_1..x_n]`, the algebra of their symbols
//! with its product and bracket, the canonical 1-form `ρ = Σ p_i dx_i` and
//! the correspondence between 1-forms and sections.
//!
//! Symbols live in polynomials over the extended variables
//! `x_1..x_n, p_x1..p_xn`, homogeneous of degree `k` in the `p`s.

mod diffop;

pub use diffop::{order_criterion, DiffOp};

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactalg::{same_ctx, LinearSystem, Matrix, Monomial, Poly, Rational, VarContext};
use crate::tensorcalc::{contract_form, Form, Multivector};

/// Base variables together with their fiber partners `p_<name>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymbolSpace {
    base: Arc<VarContext>,
    ext: Arc<VarContext>,
}

impl SymbolSpace {
    pub fn new(base: &Arc<VarContext>) -> Result<Self> {
        let fiber: Vec<String> = base.names().iter().map(|s| format!("p_{s}")).collect();
        Ok(SymbolSpace {
            base: base.clone(),
            ext: base.extended(&fiber)?,
        })
    }

    pub fn base(&self) -> &Arc<VarContext> {
        &self.base
    }

    pub fn ext(&self) -> &Arc<VarContext> {
        &self.ext
    }

    pub fn n(&self) -> usize {
        self.base.n()
    }

    /// Fiber variable `p_i` in the extended context.
    pub fn p(&self, i: usize) -> Poly {
        Poly::var(&self.ext, self.n() + i)
    }

    pub fn x(&self, i: usize) -> Poly {
        Poly::var(&self.ext, i)
    }

    fn split(&self, m: &Monomial) -> (Monomial, Monomial) {
        let n = self.n();
        (Monomial(m.0[..n].to_vec()), Monomial(m.0[n..].to_vec()))
    }
}

/// An element of `S_k(A)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Symbol {
    grade: u32,
    poly: Poly,
}

impl Symbol {
    /// Checks that `poly` is homogeneous of degree `grade` in the fiber
    /// variables.
    pub fn new(sp: &SymbolSpace, poly: Poly, grade: u32) -> Result<Self> {
        same_ctx(sp.ext(), poly.ctx())?;
        for (m, _) in poly.terms() {
            let k = sp.split(m).1.degree();
            if k != grade {
                return Err(Error::InconsistentGrading(format!(
                    "term of fiber degree {k} in a symbol of grade {grade}"
                )));
            }
        }
        Ok(Symbol { grade, poly })
    }

    /// Grade read off from a nonzero `p`-homogeneous polynomial.
    pub fn from_poly(sp: &SymbolSpace, poly: Poly) -> Result<Self> {
        let grade = poly
            .terms()
            .next()
            .map_or(0, |(m, _)| sp.split(m).1.degree());
        Self::new(sp, poly, grade)
    }

    pub fn zero(sp: &SymbolSpace, grade: u32) -> Self {
        Symbol {
            grade,
            poly: Poly::zero(sp.ext()),
        }
    }

    pub fn grade(&self) -> u32 {
        self.grade
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.poly)
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Symbol[{}]({})", self.grade, self.poly)
    }
}

/// `[Δ]_k`: keep the order-`k` part and replace `∂^β` by `p^β`.
pub fn symbol_of(sp: &SymbolSpace, op: &DiffOp, k: u32) -> Result<Symbol> {
    same_ctx(sp.base(), op.ctx())?;
    if let Some(order) = op.order() {
        if order > k {
            return Err(Error::OrderTooHigh {
                order: order as usize,
                grade: k as usize,
            });
        }
    }
    let mut terms = Vec::new();
    for (x, d, c) in op.terms() {
        if d.degree() == k {
            let mut e = x.0.clone();
            e.extend_from_slice(&d.0);
            terms.push((Monomial(e), c.clone()));
        }
    }
    Ok(Symbol {
        grade: k,
        poly: Poly::from_terms(sp.ext(), terms),
    })
}

/// The normal-form operator whose top symbol is `s` (each `p^β` becomes
/// `∂^β`, coefficients stay on the left).
pub fn representative(sp: &SymbolSpace, s: &Symbol) -> DiffOp {
    let mut out = DiffOp::zero(sp.base());
    for (m, c) in s.poly.terms() {
        let (x, d) = sp.split(m);
        out = &out + &DiffOp::term(sp.base(), x, d, c.clone());
    }
    out
}

/// `s_1 · s_2`, the plain product in `(x, p)`.
pub fn symbol_mul(a: &Symbol, b: &Symbol) -> Result<Symbol> {
    Ok(Symbol {
        grade: a.grade + b.grade,
        poly: a.poly.checked_mul(&b.poly)?,
    })
}

/// `s_1 · s_2 = [Δ_1∘Δ_2]_{k_1+k_2}` computed through representatives.
pub fn symbol_mul_by_composition(sp: &SymbolSpace, a: &Symbol, b: &Symbol) -> Result<Symbol> {
    let op = representative(sp, a).compose(&representative(sp, b))?;
    symbol_of(sp, &op, a.grade + b.grade)
}

/// `{s_1, s_2} = [Δ_1∘Δ_2 - Δ_2∘Δ_1]_{k_1+k_2-1}` for the given
/// representatives. Two grade-0 symbols bracket to zero.
pub fn symbol_bracket_of(
    sp: &SymbolSpace,
    d1: &DiffOp,
    k1: u32,
    d2: &DiffOp,
    k2: u32,
) -> Result<Symbol> {
    if k1 + k2 == 0 {
        return Ok(Symbol::zero(sp, 0));
    }
    symbol_of(sp, &d1.commutator(d2)?, k1 + k2 - 1)
}

/// `{s_1, s_2}` from the canonical representatives.
pub fn symbol_bracket(sp: &SymbolSpace, a: &Symbol, b: &Symbol) -> Result<Symbol> {
    symbol_bracket_of(
        sp,
        &representative(sp, a),
        a.grade,
        &representative(sp, b),
        b.grade,
    )
}

/// Sign relating [`symbol_bracket`] to
/// `Σ (∂s_1/∂p_i ∂s_2/∂x_i - ∂s_1/∂x_i ∂s_2/∂p_i)`, fixed once from
/// `{p, x}` on one variable.
pub fn bracket_sign() -> i64 {
    static SIGN: OnceLock<i64> = OnceLock::new();
    *SIGN.get_or_init(|| {
        let base = VarContext::new(&["x"]).expect("valid name");
        let sp = SymbolSpace::new(&base).expect("fresh names");
        let p = Symbol {
            grade: 1,
            poly: sp.p(0),
        };
        let x = Symbol {
            grade: 0,
            poly: sp.x(0),
        };
        let got = symbol_bracket(&sp, &p, &x).expect("same space");
        let formula = poisson_formula(&sp, &p, &x);
        if got.poly == formula {
            1
        } else {
            assert!(
                got.poly == -&formula,
                "bracket is not proportional to the canonical formula"
            );
            -1
        }
    })
}

fn poisson_formula(sp: &SymbolSpace, a: &Symbol, b: &Symbol) -> Poly {
    let n = sp.n();
    let mut acc = Poly::zero(sp.ext());
    for i in 0..n {
        let (x, p) = (i, n + i);
        let d = |s: &Symbol, v: usize| s.poly.diff(v).expect("index in range");
        acc = &acc + &(&(&d(a, p) * &d(b, x)) - &(&d(a, x) * &d(b, p)));
    }
    acc
}

/// `{s_1, s_2}` by the canonical formula in `(x, p)` times [`bracket_sign`].
pub fn canonical_bracket(sp: &SymbolSpace, a: &Symbol, b: &Symbol) -> Result<Symbol> {
    same_ctx(sp.ext(), a.poly.ctx())?;
    same_ctx(sp.ext(), b.poly.ctx())?;
    let grade = (a.grade + b.grade).saturating_sub(1);
    let poly = poisson_formula(sp, a, b);
    let poly = if bracket_sign() < 0 { -&poly } else { poly };
    Ok(Symbol { grade, poly })
}

/// `ρ = Σ p_i dx_i` over the extended variables.
pub fn canonical_rho(sp: &SymbolSpace) -> Form {
    let mut acc = Form::zero(sp.ext(), 1);
    for i in 0..sp.n() {
        acc = &acc + &Form::basis(sp.ext(), &[i], &sp.p(i));
    }
    acc
}

/// `[X]` for a derivation of the extended algebra: the symbol of its
/// restriction to `A`, `Σ X(x_i) p_i`.
pub fn restriction_symbol(sp: &SymbolSpace, x: &Multivector) -> Result<Symbol> {
    same_ctx(sp.ext(), x.ctx())?;
    let mut acc = Poly::zero(sp.ext());
    for i in 0..sp.n() {
        acc = &acc + &(&x.apply(&sp.x(i))? * &sp.p(i));
    }
    Ok(Symbol {
        grade: 1,
        poly: acc,
    })
}

/// Checks `i_X ρ = [X|_A]` for a vector field `X` on the extended algebra.
pub fn rho_relation_holds(sp: &SymbolSpace, x: &Multivector) -> Result<bool> {
    let lhs = contract_form(x, &canonical_rho(sp))?.as_scalar();
    Ok(lhs == restriction_symbol(sp, x)?.poly)
}

/// Bracket induced by `Ω = dρ`: `{f, g} = X_f(g)` with `i_{X_f} Ω = -df`.
/// Computed by inverting the constant coefficient matrix of `Ω`.
pub fn rho_bracket(sp: &SymbolSpace, f: &Poly, g: &Poly) -> Result<Poly> {
    let ext = sp.ext();
    let m = ext.n();
    let omega = canonical_rho(sp).d();
    // column a holds the coefficients of i_{∂_a} Ω
    let mut cols = Vec::with_capacity(m);
    for a in 0..m {
        let w = contract_form(&Multivector::basis(ext, &[a], &Poly::one(ext)), &omega)?;
        cols.push(
            (0..m)
                .map(|b| w.coeff(1 << b).constant_term())
                .collect::<Vec<Rational>>(),
        );
    }
    let mat = Matrix::from_rows(
        (0..m)
            .map(|b| (0..m).map(|a| cols[a][b].clone()).collect())
            .collect(),
    )?;
    // X_f = Σ v_a ∂_a with M v = -∇f; solve against unit right-hand sides
    let mut inverse = vec![vec![Rational::zero(); m]; m];
    for e in 0..m {
        let mut rhs = vec![Rational::zero(); m];
        rhs[e] = Rational::one();
        let sol = LinearSystem::new(mat.clone(), rhs)?
            .solve_exact()?
            .filter(|s| s.nullity() == 0)
            .ok_or_else(|| Error::Invalid("dρ is degenerate".into()))?;
        for (row, v) in inverse.iter_mut().zip(&sol.particular) {
            row[e] = v.clone();
        }
    }
    let mut acc = Poly::zero(ext);
    for (a, row) in inverse.iter().enumerate() {
        let mut va = Poly::zero(ext);
        for (e, c) in row.iter().enumerate() {
            va = &va - &f.diff(e)?.scale(c);
        }
        acc = &acc + &(&va * &g.diff(a)?);
    }
    Ok(acc)
}

/// A homomorphism `S_*(A) → A` restricting to the identity on `A`, given by
/// the images of the fiber generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Section {
    images: Vec<Poly>,
}

impl Section {
    /// From images of every extended variable (all in the base algebra).
    /// Fails unless each `x_i` maps to itself.
    pub fn from_substitution(sp: &SymbolSpace, images: &[Poly]) -> Result<Self> {
        if images.len() != sp.ext().n() {
            return Err(Error::NotASection(format!(
                "expected {} images, got {}",
                sp.ext().n(),
                images.len()
            )));
        }
        for img in images {
            same_ctx(sp.base(), img.ctx())?;
        }
        for (i, img) in images[..sp.n()].iter().enumerate() {
            if *img != Poly::var(sp.base(), i) {
                return Err(Error::NotASection(format!(
                    "restriction to A moves {}",
                    sp.base().name(i)
                )));
            }
        }
        Ok(Section {
            images: images[sp.n()..].to_vec(),
        })
    }

    /// `φ(p_i)`.
    pub fn image_of_fiber(&self, i: usize) -> &Poly {
        &self.images[i]
    }

    /// `φ(s)`, substituting `p_i ↦ φ(p_i)`.
    pub fn apply(&self, sp: &SymbolSpace, s: &Symbol) -> Result<Poly> {
        let mut all: Vec<Poly> = (0..sp.n()).map(|i| Poly::var(sp.base(), i)).collect();
        all.extend(self.images.iter().cloned());
        s.poly.substitute(&all)
    }
}

/// `φ_ω` with `φ_ω(p_i) = i_{∂_i} ω`.
pub fn section_from_form(sp: &SymbolSpace, w: &Form) -> Result<Section> {
    same_ctx(sp.base(), w.ctx())?;
    if w.degree() != 1 {
        return Err(Error::GradeMismatch {
            expected: "1-form".into(),
            got: format!("{}-form", w.degree()),
        });
    }
    let images = (0..sp.n())
        .map(|i| {
            Ok(contract_form(
                &Multivector::basis(sp.base(), &[i], &Poly::one(sp.base())),
                w,
            )?
            .as_scalar())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Section { images })
}

/// `ω_φ` with `i_{∂_i}(ω_φ) = φ(p_i)`.
pub fn form_from_section(sp: &SymbolSpace, phi: &Section) -> Form {
    let mut acc = Form::zero(sp.base(), 1);
    for (i, img) in phi.images.iter().enumerate() {
        acc = &acc + &Form::basis(sp.base(), &[i], img);
    }
    acc
}
