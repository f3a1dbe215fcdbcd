//! Connections for the inclusion `A = Q[x_1..x_m] → B = Q[x_1..x_m, u_1..u_r]`:
//! connection forms, curvature, the vertical Nijenhuis complex and
//! commuting hierarchies.
//!
//! A connection is fixed by its values `∇(∂x_i) = ∂x_i + Σ_α Γ_i^α ∂u_α` and
//! extended `B`-linearly to `D_1(A, B)`, whose elements are represented by
//! their values on the base coordinates.

use std::sync::Arc;

use crate::cohoengine::{betti, build_complex, ComplexKind, TruncatedComplex, Window};
use crate::error::{Error, Result};
use crate::exactalg::{same_ctx, Poly, VarContext};
use crate::tensorcalc::blade::Mask;
use crate::tensorcalc::{Form, Multivector};
use crate::vvforms::{contract_vform, fn_bracket, VForm};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Connection {
    base: Arc<VarContext>,
    total: Arc<VarContext>,
    /// `gamma[i][α]`, polynomials over the total context.
    gamma: Vec<Vec<Poly>>,
}

impl Connection {
    pub fn new<S: AsRef<str>>(base: &[S], fiber: &[S], gamma: Vec<Vec<Poly>>) -> Result<Self> {
        let base = VarContext::new(base)?;
        let total = base.extended(fiber)?;
        Self::over(&base, &total, gamma)
    }

    /// `total` must list the base variables first.
    pub fn over(
        base: &Arc<VarContext>,
        total: &Arc<VarContext>,
        gamma: Vec<Vec<Poly>>,
    ) -> Result<Self> {
        let (m, r) = (base.n(), total.n().saturating_sub(base.n()));
        if total.names()[..m.min(total.n())] != base.names()[..] || r == 0 {
            return Err(Error::InvalidContext(
                "total variables must extend the base by at least one fiber".into(),
            ));
        }
        if gamma.len() != m || gamma.iter().any(|g| g.len() != r) {
            return Err(Error::Invalid(format!(
                "expected {m}×{r} connection coefficients"
            )));
        }
        let gamma = gamma
            .iter()
            .map(|row| {
                row.iter()
                    .map(|g| g.embed(total))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Connection {
            base: base.clone(),
            total: total.clone(),
            gamma,
        })
    }

    /// All coefficients zero.
    pub fn trivial<S: AsRef<str>>(base: &[S], fiber: &[S]) -> Result<Self> {
        let (m, r) = (base.len(), fiber.len());
        let total = VarContext::new(base)?.extended(fiber)?;
        Self::new(base, fiber, vec![vec![Poly::zero(&total); r]; m])
    }

    pub fn base(&self) -> &Arc<VarContext> {
        &self.base
    }

    pub fn total(&self) -> &Arc<VarContext> {
        &self.total
    }

    pub fn m(&self) -> usize {
        self.base.n()
    }

    pub fn r(&self) -> usize {
        self.total.n() - self.base.n()
    }

    pub fn gamma(&self, i: usize, alpha: usize) -> &Poly {
        &self.gamma[i][alpha]
    }

    /// Bitmask of the fiber directions in the total context.
    pub fn fiber_mask(&self) -> Mask {
        (self.m()..self.total.n()).fold(0, |acc, k| acc | (1 << k))
    }

    /// `∇(∂x_i)`.
    pub fn lift_coordinate(&self, i: usize) -> Multivector {
        let mut coeffs = vec![Poly::zero(&self.total); self.total.n()];
        coeffs[i] = Poly::one(&self.total);
        for (alpha, g) in self.gamma[i].iter().enumerate() {
            coeffs[self.m() + alpha] = g.clone();
        }
        Multivector::field(&self.total, &coeffs)
    }

    /// `∇(Σ b_i ∂x_i)` for `b_i ∈ B`.
    pub fn lift(&self, b: &[Poly]) -> Result<Multivector> {
        let mut acc = Multivector::zero(&self.total, 1);
        for (i, bi) in b.iter().enumerate() {
            acc = acc.checked_add(&self.lift_coordinate(i).mul_poly(bi))?;
        }
        Ok(acc)
    }

    /// `X|_A`, the values of a field on the base coordinates.
    pub fn restrict(&self, x: &Multivector) -> Result<Vec<Poly>> {
        same_ctx(&self.total, x.ctx())?;
        (0..self.m())
            .map(|i| x.apply(&Poly::var(&self.total, i)))
            .collect()
    }

    /// True when `X|_A = 0`.
    pub fn is_vertical(&self, x: &Multivector) -> Result<bool> {
        Ok(self.restrict(x)?.iter().all(Poly::is_zero))
    }
}

/// `U_∇ = Σ_α (du_α - Σ_i Γ_i^α dx_i) ⊗ ∂u_α`.
pub fn connection_form(c: &Connection) -> VForm {
    let t = c.total();
    let mut acc = VForm::zero(t, 1, 1);
    for alpha in 0..c.r() {
        let ua = c.m() + alpha;
        let mut w = Form::basis(t, &[ua], &Poly::one(t));
        for i in 0..c.m() {
            w = &w - &Form::basis(t, &[i], c.gamma(i, alpha));
        }
        let field = Multivector::basis(t, &[ua], &Poly::one(t));
        acc = &acc + &VForm::tensor(&w, &field).expect("same variables");
    }
    acc
}

/// `U_∇` assembled from its defining relation `i_X U = X - ∇(X|_A)` on the
/// coordinate fields.
pub fn connection_form_by_definition(c: &Connection) -> Result<VForm> {
    let t = c.total();
    let mut acc = VForm::zero(t, 1, 1);
    for k in 0..t.n() {
        let x = Multivector::basis(t, &[k], &Poly::one(t));
        let value = x.checked_add(&-&c.lift(&c.restrict(&x)?)?)?;
        acc = acc.checked_add(&VForm::tensor(
            &Form::basis(t, &[k], &Poly::one(t)),
            &value,
        )?)?;
    }
    Ok(acc)
}

/// `i_X Ω` for a vector field `X`, inserted into the form leg.
pub fn insert(x: &Multivector, o: &VForm) -> Result<VForm> {
    contract_vform(&VForm::from_multivector(x), o)
}

/// `R_∇(X, X')` for `X, X' ∈ D_1(A, B)` given by their values on the base
/// coordinates; `∇(X)∘X'` is the derivation `a ↦ ∇(X)(X'(a))`.
pub fn curvature_of(c: &Connection, b: &[Poly], bp: &[Poly]) -> Result<Multivector> {
    let (x, xp) = (c.lift(b)?, c.lift(bp)?);
    let comp = |y: &Multivector, vals: &[Poly]| -> Result<Vec<Poly>> {
        vals.iter().map(|v| y.apply(v)).collect()
    };
    let left = comp(&x, bp)?;
    let right = comp(&xp, b)?;
    let diff: Vec<Poly> = left.iter().zip(&right).map(|(l, r)| l - r).collect();
    x.commutator(&xp)?.checked_add(&-&c.lift(&diff)?)
}

/// `R_∇(∂x_i, ∂x_j)`.
pub fn curvature(c: &Connection, i: usize, j: usize) -> Result<Multivector> {
    if i == j || i >= c.m() || j >= c.m() {
        return Err(Error::Invalid(format!(
            "curvature needs two distinct base indices, got {i} and {j}"
        )));
    }
    let unit = |k: usize| -> Vec<Poly> {
        (0..c.m())
            .map(|l| {
                if l == k {
                    Poly::one(c.total())
                } else {
                    Poly::zero(c.total())
                }
            })
            .collect()
    };
    curvature_of(c, &unit(i), &unit(j))
}

pub fn is_flat(c: &Connection) -> Result<bool> {
    for i in 0..c.m() {
        for j in i + 1..c.m() {
            if !curvature(c, i, j)?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// One coordinate pair in [`curvature_vs_fn`].
#[derive(Clone, Debug)]
pub struct CurvaturePair {
    pub k: usize,
    pub l: usize,
    /// `i_X(i_{X'}[[U, U]])`.
    pub lhs: Multivector,
    /// `i_{X'}(i_X[[U, U]])`, i.e. `[[U, U]]` evaluated as `(X, X')`.
    pub lhs_swapped: Multivector,
    /// `2 R(X|_A, X'|_A)`.
    pub rhs: Multivector,
    pub holds: bool,
    pub swapped_holds: bool,
}

#[derive(Clone, Debug)]
pub struct CurvatureReport {
    pub pairs: Vec<CurvaturePair>,
    /// Every pair satisfies `i_X(i_{X'}[[U, U]]) = 2R`.
    pub holds: bool,
    /// Every pair satisfies `i_{X'}(i_X[[U, U]]) = 2R`.
    pub swapped_holds: bool,
    pub flat: bool,
    pub fn_square_vanishes: bool,
}

/// Checks `i_X(i_{X'}([[U, U]])) = 2R(X|_A, X'|_A)` for all pairs of
/// coordinate fields `X, X'` of `B`, in both insertion orders. With
/// first-slot insertion only the swapped order holds; the stated order gives
/// `-2R`.
pub fn curvature_vs_fn(c: &Connection) -> Result<CurvatureReport> {
    let t = c.total();
    let u = connection_form(c);
    let uu = fn_bracket(&u, &u)?;
    let fields: Vec<Multivector> = (0..t.n())
        .map(|k| Multivector::basis(t, &[k], &Poly::one(t)))
        .collect();
    let mut pairs = Vec::new();
    for (k, x) in fields.iter().enumerate() {
        for (l, xp) in fields.iter().enumerate() {
            let lhs = insert(x, &insert(xp, &uu)?)?.as_multivector()?;
            let lhs_swapped = insert(xp, &insert(x, &uu)?)?.as_multivector()?;
            let r = curvature_of(c, &c.restrict(x)?, &c.restrict(xp)?)?;
            let rhs = r.checked_add(&r)?;
            let same = |a: &Multivector| a == &rhs || (a.is_zero() && rhs.is_zero());
            let (holds, swapped_holds) = (same(&lhs), same(&lhs_swapped));
            pairs.push(CurvaturePair {
                k,
                l,
                lhs,
                lhs_swapped,
                rhs,
                holds,
                swapped_holds,
            });
        }
    }
    Ok(CurvatureReport {
        holds: pairs.iter().all(|p| p.holds),
        swapped_holds: pairs.iter().all(|p| p.swapped_holds),
        pairs,
        flat: is_flat(c)?,
        fn_square_vanishes: uu.is_zero(),
    })
}

/// The vertical complex `D_1^v(B) → D_1^v(Λ^1(B)) → …` of a flat
/// connection with `∂ = [[U_∇, ·]]`.
pub fn vertical_complex(c: &Connection, cap: u32, window: Window) -> Result<TruncatedComplex> {
    if !is_flat(c)? {
        return Err(Error::NotFlat);
    }
    build_complex(
        ComplexKind::Vertical {
            u: connection_form(c),
            fiber: c.fiber_mask(),
        },
        cap,
        window,
    )
}

fn require_vertical(c: &Connection, o: &VForm, degree: usize) -> Result<()> {
    same_ctx(c.total(), o.ctx())?;
    if o.multi_degree() != 1 || o.form_degree() != degree {
        return Err(Error::GradeMismatch {
            expected: format!("element of D_1^v(Λ^{degree})"),
            got: format!("bidegree ({}, {})", o.form_degree(), o.multi_degree()),
        });
    }
    if o.terms().any(|(_, i, _)| i & !c.fiber_mask() != 0) {
        return Err(Error::InconsistentGrading(
            "vector leg is not vertical".into(),
        ));
    }
    Ok(())
}

/// `X_0 = X`, `X_{k+1} = i_{X_k}(R)` for `k < n_max`.
pub fn hierarchy(c: &Connection, x: &VForm, r: &VForm, n_max: usize) -> Result<Vec<VForm>> {
    require_vertical(c, x, 0)?;
    require_vertical(c, r, 1)?;
    let mut out = vec![x.clone()];
    for _ in 0..n_max {
        let next = contract_vform(out.last().expect("nonempty"), r)?;
        out.push(next);
    }
    Ok(out)
}

fn field_bracket(a: &VForm, b: &VForm) -> Result<VForm> {
    let v = a.as_multivector()?.commutator(&b.as_multivector()?)?;
    Ok(VForm::from_multivector(&v))
}

/// Outcome of [`hierarchy_commutator_check`].
#[derive(Clone, Debug)]
pub struct HierarchyReport {
    pub x_cocycle: bool,
    pub y_cocycle: bool,
    pub r_cocycle: bool,
    /// `[[X, R]] = [[Y, R]] = 0` and `[X, Y] = 0`.
    pub corollary_hypotheses: bool,
    /// Truncated `H^2(B, ∇) = 0` at the given cap, when computed.
    pub h2_vanishes: Option<bool>,
    /// `(a, b, [X_a, Y_b])` for all `a ≤ m`, `b ≤ n`.
    pub commutators: Vec<(usize, usize, VForm)>,
    /// `[X_m, Y_n] - ([X,Y]_{m+n} + Σ_i ([[X,R]](Y_i))_{m+n-i-1} - Σ_j ([[Y,R]](X_j))_{m+n-j-1})`.
    pub defect: VForm,
}

impl HierarchyReport {
    /// Corollary: with the hypotheses in place every commutator vanishes.
    pub fn corollary_holds(&self) -> bool {
        !self.corollary_hypotheses || self.commutators.iter().all(|(_, _, v)| v.is_zero())
    }
}

/// Iterate `Z ↦ i_Z(R)` `k` times.
fn power(z: &VForm, r: &VForm, k: usize) -> Result<VForm> {
    let mut cur = z.clone();
    for _ in 0..k {
        cur = contract_vform(&cur, r)?;
    }
    Ok(cur)
}

pub fn hierarchy_commutator_check(
    c: &Connection,
    x: &VForm,
    y: &VForm,
    r: &VForm,
    m: usize,
    n: usize,
    h2_cap: Option<u32>,
) -> Result<HierarchyReport> {
    let u = connection_form(c);
    let xs = hierarchy(c, x, r, m)?;
    let ys = hierarchy(c, y, r, n)?;
    let xr = fn_bracket(x, r)?;
    let yr = fn_bracket(y, r)?;
    let xy = field_bracket(x, y)?;
    let mut commutators = Vec::new();
    for (a, xa) in xs.iter().enumerate() {
        for (b, yb) in ys.iter().enumerate() {
            commutators.push((a, b, field_bracket(xa, yb)?));
        }
    }
    let mut display = power(&xy, r, m + n)?;
    for (i, yi) in ys.iter().enumerate().take(n) {
        display = display.checked_add(&power(&contract_vform(yi, &xr)?, r, m + n - i - 1)?)?;
    }
    for (j, xj) in xs.iter().enumerate().take(m) {
        display = display.checked_add(&-&power(&contract_vform(xj, &yr)?, r, m + n - j - 1)?)?;
    }
    let lhs = field_bracket(&xs[m], &ys[n])?;
    let defect = lhs.checked_add(&-&display)?;
    let h2_vanishes = match h2_cap {
        Some(cap) if c.total().n() >= 2 => {
            let cx = vertical_complex(c, cap, Window::new(2, 2)?)?;
            Some(betti(&cx, 2)? == 0)
        }
        _ => None,
    };
    Ok(HierarchyReport {
        x_cocycle: fn_bracket(&u, x)?.is_zero(),
        y_cocycle: fn_bracket(&u, y)?.is_zero(),
        r_cocycle: fn_bracket(&u, r)?.is_zero(),
        corollary_hypotheses: xr.is_zero() && yr.is_zero() && xy.is_zero(),
        h2_vanishes,
        commutators,
        defect,
    })
}
