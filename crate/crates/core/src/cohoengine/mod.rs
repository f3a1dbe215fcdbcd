//! Degree-truncated complexes and exact Betti numbers.
//!
//! The complexes of interest live on infinite-dimensional spaces. We cut them
//! down by bounding the polynomial degree of coefficients. Every differential
//! handled here is first order, so a structure whose coefficients have degree
//! at most `g` maps coefficient degree `d` to at most `d + g - 1`. Position
//! `k` of a window starting at `lo` is therefore given the cap
//! `c_k = cap + s (k - lo) (g - 1)`, with `s = ±1` the direction of the
//! differential, and the truncation is a genuine subcomplex.
//!
//! Each window is padded with one space on either side so Betti numbers at
//! the window edges see both adjacent differentials.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;
use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::exactalg::{rank, Matrix, Monomial, Poly, Rational, RowOutcome, RowReducer, VarContext};
use crate::poisson::{boundary, PoissonStructure};
use crate::tensorcalc::blade::{all_of_grade, Mask};
use crate::tensorcalc::{schouten, Form, Multivector};
use crate::vvforms::{contract_vform, fn_bracket, is_integrable, vv_lie, VForm};

/// Which complex to build.
#[derive(Clone, Debug)]
pub enum ComplexKind {
    /// `A → D_1(A) → D_2(A) → …` with `∂_P = [[P, ·]]`.
    PoissonCochain(PoissonStructure),
    /// `… → Λ^2 → Λ^1 → A → 0` with `d_P = i_P d - d i_P`.
    PoissonChain(PoissonStructure),
    /// `D_1(A) → D_1(Λ^1) → …` with `∂_N = [[N, ·]]`.
    Nijenhuis(VForm),
    /// `A → Λ^1 → Λ^2 → …` with `d_N = L_N`.
    NijenhuisForms(VForm),
    /// The de Rham complex, for comparisons.
    DeRham(Arc<VarContext>),
    /// `D_1^v(B) → D_1^v(Λ^1(B)) → …` with `∂_U = [[U, ·]]`; vector legs are
    /// restricted to the directions in `fiber`.
    Vertical { u: VForm, fiber: Mask },
}

impl ComplexKind {
    pub fn name(&self) -> &'static str {
        match self {
            ComplexKind::PoissonCochain(_) => "poisson-cochain",
            ComplexKind::PoissonChain(_) => "poisson-chain",
            ComplexKind::Nijenhuis(_) => "nijenhuis",
            ComplexKind::NijenhuisForms(_) => "nijenhuis-forms",
            ComplexKind::DeRham(_) => "de-rham",
            ComplexKind::Vertical { .. } => "vertical",
        }
    }

    fn ctx(&self) -> &Arc<VarContext> {
        match self {
            ComplexKind::PoissonCochain(p) | ComplexKind::PoissonChain(p) => p.bivector().ctx(),
            ComplexKind::Nijenhuis(n) | ComplexKind::NijenhuisForms(n) => n.ctx(),
            ComplexKind::DeRham(c) => c,
            ComplexKind::Vertical { u, .. } => u.ctx(),
        }
    }

    /// `+1` for cochain complexes, `-1` for the chain complex.
    pub fn direction(&self) -> i64 {
        match self {
            ComplexKind::PoissonChain(_) => -1,
            _ => 1,
        }
    }

    /// Maximal coefficient degree of the structure.
    fn structure_degree(&self) -> i64 {
        let g = match self {
            ComplexKind::PoissonCochain(p) | ComplexKind::PoissonChain(p) => {
                p.bivector().max_coeff_degree()
            }
            ComplexKind::Nijenhuis(n) | ComplexKind::NijenhuisForms(n) => n.max_coeff_degree(),
            ComplexKind::DeRham(_) => Some(0),
            ComplexKind::Vertical { u, .. } => u.max_coeff_degree(),
        };
        // a zero structure gives zero maps; keep the caps flat
        g.map_or(1, i64::from)
    }

    fn shape(&self, position: i64) -> Option<Shape> {
        let n = self.ctx().n() as i64;
        if position < 0 || position > n {
            return None;
        }
        let k = position as usize;
        Some(match self {
            ComplexKind::PoissonCochain(_) => Shape::Multi(k),
            ComplexKind::PoissonChain(_)
            | ComplexKind::NijenhuisForms(_)
            | ComplexKind::DeRham(_) => Shape::Form(k),
            ComplexKind::Nijenhuis(_) => Shape::VForm(k, Mask::MAX),
            ComplexKind::Vertical { fiber, .. } => Shape::VForm(k, *fiber),
        })
    }

    fn apply(&self, e: &Element) -> Result<Element> {
        Ok(match (self, e) {
            (ComplexKind::PoissonCochain(p), Element::Multi(x)) => {
                Element::Multi(schouten(p.bivector(), x)?)
            }
            (ComplexKind::PoissonChain(p), Element::Form(w)) => {
                Element::Form(boundary(p.bivector(), w))
            }
            (ComplexKind::NijenhuisForms(n), Element::Form(w)) => Element::Form(vv_lie(n, w)?),
            (ComplexKind::DeRham(_), Element::Form(w)) => Element::Form(w.d()),
            (ComplexKind::Nijenhuis(n), Element::VForm(o)) => Element::VForm(fn_bracket(n, o)?),
            (ComplexKind::Vertical { u, .. }, Element::VForm(o)) => {
                Element::VForm(fn_bracket(u, o)?)
            }
            _ => {
                return Err(Error::InconsistentGrading(format!(
                    "{} cannot act on this element",
                    self.name()
                )))
            }
        })
    }

    fn verify(&self) -> Result<()> {
        match self {
            ComplexKind::Nijenhuis(n) | ComplexKind::NijenhuisForms(n) => {
                if !is_integrable(n)?.integrable {
                    return Err(Error::NotIntegrable);
                }
            }
            ComplexKind::Vertical { u, .. } => {
                if u.form_degree() != 1 || u.multi_degree() != 1 {
                    return Err(Error::GradeMismatch {
                        expected: "connection form in D_1(Λ^1)".into(),
                        got: format!("bidegree ({}, {})", u.form_degree(), u.multi_degree()),
                    });
                }
                if !fn_bracket(u, u)?.is_zero() {
                    return Err(Error::NotFlat);
                }
            }
            _ => {}
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Shape {
    Multi(usize),
    Form(usize),
    /// form degree, allowed vector directions
    VForm(usize, Mask),
}

/// A chain in one of the complexes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Element {
    Multi(Multivector),
    Form(Form),
    VForm(VForm),
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Multi(x) => write!(f, "{x}"),
            Element::Form(w) => write!(f, "{w}"),
            Element::VForm(o) => write!(f, "{o}"),
        }
    }
}

impl Element {
    fn coords(&self) -> Vec<(Label, Rational)> {
        let mut out = Vec::new();
        let mut push = |form: Mask, multi: Mask, c: &Poly| {
            for (m, q) in c.terms() {
                out.push((
                    Label {
                        form,
                        multi,
                        mono: m.clone(),
                    },
                    q.clone(),
                ));
            }
        };
        match self {
            Element::Multi(x) => x.terms().for_each(|(m, c)| push(0, m, c)),
            Element::Form(w) => w.terms().for_each(|(m, c)| push(m, 0, c)),
            Element::VForm(o) => o.terms().for_each(|(j, i, c)| push(j, i, c)),
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Element::Multi(x) => x.is_zero(),
            Element::Form(w) => w.is_zero(),
            Element::VForm(o) => o.is_zero(),
        }
    }
}

/// A basis element `x^α dx_J ⊗ @x_I`; unused legs carry the empty mask.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Label {
    pub form: Mask,
    pub multi: Mask,
    pub mono: Monomial,
}

/// Monomial basis of one truncated space.
#[derive(Clone, Debug)]
pub struct GradedBasis {
    pub position: i64,
    /// Coefficient-degree cap; `None` when the space is empty by degree.
    pub poly_degree: Option<u32>,
    pub basis: Vec<Label>,
    shape: Option<Shape>,
    index: HashMap<Label, usize>,
}

impl GradedBasis {
    fn new(position: i64, shape: Option<Shape>, cap: i64, n: usize) -> Self {
        let poly_degree = (cap >= 0).then_some(cap as u32);
        let mut basis = Vec::new();
        if let (Some(shape), Some(d)) = (shape, poly_degree) {
            let monos = Monomial::up_to_degree(n, d);
            let legs: Vec<(Mask, Mask)> = match shape {
                Shape::Multi(i) => all_of_grade(n, i).into_iter().map(|m| (0, m)).collect(),
                Shape::Form(j) => all_of_grade(n, j).into_iter().map(|m| (m, 0)).collect(),
                Shape::VForm(j, allowed) => {
                    let vec_legs: Vec<Mask> = (0..n)
                        .map(|l| 1 << l)
                        .filter(|m| m & allowed != 0)
                        .collect();
                    all_of_grade(n, j)
                        .into_iter()
                        .flat_map(|f| vec_legs.iter().map(move |&v| (f, v)))
                        .collect()
                }
            };
            for (form, multi) in legs {
                for m in &monos {
                    basis.push(Label {
                        form,
                        multi,
                        mono: m.clone(),
                    });
                }
            }
        }
        let index = Self::index_of(&basis);
        GradedBasis {
            position,
            poly_degree,
            basis,
            shape,
            index,
        }
    }

    fn index_of(basis: &[Label]) -> HashMap<Label, usize> {
        basis
            .iter()
            .enumerate()
            .map(|(k, l)| (l.clone(), k))
            .collect()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// The chain with the given coordinates.
    pub fn element(&self, ctx: &Arc<VarContext>, coords: &[Rational]) -> Element {
        let terms = self
            .basis
            .iter()
            .zip(coords)
            .filter(|(_, c)| !c.is_zero())
            .map(|(l, c)| {
                (
                    l.form,
                    l.multi,
                    Poly::monomial(ctx, l.mono.clone(), c.clone()),
                )
            });
        let mut fm: Vec<(Mask, Poly)> = Vec::new();
        let mut vm: Vec<((Mask, Mask), Poly)> = Vec::new();
        for (form, multi, p) in terms {
            match self.shape {
                Some(Shape::Multi(_)) => fm.push((multi, p)),
                Some(Shape::Form(_)) => fm.push((form, p)),
                _ => vm.push(((form, multi), p)),
            }
        }
        match self.shape {
            Some(Shape::Multi(i)) => Element::Multi(Multivector::from_masks(ctx, i, fm)),
            Some(Shape::Form(j)) => Element::Form(Form::from_masks(ctx, j, fm)),
            Some(Shape::VForm(j, _)) => Element::VForm(VForm::from_masks(ctx, j, 1, vm)),
            None => Element::Form(Form::zero(ctx, 0)),
        }
    }

    /// Coordinates of `e`, or the first label that lies outside this space.
    fn coordinates(&self, e: &Element) -> std::result::Result<Vec<Rational>, Label> {
        let mut v = vec![Rational::zero(); self.dim()];
        for (label, c) in e.coords() {
            match self.index.get(&label) {
                Some(&k) => v[k] += c,
                None => return Err(label),
            }
        }
        Ok(v)
    }
}

/// Basis ordering used when building a complex. Betti numbers must not
/// depend on it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BasisOrder {
    Deterministic,
    Shuffled(u64),
}

/// Inclusive range of positions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Window {
    pub lo: i64,
    pub hi: i64,
}

impl Window {
    pub fn new(lo: i64, hi: i64) -> Result<Self> {
        if lo > hi {
            return Err(Error::Invalid(format!("empty window {lo}..={hi}")));
        }
        Ok(Window { lo, hi })
    }

    pub fn contains(&self, k: i64) -> bool {
        self.lo <= k && k <= self.hi
    }
}

/// A finite piece of a complex with exact differential matrices.
#[derive(Clone, Debug)]
pub struct TruncatedComplex {
    pub kind: ComplexKind,
    pub window: Window,
    pub cap: u32,
    /// Spaces at positions `lo - 1 ..= hi + 1`.
    pub spaces: Vec<GradedBasis>,
    /// `maps[t]` is the differential leaving `spaces[t]` (cochain) or
    /// arriving at `spaces[t]` (chain), i.e. between `spaces[t]` and
    /// `spaces[t + 1]`.
    pub maps: Vec<Matrix>,
}

pub fn build_complex(kind: ComplexKind, cap: u32, window: Window) -> Result<TruncatedComplex> {
    build_complex_ordered(kind, cap, window, BasisOrder::Deterministic)
}

pub fn build_complex_ordered(
    kind: ComplexKind,
    cap: u32,
    window: Window,
    order: BasisOrder,
) -> Result<TruncatedComplex> {
    kind.verify()?;
    let ctx = kind.ctx().clone();
    let n = ctx.n();
    let dir = kind.direction();
    let g = kind.structure_degree();
    let positions: Vec<i64> = (window.lo - 1..=window.hi + 1).collect();
    let mut spaces: Vec<GradedBasis> = positions
        .iter()
        .map(|&k| {
            GradedBasis::new(
                k,
                kind.shape(k),
                cap as i64 + dir * (k - window.lo) * (g - 1),
                n,
            )
        })
        .collect();
    if let BasisOrder::Shuffled(seed) = order {
        let mut r = crate::sample::rng(seed);
        for s in spaces.iter_mut() {
            s.basis.shuffle(&mut r);
            s.index = GradedBasis::index_of(&s.basis);
        }
    }
    let mut maps = Vec::with_capacity(spaces.len() - 1);
    for t in 0..spaces.len() - 1 {
        let (src, dst) = if dir > 0 {
            (&spaces[t], &spaces[t + 1])
        } else {
            (&spaces[t + 1], &spaces[t])
        };
        maps.push(differential_matrix(&kind, &ctx, src, dst)?);
    }
    Ok(TruncatedComplex {
        kind,
        window,
        cap,
        spaces,
        maps,
    })
}

fn differential_matrix(
    kind: &ComplexKind,
    ctx: &Arc<VarContext>,
    src: &GradedBasis,
    dst: &GradedBasis,
) -> Result<Matrix> {
    let cols = crate::par::map_range(src.dim(), |c| -> Result<Vec<Rational>> {
        let mut unit = vec![Rational::zero(); src.dim()];
        unit[c] = Rational::from_integer(1.into());
        let image = kind.apply(&src.element(ctx, &unit))?;
        if image.is_zero() {
            return Ok(vec![Rational::zero(); dst.dim()]);
        }
        dst.coordinates(&image).map_err(|label| {
            Error::InconsistentGrading(format!(
                "image of basis element {} at position {} leaves the truncation at position {} \
                 (form {:b}, vector {:b}, monomial degree {}); raise the cap",
                c,
                src.position,
                dst.position,
                label.form,
                label.multi,
                label.mono.degree()
            ))
        })
    });
    let mut m = Matrix::zeros(dst.dim(), src.dim());
    for (c, col) in cols.into_iter().enumerate() {
        for (r, v) in col?.into_iter().enumerate() {
            m.data[r][c] = v;
        }
    }
    Ok(m)
}

impl TruncatedComplex {
    fn slot(&self, position: i64) -> Result<usize> {
        if !self.window.contains(position) {
            return Err(Error::OutsideWindow {
                position,
                lo: self.window.lo,
                hi: self.window.hi,
            });
        }
        Ok((position - self.window.lo + 1) as usize)
    }

    pub fn ctx(&self) -> &Arc<VarContext> {
        self.kind.ctx()
    }

    pub fn space(&self, position: i64) -> Result<&GradedBasis> {
        Ok(&self.spaces[self.slot(position)?])
    }

    /// Differential leaving `position`.
    pub fn outgoing(&self, position: i64) -> Result<&Matrix> {
        let s = self.slot(position)?;
        Ok(if self.kind.direction() > 0 {
            &self.maps[s]
        } else {
            &self.maps[s - 1]
        })
    }

    /// Differential arriving at `position`.
    pub fn incoming(&self, position: i64) -> Result<&Matrix> {
        let s = self.slot(position)?;
        Ok(if self.kind.direction() > 0 {
            &self.maps[s - 1]
        } else {
            &self.maps[s]
        })
    }

    /// True when every pair of consecutive differentials composes to zero.
    pub fn compositions_vanish(&self) -> bool {
        self.maps.windows(2).all(|w| {
            let (first, second) = if self.kind.direction() > 0 {
                (&w[0], &w[1])
            } else {
                (&w[1], &w[0])
            };
            second.mul(first).is_zero()
        })
    }

    pub fn dims(&self) -> Vec<(i64, usize)> {
        self.spaces.iter().map(|s| (s.position, s.dim())).collect()
    }
}

/// `dim ker - dim im` at `position`.
pub fn betti(c: &TruncatedComplex, position: i64) -> Result<usize> {
    let dim = c.space(position)?.dim();
    let (out, inc) = (c.outgoing(position)?, c.incoming(position)?);
    let ranks = crate::par::map(&[out, inc], |m| rank(m));
    Ok(dim - ranks[0] - ranks[1])
}

/// Betti numbers over the whole window.
pub fn betti_table(c: &TruncatedComplex) -> Result<Vec<(i64, usize)>> {
    (c.window.lo..=c.window.hi)
        .map(|k| Ok((k, betti(c, k)?)))
        .collect()
}

/// Inner product or bracket of two representatives, checked for closedness.
#[derive(Clone, Debug)]
pub struct ProductCheck {
    pub operation: &'static str,
    pub left: usize,
    pub right: usize,
    pub left_position: i64,
    pub result: VForm,
    pub is_cocycle: bool,
    /// `Some(true)` if the product is exact inside the truncation, `None`
    /// when it falls outside the truncated space.
    pub is_coboundary: Option<bool>,
}

#[derive(Clone, Debug)]
pub struct HReport {
    pub position: i64,
    pub label: &'static str,
    pub dimension: usize,
    pub representatives: Vec<Element>,
    pub products: Vec<ProductCheck>,
}

fn class_label(kind: &ComplexKind, position: i64) -> &'static str {
    match (kind, position) {
        (ComplexKind::PoissonCochain(_), 0) => "Casimir",
        (ComplexKind::PoissonCochain(_), 1) => "canonical modulo Hamiltonian",
        (ComplexKind::PoissonCochain(_), 2) => "infinitesimal deformation",
        (ComplexKind::PoissonCochain(_), 3) => "obstruction to prolongation",
        (ComplexKind::PoissonChain(_), _) => "cycle",
        (ComplexKind::Vertical { .. }, 0) => "vertical symmetry",
        (ComplexKind::Vertical { .. }, 1) => "recursion operator / deformation",
        (ComplexKind::Vertical { .. }, 2) => "obstruction",
        _ => "cocycle",
    }
}

/// Coordinates of representatives of a basis of the cohomology at
/// `position`.
pub fn representatives(c: &TruncatedComplex, position: i64) -> Result<Vec<Vec<Rational>>> {
    let dim = c.space(position)?.dim();
    let out = c.outgoing(position)?;
    let inc = c.incoming(position)?;
    let mut kernel = RowReducer::new(dim);
    for row in &out.data {
        kernel.add_row(row.clone(), Rational::zero());
    }
    let null = kernel.solution().map(|s| s.null_basis).unwrap_or_default();
    let mut span = RowReducer::new(dim);
    for col in &inc.transpose().data {
        span.add_row(col.clone(), Rational::zero());
    }
    Ok(null
        .into_iter()
        .filter(|v| span.add_row(v.clone(), Rational::zero()) == RowOutcome::Independent)
        .collect())
}

/// Representatives of the cohomology at `position`, labelled by their
/// meaning; for vertical complexes the inner products and brackets of
/// representatives are checked to be cocycles again.
pub fn interpret_h(c: &TruncatedComplex, position: i64) -> Result<HReport> {
    let ctx = c.ctx().clone();
    let space = c.space(position)?;
    let reps: Vec<Element> = representatives(c, position)?
        .iter()
        .map(|v| space.element(&ctx, v))
        .collect();
    let mut products = Vec::new();
    if let ComplexKind::Vertical { u, .. } = &c.kind {
        let mut pools: Vec<(i64, Vec<VForm>)> = vec![(position, as_vforms(&reps))];
        if position != 0 && c.window.contains(0) {
            let h0 = c.space(0)?;
            let zero_reps: Vec<Element> = representatives(c, 0)?
                .iter()
                .map(|v| h0.element(&ctx, v))
                .collect();
            pools.push((0, as_vforms(&zero_reps)));
        }
        let here = as_vforms(&reps);
        for (lp, pool) in &pools {
            for (a, x) in pool.iter().enumerate() {
                for (b, y) in here.iter().enumerate() {
                    for (operation, result) in [
                        ("inner product", contract_vform(x, y)?),
                        ("bracket", fn_bracket(x, y)?),
                    ] {
                        let is_cocycle = fn_bracket(u, &result)?.is_zero();
                        let is_coboundary = coboundary_check(c, &result);
                        products.push(ProductCheck {
                            operation,
                            left: a,
                            right: b,
                            left_position: *lp,
                            result,
                            is_cocycle,
                            is_coboundary,
                        });
                    }
                }
            }
        }
    }
    Ok(HReport {
        position,
        label: class_label(&c.kind, position),
        dimension: reps.len(),
        representatives: reps,
        products,
    })
}

fn as_vforms(reps: &[Element]) -> Vec<VForm> {
    reps.iter()
        .filter_map(|e| match e {
            Element::VForm(o) => Some(o.clone()),
            _ => None,
        })
        .collect()
}

fn coboundary_check(c: &TruncatedComplex, o: &VForm) -> Option<bool> {
    let position = o.form_degree() as i64;
    let space = c.space(position).ok()?;
    let target = space.coordinates(&Element::VForm(o.clone())).ok()?;
    let inc = c.incoming(position).ok()?;
    let mut span = RowReducer::new(space.dim());
    for col in &inc.transpose().data {
        span.add_row(col.clone(), Rational::zero());
    }
    Some(span.add_row(target, Rational::zero()) != RowOutcome::Independent)
}
