use std::collections::BTreeMap;
use std::fmt;

use super::ops::{lie_general, lie_n_general, lie_p_unchecked};
use num_traits::{One, Zero};

use super::{is_integrable, VForm};
use crate::error::{Error, Result};
use crate::exactalg::{Monomial, Poly, Rational, RowOutcome, RowReducer};
use crate::par;
use crate::tensorcalc::blade::{all_of_grade, Mask};
use crate::tensorcalc::{schouten, Form, Multivector};

/// Which family of Lie actions the bracket is extracted from.
#[derive(Clone, Debug)]
pub enum BracketSetting {
    /// `L_Ω = [d, i_Ω]` acting on forms.
    DeRham,
    /// `L^P_Ω = [∂_P, i_Ω]` acting on multivectors.
    Poisson(Multivector),
    /// `L^N_Ω = [∂_N, i_Ω]` acting on `D_1(Λ^*)`.
    Nijenhuis(VForm),
}

/// Where the representing element is searched for.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TargetSpace {
    /// The bidegree the classical brackets land in.
    Natural,
    /// A single `D_i(Λ^j)`, given as `(j, i)`.
    Bidegree(usize, usize),
    /// The direct sum of every `D_i(Λ^j)` whose action has the right shift.
    AllWithShift,
}

/// Find `B` with `L_B = [L_Ω, L_Ω']` on all basis arguments whose
/// coefficients have degree at most `degree_cap`, `B` itself having
/// coefficients of degree at most `degree_cap`.
#[derive(Clone, Debug)]
pub struct BracketProblem {
    pub setting: BracketSetting,
    pub lhs: VForm,
    pub rhs: VForm,
    pub target: TargetSpace,
    pub degree_cap: u32,
}

/// A test argument of the operators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Argument {
    Form(Form),
    Multivector(Multivector),
    VForm(VForm),
}

impl fmt::Display for Argument {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Argument::Form(w) => write!(f, "{w}"),
            Argument::Multivector(x) => write!(f, "{x}"),
            Argument::VForm(o) => write!(f, "{o}"),
        }
    }
}

#[derive(Clone, Debug)]
pub enum ExtractOutcome {
    Found {
        /// One component per searched bidegree (zero components included).
        components: Vec<VForm>,
        /// Dimension of the space of elements acting trivially on the
        /// truncated arguments.
        kernel_dim: usize,
        unknowns: usize,
        arguments: usize,
    },
    NoRepresentative {
        /// First argument (in enumeration order) whose equations made the
        /// system inconsistent.
        witness: Argument,
        cap: u32,
        unknowns: usize,
        arguments_checked: usize,
    },
}

impl ExtractOutcome {
    pub fn is_found(&self) -> bool {
        matches!(self, ExtractOutcome::Found { .. })
    }

    /// Sum of the components when they share a bidegree.
    pub fn element(&self) -> Option<VForm> {
        match self {
            ExtractOutcome::Found { components, .. } => {
                let nonzero: Vec<&VForm> = components.iter().filter(|c| !c.is_zero()).collect();
                match nonzero.len() {
                    0 => components.first().cloned(),
                    1 => Some(nonzero[0].clone()),
                    _ => None,
                }
            }
            ExtractOutcome::NoRepresentative { .. } => None,
        }
    }
}

type Key = (Mask, Mask, Monomial);

fn flatten_form(w: &Form, out: &mut BTreeMap<Key, Rational>) {
    for (m, p) in w.terms() {
        for (mono, c) in p.terms() {
            out.insert((m, 0, mono.clone()), c.clone());
        }
    }
}

fn flatten_multivector(x: &Multivector, out: &mut BTreeMap<Key, Rational>) {
    for (m, p) in x.terms() {
        for (mono, c) in p.terms() {
            out.insert((0, m, mono.clone()), c.clone());
        }
    }
}

fn flatten_vform(o: &VForm, out: &mut BTreeMap<Key, Rational>) {
    for (j, i, p) in o.terms() {
        for (mono, c) in p.terms() {
            out.insert((j, i, mono.clone()), c.clone());
        }
    }
}

fn flatten(a: &Argument) -> BTreeMap<Key, Rational> {
    let mut out = BTreeMap::new();
    match a {
        Argument::Form(w) => flatten_form(w, &mut out),
        Argument::Multivector(x) => flatten_multivector(x, &mut out),
        Argument::VForm(o) => flatten_vform(o, &mut out),
    }
    out
}

impl BracketSetting {
    /// Degree shift of the action of `Ω ∈ D_i(Λ^j)`.
    fn shift(&self, o: &VForm) -> i64 {
        let (j, i) = (o.form_degree() as i64, o.multi_degree() as i64);
        match self {
            BracketSetting::DeRham => j - i + 1,
            BracketSetting::Poisson(_) => i - j + 1,
            BracketSetting::Nijenhuis(_) => j,
        }
    }

    fn act(&self, o: &VForm, a: &Argument) -> Result<Argument> {
        Ok(match (self, a) {
            (BracketSetting::DeRham, Argument::Form(w)) => Argument::Form(lie_general(o, w)?),
            (BracketSetting::Poisson(p), Argument::Multivector(x)) => {
                Argument::Multivector(lie_p_unchecked(p, o, x)?)
            }
            (BracketSetting::Nijenhuis(n), Argument::VForm(v)) => {
                Argument::VForm(lie_n_general(n, o, v)?)
            }
            _ => {
                return Err(Error::InconsistentGrading(
                    "argument kind does not match the setting".into(),
                ))
            }
        })
    }

    fn arguments(&self, ctx: &std::sync::Arc<crate::VarContext>, cap: u32) -> Vec<Argument> {
        let n = ctx.n();
        let monos = Monomial::up_to_degree(n, cap);
        let mut out = Vec::new();
        for k in 0..=n {
            for mask in all_of_grade(n, k) {
                for m in &monos {
                    let c = Poly::monomial(ctx, m.clone(), Rational::one());
                    match self {
                        BracketSetting::DeRham => {
                            out.push(Argument::Form(Form::from_masks(ctx, k, [(mask, c)])))
                        }
                        BracketSetting::Poisson(_) => out.push(Argument::Multivector(
                            Multivector::from_masks(ctx, k, [(mask, c)]),
                        )),
                        BracketSetting::Nijenhuis(_) => {
                            for l in 0..n {
                                out.push(Argument::VForm(VForm::from_masks(
                                    ctx,
                                    k,
                                    1,
                                    [((mask, 1 << l), c.clone())],
                                )));
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// Candidate bidegrees `(j, i)` whose action shifts by `s`.
    fn bidegrees_with_shift(&self, n: usize, s: i64) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for j in 0..=n {
            for i in 0..=n {
                let o_shift = match self {
                    BracketSetting::DeRham => j as i64 - i as i64 + 1,
                    BracketSetting::Poisson(_) => i as i64 - j as i64 + 1,
                    BracketSetting::Nijenhuis(_) if i == 1 => j as i64,
                    BracketSetting::Nijenhuis(_) => continue,
                };
                if o_shift == s {
                    out.push((j, i));
                }
            }
        }
        out
    }
}

/// One linear equation: coefficients and right-hand side.
type Equation = (Vec<Rational>, Rational);

/// Solve the truncated linear problem for a representing element.
pub fn extract_bracket(prob: &BracketProblem) -> Result<ExtractOutcome> {
    let ctx = prob.lhs.ctx().clone();
    crate::exactalg::same_ctx(&ctx, prob.rhs.ctx())?;
    match &prob.setting {
        BracketSetting::DeRham => {}
        BracketSetting::Poisson(p) => {
            if p.degree() != 2 || !schouten(p, p)?.is_zero() {
                return Err(Error::NotPoisson {
                    defect_terms: if p.degree() == 2 {
                        schouten(p, p)?.num_terms()
                    } else {
                        0
                    },
                });
            }
        }
        BracketSetting::Nijenhuis(nn) => {
            if !is_integrable(nn)?.integrable {
                return Err(Error::NotIntegrable);
            }
            if prob.lhs.multi_degree() != 1 || prob.rhs.multi_degree() != 1 {
                return Err(Error::InconsistentGrading(
                    "Nijenhuis setting needs elements of D_1(Λ^*)".into(),
                ));
            }
        }
    }
    let n = ctx.n();
    let (s1, s2) = (prob.setting.shift(&prob.lhs), prob.setting.shift(&prob.rhs));
    let s = s1 + s2;
    let (j1, i1) = (
        prob.lhs.form_degree() as i64,
        prob.lhs.multi_degree() as i64,
    );
    let (j2, i2) = (
        prob.rhs.form_degree() as i64,
        prob.rhs.multi_degree() as i64,
    );
    let bidegrees: Vec<(usize, usize)> = match &prob.target {
        TargetSpace::Natural => {
            let (j, i) = match prob.setting {
                BracketSetting::DeRham => (j1 + j2, i1 + i2 - 1),
                BracketSetting::Poisson(_) => (j1 + j2 - 1, i1 + i2),
                BracketSetting::Nijenhuis(_) => (j1 + j2, 1),
            };
            if j < 0 || i < 0 {
                return Err(Error::InconsistentGrading(format!(
                    "natural target ({j}, {i}) is negative"
                )));
            }
            vec![(j as usize, i as usize)]
        }
        TargetSpace::Bidegree(j, i) => vec![(*j, *i)],
        TargetSpace::AllWithShift => prob.setting.bidegrees_with_shift(n, s),
    };
    for &(j, i) in &bidegrees {
        let probe = VForm::zero(&ctx, j, i);
        if prob.setting.shift(&probe) != s {
            return Err(Error::InconsistentGrading(format!(
                "target D_{i}(Λ^{j}) does not shift degree by {s}"
            )));
        }
    }

    // Unknown columns: monomial times basis element, per bidegree.
    let monos = Monomial::up_to_degree(n, prob.degree_cap);
    let mut columns: Vec<(usize, VForm)> = Vec::new();
    for (b, &(j, i)) in bidegrees.iter().enumerate() {
        if j > n || i > n {
            continue;
        }
        for jm in all_of_grade(n, j) {
            for im in all_of_grade(n, i) {
                for m in &monos {
                    let c = Poly::monomial(&ctx, m.clone(), Rational::one());
                    columns.push((b, VForm::from_masks(&ctx, j, i, [((jm, im), c)])));
                }
            }
        }
    }
    let args = prob.setting.arguments(&ctx, prob.degree_cap);
    let odd = (s1 * s2).rem_euclid(2) == 1;

    let equations: Vec<Result<Vec<Equation>>> = par::map(&args, |a| {
        let first = flatten(
            &prob
                .setting
                .act(&prob.lhs, &prob.setting.act(&prob.rhs, a)?)?,
        );
        let second = flatten(
            &prob
                .setting
                .act(&prob.rhs, &prob.setting.act(&prob.lhs, a)?)?,
        );
        let mut target = first;
        for (k, v) in second {
            let e = target.entry(k).or_insert_with(Rational::zero);
            if odd {
                *e += v;
            } else {
                *e -= v;
            }
        }
        let images: Vec<BTreeMap<Key, Rational>> = columns
            .iter()
            .map(|(_, c)| prob.setting.act(c, a).map(|v| flatten(&v)))
            .collect::<Result<_>>()?;
        let mut keys: std::collections::BTreeSet<Key> = target.keys().cloned().collect();
        for im in &images {
            keys.extend(im.keys().cloned());
        }
        Ok(keys
            .into_iter()
            .map(|k| {
                let row = images
                    .iter()
                    .map(|im| im.get(&k).cloned().unwrap_or_else(Rational::zero))
                    .collect();
                (row, target.get(&k).cloned().unwrap_or_else(Rational::zero))
            })
            .collect())
    });

    let mut red = RowReducer::new(columns.len());
    for (idx, eqs) in equations.into_iter().enumerate() {
        for (row, rhs) in eqs? {
            if red.add_row(row, rhs) == RowOutcome::Inconsistent {
                return Ok(ExtractOutcome::NoRepresentative {
                    witness: args[idx].clone(),
                    cap: prob.degree_cap,
                    unknowns: columns.len(),
                    arguments_checked: idx + 1,
                });
            }
        }
    }
    let sol = red.solution().expect("consistent");
    let mut components: Vec<VForm> = bidegrees
        .iter()
        .map(|&(j, i)| VForm::zero(&ctx, j, i))
        .collect();
    for ((b, col), v) in columns.iter().zip(&sol.particular) {
        if !v.is_zero() {
            components[*b] = components[*b].checked_add(&col.scale(v))?;
        }
    }
    Ok(ExtractOutcome::Found {
        components,
        kernel_dim: sol.nullity(),
        unknowns: columns.len(),
        arguments: args.len(),
    })
}
