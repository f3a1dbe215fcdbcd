//! Multiderivations `D_i(A)`, forms `Λ^j(A)`, contractions, Lie derivatives
//! and the Schouten bracket.
//!
//! Both multivectors and forms are stored as antisymmetric coefficient tables
//! over the free bases `@x_I` and `dx_J`. The inductive definitions (evaluation
//! of a multiderivation on a function, the inner product built from
//! `i(X ⊗ da ∧ ω) = i(X(a) ⊗ ω)`) are exposed as well, so the table-level
//! formulas can be checked against them.

pub mod blade;
mod contract;
mod form;
mod lie;
mod multivector;
mod oracle;
mod schouten;
mod table;

pub use contract::{contract_form, contract_form_by_evaluation, contract_multi};
pub use form::Form;
pub(crate) use lie::normalize as normalize_degree;
pub use lie::{lie_form, LieOperator};
pub use multivector::Multivector;
pub use oracle::schouten_oracle;
pub use schouten::schouten;

use std::fmt;

use blade::lex_key;
use table::Table;

pub(crate) fn fmt_table(f: &mut fmt::Formatter<'_>, t: &Table, prefix: &str) -> fmt::Result {
    if t.coeffs.is_empty() {
        return write!(f, "0");
    }
    let mut masks: Vec<_> = t.coeffs.keys().copied().collect();
    masks.sort_by_key(|m| lex_key(*m));
    for (k, m) in masks.iter().enumerate() {
        let basis: Vec<String> = blade::bits(*m)
            .map(|i| format!("{prefix}{}", t.ctx.name(i)))
            .collect();
        let basis = basis.join("^");
        let term = coeff_times(&t.coeffs[m], &basis);
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

/// `coeff*basis` with the usual elisions; `basis` may be empty.
pub(crate) fn coeff_times(c: &crate::Poly, basis: &str) -> String {
    if basis.is_empty() {
        return c.to_string();
    }
    if c.num_terms() == 1 {
        let s = c.to_string();
        if s == "1" {
            return basis.to_string();
        }
        if s == "-1" {
            return format!("-{basis}");
        }
        return format!("{s}*{basis}");
    }
    format!("({c})*{basis}")
}
