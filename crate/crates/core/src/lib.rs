//! Exact symbolic calculus of multiderivations, differential forms and
//! vector-valued forms over polynomial algebras `Q[x_1, ..., x_n]`.
//!
//! The crate is organised bottom-up:
//!
//! - [`exactalg`]: rationals, sparse polynomials, exact linear systems.
//! - [`tensorcalc`]: multivectors, forms, contractions, Lie derivatives and
//!   the Schouten bracket (with an independent rewrite-rule oracle).
//! - [`vvforms`]: vector-valued forms, the Frölicher–Nijenhuis and
//!   Nijenhuis–Richardson brackets, and a linear-algebra bracket extractor.
//! - [`poisson`]: Poisson structures, (co)chain differentials, the extended
//!   bracket on forms and the Magri recursion.
//! - [`cohoengine`]: degree-truncated complexes and exact Betti numbers.
//! - [`symbols`]: differential operators and the algebra of their symbols.
//! - [`connections`]: connections on polynomial extensions, curvature and the
//!   vertical Nijenhuis complex.

pub mod cohoengine;
pub mod connections;
pub mod error;
pub mod exactalg;
pub mod par;
pub mod poisson;
pub mod sample;
pub mod symbols;
pub mod tensorcalc;
pub mod vvforms;

pub use error::{Error, Result};
pub use exactalg::{Monomial, Poly, Rational, VarContext};
pub use tensorcalc::{Form, Multivector};
pub use vvforms::VForm;
