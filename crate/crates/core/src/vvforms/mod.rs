//! Vector-valued forms `D_i(Λ^j) ≅ Λ^j ⊗ D_i(A)`, their inner products and
//! Lie derivatives, the Frölicher–Nijenhuis and Nijenhuis–Richardson
//! brackets, integrable structures, and extraction of brackets from
//! commutators of Lie actions by exact linear algebra.

mod extract;
mod ops;
mod vform;

pub use extract::{
    extract_bracket, Argument, BracketProblem, BracketSetting, ExtractOutcome, TargetSpace,
};
pub use ops::{
    contract_general, contract_into_multivector, contract_vform, d_n, d_n_bar, d_nijenhuis,
    fn_bracket, is_integrable, lie_general, lie_n_general, lie_p_general, nr_bracket, vv_contract,
    vv_lie, Integrability,
};
pub use vform::VForm;
