//! Exact ℓ-modular Heisenberg and Weil representations, Weil factors, Hilbert
//! symbols and the metaplectic cocycle over finite and p-adic base fields.

pub mod basefield;
pub mod coeff;
pub mod heisenberg;
pub mod linalg;
pub mod metaplectic;
pub mod operator;
pub mod quadratic;
pub mod schwartz;
pub mod selfcheck;
pub mod theta;
pub mod util;
pub mod vecspace;
pub mod weilfactor;
