//! Gaussian, anti-Gaussian and averaged quadrature rules for the weights
//! `x^alpha e^{-cx} [J_nu(x) + 1]` and `x^alpha e^{-cx}` on `[0, inf)`,
//! computed in arbitrary precision.
//!
//! Integrals against the sign-changing weight `x^alpha e^{-cx} J_nu(x)` are
//! evaluated as the difference of the two positive-weight integrals, each
//! paired with a posteriori error estimates from averaged rules and an a
//! priori estimate driven by the integrand's dominant pole pair.

pub mod diagnostics;
pub mod error;
pub mod estimators;
mod integrand;
pub mod recurrence;
pub mod rules;
pub mod scalar;
pub mod weights;

pub use error::{Error, Result};
pub use integrand::Integrand;
pub use recurrence::RecurrenceTable;
pub use rules::{QuadratureRule, RuleKind};
pub use scalar::{Complexz, PrecisionContext, Real};
pub use weights::{Family, WeightSpec};
