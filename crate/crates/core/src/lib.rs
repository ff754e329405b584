//! Evaluation of trigonometric series of the form `sum(trig(n x) / n^nu)`
//! (plain, alternating, and odd-index variants) by rewriting each series as a
//! finite integral over `[0, 1]` and evaluating it with singularity-aware
//! adaptive quadrature.
//!
//! The pipeline is: parse a series expression ([`dsl`]), classify it into a
//! normalized [`dsl::SeriesSpec`], collapse the inner trig sum into a rational
//! kernel in `u = e^(-t)` ([`kernels`]), build the integral representation
//! ([`laplace`]), and integrate ([`quadrature`]). Results are cross-checked
//! against tabulated exact identities ([`closed_forms`]) and an independent
//! partial-summation oracle ([`oracle`]).

pub mod closed_forms;
pub mod dsl;
pub mod kahan;
pub mod kernels;
pub mod laplace;
pub mod oracle;
pub mod quadrature;
pub mod report;

pub use dsl::{classify, parse, validate_point, PointClass, SeriesSpec};
pub use kernels::{kernel_in_t, kernel_in_u, Family};
pub use laplace::{build_integral_rep, laplace_weight, IntegralRep, RenderFormat};
pub use quadrature::{integrate, QuadConfig, QuadResult};
