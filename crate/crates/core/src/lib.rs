//! Bergman kernels of concrete bounded domains.
//!
//! * [`domains`]: the catalog of (weighted) Reinhardt domains.
//! * [`moments`]: squared norms of monomials, closed form or by quadrature, and their cache.
//! * [`kernels`]: closed-form kernels and the monomial series engine with tail bounds.
//! * [`transforms`]: transformation-rule, proper-map, Riemann-map and metric checks.
//! * [`zerofinder`]: argument-principle zero certification on one-variable slices.
//! * [`experiments`]: reproducible drivers that emit JSON/CSV reports.

pub mod domains;
pub mod error;
pub mod experiments;
pub mod kernels;
pub mod moments;
pub mod quadrature;
pub mod special;
pub mod transforms;
pub mod zerofinder;

pub use domains::{DomainSpec, RadialRegion};
pub use error::{Error, Result};
pub use kernels::{EvaluatedValue, KernelEvaluator};
pub use moments::{Moment, MomentTable, MultiIndex};
