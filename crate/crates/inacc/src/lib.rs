//! Weighted interval inaccuracy measures for doubly truncated random
//! variables, with the surrounding family of information functionals
//! (entropy, Kerridge/Nath inaccuracy, residual/past variants), bound and
//! characterization verifiers, and a seeded Monte Carlo oracle.
//!
//! The crate is organized around four layers:
//!
//! * [`dist`] — the distribution catalog, proportional (reversed) hazard
//!   constructions and truncation windows;
//! * [`quad`] — the adaptive quadrature engine every measure runs on;
//! * [`measures`] — the functionals themselves plus [`mc`], the independent
//!   Monte Carlo estimator;
//! * [`laws`] — verifiers that re-check identities, bounds and
//!   characterization relations numerically and emit structured reports.
//!
//! Window grids and Monte Carlo sampling are data-parallel; the `parallel`
//! feature (on by default) fans them out with rayon, and disabling it gives
//! a dependency-free sequential build with identical results.

pub mod dist;
pub mod error;
pub mod laws;
pub mod mc;
pub mod measures;
pub mod par;
pub mod quad;

pub use dist::{Distribution, ModelPair, MonotoneMap, Selector, TruncationWindow, WindowReport};
pub use error::{Error, Result};
pub use quad::{QuadratureConfig, QuadratureResult};
