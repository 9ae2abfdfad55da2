//! Tour-length distribution modelling for the symmetric Euclidean TSP.
//!
//! The library treats the set of all Hamiltonian-cycle lengths of an
//! instance as a statistical population: it enumerates or samples that
//! population, computes exact low-order moments in closed form, fits a
//! four-parameter Generalized Beta distribution to the result, and runs
//! the iterative truncated-expectation schedule that turns a Christofides
//! upper bound into a `(1 + ((α+1)/(α+2))^(K-1)/2)`-style approximation
//! figure.
//!
//! Modules mirror the processing pipeline:
//!
//! * [`instance`] — TSPLIB ingestion, random unit-square generation,
//!   distance kernels, and the max-tour cost transformation.
//! * [`tour`] — tours, exact/sampled moments of the tour-length
//!   distribution, full enumeration for small instances, histograms.
//! * [`heuristics`] — MST, exact blossom matching, Euler walks,
//!   Christofides, 2-opt/3-opt, and max-tour estimation.
//! * [`betadist`] — Generalized Beta numerics: pdf/cdf, moments, moment
//!   matching, incomplete beta, Gauss hypergeometric series, truncated
//!   means, Kolmogorov-Smirnov distance.
//! * [`tgb`] — the iterative truncation schedule, approximation ratios,
//!   minimum iteration counts, regression parameters for random
//!   instances, and the end-to-end per-instance report.

pub mod betadist;
pub mod error;
pub mod heuristics;
pub mod instance;
pub mod tgb;
pub mod tour;

pub use error::{Error, Result};
