//! Numerical laboratory for the Cauchy transform of finite planar measures.
//!
//! A [`DiscreteMeasure`] is a weighted point set standing in for a compactly
//! supported measure without atoms. On top of it the crate computes:
//!
//! * Menger curvature `c²(μ)` and its pointwise version ([`curvature`]),
//! * cube densities, multiscale density profiles and the linear-growth
//!   constant ([`density`]),
//! * truncated Cauchy / Riesz operator matrices, their `L²(μ)` norms, shell
//!   decompositions and the `T(1)`-type suprema ([`operator`]),
//! * compactness diagnostics combining the three ([`diagnostics`]),
//! * closed-form Hilbert transforms of step functions used as ground truth
//!   for the segment ([`analytic`]).
//!
//! Every sum over atoms excludes coincident indices: the continuous measures
//! being approximated have no atoms, so diagonal terms are discretization
//! artifacts.

pub mod analytic;
pub mod curvature;
pub mod density;
pub mod diagnostics;
pub mod error;
pub mod measure;
pub mod operator;
mod reduce;

pub use error::{Error, Result};
pub use measure::{CantorSpec, Cube, DiscreteMeasure, Membership, Point};
