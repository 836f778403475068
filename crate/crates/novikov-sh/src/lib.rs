//! Exact computation of symplectic cohomology for disk and annulus
//! subbundles of the negative line bundles `O(-k) → CP^m`.
//!
//! The pipeline is entirely exact: rational arithmetic in the Novikov
//! field, Newton polygons for eigenvalue valuations, threshold formulas
//! for the disk/annulus cohomology dimensions, a Landau–Ginzburg mirror
//! cross-check on affinoid annulus domains, and a generic engine for
//! reduced and completed cohomology of action-filtered chain complexes.

pub mod cli;
pub mod engine;
pub mod linalg;
pub mod mirror;
pub mod novikov;
pub mod quantum;
pub mod sh;

pub use novikov::{Coefficient, Exponent, Norm, NovikovSeries, Precision, Valuation};
