//! Exact-arithmetic classification of cohomology of homogeneous line bundles
//! over toroidal groups: certified scalars, period-matrix frames, bundle
//! normalization, spectral shifts, Diophantine condition checks, a truncated
//! Fourier model of the dbar complex, and the final three-way classification.

pub mod bundle;
pub mod classify;
pub mod dbar;
pub mod diophantine;
pub mod linalg;
pub mod report;
pub mod scalars;
pub mod spectral;
pub mod torus;
