//! Numerical geometry of asymptotically flat graphical hypersurfaces of
//! Euclidean space.
//!
//! The library works with graphs `x ↦ (x, f(x)) ⊂ Eⁿ⁺¹` sampled on a regular
//! grid, possibly with a spherical hole around the origin (a minimal
//! boundary).  On top of that representation it provides:
//!
//! * [`hypersurface`] — finite-difference differential geometry: gradients,
//!   Hessians, the divergence-form scalar curvature of a graph, level-set
//!   extraction with areas and mean curvature, induced volume.
//! * [`mass`] — the ADM mass boundary integral, Lam's mass identity, the
//!   normalization height `h₀`, the graphical Penrose bound, slab and volume
//!   checks.
//! * [`geodesics`] — intrinsic distances on the discretized hypersurface:
//!   depth, diameter, intrinsic balls, and the boundary pullback metric.
//! * [`metricspace`] — finite metric spaces, the explicit glued space
//!   `[−ε,ε] × X` with its five-case distance, Gromov-Hausdorff and intrinsic
//!   flat upper bounds, exact (rational) arithmetic mode.
//! * [`convergence`] — generators for families of graphs (Schwarzschild,
//!   mass-ramp perturbations, thin wells) and the desk-scale stability
//!   experiments that track how geometry flattens as the mass goes to zero.
//! * [`io`] — plain-text serialization of manifolds, metric spaces, reports,
//!   and deterministic CSV output.

pub mod convergence;
pub mod error;
pub mod geodesics;
pub mod grid;
pub mod hypersurface;
pub mod io;
pub mod mass;
pub mod metricspace;
pub mod profile;
pub mod quad;
pub mod rng;

pub use error::{Error, Result};
pub use grid::{GraphDomain, NodeIndex};
pub use hypersurface::GraphManifold;
