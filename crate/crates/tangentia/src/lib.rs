//! Common tangent lines to spheres and quadric hypersurfaces.
//!
//! A line in `R^n` can be tangent to at most finitely many generically placed
//! spheres once their number reaches `2n-2`, and then the number of complex
//! common tangents is `3·2^{n-1}`. This crate enumerates those tangents:
//!
//! * [`geometry`] — spheres, lines in moment coordinates, tangency residuals;
//! * [`poly`] — sparse multivariate polynomials over `Complex64`, affine
//!   patches of homogeneous systems;
//! * [`formulation`] — reduction of the tangency conditions to `n-1`
//!   homogeneous equations in the direction vector alone, plus the cubic
//!   coefficient calculus for equal radii and the combinatorial bounds;
//! * [`quadrics`] — Plücker-coordinate tangency forms for quadric
//!   hypersurfaces in projective space;
//! * [`solver`] — total-degree homotopy continuation with a Cauchy endgame,
//!   endpoint deduplication and classification;
//! * [`families`] — closed-form solutions for symmetric sphere arrangements
//!   (tetrahedron plus axis centers, crosspolytope, perturbed crosspolytope)
//!   and the associated reality regions.
//!
//! All randomized behavior (patches, gamma trick, start systems) is driven by
//! an explicit `u64` seed, so runs are reproducible.

pub mod families;
pub mod formulation;
pub mod geometry;
pub mod poly;
pub mod quadrics;
pub mod roots;
pub mod solver;

pub use geometry::{Line, SolutionRecord, Sphere, SphereArrangement};
pub use solver::{SolutionSet, TrackerConfig};
