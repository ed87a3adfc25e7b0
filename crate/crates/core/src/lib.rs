//! Voronoi cells of three-dimensional lattices described by their six
//! non-negative Selling parameters, and the scale-invariant isoperimetric
//! quotient `F = area / volume^(2/3)` of those cells.
//!
//! The crate is organised bottom-up:
//!
//! - [`selling`]: parameter vector, Gram matrix, determinant and the `S4`
//!   relabelling action.
//! - [`geometry`]: the 24-vertex / 14-face cell in dual coordinates, vector
//!   areas, Euclidean embedding, volume and OBJ export.
//! - [`quotient`]: `F` by the closed formula and by the geometric path, and
//!   the sphere-normalised quotient `Q = 36π / F³`.
//! - [`calculus`]: finite-difference derivatives of `F`, a Jacobi eigensolver,
//!   tangent-space spectra and KKT-aware classification of parameter points.
//! - [`families`]: two-value orbit classes, the opposite-orbit reduction and
//!   the restricted functionals on the rhombic-dodecahedron and box strata.
//! - [`optimize`]: projected descent of `F` on the simplex `Σρ = 6`.
//!
//! ```
//! use voronoi_iso::{f_closed, SellingParams};
//!
//! let bcc = SellingParams::bcc();
//! let f = f_closed(&bcc);
//! assert!((f - 5.314739699971957).abs() < 1e-12);
//! ```

pub mod calculus;
pub mod error;
pub mod families;
pub mod format;
pub mod geometry;
mod linalg;
pub mod optimize;
pub mod quotient;
pub mod selling;

pub use calculus::{
    classify_point, gradient_fd, hessian_fd, symmetric_eigen, tangent_spectrum, Classification,
    ClassifyConfig,
    DiffConfig, Eigen, ReferenceConstants, StationaryReport,
};
pub use error::{Error, Result};
pub use families::{
    enumerate_two_value_orbits, family_f, psi, tilde_f, verify_opposite_monotonicity, ClassName,
    MonotonicityReport, OrbitClass,
};
pub use geometry::{build_cell, embed_euclidean, export_obj, EuclideanEmbedding, VoronoiCell};
pub use optimize::{
    minimize_f, random_restart_survey, MinimizeConfig, OptimizationResult, RunSummary, SurveySummary,
};
pub use quotient::{
    area_decomposition, f_closed, f_closed_gradient, f_geometric, q_from_f, AreaDecomposition,
};
pub use selling::{
    canonical_representative, det_closed, det_direct, gram_matrix, s4_apply, GramMatrix,
    Permutation, SellingParams,
};
