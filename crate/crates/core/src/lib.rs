//! Bezier tensor-product surfaces and their triangulated control surfaces.
//!
//! A control net determines two surfaces at once: the smooth Bezier
//! surface and the piecewise-linear control surface obtained by splitting
//! every net cell along a diagonal. This crate builds both, refines the
//! control surface by de Casteljau subdivision, and certifies executably
//! that refinement makes the control surface embedded and homeomorphic to
//! the smooth surface, with its total Gaussian curvature converging to the
//! smooth total curvature:
//!
//! - [`bezier`]: Bernstein basis, evaluation, analytic derivatives,
//!   midpoint subdivision, closedness classification, regularity checks.
//! - [`mesh`]: control-surface triangulation, seam welding, Euler
//!   characteristic / boundary loops / orientability.
//! - [`cones`]: discrete derivatives, tangent and normal bounding cones,
//!   and the three-cone injectivity conditions per patch.
//! - [`curvature`]: angle defects, discrete Gauss-Bonnet balances,
//!   polygon total curvature, Gauss-Legendre quadrature of the smooth
//!   integrals, and the discrete-vs-smooth convergence residuals.
//! - [`checks`]: triangle-triangle intersection, mesh self-intersection,
//!   the sampled Hausdorff proxy, and the composite certificate.
//! - [`pipeline`]: the subdivision driver and convergence summary.
//! - [`io`]: net files, OBJ export, JSON reports.
//! - [`samples`]: ready-made nets used by tests and fixtures.

pub mod bezier;
pub mod checks;
pub mod cli;
pub mod cones;
pub mod curvature;
pub mod error;
pub mod io;
pub mod mesh;
pub mod pipeline;
pub mod point;
pub mod samples;

pub use bezier::{
    bernstein, classify_closedness, de_casteljau_eval, eval_surface, subdivide_patch,
    subdivide_to_level, surface_derivatives, validate_regularity, BezierPatch, Closedness,
    ControlNet,
};
pub use checks::{
    hausdorff_distance, isotopy_certificate, self_intersections, tri_tri_intersect, Certificate,
    IntersectionKind, IntersectionRecord, Verdict,
};
pub use cones::{
    discrete_derivatives, injectivity_conditions, normal_cone, tangent_cones, DirectionCone,
    InjectivityVerdict,
};
pub use curvature::{
    angle_defect, boundary_exterior_angle, closed_total_curvature_residual,
    discrete_gauss_bonnet, open_total_curvature_residual, polygon_total_curvature,
    smooth_area_integral, smooth_boundary_integrals, CurvatureReport,
};
pub use error::{Error, Result};
pub use mesh::{
    homeomorphism_check, mesh_from_patches, topology, triangulate_net, TopologyReport, TriMesh,
    VertexRole,
};
pub use pipeline::{convergence_summary, run, LevelRecord, RunConfig};
pub use point::Point3;
