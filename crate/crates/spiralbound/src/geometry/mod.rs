//! Spiral geometry: profiles r(θ), arc length, curvature, Fermi (parallel)
//! coordinates, the inward normal width d(s), the admissible start s₀, and
//! the area of the central region.

pub mod area;
pub mod cache;
pub mod fermi;
pub mod profile;

pub use area::{central_area, strip_membership, AreaEstimate};
pub use cache::{find_s0, CacheOptions, CacheSource, CurvatureDerivs, GeometryCache};
pub use fermi::{
    distance_to_curve, fermi_point, inward_normal, normal_intersection, unit_tangent, NormalHit,
};
pub use profile::{arc_length, classify, curvature_theta, width, ProfileFamily, SpiralClass, SpiralProfile};
