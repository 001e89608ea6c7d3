//! Example systems: LSV, doubling, tripling, rotations and skew products,
//! their invariant-measure samplers and first-return induced maps.

mod expansion;
mod induced;
mod orbit;
mod point;
mod sampler;
mod system;

pub use expansion::{DigitBase, Expansion};
pub use induced::{first_return_system, InducedSystem, DEFAULT_MAX_TAU};
pub use orbit::{generate_orbit, Orbit, OrbitIter};
pub use point::{reduce_mod1, Point, Space};
pub use sampler::{invariant_sampler, power_density_inverse_cdf, sample_measure, MeasureSampler, SamplerKind};
pub use system::{
    evaluate_map, lsv_left_branch, torus_distance, Cylinders, ExpandingBase, MapKind, MapSystem, Metric,
    RotationNumber,
};
