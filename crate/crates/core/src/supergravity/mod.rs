//! Super space-times with frames, gravity fields and their torsion.

mod checks;
mod connection;
mod frame;
mod report;

pub use checks::{
    build_flat_spacetime, check_gravity_field, check_levi_civita, check_strong_levi_civita, compute_levi,
    extract_physical_fields, FlatSpacetime, LeviTensor, PhysicalFields,
};
pub use connection::{decompose_torsion, Components3, Connection, Curvature, FrameMetric, TorsionDecomposition};
pub use frame::{DistributionPair, FrameField, FunctionMatrix, Structure};
pub use report::{frame_label, labels, CheckReport};
