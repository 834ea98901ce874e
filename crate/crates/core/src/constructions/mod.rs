//! The constructive procedures: edge splitting, ray-family extension,
//! double rays, exhausting sequences, combined degrees, and the structural
//! verification suites for the counterexample digraph.

pub mod degrees;
pub mod double_rays;
pub mod edge_split;
pub mod planar;
pub mod ray_family;
pub mod sequences;
pub mod verify;

pub use degrees::{combined_in_degree, delta_minus, DegreeReport};
pub use double_rays::double_rays;
pub use edge_split::{edge_split, SplitPresentation};
pub use planar::{euler_check, RotationSystem};
pub use ray_family::{extend_ray_family, RayFamilyState};
pub use sequences::{
    check_witness, diagonal_exhausting_sequence, graded_sequence, sequence_from_partition,
    stable_core, verify_exhausting, ExhaustingSequence, PartitionPlan, Verdict,
};
pub use verify::{verify_counterexample, verify_edge_counterexample, CheckReport};
