//! Verification of world-line conditions for relativity groups realized as
//! vector fields on position-velocity space.
//!
//! An [`AccelerationLaw`] closes the dynamics; the group generators are
//! built from it, their brackets are compared against the structure
//! constants of a chosen [`SubalgebraSpec`], and the defects are reported.

pub mod anomaly;
pub mod exprdsl;
pub mod generators;
pub mod numkernel;
pub mod phasespace;
pub mod solutions;
pub mod worldline;

pub use anomaly::{
    anomaly_report, bracket_defect, condition_residuals, lie_bracket, AnomalyReport, Condition, Verdict,
};
pub use generators::{build_generator, catalog, CatalogKey, Combo, GeneratorId, SubalgebraSpec, VectorField};
pub use numkernel::{DomainError, Dual1, Scalar};
pub use phasespace::{AccelerationLaw, Kinematics, PhasePoint, SamplingDomain};
pub use solutions::{make_family, FamilyId, FamilyParams, ScalarProfile};
pub use worldline::{covariance_residual, integrate, transform, GroupElement, Trajectory};
