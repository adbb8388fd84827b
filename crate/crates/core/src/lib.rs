//! Gaussian continuous entanglement renormalization for the free boson on the
//! line, the half-line and the line with a conformal defect.
//!
//! Internally every quantity is evaluated in units of the cutoff `Λ`; public
//! functions take physical coordinates and a [`Profile`] carrying the scale.

pub mod correlators;
pub mod defect_modes;
pub mod error;
pub mod flow;
pub mod kernels;
pub mod lattice;
pub mod magic;
pub mod profiles;
pub mod quadrature;
pub mod special;
pub mod transforms;
pub mod verify;

pub use correlators::{
    cmera_correlator, correlator_table, defect_matching_check, exact_correlator, BoundaryCondition, CTheta,
    CorrelatorTable, Geometry, Observable,
};
pub use defect_modes::{
    defect_correlator_mode_oracle, mode_function, mode_overlap_packet, second_family_obstruction, DefectParams,
    GaussianPacket, OracleWeight,
};
pub use error::{Error, Result};
pub use kernels::{envelope_law, kernel_value, minimal_update_envelope, KernelFn};
pub use flow::{alpha_fixed, alpha_flow, AlphaFn, FlowTime};
pub use profiles::{g_momentum, g_position, Profile, ProfileKind, Scale};
pub use lattice::{LatticeBoundary, LatticeModel, OracleConfig};
pub use quadrature::QuadratureSpec;
pub use verify::{run_suite, Check, Suite, SuiteReport};
pub use special::exp_integral_ei;
pub use transforms::{correlator_phi_diff_full, correlator_pi_full, cosine_transform, IrClass, MomentumKernel};
