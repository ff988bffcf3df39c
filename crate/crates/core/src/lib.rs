//! Geometry engine for the real-amplitude subspace of one- and two-qubit
//! states.
//!
//! One-qubit states live on the Bloch Circle of radius ½ ([`bloch`]); pure
//! two-qubit states map into an annular toroid indexed by the entanglement
//! parameter `s` and the angles of the two reduced states ([`mapping`],
//! [`toroid`]). Maximally entangled states become torus knots on the bounding
//! surfaces.

pub mod angle;
pub mod bloch;
pub mod error;
pub mod gates;
pub mod mapping;
pub mod scene;
pub mod states;
pub mod toroid;
pub mod verify;

pub use angle::Angle;
pub use bloch::{
    bloch_scene, density_from_statepoint, measurement_probs, mix, rebase_density,
    statepoint_from_density, BasisAxis, BlochPoint, BlochScene,
};
pub use error::{GeoError, Result};
pub use gates::{apply_gate, apply_sequence, parse_sequence, trajectory, Gate, GateSequence};
pub use mapping::{
    chi0_from_s, knot_equivalent, maximally_entangled, params_from_state, state_from_params,
    ParamsOrKnot, KNOT_THRESHOLD,
};
pub use scene::{Position, Primitive, Scene};
pub use states::{
    entanglement_s, ket_from_angle, normalize_phase, partial_trace, radius_from_s, reduced_state,
    tensor_product, DensityMatrix, GeometricParams, KnotDescriptor, Qubit, QubitVector, Surface,
    TwoQubit,
};
pub use toroid::{knot_curve, statepoint_3d, toroid_scene, ToroidConfig};
