//! Stabilizer simulation of CNOT+SWAP ("work-sharing") syndrome schedules.

pub mod circuit;
pub mod codes;
pub mod decoder;
pub mod dense;
pub mod error;
pub mod experiment;
pub mod frame;
pub mod layout;
pub mod memory;
pub mod noise;
pub mod pauli;
pub mod scalar;
pub mod tableau;
pub mod verify;

pub use circuit::{Basis, Circuit, GateKind, GateOp, Moment, Role, RoleKind};
pub use dense::{circuit_unitary, states_equal_up_to_phase, DenseState, DenseUnitary};
pub use error::{Error, Result};
pub use layout::{connectivity_graph, formula_counts, AccessibilityReport, Layout};
pub use pauli::{Pauli, PauliString, Sign};
pub use scalar::Real;
pub use tableau::{stabilizer_groups_equal, MeasurementRecord, StabilizerTableau};

pub type DenseState64 = DenseState<f64>;
pub type DenseState32 = DenseState<f32>;
pub type DenseUnitary64 = DenseUnitary<f64>;
pub type DenseUnitary32 = DenseUnitary<f32>;
pub type Layout64 = Layout<f64>;
pub type Layout32 = Layout<f32>;
