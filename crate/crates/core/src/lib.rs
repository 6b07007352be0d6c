//! Two-terminal reliability of undirected binary-state networks.
//!
//! * [`net_model`]: networks, the network file format, assignment probabilities.
//! * [`traversal`]: layered connectivity search, layer-cuts, super-cut selection.
//! * [`enumeration`]: binary-addition enumeration, superfamilies, exact reliability.
//! * [`estimators`]: crude Monte Carlo, BAT-MCS and cBAT-MCS.
//! * [`generate`]: seeded random test networks.
//!
//! All probability arithmetic is generic over [`Probability`]; the aliases
//! below fix the common scalar choices.

pub mod enumeration;
pub mod error;
pub mod estimators;
pub mod generate;
pub mod net_model;
pub mod scalar;
pub mod traversal;

pub use enumeration::{
    bat_step, conditional_reliability, exact_reliability, superfamily, superfamily_nonzero,
    BatCursor, Superfamily,
};
pub use error::{Error, Result};
pub use estimators::{
    allocate_budget, bat_mcs, cbat_mcs, crude_mcs, normalization_factor, required_sample_size,
    sample_state, variance_scale, BudgetAllocation, Estimate, Method, RandomStream, StratifiedPlan,
};
pub use net_model::{
    canonical_bridge, parse_network, ArcId, Network, PartialAssignment, StateVector,
};
pub use scalar::{Probability, Rational};
pub use traversal::{
    compute_layers, find_layer_cuts, plsa_connected, select_super_cut, LayerCut, LayerDecomposition,
};

pub type Network64 = Network<f64>;
pub type Network32 = Network<f32>;
pub type RationalNetwork = Network<Rational>;

pub type Estimate64 = Estimate<f64>;
pub type Estimate32 = Estimate<f32>;
pub type RationalEstimate = Estimate<Rational>;
