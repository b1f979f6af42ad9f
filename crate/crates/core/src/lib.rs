//! Social power dynamics on influence networks.
//!
//! A group with constant relative interaction matrix `C` (row-stochastic,
//! zero diagonal) discusses an issue with influence matrix
//! `W(x) = diag(x) + (I − diag(x)) C`, where `x` are the self-weights. In the
//! single-timescale model the self-weights are updated after every opinion
//! step, `x(t+1) = W(x(t))ᵀ x(t)`; in the original DeGroot-Friedkin model
//! they are updated once per issue, after opinions reach consensus.
//!
//! * [`netcore`] validates `C` and classifies the structure of its digraph.
//! * [`spectral`] computes eigenvector centralities and `W(x)`.
//! * [`dynamics`] holds both update maps and the trajectory engine.
//! * [`equilibria`] solves and predicts limits and compares the models.
//! * [`io`] reads network files, builds canonical networks and writes CSV.

pub mod dynamics;
pub mod equilibria;
pub mod error;
pub mod io;
pub mod linalg;
pub mod netcore;
pub mod spectral;

pub use dynamics::{
    df_step, simulate, sink_power, st_df_step, st_orbit, DfMap, Model, SelfWeightVector,
    SimulationOptions, Status, Trajectory,
};
pub use equilibria::{
    assemble_multisink_equilibrium, compare_models, fixed_point_residual, predict_limit,
    solve_interior_equilibrium, two_node_equilibrium, AssembledEquilibrium, ComparisonReport,
    EquilibriumPrediction, Prediction, Regime,
};
pub use error::{Error, Result};
pub use linalg::SquareMatrix;
pub use netcore::{
    classify, globally_reachable_set, star_center, strongly_connected_components, NetworkStructure,
    NodeId, RelativeInteractionMatrix, StructureKind,
};
pub use spectral::{centrality_profile, dominant_left_eigenvector, influence_matrix, CentralityProfile};
