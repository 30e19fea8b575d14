//! Exact analysis of the two-leader topology game on undirected follower
//! graphs: containment steady states, the zero-sum outcome matrix, its
//! security strategies and pure Nash equilibria, the `k = 1` structural
//! criteria, and an RK4 simulator that cross-checks the exact limits.

pub mod cli;
pub mod containment;
pub mod exact;
pub mod game;
pub mod graph;
pub mod output;
pub mod reconstruct;
pub mod sim;
pub mod verify;

pub use containment::{ConvexWeights, LeaderLinks, LeaderStates};
pub use exact::IntegerMatrix;
pub use game::{GameReport, OutcomeMatrix, Strategy};
pub use graph::{Graph, GraphKind};
