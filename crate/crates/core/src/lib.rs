//! Triangle census, balance inference and graphon simulation for signed networks.

pub mod bootstrap;
pub mod census;
pub mod graph;
pub mod graphon;
pub mod harness;
pub mod inference;
pub mod rng;

pub use census::{triangle_profile, Target, TriangleCensus, TriangleProfile};
pub use graph::{GraphError, Sign, SignedAdjacency};
pub use graphon::{GraphonSpec, PopulationMoments};
pub use inference::{
    balance_test, confidence_interval, CiOptions, InferenceError, InferenceReport, Method,
    TestOptions,
};
pub use rng::StreamRng;
