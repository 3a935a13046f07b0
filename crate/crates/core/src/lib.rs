//! Extremal-index analysis of random-walk samplers on graphs with
//! bivariate Pareto degree correlations.

pub mod error;
pub mod estimators;
pub mod generate;
pub mod graph;
pub mod model;
pub mod samplers;
pub mod theory;

pub use error::{Error, Result};
pub use graph::{DegreeSequence, Graph, GraphStats, LoadedGraph};
pub use model::{DegreeModelMarginals, JointDegreeDensity, JointDegreeModel, NodeDegreeTable};
pub use samplers::{SampleTrace, SamplerConfig, SamplerKind};
