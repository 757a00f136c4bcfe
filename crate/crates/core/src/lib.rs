//! Numerical toolkit for well-posedness of finite-dimensional vector
//! optimization problems ordered by a polyhedral cone.

pub mod analysis;
pub mod cone;
pub mod config;
pub mod diagnostics;
pub mod diameter;
pub mod distance;
pub mod error;
pub mod expr;
pub mod lattice;
pub mod linalg;
pub mod perturb;
pub mod problem;
pub mod registry;
pub mod report;

pub use cone::{DualBase, OrderingCone};
pub use distance::{oriented_distance, project_neg_cone, OrientedDistanceResult};
pub use error::{Error, Result};
pub use expr::Expr;
pub use lattice::{BoxDomain, Lattice};
pub use problem::{
    function_distance, level_set, perturb, scalarize_linear, scalarize_oriented, FunctionDistance,
    MetricParams, PerturbationTerm, PointSet, ScalarProblem, VectorProblem,
};
