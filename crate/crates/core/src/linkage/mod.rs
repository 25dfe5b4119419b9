//! Generic planar constraint model and solver.

mod model;
mod solver;

pub use model::{
    Body, BodyKind, Configuration, Constraint, ConstraintDoc, ConstraintKind, Mechanism,
    MechanismDoc, Node, NodeDoc, Trajectory,
};
pub use solver::{
    assemble, assemble_with, jacobian, mobility_check, residuals, sweep, sweep_with, SolverOptions,
};
