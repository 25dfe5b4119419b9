//! Planar linkage kinematics and grasp statics for straight-line,
//! parallel-pinch grippers.
//!
//! * [`linkage`]: nodes + scalar constraints, damped Newton assembly and
//!   continuation sweeps.
//! * [`mechanisms`]: builders for the Peaucellier inversor, the
//!   semi-Peaucellier slide-bar variant, (double) parallelograms and a planar
//!   finger that composes them.
//! * [`analysis`]: straightness, orthogonality and orientation-drift metrics.
//! * [`grasp`]: friction-cone-with-torque model of a two-finger parallel pinch.
//! * [`contact`]: contact forces of a two-phalanx underactuated finger.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod cli;
pub mod contact;
pub mod error;
pub mod geometry;
pub mod grasp;
pub mod linkage;
pub mod mechanisms;
pub mod output;
pub mod verify;

pub use error::{AnalysisError, ContactError, GraspError, LinkageError};
pub use geometry::Point2;
