use thiserror::Error;

/// Failures of mechanism definition and assembly.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinkageError {
    #[error("invalid mechanism definition: {0}")]
    Definition(String),
    #[error("no convergence at input {input} (residual max-norm {residual:e})")]
    NoConvergence { input: f64, residual: f64 },
    #[error("singular constraint Jacobian at input {input}")]
    SingularJacobian { input: f64 },
    #[error("malformed mechanism document: {0}")]
    Parse(String),
}

impl LinkageError {
    pub(crate) fn definition(msg: impl Into<String>) -> Self {
        LinkageError::Definition(msg.into())
    }

    /// True for failures of the numerical solve (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            LinkageError::NoConvergence { .. } | LinkageError::SingularJacobian { .. }
        )
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("degenerate line fit: {0}")]
    DegenerateFit(&'static str),
    #[error("node `{0}` missing from trajectory sample")]
    MissingNode(String),
    #[error("segment nodes `{0}` and `{1}` coincide")]
    CoincidentSegment(String, String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraspError {
    #[error("domain error: {0}")]
    Domain(&'static str),
    #[error("infeasible: 2·mu·Fn < G, no offset admits a stable pinch")]
    Infeasible,
    #[error("unbounded: sin(alpha) = 0, the torque term vanishes")]
    Unbounded,
    #[error("usage error: {0}")]
    Usage(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ContactError {
    #[error("domain error: {0}")]
    Domain(&'static str),
}
