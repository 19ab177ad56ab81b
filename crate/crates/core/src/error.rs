use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A design or model violates one of its structural invariants.
    #[error("invalid {what}: {reason}")]
    Invariant { what: &'static str, reason: String },

    /// The constrained stiffness operator is not positive definite.
    #[error("singular system: pivot {pivot:e} at free dof {dof} (node {node}, {component})")]
    Singular {
        dof: usize,
        node: usize,
        component: &'static str,
        pivot: f64,
    },

    /// A solve finished but its residual exceeds the acceptance bound.
    #[error("numeric failure: {0}")]
    Numeric(String),

    /// A least-squares fit has no unique solution.
    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    #[error("query ({x}, {phi}) outside grid bounds [{x_min}, {x_max}] x [{phi_min}, {phi_max}]")]
    OutOfBounds {
        x: f64,
        phi: f64,
        x_min: f64,
        x_max: f64,
        phi_min: f64,
        phi_max: f64,
    },

    #[error("axis {axis} is not strictly increasing at index {index}")]
    AxisNotMonotone { axis: &'static str, index: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("duplicate grid point at ({x}, {phi})")]
    DuplicatePoint { x: f64, phi: f64 },

    /// Surrogate anchors cannot be honoured simultaneously.
    #[error("infeasible fit: {0}")]
    InfeasibleFit(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn invariant(what: &'static str, reason: impl Into<String>) -> Self {
        Error::Invariant {
            what,
            reason: reason.into(),
        }
    }
}
