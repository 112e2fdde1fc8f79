use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A structural parameter of an exchange matrix is not strictly positive.
    #[error("parameter {name} must be positive, got {value}")]
    NonPositive { name: &'static str, value: String },

    /// The defining identities pp' = qq' = rr' = 4, pqr = p'q'r' fail.
    #[error("B-invariant constraint violated: {0}")]
    ConstraintViolation(String),

    /// A mutation index repeats its predecessor, or a sequence is not reduced.
    #[error("sequence is not reduced: index {index} repeats at position {position}")]
    NonReduced { index: u8, position: usize },

    /// A mutation index is outside {1,2,3}.
    #[error("mutation index {0} out of range 1..=3")]
    IndexOutOfRange(u8),

    /// A skew-symmetrizer ratio d_i/d_j is not the square of a rational, so
    /// the modified basis has irrational coordinates.
    #[error("skew-symmetrizer ratio d{i}/d{j} = {ratio} is not a rational square")]
    IrrationalRatio { i: usize, j: usize, ratio: String },

    /// Conversion to the modified basis produced a non-integer coordinate.
    /// This indicates a bug: the theory guarantees integrality.
    #[error("modified coordinate ({i},{j}) = {value} is not an integer")]
    NonIntegralCoordinate { i: usize, j: usize, value: String },

    /// Two walks do not form an admissible pair (trunk/trunk or branch/branch).
    #[error("walks {w} and {u} are not admissible")]
    NotAdmissible { w: String, u: String },

    /// A c- or g-vector triple failed to be a basis. Must never fire.
    #[error("degenerate vector triple at walk {0}")]
    SingularTriple(String),

    /// Parameters outside the coprime parameterization of c-vectors.
    #[error("parameters ({eps}; {a}, {b}) are not in the c-vector parameter set")]
    InvalidParams { eps: i8, a: String, b: String },

    /// A vector with nonpositive coordinate sum was passed to the plane section.
    #[error("vector {0} has nonpositive coordinate sum, not in the open half space")]
    NotInHalfSpace(String),

    /// Malformed textual input (walk notation, vectors, matrix selectors).
    #[error("parse error: {0}")]
    Parse(String),
}
