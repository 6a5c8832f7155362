use thiserror::Error;

/// Errors raised by the kernel and the layers above it.
///
/// Mathematical check *failures* (a residue that should vanish but does not)
/// are ordinary return values, not errors; `Error` covers shape problems,
/// signature mismatches and malformed input.
#[derive(Debug, Error)]
pub enum Error {
    #[error("elements belong to different generator tables")]
    SignatureMismatch,

    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),

    #[error("duplicate generator name `{0}`")]
    DuplicateGenerator(String),

    #[error("invalid generator name `{0}`: {1}")]
    BadGeneratorName(String, String),

    #[error(
        "generator `{name}` has degree {degree}, but algebra generators must have degree <= 0"
    )]
    PositiveDegree { name: String, degree: i64 },

    #[error("designated invertible `{0}` is not a polynomial in the degree-0 generators")]
    InvertibleNotBase(String),

    #[error("the imaginary unit is only available when the Gaussian field flag is set")]
    GaussianDisabled,

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("division by `{0}`, which is not a designated invertible unit")]
    NotInvertible(String),

    #[error(
        "expected a homogeneous element of degree {degree} and weight {weight}, found {found}"
    )]
    NotHomogeneous {
        degree: i64,
        weight: i64,
        found: String,
    },

    #[error("differential value for `{name}` must have degree {expected}, found {found}")]
    DegreeMismatch {
        name: String,
        expected: i64,
        found: String,
    },

    #[error("d\u{b2} != 0: on generator `{name}` the residue is {residue}")]
    SquareNotZero { name: String, residue: String },

    #[error("vector field values must be weight-0 and free of one-form symbols (offending generator `{0}`)")]
    NotVectorField(String),

    #[error("no exactness witness: degree + weight = 0 (the obstructed case)")]
    NoWitness,

    #[error("element is not closed: residue {0}")]
    NotClosed(String),

    #[error("point does not satisfy `{relation}` (evaluates to {value})")]
    PointOffLocus { relation: String, value: String },

    #[error("designated invertible `{name}` vanishes at the given point")]
    InvertibleVanishes { name: String },

    #[error("point assignment missing degree-0 generator `{0}`")]
    PointMissing(String),

    #[error("the 2-form is not strictly nondegenerate: {0}")]
    NotStrictlyNondegenerate(String),

    #[error("classical master equation fails: residue {0}")]
    MasterEquation(String),

    #[error("shape error: {0}")]
    Shape(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("model file error: {0}")]
    Model(String),
}

pub type Result<T> = std::result::Result<T, Error>;
