use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    // group tables
    #[error("group table is not square or empty")]
    NotSquare,
    #[error("table entry {value} at ({row}, {col}) is out of range")]
    EntryOutOfRange { row: usize, col: usize, value: usize },
    #[error("group of order {order} exceeds the configured cap {cap}")]
    GroupTooLarge { order: usize, cap: usize },
    #[error("table is not associative at ({0}, {1}, {2})")]
    NotAssociative(usize, usize, usize),
    #[error("table has no two-sided identity")]
    NoIdentity,
    #[error("element {0} has no two-sided inverse")]
    NoInverse(usize),
    #[error("element index {0} out of range")]
    BadElement(usize),

    // commutative bases and actions
    #[error("codegree {index} is {value}, must be positive")]
    NonPositiveCodegree { index: usize, value: f64 },
    #[error("structure constants are not commutative at ({0}, {1})")]
    NotCommutative(usize, usize),
    #[error("structure constants are not associative at ({0}, {1}, {2})")]
    FusionNotAssociative(usize, usize, usize),
    #[error("basis element 0 is not a unit at index {0}")]
    FusionNoUnit(usize),
    #[error("form lambda(b_{0} b_{1}*) is not the Kronecker delta")]
    DegenerateForm(usize, usize),
    #[error("random combination has repeated eigenvalues after a re-draw")]
    RepeatedEigenvalues,
    #[error("diagonalization residual {0} exceeds tolerance")]
    DiagonalizationResidual(f64),
    #[error("{0} is not a permutation of the characters")]
    InvalidPermutation(String),
    #[error("permutations do not form a left action at ({0}, {1})")]
    NotHomomorphism(usize, usize),
    #[error("element {g} moves character {chi} to one with a different codegree")]
    CodegreeNotPreserved { g: usize, chi: usize },

    // cochains
    #[error("coboundary of a degree-{0} cochain is not supported")]
    UnsupportedDegree(usize),
    #[error("cochain is not a cocycle; violated at {0:?}")]
    NotACocycle(Vec<usize>),
    #[error("cochain value at {args:?} has a vanishing component")]
    ZeroValue { args: Vec<usize> },
    #[error("stabilizer of order {stabilizer} exceeds the search budget {budget}")]
    SearchBudgetExceeded { stabilizer: usize, budget: usize },
    #[error("cochains live over different groups, bases or actions")]
    BaseMismatch,
    #[error("coboundary value at {0:?} is not within tolerance of the unit subgroup")]
    NotOValued(Vec<usize>),
    #[error("unit subgroup invalid: {0}")]
    BadUnitSubgroup(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    // crossed algebras
    #[error("star-compatibility cochain admits no trivializing 1-cochain")]
    StarIncompatible,
    #[error("elements belong to different algebras")]
    OwnerMismatch,
    #[error("algebra fails axioms: {0}")]
    AxiomsFail(String),
    #[error("character {chi} is not fixed by element {g}")]
    NotFixed { g: usize, chi: usize },
    #[error("basis index ({0}, {1}) is not part of the algebra")]
    NotInBasis(usize, usize),

    // Verlinde
    #[error("product of the group labels is not the identity")]
    ProductNotIdentity,
    #[error("element at position {0} does not lie in its declared component")]
    WrongComponent(usize),
    #[error("twist scalar has a vanishing denominator")]
    ZeroDenominator,
    #[error("basis elements {0} and {1} are not orthogonal")]
    NotOrthogonal(usize, usize),
    #[error("basis does not span: {0}")]
    NotSpanning(String),
    #[error("instance exceeds limits: {0}")]
    InstanceTooLarge(String),

    // crossed S-matrices
    #[error("dimension data inconsistent: {0}")]
    DimensionMismatch(String),
    #[error("no S-matrix data for sector {0}")]
    MissingSector(usize),

    // files
    #[error("malformed input: {0}")]
    Format(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Errors caused by unparseable or structurally malformed input, as opposed to
    /// well-formed data that violates a mathematical condition.
    pub fn is_malformed_input(&self) -> bool {
        matches!(
            self,
            Error::Format(_)
                | Error::Json(_)
                | Error::Io(_)
                | Error::NotSquare
                | Error::EntryOutOfRange { .. }
                | Error::ShapeMismatch(_)
                | Error::BadElement(_)
        )
    }
}
