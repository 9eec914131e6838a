use thiserror::Error;

/// Errors raised by the combinatorial and homological constructions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("duplicate element `{0}`")]
    DuplicateElement(String),
    #[error("order is not reflexive: missing {0} <= {0}")]
    NotReflexive(String),
    #[error("order is not antisymmetric: {0} <= {1} and {1} <= {0}")]
    NotAntisymmetric(String, String),
    #[error("order is not transitive: {0} <= {1} <= {2} but not {0} <= {2}")]
    NotTransitive(String, String, String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("integer overflow in exact matrix arithmetic")]
    Overflow,

    #[error("size {0} is outside the supported range {1}..={2}")]
    SizeOutOfRange(usize, usize, usize),
    #[error("trees have different sizes ({0} and {1})")]
    SizeMismatch(usize, usize),
    #[error("trees do not form an interval: S is not below T in the Tamari order")]
    NotAnInterval,

    #[error("pair ({0}, {1}) is outside 1..={2}")]
    PairOutOfRange(usize, usize, usize),
    #[error("reflexive pair ({0}, {0}) is not allowed")]
    ReflexivePair(usize),
    #[error("closure breaks antisymmetry: both {0} ◁ {1} and {1} ◁ {0}")]
    ClosureConflict(usize, usize),
    #[error("interval-poset is not {0}")]
    WrongKind(&'static str),

    #[error("edge [{0}, {1}] is invalid for {2} vertices")]
    BadEdge(usize, usize, usize),
    #[error("edges [{0}, {1}] and [{2}, {3}] cross")]
    Crossing(usize, usize, usize, usize),
    #[error("edge [{0}, {1}] closes a cycle")]
    Cycle(usize, usize),
    #[error("vertex {0} is disconnected from vertex 1")]
    Disconnected(usize),

    #[error("representation is not thin; compare dimension vectors instead")]
    NotThin,
    #[error("complex term in degree {0} is not a sum of projectives")]
    NotProjective(i32),
    #[error("no morphism {what} from summand at `{from}` to summand at `{to}`")]
    NoMorphism {
        what: &'static str,
        from: String,
        to: String,
    },
    #[error("d∘d ≠ 0 at degree {degree}, element `{element}`")]
    NotAComplex { degree: i32, element: String },
    #[error("representation maps do not commute between `{0}` and `{1}`")]
    NotCommutative(String, String),
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
