use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("unreachable node `{0}`: graph is disconnected")]
    UnreachableNode(String),

    #[error("instance infeasible: {0}")]
    Infeasible(String),

    #[error("no internal nodes: penalty is undefined")]
    NoInternalNodes,

    #[error("polynomials use different variable registries")]
    RegistryMismatch,

    #[error("assignment is missing variable with index {0}")]
    MissingVariable(usize),

    #[error("cannot synthesize a phase gadget for an empty term")]
    EmptyTerm,

    #[error("terms do not form a strict subset chain")]
    ChainViolation,

    #[error("ansatz needs at least one layer")]
    NoLayers,

    #[error("circuit has unbound parameter {0}")]
    UnboundParameter(String),

    #[error("qasm parse error at line {line}: {message}")]
    QasmParse { line: usize, message: String },

    #[error("instance too large for simulation: {width} qubits exceeds cap {cap}")]
    WidthCap { width: usize, cap: usize },

    #[error("too many qubits for exhaustive search: {0}")]
    TooManyQubits(usize),

    #[error("bitstring length {got} does not match qubit count {want}")]
    WidthMismatch { got: usize, want: usize },

    #[error("sample set is empty")]
    EmptySamples,

    #[error("run record has no iterations")]
    EmptyRecord,

    #[error("normalized distance is undefined for optimal cost 0")]
    UndefinedNormalization,

    #[error("poly parse error at line {line}: {message}")]
    PolyParse { line: usize, message: String },

    #[error("oracle disagreement: {0}")]
    OracleGate(String),
}

pub type Result<T> = std::result::Result<T, Error>;
