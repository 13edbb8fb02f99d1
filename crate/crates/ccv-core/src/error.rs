use thiserror::Error;

/// Errors produced by graph construction, voltage operations and the
/// family/census machinery.
#[derive(Debug, Error)]
pub enum CcvError {
    #[error("unknown dart id {0}")]
    UnknownDart(u32),
    #[error("unknown vertex id {0}")]
    UnknownVertex(u32),
    #[error("inv is not an involution at dart {0}")]
    BadInvolution(u32),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph has no cycle")]
    Forest,
    #[error("required edges contain a cycle")]
    RequiredEdgesCyclic,
    #[error("required edge {0} is a loop or semi-edge")]
    RequiredEdgeNotLink(u32),
    #[error("dart sequence is not a walk (break at position {0})")]
    NotAWalk(usize),
    #[error("graph order {order} exceeds bound {bound}")]
    BoundExceeded { order: usize, bound: usize },
    #[error("map is not an automorphism")]
    NotAnAutomorphism,
    #[error("labelled graph is not extendable: closed walk with ratio {num}/{den}")]
    NotExtendable { num: i64, den: i64, witness: Vec<u32> },
    #[error("iota value {m} at vertex {v} is not a multiple of the minimal index {min}")]
    BadIotaScale { v: u32, m: u64, min: u64 },
    #[error("lambda/iota ratio condition fails at dart {0}")]
    RatioViolated(u32),
    #[error("voltage inverse condition fails at dart {0}")]
    InverseVoltageViolated(u32),
    #[error("semi-edge voltage at dart {0} must satisfy 2*z = 0 mod lambda*iota")]
    BadSemiEdgeVoltage(u32),
    #[error("voltage assignment is not T-normalised (tree dart {0} has nonzero voltage)")]
    NotTNormalised(u32),
    #[error("spanning tree does not span the graph")]
    NotSpanning,
    #[error("{0} is not coprime to the group order {1}")]
    NotCoprime(u64, u64),
    #[error("fibre index {index} out of range for {what}")]
    IndexOutOfRange { what: &'static str, index: u64 },
    #[error("family index {0} out of range 1..=25")]
    UnknownFamily(u8),
    #[error("family {index} takes parameters ({arity}); got r={r:?}, s={s:?}")]
    WrongArity { index: u8, arity: &'static str, r: Option<i64>, s: Option<i64> },
    #[error("inadmissible parameters for family {index}: violated `{clause}`")]
    Inadmissible { index: u8, clause: String },
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("cover is not simple; graph6 output requires a simple graph")]
    NonSimpleCover,
    #[error("graph is not cubic at vertex {0}")]
    NotCubic(u32),
    #[error("graph is not simple")]
    NotSimple,
    #[error("subgraph does not match any of the shapes S1..S4")]
    NoSShape,
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, CcvError>;
