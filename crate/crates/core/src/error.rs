use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Everything that can go wrong in the simulator and its pipelines.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A gate or measurement addressed a qubit outside the register.
    InvalidQubit { qubit: usize, n_qubits: usize },
    /// A two-qubit gate addressed the same qubit twice.
    DuplicateQubit(usize),
    /// A measurement was handed to a unitary code path.
    MeasureInUnitaryPath,
    /// A post-selected or projected branch has (numerically) zero weight.
    ImpossibleBranch { probability: f64 },
    /// A vector or list had the wrong length.
    LengthMismatch { expected: usize, found: usize },
    /// The requested S_z sector does not exist for this register size.
    InvalidSector { n_qubits: usize, sz: f64 },
    /// Two objects disagree on register size.
    SizeMismatch { expected: usize, found: usize },
    /// Register too large for the requested dense operation.
    SizeOverflow { n_qubits: usize, limit: usize },
    /// Sampling was asked for zero shots.
    ZeroShots,
    /// A circuit without measurements was sampled.
    Unmeasured,
    /// A measurement slot was declared twice.
    DuplicateSlot(usize),
    /// Counting plan failed validation.
    InvalidPlan(String),
    /// A compiled circuit exceeded its two-qubit gate budget.
    BudgetExceeded { budget: usize, found: usize },
    /// The fused CPHASE/XY identity could not be closed by RZ corrections.
    CorrectionSolve { distance: f64 },
    /// A readout-error block has p00 + p11 = 1 and cannot be inverted.
    SingularReadout { qubit: usize },
    /// A probability parameter left [0, 1].
    InvalidProbability(f64),
    /// An FCS theta grid is not uniform over [0, 2π).
    NonUniformGrid,
    /// Any other argument outside an operation's domain.
    InvalidArgument(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidQubit { qubit, n_qubits } => {
                write!(f, "qubit index {qubit} out of range for {n_qubits} qubits")
            }
            Error::DuplicateQubit(q) => write!(f, "qubit {q} used twice in one gate"),
            Error::MeasureInUnitaryPath => write!(f, "MEASURE is not a unitary gate"),
            Error::ImpossibleBranch { probability } => {
                write!(f, "impossible branch (probability {probability:e})")
            }
            Error::LengthMismatch { expected, found } => {
                write!(f, "length mismatch: expected {expected}, found {found}")
            }
            Error::InvalidSector { n_qubits, sz } => {
                write!(f, "S_z = {sz} is not a sector of {n_qubits} qubits")
            }
            Error::SizeMismatch { expected, found } => {
                write!(f, "register size mismatch: expected {expected}, found {found}")
            }
            Error::SizeOverflow { n_qubits, limit } => {
                write!(f, "{n_qubits} qubits exceeds the limit of {limit}")
            }
            Error::ZeroShots => write!(f, "number of shots must be positive"),
            Error::Unmeasured => write!(f, "circuit has no measurements"),
            Error::DuplicateSlot(s) => write!(f, "classical slot {s} written twice"),
            Error::InvalidPlan(msg) => write!(f, "invalid counting plan: {msg}"),
            Error::BudgetExceeded { budget, found } => write!(
                f,
                "two-qubit gate budget exceeded: {found} gates, budget {budget}"
            ),
            Error::CorrectionSolve { distance } => write!(
                f,
                "no RZ correction closes the CPHASE/XY identity (residual {distance:e})"
            ),
            Error::SingularReadout { qubit } => {
                write!(f, "readout block of qubit {qubit} is singular (p00 + p11 = 1)")
            }
            Error::InvalidProbability(p) => write!(f, "probability {p} outside [0, 1]"),
            Error::NonUniformGrid => write!(f, "theta grid is not uniform over [0, 2π)"),
            Error::InvalidArgument(msg) => write!(f, "{msg}"),
        }
    }
}

impl core::error::Error for Error {}
