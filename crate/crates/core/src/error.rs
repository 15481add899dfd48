use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("variable universe mismatch: {left} vs {right} variables")]
    UniverseMismatch { left: usize, right: usize },

    #[error("variable index {index} out of range for {num_vars} variables")]
    VariableOutOfRange { index: usize, num_vars: usize },

    #[error("assignment has length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("spin value {0} is not +1 or -1")]
    InvalidSpin(i8),

    #[error("{what} size {size} exceeds cap {cap}")]
    CapExceeded { what: &'static str, size: u64, cap: u64 },

    #[error("replacement polynomial has degree {0}, at most 1 allowed")]
    ReplacementDegree(usize),

    #[error("substitution pair must name two distinct variables, got ({0}, {0})")]
    DegeneratePair(usize),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("color {color} out of range for palette of {colors}")]
    ColorOutOfRange { color: usize, colors: usize },

    #[error("at least 2 colors required, got {0}")]
    TooFewColors(usize),

    #[error("{colors} colors do not fit in {bits} bits")]
    PaletteTooLarge { colors: usize, bits: u32 },

    #[error("lagrange weight must be positive")]
    NonPositiveLambda,

    #[error("order reduction stalled at degree {0}")]
    ReductionStalled(usize),

    #[error("term order is not a permutation of the polynomial's terms: {0}")]
    InvalidTermOrder(String),

    #[error("gate references qubit {qubit} on a circuit of width {width}")]
    QubitOutOfRange { qubit: usize, width: usize },

    #[error("CX control and target coincide on qubit {0}")]
    DegenerateCx(usize),

    #[error("dimension mismatch: {expected} vs {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("ground set is empty")]
    EmptyGroundSet,

    #[error("degenerate spectrum: emax ({emax}) <= emin ({emin})")]
    DegenerateSpectrum { emin: f64, emax: f64 },

    #[error("parameter vectors have lengths {betas}/{gammas}, expected {layers}")]
    ParamLength { layers: usize, betas: usize, gammas: usize },

    #[error("arithmetic overflow while {0}")]
    Overflow(&'static str),
}
