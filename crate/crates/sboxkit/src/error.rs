use core::fmt;

/// Errors reported by table constructors, transforms and search drivers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Error {
    /// A bit sequence whose length is not a power of two.
    NotPowerOfTwo { len: usize },
    /// A sequence of the wrong length for the declared dimensions.
    WrongLength { expected: usize, got: usize },
    /// Variable count outside the supported range.
    VariableCount { n: usize, max: usize },
    /// An output mask not representable in `m` bits.
    MaskOutOfRange { mask: u32, limit: u32 },
    /// A table entry not representable in `m` bits.
    EntryOutOfRange { index: usize, value: u32, limit: u32 },
    /// Mixing matrix and S-box dimensions disagree.
    DimensionMismatch,
    /// The operation is defined only for n = m tables.
    NotSquare { n: usize, m: usize },
    /// The operation requires a bijective S-box.
    NotBijective,
    /// The requested size is outside this operation's supported range.
    UnsupportedSize { n: usize, max: usize },
    /// A search configuration field is out of range.
    InvalidConfig(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Error::NotPowerOfTwo { len } => {
                write!(f, "sequence length {len} is not a power of two")
            }
            Error::WrongLength { expected, got } => {
                write!(f, "expected {expected} entries, got {got}")
            }
            Error::VariableCount { n, max } => {
                write!(f, "variable count {n} outside supported range 1..={max}")
            }
            Error::MaskOutOfRange { mask, limit } => {
                write!(f, "mask {mask:#x} out of range (must be < {limit:#x})")
            }
            Error::EntryOutOfRange { index, value, limit } => {
                write!(f, "entry {value} at index {index} out of range (must be < {limit})")
            }
            Error::DimensionMismatch => write!(f, "matrix and table dimensions disagree"),
            Error::NotSquare { n, m } => {
                write!(f, "operation requires n = m, got {n}x{m}")
            }
            Error::NotBijective => write!(f, "S-box is not bijective"),
            Error::UnsupportedSize { n, max } => {
                write!(f, "size {n} unsupported here (max {max}); use genetic mode for larger boxes")
            }
            Error::InvalidConfig(what) => write!(f, "invalid configuration: {what}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
