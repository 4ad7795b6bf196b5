use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// Errors shared by every pipeline stage.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// Operand shapes do not fit the operation.
    DimensionMismatch {
        op: &'static str,
        expected: usize,
        found: usize,
    },
    /// Structurally broken diagram or tangle input.
    Malformed { reason: String, arcs: Vec<u32> },
    /// The operation needs every open strand to run from a bottom slot to a top slot.
    NotBraidLike,
    /// `T(1/0)` does not have one-dimensional reduced homology.
    Inadmissible { closure_dim: usize },
    /// A diagram would exceed the configured crossing cap.
    ResourceCap { crossings: usize, cap: usize },
    /// Window bounds out of order or otherwise unusable.
    InvalidWindow { n: i64, m: i64 },
    /// Growth at the top of the window is not one cell per step.
    UnstableTop { level: i64 },
    /// A chain map or reduction was paired with the wrong complex.
    MismatchedComplexes,
    /// The widest window allowed by the cap never gave enough agreeing
    /// stable windows. `partial` is the last table seen.
    Unstabilized {
        n: i64,
        m: i64,
        agreements: usize,
        partial: Vec<((i32, i32), usize)>,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { op, expected, found } => {
                write!(f, "{op}: dimension mismatch (expected {expected}, found {found})")
            }
            Error::Malformed { reason, arcs } => {
                write!(f, "malformed diagram: {reason}")?;
                if !arcs.is_empty() {
                    write!(f, " (arcs")?;
                    for a in arcs {
                        write!(f, " {a}")?;
                    }
                    write!(f, ")")?;
                }
                Ok(())
            }
            Error::NotBraidLike => write!(f, "tangle is not braid-like"),
            Error::Inadmissible { closure_dim } => write!(
                f,
                "T(1/0) has reduced homology of dimension {closure_dim}, expected 1"
            ),
            Error::ResourceCap { crossings, cap } => {
                write!(f, "diagram with {crossings} crossings exceeds the cap of {cap}")
            }
            Error::InvalidWindow { n, m } => write!(f, "invalid window [{n}, {m}]"),
            Error::UnstableTop { level } => {
                write!(f, "growth at level {level} is not a single cell; widen the window")
            }
            Error::MismatchedComplexes => write!(f, "map and complexes do not match"),
            Error::Unstabilized { n, m, agreements, .. } => write!(
                f,
                "kappa did not stabilize by window [{n}, {m}] ({agreements} agreeing windows)"
            ),
        }
    }
}

#[cfg(feature = "std")]
extern crate std;
#[cfg(feature = "std")]
impl std::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
