use core::fmt;

/// Errors raised by operator and certification routines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// The leading coefficient `a20` of the principal symbol is zero.
    ZeroLeading,
    /// The characteristic polynomial has no rational roots.
    NoRationalRoots,
    /// The characteristic root is repeated (`2 a20 w + a11 = 0`).
    NotSimpleRoot,
    /// The supplied value is not a root of the characteristic polynomial.
    NotARoot,
    /// A polynomial exceeds the total degree an operation supports.
    DegreeTooHigh { found: i64, max: i64 },
    /// The operation needs the canonical hyperbolic symbol `(1, 0, -1)`.
    NotCanonical,
    /// A composition of first-order factors has no second-order part.
    NotSecondOrder,
    /// A quantifier-free formula was evaluated outside its sign assumption.
    PreconditionViolated(&'static str),
    /// A numeric parameter is outside its allowed range.
    InvalidParameter(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ZeroLeading => f.write_str("leading coefficient a20 is zero"),
            Error::NoRationalRoots => {
                f.write_str("characteristic polynomial has no rational roots")
            }
            Error::NotSimpleRoot => f.write_str("characteristic root is not simple"),
            Error::NotARoot => f.write_str("value is not a characteristic root"),
            Error::DegreeTooHigh { found, max } => {
                write!(f, "total degree {found} exceeds supported maximum {max}")
            }
            Error::NotCanonical => f.write_str("operator symbol is not (1, 0, -1)"),
            Error::NotSecondOrder => f.write_str("composition has no second-order part"),
            Error::PreconditionViolated(what) => write!(f, "precondition violated: {what}"),
            Error::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
        }
    }
}

impl core::error::Error for Error {}
