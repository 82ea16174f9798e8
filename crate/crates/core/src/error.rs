use core::fmt;

/// Domain errors reported by the core routines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// `q` must be an odd prime power.
    NotOddPrimePower(u64),
    /// Field degree over the prime field exceeds [`crate::ffield::MAX_DEGREE`].
    DegreeTooLarge { q: u64, degree: usize },
    /// Inversion or order of the zero element.
    ZeroElement,
    /// An element of `F_q` where a generator of `F_{q^2}/F_q` was required.
    InSubfield,
    /// `divisor` does not divide `of`.
    NotADivisor { divisor: u64, of: u64 },
    /// Sieve decomposition with `ε ≤ 0`.
    NonPositiveEpsilon,
    /// Malformed divisor family for the sieving inequality.
    BadDivisorFamily(&'static str),
    /// Character-sum oracle requested above its field-size cap.
    OracleCap { q: u64, cap: u64 },
    /// Inconsistent argument.
    Invalid(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::NotOddPrimePower(q) => write!(f, "{q} is not an odd prime power"),
            Error::DegreeTooLarge { q, degree } => {
                write!(f, "F_{{q^2}} for q = {q} has degree {degree} over its prime field, too large")
            }
            Error::ZeroElement => f.write_str("operation undefined on the zero element"),
            Error::InSubfield => f.write_str("element lies in the subfield F_q"),
            Error::NotADivisor { divisor, of } => write!(f, "{divisor} does not divide {of}"),
            Error::NonPositiveEpsilon => f.write_str("sieve decomposition has epsilon <= 0"),
            Error::BadDivisorFamily(why) => write!(f, "malformed divisor family: {why}"),
            Error::OracleCap { q, cap } => write!(f, "q exceeds oracle cap ({q} > {cap})"),
            Error::Invalid(why) => f.write_str(why),
        }
    }
}

impl core::error::Error for Error {}
