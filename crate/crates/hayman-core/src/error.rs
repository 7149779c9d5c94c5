use core::fmt;

/// Errors from the exact arithmetic kernel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    ZeroPolynomial,
    ZeroDenominator,
    DivisionByZero,
    ZeroFunction,
    PoleAtPoint,
}

impl fmt::Display for AlgebraError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraError::ZeroPolynomial => write!(f, "zero polynomial not allowed here"),
            AlgebraError::ZeroDenominator => write!(f, "zero denominator"),
            AlgebraError::DivisionByZero => write!(f, "division by the zero rational function"),
            AlgebraError::ZeroFunction => write!(f, "zero rational function not allowed here"),
            AlgebraError::PoleAtPoint => write!(f, "coefficient has a pole at the requested point"),
        }
    }
}

/// Errors from the numeric series verifier.
#[derive(Debug, Clone, PartialEq)]
pub enum SeriesError {
    PoleAtBasePoint,
    ZeroInitialValue,
    TruncationDominated { radius_index: usize },
    AllPointsExcluded,
    NotEnoughRadii,
}

impl fmt::Display for SeriesError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeriesError::PoleAtBasePoint => write!(f, "a coefficient has a pole at the base point"),
            SeriesError::ZeroInitialValue => {
                write!(f, "w(z0) = 0 makes the series recurrence singular")
            }
            SeriesError::TruncationDominated { radius_index } => write!(
                f,
                "maximal term hits the truncation order at radius #{}; increase N",
                radius_index
            ),
            SeriesError::AllPointsExcluded => write!(f, "all grid points excluded"),
            SeriesError::NotEnoughRadii => write!(f, "need at least 3 usable radii"),
        }
    }
}
