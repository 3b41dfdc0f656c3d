use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MlpError {
    #[error("not a discriminant ({0} must be positive)")]
    NonPositiveDiscriminant(i64),

    #[error("not a discriminant ({disc} \u{2261} {residue} mod 4)")]
    InvalidDiscriminant { disc: i64, residue: i64 },

    #[error("invalid weight {0}: only even weights k <= 0 are supported")]
    InvalidWeight(i64),

    #[error("form [{a},{b},{c}] has a = b = 0 and defines no geodesic")]
    DegenerateForm { a: String, b: String, c: String },

    #[error("point lies outside the capped fundamental region")]
    OutOfRegion,

    #[error("point is not in the upper half-plane")]
    OutOfDomain,

    #[error("cap height must lie strictly above every semicircle and above i")]
    CapTooLow,

    #[error("basis index {index} out of range for a space of dimension {dimension}")]
    BasisIndex { index: usize, dimension: usize },
}

impl MlpError {
    /// True for both discriminant variants.
    pub fn is_discriminant(&self) -> bool {
        matches!(
            self,
            MlpError::NonPositiveDiscriminant(_) | MlpError::InvalidDiscriminant { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, MlpError>;
