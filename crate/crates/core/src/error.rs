use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    /// The two points coincide and the kernel is singular.
    #[error("singular kernel: the two points coincide")]
    Singular,

    /// Both points have the same modulus; the radial series has ratio 1 and
    /// no usable tail bound.
    #[error("coincident moduli |x| = |x'| = {radius}: the radial expansion does not converge")]
    CoincidentModulus { radius: f64 },

    #[error("nu = {nu} is within {exclusion} of the integer {nearest}; evaluate the residue instead")]
    NearIntegerNu { nu: f64, nearest: u32, exclusion: f64 },

    #[error("representation is only defined for Z = 1, got Z = {0}")]
    UnsupportedCharge(u32),

    #[error("no convergence: estimated error {est_error:e} exceeds tolerance {tol:e} after {intervals} intervals")]
    NonConvergence {
        est_error: f64,
        tol: f64,
        intervals: usize,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for failures of a numerical procedure, as opposed to invalid input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NonConvergence { .. })
    }
}
