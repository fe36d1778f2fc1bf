use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Boundary datum does not integrate to one over its period.
    #[error("compatibility violated: integral of boundary datum is {integral:.17e}, expected 1")]
    Compatibility { integral: f64 },

    #[error("grid of {n} points aliases a series of degree {degree} (need n >= 2 * degree)")]
    Aliasing { n: usize, degree: usize },

    /// `f'` vanishes (numerically) somewhere on the boundary grid.
    #[error("degenerate map: |f'| = {modulus:.3e} at theta = {theta:.6}")]
    Degenerate { modulus: f64, theta: f64 },

    #[error("perimeters differ ({l1:.17e} vs {l2:.17e}); use the unequal-perimeter check instead")]
    PerimeterMismatch { l1: f64, l2: f64 },

    #[error("{path}:{line}: {msg}")]
    Parse { path: String, line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
