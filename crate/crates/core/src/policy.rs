//! Numeric tolerances shared by the library, the tests and the CLI.

/// Every tolerance used for validation and reporting lives here so that the
/// command line and the test suites agree on what "equal" means.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericPolicy {
    /// Max-abs deviation from the conjugate transpose accepted for states.
    pub hermiticity: f64,
    /// Accepted deviation of a state's trace from one.
    pub trace: f64,
    /// Smallest eigenvalue a valid state may have.
    pub min_eigenvalue: f64,
    /// Unitarity residual `‖UU† − I‖_max`.
    pub unitarity: f64,
    /// Trace-preservation residual `‖ΣK†K − I‖_max`.
    pub completeness: f64,
    /// Orthonormality residual of a qubit basis.
    pub orthonormality: f64,
    /// Hermiticity accepted by the eigensolver.
    pub eig_hermiticity: f64,
    /// Eigenvalues below this are treated as zero before taking logarithms.
    pub eigenvalue_clamp: f64,
    /// Tiny negative correlation values are clamped to zero below this.
    pub negative_clamp: f64,
}

impl NumericPolicy {
    pub const DEFAULT: NumericPolicy = NumericPolicy {
        hermiticity: 1e-12,
        trace: 1e-12,
        min_eigenvalue: -1e-10,
        unitarity: 1e-12,
        completeness: 1e-12,
        orthonormality: 1e-12,
        eig_hermiticity: 1e-10,
        eigenvalue_clamp: 1e-10,
        negative_clamp: 1e-9,
    };
}

impl Default for NumericPolicy {
    fn default() -> Self {
        Self::DEFAULT
    }
}

pub const POLICY: NumericPolicy = NumericPolicy::DEFAULT;
