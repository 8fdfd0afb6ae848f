use crate::state_engine::linalg::{eigensystem_unchecked, eigenvalues_unchecked, CMatrix};
use crate::error::Result;
use crate::policy::POLICY;
use crate::state_engine::{marginal, Bipartition, DensityMatrix};

/// `-Σ λ log₂ λ` over eigenvalues clamped to `[0, 1]`; eigenvalues below the
/// policy clamp count as zero.
pub fn entropy_of_spectrum(values: &[f64]) -> f64 {
    values
        .iter()
        .map(|&l| l.clamp(0.0, 1.0))
        .filter(|&l| l > POLICY.eigenvalue_clamp)
        .map(|l| -l * l.log2())
        .sum()
}

/// Entropy of a Hermitian positive matrix of unit trace.
pub(crate) fn matrix_entropy(m: &CMatrix) -> f64 {
    entropy_of_spectrum(&eigenvalues_unchecked(m))
}

/// Von Neumann entropy in bits.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    matrix_entropy(rho.matrix())
}

/// `S(side one) + S(side two) − S(whole)` in bits.
pub fn mutual_information(rho: &DensityMatrix, part: &Bipartition) -> Result<f64> {
    let one: Vec<&str> = part.side_one().iter().map(String::as_str).collect();
    let two: Vec<&str> = part.side_two().iter().map(String::as_str).collect();
    let s1 = von_neumann_entropy(&marginal(rho, &one)?);
    let s2 = von_neumann_entropy(&marginal(rho, &two)?);
    Ok(s1 + s2 - von_neumann_entropy(rho))
}

/// Outcome of a relative entropy evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelativeEntropy {
    /// `S(ρ‖σ)` in bits, `+∞` when the support condition fails.
    pub bits: f64,
    /// Weight of `ρ` on the kernel of `σ`.
    pub leaked_weight: f64,
}

impl RelativeEntropy {
    pub fn is_finite(&self) -> bool {
        self.bits.is_finite()
    }
}

/// `tr ρ log₂ ρ − tr ρ log₂ σ`.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<RelativeEntropy> {
    if rho.dim() != sigma.dim() {
        return Err(crate::Error::DimensionMismatch {
            expected: rho.dim(),
            found: sigma.dim(),
        });
    }
    Ok(relative_entropy_matrices(rho.matrix(), sigma.matrix()))
}

pub(crate) fn relative_entropy_matrices(rho: &CMatrix, sigma: &CMatrix) -> RelativeEntropy {
    let eig = eigensystem_unchecked(sigma);
    let rotated = eig.vectors.adjoint() * rho * &eig.vectors;
    let mut cross = 0.0;
    let mut leaked = 0.0;
    for (k, &lambda) in eig.values.iter().enumerate() {
        let w = rotated[(k, k)].re;
        if lambda > POLICY.eigenvalue_clamp {
            cross += w * lambda.log2();
        } else {
            leaked += w.max(0.0);
        }
    }
    if leaked > POLICY.eigenvalue_clamp {
        return RelativeEntropy {
            bits: f64::INFINITY,
            leaked_weight: leaked,
        };
    }
    RelativeEntropy {
        bits: -matrix_entropy(rho) - cross,
        leaked_weight: leaked,
    }
}
