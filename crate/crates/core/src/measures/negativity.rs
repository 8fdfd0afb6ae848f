use crate::error::Result;
use crate::state_engine::linalg::eigenvalues_unchecked;
use crate::state_engine::{partial_transpose, Bipartition, DensityMatrix};

/// Sum of the magnitudes of the negative eigenvalues of the partial
/// transpose, so that a two-qubit maximally entangled state gives ½.
pub fn negativity(rho: &DensityMatrix, part: &Bipartition) -> Result<f64> {
    let pt = partial_transpose(rho, part)?;
    Ok(eigenvalues_unchecked(&pt)
        .into_iter()
        .filter(|&l| l < 0.0)
        .fold(0.0, |acc, l| acc - l))
}

/// Smallest eigenvalue of the partial transpose.
pub fn min_partial_transpose_eigenvalue(rho: &DensityMatrix, part: &Bipartition) -> Result<f64> {
    let pt = partial_transpose(rho, part)?;
    Ok(eigenvalues_unchecked(&pt)[0])
}

/// Peres–Horodecki test: the partial transpose has no eigenvalue below `-tol`.
pub fn is_ppt(rho: &DensityMatrix, part: &Bipartition, tol: f64) -> Result<bool> {
    Ok(min_partial_transpose_eigenvalue(rho, part)? >= -tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state_engine::named_state;

    #[test]
    fn bell_state_has_half() {
        let bell = named_state("psi_plus").unwrap();
        let cut = Bipartition::new(bell.labels(), &["B"]).unwrap();
        assert!((negativity(&bell, &cut).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn even_bell_mixture_is_ppt() {
        let rho = DensityMatrix::mixture(&[
            (0.5, &named_state("psi_plus").unwrap()),
            (0.5, &named_state("phi_plus").unwrap()),
        ])
        .unwrap();
        let cut = Bipartition::new(rho.labels(), &["A"]).unwrap();
        assert!(negativity(&rho, &cut).unwrap() < 1e-12);
        assert!(is_ppt(&rho, &cut, 1e-12).unwrap());
    }
}
