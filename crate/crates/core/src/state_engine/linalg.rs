//! Dense complex linear algebra on small matrices.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::policy::POLICY;

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Kronecker product; the first operand carries the slow index.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Kronecker product of a list of operands, left to right.
pub fn kron_all<'a>(ops: impl IntoIterator<Item = &'a CMatrix>) -> CMatrix {
    ops.into_iter()
        .fold(CMatrix::from_element(1, 1, ONE), |acc, m| acc.kronecker(m))
}

pub fn identity(dim: usize) -> CMatrix {
    CMatrix::identity(dim, dim)
}

pub fn dagger(m: &CMatrix) -> CMatrix {
    m.adjoint()
}

/// Largest absolute entry of `a - b`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch in max_abs_diff");
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn max_abs(a: &CMatrix) -> f64 {
    a.iter().map(|x| x.norm()).fold(0.0, f64::max)
}

pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    if !m.is_square() {
        return f64::INFINITY;
    }
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Returns `(m + m†) / 2`.
pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

pub fn trace(m: &CMatrix) -> C64 {
    m.diagonal().iter().sum()
}

/// Spectral decomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct Eigensystem {
    /// Ascending.
    pub values: Vec<f64>,
    /// Column `k` is the eigenvector of `values[k]`.
    pub vectors: CMatrix,
}

impl Eigensystem {
    /// `V f(Λ) V†`.
    pub fn map_values(&self, f: impl Fn(f64) -> C64) -> CMatrix {
        let n = self.values.len();
        let mut scaled = self.vectors.clone();
        for (k, &lambda) in self.values.iter().enumerate() {
            let fk = f(lambda);
            for r in 0..n {
                scaled[(r, k)] *= fk;
            }
        }
        scaled * self.vectors.adjoint()
    }

    pub fn min_value(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }
}

/// Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian matrix.
pub fn hermitian_eigensystem(m: &CMatrix) -> Result<Eigensystem> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch {
            expected: m.nrows(),
            found: m.ncols(),
        });
    }
    let defect = hermiticity_defect(m);
    if defect > POLICY.eig_hermiticity {
        return Err(Error::NotHermitian(defect));
    }
    Ok(eigensystem_unchecked(&hermitian_part(m)))
}

pub(crate) fn eigensystem_unchecked(m: &CMatrix) -> Eigensystem {
    let n = m.nrows();
    let eig = SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    Eigensystem { values, vectors }
}

/// Eigenvalues only, ascending.
pub(crate) fn eigenvalues_unchecked(m: &CMatrix) -> Vec<f64> {
    let mut values: Vec<f64> = SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().collect();
    values.sort_by(f64::total_cmp);
    values
}

/// `exp(-i h t)` for Hermitian `h`, via its eigendecomposition.
pub fn expm_hermitian(h: &CMatrix, t: f64) -> Result<CMatrix> {
    let eig = hermitian_eigensystem(h)?;
    Ok(eig.map_values(|lambda| C64::from_polar(1.0, -lambda * t)))
}

/// Principal square root of a positive semidefinite matrix; negative
/// eigenvalues from round-off are clamped to zero.
pub fn sqrt_psd(m: &CMatrix) -> Result<CMatrix> {
    let eig = hermitian_eigensystem(m)?;
    Ok(eig.map_values(|lambda| C64::new(lambda.max(0.0).sqrt(), 0.0)))
}

pub fn unitarity_defect(u: &CMatrix) -> f64 {
    max_abs_diff(&(u * u.adjoint()), &identity(u.nrows()))
}

/// Computational basis vector `|index⟩` of dimension `dim`.
pub fn basis_vector(dim: usize, index: usize) -> CVector {
    let mut v = CVector::zeros(dim);
    v[index] = ONE;
    v
}

pub fn projector(v: &CVector) -> CMatrix {
    v * v.adjoint()
}

pub fn from_real_rows(n: usize, rows: &[f64]) -> CMatrix {
    CMatrix::from_row_iterator(n, n, rows.iter().map(|&x| C64::new(x, 0.0)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sx() -> CMatrix {
        from_real_rows(2, &[0.0, 1.0, 1.0, 0.0])
    }

    fn sz() -> CMatrix {
        from_real_rows(2, &[1.0, 0.0, 0.0, -1.0])
    }

    #[test]
    fn kron_of_identities_is_identity() {
        assert_eq!(kron(&identity(2), &identity(2)), identity(4));
    }

    #[test]
    fn kron_xx_flips_both_bits() {
        let out = kron(&sx(), &sx()) * basis_vector(4, 0);
        assert_eq!(out, basis_vector(4, 3));
    }

    #[test]
    fn kron_zz_spectrum() {
        let zz = kron(&sz(), &sz());
        let diag: Vec<f64> = zz.diagonal().iter().map(|c| c.re).collect();
        assert_eq!(diag, vec![1.0, -1.0, -1.0, 1.0]);
        let eig = hermitian_eigensystem(&zz).unwrap();
        assert_eq!(eig.values.iter().filter(|&&v| (v + 1.0).abs() < 1e-12).count(), 2);
        assert_eq!(eig.values.iter().filter(|&&v| (v - 1.0).abs() < 1e-12).count(), 2);
    }

    #[test]
    fn kron_row_major_convention() {
        // |01⟩ is index 1: the second operand is the fast index.
        let ket = kron(
            &CMatrix::from_column_slice(2, 1, &[ONE, ZERO]),
            &CMatrix::from_column_slice(2, 1, &[ZERO, ONE]),
        );
        assert_eq!(ket[(1, 0)], ONE);
    }

    #[test]
    fn pauli_spectra() {
        let z = hermitian_eigensystem(&sz()).unwrap();
        assert!((z.values[0] + 1.0).abs() < 1e-14 && (z.values[1] - 1.0).abs() < 1e-14);

        let x = hermitian_eigensystem(&sx()).unwrap();
        assert!((x.values[0] + 1.0).abs() < 1e-14 && (x.values[1] - 1.0).abs() < 1e-14);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        // |−⟩ then |+⟩, up to a phase
        let minus = x.vectors.column(0);
        let plus = x.vectors.column(1);
        assert!(((minus[0] * minus[1].conj()).re + 0.5).abs() < 1e-12);
        assert!(((plus[0] * plus[1].conj()).re - 0.5).abs() < 1e-12);
        assert!((minus[0].norm() - s).abs() < 1e-12);
    }

    #[test]
    fn eigensystem_reconstructs() {
        let m = CMatrix::from_row_slice(
            3,
            3,
            &[
                C64::new(2.0, 0.0),
                C64::new(0.5, 0.25),
                C64::new(-1.0, 0.0),
                C64::new(0.5, -0.25),
                C64::new(1.0, 0.0),
                C64::new(0.0, 0.3),
                C64::new(-1.0, 0.0),
                C64::new(0.0, -0.3),
                C64::new(-0.5, 0.0),
            ],
        );
        let eig = hermitian_eigensystem(&m).unwrap();
        let rebuilt = eig.map_values(|l| C64::new(l, 0.0));
        assert!(max_abs_diff(&rebuilt, &m) <= 1e-10);
        assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
        assert!(unitarity_defect(&eig.vectors) < 1e-12);
    }

    #[test]
    fn eigensystem_rejects_non_hermitian() {
        let m = from_real_rows(2, &[0.0, 1.0, 0.0, 0.0]);
        assert!(matches!(hermitian_eigensystem(&m), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn expm_of_pauli_x() {
        let t = 0.3;
        let u = expm_hermitian(&sx(), t).unwrap();
        let expected = identity(2).scale(t.cos()) - sx() * C64::new(0.0, t.sin());
        assert!(max_abs_diff(&u, &expected) < 1e-14);
    }
}
