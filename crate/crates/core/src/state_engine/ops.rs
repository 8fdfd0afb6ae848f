//! Unitaries, Kraus channels and the gate embeddings built on them.

use super::linalg::{self, max_abs_diff, unitarity_defect, CMatrix, CVector, C64, ONE};
use super::state::{check_labels, owned_labels, DensityMatrix};
use crate::error::{Error, Result};
use crate::policy::POLICY;

#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryOperator {
    labels: Vec<String>,
    matrix: CMatrix,
}

impl UnitaryOperator {
    pub fn new(labels: Vec<String>, matrix: CMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                found: matrix.ncols(),
            });
        }
        check_labels(&labels, matrix.nrows())?;
        let defect = unitarity_defect(&matrix);
        if defect > POLICY.unitarity {
            return Err(Error::NotUnitary(defect));
        }
        Ok(Self { labels, matrix })
    }

    pub fn from_labels(labels: &[&str], matrix: CMatrix) -> Result<Self> {
        Self::new(owned_labels(labels), matrix)
    }

    pub fn identity(labels: &[&str]) -> Self {
        Self {
            labels: owned_labels(labels),
            matrix: linalg::identity(1 << labels.len()),
        }
    }

    /// Products of unitaries drift by a few ulps; callers composing long
    /// chains use this instead of re-validating at every step.
    pub(crate) fn from_trusted(labels: Vec<String>, matrix: CMatrix) -> Self {
        Self { labels, matrix }
    }

    /// `exp(-i h t)` for a Hermitian generator.
    pub fn evolution(labels: &[&str], hamiltonian: &CMatrix, t: f64) -> Result<Self> {
        let u = linalg::expm_hermitian(hamiltonian, t)?;
        Self::from_labels(labels, u)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn adjoint(&self) -> UnitaryOperator {
        Self::from_trusted(self.labels.clone(), self.matrix.adjoint())
    }

    /// `self · other`, i.e. `other` acts first.
    pub fn compose(&self, other: &UnitaryOperator) -> Result<UnitaryOperator> {
        if self.labels != other.labels {
            return Err(Error::InvalidParameter("composing operators on different labels".into()));
        }
        Ok(Self::from_trusted(self.labels.clone(), &self.matrix * &other.matrix))
    }

    /// Max-abs distance after removing the best global phase.
    pub fn distance_up_to_phase(&self, other: &UnitaryOperator) -> f64 {
        let overlap = linalg::trace(&(self.matrix.adjoint() * &other.matrix));
        let phase = if overlap.norm() > 0.0 { overlap / overlap.norm() } else { ONE };
        max_abs_diff(&self.matrix.map(|z| z * phase), &other.matrix)
    }
}

/// Trace-preserving completely positive map in Kraus form.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumChannel {
    labels: Vec<String>,
    kraus: Vec<CMatrix>,
}

impl QuantumChannel {
    pub fn new(labels: Vec<String>, kraus: Vec<CMatrix>) -> Result<Self> {
        let first = kraus
            .first()
            .ok_or_else(|| Error::InvalidParameter("empty Kraus set".into()))?;
        let dim = first.nrows();
        check_labels(&labels, dim)?;
        let mut sum = CMatrix::zeros(dim, dim);
        for k in &kraus {
            if k.shape() != (dim, dim) {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: k.nrows().max(k.ncols()),
                });
            }
            sum += k.adjoint() * k;
        }
        let defect = max_abs_diff(&sum, &linalg::identity(dim));
        if defect > POLICY.completeness {
            return Err(Error::NotTracePreserving(defect));
        }
        Ok(Self { labels, kraus })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn kraus(&self) -> &[CMatrix] {
        &self.kraus
    }

    pub fn dim(&self) -> usize {
        self.kraus[0].nrows()
    }

    /// Applies `self` then `next`.
    pub fn then(&self, next: &QuantumChannel) -> Result<QuantumChannel> {
        if self.labels != next.labels {
            return Err(Error::InvalidParameter("composing channels on different labels".into()));
        }
        let mut kraus = Vec::with_capacity(self.kraus.len() * next.kraus.len());
        for b in &next.kraus {
            for a in &self.kraus {
                kraus.push(b * a);
            }
        }
        Ok(Self {
            labels: self.labels.clone(),
            kraus,
        })
    }

    pub fn from_unitary(u: &UnitaryOperator) -> QuantumChannel {
        Self {
            labels: u.labels.clone(),
            kraus: vec![u.matrix.clone()],
        }
    }
}

/// Orthonormal basis of a single qubit.
#[derive(Debug, Clone, PartialEq)]
pub struct QubitBasis {
    vectors: [CVector; 2],
}

impl QubitBasis {
    pub fn new(first: CVector, second: CVector) -> Result<Self> {
        if first.len() != 2 || second.len() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: first.len().max(second.len()),
            });
        }
        let defect = (first.norm_squared() - 1.0)
            .abs()
            .max((second.norm_squared() - 1.0).abs())
            .max(first.dotc(&second).norm());
        if defect > POLICY.orthonormality {
            return Err(Error::NonOrthonormalBasis(defect));
        }
        Ok(Self {
            vectors: [first, second],
        })
    }

    /// `{ cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩, its orthogonal complement }`,
    /// the eigenbasis of the Bloch direction `(θ, φ)`.
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
        let e = C64::from_polar(1.0, phi);
        let up = CVector::from_vec(vec![C64::new(c, 0.0), e * s]);
        let down = CVector::from_vec(vec![-e.conj() * s, C64::new(c, 0.0)]);
        Self { vectors: [up, down] }
    }

    pub fn z() -> Self {
        Self {
            vectors: [linalg::basis_vector(2, 0), linalg::basis_vector(2, 1)],
        }
    }

    pub fn x() -> Self {
        Self::from_angles(std::f64::consts::FRAC_PI_2, 0.0)
    }

    /// Bloch angles `(θ, φ)` of the first basis vector.
    pub fn bloch_angles(&self) -> (f64, f64) {
        let v = &self.vectors[0];
        let theta = 2.0 * v[0].norm().clamp(0.0, 1.0).acos();
        let phi = if v[1].norm() > 1e-15 && v[0].norm() > 1e-15 {
            (v[1].arg() - v[0].arg()).rem_euclid(2.0 * std::f64::consts::PI)
        } else {
            0.0
        };
        (theta, phi)
    }

    pub fn vectors(&self) -> &[CVector; 2] {
        &self.vectors
    }

    pub fn projectors(&self) -> [CMatrix; 2] {
        [linalg::projector(&self.vectors[0]), linalg::projector(&self.vectors[1])]
    }

    /// Unitary whose columns are the basis vectors.
    pub fn change_of_basis(&self) -> CMatrix {
        CMatrix::from_columns(&[self.vectors[0].clone(), self.vectors[1].clone()])
    }
}

/// Embeds a one-qubit operator at `target`.
pub fn embed_single(labels: &[String], target: &str, op: &CMatrix) -> Result<CMatrix> {
    let pos = position_in(labels, target)?;
    let factors: Vec<CMatrix> = (0..labels.len())
        .map(|p| if p == pos { op.clone() } else { linalg::identity(2) })
        .collect();
    Ok(linalg::kron_all(&factors))
}

/// Tensor product of per-label one-qubit operators; missing labels get `I`.
pub fn embed_product(labels: &[String], ops: &[(&str, &CMatrix)]) -> Result<CMatrix> {
    let mut factors: Vec<CMatrix> = vec![linalg::identity(2); labels.len()];
    for (label, op) in ops {
        factors[position_in(labels, label)?] = (*op).clone();
    }
    Ok(linalg::kron_all(&factors))
}

fn position_in(labels: &[String], label: &str) -> Result<usize> {
    labels
        .iter()
        .position(|l| l == label)
        .ok_or_else(|| Error::UnknownLabel(label.to_string()))
}

/// Controlled one-qubit gate. With `control_value = false` the gate fires
/// on `|0⟩` of the control (an "open" control).
pub fn controlled(
    labels: &[String],
    control: &str,
    control_value: bool,
    target: &str,
    gate: &CMatrix,
) -> Result<UnitaryOperator> {
    if control == target {
        return Err(Error::InvalidParameter("control equals target".into()));
    }
    let (on, off) = if control_value { (1, 0) } else { (0, 1) };
    let p_on = linalg::projector(&linalg::basis_vector(2, on));
    let p_off = linalg::projector(&linalg::basis_vector(2, off));
    let fire = embed_product(labels, &[(control, &p_on), (target, gate)])?;
    let idle = embed_single(labels, control, &p_off)?;
    UnitaryOperator::new(labels.to_vec(), fire + idle)
}

pub fn apply_unitary(rho: &DensityMatrix, u: &UnitaryOperator) -> Result<DensityMatrix> {
    check_compatible(rho, u.labels(), u.dim())?;
    let m = u.matrix() * rho.matrix() * u.matrix().adjoint();
    Ok(DensityMatrix::from_trusted(rho.labels().to_vec(), m))
}

pub fn apply_channel(rho: &DensityMatrix, ch: &QuantumChannel) -> Result<DensityMatrix> {
    check_compatible(rho, ch.labels(), ch.dim())?;
    let dim = rho.dim();
    let mut out = CMatrix::zeros(dim, dim);
    for k in ch.kraus() {
        out += k * rho.matrix() * k.adjoint();
    }
    Ok(DensityMatrix::from_trusted(rho.labels().to_vec(), out))
}

fn check_compatible(rho: &DensityMatrix, labels: &[String], dim: usize) -> Result<()> {
    if rho.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: dim,
        });
    }
    if rho.labels() != labels {
        return Err(Error::InvalidParameter(format!(
            "operator labels {labels:?} do not match state labels {:?}",
            rho.labels()
        )));
    }
    Ok(())
}

/// Complete projective dephasing of qubit `label` in `basis`.
pub fn dephasing_channel(labels: &[String], label: &str, basis: &QubitBasis) -> Result<QuantumChannel> {
    let [p0, p1] = basis.projectors();
    let k0 = embed_single(labels, label, &p0)?;
    let k1 = embed_single(labels, label, &p1)?;
    QuantumChannel::new(labels.to_vec(), vec![k0, k1])
}

/// `Σ_m Π_m ρ Π_m` with the projectors of `basis` acting on `label`.
pub fn dephase(rho: &DensityMatrix, label: &str, basis: &QubitBasis) -> Result<DensityMatrix> {
    apply_channel(rho, &dephasing_channel(rho.labels(), label, basis)?)
}
