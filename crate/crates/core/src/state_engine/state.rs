use std::fmt;

use super::linalg::{
    self, eigenvalues_unchecked, hermitian_part, hermiticity_defect, trace, CMatrix, CVector, C64,
};
use crate::error::{Error, Result};
use crate::policy::POLICY;

/// Density matrix over an ordered list of labeled qubits.
///
/// Qubit 0 in `labels` is the slowest index of the row-major storage.
#[derive(Clone, PartialEq)]
pub struct DensityMatrix {
    labels: Vec<String>,
    matrix: CMatrix,
}

impl fmt::Debug for DensityMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DensityMatrix")
            .field("labels", &self.labels)
            .field("matrix", &self.matrix)
            .finish()
    }
}

pub(crate) fn check_labels(labels: &[String], dim: usize) -> Result<()> {
    if labels.is_empty() {
        return Err(Error::InvalidState("no subsystem labels".into()));
    }
    let expected = 1usize << labels.len();
    if dim != expected {
        return Err(Error::DimensionMismatch { expected, found: dim });
    }
    for (i, l) in labels.iter().enumerate() {
        if labels[..i].contains(l) {
            return Err(Error::InvalidState(format!("duplicate label `{l}`")));
        }
    }
    Ok(())
}

pub fn owned_labels(labels: &[&str]) -> Vec<String> {
    labels.iter().map(|s| s.to_string()).collect()
}

impl DensityMatrix {
    /// Validates Hermiticity and positivity and renormalizes to unit trace.
    pub fn new(labels: Vec<String>, matrix: CMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch {
                expected: matrix.nrows(),
                found: matrix.ncols(),
            });
        }
        check_labels(&labels, matrix.nrows())?;
        let defect = hermiticity_defect(&matrix);
        if defect > POLICY.hermiticity {
            return Err(Error::NotHermitian(defect));
        }
        let tr = trace(&matrix).re;
        if !(tr.is_finite() && tr > POLICY.trace) {
            return Err(Error::InvalidState(format!("trace {tr} is not positive")));
        }
        let matrix = hermitian_part(&matrix).unscale(tr);
        let min = eigenvalues_unchecked(&matrix)[0];
        if min < POLICY.min_eigenvalue {
            return Err(Error::InvalidState(format!(
                "not positive semidefinite (min eigenvalue {min:e})"
            )));
        }
        Ok(Self { labels, matrix })
    }

    pub fn from_labels(labels: &[&str], matrix: CMatrix) -> Result<Self> {
        Self::new(owned_labels(labels), matrix)
    }

    /// `|ψ⟩⟨ψ|` for a (not necessarily normalized) vector.
    pub fn pure(labels: &[&str], ket: &CVector) -> Result<Self> {
        Self::from_labels(labels, linalg::projector(ket))
    }

    /// `I/d`.
    pub fn maximally_mixed(labels: &[&str]) -> Self {
        let dim = 1usize << labels.len();
        Self {
            labels: owned_labels(labels),
            matrix: linalg::identity(dim).unscale(dim as f64),
        }
    }

    /// For results of maps known to preserve the state invariants.
    pub(crate) fn from_trusted(labels: Vec<String>, matrix: CMatrix) -> Self {
        debug_assert_eq!(matrix.nrows(), 1usize << labels.len());
        Self {
            labels,
            matrix: hermitian_part(&matrix),
        }
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn num_qubits(&self) -> usize {
        self.labels.len()
    }

    pub fn position(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        eigenvalues_unchecked(&self.matrix)
    }

    pub fn purity(&self) -> f64 {
        trace(&(&self.matrix * &self.matrix)).re
    }

    /// Tensor product `self ⊗ other`, labels concatenated.
    pub fn tensor(&self, other: &DensityMatrix) -> Result<DensityMatrix> {
        let mut labels = self.labels.clone();
        labels.extend(other.labels.iter().cloned());
        check_labels(&labels, self.dim() * other.dim())?;
        Ok(Self::from_trusted(labels, linalg::kron(&self.matrix, &other.matrix)))
    }

    /// Convex combination `Σ w_i ρ_i`; all states must share labels.
    pub fn mixture(parts: &[(f64, &DensityMatrix)]) -> Result<DensityMatrix> {
        let (_, first) = parts
            .first()
            .ok_or_else(|| Error::InvalidParameter("empty mixture".into()))?;
        let mut acc = CMatrix::zeros(first.dim(), first.dim());
        for (w, rho) in parts {
            if rho.labels != first.labels {
                return Err(Error::InvalidParameter("mixture of states with different labels".into()));
            }
            if *w < 0.0 {
                return Err(Error::InvalidParameter(format!("negative mixture weight {w}")));
            }
            acc += rho.matrix.scale(*w);
        }
        Self::new(first.labels.clone(), acc)
    }

    /// Reorders subsystems so that they follow `order`.
    pub fn permuted(&self, order: &[&str]) -> Result<DensityMatrix> {
        if order.len() != self.labels.len() {
            return Err(Error::InvalidParameter(format!(
                "permutation has {} labels, state has {}",
                order.len(),
                self.labels.len()
            )));
        }
        let n = self.num_qubits();
        let src: Vec<usize> = order
            .iter()
            .map(|l| self.position(l))
            .collect::<Result<_>>()?;
        let mut seen = vec![false; n];
        for &s in &src {
            if std::mem::replace(&mut seen[s], true) {
                return Err(Error::InvalidParameter("repeated label in permutation".into()));
            }
        }
        let map = |new_index: usize| -> usize {
            let mut old = 0usize;
            for (new_pos, &old_pos) in src.iter().enumerate() {
                let bit = (new_index >> (n - 1 - new_pos)) & 1;
                old |= bit << (n - 1 - old_pos);
            }
            old
        };
        let dim = self.dim();
        let m = CMatrix::from_fn(dim, dim, |i, j| self.matrix[(map(i), map(j))]);
        Ok(Self::from_trusted(owned_labels(order), m))
    }

    /// Full validation against the default policy.
    pub fn validate(&self) -> Result<()> {
        Self::new(self.labels.clone(), self.matrix.clone()).map(|_| ())
    }
}

/// A cut of the labeled qubits into two nonempty complementary sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    side_one: Vec<String>,
    side_two: Vec<String>,
}

impl Bipartition {
    /// `side_one` is given; `side_two` is its complement within `all`.
    pub fn new(all: &[String], side_one: &[&str]) -> Result<Self> {
        if side_one.is_empty() {
            return Err(Error::InvalidBipartition("empty side".into()));
        }
        for l in side_one {
            if !all.iter().any(|a| a == l) {
                return Err(Error::UnknownLabel(l.to_string()));
            }
        }
        let one: Vec<String> = all
            .iter()
            .filter(|a| side_one.contains(&a.as_str()))
            .cloned()
            .collect();
        if one.len() != side_one.len() {
            return Err(Error::InvalidBipartition("repeated label".into()));
        }
        let two: Vec<String> = all.iter().filter(|a| !one.contains(a)).cloned().collect();
        if two.is_empty() {
            return Err(Error::InvalidBipartition("complement is empty".into()));
        }
        Ok(Self {
            side_one: one,
            side_two: two,
        })
    }

    /// Parses `"A:MB"` style cuts for single-character labels. The part
    /// before the colon becomes side one.
    pub fn parse(all: &[String], cut: &str) -> Result<Self> {
        let (lhs, rhs) = cut
            .split_once(':')
            .ok_or_else(|| Error::InvalidBipartition(format!("`{cut}` has no ':'")))?;
        let lhs: Vec<String> = lhs.chars().map(String::from).collect();
        let rhs: Vec<String> = rhs.chars().map(String::from).collect();
        if lhs.len() + rhs.len() != all.len() || rhs.iter().any(|r| lhs.contains(r)) {
            return Err(Error::InvalidBipartition(format!("`{cut}` does not cover the labels once")));
        }
        for r in &rhs {
            if !all.contains(r) {
                return Err(Error::UnknownLabel(r.clone()));
            }
        }
        let refs: Vec<&str> = lhs.iter().map(String::as_str).collect();
        Self::new(all, &refs)
    }

    pub fn side_one(&self) -> &[String] {
        &self.side_one
    }

    pub fn side_two(&self) -> &[String] {
        &self.side_two
    }
}

fn positions(rho: &DensityMatrix, labels: &[String]) -> Result<Vec<usize>> {
    labels.iter().map(|l| rho.position(l)).collect()
}

/// Traces out the qubits in `discard`; the remaining labels keep their order.
pub fn partial_trace(rho: &DensityMatrix, discard: &[&str]) -> Result<DensityMatrix> {
    let n = rho.num_qubits();
    let mut drop = vec![false; n];
    for l in discard {
        let p = rho.position(l)?;
        if std::mem::replace(&mut drop[p], true) {
            return Err(Error::InvalidParameter(format!("label `{l}` discarded twice")));
        }
    }
    if discard.is_empty() || discard.len() == n {
        return Err(Error::InvalidParameter(
            "discarded set must be a nonempty proper subset".into(),
        ));
    }
    let keep: Vec<usize> = (0..n).filter(|&p| !drop[p]).collect();
    let gone: Vec<usize> = (0..n).filter(|&p| drop[p]).collect();
    let bit = |p: usize| 1usize << (n - 1 - p);
    let compose = |kept: usize, traced: usize| -> usize {
        let mut idx = 0usize;
        for (k, &p) in keep.iter().enumerate() {
            if (kept >> (keep.len() - 1 - k)) & 1 == 1 {
                idx |= bit(p);
            }
        }
        for (k, &p) in gone.iter().enumerate() {
            if (traced >> (gone.len() - 1 - k)) & 1 == 1 {
                idx |= bit(p);
            }
        }
        idx
    };
    let kd = 1usize << keep.len();
    let gd = 1usize << gone.len();
    let m = rho.matrix();
    let mut out = CMatrix::zeros(kd, kd);
    for i in 0..kd {
        for j in 0..kd {
            let mut acc = C64::new(0.0, 0.0);
            for t in 0..gd {
                acc += m[(compose(i, t), compose(j, t))];
            }
            out[(i, j)] = acc;
        }
    }
    let labels = keep.iter().map(|&p| rho.labels()[p].clone()).collect();
    Ok(DensityMatrix::from_trusted(labels, out))
}

/// Reduced state on `keep` (all other qubits traced out).
pub fn marginal(rho: &DensityMatrix, keep: &[&str]) -> Result<DensityMatrix> {
    for l in keep {
        rho.position(l)?;
    }
    let discard: Vec<&str> = rho
        .labels()
        .iter()
        .map(String::as_str)
        .filter(|l| !keep.contains(l))
        .collect();
    if discard.is_empty() {
        return rho.permuted(keep);
    }
    let reduced = partial_trace(rho, &discard)?;
    reduced.permuted(keep)
}

/// Transpose on the `side_one` qubits of `part` only.
pub fn partial_transpose(rho: &DensityMatrix, part: &Bipartition) -> Result<CMatrix> {
    let n = rho.num_qubits();
    let mask = positions(rho, part.side_one())?
        .into_iter()
        .fold(0usize, |acc, p| acc | 1usize << (n - 1 - p));
    Ok(partial_transpose_mask(rho.matrix(), mask))
}

/// Swaps the row and column bits selected by `mask`.
pub(crate) fn partial_transpose_mask(m: &CMatrix, mask: usize) -> CMatrix {
    let dim = m.nrows();
    CMatrix::from_fn(dim, dim, |i, j| {
        let swap = (i ^ j) & mask;
        m[(i ^ swap, j ^ swap)]
    })
}

/// Uhlmann fidelity `(tr √(√ρ σ √ρ))²`, evaluated on the support of the
/// lower-rank argument so that pure and nearly pure states stay accurate.
pub fn fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: sigma.dim(),
        });
    }
    const SUPPORT: f64 = 1e-14;
    let er = linalg::eigensystem_unchecked(rho.matrix());
    let es = linalg::eigensystem_unchecked(sigma.matrix());
    let rank = |e: &linalg::Eigensystem| e.values.iter().filter(|&&l| l > SUPPORT).count();
    let (eig, other) = if rank(&er) <= rank(&es) { (er, sigma) } else { (es, rho) };
    let support: Vec<usize> = (0..eig.values.len()).filter(|&k| eig.values[k] > SUPPORT).collect();
    let r = support.len();
    let cols: Vec<_> = support.iter().map(|&k| eig.vectors.column(k).clone_owned()).collect();
    let inner = CMatrix::from_fn(r, r, |i, j| {
        let w = (eig.values[support[i]] * eig.values[support[j]]).sqrt();
        (cols[i].adjoint() * other.matrix() * &cols[j])[(0, 0)] * w
    });
    let s: f64 = eigenvalues_unchecked(&hermitian_part(&inner))
        .into_iter()
        .map(|l| l.max(0.0).sqrt())
        .sum();
    Ok((s * s).clamp(0.0, 1.0))
}
