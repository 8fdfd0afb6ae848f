//! Relative entropy of entanglement of two-qubit states.
//!
//! The separable set is parametrized as convex mixtures of `K` pure product
//! states `|a_k⟩⟨a_k| ⊗ |b_k⟩⟨b_k|`, each given by two Bloch directions
//! `(θ_a, φ_a, θ_b, φ_b)` and a weight `w_k = z_k² / Σ z_j²`. Every point of
//! the parameter space is separable, so the minimum found is an upper bound
//! on the true value that closes as the optimizer converges.
//!
//! The objective `-tr ρ log σ` is minimized with L-BFGS using the analytic
//! Fréchet derivative of the matrix logarithm, from several seeded random
//! starts.

use std::f64::consts::{LN_2, PI};
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::entropy::{matrix_entropy, relative_entropy_matrices};
use super::negativity::min_partial_transpose_eigenvalue;
use crate::error::{Error, Result};
use crate::optim::{lbfgs, LbfgsOptions, Minimum};
use crate::state_engine::linalg::{eigensystem_unchecked, kron, CMatrix, C64};
use crate::state_engine::{Bipartition, DensityMatrix, Pauli};

const PARAMS_PER_TERM: usize = 5;
const EIGEN_FLOOR: f64 = 1e-200;

#[derive(Debug, Clone, Copy)]
pub struct ReeOptions {
    /// Number of product terms in the separable ansatz.
    pub terms: usize,
    /// Number of seeded random starts.
    pub starts: usize,
    pub seed: u64,
    pub lbfgs: LbfgsOptions,
}

impl Default for ReeOptions {
    fn default() -> Self {
        Self {
            terms: 16,
            starts: 8,
            seed: 0x5eed,
            lbfgs: LbfgsOptions::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ReeResult {
    /// Relative entropy of entanglement in bits.
    pub bits: f64,
    /// The minimizing separable state.
    pub closest: DensityMatrix,
    /// Whether the best start met its stopping criterion.
    pub converged: bool,
    /// Smallest eigenvalue of the partial transpose of `closest`.
    pub closest_min_pt_eigenvalue: f64,
}

/// `σ_μ ⊗ σ_ν` for μ, ν ∈ {I, X, Y, Z}.
fn pauli_products() -> &'static [[CMatrix; 4]; 4] {
    static TABLE: OnceLock<[[CMatrix; 4]; 4]> = OnceLock::new();
    TABLE.get_or_init(|| {
        std::array::from_fn(|mu| std::array::from_fn(|nu| kron(&Pauli::ALL[mu].matrix(), &Pauli::ALL[nu].matrix())))
    })
}

/// `(1, n_x, n_y, n_z)` and its derivatives with respect to θ and φ.
fn bloch(theta: f64, phi: f64) -> ([f64; 4], [f64; 4], [f64; 4]) {
    let (st, ct) = theta.sin_cos();
    let (sp, cp) = phi.sin_cos();
    (
        [1.0, st * cp, st * sp, ct],
        [0.0, ct * cp, ct * sp, -st],
        [0.0, -st * sp, st * cp, 0.0],
    )
}

fn bilinear(a: &[f64; 4], t: &[[f64; 4]; 4], b: &[f64; 4]) -> f64 {
    let mut s = 0.0;
    for mu in 0..4 {
        for nu in 0..4 {
            s += a[mu] * t[mu][nu] * b[nu];
        }
    }
    s
}

/// Separable ansatz state for a parameter vector.
struct Ansatz {
    weights: Vec<f64>,
    a: Vec<[[f64; 4]; 3]>,
    b: Vec<[[f64; 4]; 3]>,
    z_norm: f64,
}

impl Ansatz {
    fn new(params: &[f64]) -> Self {
        let k = params.len() / PARAMS_PER_TERM;
        let z_norm: f64 = (0..k).map(|i| params[i * PARAMS_PER_TERM + 4].powi(2)).sum();
        let mut weights = Vec::with_capacity(k);
        let mut a = Vec::with_capacity(k);
        let mut b = Vec::with_capacity(k);
        for i in 0..k {
            let p = &params[i * PARAMS_PER_TERM..(i + 1) * PARAMS_PER_TERM];
            weights.push(p[4] * p[4] / z_norm);
            let (va, da_t, da_p) = bloch(p[0], p[1]);
            let (vb, db_t, db_p) = bloch(p[2], p[3]);
            a.push([va, da_t, da_p]);
            b.push([vb, db_t, db_p]);
        }
        Self { weights, a, b, z_norm }
    }

    fn coefficients(&self) -> [[f64; 4]; 4] {
        let mut c = [[0.0; 4]; 4];
        for (k, &w) in self.weights.iter().enumerate() {
            for mu in 0..4 {
                for nu in 0..4 {
                    c[mu][nu] += w * self.a[k][0][mu] * self.b[k][0][nu];
                }
            }
        }
        c
    }

    fn matrix(&self) -> CMatrix {
        let table = pauli_products();
        let c = self.coefficients();
        let mut m = CMatrix::zeros(4, 4);
        for mu in 0..4 {
            for nu in 0..4 {
                if c[mu][nu] != 0.0 {
                    m += table[mu][nu].scale(0.25 * c[mu][nu]);
                }
            }
        }
        m
    }
}

/// Divided difference of the natural logarithm.
fn log_divided_difference(x: f64, y: f64) -> f64 {
    if (x - y).abs() <= 1e-9 * x.max(y) {
        2.0 / (x + y)
    } else {
        (x.ln() - y.ln()) / (x - y)
    }
}

/// `-tr(ρ log₂ σ)` and its gradient with respect to the parameters.
fn cross_entropy_and_gradient(rho: &CMatrix, params: &[f64], grad: &mut [f64]) -> f64 {
    let ansatz = Ansatz::new(params);
    let sigma = ansatz.matrix();
    let eig = eigensystem_unchecked(&sigma);
    let lambdas: Vec<f64> = eig.values.iter().map(|&l| l.max(EIGEN_FLOOR)).collect();
    let rotated = eig.vectors.adjoint() * rho * &eig.vectors;

    let mut value = 0.0;
    for k in 0..4 {
        value -= rotated[(k, k)].re * lambdas[k].ln();
    }

    // Gradient of -tr(ρ ln σ) with respect to σ, in the eigenbasis.
    let mut g_eig = CMatrix::zeros(4, 4);
    for i in 0..4 {
        for j in 0..4 {
            g_eig[(i, j)] = -rotated[(i, j)] * log_divided_difference(lambdas[i], lambdas[j]);
        }
    }
    let g = &eig.vectors * g_eig * eig.vectors.adjoint();
    let table = pauli_products();
    let mut t = [[0.0; 4]; 4];
    for mu in 0..4 {
        for nu in 0..4 {
            // tr(G B) for Hermitian G and B is real.
            t[mu][nu] = 0.25 * (g.transpose().component_mul(&table[mu][nu])).iter().sum::<C64>().re;
        }
    }

    let k_terms = ansatz.weights.len();
    let h: Vec<f64> = (0..k_terms)
        .map(|k| bilinear(&ansatz.a[k][0], &t, &ansatz.b[k][0]))
        .collect();
    let mean_h: f64 = ansatz.weights.iter().zip(&h).map(|(w, h)| w * h).sum();
    for k in 0..k_terms {
        let w = ansatz.weights[k];
        let (a, b) = (&ansatz.a[k], &ansatz.b[k]);
        let o = k * PARAMS_PER_TERM;
        grad[o] = w * bilinear(&a[1], &t, &b[0]);
        grad[o + 1] = w * bilinear(&a[2], &t, &b[0]);
        grad[o + 2] = w * bilinear(&a[0], &t, &b[1]);
        grad[o + 3] = w * bilinear(&a[0], &t, &b[2]);
        grad[o + 4] = 2.0 * params[o + 4] / ansatz.z_norm * (h[k] - mean_h);
    }
    for gi in grad.iter_mut() {
        *gi /= LN_2;
    }
    value / LN_2
}

fn random_start(rng: &mut ChaCha8Rng, terms: usize) -> Vec<f64> {
    let mut x = Vec::with_capacity(terms * PARAMS_PER_TERM);
    for _ in 0..terms {
        x.push((1.0 - 2.0 * rng.gen::<f64>()).acos());
        x.push(2.0 * PI * rng.gen::<f64>());
        x.push((1.0 - 2.0 * rng.gen::<f64>()).acos());
        x.push(2.0 * PI * rng.gen::<f64>());
        x.push(0.5 + rng.gen::<f64>());
    }
    x
}

/// Minimizes `S(ρ‖σ)` over separable two-qubit `σ`.
pub fn ree_two_qubit(rho: &DensityMatrix, opts: &ReeOptions) -> Result<ReeResult> {
    if rho.num_qubits() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: rho.dim(),
        });
    }
    if opts.terms == 0 || opts.starts == 0 {
        return Err(Error::InvalidParameter("REE needs at least one term and one start".into()));
    }
    let m = rho.matrix();
    let self_entropy = matrix_entropy(m);

    let mut master = ChaCha8Rng::seed_from_u64(opts.seed);
    let starts: Vec<Vec<f64>> = (0..opts.starts).map(|_| random_start(&mut master, opts.terms)).collect();
    let runs: Vec<Minimum> = starts
        .par_iter()
        .map(|x0| lbfgs(|x, g| cross_entropy_and_gradient(m, x, g), x0, &opts.lbfgs))
        .collect();

    // First-found wins ties, independent of scheduling.
    let mut best = 0;
    for (i, run) in runs.iter().enumerate() {
        if run.value < runs[best].value {
            best = i;
        }
    }
    let run = &runs[best];
    let sigma = DensityMatrix::new(rho.labels().to_vec(), Ansatz::new(&run.x).matrix())?;
    let exact = relative_entropy_matrices(m, sigma.matrix());
    let bits = if exact.is_finite() {
        exact.bits
    } else {
        run.value - self_entropy
    };
    let cut = Bipartition::new(rho.labels(), &[rho.labels()[0].as_str()])?;
    Ok(ReeResult {
        bits: bits.max(0.0),
        closest_min_pt_eigenvalue: min_partial_transpose_eigenvalue(&sigma, &cut)?,
        closest: sigma,
        converged: run.converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn analytic_gradient_matches_finite_differences() {
        let rho = crate::state_engine::named_state("psi_plus").unwrap();
        let mixed = DensityMatrix::mixture(&[(0.7, &rho), (0.3, &DensityMatrix::maximally_mixed(&["A", "B"]))]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let x = random_start(&mut rng, 4);
        let mut g = vec![0.0; x.len()];
        cross_entropy_and_gradient(mixed.matrix(), &x, &mut g);
        let mut scratch = vec![0.0; x.len()];
        for i in 0..x.len() {
            let h = 1e-6;
            let mut xp = x.clone();
            xp[i] += h;
            let fp = cross_entropy_and_gradient(mixed.matrix(), &xp, &mut scratch);
            let mut xm = x.clone();
            xm[i] -= h;
            let fm = cross_entropy_and_gradient(mixed.matrix(), &xm, &mut scratch);
            let fd = (fp - fm) / (2.0 * h);
            assert!((fd - g[i]).abs() < 1e-6 * (1.0 + fd.abs()), "param {i}: fd {fd} analytic {}", g[i]);
        }
    }

    #[test]
    fn ansatz_is_a_unit_trace_state() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let sigma = Ansatz::new(&random_start(&mut rng, 16)).matrix();
        assert!(DensityMatrix::from_labels(&["A", "B"], sigma.clone()).is_ok());
        let tr: C64 = sigma.diagonal().iter().sum();
        assert!((tr.re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_wrong_dimension() {
        let rho = DensityMatrix::maximally_mixed(&["A", "B", "M"]);
        assert!(ree_two_qubit(&rho, &ReeOptions::default()).is_err());
    }
}
