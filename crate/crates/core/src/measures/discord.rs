//! Discord with projective measurements on a single qubit.

use std::f64::consts::PI;

use rayon::prelude::*;

use super::entropy::{matrix_entropy, von_neumann_entropy};
use crate::error::Result;
use crate::optim::{nelder_mead, NelderMeadOptions};
use crate::policy::POLICY;
use crate::state_engine::linalg::{CMatrix, CVector, C64};
use crate::state_engine::{marginal, DensityMatrix, QubitBasis};

#[derive(Debug, Clone, Copy)]
pub struct DiscordOptions {
    /// Grid points over θ ∈ [0, π).
    pub theta_points: usize,
    /// Grid points over φ ∈ [0, 2π).
    pub phi_points: usize,
    /// Local simplex refinement from the best grid point.
    pub refine: bool,
}

impl Default for DiscordOptions {
    fn default() -> Self {
        Self {
            theta_points: 64,
            phi_points: 128,
            refine: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscordResult {
    /// Discord in bits, clamped at zero.
    pub bits: f64,
    /// Bloch angles of the optimal measurement direction.
    pub theta: f64,
    pub phi: f64,
    /// Value before clamping.
    pub raw: f64,
}

/// Unnormalized post-measurement state of the other qubits:
/// `⟨v|_q ρ |v⟩_q`.
pub(crate) fn conditional_block(rho: &CMatrix, n: usize, q: usize, v: &CVector) -> CMatrix {
    let rest_dim = 1usize << (n - 1);
    let low_bits = n - 1 - q;
    let insert = |r: usize, bit: usize| -> usize {
        let high = r >> low_bits;
        let low = r & ((1 << low_bits) - 1);
        (high << (low_bits + 1)) | (bit << low_bits) | low
    };
    CMatrix::from_fn(rest_dim, rest_dim, |r, s| {
        let mut acc = C64::new(0.0, 0.0);
        for a in 0..2 {
            for b in 0..2 {
                acc += v[a].conj() * rho[(insert(r, a), insert(s, b))] * v[b];
            }
        }
        acc
    })
}

/// `Σ_k p_k S(ρ_rest|k)` for the measurement along `(θ, φ)`.
fn conditional_entropy(rho: &CMatrix, n: usize, q: usize, theta: f64, phi: f64) -> f64 {
    let basis = QubitBasis::from_angles(theta, phi);
    basis
        .vectors()
        .iter()
        .map(|v| {
            let block = conditional_block(rho, n, q, v);
            let p: f64 = block.diagonal().iter().map(|z| z.re).sum();
            if p <= POLICY.eigenvalue_clamp {
                0.0
            } else {
                p * matrix_entropy(&block.unscale(p))
            }
        })
        .sum()
}

/// Mutual information between `measured` and the rest, minus the largest
/// classical correlation extractable by a rank-one projective measurement
/// on `measured`.
pub fn discord_on_qubit(rho: &DensityMatrix, measured: &str, opts: &DiscordOptions) -> Result<DiscordResult> {
    let q = rho.position(measured)?;
    let n = rho.num_qubits();
    if n < 2 {
        return Err(crate::Error::InvalidParameter("discord needs at least two qubits".into()));
    }
    let m = rho.matrix();
    let s_measured = von_neumann_entropy(&marginal(rho, &[measured])?);
    let s_total = von_neumann_entropy(rho);

    let (nt, np) = (opts.theta_points.max(1), opts.phi_points.max(1));
    let grid: Vec<(f64, f64, f64)> = (0..nt)
        .into_par_iter()
        .flat_map_iter(|i| {
            let theta = PI * i as f64 / nt as f64;
            (0..np).map(move |j| {
                let phi = 2.0 * PI * j as f64 / np as f64;
                (theta, phi, conditional_entropy(m, n, q, theta, phi))
            })
        })
        .collect();
    let mut best = grid[0];
    for &point in &grid[1..] {
        if point.2 < best.2 {
            best = point;
        }
    }

    if opts.refine {
        let step = 0.5 * (PI / nt as f64).min(2.0 * PI / np as f64);
        let nm = NelderMeadOptions {
            initial_step: step,
            f_tol: 1e-15,
            x_tol: 1e-9,
            max_iter: 1000,
        };
        let refined = nelder_mead(|x| conditional_entropy(m, n, q, x[0], x[1]), &[best.0, best.1], &nm);
        if refined.value < best.2 {
            best = (refined.x[0], refined.x[1], refined.value);
        }
    }

    let raw = s_measured - s_total + best.2;
    Ok(DiscordResult {
        bits: raw.max(0.0),
        theta: best.0.rem_euclid(2.0 * PI),
        phi: best.1.rem_euclid(2.0 * PI),
        raw,
    })
}

/// Discord for one fixed measurement direction (no optimization).
pub fn discord_along(rho: &DensityMatrix, measured: &str, theta: f64, phi: f64) -> Result<f64> {
    let q = rho.position(measured)?;
    let s_measured = von_neumann_entropy(&marginal(rho, &[measured])?);
    let s_total = von_neumann_entropy(rho);
    Ok(s_measured - s_total + conditional_entropy(rho.matrix(), rho.num_qubits(), q, theta, phi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state_engine::{ket, named_state};

    #[test]
    fn conditional_block_on_last_qubit() {
        let rho = DensityMatrix::pure(&["A", "B"], &ket("01").unwrap()).unwrap();
        let block = conditional_block(rho.matrix(), 2, 1, &ket("1").unwrap());
        assert!((block[(0, 0)].re - 1.0).abs() < 1e-15);
        let block = conditional_block(rho.matrix(), 2, 0, &ket("0").unwrap());
        assert!((block[(1, 1)].re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn classical_classical_state_has_no_discord() {
        let rho = DensityMatrix::mixture(&[
            (0.3, &named_state("00").unwrap()),
            (0.7, &named_state("11").unwrap()),
        ])
        .unwrap();
        let d = discord_on_qubit(&rho, "B", &DiscordOptions::default()).unwrap();
        assert!(d.bits < 1e-9, "{d:?}");
    }

    #[test]
    fn bell_state_discord_is_one_bit() {
        let rho = named_state("phi_plus").unwrap();
        let d = discord_on_qubit(&rho, "B", &DiscordOptions::default()).unwrap();
        assert!((d.bits - 1.0).abs() < 1e-9);
    }
}
