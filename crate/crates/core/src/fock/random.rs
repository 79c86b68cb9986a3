//! Seeded random states for property sweeps.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::{DenseOperator, FockDiagonalState, FockIndex, PureState};

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Random pure state over `modes` modes with `support` distinct basis kets of
/// total photon number at most `max_total`. Amplitudes are complex Gaussian
/// damped by `exp(−decay · N)`.
pub fn pure_state<R: Rng + ?Sized>(
    rng: &mut R,
    modes: usize,
    max_total: u64,
    support: usize,
    decay: f64,
) -> PureState {
    let basis = FockIndex::enumerate_up_to(modes, max_total).expect("small random basis");
    let support = support.clamp(1, basis.len());
    let mut picked = rand::seq::index::sample(rng, basis.len(), support).into_vec();
    picked.sort_unstable();
    let terms = picked.into_iter().map(|k| {
        let idx = basis[k].clone();
        let damp = (-decay * idx.total_photons() as f64).exp();
        (idx, gaussian(rng) * damp)
    });
    PureState::normalized(modes, terms).expect("gaussian amplitudes are nonzero")
}

/// Random Fock-diagonal state with exponentially distributed weights.
pub fn diagonal_state<R: Rng + ?Sized>(
    rng: &mut R,
    modes: usize,
    max_total: u64,
    support: usize,
    decay: f64,
) -> FockDiagonalState {
    let basis = FockIndex::enumerate_up_to(modes, max_total).expect("small random basis");
    let support = support.clamp(1, basis.len());
    let picked = rand::seq::index::sample(rng, basis.len(), support).into_vec();
    let terms = picked.into_iter().map(|k| {
        let idx = basis[k].clone();
        let damp = (-decay * idx.total_photons() as f64).exp();
        let u: f64 = rng.random_range(1e-3..1.0);
        (idx, -u.ln() * damp)
    });
    FockDiagonalState::normalized(modes, terms).expect("positive weights")
}

/// Random density operator `G G† / tr(G G†)` on the basis of all kets with
/// total photon number `≤ max_total`, where `G` is `dim × rank` complex
/// Gaussian with rows damped by `exp(−decay · N)`.
pub fn density_operator<R: Rng + ?Sized>(
    rng: &mut R,
    modes: usize,
    max_total: u64,
    rank: usize,
    decay: f64,
) -> DenseOperator {
    let basis = FockIndex::enumerate_up_to(modes, max_total).expect("small random basis");
    let dim = basis.len();
    let rank = rank.clamp(1, dim);
    let mut g = DMatrix::<Complex64>::zeros(dim, rank);
    for i in 0..dim {
        let damp = (-decay * basis[i].total_photons() as f64).exp();
        for j in 0..rank {
            g[(i, j)] = gaussian(rng) * damp;
        }
    }
    let mut rho = &g * g.adjoint();
    let tr = rho.trace();
    rho /= tr;
    // exact Hermitian symmetry
    let rho = (&rho + rho.adjoint()) * Complex64::new(0.5, 0.0);
    DenseOperator::new(basis, rho).expect("dimension within cap")
}
