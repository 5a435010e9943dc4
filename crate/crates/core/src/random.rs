//! Seeded generators for test inputs and sweeps.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::linalg::{c, CMatrix};

pub type Rng = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Matrix with i.i.d. standard complex-Gaussian entries.
pub fn gaussian_matrix(rng: &mut Rng, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        c(re, im)
    })
}

/// Full-rank density matrix `GG*/tr(GG*)`.
pub fn density_matrix(rng: &mut Rng, n: usize) -> CMatrix {
    let g = gaussian_matrix(rng, n, n);
    let gg = &g * g.adjoint();
    let tr = gg.trace().re;
    gg.unscale(tr)
}

/// Gaussian matrix rescaled to unit Hilbert–Schmidt norm.
pub fn unit_hs_matrix(rng: &mut Rng, n: usize) -> CMatrix {
    let g = gaussian_matrix(rng, n, n);
    let norm = g.norm();
    g.unscale(norm)
}

/// Probability vector drawn from a flat Dirichlet distribution.
pub fn weights(rng: &mut Rng, k: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..k)
        .map(|_| {
            let u: f64 = rand::Rng::random_range(rng, f64::MIN_POSITIVE..1.0);
            -u.ln()
        })
        .collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / total).collect()
}
