//! Seeded random matrices and states.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::linalg::{self, CMatrix, CVector, C64};
use super::state::{DensityOperator, PureState};

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian(rng: &mut impl Rng) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn ginibre(rows: usize, cols: usize, rng: &mut impl Rng) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// Haar-distributed unitary via phase-corrected QR.
pub fn haar_unitary(n: usize, rng: &mut impl Rng) -> CMatrix {
    let qr = ginibre(n, n, rng).qr();
    let r = qr.r();
    let mut q = qr.q();
    for c in 0..n {
        let d = r[(c, c)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { linalg::ONE };
        for row in 0..n {
            q[(row, c)] *= phase;
        }
    }
    q
}

pub fn random_pure(n: usize, rng: &mut impl Rng) -> PureState {
    let v = CVector::from_fn(n, |_, _| gaussian(rng));
    PureState::normalized(v).expect("gaussian vector is nonzero")
}

/// Random state G G† / tr with G an n×rank Ginibre matrix.
pub fn random_density(n: usize, rank: usize, rng: &mut impl Rng) -> DensityOperator {
    let g = ginibre(n, rank.max(1), rng);
    let m = &g * g.adjoint();
    let tr = linalg::trace(&m).re;
    DensityOperator::from_trusted(m.unscale(tr))
}

/// Random probability vector from normalized exponentials.
pub fn random_simplex(n: usize, rng: &mut impl Rng) -> Vec<f64> {
    let w: Vec<f64> = (0..n).map(|_| -rng.random::<f64>().max(1e-300).ln()).collect();
    let total: f64 = w.iter().sum();
    w.into_iter().map(|x| x / total).collect()
}

pub fn random_hermitian(n: usize, rng: &mut impl Rng) -> CMatrix {
    linalg::hermitize(&ginibre(n, n, rng))
}
