#![allow(dead_code)]

use nepg::channels::TepChannel;
use nepg::quantum::linalg::{kron, CMatrix, C64};
use nepg::quantum::random::{haar_unitary, random_density, seeded};
use nepg::quantum::{random_energy_preserving_unitary, Hamiltonian};
use rand::Rng;

pub fn hadamard() -> CMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    CMatrix::from_row_slice(2, 2, &[s, s, s, -s].map(|x| C64::new(x, 0.0)))
}

/// Integer spectrum in `0..levels`, sometimes written in a rotated basis.
pub fn random_hamiltonian(dim: usize, levels: u32, rng: &mut impl Rng) -> Hamiltonian {
    let energies: Vec<f64> = (0..dim).map(|_| rng.random_range(0..levels) as f64).collect();
    if rng.random_bool(0.5) {
        return Hamiltonian::diagonal(&energies).unwrap();
    }
    let w = haar_unitary(dim, rng);
    let d = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(dim, energies.iter().map(|&e| C64::new(e, 0.0))));
    Hamiltonian::from_matrix(&(&w * d * w.adjoint()), None).unwrap()
}

pub struct TepSetup {
    pub ch: TepChannel,
    pub d_s: usize,
    pub d_b: usize,
}

/// A random energy-preserving system–battery unitary with a random battery state.
pub fn random_tep(seed: u64, max_s: usize, max_b: usize) -> TepSetup {
    let mut rng = seeded(seed);
    let d_s = rng.random_range(2..=max_s);
    let d_b = rng.random_range(2..=max_b);
    let h_s = random_hamiltonian(d_s, 3, &mut rng);
    let h_b = random_hamiltonian(d_b, 4, &mut rng);
    let u = random_energy_preserving_unitary(&h_s.tensor(&h_b).unwrap(), seed.wrapping_add(1 << 32)).unwrap();
    let rank = rng.random_range(1..=d_b);
    let beta = random_density(d_b, rank, &mut rng);
    TepSetup { ch: TepChannel::new(h_s, h_b, beta, u).unwrap(), d_s, d_b }
}

/// (V ⊗ I) ρ (V ⊗ I)†.
pub fn ideal_extended(v: &CMatrix, rho: &CMatrix, d_a: usize) -> CMatrix {
    let vv = kron(v, &CMatrix::identity(d_a, d_a));
    &vv * rho * vv.adjoint()
}

/// Least-squares slope of log y against log x.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / n, ly.iter().sum::<f64>() / n);
    let cov: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let var: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    cov / var
}
