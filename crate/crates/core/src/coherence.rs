//! Entropic coherence with respect to a Hamiltonian: twirling, the
//! coherence functional and its equivalent forms, energy distributions and
//! entropy continuity bounds.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantum::linalg::{self, CMatrix, ZERO};
use crate::quantum::{von_neumann_entropy, DensityOperator, Hamiltonian, PureState};
use crate::tol;

/// Outcome distribution of an energy measurement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnergyDistribution {
    pub support: Vec<EnergyAtom>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyAtom {
    pub energy: f64,
    pub p: f64,
}

impl EnergyDistribution {
    pub fn entropy(&self) -> f64 {
        linalg::shannon_bits(self.support.iter().map(|a| a.p))
    }

    pub fn energies(&self) -> Vec<f64> {
        self.support.iter().map(|a| a.energy).collect()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.support.iter().map(|a| a.p).collect()
    }

    pub fn len(&self) -> usize {
        self.support.len()
    }

    pub fn is_empty(&self) -> bool {
        self.support.is_empty()
    }
}

fn same_dim(rho: &DensityOperator, h: &Hamiltonian) -> Result<()> {
    if rho.dim() != h.dim() {
        return Err(Error::ShapeMismatch(format!("state dim {} vs Hamiltonian dim {}", rho.dim(), h.dim())));
    }
    Ok(())
}

/// Keeps only the blocks of `m` (in eigenbasis coordinates) with equal labels.
fn mask_by_labels(m: &CMatrix, labels: &[usize]) -> CMatrix {
    CMatrix::from_fn(m.nrows(), m.ncols(), |r, c| if labels[r] == labels[c] { m[(r, c)] } else { ZERO })
}

/// Σ_E Π_E ρ Π_E.
pub fn twirl(rho: &DensityOperator, h: &Hamiltonian) -> Result<DensityOperator> {
    same_dim(rho, h)?;
    let inner = mask_by_labels(&h.to_eigenbasis(rho.matrix()), h.level_of());
    Ok(DensityOperator::from_trusted(h.from_eigenbasis(&inner)))
}

/// S(twirl(ρ)) − S(ρ) in bits.
pub fn entropic_coherence(rho: &DensityOperator, h: &Hamiltonian) -> Result<f64> {
    let dephased = twirl(rho, h)?;
    Ok((von_neumann_entropy(&dephased) - von_neumann_entropy(rho)).max(0.0))
}

/// S(ρ‖σ) in bits; +∞ when ρ has weight outside the support of σ.
pub fn relative_entropy(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::ShapeMismatch("relative entropy of different dimensions".into()));
    }
    let (mu, vecs) = linalg::eigh(sigma.matrix());
    let threshold = tol::SUPPORT * linalg::trace(sigma.matrix()).re;
    let rotated = vecs.adjoint() * rho.matrix() * &vecs;
    let mut cross = 0.0;
    let mut outside = 0.0;
    for (j, &m) in mu.iter().enumerate() {
        let w = rotated[(j, j)].re;
        if m > threshold {
            cross += w * m.log2();
        } else {
            outside += w;
        }
    }
    if outside > tol::SUPPORT {
        return Ok(f64::INFINITY);
    }
    Ok((-von_neumann_entropy(rho) - cross).max(0.0))
}

/// ‖ρ − twirl(ρ)‖_max ≤ tol.
pub fn is_incoherent(rho: &DensityOperator, h: &Hamiltonian, tol: f64) -> Result<bool> {
    let dephased = twirl(rho, h)?;
    Ok(linalg::max_abs(&(rho.matrix() - dephased.matrix())) <= tol)
}

/// Coherence under independent local dephasing of both factors.
pub fn local_coherence(rho_ab: &DensityOperator, h_a: &Hamiltonian, h_b: &Hamiltonian) -> Result<f64> {
    let dim = h_a.dim() * h_b.dim();
    if rho_ab.dim() != dim {
        return Err(Error::ShapeMismatch(format!("state dim {} vs {}x{}", rho_ab.dim(), h_a.dim(), h_b.dim())));
    }
    let nb = h_b.num_levels();
    let labels: Vec<usize> = h_a
        .level_of()
        .iter()
        .flat_map(|&a| h_b.level_of().iter().map(move |&b| a * nb + b))
        .collect();
    let dephased = if h_a.is_diagonal() && h_b.is_diagonal() {
        mask_by_labels(rho_ab.matrix(), &labels)
    } else {
        let w = linalg::kron(&h_a.eigenbasis()?, &h_b.eigenbasis()?);
        let inner = mask_by_labels(&(w.adjoint() * rho_ab.matrix() * &w), &labels);
        &w * inner * w.adjoint()
    };
    let dephased = DensityOperator::from_trusted(dephased);
    Ok((von_neumann_entropy(&dephased) - von_neumann_entropy(rho_ab)).max(0.0))
}

/// Distribution of energy outcomes ⟨ψ|Π_E|ψ⟩; weights below 1e-14 dropped.
pub fn energy_distribution(psi: &PureState, h: &Hamiltonian) -> Result<EnergyDistribution> {
    if psi.dim() != h.dim() {
        return Err(Error::ShapeMismatch(format!("state dim {} vs Hamiltonian dim {}", psi.dim(), h.dim())));
    }
    let coords = h.vector_to_eigenbasis(psi.vector());
    let mut weights = vec![0.0; h.num_levels()];
    for (i, &k) in h.level_of().iter().enumerate() {
        weights[k] += coords[i].norm_sqr();
    }
    let support = weights
        .iter()
        .enumerate()
        .filter(|(_, &p)| p > tol::DISTRIBUTION)
        .map(|(k, &p)| EnergyAtom { energy: h.energies()[k], p })
        .collect::<Vec<_>>();
    let total: f64 = support.iter().map(|a| a.p).sum();
    Ok(EnergyDistribution { support: support.into_iter().map(|a| EnergyAtom { p: a.p / total, ..a }).collect() })
}

/// Pure state Σ_E √⟨E|σ|E⟩ |E⟩ over an eigenbasis of H.
///
/// Degenerate Hamiltonians need an explicit eigenbasis (columns of `basis`).
pub fn pure_lift(sigma: &DensityOperator, h: &Hamiltonian, basis: Option<&CMatrix>) -> Result<PureState> {
    same_dim(sigma, h)?;
    let basis = match basis {
        Some(b) => {
            check_eigenbasis(b, h)?;
            b.clone()
        }
        None if h.is_degenerate() => {
            return Err(Error::BasisRequired("degenerate Hamiltonian needs an eigenbasis".into()));
        }
        None => h.eigenbasis()?,
    };
    let rotated = basis.adjoint() * sigma.matrix() * &basis;
    let amps: Vec<f64> = (0..h.dim()).map(|i| rotated[(i, i)].re.max(0.0).sqrt()).collect();
    let coords = crate::quantum::CVector::from_iterator(amps.len(), amps.iter().map(|&a| linalg::C64::new(a, 0.0)));
    PureState::normalized(&basis * coords)
}

fn check_eigenbasis(b: &CMatrix, h: &Hamiltonian) -> Result<()> {
    if b.nrows() != h.dim() || b.ncols() != h.dim() {
        return Err(Error::ShapeMismatch("basis must be a square matrix of the Hamiltonian's dimension".into()));
    }
    linalg::ensure_unitary(b)?;
    let hb = h.matrix()? * b;
    let scale = h.spectral_radius().max(1.0);
    for c in 0..b.ncols() {
        let v = b.column(c);
        let e = (v.adjoint() * hb.column(c))[(0, 0)].re;
        let residual = (hb.column(c) - v * linalg::C64::new(e, 0.0)).norm();
        if residual > 1e-8 * scale {
            return Err(Error::BasisRequired(format!("column {c} is not an eigenvector (residual {residual:e})")));
        }
    }
    Ok(())
}

/// Pieces of the refined continuity bound D·(S(Δ₊) − S(Δ₋)) + h₂(D).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FannesAudenaert {
    pub bound: f64,
    pub distance: f64,
    pub s_plus: f64,
    pub s_minus: f64,
}

/// Upper bound on S(ρ) − S(σ) from the Jordan–Hahn split of ρ − σ.
pub fn refined_fannes_audenaert(rho: &DensityOperator, sigma: &DensityOperator) -> Result<FannesAudenaert> {
    if rho.dim() != sigma.dim() {
        return Err(Error::ShapeMismatch("continuity bound of different dimensions".into()));
    }
    let eig = linalg::eigvalsh(&(rho.matrix() - sigma.matrix()));
    let distance = 0.5 * eig.iter().map(|x| x.abs()).sum::<f64>();
    if distance <= tol::JORDAN_HAHN {
        return Ok(FannesAudenaert { bound: 0.0, distance: 0.0, s_plus: 0.0, s_minus: 0.0 });
    }
    let positive: Vec<f64> = eig.iter().filter(|&&x| x >= -tol::JORDAN_HAHN).map(|&x| x.max(0.0)).collect();
    let negative: Vec<f64> = eig.iter().filter(|&&x| x < -tol::JORDAN_HAHN).map(|&x| -x).collect();
    let normalized_entropy = |w: &[f64]| {
        let total: f64 = w.iter().sum();
        if total > 0.0 {
            linalg::shannon_bits(w.iter().map(|x| x / total))
        } else {
            0.0
        }
    };
    let s_plus = normalized_entropy(&positive);
    let s_minus = normalized_entropy(&negative);
    let d = distance.min(1.0);
    Ok(FannesAudenaert { bound: d * (s_plus - s_minus) + linalg::h2(d), distance: d, s_plus, s_minus })
}

/// Continuity of coherence: 2 log₂(d−1)·D + 2h₂(D).
pub fn coherence_continuity_bound(dim: usize, distance: f64) -> f64 {
    let log_term = if dim > 1 { ((dim - 1) as f64).log2() } else { 0.0 };
    2.0 * log_term * distance + 2.0 * linalg::h2(distance)
}
