//! Total-energy-preserving channels: system Hamiltonian, battery and a
//! joint unitary commuting with the total Hamiltonian.

mod infidelity;
mod multicopy;

pub use infidelity::{
    choi_infidelity_kraus, fvdg_interval, worst_case_infidelity_kraus, ChannelApproxReport, WorstCaseOptions,
};
pub use multicopy::{mcopy_discrepancy, mcopy_discrepancy_pure, qubit_construction_state};

use crate::error::{Error, Result};
use crate::quantum::linalg::{self, CMatrix, ZERO};
use crate::quantum::{DensityOperator, Hamiltonian};

/// Unitary acting as `blocks[k]` on the k-th eigenspace of `h_total`.
pub fn assemble_block_unitary(h_total: &Hamiltonian, blocks: &[CMatrix]) -> Result<CMatrix> {
    let u = h_total.block_operator(blocks)?;
    for b in blocks {
        linalg::ensure_unitary(b)?;
    }
    Ok(u)
}

/// CPTP map ρ ↦ tr_B U (ρ ⊗ β) U† with [U, H_S ⊗ I + I ⊗ H_B] = 0.
#[derive(Debug, Clone)]
pub struct TepChannel {
    h_s: Hamiltonian,
    h_b: Hamiltonian,
    beta: DensityOperator,
    u: CMatrix,
    commutator_tol: f64,
    kraus: Vec<CMatrix>,
}

impl TepChannel {
    pub fn new(h_s: Hamiltonian, h_b: Hamiltonian, beta: DensityOperator, u: CMatrix) -> Result<Self> {
        let h_total = h_s.tensor(&h_b)?;
        let tol = 1e-9 * h_total.spectral_radius().max(1.0);
        Self::with_tolerance(h_s, h_b, beta, u, tol)
    }

    pub fn with_tolerance(
        h_s: Hamiltonian,
        h_b: Hamiltonian,
        beta: DensityOperator,
        u: CMatrix,
        commutator_tol: f64,
    ) -> Result<Self> {
        let dim = h_s.dim() * h_b.dim();
        if beta.dim() != h_b.dim() {
            return Err(Error::ShapeMismatch(format!("battery state dim {} vs H_B dim {}", beta.dim(), h_b.dim())));
        }
        if u.nrows() != dim || u.ncols() != dim {
            return Err(Error::ShapeMismatch(format!("joint unitary {}x{} on dimension {dim}", u.nrows(), u.ncols())));
        }
        linalg::ensure_unitary(&u)?;
        let h_total = h_s.tensor(&h_b)?.matrix()?;
        let norm = linalg::max_abs(&linalg::commutator(&u, &h_total));
        if norm > commutator_tol {
            return Err(Error::NotEnergyPreserving { norm, tol: commutator_tol });
        }
        let kraus = kraus_operators(&u, &beta, h_s.dim(), h_b.dim());
        Ok(Self { h_s, h_b, beta, u, commutator_tol, kraus })
    }

    pub fn h_s(&self) -> &Hamiltonian {
        &self.h_s
    }

    pub fn h_b(&self) -> &Hamiltonian {
        &self.h_b
    }

    pub fn beta(&self) -> &DensityOperator {
        &self.beta
    }

    pub fn unitary(&self) -> &CMatrix {
        &self.u
    }

    pub fn commutator_tol(&self) -> f64 {
        self.commutator_tol
    }

    pub fn d_s(&self) -> usize {
        self.h_s.dim()
    }

    pub fn d_b(&self) -> usize {
        self.h_b.dim()
    }

    /// Kraus operators √p_j (I ⊗ ⟨b|) U (I ⊗ |β_j⟩).
    pub fn kraus(&self) -> &[CMatrix] {
        &self.kraus
    }

    pub fn apply(&self, rho: &DensityOperator) -> Result<DensityOperator> {
        if rho.dim() != self.d_s() {
            return Err(Error::ShapeMismatch(format!("input dim {} vs system dim {}", rho.dim(), self.d_s())));
        }
        let out = self.kraus.iter().fold(CMatrix::zeros(self.d_s(), self.d_s()), |acc, k| {
            acc + k * rho.matrix() * k.adjoint()
        });
        Ok(DensityOperator::from_trusted(out))
    }

    /// (Φ ⊗ id_A)(ρ_SA) with the system factor first.
    pub fn apply_extended(&self, rho_sa: &DensityOperator, d_a: usize) -> Result<DensityOperator> {
        let dim = self.d_s() * d_a;
        if rho_sa.dim() != dim {
            return Err(Error::ShapeMismatch(format!("input dim {} vs {}x{d_a}", rho_sa.dim(), self.d_s())));
        }
        let id = CMatrix::identity(d_a, d_a);
        let out = self.kraus.iter().fold(CMatrix::zeros(dim, dim), |acc, k| {
            let kk = linalg::kron(k, &id);
            acc + &kk * rho_sa.matrix() * kk.adjoint()
        });
        Ok(DensityOperator::from_trusted(out))
    }

    pub fn choi_infidelity(&self, v: &CMatrix) -> Result<f64> {
        choi_infidelity_kraus(&self.kraus, v)
    }

    pub fn worst_case_infidelity(&self, v: &CMatrix, opts: &WorstCaseOptions) -> Result<ChannelApproxReport> {
        worst_case_infidelity_kraus(&self.kraus, v, opts)
    }
}

fn kraus_operators(u: &CMatrix, beta: &DensityOperator, d_s: usize, d_b: usize) -> Vec<CMatrix> {
    let (probs, vecs) = linalg::eigh(beta.matrix());
    let mut out = Vec::new();
    for (j, &p) in probs.iter().enumerate() {
        if p <= crate::tol::ENTROPY_CLAMP {
            continue;
        }
        let amp = p.sqrt();
        for b in 0..d_b {
            let k = CMatrix::from_fn(d_s, d_s, |s, t| {
                (0..d_b).fold(ZERO, |acc, n| acc + u[(s * d_b + b, t * d_b + n)] * vecs[(n, j)]) * amp
            });
            out.push(k);
        }
    }
    out
}
