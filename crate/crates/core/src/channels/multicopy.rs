//! 2m-copy protocol: U on odd system copies and U† on even ones, sharing a
//! single battery, compared against V ⊗ V† ⊗ … on the copies.
//!
//! Copies are ordered S₁A₁S₂A₂…S₂ₘA₂ₘ with each auxiliary A of the system's
//! dimension; the battery is the last factor during simulation.

use super::TepChannel;
use crate::error::{Error, Result};
use crate::quantum::linalg::{self, CMatrix, CVector, ZERO};
use crate::quantum::{DensityOperator, PureState};
use crate::tol;

/// Applies `op` to the contiguous pair of factors (site, last) of `v`,
/// where the last factor has dimension `d_last` and `site` has stride `stride`.
fn apply_with_last(v: &mut CVector, op: &CMatrix, d_site: usize, stride: usize, d_last: usize) {
    let block = d_site * d_last;
    let mut buf = CVector::zeros(block);
    let outer = v.len() / (stride * d_site);
    for hi in 0..outer {
        for mid in (0..stride).step_by(d_last) {
            let base = hi * stride * d_site + mid;
            for s in 0..d_site {
                for b in 0..d_last {
                    buf[s * d_last + b] = v[base + s * stride + b];
                }
            }
            let out = op * &buf;
            for s in 0..d_site {
                for b in 0..d_last {
                    v[base + s * stride + b] = out[s * d_last + b];
                }
            }
        }
    }
}

/// Applies a single-site operator to factor with dimension `d_site` and stride `stride`.
fn apply_site(v: &mut CVector, op: &CMatrix, d_site: usize, stride: usize) {
    apply_with_last(v, op, d_site, stride, 1);
}

struct Protocol<'a> {
    ch: &'a TepChannel,
    v: &'a CMatrix,
    m: usize,
    d_s: usize,
}

impl Protocol<'_> {
    fn copies(&self) -> usize {
        2 * self.m
    }

    /// Stride of system copy i (0-based) in the S/A register without battery.
    fn system_stride(&self, i: usize) -> usize {
        let after = 2 * self.copies() - (2 * i + 1);
        self.d_s.pow(after as u32)
    }

    /// Battery-conditioned output components √p_j (I ⊗ ⟨b|) U⁽ᵐ⁾ (ψ ⊗ |β_j⟩).
    fn real_components(&self, psi: &CVector, battery: &[(f64, CVector)]) -> Vec<CVector> {
        let d_b = self.ch.d_b();
        let u = self.ch.unitary();
        let ud = u.adjoint();
        let mut out = Vec::new();
        for (p, beta_j) in battery {
            let mut joint = linalg::kron_vec(psi, beta_j);
            for i in 0..self.copies() {
                let op = if i % 2 == 0 { u } else { &ud };
                apply_with_last(&mut joint, op, self.d_s, self.system_stride(i) * d_b, d_b);
            }
            let amp = p.sqrt();
            for b in 0..d_b {
                let comp = CVector::from_iterator(psi.len(), (0..psi.len()).map(|k| joint[k * d_b + b] * amp));
                out.push(comp);
            }
        }
        out
    }

    fn ideal(&self, psi: &CVector) -> CVector {
        let vd = self.v.adjoint();
        let mut out = psi.clone();
        for i in 0..self.copies() {
            let op = if i % 2 == 0 { self.v } else { &vd };
            apply_site(&mut out, op, self.d_s, self.system_stride(i));
        }
        out
    }
}

/// ½‖Σ wₐ xₐxₐ† − Σ w'_b y_b y_b†‖₁ computed in the span of all vectors.
fn low_rank_trace_distance(plus: &[CVector], minus: &[CVector]) -> f64 {
    let mut basis: Vec<CVector> = Vec::new();
    for v in plus.iter().chain(minus) {
        let scale = v.norm();
        if scale == 0.0 {
            continue;
        }
        let mut w = v.clone();
        for _ in 0..2 {
            for q in &basis {
                let c = q.dotc(&w);
                w -= q * c;
            }
        }
        let n = w.norm();
        if n > 1e-11 * scale.max(1e-300) && n > 1e-15 {
            basis.push(w.unscale(n));
        }
    }
    let r = basis.len();
    if r == 0 {
        return 0.0;
    }
    let coords = |v: &CVector| CVector::from_iterator(r, basis.iter().map(|q| q.dotc(v)));
    let mut diff = CMatrix::zeros(r, r);
    for v in plus {
        diff += linalg::outer(&coords(v));
    }
    for v in minus {
        diff -= linalg::outer(&coords(v));
    }
    (0.5 * linalg::eigvalsh(&diff).iter().map(|x| x.abs()).sum::<f64>()).min(1.0)
}

fn battery_components(ch: &TepChannel) -> Vec<(f64, CVector)> {
    let (probs, vecs) = linalg::eigh(ch.beta().matrix());
    probs
        .iter()
        .enumerate()
        .filter(|(_, &p)| p > tol::ENTROPY_CLAMP)
        .map(|(j, &p)| (p, vecs.column(j).into_owned()))
        .collect()
}

fn check_inputs(ch: &TepChannel, v: &CMatrix, m: usize, dim: usize) -> Result<()> {
    if m == 0 {
        return Err(Error::Domain("copy number m must be positive".into()));
    }
    if v.nrows() != ch.d_s() || v.ncols() != ch.d_s() {
        return Err(Error::ShapeMismatch("target unitary does not act on the system".into()));
    }
    linalg::ensure_unitary(v)?;
    let expected = (ch.d_s() as u128).pow(4 * m as u32);
    if expected * ch.d_b() as u128 > tol::MAX_ENTRIES as u128 * 64 {
        return Err(Error::DimensionLimit { entries: usize::try_from(expected).unwrap_or(usize::MAX), cap: tol::MAX_ENTRIES });
    }
    if dim as u128 != expected {
        return Err(Error::ShapeMismatch(format!("input dim {dim} vs (d_S·d_A)^(2m) = {expected}")));
    }
    Ok(())
}

/// D(ν̃⁽ᵐ⁾, ν⁽ᵐ⁾) for a pure input on (S A)^{2m}.
pub fn mcopy_discrepancy_pure(ch: &TepChannel, v: &CMatrix, m: usize, psi_in: &PureState) -> Result<f64> {
    check_inputs(ch, v, m, psi_in.dim())?;
    let protocol = Protocol { ch, v, m, d_s: ch.d_s() };
    let real = protocol.real_components(psi_in.vector(), &battery_components(ch));
    let ideal = protocol.ideal(psi_in.vector());
    Ok(low_rank_trace_distance(&real, &[ideal]))
}

/// D(ν̃⁽ᵐ⁾, ν⁽ᵐ⁾) for a mixed input on (S A)^{2m}.
pub fn mcopy_discrepancy(ch: &TepChannel, v: &CMatrix, m: usize, rho_in: &DensityOperator) -> Result<f64> {
    check_inputs(ch, v, m, rho_in.dim())?;
    linalg::check_entries(rho_in.dim(), tol::MAX_ENTRIES)?;
    let protocol = Protocol { ch, v, m, d_s: ch.d_s() };
    let battery = battery_components(ch);
    let (weights, vecs) = linalg::eigh(rho_in.matrix());
    let mut real = Vec::new();
    let mut ideal = Vec::new();
    for (i, &w) in weights.iter().enumerate() {
        if w <= tol::ENTROPY_CLAMP {
            continue;
        }
        let psi = vecs.column(i).into_owned() * linalg::C64::new(w.sqrt(), 0.0);
        real.extend(protocol.real_components(&psi, &battery));
        ideal.push(protocol.ideal(&psi));
    }
    Ok(low_rank_trace_distance(&real, &ideal))
}

/// (2m+1)^{-1/2} Σ_k |1^k 0^{2m−k}⟩_S ⊗ |1^k 0^{2m−k}⟩_A for qubit copies.
pub fn qubit_construction_state(m: usize) -> Result<PureState> {
    let copies = 2 * m;
    let dim = 1usize
        .checked_shl(2 * copies as u32)
        .filter(|&d| d <= tol::MAX_ENTRIES)
        .ok_or(Error::DimensionLimit { entries: usize::MAX, cap: tol::MAX_ENTRIES })?;
    let mut v = CVector::from_element(dim, ZERO);
    let amp = linalg::C64::new(1.0 / ((copies + 1) as f64).sqrt(), 0.0);
    for k in 0..=copies {
        // Pair (S_i, A_i) occupies two bits; |1,1⟩ = 3, |0,0⟩ = 0.
        let index = (0..copies).fold(0usize, |acc, i| (acc << 2) | if i < k { 3 } else { 0 });
        v[index] = amp;
    }
    Ok(PureState::from_trusted(v))
}
