//! Lower bounds on the coherence, dimension, energy and Fisher information a
//! battery needs to implement a non-energy-preserving gate to accuracy ε.
//!
//! Every asymptotic o(1) correction is dropped; reports carry an `o1_dropped`
//! flag so downstream consumers treat the values directionally.

mod search;
mod solvers;

use std::f64::consts::{E, PI};

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::iid::{Basis, ExactReal};
use crate::quantum::linalg::{ensure_unitary, CMatrix};
use crate::quantum::Hamiltonian;

pub use search::{r2_lambda2_search, CandidateKind, R2Search, SearchOptions, Witness, WitnessTerm};
pub use solvers::{
    coherence_ceiling, default_mu_grid, min_energy_at_coherence, min_variance_at_coherence, MinEnergy, MinVariance,
};

/// Off-block magnitude of V in the energy eigenbasis below which the gate
/// counts as energy preserving.
const COMMUTING_TOL: f64 = 1e-9;
const RATIONAL_MAX_DEN: i64 = 1_000_000;
const RATIONAL_TOL: f64 = 1e-12;

/// A system Hamiltonian and the unitary gate to implement on it.
#[derive(Debug, Clone)]
pub struct GateInstance {
    h_s: Hamiltonian,
    v: CMatrix,
    exact: Option<(Basis, Vec<ExactReal>)>,
}

impl GateInstance {
    pub fn new(h_s: Hamiltonian, v: CMatrix) -> Result<Self> {
        if v.nrows() != h_s.dim() || v.ncols() != h_s.dim() {
            return Err(Error::ShapeMismatch(format!(
                "gate is {}x{}, Hamiltonian has dim {}",
                v.nrows(),
                v.ncols(),
                h_s.dim()
            )));
        }
        ensure_unitary(&v)?;
        Ok(Self { h_s, v, exact: None })
    }

    /// Declares exact values for the distinct energy levels, ascending.
    pub fn with_exact_levels(mut self, basis: Basis, levels: Vec<ExactReal>) -> Result<Self> {
        if levels.len() != self.h_s.num_levels() {
            return Err(Error::ShapeMismatch(format!(
                "{} exact levels declared for {} distinct energies",
                levels.len(),
                self.h_s.num_levels()
            )));
        }
        for (x, &e) in levels.iter().zip(self.h_s.energies()) {
            if (x.value() - e).abs() > 1e-9 * e.abs().max(1.0) {
                return Err(Error::Domain(format!("declared level {} does not match energy {e}", x.value())));
            }
        }
        self.exact = Some((basis, levels));
        Ok(self)
    }

    pub fn hamiltonian(&self) -> &Hamiltonian {
        &self.h_s
    }

    pub fn gate(&self) -> &CMatrix {
        &self.v
    }

    pub fn dim(&self) -> usize {
        self.h_s.dim()
    }

    /// The gate written in the energy eigenbasis of H_S.
    pub fn v_eigenbasis(&self) -> CMatrix {
        self.h_s.to_eigenbasis(&self.v)
    }

    /// Whether V commutes with H_S, i.e. V is block diagonal over energy levels.
    pub fn is_energy_preserving(&self) -> bool {
        let ve = self.v_eigenbasis();
        let level = self.h_s.level_of();
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| level[i] == level[j] || ve[(i, j)].norm() <= COMMUTING_TOL))
    }

    /// Transition probability |⟨0|V|1⟩|² between the two levels of a qubit.
    pub fn qubit_transition(&self) -> Option<f64> {
        if self.dim() != 2 || self.h_s.num_levels() != 2 {
            return None;
        }
        let ve = self.v_eigenbasis();
        let (a, b) = (self.h_s.members(0)[0], self.h_s.members(1)[0]);
        Some(ve[(a, b)].norm_sqr())
    }

    /// Exact energy of every eigenbasis column, from the declared levels or
    /// by rationalizing the float spectrum.
    pub fn exact_column_energies(&self) -> Result<(Basis, Vec<ExactReal>)> {
        let (basis, levels) = match &self.exact {
            Some((b, l)) => (b.clone(), l.clone()),
            None => {
                let b = Basis::rational();
                let levels = self
                    .h_s
                    .energies()
                    .iter()
                    .map(|&e| {
                        rationalize(e).map(|q| ExactReal::rational(q, &b)).ok_or_else(|| {
                            Error::BasisRequired(format!("energy {e} is not a small-denominator rational"))
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                (b, levels)
            }
        };
        Ok((basis.clone(), self.h_s.level_of().iter().map(|&k| levels[k].clone()).collect()))
    }
}

/// Continued-fraction rational approximation with a bounded denominator.
pub fn rationalize(x: f64) -> Option<Rational64> {
    if !x.is_finite() {
        return None;
    }
    let (mut h0, mut h1, mut k0, mut k1) = (0i64, 1i64, 1i64, 0i64);
    let mut rest = x;
    for _ in 0..64 {
        let a = rest.floor();
        if a.abs() > 1e15 {
            return None;
        }
        let a = a as i64;
        let h = a.checked_mul(h1)?.checked_add(h0)?;
        let k = a.checked_mul(k1)?.checked_add(k0)?;
        if k > RATIONAL_MAX_DEN {
            return None;
        }
        (h0, h1, k0, k1) = (h1, h, k1, k);
        if (x - h as f64 / k as f64).abs() <= RATIONAL_TOL * x.abs().max(1.0) {
            return Some(Rational64::new(h, k));
        }
        let frac = rest - a as f64;
        if frac == 0.0 {
            return None;
        }
        rest = 1.0 / frac;
    }
    None
}

/// Which coherence bound to headline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    #[default]
    General,
    Proportionate,
    Qubit,
}

/// The gate-dependent constants entering every bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundParams {
    pub r2: usize,
    pub lambda2: f64,
    pub d_s: usize,
    pub alpha: f64,
}

impl BoundParams {
    /// Qubit constants r₂ = 2, λ₂ = p/(π(1+δ_{1,p})) for transition probability p.
    pub fn qubit(p: f64, alpha: f64) -> Result<Self> {
        if !(0.0..=1.0 + 1e-12).contains(&p) {
            return Err(Error::Domain(format!("transition probability {p} outside [0, 1]")));
        }
        if p <= COMMUTING_TOL * COMMUTING_TOL {
            return Ok(Self { r2: 0, lambda2: 0.0, d_s: 2, alpha });
        }
        let delta = if (p - 1.0).abs() <= 1e-12 { 1.0 } else { 0.0 };
        Ok(Self { r2: 2, lambda2: p / (PI * (1.0 + delta)), d_s: 2, alpha })
    }

    pub fn from_search(search: &R2Search, d_s: usize, alpha: f64) -> Self {
        Self { r2: search.r2_lower, lambda2: search.lambda2_lower, d_s, alpha }
    }

    pub fn sigma_values(&self) -> Result<(f64, f64)> {
        sigma_values(self.r2, self.lambda2, self.d_s, self.alpha)
    }
}

fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("accuracy ε = {eps} outside (0, 1)")))
    }
}

/// (σ, σ′); both vanish for r₂ = 0.
pub fn sigma_values(r2: usize, lambda2: f64, d_s: usize, alpha: f64) -> Result<(f64, f64)> {
    if r2 == 0 {
        return Ok((0.0, 0.0));
    }
    if !(lambda2 > 0.0) || !(alpha > 0.0) || d_s < 2 {
        return Err(Error::Domain(format!("need λ₂ > 0, α > 0, d_S ≥ 2 (got {lambda2}, {alpha}, {d_s})")));
    }
    let r = r2 as f64;
    let log_d = (d_s as f64).log2();
    let sigma = PI.powi(4) * E.powi(4) / 256.0 * lambda2.powi(4) * r * r / (log_d * log_d);
    let dd = (d_s * d_s) as f64;
    let sigma_prime = PI * PI / 4.0 * (lambda2 * r / (dd / 2.0 + 2.0 * alpha)).powi(2);
    Ok((sigma, sigma_prime))
}

/// Coherence (bits) any ε-accurate implementation must consume, clipped at 0.
///
/// `Qubit` evaluates the general form and expects qubit constants
/// (see [`BoundParams::qubit`]).
pub fn coherence_lower_bound(params: &BoundParams, eps: f64, variant: Variant) -> Result<f64> {
    check_eps(eps)?;
    if params.r2 == 0 {
        return Ok(0.0);
    }
    if variant == Variant::Qubit && params.d_s != 2 {
        return Err(Error::Domain(format!("qubit variant needs d_S = 2, got {}", params.d_s)));
    }
    let (sigma, sigma_prime) = params.sigma_values()?;
    let r = params.r2 as f64;
    let value = match variant {
        Variant::General | Variant::Qubit => r / 8.0 * (sigma / eps).log2(),
        Variant::Proportionate => {
            let l = (1.0 / eps).log2();
            r / 4.0 * (sigma_prime / (eps * l * l)).log2()
        }
    };
    Ok(value.max(0.0))
}

/// The qubit coherence bound for transition probability p at accuracy ε.
pub fn qubit_bound_at(p: f64, eps: f64) -> Result<f64> {
    coherence_lower_bound(&BoundParams::qubit(p, 1.0)?, eps, Variant::Qubit)
}

/// Copy number m(ε) = ⌊√r₂/(8√log₂ d_S)·ε^{−1/4}⌋.
pub fn optimal_copies(r2: usize, d_s: usize, eps: f64) -> Result<u64> {
    check_eps(eps)?;
    if r2 == 0 || d_s < 2 {
        return Ok(0);
    }
    Ok(((r2 as f64).sqrt() / (8.0 * (d_s as f64).log2().sqrt()) * eps.powf(-0.25)).floor() as u64)
}

/// Minimal battery dimension, at least 1.
pub fn dimension_lower_bound(r2: usize, sigma_prime: f64, eps: f64) -> Result<f64> {
    check_eps(eps)?;
    if r2 == 0 {
        return Ok(1.0);
    }
    let r = r2 as f64;
    let value = (1.0 / (1.0 / eps).log2()).powf(r / 2.0) * (sigma_prime / eps).powf(r / 4.0);
    Ok(value.max(1.0))
}

/// Mean battery energy under the spectral-volume constraint N(E) ≤ 1 + ηE.
pub fn energy_bound_corollary(r2: usize, sigma: f64, eta: f64, eps: f64) -> Result<f64> {
    check_eps(eps)?;
    if r2 == 0 {
        return Ok(0.0);
    }
    if !(eta > 0.0) {
        return Err(Error::Domain(format!("η = {eta} must be positive")));
    }
    Ok(sigma / (2.0 * eta) * eps.powf(-(r2 as f64) / 8.0))
}

/// Battery quantum Fisher information for a ladder of spacing ω.
pub fn qfi_bound_corollary(r2: usize, sigma: f64, omega: f64, d_s: usize, eps: f64) -> Result<f64> {
    let x = eps * d_s as f64;
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::Domain(format!("ε·d_S = {x} outside (0, 1)")));
    }
    if r2 == 0 {
        return Ok(0.0);
    }
    Ok(omega * omega * sigma * sigma / (E * PI) * x.powf(-(r2 as f64) / 4.0))
}

/// Extra inputs for a [`BoundReport`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReportOptions {
    /// Degree of the proportionate family; `None` uses 1 and sets `alpha_defaulted`.
    pub alpha: Option<f64>,
    pub variant: Variant,
    /// Spectral-volume slope for the energy bound.
    pub eta: Option<f64>,
    /// Ladder spacing for the QFI bound.
    pub omega: Option<f64>,
}

impl Default for ReportOptions {
    fn default() -> Self {
        Self { alpha: None, variant: Variant::General, eta: None, omega: None }
    }
}

/// Every bound at one accuracy with its intermediates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub eps: f64,
    pub energy_preserving: bool,
    pub r2_lower: usize,
    pub lambda2_lower: f64,
    pub sigma: f64,
    pub sigma_prime: f64,
    pub alpha: f64,
    pub alpha_defaulted: bool,
    pub m_opt: u64,
    pub coherence_bound_general: f64,
    pub coherence_bound_proportionate: f64,
    pub coherence_bound_qubit: Option<f64>,
    pub dim_bound: f64,
    pub energy_bound: Option<f64>,
    pub qfi_bound: Option<f64>,
    pub variant_used: Variant,
    /// Headline coherence bound for `variant_used`.
    pub coherence_bound: f64,
    pub o1_dropped: bool,
}

impl BoundReport {
    pub fn evaluate(gate: &GateInstance, search: &R2Search, eps: f64, opts: &ReportOptions) -> Result<Self> {
        let alpha = opts.alpha.unwrap_or(1.0);
        let d_s = gate.dim();
        let params = BoundParams::from_search(search, d_s, alpha);
        let (sigma, sigma_prime) = params.sigma_values()?;
        let general = coherence_lower_bound(&params, eps, Variant::General)?;
        let proportionate = coherence_lower_bound(&params, eps, Variant::Proportionate)?;
        let qubit = gate.qubit_transition().map(|p| qubit_bound_at(p, eps)).transpose()?;
        let coherence_bound = match opts.variant {
            Variant::General => general,
            Variant::Proportionate => proportionate,
            Variant::Qubit => qubit.ok_or_else(|| Error::Domain("qubit variant needs a two-level gate".into()))?,
        };
        let r2 = params.r2;
        Ok(Self {
            eps,
            energy_preserving: search.energy_preserving,
            r2_lower: r2,
            lambda2_lower: params.lambda2,
            sigma,
            sigma_prime,
            alpha,
            alpha_defaulted: opts.alpha.is_none(),
            m_opt: optimal_copies(r2, d_s, eps)?,
            coherence_bound_general: general,
            coherence_bound_proportionate: proportionate,
            coherence_bound_qubit: qubit,
            dim_bound: dimension_lower_bound(r2, sigma_prime, eps)?,
            energy_bound: opts.eta.map(|eta| energy_bound_corollary(r2, sigma, eta, eps)).transpose()?,
            qfi_bound: match opts.omega {
                Some(w) if eps * (d_s as f64) < 1.0 => Some(qfi_bound_corollary(r2, sigma, w, d_s, eps)?),
                _ => None,
            },
            variant_used: opts.variant,
            coherence_bound,
            o1_dropped: true,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::linalg::C64;
    use crate::quantum::random::{haar_unitary, seeded};

    fn hadamard() -> CMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        CMatrix::from_row_slice(2, 2, &[s, s, s, -s].map(|x| C64::new(x, 0.0)))
    }

    fn qubit_gate(v: CMatrix) -> GateInstance {
        GateInstance::new(Hamiltonian::diagonal(&[0.0, 1.0]).unwrap(), v).unwrap()
    }

    #[test]
    fn sigma_examples() {
        let (_, sp) = sigma_values(2, 1.0 / (2.0 * PI), 2, 1.0).unwrap();
        assert!((sp - 1.0 / 64.0).abs() < 1e-15);
        let (s, _) = sigma_values(1, 1.0, 2, 1.0).unwrap();
        let expected = PI.powi(4) * E.powi(4) / 256.0;
        assert!((s - expected).abs() < 1e-12 && (s - 20.78).abs() < 0.01);
        assert_eq!(sigma_values(0, 0.0, 2, 1.0).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn copy_number_and_resource_examples() {
        assert_eq!(optimal_copies(2, 2, 1e-4).unwrap(), 1);
        let d = dimension_lower_bound(2, 0.0156, 1e-4).unwrap();
        assert_eq!(d, 1.0);
        let d = dimension_lower_bound(2, 0.0156, 1e-8).unwrap();
        assert!((d - 47.0).abs() < 0.1, "{d}");
        assert_eq!(dimension_lower_bound(0, 1.0, 1e-8).unwrap(), 1.0);
        let e = energy_bound_corollary(1, 20.78, 1.0, 1e-4).unwrap();
        assert!((e - 32.9).abs() < 0.05, "{e}");
        let q = qfi_bound_corollary(1, 20.78, 1.0, 2, 1e-4).unwrap();
        assert!((q - 425.0).abs() < 1.0, "{q}");
        assert_eq!(energy_bound_corollary(0, 1.0, 1.0, 1e-4).unwrap(), 0.0);
        assert_eq!(qfi_bound_corollary(0, 1.0, 1.0, 2, 1e-4).unwrap(), 0.0);
    }

    #[test]
    fn domain_errors() {
        let p = BoundParams { r2: 1, lambda2: 1.0, d_s: 2, alpha: 1.0 };
        for eps in [0.0, 1.0, -0.1, 2.0] {
            assert!(matches!(coherence_lower_bound(&p, eps, Variant::General), Err(Error::Domain(_))));
        }
        assert!(qfi_bound_corollary(1, 1.0, 1.0, 4, 0.3).is_err());
    }

    #[test]
    fn hadamard_qubit_chain() {
        let g = qubit_gate(hadamard());
        let p = g.qubit_transition().unwrap();
        assert!((p - 0.5).abs() < 1e-12);
        let (sigma, _) = sigma_values(2, 0.5 / PI, 2, 1.0).unwrap();
        let b = qubit_bound_at(p, 1e-6).unwrap();
        assert!((b - 0.25 * (sigma / 1e-6).log2()).abs() < 1e-9);
    }

    #[test]
    fn rationalize_examples() {
        assert_eq!(rationalize(0.75), Some(Rational64::new(3, 4)));
        assert_eq!(rationalize(-2.0), Some(Rational64::from_integer(-2)));
        assert_eq!(rationalize(1.0 / 3.0), Some(Rational64::new(1, 3)));
        assert_eq!(rationalize(2f64.sqrt()), None);
    }

    #[test]
    fn commuting_gate_is_trivial() {
        let v = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![C64::new(1.0, 0.0), C64::new(0.0, 1.0)]));
        let g = qubit_gate(v);
        assert!(g.is_energy_preserving());
        let s = r2_lambda2_search(&g, &SearchOptions::default()).unwrap();
        assert_eq!((s.r2_lower, s.lambda2_lower, s.witness.is_none()), (0, 0.0, true));
        let opts = ReportOptions { eta: Some(1.0), omega: Some(1.0), ..Default::default() };
        for eps in [1e-2, 1e-5, 1e-8] {
            let r = BoundReport::evaluate(&g, &s, eps, &opts).unwrap();
            assert_eq!(r.coherence_bound_general, 0.0);
            assert_eq!(r.coherence_bound_proportionate, 0.0);
            assert_eq!(r.coherence_bound_qubit, Some(0.0));
            assert_eq!((r.energy_bound, r.qfi_bound, r.m_opt, r.dim_bound), (Some(0.0), Some(0.0), 0, 1.0));
        }
    }

    #[test]
    fn hadamard_search_gives_rank_one() {
        let g = qubit_gate(hadamard());
        let s = r2_lambda2_search(&g, &SearchOptions::default()).unwrap();
        assert_eq!(s.r2_lower, 1);
        assert!(s.lambda2_lower > 0.0 && s.rank_certified_exact);
        let r = BoundReport::evaluate(&g, &s, 1e-6, &ReportOptions::default()).unwrap();
        assert!(r.coherence_bound_general.is_finite() && r.coherence_bound_general >= 0.0);
        assert!(r.alpha_defaulted);
    }

    #[test]
    fn three_level_irrational_spectrum_has_rank_two() {
        let h = Hamiltonian::diagonal(&[0.0, 1.0, 2f64.sqrt()]).unwrap();
        let v = haar_unitary(3, &mut seeded(11));
        let g = GateInstance::new(h, v).unwrap();
        assert!(matches!(r2_lambda2_search(&g, &SearchOptions::default()), Err(Error::BasisRequired(_))));
        let b = Basis::new(&["1", "sqrt2"]).unwrap();
        let levels = vec![ExactReal::integer(0, &b), ExactReal::integer(1, &b), ExactReal::basis_element(1, &b)];
        let g = g.with_exact_levels(b, levels).unwrap();
        let s = r2_lambda2_search(&g, &SearchOptions::default()).unwrap();
        assert!(s.r2_lower >= 2, "{s:?}");
        assert!(s.lambda2_lower > 0.0);
        let w = s.witness.unwrap();
        assert_eq!(w.energy_support.len(), w.probabilities.len());
    }
}
