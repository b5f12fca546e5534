//! Ladder batteries, the resonant qubit construction, spectral counting and
//! battery resource reports.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds;
use crate::channels::{TepChannel, WorstCaseOptions};
use crate::coherence::entropic_coherence;
use crate::error::{Error, Result};
use crate::quantum::linalg::{self, CMatrix, C64};
use crate::quantum::{moments, qfi, DensityOperator, Hamiltonian, PureState};
use crate::tol;

/// Truncated harmonic oscillator with levels 0, ω, …, (d_B−1)ω.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LadderBattery {
    d_b: usize,
    omega: f64,
}

impl LadderBattery {
    pub fn new(d_b: usize, omega: f64) -> Result<Self> {
        if d_b < 2 {
            return Err(Error::Domain(format!("ladder needs at least two levels, got {d_b}")));
        }
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(Error::Domain(format!("ladder spacing must be positive, got {omega}")));
        }
        Ok(Self { d_b, omega })
    }

    pub fn d_b(&self) -> usize {
        self.d_b
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn hamiltonian(&self) -> Hamiltonian {
        let energies: Vec<f64> = (0..self.d_b).map(|k| k as f64 * self.omega).collect();
        Hamiltonian::diagonal(&energies).expect("ladder spectrum is finite")
    }
}

pub fn ladder_hamiltonian(d_b: usize, omega: f64) -> Result<Hamiltonian> {
    Ok(LadderBattery::new(d_b, omega)?.hamiltonian())
}

/// Amplitude profile of a ladder state supported on L consecutive levels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LadderProfile {
    /// Equal amplitudes 1/√L.
    #[default]
    Uniform,
    /// Amplitudes ∝ sin(π(n+1)/(L+1)), which suppress the support edges.
    Sine,
}

impl LadderProfile {
    fn amplitudes(self, len: usize) -> Vec<f64> {
        match self {
            Self::Uniform => vec![1.0; len],
            Self::Sine => {
                let step = std::f64::consts::PI / (len + 1) as f64;
                (0..len).map(|n| (step * (n + 1) as f64).sin()).collect()
            }
        }
    }

    /// The profile's state on levels n0 .. n0+len of a d_B-level ladder.
    pub fn state(self, d_b: usize, n0: usize, len: usize) -> Result<PureState> {
        if len == 0 {
            return Err(Error::Domain("ladder state needs at least one level".into()));
        }
        let needed = n0.checked_add(len).ok_or(Error::Overflow)?;
        if needed > d_b {
            return Err(Error::SupportExceedsBattery { needed, d_b });
        }
        let mut amps = vec![0.0; d_b];
        amps[n0..needed].copy_from_slice(&self.amplitudes(len));
        PureState::from_amplitudes(&amps)
    }
}

/// (1/√L) Σ_{n=n0}^{n0+L−1} |n⟩.
pub fn uniform_ladder_state(d_b: usize, n0: usize, len: usize) -> Result<PureState> {
    LadderProfile::Uniform.state(d_b, n0, len)
}

/// Sine-profile ladder state on levels n0 .. n0+L.
pub fn sine_ladder_state(d_b: usize, n0: usize, len: usize) -> Result<PureState> {
    LadderProfile::Sine.state(d_b, n0, len)
}

/// Phase of `z`, or 1 when it vanishes.
fn phase(z: C64) -> C64 {
    if z.norm() > tol::PURE_NORM {
        z / z.norm()
    } else {
        C64::new(1.0, 0.0)
    }
}

/// Joint unitary acting as V on each span{|0,k⟩, |1,k−1⟩}.
///
/// The two one-dimensional edge eigenspaces |0,0⟩ and |1,d_B−1⟩ carry the
/// phases of V₀₀ and V₁₁, so diagonal gates are reproduced exactly.
fn ladder_unitary(v: &CMatrix, d_b: usize) -> CMatrix {
    let dim = 2 * d_b;
    let mut u = CMatrix::zeros(dim, dim);
    u[(0, 0)] = phase(v[(0, 0)]);
    u[(dim - 1, dim - 1)] = phase(v[(1, 1)]);
    for k in 1..d_b {
        let (a, b) = (k, d_b + k - 1);
        u[(a, a)] = v[(0, 0)];
        u[(a, b)] = v[(0, 1)];
        u[(b, a)] = v[(1, 0)];
        u[(b, b)] = v[(1, 1)];
    }
    u
}

/// Resonant qubit implementation with H_S = diag(0, ω).
pub fn qubit_ladder_channel(v: &CMatrix, battery: &LadderBattery, beta: DensityOperator) -> Result<TepChannel> {
    let h_s = Hamiltonian::diagonal(&[0.0, battery.omega()])?;
    qubit_ladder_channel_for(h_s, v, battery, beta)
}

/// As [`qubit_ladder_channel`], for a caller-supplied system Hamiltonian that
/// must be diagonal with gap exactly ω.
pub fn qubit_ladder_channel_for(
    h_s: Hamiltonian,
    v: &CMatrix,
    battery: &LadderBattery,
    beta: DensityOperator,
) -> Result<TepChannel> {
    if v.nrows() != 2 || v.ncols() != 2 {
        return Err(Error::ShapeMismatch(format!("qubit gate expected, got {}x{}", v.nrows(), v.ncols())));
    }
    linalg::ensure_unitary(v)?;
    let column = h_s.column_energies();
    let resonant = h_s.dim() == 2
        && h_s.is_diagonal()
        && (column[1] - column[0] - battery.omega()).abs() <= tol::MATRIX * battery.omega().max(1.0);
    if !resonant {
        return Err(Error::ResonanceRequired(format!(
            "system must be diag(E, E+{}) in the computational basis",
            battery.omega()
        )));
    }
    let u = ladder_unitary(v, battery.d_b());
    TepChannel::new(h_s, battery.hamiltonian(), beta, u)
}

/// N(E, H) = number of eigenvalues (with multiplicity) not exceeding E.
pub fn spectral_count(energy: f64, h: &Hamiltonian) -> usize {
    let cut = energy + h.grouping_tol();
    h.energies().iter().enumerate().take_while(|(_, &e)| e <= cut).map(|(k, _)| h.multiplicity(k)).sum()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BatteryReport {
    pub coherence: f64,
    pub mean_energy: f64,
    pub variance: f64,
    pub qfi: f64,
    /// Largest energy level carrying population.
    pub e_max: f64,
    pub n_levels_2emax: usize,
}

pub fn battery_report(beta: &DensityOperator, h_b: &Hamiltonian) -> Result<BatteryReport> {
    let coherence = entropic_coherence(beta, h_b)?;
    let (mean_energy, variance) = moments(beta, h_b)?;
    let local = h_b.to_eigenbasis(beta.matrix());
    let e_max = (0..h_b.num_levels())
        .rev()
        .find(|&k| h_b.members(k).iter().map(|&i| local[(i, i)].re).sum::<f64>() > tol::OCCUPIED)
        .map(|k| h_b.energies()[k])
        .unwrap_or(h_b.energies()[0]);
    Ok(BatteryReport {
        coherence,
        mean_energy,
        variance,
        qfi: qfi(beta, h_b)?,
        e_max,
        n_levels_2emax: spectral_count(2.0 * e_max, h_b),
    })
}

/// Parameters of a ladder sweep over support lengths L.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub d_b: usize,
    pub omega: f64,
    pub lengths: Vec<usize>,
    #[serde(default)]
    pub profile: LadderProfile,
    #[serde(default)]
    pub optimizer: WorstCaseOptions,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    #[serde(rename = "L")]
    pub len: usize,
    pub eps_choi: f64,
    pub eps_wc_estimate: f64,
    pub eps_wc_upper: f64,
    pub coherence_bits: f64,
    pub mean_energy: f64,
    pub variance: f64,
    pub qfi: f64,
    /// Qubit coherence lower bound evaluated at eps_wc_upper.
    pub bound_value: f64,
    pub converged: bool,
}

/// One row per L, with the battery centred in the ladder.
pub fn battery_sweep(v: &CMatrix, cfg: &SweepConfig) -> Result<Vec<SweepRow>> {
    let battery = LadderBattery::new(cfg.d_b, cfg.omega)?;
    let p = v.get((0, 1)).map(|z| z.norm_sqr()).unwrap_or(0.0);
    cfg.lengths
        .par_iter()
        .map(|&len| {
            let n0 = cfg.d_b.saturating_sub(len) / 2;
            let beta = cfg.profile.state(cfg.d_b, n0, len)?.to_density();
            let report = battery_report(&beta, &battery.hamiltonian())?;
            let ch = qubit_ladder_channel(v, &battery, beta)?;
            let approx = ch.worst_case_infidelity(v, &cfg.optimizer)?;
            Ok(SweepRow {
                len,
                eps_choi: approx.eps_choi,
                eps_wc_estimate: approx.eps_wc_estimate,
                eps_wc_upper: approx.eps_wc_upper,
                coherence_bits: report.coherence,
                mean_energy: report.mean_energy,
                variance: report.variance,
                qfi: report.qfi,
                bound_value: bounds::qubit_bound_at(p, approx.eps_wc_upper)?,
                converged: approx.converged,
            })
        })
        .collect()
}
