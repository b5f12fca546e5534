//! Minimal energy and variance of a battery state carrying a given amount of
//! coherence. Only the distribution over distinct energy levels matters (the
//! coherence of a pure lift is its Shannon entropy), so every solver works on
//! the list of distinct levels.

use std::f64::consts::{E, PI};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::quantum::Hamiltonian;

const ENTROPY_TOL: f64 = 1e-9;
const MAX_ITERS: usize = 200;
const MAX_DOUBLINGS: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MinEnergy {
    pub energy: f64,
    /// Inverse temperature of the optimal Gibbs distribution; infinite at C = 0.
    pub gamma: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MinVariance {
    pub variance: f64,
    /// Centre of the optimal Gaussian profile on the grid.
    pub mu: f64,
    pub zeta: f64,
    /// ω²·2^{2C}/(eπ) for equally spaced spectra.
    pub reference: Option<f64>,
    /// ω²·2^{2C}/(2πe), the entropy-power value for equally spaced spectra.
    pub gaussian_reference: Option<f64>,
}

/// Largest coherence a battery of dimension `d_b` can hold when its state has
/// rank `rank` and the Hamiltonian has `levels` distinct energies.
pub fn coherence_ceiling(rank: usize, levels: usize, d_b: usize) -> f64 {
    (d_b.min(rank.saturating_mul(levels)).max(1) as f64).log2()
}

/// Shannon entropy (bits), mean and variance of p_k ∝ exp(−w_k) over `levels`.
fn weighted(levels: &[f64], exponent: impl Fn(f64) -> f64) -> (f64, f64, f64) {
    let xs: Vec<f64> = levels.iter().map(|&e| exponent(e)).collect();
    let shift = xs.iter().copied().fold(f64::INFINITY, f64::min);
    let w: Vec<f64> = xs.iter().map(|x| (-(x - shift)).exp()).collect();
    let z: f64 = w.iter().sum();
    let mut h = 0.0;
    let mut mean = 0.0;
    for (&wk, (&e, &x)) in w.iter().zip(levels.iter().zip(&xs)) {
        let p = wk / z;
        if p > 0.0 {
            // −log p = (x − shift) + ln z
            h += p * ((x - shift) + z.ln());
            mean += p * e;
        }
    }
    let var = w.iter().zip(levels).map(|(&wk, &e)| wk / z * (e - mean).powi(2)).sum();
    (h / std::f64::consts::LN_2, mean, var)
}

/// Finds t ≥ 0 with entropy(t) = c for an entropy decreasing in t.
fn solve_decreasing(c: f64, scale: f64, entropy: impl Fn(f64) -> f64) -> Option<f64> {
    let mut hi = scale;
    let mut doublings = 0;
    while entropy(hi) > c {
        hi *= 2.0;
        doublings += 1;
        if doublings > MAX_DOUBLINGS || !hi.is_finite() {
            return None;
        }
    }
    let mut lo = 0.0;
    let mut mid = hi;
    for _ in 0..MAX_ITERS {
        mid = 0.5 * (lo + hi);
        let s = entropy(mid);
        if (s - c).abs() <= ENTROPY_TOL {
            break;
        }
        if s > c {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(mid)
}

fn check_coherence(h: &Hamiltonian, c: f64) -> Result<f64> {
    let max = (h.num_levels() as f64).log2();
    if !(c >= 0.0 && c <= max + 1e-12) {
        return Err(Error::Domain(format!("coherence {c} outside [0, {max}]")));
    }
    Ok(max)
}

fn spread(levels: &[f64]) -> f64 {
    (levels[levels.len() - 1] - levels[0]).max(f64::MIN_POSITIVE)
}

/// Lowest mean energy at coherence C, attained by a Gibbs distribution.
pub fn min_energy_at_coherence(h_b: &Hamiltonian, c: f64) -> Result<MinEnergy> {
    let max = check_coherence(h_b, c)?;
    let levels = h_b.energies();
    if c <= ENTROPY_TOL {
        return Ok(MinEnergy { energy: levels[0], gamma: f64::INFINITY });
    }
    if c >= max - ENTROPY_TOL {
        let mean = levels.iter().sum::<f64>() / levels.len() as f64;
        return Ok(MinEnergy { energy: mean, gamma: 0.0 });
    }
    let e0 = levels[0];
    let entropy = |g: f64| weighted(levels, |e| g * (e - e0)).0;
    let gamma = solve_decreasing(c, 1.0 / spread(levels), entropy)
        .ok_or_else(|| Error::Domain(format!("no inverse temperature reaches coherence {c}")))?;
    Ok(MinEnergy { energy: weighted(levels, |e| gamma * (e - e0)).1, gamma })
}

/// Evenly spaced centres across the spectrum.
pub fn default_mu_grid(h_b: &Hamiltonian, points: usize) -> Vec<f64> {
    let levels = h_b.energies();
    let (a, b) = (levels[0], levels[levels.len() - 1]);
    match points {
        0 => Vec::new(),
        1 => vec![0.5 * (a + b)],
        n => (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect(),
    }
}

/// Spacing of an equally spaced spectrum.
fn ladder_spacing(levels: &[f64]) -> Option<f64> {
    if levels.len() < 2 {
        return None;
    }
    let w = levels[1] - levels[0];
    levels.windows(2).all(|p| ((p[1] - p[0]) - w).abs() <= 1e-9 * w.abs().max(1.0)).then_some(w)
}

/// Infimum over `mu_grid` of the variance of p ∝ exp(−ζ(E−μ)²) at coherence C.
pub fn min_variance_at_coherence(h_b: &Hamiltonian, c: f64, mu_grid: &[f64]) -> Result<MinVariance> {
    let max = check_coherence(h_b, c)?;
    let levels = h_b.energies();
    let refs = ladder_spacing(levels).map(|w| {
        let base = w * w * 2f64.powf(2.0 * c);
        (base / (E * PI), base / (2.0 * PI * E))
    });
    let done = |variance, mu, zeta| MinVariance {
        variance,
        mu,
        zeta,
        reference: refs.map(|r| r.0),
        gaussian_reference: refs.map(|r| r.1),
    };
    if c <= ENTROPY_TOL {
        return Ok(done(0.0, levels[0], f64::INFINITY));
    }
    if c >= max - ENTROPY_TOL {
        let (_, mean, var) = weighted(levels, |_| 0.0);
        return Ok(done(var, mean, 0.0));
    }
    if mu_grid.is_empty() {
        return Err(Error::Domain("empty μ grid".into()));
    }
    let scale = 1.0 / spread(levels).powi(2);
    let best = mu_grid
        .iter()
        .filter_map(|&mu| {
            let entropy = |z: f64| weighted(levels, |e| z * (e - mu).powi(2)).0;
            let zeta = solve_decreasing(c, scale, entropy)?;
            Some((weighted(levels, |e| zeta * (e - mu).powi(2)).2, mu, zeta))
        })
        .min_by(|a, b| a.0.total_cmp(&b.0))
        .ok_or_else(|| Error::Domain(format!("no μ on the grid reaches coherence {c}")))?;
    Ok(done(best.0, best.1, best.2))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ladder(d: usize) -> Hamiltonian {
        Hamiltonian::diagonal(&(0..d).map(|k| k as f64).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn energy_endpoints() {
        let h = Hamiltonian::diagonal(&[0.5, 1.0, 3.0, 4.5]).unwrap();
        let r = min_energy_at_coherence(&h, 0.0).unwrap();
        assert_eq!((r.energy, r.gamma), (0.5, f64::INFINITY));
        let r = min_energy_at_coherence(&h, 2.0).unwrap();
        assert!((r.energy - 2.25).abs() < 1e-12 && r.gamma == 0.0);
        assert!(min_energy_at_coherence(&h, 2.1).is_err());
        assert!(min_energy_at_coherence(&h, -0.1).is_err());
    }

    #[test]
    fn energy_hits_the_constraint_and_is_monotone() {
        let h = ladder(64);
        let mut last = f64::NEG_INFINITY;
        for c in [0.5, 1.0, 2.0, 3.0, 4.0, 5.0] {
            let r = min_energy_at_coherence(&h, c).unwrap();
            let (s, mean, _) = weighted(h.energies(), |e| r.gamma * e);
            assert!((s - c).abs() <= 1e-9 && (mean - r.energy).abs() < 1e-12);
            assert!(r.energy > last);
            last = r.energy;
        }
    }

    #[test]
    fn variance_endpoints_and_monotone() {
        let h = ladder(32);
        assert_eq!(min_variance_at_coherence(&h, 0.0, &[3.0]).unwrap().variance, 0.0);
        let grid = default_mu_grid(&h, 33);
        let mut last = 0.0;
        for c in [0.5, 1.0, 2.0, 3.0, 4.0] {
            let r = min_variance_at_coherence(&h, c, &grid).unwrap();
            assert!(r.variance > last);
            last = r.variance;
        }
        let full = min_variance_at_coherence(&h, 5.0, &grid).unwrap();
        assert!((full.variance - (32.0f64 * 32.0 - 1.0) / 12.0).abs() < 1e-9);
    }

    #[test]
    fn variance_decreases_toward_the_interior() {
        let h = ladder(256);
        let c = 3.0;
        let vars: Vec<f64> =
            [0.0, 8.0, 32.0, 128.0].iter().map(|&mu| min_variance_at_coherence(&h, c, &[mu]).unwrap().variance).collect();
        assert!(vars.windows(2).all(|w| w[1] <= w[0] + 1e-9), "{vars:?}");
    }

    #[test]
    fn ceiling() {
        assert_eq!(coherence_ceiling(1, 16, 8), 3.0);
        assert_eq!(coherence_ceiling(2, 4, 64), 3.0);
    }
}
