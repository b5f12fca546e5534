//! Asymptotic entropy lower bounds for i.i.d. sums, the exact qubit
//! production entropy and its discretized-normal approximant.

use rayon::prelude::*;
use serde::Serialize;
use statrs::function::erf::erfc;

use super::rank::{analyze_prepartition, Prepartition};
use super::rv::{entropy_bits, DiscreteRV};
use crate::error::{Error, Result};

const TWO_PI_E: f64 = 2.0 * std::f64::consts::PI * std::f64::consts::E;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundBranch {
    /// ½log₂ N + ½log₂(2πe Var/h²) for a lattice variable.
    Lattice,
    /// (k/2) log₂(2πe N λ₁): some subset has two or more points.
    Lambda1,
    /// ((k−1)/2) log₂(2πe N λ₂): every subset is a single point.
    Lambda2,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntropyBound {
    pub value: f64,
    pub branch: BoundBranch,
    pub lambda: f64,
    pub k: usize,
    /// The vanishing correction of the asymptotic statement is not included.
    pub o1_dropped: bool,
}

/// The λ of a prepartition and the branch of the bound it enters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PrepartitionLambda {
    pub branch: BoundBranch,
    pub lambda: f64,
    pub k: usize,
}

impl PrepartitionLambda {
    /// Prefactor of log₂(2πe N λ): k/2, or (k−1)/2 on the all-singleton branch.
    pub fn prefactor(&self) -> f64 {
        match self.branch {
            BoundBranch::Lambda2 => (self.k - 1) as f64 / 2.0,
            _ => self.k as f64 / 2.0,
        }
    }
}

/// λ₁ (some subset has two or more points), λ₂ (all singletons), or
/// Var/h² when the single subset is the whole lattice support.
///
/// The prepartition's subsets must be lattices; incommensurability is the
/// caller's responsibility (see `certify_incommensurable`).
pub fn prepartition_lambda(x: &DiscreteRV, part: &Prepartition) -> Result<PrepartitionLambda> {
    if x.is_deterministic() {
        return Err(Error::Undefined("entropy bound of a deterministic variable".into()));
    }
    let info = analyze_prepartition(x, part)?;
    let k = info.len();
    if k == 1 && info[0].size == x.len() {
        let h = info[0].span.expect("two or more points");
        return Ok(PrepartitionLambda { branch: BoundBranch::Lattice, lambda: x.variance() / (h * h), k });
    }
    let q: f64 = info.iter().map(|s| s.p).sum();
    let (singles, groups): (Vec<_>, Vec<_>) = info.iter().partition(|s| s.size == 1);
    if groups.is_empty() {
        if k == 1 {
            return Err(Error::Undefined("a single one-point subset carries no entropy".into()));
        }
        let lambda = (singles.iter().map(|s| s.p / q).product::<f64>()).powf(1.0 / (k - 1) as f64);
        return Ok(PrepartitionLambda { branch: BoundBranch::Lambda2, lambda, k });
    }
    let single_part =
        singles.iter().map(|s| s.p).product::<f64>() * (1.0 - singles.iter().map(|s| s.p / q).sum::<f64>());
    let group_part: f64 =
        groups.iter().map(|s| s.p * s.conditional_variance / s.span.expect("lattice").powi(2)).product();
    let lambda = (single_part * group_part).powf(1.0 / k as f64);
    Ok(PrepartitionLambda { branch: BoundBranch::Lambda1, lambda, k })
}

/// Lower bound on S(X₁+…+X_N) in bits from a canonical prepartition.
pub fn entropy_lower_bound(x: &DiscreteRV, n: usize, part: &Prepartition) -> Result<EntropyBound> {
    if n == 0 {
        return Err(Error::Domain("number of summands must be positive".into()));
    }
    let l = prepartition_lambda(x, part)?;
    Ok(EntropyBound {
        value: l.prefactor() * (TWO_PI_E * n as f64 * l.lambda).log2(),
        branch: l.branch,
        lambda: l.lambda,
        k: l.k,
        o1_dropped: true,
    })
}

/// pmf of a sum of two independent binomials, Bin(a, p) + Bin(b, q).
fn binomial_pair_pmf(a: usize, p: f64, b: usize, q: f64) -> Vec<f64> {
    let binom = |n: usize, p: f64| {
        let mut pmf = vec![0.0; n + 1];
        pmf[0] = 1.0;
        for i in 0..n {
            for j in (0..=i + 1).rev() {
                let stay = if j <= i { pmf[j] * (1.0 - p) } else { 0.0 };
                let step = if j > 0 { pmf[j - 1] * p } else { 0.0 };
                pmf[j] = stay + step;
            }
        }
        pmf
    };
    let (x, y) = (binom(a, p), binom(b, q));
    let mut out = vec![0.0; a + b + 1];
    for (i, xi) in x.iter().enumerate() {
        for (j, yj) in y.iter().enumerate() {
            out[i + j] += xi * yj;
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProductionEntropy {
    /// Entropy in bits of the energy distribution after the 2m-copy gate.
    pub exact: f64,
    /// log₂(4m sin²θ) − δ_{1,sin²θ}; absent for the trivial gate.
    pub asymptotic_floor: Option<f64>,
}

/// sin²θ within rounding of 1.
fn is_full_flip(s2: f64) -> bool {
    (1.0 - s2).abs() <= 1e-12
}

/// Distribution of energy after the qubit construction: the uniform mixture
/// over k = 0..2m of Bin(k, cos²θ) + Bin(2m−k, sin²θ) − k, indexed from −2m.
pub fn qubit_production_distribution(theta: f64, m: usize) -> Result<Vec<f64>> {
    if m == 0 {
        return Err(Error::Domain("copy number m must be positive".into()));
    }
    let s2 = theta.sin().powi(2);
    let c2 = 1.0 - s2;
    let copies = 2 * m;
    let weight = 1.0 / (copies + 1) as f64;
    let parts: Vec<(usize, Vec<f64>)> = (0..=copies)
        .into_par_iter()
        .map(|k| (k, binomial_pair_pmf(k, c2, copies - k, s2)))
        .collect();
    let mut mixture = vec![0.0; 2 * copies + 1];
    for (k, pmf) in parts {
        // Value n = j − k lands at index n + 2m.
        for (j, p) in pmf.into_iter().enumerate() {
            mixture[j + copies - k] += weight * p;
        }
    }
    Ok(mixture)
}

pub fn qubit_production_entropy(theta: f64, m: usize) -> Result<ProductionEntropy> {
    let exact = entropy_bits(qubit_production_distribution(theta, m)?);
    let s2 = theta.sin().powi(2);
    let asymptotic_floor = (s2 > 0.0).then(|| (4.0 * m as f64 * s2).log2() - if is_full_flip(s2) { 1.0 } else { 0.0 });
    Ok(ProductionEntropy { exact, asymptotic_floor })
}

/// Means 2(m−k)sin²θ (k = 0..2m) and common standard deviation √(2m) |cosθ sinθ|.
pub fn qubit_normal_parameters(theta: f64, m: usize) -> (Vec<f64>, f64) {
    let s2 = theta.sin().powi(2);
    let mus = (0..=2 * m).map(|k| 2.0 * (m as f64 - k as f64) * s2).collect();
    let sigma = (2.0 * m as f64 * s2 * (1.0 - s2)).sqrt();
    (mus, sigma)
}

fn normal_cdf(z: f64) -> f64 {
    0.5 * erfc(-z / std::f64::consts::SQRT_2)
}

/// Entropy in bits of the uniform mixture of discretized normals
/// N_d(μ, σ)[n] = Pr(n − ½ < N(μ, σ²) ≤ n + ½), over the integer window.
///
/// The default window is the union of μ ± 12σ (at least ±1). Mass outside
/// the window is dropped without renormalizing.
pub fn discretized_normal_mixture_entropy(mus: &[f64], sigma: f64, window: Option<(i64, i64)>) -> Result<f64> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::Domain(format!("sigma must be positive, got {sigma}")));
    }
    if mus.is_empty() {
        return Err(Error::Domain("mixture needs at least one mean".into()));
    }
    let (lo, hi) = window.unwrap_or_else(|| {
        let reach = (12.0 * sigma).max(1.0);
        let lo = mus.iter().copied().fold(f64::INFINITY, f64::min) - reach;
        let hi = mus.iter().copied().fold(f64::NEG_INFINITY, f64::max) + reach;
        (lo.floor() as i64, hi.ceil() as i64)
    });
    if hi < lo {
        return Err(Error::Domain(format!("empty window [{lo}, {hi}]")));
    }
    let w = 1.0 / mus.len() as f64;
    let probs = (lo..=hi).into_par_iter().map(|n| {
        mus.iter()
            .map(|&mu| {
                let (a, b) = ((n as f64 - 0.5 - mu) / sigma, (n as f64 + 0.5 - mu) / sigma);
                // Use the upper tail on the right to keep relative precision.
                if a > 0.0 {
                    normal_cdf(-a) - normal_cdf(-b)
                } else {
                    normal_cdf(b) - normal_cdf(a)
                }
            })
            .sum::<f64>()
            * w
    });
    let terms: Vec<f64> = probs.collect();
    Ok(entropy_bits(terms))
}
