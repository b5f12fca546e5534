use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quantum::linalg::{self, CMatrix, C64};
use crate::quantum::random::{random_density, seeded};

/// Bracket and estimate of the worst-case infidelity against a target unitary.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChannelApproxReport {
    pub eps_choi: f64,
    pub eps_wc_lower: f64,
    pub eps_wc_estimate: f64,
    pub eps_wc_upper: f64,
    pub diamond_lower: f64,
    pub diamond_upper: f64,
    /// Frank–Wolfe gap of the best start: ε_wc ≤ estimate + gap.
    pub duality_gap: f64,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, serde::Deserialize)]
pub struct WorstCaseOptions {
    pub starts: usize,
    pub max_iters: usize,
    pub tol: f64,
    pub seed: u64,
}

impl Default for WorstCaseOptions {
    fn default() -> Self {
        Self { starts: 32, max_iters: 5000, tol: 1e-10, seed: 0 }
    }
}

fn check_target(kraus: &[CMatrix], v: &CMatrix) -> Result<usize> {
    let d = v.nrows();
    if !v.is_square() || kraus.iter().any(|k| k.nrows() != d || k.ncols() != d) {
        return Err(Error::ShapeMismatch("target unitary and channel dimensions differ".into()));
    }
    linalg::ensure_unitary(v)?;
    Ok(d)
}

/// 1 − F between the Choi states of the channel and of V.
pub fn choi_infidelity_kraus(kraus: &[CMatrix], v: &CMatrix) -> Result<f64> {
    let d = check_target(kraus, v)? as f64;
    let vd = v.adjoint();
    let overlap: f64 = kraus.iter().map(|k| (linalg::trace(&(&vd * k)) / d).norm_sqr()).sum();
    Ok((1.0 - overlap).clamp(0.0, 1.0))
}

/// Entanglement fidelity as a function of the reduced input: Σ_k |tr(A_k ρ)|².
struct FidelityObjective {
    ops: Vec<CMatrix>,
    dim: usize,
}

impl FidelityObjective {
    fn overlaps(&self, rho: &CMatrix) -> Vec<C64> {
        let rt = rho.transpose();
        self.ops.iter().map(|a| a.iter().zip(rt.iter()).map(|(x, y)| x * y).sum()).collect()
    }

    fn value(&self, rho: &CMatrix) -> f64 {
        self.overlaps(rho).iter().map(|z| z.norm_sqr()).sum()
    }

    fn value_and_gradient(&self, rho: &CMatrix) -> (f64, CMatrix) {
        let z = self.overlaps(rho);
        let grad = self.ops.iter().zip(&z).fold(CMatrix::zeros(self.dim, self.dim), |acc, (a, z)| {
            acc + a * z.conj() + a.adjoint() * *z
        });
        (z.iter().map(|z| z.norm_sqr()).sum(), linalg::hermitize(&grad))
    }
}

/// Projection onto density matrices.
fn project_density(m: &CMatrix) -> CMatrix {
    let (values, vectors) = linalg::eigh(m);
    let p = linalg::project_simplex(&values);
    let scaled = CMatrix::from_fn(m.nrows(), m.ncols(), |r, c| vectors[(r, c)] * p[c]);
    linalg::hermitize(&(scaled * vectors.adjoint()))
}

struct StartResult {
    fidelity: f64,
    gap: f64,
}

/// Fidelity differences below this are round-off.
const TIE: f64 = 1e-15;

/// Accelerated projected gradient with restart; returns the final value and duality gap.
fn minimize_from(obj: &FidelityObjective, start: CMatrix, max_iters: usize, tol: f64) -> StartResult {
    let step = 1.0 / (2.0 * obj.ops.iter().map(|a| linalg::inner(a, a).re).sum::<f64>().max(1e-300));
    let mut x = start.clone();
    let mut y = start;
    let mut t = 1.0f64;
    let mut f_prev = obj.value(&x);
    let mut best = (f_prev, f64::INFINITY);
    for _ in 0..max_iters {
        let (_, gy) = obj.value_and_gradient(&y);
        let x_next = project_density(&(&y - gy.scale(step)));
        let (fx, gx) = obj.value_and_gradient(&x_next);
        let lambda_min = linalg::eigvalsh(&gx)[0];
        let gap = (linalg::inner(&gx, &x_next).re - lambda_min).max(0.0);
        // Ties within round-off go to the better certificate.
        if fx < best.0 - TIE || (fx <= best.0 + TIE && gap < best.1) {
            best = (fx, gap);
        }
        if gap <= tol {
            break;
        }
        let restart = fx > f_prev;
        f_prev = fx;
        let t_next = if restart { 1.0 } else { 0.5 * (1.0 + (1.0 + 4.0 * t * t).sqrt()) };
        y = if restart { x_next.clone() } else { &x_next + (&x_next - &x).scale((t - 1.0) / t_next) };
        t = t_next;
        x = x_next;
    }
    StartResult { fidelity: best.0, gap: best.1 }
}

/// Minimizes the extended-input fidelity between the channel and V.
///
/// For a pure input on S⊗A the fidelity depends only on the reduced input ρ
/// and is convex in it, so every start converges to the global minimum; the
/// duality gap certifies how close.
pub fn worst_case_infidelity_kraus(kraus: &[CMatrix], v: &CMatrix, opts: &WorstCaseOptions) -> Result<ChannelApproxReport> {
    let d = check_target(kraus, v)?;
    let eps_choi = choi_infidelity_kraus(kraus, v)?;
    let vd = v.adjoint();
    let obj = FidelityObjective { ops: kraus.iter().map(|k| &vd * k).collect(), dim: d };
    let starts = opts.starts.max(1);
    let results: Vec<StartResult> = (0..starts)
        .into_par_iter()
        .map(|i| {
            let start = if i == 0 {
                CMatrix::identity(d, d).unscale(d as f64)
            } else {
                let mut rng = seeded(opts.seed.wrapping_mul(0x9E37_79B9).wrapping_add(i as u64));
                random_density(d, d, &mut rng).into_matrix()
            };
            minimize_from(&obj, start, opts.max_iters, opts.tol)
        })
        .collect();
    let lowest = results.iter().map(|r| r.fidelity).fold(f64::INFINITY, f64::min);
    let best = results
        .iter()
        .filter(|r| r.fidelity <= lowest + opts.tol)
        .min_by(|a, b| a.gap.total_cmp(&b.gap))
        .expect("at least one start");
    let eps_wc_upper = (d as f64 * eps_choi).min(1.0);
    let eps_wc_estimate = (1.0 - best.fidelity).clamp(eps_choi, eps_wc_upper);
    let (diamond_lower, _) = fvdg_interval(eps_wc_estimate)?;
    let (_, diamond_upper) = fvdg_interval((eps_wc_estimate + best.gap).min(eps_wc_upper))?;
    Ok(ChannelApproxReport {
        eps_choi,
        eps_wc_lower: eps_choi,
        eps_wc_estimate,
        eps_wc_upper,
        diamond_lower,
        diamond_upper,
        duality_gap: best.gap,
        converged: best.gap <= opts.tol,
    })
}

/// Fuchs–van de Graaf interval (1 − √(1−ε), √ε) for the distance.
pub fn fvdg_interval(eps_wc: f64) -> Result<(f64, f64)> {
    if !(0.0..=1.0).contains(&eps_wc) {
        return Err(Error::Domain(format!("infidelity {eps_wc} outside [0, 1]")));
    }
    Ok((1.0 - (1.0 - eps_wc).sqrt(), eps_wc.sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::random::haar_unitary;
    use std::f64::consts::PI;

    /// Squared distance from the origin to the convex hull of unit-circle points.
    fn hull_distance_sq(points: &[C64]) -> f64 {
        let mut angles: Vec<f64> = points.iter().map(|z| z.arg()).collect();
        angles.sort_by(f64::total_cmp);
        let n = angles.len();
        let max_gap = (0..n)
            .map(|i| if i + 1 < n { angles[i + 1] - angles[i] } else { angles[0] + 2.0 * PI - angles[n - 1] })
            .fold(0.0, f64::max);
        if max_gap < PI {
            return 0.0;
        }
        let mut best = f64::INFINITY;
        for a in points {
            for b in points {
                let ab = b - a;
                let t = if ab.norm_sqr() > 0.0 { (-(a.conj() * ab).re / ab.norm_sqr()).clamp(0.0, 1.0) } else { 0.0 };
                best = best.min((a + ab * t).norm_sqr());
            }
        }
        best
    }

    #[test]
    fn unitary_pairs_match_eigenvalue_arc_oracle() {
        let mut rng = seeded(5);
        for trial in 0..12 {
            let d = 2 + trial % 2;
            let v = haar_unitary(d, &mut rng);
            let w = haar_unitary(d, &mut rng);
            let report = worst_case_infidelity_kraus(std::slice::from_ref(&w), &v, &WorstCaseOptions::default()).unwrap();
            let schur = (v.adjoint() * &w).schur();
            let (_, t) = schur.unpack();
            let points: Vec<C64> = (0..d).map(|i| t[(i, i)]).collect();
            let oracle = 1.0 - hull_distance_sq(&points);
            assert!((report.eps_wc_estimate - oracle).abs() < 1e-8, "{} vs {oracle}", report.eps_wc_estimate);
            assert!(report.eps_choi <= report.eps_wc_estimate + 1e-12);
            assert!(report.eps_wc_estimate <= d as f64 * report.eps_choi + 1e-9);
        }
    }

    #[test]
    fn exact_channel_has_zero_error() {
        let mut rng = seeded(9);
        let v = haar_unitary(3, &mut rng);
        let r = worst_case_infidelity_kraus(std::slice::from_ref(&v), &v, &WorstCaseOptions::default()).unwrap();
        assert!(r.eps_choi < 1e-14 && r.eps_wc_estimate < 1e-14 && r.eps_wc_upper < 1e-13);
        assert!(r.converged);
    }

    #[test]
    fn fvdg_examples() {
        assert_eq!(fvdg_interval(0.0).unwrap(), (0.0, 0.0));
        assert_eq!(fvdg_interval(1.0).unwrap(), (1.0, 1.0));
        let (lo, hi) = fvdg_interval(0.04).unwrap();
        assert!((lo - (1.0 - 0.96f64.sqrt())).abs() < 1e-15 && (hi - 0.2).abs() < 1e-15);
        assert!((lo - 0.0202).abs() < 1e-4);
        assert!(matches!(fvdg_interval(1.5), Err(Error::Domain(_))));
        assert!(matches!(fvdg_interval(-0.1), Err(Error::Domain(_))));
    }
}
