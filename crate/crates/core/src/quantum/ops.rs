use super::hamiltonian::Hamiltonian;
use super::linalg::{self, CMatrix, ZERO};
use super::random::{haar_unitary, seeded};
use super::state::{CompositeLabel, DensityOperator, PureState};
use crate::error::{Error, Result};
use crate::tol;

/// Objects that combine over a product space.
pub trait Tensor: Sized {
    fn tensor(&self, other: &Self) -> Result<Self>;
}

impl Tensor for Hamiltonian {
    fn tensor(&self, other: &Self) -> Result<Self> {
        Hamiltonian::tensor(self, other)
    }
}

impl Tensor for DensityOperator {
    fn tensor(&self, other: &Self) -> Result<Self> {
        DensityOperator::tensor(self, other)
    }
}

impl Tensor for PureState {
    fn tensor(&self, other: &Self) -> Result<Self> {
        PureState::tensor(self, other)
    }
}

pub fn tensor<T: Tensor>(a: &T, b: &T) -> Result<T> {
    a.tensor(b)
}

fn check_dims(a: usize, b: usize, what: &str) -> Result<()> {
    if a != b {
        return Err(Error::ShapeMismatch(format!("{what}: dimension {a} vs {b}")));
    }
    Ok(())
}

/// Index maps (kept, traced) for every full basis index.
fn split_indices(dims: &[usize], keep: &[usize]) -> Result<(usize, usize, Vec<(usize, usize)>)> {
    let mut keep_mask = vec![false; dims.len()];
    for &k in keep {
        if k >= dims.len() || keep_mask[k] {
            return Err(Error::ShapeMismatch(format!("invalid keep index {k} for {} factors", dims.len())));
        }
        keep_mask[k] = true;
    }
    let total: usize = dims.iter().product();
    let dim_keep: usize = dims.iter().zip(&keep_mask).filter(|(_, &m)| m).map(|(d, _)| d).product();
    let dim_trace = total / dim_keep;
    let mut map = Vec::with_capacity(total);
    let mut digits = vec![0usize; dims.len()];
    for _ in 0..total {
        let (mut kept, mut traced) = (0, 0);
        for (f, &d) in dims.iter().enumerate() {
            if keep_mask[f] {
                kept = kept * d + digits[f];
            } else {
                traced = traced * d + digits[f];
            }
        }
        map.push((kept, traced));
        for f in (0..dims.len()).rev() {
            digits[f] += 1;
            if digits[f] < dims[f] {
                break;
            }
            digits[f] = 0;
        }
    }
    Ok((dim_keep, dim_trace, map))
}

/// Partial trace of any square operator; kept factors stay in their original order.
pub fn partial_trace_matrix(m: &CMatrix, label: &CompositeLabel, keep: &[usize]) -> Result<CMatrix> {
    if m.nrows() != label.dim() || m.ncols() != label.dim() {
        return Err(Error::ShapeMismatch(format!(
            "label {:?} does not match {}x{} operator",
            label.factor_dims(),
            m.nrows(),
            m.ncols()
        )));
    }
    let mut keep_sorted = keep.to_vec();
    keep_sorted.sort_unstable();
    let (dim_keep, dim_trace, map) = split_indices(label.factor_dims(), &keep_sorted)?;
    let mut full_of = vec![0usize; dim_keep * dim_trace];
    for (i, &(k, t)) in map.iter().enumerate() {
        full_of[k * dim_trace + t] = i;
    }
    Ok(CMatrix::from_fn(dim_keep, dim_keep, |a, b| {
        (0..dim_trace).fold(ZERO, |acc, t| acc + m[(full_of[a * dim_trace + t], full_of[b * dim_trace + t])])
    }))
}

pub fn partial_trace(rho: &DensityOperator, label: &CompositeLabel, keep: &[usize]) -> Result<DensityOperator> {
    Ok(DensityOperator::from_trusted(partial_trace_matrix(rho.matrix(), label, keep)?))
}

/// Von Neumann entropy in bits.
pub fn von_neumann_entropy(rho: &DensityOperator) -> f64 {
    linalg::shannon_bits(linalg::eigvalsh(rho.matrix()))
}

/// Uhlmann fidelity (tr|√ρ√σ|)².
pub fn fidelity(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    check_dims(rho.dim(), sigma.dim(), "fidelity")?;
    let sqrt_sigma = linalg::hermitian_fn(sigma.matrix(), |x| x.max(0.0).sqrt());
    let inner = &sqrt_sigma * rho.matrix() * &sqrt_sigma;
    let root_sum: f64 = linalg::eigvalsh(&inner).into_iter().map(|x| x.max(0.0).sqrt()).sum();
    Ok((root_sum * root_sum).clamp(0.0, 1.0))
}

/// ½ tr|ρ − σ|.
pub fn trace_distance(rho: &DensityOperator, sigma: &DensityOperator) -> Result<f64> {
    check_dims(rho.dim(), sigma.dim(), "trace distance")?;
    let diff = rho.matrix() - sigma.matrix();
    Ok((0.5 * linalg::eigvalsh(&diff).iter().map(|x| x.abs()).sum::<f64>()).min(1.0))
}

/// Mean and variance of H in state ρ.
pub fn moments(rho: &DensityOperator, h: &Hamiltonian) -> Result<(f64, f64)> {
    check_dims(rho.dim(), h.dim(), "moments")?;
    let rotated = h.to_eigenbasis(rho.matrix());
    let energies = h.column_energies();
    let probs: Vec<f64> = (0..h.dim()).map(|i| rotated[(i, i)].re).collect();
    let mean: f64 = probs.iter().zip(&energies).map(|(p, e)| p * e).sum();
    let var: f64 = probs.iter().zip(&energies).map(|(p, e)| p * (e - mean).powi(2)).sum();
    Ok((mean, var.max(0.0)))
}

/// Quantum Fisher information from the symmetric-logarithmic-derivative formula.
pub fn qfi(rho: &DensityOperator, h: &Hamiltonian) -> Result<f64> {
    check_dims(rho.dim(), h.dim(), "qfi")?;
    let (lambda, vecs) = linalg::eigh(rho.matrix());
    let hm = vecs.adjoint() * h.matrix()? * &vecs;
    let n = rho.dim();
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            let (a, b) = (lambda[i].max(0.0), lambda[j].max(0.0));
            if a + b > tol::ENTROPY_CLAMP {
                total += (a - b).powi(2) / (a + b) * hm[(i, j)].norm_sqr();
            }
        }
    }
    Ok(2.0 * total)
}

/// Block-Haar unitary commuting with H.
pub fn random_energy_preserving_unitary(h: &Hamiltonian, seed: u64) -> Result<CMatrix> {
    let mut rng = seeded(seed);
    let blocks: Vec<CMatrix> = (0..h.num_levels()).map(|k| haar_unitary(h.multiplicity(k), &mut rng)).collect();
    h.block_operator(&blocks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::random::{random_density, random_hermitian, random_pure};

    fn plus() -> PureState {
        PureState::from_amplitudes(&[1.0, 1.0]).unwrap()
    }

    #[test]
    fn partial_trace_matches_double_loop_oracle() {
        let mut rng = seeded(3);
        let rho = random_density(6, 6, &mut rng);
        let label = CompositeLabel::new(vec![2, 3]).unwrap();
        let a = partial_trace(&rho, &label, &[0]).unwrap();
        let b = partial_trace(&rho, &label, &[1]).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let mut s = ZERO;
                for k in 0..3 {
                    s += rho.matrix()[(i * 3 + k, j * 3 + k)];
                }
                assert!((s - a.matrix()[(i, j)]).norm() < 1e-12);
            }
        }
        for i in 0..3 {
            for j in 0..3 {
                let mut s = ZERO;
                for k in 0..2 {
                    s += rho.matrix()[(k * 3 + i, k * 3 + j)];
                }
                assert!((s - b.matrix()[(i, j)]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn partial_trace_middle_factor() {
        let mut rng = seeded(4);
        let x = random_density(2, 2, &mut rng);
        let y = random_density(3, 3, &mut rng);
        let z = random_density(2, 2, &mut rng);
        let full = x.tensor(&y).unwrap().tensor(&z).unwrap();
        let label = CompositeLabel::new(vec![2, 3, 2]).unwrap();
        let xz = partial_trace(&full, &label, &[2, 0]).unwrap();
        let expect = x.tensor(&z).unwrap();
        assert!(linalg::max_abs(&(xz.matrix() - expect.matrix())) < 1e-12);
    }

    #[test]
    fn bell_marginal_is_maximally_mixed() {
        let bell = PureState::from_amplitudes(&[1.0, 0.0, 0.0, 1.0]).unwrap().to_density();
        let label = CompositeLabel::new(vec![2, 2]).unwrap();
        let r = partial_trace(&bell, &label, &[1]).unwrap();
        assert!(linalg::max_abs(&(r.matrix() - DensityOperator::maximally_mixed(2).matrix())) < 1e-15);
    }

    #[test]
    fn shape_mismatch_detected() {
        let rho = DensityOperator::maximally_mixed(4);
        let label = CompositeLabel::new(vec![2, 3]).unwrap();
        assert!(matches!(partial_trace(&rho, &label, &[0]), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn entropy_values() {
        assert!(von_neumann_entropy(&plus().to_density()).abs() < 1e-12);
        assert!((von_neumann_entropy(&DensityOperator::maximally_mixed(8)) - 3.0).abs() < 1e-12);
        let d = DensityOperator::diagonal(&[0.25, 0.75]).unwrap();
        assert!((von_neumann_entropy(&d) - 0.811_278_124_459_132_8).abs() < 1e-12);
    }

    #[test]
    fn fidelity_and_distance_examples() {
        let zero = PureState::basis(2, 0).to_density();
        let one = PureState::basis(2, 1).to_density();
        let mixed = DensityOperator::maximally_mixed(2);
        assert!((fidelity(&zero, &zero).unwrap() - 1.0).abs() < 1e-12);
        assert!(fidelity(&zero, &one).unwrap() < 1e-12);
        assert!((fidelity(&zero, &mixed).unwrap() - 0.5).abs() < 1e-12);
        assert!(trace_distance(&zero, &zero).unwrap() < 1e-12);
        assert!((trace_distance(&zero, &one).unwrap() - 1.0).abs() < 1e-12);
        assert!((trace_distance(&zero, &mixed).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn moments_examples() {
        let h = Hamiltonian::diagonal(&[0.0, 1.0]).unwrap();
        let (m, v) = moments(&plus().to_density(), &h).unwrap();
        assert!((m - 0.5).abs() < 1e-15 && (v - 0.25).abs() < 1e-15);
        let (m, v) = moments(&PureState::basis(2, 1).to_density(), &h).unwrap();
        assert!((m - 1.0).abs() < 1e-15 && v.abs() < 1e-15);
        let l = 7usize;
        let ladder = Hamiltonian::diagonal(&(0..l).map(|k| 0.5 * k as f64).collect::<Vec<_>>()).unwrap();
        let uni = PureState::from_amplitudes(&vec![1.0; l]).unwrap().to_density();
        let (_, v) = moments(&uni, &ladder).unwrap();
        assert!((v - 0.25 * ((l * l - 1) as f64) / 12.0).abs() < 1e-12);
    }

    #[test]
    fn qfi_examples() {
        let h = Hamiltonian::diagonal(&[0.0, 1.0]).unwrap();
        assert!((qfi(&plus().to_density(), &h).unwrap() - 1.0).abs() < 1e-12);
        let d = DensityOperator::diagonal(&[0.3, 0.7]).unwrap();
        assert!(qfi(&d, &h).unwrap().abs() < 1e-15);
    }

    #[test]
    fn qfi_matches_fidelity_finite_difference() {
        let mut rng = seeded(17);
        let rho = random_density(2, 2, &mut rng);
        let h = Hamiltonian::from_matrix(&random_hermitian(2, &mut rng), None).unwrap();
        let analytic = qfi(&rho, &h).unwrap();
        // Richardson extrapolation of 8(1-√F)/δ² to δ → 0.
        let fd = |delta: f64| {
            let u = h.evolution(delta).unwrap();
            let moved = rho.conjugate(&u).unwrap();
            8.0 * (1.0 - fidelity(&rho, &moved).unwrap().sqrt()) / (delta * delta)
        };
        let (a, b) = (fd(2e-3), fd(1e-3));
        let extrapolated = (4.0 * b - a) / 3.0;
        assert!((extrapolated - analytic).abs() < 1e-4, "{extrapolated} vs {analytic}");
    }

    #[test]
    fn energy_preserving_unitary_commutes() {
        for seed in 0..100u64 {
            let dim = 2 + (seed % 7) as usize;
            let energies: Vec<f64> = (0..dim).map(|i| (i % 3) as f64).collect();
            let h = Hamiltonian::diagonal(&energies).unwrap();
            let u = random_energy_preserving_unitary(&h, seed).unwrap();
            assert!(linalg::unitarity_defect(&u) < 1e-10);
            let hm = h.matrix().unwrap();
            assert!(linalg::max_abs(&linalg::commutator(&u, &hm)) < 1e-10);
        }
    }

    #[test]
    fn nondegenerate_gives_phases_and_zero_gives_dense() {
        let h = Hamiltonian::diagonal(&[0.0, 1.0, 2.0]).unwrap();
        let u = random_energy_preserving_unitary(&h, 1).unwrap();
        for r in 0..3 {
            for c in 0..3 {
                if r != c {
                    assert_eq!(u[(r, c)], ZERO);
                } else {
                    assert!((u[(r, c)].norm() - 1.0).abs() < 1e-12);
                }
            }
        }
        let z = Hamiltonian::zero(3).unwrap();
        let u = random_energy_preserving_unitary(&z, 1).unwrap();
        assert!(linalg::unitarity_defect(&u) < 1e-10);
        assert!(u[(0, 1)].norm() > 0.0);
    }

    #[test]
    fn tensor_then_trace_round_trip() {
        let mut rng = seeded(8);
        let a = random_density(3, 2, &mut rng);
        let b = random_pure(2, &mut rng).to_density();
        let ab = tensor(&a, &b).unwrap();
        let label = CompositeLabel::new(vec![3, 2]).unwrap();
        let back = partial_trace(&ab, &label, &[0]).unwrap();
        assert!(linalg::max_abs(&(back.matrix() - a.matrix())) < 1e-12);
    }
}
