//! Finitely supported random variables with exact support values, and the
//! exact distribution of their i.i.d. sums.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::exact::{integer_keys, Basis, ExactReal, Key};
use crate::error::{Error, Result};

/// Largest number of count vectors enumerated for an i.i.d. sum.
pub const SUM_SUPPORT_CAP: usize = 10_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct Atom {
    pub value: ExactReal,
    pub p: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteRV {
    basis: Basis,
    atoms: Vec<Atom>,
}

/// On-disk form: coefficient strings per atom over a named basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteRvFile {
    pub basis: Vec<String>,
    pub atoms: Vec<AtomFile>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomFile {
    pub coeffs: Vec<String>,
    pub p: f64,
}

impl DiscreteRV {
    /// Validates positive probabilities summing to 1 (within 1e-12) on distinct values.
    pub fn new(basis: Basis, atoms: Vec<(ExactReal, f64)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidState("random variable without atoms".into()));
        }
        let mut seen = HashMap::new();
        for (i, (x, p)) in atoms.iter().enumerate() {
            if x.coeffs().len() != basis.len() {
                return Err(Error::ShapeMismatch(format!("atom {i} has {} coefficients", x.coeffs().len())));
            }
            if !(*p > 0.0 && p.is_finite()) {
                return Err(Error::InvalidState(format!("atom {i} has probability {p}")));
            }
            if seen.insert(x.clone(), i).is_some() {
                return Err(Error::InvalidState(format!("atom {i} repeats the value {x}")));
            }
        }
        let total: f64 = atoms.iter().map(|a| a.1).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidState(format!("probabilities sum to {total}")));
        }
        Ok(Self::from_trusted(basis, atoms))
    }

    fn from_trusted(basis: Basis, atoms: Vec<(ExactReal, f64)>) -> Self {
        Self { basis, atoms: atoms.into_iter().map(|(value, p)| Atom { value, p }).collect() }
    }

    /// Rational-valued variable from (value, probability) pairs.
    pub fn from_rationals(atoms: &[(num_rational::Rational64, f64)]) -> Result<Self> {
        let basis = Basis::rational();
        let atoms = atoms.iter().map(|&(q, p)| (ExactReal::rational(q, &basis), p)).collect();
        Self::new(basis, atoms)
    }

    pub fn bernoulli(p: f64) -> Result<Self> {
        let basis = Basis::rational();
        let atoms = [(0, 1.0 - p), (1, p)]
            .into_iter()
            .filter(|&(_, w)| w > 0.0)
            .map(|(x, w)| (ExactReal::integer(x, &basis), w))
            .collect();
        Self::new(basis, atoms)
    }

    pub fn uniform(basis: Basis, values: Vec<ExactReal>) -> Result<Self> {
        let p = 1.0 / values.len().max(1) as f64;
        Self::new(basis, values.into_iter().map(|v| (v, p)).collect())
    }

    pub fn from_file(file: &DiscreteRvFile) -> Result<Self> {
        let basis = Basis::new(&file.basis)?;
        let atoms = file
            .atoms
            .iter()
            .map(|a| Ok((ExactReal::parse(&a.coeffs, &basis)?, a.p)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(basis, atoms)
    }

    pub fn to_file(&self) -> DiscreteRvFile {
        DiscreteRvFile {
            basis: self.basis.names().to_vec(),
            atoms: self.atoms.iter().map(|a| AtomFile { coeffs: a.value.coeff_strings(), p: a.p }).collect(),
        }
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn values(&self) -> Vec<ExactReal> {
        self.atoms.iter().map(|a| a.value.clone()).collect()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.atoms.iter().map(|a| a.p).collect()
    }

    pub fn is_deterministic(&self) -> bool {
        self.atoms.len() == 1
    }

    pub fn mean(&self) -> f64 {
        self.atoms.iter().map(|a| a.p * a.value.value()).sum()
    }

    pub fn variance(&self) -> f64 {
        let mu = self.mean();
        self.atoms.iter().map(|a| a.p * (a.value.value() - mu).powi(2)).sum()
    }

    /// Probability of the value `x`, zero when absent.
    pub fn probability_of(&self, x: &ExactReal) -> f64 {
        self.atoms.iter().find(|a| &a.value == x).map_or(0.0, |a| a.p)
    }
}

/// Entropy in bits of a probability list (zero weights skipped).
pub(crate) fn entropy_bits(probs: impl IntoIterator<Item = f64>) -> f64 {
    probs.into_iter().filter(|&p| p > 0.0).map(|p| -p * p.log2()).sum::<f64>().max(0.0)
}

pub fn shannon_entropy(x: &DiscreteRV) -> f64 {
    entropy_bits(x.atoms.iter().map(|a| a.p))
}

fn binomial_f64(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Distribution of Σ keyᵢ over N draws, grouped by exact sum. Ordered so
/// downstream float sums are reproducible.
fn sum_weights(x: &DiscreteRV, n: usize) -> Result<BTreeMap<Key, f64>> {
    let k = x.len();
    let projected = binomial_f64(n + k - 1, k - 1);
    if projected > SUM_SUPPORT_CAP as f64 {
        return Err(Error::SupportExplosion { projected, cap: SUM_SUPPORT_CAP });
    }
    let refs: Vec<&ExactReal> = x.atoms.iter().map(|a| &a.value).collect();
    let keys = integer_keys(&refs)?;
    let dims = keys[0].len();
    // Sums of up to N keys must stay in range.
    let bound = keys.iter().flat_map(|k| k.iter()).map(|c| c.unsigned_abs()).max().unwrap_or(0);
    if bound.checked_mul(n as u64).is_none_or(|b| b > i64::MAX as u64) {
        return Err(Error::Overflow);
    }
    let log_fact: Vec<f64> = std::iter::once(0.0)
        .chain((1..=n).scan(0.0, |acc, i| {
            *acc += (i as f64).ln();
            Some(*acc)
        }))
        .collect();
    let log_p: Vec<f64> = x.atoms.iter().map(|a| a.p.ln()).collect();

    struct Walk<'a> {
        keys: &'a [Key],
        log_fact: &'a [f64],
        log_p: &'a [f64],
        out: BTreeMap<Key, f64>,
    }
    impl Walk<'_> {
        fn go(&mut self, atom: usize, remaining: usize, log_w: f64, key: &mut Key) {
            let last = atom + 1 == self.keys.len();
            let range = if last { remaining..=remaining } else { 0..=remaining };
            for c in range {
                let w = log_w + c as f64 * self.log_p[atom] - self.log_fact[c];
                for (s, d) in key.iter_mut().zip(&self.keys[atom]) {
                    *s += c as i64 * d;
                }
                if last {
                    *self.out.entry(key.clone()).or_insert(0.0) += w.exp();
                } else {
                    self.go(atom + 1, remaining - c, w, key);
                }
                for (s, d) in key.iter_mut().zip(&self.keys[atom]) {
                    *s -= c as i64 * d;
                }
            }
        }
    }
    let mut walk = Walk { keys: &keys, log_fact: &log_fact, log_p: &log_p, out: BTreeMap::new() };
    let mut key: Key = std::iter::repeat_n(0, dims).collect();
    walk.go(0, n, log_fact[n], &mut key);
    Ok(walk.out)
}

/// Exact law of T_N = X₁ + … + X_N; aborts beyond 10⁷ count vectors.
pub fn sum_distribution(x: &DiscreteRV, n: usize) -> Result<DiscreteRV> {
    if n == 0 {
        return Err(Error::Domain("number of summands must be positive".into()));
    }
    let weights = sum_weights(x, n)?;
    let refs: Vec<&ExactReal> = x.atoms.iter().map(|a| &a.value).collect();
    let den = common_denominator(&refs);
    let basis = x.basis.clone();
    let mut atoms = weights
        .into_iter()
        .filter(|&(_, p)| p > 0.0)
        .map(|(k, p)| {
            let coeffs = k.iter().map(|&c| num_rational::Rational64::new(c, den)).collect();
            Ok((ExactReal::new(coeffs, &basis)?, p))
        })
        .collect::<Result<Vec<_>>>()?;
    atoms.sort_by(|a, b| a.0.value().total_cmp(&b.0.value()));
    Ok(DiscreteRV::from_trusted(basis, atoms))
}

/// S(T_N) in bits without materializing the exact support.
pub fn sum_entropy(x: &DiscreteRV, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("number of summands must be positive".into()));
    }
    Ok(entropy_bits(sum_weights(x, n)?.into_values()))
}

fn common_denominator(values: &[&ExactReal]) -> i64 {
    use num_integer::Integer;
    values.iter().flat_map(|v| v.coeffs().iter()).fold(1i64, |d, c| d.lcm(c.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;

    fn sqrt2_rv() -> DiscreteRV {
        let b = Basis::new(&["1", "sqrt2"]).unwrap();
        let vals = vec![
            ExactReal::integer(0, &b),
            ExactReal::integer(1, &b),
            ExactReal::basis_element(1, &b),
        ];
        DiscreteRV::uniform(b, vals).unwrap()
    }

    #[test]
    fn validation() {
        let b = Basis::rational();
        let one = ExactReal::integer(1, &b);
        assert!(DiscreteRV::new(b.clone(), vec![(one.clone(), 0.5), (one.clone(), 0.5)]).is_err());
        assert!(DiscreteRV::new(b.clone(), vec![(one.clone(), 0.9)]).is_err());
        assert!(DiscreteRV::new(b.clone(), vec![(one.clone(), 1.0), (ExactReal::integer(2, &b), 0.0)]).is_err());
        assert!(DiscreteRV::new(b, vec![(one, 1.0)]).unwrap().is_deterministic());
    }

    #[test]
    fn bernoulli_sums() {
        let p = 0.3;
        let x = DiscreteRV::bernoulli(p).unwrap();
        let t = sum_distribution(&x, 2).unwrap();
        let b = Basis::rational();
        for (k, expect) in [(0, (1.0 - p) * (1.0 - p)), (1, 2.0 * p * (1.0 - p)), (2, p * p)] {
            assert!((t.probability_of(&ExactReal::integer(k, &b)) - expect).abs() < 1e-15);
        }
        let t1 = sum_distribution(&x, 1).unwrap();
        assert_eq!(t1.len(), 2);
        assert!((t1.probability_of(&ExactReal::integer(1, &b)) - p).abs() < 1e-15);
        assert!((shannon_entropy(&DiscreteRV::bernoulli(0.25).unwrap()) - 0.811_278_124_459_132_8).abs() < 1e-12);
    }

    #[test]
    fn nonlattice_sum_has_six_atoms() {
        let t = sum_distribution(&sqrt2_rv(), 2).unwrap();
        assert_eq!(t.len(), 6);
        let total: f64 = t.probabilities().iter().sum();
        assert!((total - 1.0).abs() < 1e-12);
        let vals: Vec<f64> = t.atoms().iter().map(|a| a.value.value()).collect();
        let s = 2f64.sqrt();
        for (got, want) in vals.iter().zip([0.0, 1.0, s, 2.0, 1.0 + s, 2.0 * s]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn grouping_merges_equal_sums() {
        // Lattice {0, 1/2, 1}: sums collide, and the count equals 2N+1.
        let x = DiscreteRV::from_rationals(&[
            (Rational64::new(0, 1), 0.2),
            (Rational64::new(1, 2), 0.5),
            (Rational64::new(1, 1), 0.3),
        ])
        .unwrap();
        let t = sum_distribution(&x, 5).unwrap();
        assert_eq!(t.len(), 11);
        assert!((sum_entropy(&x, 5).unwrap() - shannon_entropy(&t)).abs() < 1e-12);
    }

    #[test]
    fn uniform_and_point_mass_entropy() {
        let b = Basis::rational();
        let vals: Vec<ExactReal> = (0..8).map(|k| ExactReal::integer(k, &b)).collect();
        assert!((shannon_entropy(&DiscreteRV::uniform(b.clone(), vals).unwrap()) - 3.0).abs() < 1e-12);
        let point = DiscreteRV::new(b.clone(), vec![(ExactReal::integer(4, &b), 1.0)]).unwrap();
        assert_eq!(shannon_entropy(&point), 0.0);
    }

    #[test]
    fn support_cap_aborts() {
        let b = Basis::rational();
        let vals: Vec<ExactReal> = (0..10).map(|k| ExactReal::integer(k * k, &b)).collect();
        let x = DiscreteRV::uniform(b, vals).unwrap();
        assert!(matches!(sum_distribution(&x, 1000), Err(Error::SupportExplosion { .. })));
    }

    #[test]
    fn file_round_trip() {
        let x = sqrt2_rv();
        let json = serde_json::to_string(&x.to_file()).unwrap();
        let back = DiscreteRV::from_file(&serde_json::from_str(&json).unwrap()).unwrap();
        assert_eq!(back, x);
    }
}
