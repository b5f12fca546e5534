//! Lattice spans, rational span dimension, prepartitions and the
//! incommensurability rank.

use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::exact::{integer_keys, rational_gcd, rational_rank, Basis, ExactReal, Key};
use super::rv::DiscreteRV;
use crate::error::{Error, Result};

/// Maximal span of a finite set.
#[derive(Debug, Clone, PartialEq)]
pub enum Span {
    /// Positive h with the set inside a + hℤ, maximal.
    Lattice(ExactReal),
    NotLattice,
    /// A single point: every h works.
    Degenerate,
}

impl Span {
    pub fn is_lattice(&self) -> bool {
        !matches!(self, Self::NotLattice)
    }

    pub fn value(&self) -> Option<f64> {
        match self {
            Self::Lattice(h) => Some(h.value()),
            _ => None,
        }
    }
}

fn dedup(chi: &[ExactReal]) -> Vec<&ExactReal> {
    let mut out: Vec<&ExactReal> = Vec::new();
    for x in chi {
        if !out.contains(&x) {
            out.push(x);
        }
    }
    out
}

pub fn maximal_span(chi: &[ExactReal], basis: &Basis) -> Result<Span> {
    let points = dedup(chi);
    let Some(first) = points.first() else {
        return Err(Error::Domain("maximal span of an empty set".into()));
    };
    if points.len() == 1 {
        return Ok(Span::Degenerate);
    }
    let origin = first.to_big();
    let diffs: Vec<Vec<BigRational>> =
        points[1..].iter().map(|x| x.to_big().iter().zip(&origin).map(|(a, b)| a - b).collect()).collect();
    let direction = &diffs[0];
    let pivot = direction.iter().position(|c| !c.is_zero()).expect("points are distinct");
    let mut multipliers = Vec::with_capacity(diffs.len());
    for d in &diffs {
        let q = &d[pivot] / &direction[pivot];
        if d.iter().zip(direction).any(|(a, b)| *a != &q * b) {
            return Ok(Span::NotLattice);
        }
        multipliers.push(q);
    }
    let g = rational_gcd(&multipliers);
    let mut h: Vec<BigRational> = direction.iter().map(|c| c * &g).collect();
    let mut span = ExactReal::from_big(&h, basis)?;
    if span.value() < 0.0 {
        h.iter_mut().for_each(|c| *c = -c.clone());
        span = ExactReal::from_big(&h, basis)?;
    }
    Ok(Span::Lattice(span))
}

/// dim_Q span_Q(χ).
pub fn rational_span_dim(chi: &[ExactReal]) -> usize {
    rational_rank(chi.iter().map(ExactReal::to_big).collect())
}

/// Disjoint subsets of a support, as indices into it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prepartition {
    pub subsets: Vec<Vec<usize>>,
}

impl Prepartition {
    pub fn new(subsets: Vec<Vec<usize>>) -> Self {
        Self { subsets }
    }

    pub fn k(&self) -> usize {
        self.subsets.len()
    }

    /// True when every subset is a single point.
    pub fn is_degenerate(&self) -> bool {
        self.subsets.iter().all(|s| s.len() == 1)
    }

    /// Checks nonempty, in-range, disjoint subsets.
    pub fn validate(&self, support_len: usize) -> Result<()> {
        if self.subsets.is_empty() {
            return Err(Error::InvalidPrepartition("no subsets".into()));
        }
        let mut used = vec![false; support_len];
        for (j, s) in self.subsets.iter().enumerate() {
            if s.is_empty() {
                return Err(Error::InvalidPrepartition(format!("subset {j} is empty")));
            }
            for &i in s {
                if i >= support_len {
                    return Err(Error::InvalidPrepartition(format!("index {i} outside a support of {support_len}")));
                }
                if std::mem::replace(&mut used[i], true) {
                    return Err(Error::InvalidPrepartition(format!("index {i} appears twice")));
                }
            }
        }
        Ok(())
    }

    fn members(&self, chi: &[ExactReal], j: usize) -> Vec<ExactReal> {
        self.subsets[j].iter().map(|&i| chi[i].clone()).collect()
    }
}

/// Per-subset quantities entering the entropy bounds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubsetInfo {
    pub p: f64,
    pub size: usize,
    pub span: Option<f64>,
    /// Variance of X conditioned on landing in the subset.
    pub conditional_variance: f64,
}

/// Validates `part` against X and evaluates each subset; non-lattice subsets are rejected.
pub fn analyze_prepartition(x: &DiscreteRV, part: &Prepartition) -> Result<Vec<SubsetInfo>> {
    part.validate(x.len())?;
    let chi = x.values();
    let atoms = x.atoms();
    (0..part.k())
        .map(|j| {
            let span = maximal_span(&part.members(&chi, j), x.basis())?;
            if !span.is_lattice() {
                return Err(Error::InvalidPrepartition(format!("subset {j} is not a lattice")));
            }
            let idx = &part.subsets[j];
            let p: f64 = idx.iter().map(|&i| atoms[i].p).sum();
            let mean = idx.iter().map(|&i| atoms[i].p * atoms[i].value.value()).sum::<f64>() / p;
            let var = idx.iter().map(|&i| atoms[i].p * (atoms[i].value.value() - mean).powi(2)).sum::<f64>() / p;
            Ok(SubsetInfo { p, size: idx.len(), span: span.value(), conditional_variance: var })
        })
        .collect()
}

/// Sufficient test: with augmented vectors (coefficients, 1), the spans of the
/// subsets form a direct sum.
pub fn certify_incommensurable(chi: &[ExactReal], part: &Prepartition) -> bool {
    let augmented = |i: usize| {
        let mut v = chi[i].to_big();
        v.push(BigRational::one());
        v
    };
    let per_subset: usize =
        part.subsets.iter().map(|s| rational_rank(s.iter().map(|&i| augmented(i)).collect())).sum();
    let union = rational_rank(part.subsets.iter().flatten().map(|&i| augmented(i)).collect());
    union == per_subset
}

/// Two draws of N ≤ n_max points with equal totals but different per-subset
/// totals or per-subset counts (counts matter once the set is shifted).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Collision {
    pub n: usize,
    pub counts_a: Vec<usize>,
    pub counts_b: Vec<usize>,
}

/// Searches every multiset of at most `n_max` draws from the union of the subsets.
pub fn find_collision(chi: &[ExactReal], part: &Prepartition, n_max: usize) -> Result<Option<Collision>> {
    let elements: Vec<(usize, usize)> =
        part.subsets.iter().enumerate().flat_map(|(j, s)| s.iter().map(move |&i| (j, i))).collect();
    let refs: Vec<&ExactReal> = elements.iter().map(|&(_, i)| &chi[i]).collect();
    let keys = integer_keys(&refs)?;
    let dims = keys[0].len();
    let k = part.k();
    for n in 1..=n_max {
        let mut seen: HashMap<Key, (Vec<i64>, Vec<usize>)> = HashMap::new();
        let mut counts = vec![0usize; elements.len()];
        let mut found = None;
        compositions(n, &mut counts, 0, &mut |c| {
            let mut total: Key = std::iter::repeat_n(0, dims).collect();
            // Per-subset (total, count): the shift-invariant form of the test.
            let mut parts = vec![0i64; k * (dims + 1)];
            for (e, &cnt) in c.iter().enumerate() {
                let j = elements[e].0;
                for d in 0..dims {
                    let add = cnt as i64 * keys[e][d];
                    total[d] += add;
                    parts[j * (dims + 1) + d] += add;
                }
                parts[j * (dims + 1) + dims] += cnt as i64;
            }
            match seen.get(&total) {
                Some((other, other_counts)) if *other != parts => {
                    found = Some(Collision { n, counts_a: other_counts.clone(), counts_b: c.to_vec() });
                    false
                }
                Some(_) => true,
                None => {
                    seen.insert(total, (parts, c.to_vec()));
                    true
                }
            }
        });
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(None)
}

/// Visits all count vectors summing to `n`; the visitor returns false to stop.
fn compositions(n: usize, counts: &mut [usize], at: usize, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    if at + 1 == counts.len() {
        counts[at] = n;
        let go_on = visit(counts);
        counts[at] = 0;
        return go_on;
    }
    for c in 0..=n {
        counts[at] = c;
        if !compositions(n - c, counts, at + 1, visit) {
            counts[at] = 0;
            return false;
        }
    }
    counts[at] = 0;
    true
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankOptions {
    pub n_max_falsify: usize,
    pub exhaustive_limit: usize,
}

impl Default for RankOptions {
    fn default() -> Self {
        Self { n_max_falsify: 6, exhaustive_limit: 6 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankResult {
    /// Certified lower bound on r(χ).
    pub lower: usize,
    /// No prepartition of larger rank survived falsification.
    pub certified_exact: bool,
    /// dim_Q span_Q(χ).
    pub span_dim: usize,
    /// Largest k of a certified non-degenerate prepartition (exhaustive search only).
    pub certified_rank: Option<usize>,
    /// Largest k of a lattice non-degenerate prepartition without a collision up to n_max.
    pub unfalsified_rank: Option<usize>,
    pub witness: Option<Prepartition>,
    /// Every certified prepartition of size `lower` found.
    #[serde(skip)]
    pub alternatives: Vec<Prepartition>,
}

/// Every assignment of elements to {unused, subset 1, …} up to relabeling.
fn labelings(d: usize) -> Vec<Vec<usize>> {
    fn rec(i: usize, d: usize, max_label: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == d {
            out.push(cur.clone());
            return;
        }
        for label in 0..=max_label + 1 {
            cur.push(label);
            rec(i + 1, d, max_label.max(label), cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, d, 0, &mut Vec::new(), &mut out);
    out
}

/// Augmented-independent points in input order, merged pairwise at the front:
/// a certified non-degenerate prepartition of size Q_aug − 1.
fn greedy_witness(points: &[ExactReal]) -> Prepartition {
    let augmented = |x: &ExactReal| {
        let mut v = x.to_big();
        v.push(BigRational::one());
        v
    };
    let mut chosen: Vec<usize> = Vec::new();
    let mut rows = Vec::new();
    for (i, x) in points.iter().enumerate() {
        rows.push(augmented(x));
        if rational_rank(rows.clone()) > chosen.len() {
            chosen.push(i);
        } else {
            rows.pop();
        }
    }
    let mut subsets = vec![chosen[..2].to_vec()];
    subsets.extend(chosen[2..].iter().map(|&i| vec![i]));
    Prepartition::new(subsets)
}

/// Lower bound on r(χ) with a certified witness.
///
/// Witness indices refer to χ with repeated values removed (the input order
/// is kept). Exhaustive search over prepartitions runs only when
/// |χ| ≤ `exhaustive_limit`; otherwise the greedy direct-sum witness is used.
pub fn incommensurability_rank(chi: &[ExactReal], basis: &Basis, opts: &RankOptions) -> Result<RankResult> {
    let points: Vec<ExactReal> = dedup(chi).into_iter().cloned().collect();
    if points.len() < 2 {
        return Err(Error::Domain("incommensurability rank needs at least two distinct values".into()));
    }
    let span_dim = rational_span_dim(&points);
    let greedy = greedy_witness(&points);
    let floor = greedy.k().max(span_dim.saturating_sub(1));
    let top = points.len() - 1;
    if points.len() > opts.exhaustive_limit {
        return Ok(RankResult {
            lower: floor,
            certified_exact: floor == top,
            span_dim,
            certified_rank: None,
            unfalsified_rank: None,
            witness: Some(greedy.clone()),
            alternatives: vec![greedy],
        });
    }
    let mut lattice_cache: HashMap<Vec<usize>, bool> = HashMap::new();
    let mut best_k = 0usize;
    let mut alternatives: Vec<Prepartition> = Vec::new();
    let mut unfalsified = 0usize;
    for labels in labelings(points.len()) {
        let k = labels.iter().copied().max().unwrap_or(0);
        if k == 0 {
            continue;
        }
        let subsets: Vec<Vec<usize>> =
            (1..=k).map(|j| (0..points.len()).filter(|&i| labels[i] == j).collect()).collect();
        let part = Prepartition::new(subsets);
        if part.is_degenerate() {
            continue;
        }
        let mut all_lattice = true;
        for s in &part.subsets {
            let is_lattice = match lattice_cache.get(s) {
                Some(&b) => b,
                None => {
                    let members: Vec<ExactReal> = s.iter().map(|&i| points[i].clone()).collect();
                    let b = maximal_span(&members, basis)?.is_lattice();
                    lattice_cache.insert(s.clone(), b);
                    b
                }
            };
            if !is_lattice {
                all_lattice = false;
                break;
            }
        }
        if !all_lattice {
            continue;
        }
        if certify_incommensurable(&points, &part) {
            unfalsified = unfalsified.max(k);
            if k > best_k {
                best_k = k;
                alternatives.clear();
            }
            if k == best_k {
                alternatives.push(part);
            }
        } else if k > unfalsified && find_collision(&points, &part, opts.n_max_falsify)?.is_none() {
            unfalsified = k;
        }
    }
    let lower = floor.max(best_k);
    if best_k < lower {
        alternatives = vec![greedy];
    }
    Ok(RankResult {
        lower,
        certified_exact: unfalsified <= lower,
        span_dim,
        certified_rank: Some(best_k),
        unfalsified_rank: Some(unfalsified),
        witness: alternatives.first().cloned(),
        alternatives,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;

    fn sqrt2() -> Basis {
        Basis::new(&["1", "sqrt2"]).unwrap()
    }

    fn ab(a: i64, b: i64, basis: &Basis) -> ExactReal {
        ExactReal::new(vec![Rational64::from_integer(a), Rational64::from_integer(b)], basis).unwrap()
    }

    fn rationals(values: &[(i64, i64)]) -> Vec<ExactReal> {
        let b = Basis::rational();
        values.iter().map(|&(n, d)| ExactReal::rational(Rational64::new(n, d), &b)).collect()
    }

    #[test]
    fn span_examples() {
        let b = Basis::rational();
        assert_eq!(maximal_span(&rationals(&[(0, 1), (2, 1), (4, 1)]), &b).unwrap().value(), Some(2.0));
        assert_eq!(maximal_span(&rationals(&[(0, 1), (3, 2), (9, 2)]), &b).unwrap().value(), Some(1.5));
        assert_eq!(maximal_span(&rationals(&[(5, 1), (1, 1), (3, 1)]), &b).unwrap().value(), Some(2.0));
        assert_eq!(maximal_span(&rationals(&[(7, 3)]), &b).unwrap(), Span::Degenerate);
        let s = sqrt2();
        assert_eq!(maximal_span(&[ab(0, 0, &s), ab(1, 0, &s), ab(0, 1, &s)], &s).unwrap(), Span::NotLattice);
        let h = maximal_span(&[ab(0, 2, &s), ab(0, 6, &s), ab(0, -2, &s)], &s).unwrap();
        assert_eq!(h, Span::Lattice(ab(0, 4, &s)));
        assert_eq!(maximal_span(&[ab(1, 1, &s), ab(3, 3, &s)], &s).unwrap(), Span::Lattice(ab(2, 2, &s)));
    }

    #[test]
    fn span_dim_examples() {
        assert_eq!(rational_span_dim(&rationals(&[(1, 1), (2, 1), (3, 1)])), 1);
        let s = sqrt2();
        assert_eq!(rational_span_dim(&[ab(0, 0, &s), ab(1, 0, &s), ab(0, 1, &s)]), 2);
        let b3 = Basis::new(&["1", "sqrt2", "sqrt3"]).unwrap();
        let v = |c: [i64; 3]| ExactReal::new(c.iter().map(|&x| Rational64::from_integer(x)).collect(), &b3).unwrap();
        assert_eq!(rational_span_dim(&[v([1, 0, 0]), v([0, 1, 0]), v([0, 0, 1]), v([1, 1, 0])]), 3);
    }

    #[test]
    fn rank_examples() {
        let b = Basis::rational();
        let r = incommensurability_rank(&rationals(&[(0, 1), (1, 1), (2, 1)]), &b, &RankOptions::default()).unwrap();
        assert_eq!((r.lower, r.certified_exact), (1, true));
        let s = sqrt2();
        let chi = [ab(0, 0, &s), ab(1, 0, &s), ab(0, 1, &s)];
        let r = incommensurability_rank(&chi, &s, &RankOptions::default()).unwrap();
        assert_eq!((r.lower, r.certified_exact), (2, true));
        let w = r.witness.unwrap();
        assert_eq!(w.k(), 2);
        assert!(certify_incommensurable(&chi, &Prepartition::new(vec![vec![0, 1], vec![2]])));
    }

    #[test]
    fn collisions_falsify_lattice_splits() {
        let chi = rationals(&[(0, 1), (1, 1), (2, 1)]);
        let part = Prepartition::new(vec![vec![0, 1], vec![2]]);
        assert!(!certify_incommensurable(&chi, &part));
        let c = find_collision(&chi, &part, 6).unwrap().unwrap();
        assert_eq!(c.n, 2);
    }

    #[test]
    fn prepartition_validation() {
        let p = Prepartition::new(vec![vec![0], vec![]]);
        assert!(matches!(p.validate(3), Err(Error::InvalidPrepartition(_))));
        assert!(Prepartition::new(vec![vec![0, 1], vec![1]]).validate(3).is_err());
        assert!(Prepartition::new(vec![vec![5]]).validate(3).is_err());
        assert!(Prepartition::new(vec![vec![0, 2], vec![1]]).validate(3).is_ok());
    }

    #[test]
    fn labelings_count_is_bell_number() {
        // Labelings with an "unused" symbol on d points number Bell(d + 1).
        assert_eq!(labelings(3).len(), 15);
        assert_eq!(labelings(5).len(), 203);
    }
}
