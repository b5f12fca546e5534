//! Witness search for r₂ and λ₂ over energy eigenstates of four system copies
//! S₁S₂A₁A₂ with H_A = −H_S, transformed by V ⊗ V† ⊗ I ⊗ I.

use std::collections::HashMap;

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::GateInstance;
use crate::error::Result;
use crate::iid::{incommensurability_rank, prepartition_lambda, DiscreteRV, ExactReal, Prepartition, RankOptions};
use crate::quantum::linalg::{CMatrix, CVector, C64, ZERO};
use crate::quantum::random::seeded;
use crate::tol;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchOptions {
    /// Largest number of equal-weight terms in a degenerate superposition (2 = pairs).
    pub degenerate_superposition_depth: usize,
    pub random_samples: usize,
    pub seed: u64,
    /// Cap on enumerated superposition candidates.
    pub max_candidates: usize,
    pub rank: RankOptions,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self { degenerate_superposition_depth: 2, random_samples: 64, seed: 0, max_candidates: 20_000, rank: RankOptions::default() }
    }
}

/// A four-copy eigenstate achieving the reported r₂ and λ₂.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub kind: CandidateKind,
    /// Nonzero amplitudes on eigenbasis product states |i, j; k, l⟩ (S₁, S₂; A₁, A₂).
    pub terms: Vec<WitnessTerm>,
    /// Energies of the transformed state, in the order used by `prepartition`.
    pub energy_support: Vec<f64>,
    pub probabilities: Vec<f64>,
    pub prepartition: Prepartition,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessTerm {
    pub levels: [usize; 4],
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CandidateKind {
    Basis,
    Superposition,
    Random,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct R2Search {
    pub r2_lower: usize,
    pub lambda2_lower: f64,
    /// The rank of the witness' support is known exactly.
    pub rank_certified_exact: bool,
    pub energy_preserving: bool,
    pub candidates: usize,
    pub witness: Option<Witness>,
}

impl R2Search {
    fn trivial() -> Self {
        Self { r2_lower: 0, lambda2_lower: 0.0, rank_certified_exact: true, energy_preserving: true, candidates: 0, witness: None }
    }
}

struct Candidate {
    kind: CandidateKind,
    terms: Vec<(usize, C64)>,
}

/// Four-copy register with product indices (((i·d + j)·d + k)·d + l).
struct Register {
    d: usize,
    class_of: Vec<usize>,
    classes: Vec<ExactReal>,
}

impl Register {
    fn new(column_energies: &[ExactReal]) -> Result<Self> {
        let d = column_energies.len();
        let mut index: HashMap<ExactReal, usize> = HashMap::new();
        let mut classes = Vec::new();
        let mut class_of = Vec::with_capacity(d.pow(4));
        for t in 0..d.pow(4) {
            let [i, j, k, l] = Self::split(d, t);
            let e = column_energies[i]
                .checked_add(&column_energies[j])?
                .checked_sub(&column_energies[k])?
                .checked_sub(&column_energies[l])?;
            let next = classes.len();
            let id = *index.entry(e.clone()).or_insert(next);
            if id == next {
                classes.push(e);
            }
            class_of.push(id);
        }
        Ok(Self { d, class_of, classes })
    }

    fn split(d: usize, t: usize) -> [usize; 4] {
        [t / (d * d * d), t / (d * d) % d, t / d % d, t % d]
    }

    fn dim(&self) -> usize {
        self.class_of.len()
    }

    /// Energy distribution of (V ⊗ V† ⊗ I ⊗ I)|φ⟩ as (class, probability), sorted by class.
    fn transformed_distribution(&self, v: &CMatrix, vd: &CMatrix, phi: &[(usize, C64)]) -> Vec<(usize, f64)> {
        let d = self.d;
        let mut psi = CVector::from_element(self.dim(), ZERO);
        for &(t, a) in phi {
            let [i, j, k, l] = Self::split(d, t);
            for i2 in 0..d {
                let vi = v[(i2, i)] * a;
                if vi == ZERO {
                    continue;
                }
                for j2 in 0..d {
                    psi[((i2 * d + j2) * d + k) * d + l] += vi * vd[(j2, j)];
                }
            }
        }
        let mut weights = vec![0.0; self.classes.len()];
        for (t, amp) in psi.iter().enumerate() {
            weights[self.class_of[t]] += amp.norm_sqr();
        }
        let total: f64 = weights.iter().sum();
        weights
            .into_iter()
            .enumerate()
            .filter(|&(_, p)| p > tol::DISTRIBUTION)
            .map(|(c, p)| (c, p / total))
            .collect()
    }
}

fn combinations(items: &[usize], size: usize, limit: usize, out: &mut Vec<Vec<usize>>) {
    fn rec(items: &[usize], size: usize, start: usize, cur: &mut Vec<usize>, limit: usize, out: &mut Vec<Vec<usize>>) {
        if out.len() >= limit {
            return;
        }
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            cur.push(items[i]);
            rec(items, size, i + 1, cur, limit, out);
            cur.pop();
        }
    }
    rec(items, size, 0, &mut Vec::new(), limit, out);
}

fn candidates(reg: &Register, opts: &SearchOptions) -> Vec<Candidate> {
    let d = reg.d;
    let one = C64::new(1.0, 0.0);
    // A single product state is insensitive to the A indices, so fix k = l = 0.
    let mut out: Vec<Candidate> = (0..d * d)
        .map(|ij| Candidate { kind: CandidateKind::Basis, terms: vec![(ij * d * d, one)] })
        .collect();
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); reg.classes.len()];
    for t in 0..reg.dim() {
        groups[reg.class_of[t]].push(t);
    }
    let degenerate: Vec<&Vec<usize>> = groups.iter().filter(|g| g.len() >= 2).collect();
    let mut sets = Vec::new();
    for size in 2..=opts.degenerate_superposition_depth {
        for g in &degenerate {
            combinations(g, size, opts.max_candidates, &mut sets);
        }
    }
    sets.truncate(opts.max_candidates);
    out.extend(sets.into_iter().map(|set| {
        let a = C64::new(1.0 / (set.len() as f64).sqrt(), 0.0);
        Candidate { kind: CandidateKind::Superposition, terms: set.into_iter().map(|t| (t, a)).collect() }
    }));
    if !degenerate.is_empty() {
        let mut rng = seeded(opts.seed);
        for _ in 0..opts.random_samples {
            let g = degenerate[rng.random_range(0..degenerate.len())];
            let raw: Vec<C64> =
                g.iter().map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))).collect();
            let norm = raw.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            out.push(Candidate { kind: CandidateKind::Random, terms: g.iter().zip(raw).map(|(&t, z)| (t, z / norm)).collect() });
        }
    }
    out
}

/// Certified lower bounds on r₂ and λ₂ with the best witness found.
pub fn r2_lambda2_search(gate: &GateInstance, opts: &SearchOptions) -> Result<R2Search> {
    if gate.is_energy_preserving() {
        return Ok(R2Search::trivial());
    }
    let (basis, column_energies) = gate.exact_column_energies()?;
    let reg = Register::new(&column_energies)?;
    let v = gate.v_eigenbasis();
    let vd = v.adjoint();
    let cands = candidates(&reg, opts);
    let dists: Vec<Vec<(usize, f64)>> =
        cands.par_iter().map(|c| reg.transformed_distribution(&v, &vd, &c.terms)).collect();

    let mut supports: Vec<Vec<usize>> = dists
        .iter()
        .filter(|d| d.len() >= 2)
        .map(|d| d.iter().map(|&(c, _)| c).collect())
        .collect();
    supports.sort();
    supports.dedup();
    let ranks: HashMap<Vec<usize>, _> = supports
        .into_par_iter()
        .map(|s| {
            let chi: Vec<ExactReal> = s.iter().map(|&c| reg.classes[c].clone()).collect();
            let r = incommensurability_rank(&chi, &basis, &opts.rank);
            (s, r)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .map(|(s, r)| r.map(|r| (s, r)))
        .collect::<Result<_>>()?;

    let support_of = |d: &[(usize, f64)]| d.iter().map(|&(c, _)| c).collect::<Vec<_>>();
    let best_rank = dists.iter().filter_map(|d| ranks.get(&support_of(d))).map(|r| r.lower).max().unwrap_or(0);
    if best_rank == 0 {
        return Ok(R2Search { candidates: cands.len(), energy_preserving: false, ..R2Search::trivial() });
    }
    let scored: Vec<(usize, f64, Prepartition)> = dists
        .par_iter()
        .enumerate()
        .filter_map(|(i, d)| {
            let r = ranks.get(&support_of(d))?;
            if r.lower != best_rank {
                return None;
            }
            let atoms = d.iter().map(|&(c, p)| (reg.classes[c].clone(), p)).collect();
            let x = DiscreteRV::new(basis.clone(), atoms).ok()?;
            r.alternatives
                .iter()
                .filter_map(|part| Some((prepartition_lambda(&x, part).ok()?.lambda, part)))
                .max_by(|a, b| a.0.total_cmp(&b.0))
                .map(|(l, part)| (i, l, part.clone()))
        })
        .collect();
    let Some((best, lambda, part)) = scored.into_iter().max_by(|a, b| a.1.total_cmp(&b.1).then(b.0.cmp(&a.0))) else {
        return Ok(R2Search { candidates: cands.len(), energy_preserving: false, ..R2Search::trivial() });
    };
    let rank = &ranks[&support_of(&dists[best])];
    let d = reg.d;
    let witness = Witness {
        kind: cands[best].kind,
        terms: cands[best]
            .terms
            .iter()
            .map(|&(t, a)| WitnessTerm { levels: Register::split(d, t), re: a.re, im: a.im })
            .collect(),
        energy_support: dists[best].iter().map(|&(c, _)| reg.classes[c].value()).collect(),
        probabilities: dists[best].iter().map(|&(_, p)| p).collect(),
        prepartition: part,
    };
    Ok(R2Search {
        r2_lower: best_rank,
        lambda2_lower: lambda,
        rank_certified_exact: rank.certified_exact,
        energy_preserving: false,
        candidates: cands.len(),
        witness: Some(witness),
    })
}
