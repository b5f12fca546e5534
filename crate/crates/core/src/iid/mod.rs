//! Exact i.i.d. sums over rationally independent bases: lattice structure,
//! incommensurability rank, sum entropies and their asymptotic lower bounds.

mod entropy;
mod exact;
mod rank;
mod rv;

pub use entropy::{
    discretized_normal_mixture_entropy, entropy_lower_bound, prepartition_lambda, qubit_normal_parameters, qubit_production_distribution,
    qubit_production_entropy, BoundBranch, EntropyBound, PrepartitionLambda, ProductionEntropy,
};
pub use exact::{parse_rational, Basis, ExactReal};
pub use rank::{
    analyze_prepartition, certify_incommensurable, find_collision, incommensurability_rank, maximal_span,
    rational_span_dim, Collision, Prepartition, RankOptions, RankResult, Span, SubsetInfo,
};
pub use rv::{shannon_entropy, sum_distribution, sum_entropy, Atom, AtomFile, DiscreteRV, DiscreteRvFile, SUM_SUPPORT_CAP};
