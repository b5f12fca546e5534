// Exact entropy of i.i.d. sums next to the asymptotic lower bounds, for a
// lattice variable and for values {0, 1, √2}.

use nepg::iid::{
    entropy_lower_bound, maximal_span, qubit_production_entropy, sum_entropy, Basis, DiscreteRV, ExactReal,
    Prepartition,
};

pub fn run_example() -> nepg::Result<()> {
    let coin = DiscreteRV::bernoulli(0.5)?;
    let whole = Prepartition::new(vec![vec![0, 1]]);
    for n in [10, 100, 1000] {
        let b = entropy_lower_bound(&coin, n, &whole)?;
        println!("coin  N={n:>4}: exact {:.4}  bound {:.4} ({:?})", sum_entropy(&coin, n)?, b.value, b.branch);
    }

    let basis = Basis::new(&["1", "sqrt2"])?;
    let values = vec![
        ExactReal::integer(0, &basis),
        ExactReal::integer(1, &basis),
        ExactReal::basis_element(1, &basis),
    ];
    println!("span of {{0, 1, √2}}: {:?}", maximal_span(&values, &basis)?);
    let x = DiscreteRV::uniform(basis, values)?;
    let part = Prepartition::new(vec![vec![0, 1], vec![2]]);
    for n in [50, 100, 200] {
        let b = entropy_lower_bound(&x, n, &part)?;
        println!("{{0,1,√2}} N={n:>3}: exact {:.4}  bound {:.4} ({:?})", sum_entropy(&x, n)?, b.value, b.branch);
    }

    let p = qubit_production_entropy(std::f64::consts::FRAC_PI_4, 16)?;
    println!("qubit production, m=16: exact {:.4}, floor {:?}", p.exact, p.asymptotic_floor);
    Ok(())
}

fn main() -> nepg::Result<()> {
    run_example()
}
