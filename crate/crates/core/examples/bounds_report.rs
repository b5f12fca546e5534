// Searches r₂ and λ₂ for two gates and prints the resulting resource bounds.

use nepg::bounds::{r2_lambda2_search, BoundReport, GateInstance, ReportOptions, SearchOptions, Variant};
use nepg::iid::{Basis, ExactReal};
use nepg::quantum::linalg::{CMatrix, C64};
use nepg::quantum::Hamiltonian;

fn show(name: &str, gate: &GateInstance, variant: Variant) -> nepg::Result<()> {
    let search = r2_lambda2_search(gate, &SearchOptions::default())?;
    println!("{name}: r2 >= {}, lambda2 >= {:.4e}", search.r2_lower, search.lambda2_lower);
    let opts = ReportOptions { alpha: Some(1.0), variant, eta: Some(1.0), omega: Some(1.0) };
    for eps in [1e-3, 1e-6, 1e-9] {
        let r = BoundReport::evaluate(gate, &search, eps, &opts)?;
        println!(
            "  eps={eps:.0e}: C >= {:.3} bits, dim >= {:.3e}, energy >= {:?}, m_opt = {}",
            r.coherence_bound, r.dim_bound, r.energy_bound, r.m_opt
        );
    }
    Ok(())
}

pub fn run_example() -> nepg::Result<()> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let hadamard = CMatrix::from_row_slice(2, 2, &[s, s, s, -s].map(|x| C64::new(x, 0.0)));
    show("hadamard", &GateInstance::new(Hamiltonian::diagonal(&[0.0, 1.0])?, hadamard)?, Variant::Qubit)?;

    // Qutrit with energies {0, 1, √2} and a cyclic shift gate.
    let h = Hamiltonian::diagonal(&[0.0, 1.0, 2f64.sqrt()])?;
    let one = C64::new(1.0, 0.0);
    let mut shift = CMatrix::zeros(3, 3);
    for k in 0..3 {
        shift[((k + 1) % 3, k)] = one;
    }
    let basis = Basis::new(&["1", "sqrt2"])?;
    let levels = vec![ExactReal::integer(0, &basis), ExactReal::integer(1, &basis), ExactReal::basis_element(1, &basis)];
    let gate = GateInstance::new(h, shift)?.with_exact_levels(basis, levels)?;
    show("qutrit shift", &gate, Variant::General)
}

fn main() -> nepg::Result<()> {
    run_example()
}
