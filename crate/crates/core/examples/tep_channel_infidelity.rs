// A random total-energy-preserving channel on a qutrit with a small battery,
// scored against the identity gate.

use nepg::channels::{fvdg_interval, TepChannel, WorstCaseOptions};
use nepg::quantum::linalg::CMatrix;
use nepg::quantum::random::{random_density, seeded};
use nepg::quantum::{random_energy_preserving_unitary, Hamiltonian};

pub fn run_example() -> nepg::Result<()> {
    let h_s = Hamiltonian::diagonal(&[0.0, 1.0, 2.0])?;
    let h_b = Hamiltonian::diagonal(&[0.0, 1.0, 2.0, 3.0])?;
    let u = random_energy_preserving_unitary(&h_s.tensor(&h_b)?, 5)?;
    let beta = random_density(4, 2, &mut seeded(5));
    let ch = TepChannel::new(h_s, h_b, beta, u)?;

    let target = CMatrix::identity(3, 3);
    let opts = WorstCaseOptions { starts: 8, ..WorstCaseOptions::default() };
    let r = ch.worst_case_infidelity(&target, &opts)?;
    println!("Choi infidelity        {:.6}", r.eps_choi);
    println!("worst-case bracket     [{:.6}, {:.6}]", r.eps_wc_lower, r.eps_wc_upper);
    println!("optimizer estimate     {:.6} (gap {:.1e}, converged {})", r.eps_wc_estimate, r.duality_gap, r.converged);
    println!("diamond-distance range [{:.6}, {:.6}]", r.diamond_lower, r.diamond_upper);

    let (lo, hi) = fvdg_interval(r.eps_wc_estimate)?;
    println!("trace-distance interval at the estimate: [{lo:.6}, {hi:.6}]");
    Ok(())
}

fn main() -> nepg::Result<()> {
    run_example()
}
