// The cheapest ladder states, in mean energy and in variance, that carry a
// given amount of coherence.

use nepg::battery::ladder_hamiltonian;
use nepg::bounds::{default_mu_grid, min_energy_at_coherence, min_variance_at_coherence};

pub fn run_example() -> nepg::Result<()> {
    let h = ladder_hamiltonian(512, 1.0)?;
    let grid = default_mu_grid(&h, 33);
    for c in [1.0, 2.0, 4.0, 6.0] {
        let e = min_energy_at_coherence(&h, c)?;
        let v = min_variance_at_coherence(&h, c, &grid)?;
        println!(
            "C = {c}: min energy {:.3} (γ = {:.3}), min variance {:.3} (reference {:?})",
            e.energy, e.gamma, v.variance, v.gaussian_reference
        );
    }
    Ok(())
}

fn main() -> nepg::Result<()> {
    run_example()
}
