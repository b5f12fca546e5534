// Entropic coherence of a few qubit and qutrit states, and how it reacts to
// dephasing and to energy-preserving rotations.

use nepg::coherence::{energy_distribution, entropic_coherence, is_incoherent, relative_entropy, twirl};
use nepg::quantum::{random_energy_preserving_unitary, Hamiltonian, PureState};

pub fn run_example() -> nepg::Result<()> {
    let qubit = Hamiltonian::diagonal(&[0.0, 1.0])?;
    let plus = PureState::from_amplitudes(&[1.0, 1.0])?.to_density();
    let ground = PureState::basis(2, 0).to_density();
    println!("C(|+>)  = {:.6} bits", entropic_coherence(&plus, &qubit)?);
    println!("C(|0>)  = {:.6} bits", entropic_coherence(&ground, &qubit)?);

    // Dephasing in the energy basis removes all coherence, and the gap
    // S(ρ) vs S(twirl ρ) is exactly the relative entropy to the twirl.
    let dephased = twirl(&plus, &qubit)?;
    println!("twirl(|+>) incoherent: {}", is_incoherent(&dephased, &qubit, 1e-12)?);
    println!("S(ρ || twirl ρ) = {:.6} bits", relative_entropy(&plus, &dephased)?);

    // A degenerate qutrit: superpositions inside the degenerate pair cost nothing.
    let h = Hamiltonian::diagonal(&[0.0, 0.0, 2.0])?;
    let inside = PureState::from_amplitudes(&[1.0, 1.0, 0.0])?;
    let across = PureState::from_amplitudes(&[1.0, 0.0, 1.0])?;
    println!("C(inside degenerate pair) = {:.6}", entropic_coherence(&inside.to_density(), &h)?);
    println!("C(across the gap)         = {:.6}", entropic_coherence(&across.to_density(), &h)?);
    println!("energy distribution of the latter: {:?}", energy_distribution(&across, &h)?.probabilities());

    let u = random_energy_preserving_unitary(&h, 11)?;
    let rotated = across.to_density().conjugate(&u)?;
    println!("after an energy-preserving rotation: {:.6}", entropic_coherence(&rotated, &h)?);
    Ok(())
}

fn main() -> nepg::Result<()> {
    run_example()
}
