// Runs the 2m-copy gate protocol through a ladder battery and compares the
// output with the ideal gate applied copy by copy.

use nepg::battery::{qubit_ladder_channel, uniform_ladder_state, LadderBattery};
use nepg::channels::{mcopy_discrepancy_pure, qubit_construction_state, WorstCaseOptions};
use nepg::quantum::linalg::{CMatrix, C64};

pub fn run_example() -> nepg::Result<()> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let v = CMatrix::from_row_slice(2, 2, &[s, s, s, -s].map(|x| C64::new(x, 0.0)));
    let battery = LadderBattery::new(16, 1.0)?;
    let beta = uniform_ladder_state(16, 4, 8)?.to_density();
    let ch = qubit_ladder_channel(&v, &battery, beta)?;
    let eps = ch.worst_case_infidelity(&v, &WorstCaseOptions { starts: 8, ..Default::default() })?.eps_wc_upper;

    for m in 1..=2 {
        let psi = qubit_construction_state(m)?;
        let d = mcopy_discrepancy_pure(&ch, &v, m, &psi)?;
        println!("m = {m}: D = {d:.4e}, 4m·sqrt(eps) = {:.4e}", 4.0 * m as f64 * eps.sqrt());
    }
    Ok(())
}

fn main() -> nepg::Result<()> {
    run_example()
}
