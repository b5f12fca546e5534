// A Hadamard gate driven by a ladder battery: the error falls as the
// battery's energy spread widens.

use nepg::battery::{battery_report, qubit_ladder_channel, LadderBattery, LadderProfile};
use nepg::channels::WorstCaseOptions;
use nepg::quantum::linalg::{CMatrix, C64};

pub fn run_example() -> nepg::Result<()> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let hadamard = CMatrix::from_row_slice(2, 2, &[s, s, s, -s].map(|x| C64::new(x, 0.0)));
    let battery = LadderBattery::new(24, 1.0)?;
    let opts = WorstCaseOptions { starts: 8, ..WorstCaseOptions::default() };

    println!("{:>4} {:>8} {:>12} {:>12}", "L", "C(β)", "eps_choi", "eps_wc_upper");
    for len in [2, 4, 8, 16] {
        for profile in [LadderProfile::Uniform, LadderProfile::Sine] {
            let beta = profile.state(battery.d_b(), (battery.d_b() - len) / 2, len)?.to_density();
            let report = battery_report(&beta, &battery.hamiltonian())?;
            let ch = qubit_ladder_channel(&hadamard, &battery, beta)?;
            let r = ch.worst_case_infidelity(&hadamard, &opts)?;
            println!("{len:>4} {:>8.4} {:>12.4e} {:>12.4e}  {profile:?}", report.coherence, r.eps_choi, r.eps_wc_upper);
        }
    }
    Ok(())
}

fn main() -> nepg::Result<()> {
    run_example()
}
