// The sweep driver behind `nepg battery-sweep`, with the qubit coherence
// bound evaluated at each measured error.

use nepg::battery::{battery_sweep, LadderProfile, SweepConfig};
use nepg::channels::WorstCaseOptions;
use nepg::quantum::linalg::{CMatrix, C64};

pub fn run_example() -> nepg::Result<()> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let v = CMatrix::from_row_slice(2, 2, &[s, s, s, -s].map(|x| C64::new(x, 0.0)));
    let cfg = SweepConfig {
        d_b: 40,
        omega: 1.0,
        lengths: vec![2, 4, 8, 16, 32],
        profile: LadderProfile::Sine,
        optimizer: WorstCaseOptions { starts: 8, ..WorstCaseOptions::default() },
    };
    for row in battery_sweep(&v, &cfg)? {
        println!(
            "L={:>2} C={:.3} eps_wc<={:.3e} bound={:.3} var={:.2} qfi={:.2}",
            row.len, row.coherence_bits, row.eps_wc_upper, row.bound_value, row.variance, row.qfi
        );
    }
    Ok(())
}

fn main() -> nepg::Result<()> {
    run_example()
}
