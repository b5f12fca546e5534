// Saves a ladder channel as a JSON bundle and reads it back.

use nepg::battery::{qubit_ladder_channel, uniform_ladder_state, LadderBattery};
use nepg::io::{read_json, write_json, ChannelBundle};
use nepg::quantum::linalg::{CMatrix, C64};

pub fn run_example() -> nepg::Result<()> {
    let x = CMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0].map(|x| C64::new(x, 0.0)));
    let battery = LadderBattery::new(6, 1.0)?;
    let ch = qubit_ladder_channel(&x, &battery, uniform_ladder_state(6, 1, 4)?.to_density())?;

    let path = std::env::temp_dir().join(format!("nepg-bundle-{}.json", std::process::id()));
    write_json(&path, &ChannelBundle::from_channel(&ch, Some("pauli-x ladder".into()), Some(&x))?)?;
    let bundle: ChannelBundle = read_json(&path)?;
    std::fs::remove_file(&path).ok();

    let back = bundle.to_channel()?;
    let target = bundle.target()?.expect("target stored");
    println!("bundle {:?}: d_S = {}, d_B = {}", bundle.name, back.d_s(), back.d_b());
    println!("Choi infidelity before {:.6e}, after {:.6e}", ch.choi_infidelity(&x)?, back.choi_infidelity(&target)?);
    Ok(())
}

fn main() -> nepg::Result<()> {
    run_example()
}
