#[allow(dead_code)]
mod coherence_basics {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/coherence_basics.rs"));
}

#[test]
fn coherence_basics_runs() {
    coherence_basics::run_example().expect("coherence_basics example should run");
}

#[allow(dead_code)]
mod tep_channel_infidelity {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/tep_channel_infidelity.rs"));
}

#[test]
fn tep_channel_infidelity_runs() {
    tep_channel_infidelity::run_example().expect("tep_channel_infidelity example should run");
}

#[allow(dead_code)]
mod qubit_ladder_channel {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/qubit_ladder_channel.rs"));
}

#[test]
fn qubit_ladder_channel_runs() {
    qubit_ladder_channel::run_example().expect("qubit_ladder_channel example should run");
}

#[allow(dead_code)]
mod multicopy_discrepancy {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/multicopy_discrepancy.rs"));
}

#[test]
fn multicopy_discrepancy_runs() {
    multicopy_discrepancy::run_example().expect("multicopy_discrepancy example should run");
}

#[allow(dead_code)]
mod battery_sweep {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/battery_sweep.rs"));
}

#[test]
fn battery_sweep_runs() {
    battery_sweep::run_example().expect("battery_sweep example should run");
}

#[allow(dead_code)]
mod iid_entropy {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/iid_entropy.rs"));
}

#[test]
fn iid_entropy_runs() {
    iid_entropy::run_example().expect("iid_entropy example should run");
}

#[allow(dead_code)]
mod incommensurability_rank {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/incommensurability_rank.rs"));
}

#[test]
fn incommensurability_rank_runs() {
    incommensurability_rank::run_example().expect("incommensurability_rank example should run");
}

#[allow(dead_code)]
mod bounds_report {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/bounds_report.rs"));
}

#[test]
fn bounds_report_runs() {
    bounds_report::run_example().expect("bounds_report example should run");
}

#[allow(dead_code)]
mod min_energy_variance {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/min_energy_variance.rs"));
}

#[test]
fn min_energy_variance_runs() {
    min_energy_variance::run_example().expect("min_energy_variance example should run");
}

#[allow(dead_code)]
mod channel_bundle_io {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/channel_bundle_io.rs"));
}

#[test]
fn channel_bundle_io_runs() {
    channel_bundle_io::run_example().expect("channel_bundle_io example should run");
}
