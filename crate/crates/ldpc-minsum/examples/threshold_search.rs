//! Compares density-evolution thresholds of constant, SVS and GSVS scaling
//! on the regular (3,6) BPSK ensemble.

use ldpc_minsum::code::DegreeDistributions;
use ldpc_minsum::de::{threshold_search, Grid, ThresholdOptions};
use ldpc_minsum::decoder::ScalingSchedule;
use ldpc_minsum::Modulation;

fn main() {
    let dists = DegreeDistributions::regular(3, 6);
    let rate = dists.design_rate();
    let opts = ThresholdOptions {
        target_ber: 1e-5,
        max_iter: 40,
        grid: Grid::new(25.0, 0.1),
        ..ThresholdOptions::default()
    };

    println!("schedule,ebn0_min_db,iterations");
    for schedule in [
        ScalingSchedule::None,
        ScalingSchedule::Constant(0.8125),
        ScalingSchedule::Svs { step: 5 },
        ScalingSchedule::Gsvs { alpha0: 0.75, step: 5 },
    ] {
        let result = threshold_search(&dists, Modulation::Bpsk, rate, &schedule, &opts).unwrap();
        println!(
            "{schedule},{:.3},{}",
            result.ebn0_min_db, result.converged_iteration
        );
    }
}
