//! Traces density-evolution BER trajectories of the regular (3,6) ensemble
//! under plain and GSVS-scaled min-sum, just above and below the waterfall.

use ldpc_minsum::code::DegreeDistributions;
use ldpc_minsum::de::{de_ber, init_pmf_bpsk, Grid};
use ldpc_minsum::decoder::ScalingSchedule;

fn main() {
    let dists = DegreeDistributions::regular(3, 6);
    let rate = dists.design_rate();
    let grid = Grid::default();
    let max_iter = 40;

    for schedule in [
        ScalingSchedule::None,
        ScalingSchedule::Gsvs { alpha0: 0.75, step: 5 },
    ] {
        println!("schedule {schedule}:");
        for ebn0_db in [1.4, 1.8, 2.2] {
            let channel = init_pmf_bpsk(ebn0_db, rate, grid).unwrap();
            let trajectory = de_ber(&dists, &channel, &schedule, max_iter).unwrap();
            let tail = trajectory.last().unwrap();
            let shown: Vec<String> = trajectory
                .iter()
                .step_by(8)
                .map(|b| format!("{b:.2e}"))
                .collect();
            println!(
                "  Eb/N0={ebn0_db} dB: ber[0..{max_iter}..8] = [{}], final {tail:.2e}",
                shown.join(", ")
            );
        }
    }
}
