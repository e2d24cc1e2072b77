//! Nelder-Mead joint optimization of the GSVS parameters (alpha0, S) for
//! an irregular ensemble, printing the evaluation log and the optimum.

use ldpc_minsum::code::DegreeDistributions;
use ldpc_minsum::de::{Grid, ThresholdOptions};
use ldpc_minsum::optimize::{optimize_schedule, NelderMeadOptions};
use ldpc_minsum::Modulation;

fn main() {
    // eIRA-flavored profile: mostly degree-2 parity chain plus heavy
    // degree-8 information columns.
    let dists = DegreeDistributions::from_profile(&[(2, 11), (3, 5), (8, 4)], 7);
    let rate = dists.design_rate();
    let opts = ThresholdOptions {
        target_ber: 1e-4,
        max_iter: 25,
        grid: Grid::new(25.0, 0.25),
        ..ThresholdOptions::default()
    };

    let result = optimize_schedule(
        &dists,
        Modulation::Bpsk,
        rate,
        &opts,
        &NelderMeadOptions::default(),
    )
    .unwrap();

    println!("alpha0,s,ebn0_min_db");
    for eval in &result.evaluations {
        println!("{},{},{:.4}", eval.alpha0, eval.step, eval.ebn0_min_db);
    }
    println!(
        "optimum: alpha0={}, S={}, threshold {:.4} dB ({} distinct evaluations)",
        result.alpha0,
        result.step,
        result.threshold.ebn0_min_db,
        result.evaluations.len()
    );
}
