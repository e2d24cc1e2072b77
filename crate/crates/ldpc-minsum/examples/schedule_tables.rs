//! Prints the per-iteration scaling factor tables of the SVS and GSVS
//! schedules for a few parameter choices.

use ldpc_minsum::decoder::ScalingSchedule;

fn main() {
    let max_iter = 20;

    println!("SVS stair sequence, alpha_i = 1 - 2^(-ceil(i/S))");
    for step in [1usize, 5] {
        let schedule = ScalingSchedule::Svs { step };
        let row: Vec<String> = (1..=max_iter)
            .map(|i| format!("{:.4}", schedule.alpha(i).unwrap()))
            .collect();
        println!("  S={step:<2} {}", row.join(" "));
    }

    println!();
    println!("GSVS sequence, alpha_i = 1 - (1 - alpha0) * 2^(-(ceil(i/S) - 1))");
    for (alpha0, step) in [(0.75, 9), (0.75, 5), (0.875, 4)] {
        let schedule = ScalingSchedule::Gsvs { alpha0, step };
        let row: Vec<String> = (1..=max_iter)
            .map(|i| format!("{:.4}", schedule.alpha(i).unwrap()))
            .collect();
        println!("  (a0={alpha0}, S={step}) {}", row.join(" "));
    }
}
