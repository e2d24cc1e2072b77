//! Monte-Carlo WER/BER sweep over a generated code, comparing three
//! decoders; CSV goes to stdout.

use ldpc_minsum::decoder::{DecodeRule, ScalingSchedule};
use ldpc_minsum::harness::{CodeSpec, DecoderSpec, FailIters, SimConfig, SimRunner};
use ldpc_minsum::Modulation;

fn main() {
    let config = SimConfig {
        code: CodeSpec::Regular {
            n: 1200,
            dv: 3,
            dc: 6,
            seed: 9,
        },
        modulation: Modulation::Bpsk,
        ebn0_start_db: 1.5,
        ebn0_stop_db: 3.0,
        ebn0_step_db: 0.5,
        min_word_errors: 40,
        max_words: 4000,
        base_seed: 3,
        max_iterations: 40,
        fail_iters: FailIters::Max,
        threads: None,
        decoders: vec![
            DecoderSpec {
                name: "minsum".into(),
                rule: DecodeRule::MinSum,
                schedule: ScalingSchedule::None,
            },
            DecoderSpec {
                name: "svs5".into(),
                rule: DecodeRule::MinSum,
                schedule: ScalingSchedule::Svs { step: 5 },
            },
            DecoderSpec {
                name: "gsvs".into(),
                rule: DecodeRule::MinSum,
                schedule: ScalingSchedule::Gsvs { alpha0: 0.75, step: 5 },
            },
        ],
    };

    let runner = SimRunner::new(config).expect("runner");
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    runner.run_curve(&mut lock).expect("sweep");
}
