//! Encodes one random word, sends it through a BPSK AWGN channel and
//! decodes it with the SPA, plain min-sum and GSVS-min-sum rules. Also
//! demonstrates the alist round trip.

use ldpc_minsum::channel::{awgn, demap_llr, modulate, ChannelModel};
use ldpc_minsum::code::{build_encoder, generate_regular_code, load_alist, save_alist};
use ldpc_minsum::decoder::{DecodeRule, Decoder, DecoderConfig, ScalingSchedule};
use ldpc_minsum::Modulation;

use rand::rngs::SmallRng;
use rand::{Rng, SeedableRng};

fn main() {
    let h = generate_regular_code(1200, 3, 6, 42).expect("code construction");
    let reloaded = load_alist(&save_alist(&h)).expect("alist round trip");
    assert_eq!(reloaded, h);

    let encoder = build_encoder(&h);
    println!(
        "code: n={}, m={}, effective k={}, rate={:.4}",
        h.n(),
        h.m(),
        encoder.k(),
        encoder.rate()
    );

    let mut rng = SmallRng::seed_from_u64(1);
    let info: Vec<u8> = (0..encoder.k()).map(|_| rng.random_range(0..2)).collect();
    let codeword = encoder.encode(&info).unwrap();

    let ebn0_db = 2.5;
    let model = ChannelModel::from_ebn0(Modulation::Bpsk, ebn0_db, encoder.rate()).unwrap();
    let tx = modulate(&codeword, &model).unwrap();
    let rx = awgn(&tx, model.sigma, 7);
    let llrs = demap_llr(&rx, &model).unwrap();

    let channel_errors = llrs
        .values()
        .iter()
        .zip(&codeword)
        .filter(|(&v, &b)| (v < 0.0) as u8 != b)
        .count();
    println!("Eb/N0 = {ebn0_db} dB, raw channel bit errors: {channel_errors}");

    for (name, rule, schedule) in [
        ("spa", DecodeRule::Spa, ScalingSchedule::None),
        ("min-sum", DecodeRule::MinSum, ScalingSchedule::None),
        (
            "gsvs(0.75,5)",
            DecodeRule::MinSum,
            ScalingSchedule::Gsvs { alpha0: 0.75, step: 5 },
        ),
    ] {
        let decoder = Decoder::new(&h, DecoderConfig::new(rule, schedule)).unwrap();
        let result = decoder.decode(&llrs).unwrap();
        let residual = result
            .bits
            .iter()
            .zip(&codeword)
            .filter(|(a, b)| a != b)
            .count();
        println!(
            "  {name:<13} success={} iterations={:<2} residual bit errors={residual}",
            result.success, result.iterations_used
        );
    }
}
