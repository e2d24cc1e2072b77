//! Shows the Gray-mapped 16-QAM constellation and the exact per-bit LLRs
//! of a few received samples.

use ldpc_minsum::channel::{demap_llr, modulate, ChannelModel, Symbol};
use ldpc_minsum::Modulation;

fn main() {
    let model = ChannelModel::new(Modulation::Qam(16), 0.4, 0.5).unwrap();

    println!("16-QAM constellation (bits -> point, unit average energy):");
    for point in 0..16usize {
        let bits: Vec<u8> = (0..4).map(|z| (point >> (3 - z) & 1) as u8).collect();
        let s = modulate(&bits, &model).unwrap()[0];
        println!(
            "  {}{}{}{} -> ({:+.4}, {:+.4})",
            bits[0], bits[1], bits[2], bits[3], s.re, s.im
        );
    }

    println!();
    println!("exact LLRs at sigma = {} per axis:", model.sigma);
    for received in [
        Symbol { re: 0.9487, im: 0.9487 },  // on the (+3,+3)/sqrt(10) corner
        Symbol { re: 0.1, im: -0.35 },      // between points
        Symbol { re: -0.02, im: 0.02 },     // near the origin
    ] {
        let llrs = demap_llr(&[received], &model).unwrap();
        let formatted: Vec<String> = llrs.values().iter().map(|v| format!("{v:+.3}")).collect();
        println!(
            "  r=({:+.3},{:+.3}) -> [{}]",
            received.re,
            received.im,
            formatted.join(", ")
        );
    }
}
