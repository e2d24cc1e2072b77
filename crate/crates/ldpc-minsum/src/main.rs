//! `ldpcsim`: thin command-line front end over the library.
//!
//! Subcommands: `simulate` (Monte-Carlo sweep from a config file),
//! `threshold` (density-evolution threshold of one schedule) and
//! `optimize` (Nelder-Mead search for the best GSVS parameters).

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ldpc_minsum::code::{degree_distributions, load_alist, DegreeDistributions};
use ldpc_minsum::de::{threshold_search, Grid, ThresholdOptions};
use ldpc_minsum::decoder::ScalingSchedule;
use ldpc_minsum::harness::{parse_modulation, parse_sim_config, SimRunner};
use ldpc_minsum::optimize::{optimize_schedule, NelderMeadOptions};
use ldpc_minsum::Modulation;

#[derive(Parser)]
#[command(name = "ldpcsim", about = "LDPC min-sum decoding, density evolution and schedule optimization")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a Monte-Carlo WER/BER sweep described by a config file.
    Simulate {
        /// Path to the harness configuration file.
        #[arg(long)]
        config: PathBuf,
        /// Output CSV path (defaults to stdout).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Override how failed words enter avg_iters: max | exclude.
        #[arg(long)]
        fail_iters: Option<String>,
    },
    /// Compute the density-evolution threshold of one schedule.
    Threshold {
        #[command(flatten)]
        ensemble: EnsembleArgs,
        /// Scaling schedule: none | const:<a> | svs:<S> | gsvs:<a0>,<S>.
        #[arg(long)]
        schedule: String,
        #[command(flatten)]
        de: DeArgs,
    },
    /// Jointly optimize the GSVS parameters (alpha0, S) for an ensemble.
    Optimize {
        #[command(flatten)]
        ensemble: EnsembleArgs,
        #[command(flatten)]
        de: DeArgs,
        /// Write the evaluation log CSV here instead of stdout.
        #[arg(long)]
        log: Option<PathBuf>,
    },
}

#[derive(Args)]
struct EnsembleArgs {
    /// Parity-check matrix in alist format.
    #[arg(long, conflicts_with_all = ["regular", "irregular"])]
    alist: Option<PathBuf>,
    /// Regular ensemble "dv,dc".
    #[arg(long, conflicts_with = "irregular")]
    regular: Option<String>,
    /// Irregular variable profile "deg:count deg:count ..." (requires --dc).
    #[arg(long, requires = "dc")]
    irregular: Option<String>,
    /// Check degree for --irregular.
    #[arg(long)]
    dc: Option<usize>,
    /// Code rate override for the Eb/N0 conversion.
    #[arg(long)]
    rate: Option<f64>,
}

#[derive(Args)]
struct DeArgs {
    /// Modulation: bpsk | qam4 | qam16 | qam64 | qam256.
    #[arg(long = "mod", value_name = "MODULATION")]
    modulation: String,
    /// Target bit error rate for the threshold predicate.
    #[arg(long, default_value_t = 1e-6)]
    target_ber: f64,
    /// Density-evolution iteration budget.
    #[arg(long, default_value_t = 40)]
    max_iter: usize,
    /// LLR grid spacing.
    #[arg(long, default_value_t = 0.05)]
    grid_step: f64,
    /// LLR grid bound.
    #[arg(long, default_value_t = ldpc_minsum::LLR_MAX)]
    llr_max: f64,
}

impl DeArgs {
    fn modulation(&self) -> Result<Modulation, String> {
        parse_modulation(&self.modulation)
            .ok_or_else(|| format!("unknown modulation {:?}", self.modulation))
    }

    fn options(&self) -> ThresholdOptions {
        ThresholdOptions {
            target_ber: self.target_ber,
            max_iter: self.max_iter,
            grid: Grid::new(self.llr_max, self.grid_step),
            ..ThresholdOptions::default()
        }
    }
}

impl EnsembleArgs {
    /// Degree distributions plus the rate used for Eb/N0 conversion.
    fn resolve(&self) -> Result<(DegreeDistributions, f64), String> {
        let (dists, rate) = if let Some(path) = &self.alist {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            let h = load_alist(&text).map_err(|e| e.to_string())?;
            let rate = h.nominal_rate();
            (degree_distributions(&h), rate)
        } else if let Some(spec) = &self.regular {
            let (dv, dc) = spec
                .split_once(',')
                .ok_or_else(|| format!("--regular expects dv,dc, got {spec:?}"))?;
            let dv: usize = dv.trim().parse().map_err(|_| "bad dv".to_string())?;
            let dc: usize = dc.trim().parse().map_err(|_| "bad dc".to_string())?;
            let d = DegreeDistributions::regular(dv, dc);
            let rate = d.design_rate();
            (d, rate)
        } else if let Some(profile) = &self.irregular {
            let mut counts = Vec::new();
            for part in profile.split_whitespace() {
                let (d, c) = part
                    .split_once(':')
                    .ok_or_else(|| format!("expected deg:count, got {part:?}"))?;
                counts.push((
                    d.parse::<usize>().map_err(|_| "bad degree".to_string())?,
                    c.parse::<usize>().map_err(|_| "bad count".to_string())?,
                ));
            }
            let d = DegreeDistributions::from_profile(&counts, self.dc.unwrap());
            let rate = d.design_rate();
            (d, rate)
        } else {
            return Err("one of --alist, --regular or --irregular is required".into());
        };
        Ok((dists, self.rate.unwrap_or(rate)))
    }
}

fn run() -> Result<(), String> {
    match Cli::parse().command {
        Command::Simulate {
            config,
            out,
            fail_iters,
        } => {
            let text = std::fs::read_to_string(&config)
                .map_err(|e| format!("cannot read {}: {e}", config.display()))?;
            let mut sim = parse_sim_config(&text).map_err(|e| e.to_string())?;
            if let Some(mode) = fail_iters {
                sim.fail_iters = match mode.as_str() {
                    "max" => ldpc_minsum::harness::FailIters::Max,
                    "exclude" => ldpc_minsum::harness::FailIters::Exclude,
                    other => return Err(format!("--fail-iters must be max or exclude, got {other:?}")),
                };
            }
            let runner = SimRunner::new(sim).map_err(|e| e.to_string())?;
            match out {
                Some(path) => {
                    let file = File::create(&path)
                        .map_err(|e| format!("cannot create {}: {e}", path.display()))?;
                    let mut writer = BufWriter::new(file);
                    runner.run_curve(&mut writer).map_err(|e| e.to_string())?;
                }
                None => {
                    let stdout = std::io::stdout();
                    let mut lock = stdout.lock();
                    runner.run_curve(&mut lock).map_err(|e| e.to_string())?;
                }
            }
            Ok(())
        }
        Command::Threshold {
            ensemble,
            schedule,
            de,
        } => {
            let (dists, rate) = ensemble.resolve()?;
            let modulation = de.modulation()?;
            let schedule = ScalingSchedule::parse(&schedule).map_err(|e| e.to_string())?;
            let result = threshold_search(&dists, modulation, rate, &schedule, &de.options())
                .map_err(|e| e.to_string())?;
            let (kind, alpha0, step) = match &schedule {
                ScalingSchedule::None => ("none", String::new(), String::new()),
                ScalingSchedule::Constant(a) => ("const", format!("{a}"), String::new()),
                ScalingSchedule::Svs { step } => ("svs", String::new(), format!("{step}")),
                ScalingSchedule::Gsvs { alpha0, step } => {
                    ("gsvs", format!("{alpha0}"), format!("{step}"))
                }
                ScalingSchedule::TwoDim { .. } => ("2d", String::new(), String::new()),
            };
            println!("schedule,alpha0,s,modulation,ebn0_min_db,iterations");
            println!(
                "{},{},{},{},{:.4},{}",
                kind,
                alpha0,
                step,
                de.modulation.to_ascii_lowercase(),
                result.ebn0_min_db,
                result.converged_iteration
            );
            Ok(())
        }
        Command::Optimize { ensemble, de, log } => {
            let (dists, rate) = ensemble.resolve()?;
            let modulation = de.modulation()?;
            let result = optimize_schedule(
                &dists,
                modulation,
                rate,
                &de.options(),
                &NelderMeadOptions::default(),
            )
            .map_err(|e| e.to_string())?;

            let mut log_text = String::from("alpha0,s,ebn0_min_db\n");
            for eval in &result.evaluations {
                log_text.push_str(&format!(
                    "{},{},{:.4}\n",
                    eval.alpha0, eval.step, eval.ebn0_min_db
                ));
            }
            match log {
                Some(path) => {
                    let mut file = File::create(&path)
                        .map_err(|e| format!("cannot create {}: {e}", path.display()))?;
                    file.write_all(log_text.as_bytes()).map_err(|e| e.to_string())?;
                }
                None => print!("{log_text}"),
            }
            println!(
                "{},{},{:.4}",
                result.alpha0, result.step, result.threshold.ebn0_min_db
            );
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::FAILURE
        }
    }
}
