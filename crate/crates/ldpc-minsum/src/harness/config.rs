//! Flat key-value configuration files with `[section]` headers for the
//! Monte-Carlo harness. See the README for the full format.

use std::path::PathBuf;

use thiserror::Error;

use crate::channel::Modulation;
use crate::decoder::{DecodeRule, ScalingSchedule};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{0}")]
    Invalid(String),
}

fn parse_err(line: usize, message: impl Into<String>) -> ConfigError {
    ConfigError::Parse {
        line,
        message: message.into(),
    }
}

/// Where the parity-check matrix comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum CodeSpec {
    Alist(PathBuf),
    Regular {
        n: usize,
        dv: usize,
        dc: usize,
        seed: u64,
    },
    Irregular {
        degrees: Vec<(usize, usize)>,
        dc: usize,
        seed: u64,
    },
}

/// How failed words enter the average-iterations statistic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FailIters {
    /// Failures contribute `max_iterations`.
    #[default]
    Max,
    /// Failures are excluded from the average.
    Exclude,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecoderSpec {
    pub name: String,
    pub rule: DecodeRule,
    pub schedule: ScalingSchedule,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub code: CodeSpec,
    pub modulation: Modulation,
    /// Eb/N0 sweep in dB: start, stop, step.
    pub ebn0_start_db: f64,
    pub ebn0_stop_db: f64,
    pub ebn0_step_db: f64,
    pub min_word_errors: u64,
    pub max_words: u64,
    pub base_seed: u64,
    pub max_iterations: usize,
    pub fail_iters: FailIters,
    pub threads: Option<usize>,
    pub decoders: Vec<DecoderSpec>,
}

impl SimConfig {
    /// Convenience constructor used by tests and examples; one decoder,
    /// single sweep point.
    pub fn single_point(
        code: CodeSpec,
        modulation: Modulation,
        ebn0_db: f64,
        decoder: DecoderSpec,
    ) -> Self {
        Self {
            code,
            modulation,
            ebn0_start_db: ebn0_db,
            ebn0_stop_db: ebn0_db,
            ebn0_step_db: 1.0,
            min_word_errors: 100,
            max_words: 1_000_000,
            base_seed: 1,
            max_iterations: 40,
            fail_iters: FailIters::Max,
            threads: None,
            decoders: vec![decoder],
        }
    }

    pub fn ebn0_points(&self) -> Vec<f64> {
        let mut points = Vec::new();
        let mut e = self.ebn0_start_db;
        while e <= self.ebn0_stop_db + 1e-9 {
            points.push(e);
            e += self.ebn0_step_db;
        }
        points
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.ebn0_step_db <= 0.0 {
            return Err(ConfigError::Invalid("sweep step must be positive".into()));
        }
        if self.min_word_errors == 0 {
            return Err(ConfigError::Invalid("min_word_errors must be >= 1".into()));
        }
        if self.max_words == 0 {
            return Err(ConfigError::Invalid("max_words must be >= 1".into()));
        }
        if self.max_iterations == 0 {
            return Err(ConfigError::Invalid("max_iterations must be >= 1".into()));
        }
        if self.decoders.is_empty() {
            return Err(ConfigError::Invalid("no [decoder <name>] sections".into()));
        }
        for d in &self.decoders {
            crate::decoder::DecoderConfig::new(d.rule, d.schedule.clone())
                .with_max_iterations(self.max_iterations)
                .validate()
                .map_err(|e| ConfigError::Invalid(format!("decoder {}: {e}", d.name)))?;
        }
        let mut names: Vec<&str> = self.decoders.iter().map(|d| d.name.as_str()).collect();
        names.sort_unstable();
        names.dedup();
        if names.len() != self.decoders.len() {
            return Err(ConfigError::Invalid("duplicate decoder names".into()));
        }
        Ok(())
    }
}

pub fn parse_modulation(text: &str) -> Option<Modulation> {
    match text.trim().to_ascii_lowercase().as_str() {
        "bpsk" => Some(Modulation::Bpsk),
        "qam4" | "qpsk" => Some(Modulation::Qam(4)),
        "qam16" => Some(Modulation::Qam(16)),
        "qam64" => Some(Modulation::Qam(64)),
        "qam256" => Some(Modulation::Qam(256)),
        _ => None,
    }
}

#[derive(Default)]
struct CodeSection {
    alist: Option<PathBuf>,
    generate: Option<String>,
    n: Option<usize>,
    dv: Option<usize>,
    dc: Option<usize>,
    degrees: Option<Vec<(usize, usize)>>,
    seed: u64,
}

/// Parses the harness configuration format.
pub fn parse_sim_config(text: &str) -> Result<SimConfig, ConfigError> {
    enum Section {
        None,
        Code,
        Channel,
        Sweep,
        Stop,
        Run,
        Decoder(usize),
    }

    let mut code = CodeSection::default();
    let mut modulation = None;
    let mut sweep = (None, None, Some(0.25));
    let mut min_word_errors = 100u64;
    let mut max_words = 1_000_000u64;
    let mut base_seed = 1u64;
    let mut max_iterations = 40usize;
    let mut fail_iters = FailIters::Max;
    let mut threads = None;
    let mut decoders: Vec<DecoderSpec> = Vec::new();

    let mut section = Section::None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(header) = line.strip_prefix('[') {
            let header = header
                .strip_suffix(']')
                .ok_or_else(|| parse_err(line_no, "unterminated section header"))?
                .trim();
            section = match header {
                "code" => Section::Code,
                "channel" => Section::Channel,
                "sweep" => Section::Sweep,
                "stop" => Section::Stop,
                "run" => Section::Run,
                other => match other.strip_prefix("decoder") {
                    Some(name) if !name.trim().is_empty() => {
                        decoders.push(DecoderSpec {
                            name: name.trim().to_string(),
                            rule: DecodeRule::MinSum,
                            schedule: ScalingSchedule::None,
                        });
                        Section::Decoder(decoders.len() - 1)
                    }
                    _ => return Err(parse_err(line_no, format!("unknown section [{other}]"))),
                },
            };
            continue;
        }

        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| parse_err(line_no, "expected key = value"))?;
        let key = key.trim();
        let value = value.trim();
        let number = |what: &str| -> Result<f64, ConfigError> {
            value
                .parse::<f64>()
                .map_err(|_| parse_err(line_no, format!("bad {what}: {value:?}")))
        };
        let integer = |what: &str| -> Result<u64, ConfigError> {
            value
                .parse::<u64>()
                .map_err(|_| parse_err(line_no, format!("bad {what}: {value:?}")))
        };

        match section {
            Section::None => return Err(parse_err(line_no, "key outside any [section]")),
            Section::Code => match key {
                "alist" => code.alist = Some(PathBuf::from(value)),
                "generate" => code.generate = Some(value.to_string()),
                "n" => code.n = Some(integer("n")? as usize),
                "dv" => code.dv = Some(integer("dv")? as usize),
                "dc" => code.dc = Some(integer("dc")? as usize),
                "seed" => code.seed = integer("seed")?,
                "degrees" => {
                    let mut list = Vec::new();
                    for part in value.split_whitespace() {
                        let (d, c) = part.split_once(':').ok_or_else(|| {
                            parse_err(line_no, format!("expected degree:count, got {part:?}"))
                        })?;
                        let parse = |s: &str| {
                            s.parse::<usize>().map_err(|_| {
                                parse_err(line_no, format!("bad degrees entry {part:?}"))
                            })
                        };
                        list.push((parse(d)?, parse(c)?));
                    }
                    code.degrees = Some(list);
                }
                _ => return Err(parse_err(line_no, format!("unknown [code] key {key:?}"))),
            },
            Section::Channel => match key {
                "modulation" => {
                    modulation = Some(parse_modulation(value).ok_or_else(|| {
                        parse_err(line_no, format!("unknown modulation {value:?}"))
                    })?)
                }
                _ => return Err(parse_err(line_no, format!("unknown [channel] key {key:?}"))),
            },
            Section::Sweep => match key {
                "start_db" => sweep.0 = Some(number("start_db")?),
                "stop_db" => sweep.1 = Some(number("stop_db")?),
                "step_db" => sweep.2 = Some(number("step_db")?),
                _ => return Err(parse_err(line_no, format!("unknown [sweep] key {key:?}"))),
            },
            Section::Stop => match key {
                "min_word_errors" => min_word_errors = integer("min_word_errors")?,
                "max_words" => max_words = integer("max_words")?,
                _ => return Err(parse_err(line_no, format!("unknown [stop] key {key:?}"))),
            },
            Section::Run => match key {
                "seed" => base_seed = integer("seed")?,
                "max_iterations" => max_iterations = integer("max_iterations")? as usize,
                "threads" => threads = Some(integer("threads")? as usize),
                "fail_iters" => {
                    fail_iters = match value {
                        "max" => FailIters::Max,
                        "exclude" => FailIters::Exclude,
                        _ => {
                            return Err(parse_err(
                                line_no,
                                format!("fail_iters must be max or exclude, got {value:?}"),
                            ))
                        }
                    }
                }
                _ => return Err(parse_err(line_no, format!("unknown [run] key {key:?}"))),
            },
            Section::Decoder(i) => {
                let spec = &mut decoders[i];
                match key {
                    "rule" => {
                        spec.rule = match value.to_ascii_lowercase().as_str() {
                            "spa" | "sum-product" => DecodeRule::Spa,
                            "minsum" | "min-sum" => DecodeRule::MinSum,
                            _ => {
                                return Err(parse_err(
                                    line_no,
                                    format!("unknown rule {value:?}"),
                                ))
                            }
                        }
                    }
                    "schedule" => {
                        spec.schedule = ScalingSchedule::parse(value)
                            .map_err(|e| parse_err(line_no, e.to_string()))?
                    }
                    _ => {
                        return Err(parse_err(line_no, format!("unknown [decoder] key {key:?}")))
                    }
                }
            }
        }
    }

    let code = match (code.alist, code.generate.as_deref()) {
        (Some(path), None) => CodeSpec::Alist(path),
        (None, Some("regular")) => CodeSpec::Regular {
            n: code
                .n
                .ok_or_else(|| ConfigError::Invalid("[code] regular needs n".into()))?,
            dv: code
                .dv
                .ok_or_else(|| ConfigError::Invalid("[code] regular needs dv".into()))?,
            dc: code
                .dc
                .ok_or_else(|| ConfigError::Invalid("[code] regular needs dc".into()))?,
            seed: code.seed,
        },
        (None, Some("irregular")) => CodeSpec::Irregular {
            degrees: code
                .degrees
                .ok_or_else(|| ConfigError::Invalid("[code] irregular needs degrees".into()))?,
            dc: code
                .dc
                .ok_or_else(|| ConfigError::Invalid("[code] irregular needs dc".into()))?,
            seed: code.seed,
        },
        (None, Some(other)) => {
            return Err(ConfigError::Invalid(format!(
                "unknown generate kind {other:?} (regular or irregular)"
            )))
        }
        (Some(_), Some(_)) => {
            return Err(ConfigError::Invalid(
                "[code] must give either alist or generate, not both".into(),
            ))
        }
        (None, None) => {
            return Err(ConfigError::Invalid(
                "[code] must give alist or generate".into(),
            ))
        }
    };
    let modulation =
        modulation.ok_or_else(|| ConfigError::Invalid("[channel] modulation missing".into()))?;
    let (Some(start), Some(stop), Some(step)) = sweep else {
        return Err(ConfigError::Invalid(
            "[sweep] needs start_db and stop_db".into(),
        ));
    };

    let config = SimConfig {
        code,
        modulation,
        ebn0_start_db: start,
        ebn0_stop_db: stop,
        ebn0_step_db: step,
        min_word_errors,
        max_words,
        base_seed,
        max_iterations,
        fail_iters,
        threads,
        decoders,
    };
    config.validate()?;
    Ok(config)
}
