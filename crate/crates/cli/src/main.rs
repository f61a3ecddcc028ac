//! Command-line driver for the simulated multipath transmission scheme.
//!
//! Every experiment is fully seeded, so reruns with the same config are
//! byte-identical on the CSV side. Exit codes: 0 success, 2 config error,
//! 3 enumeration-guard violation.

mod codebook_io;
mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use nhuncc_core::codebook::Codebook;
use nhuncc_core::exponent::{self, NumericConfig};
use nhuncc_core::params::SystemParams;
use nhuncc_core::pipeline;
use nhuncc_core::secmeter::{
    self, CodebookReader, FirstBitCorrelator, HistogramDistinguisher, RandomGuesser,
    SchemeMode, SchemeRandomGuesser, SuffixReader,
};

use config::{ConfigError, RunConfig};
use report::{f64_cell, write_report};

#[derive(Debug)]
enum CliError {
    Config(String),
    Guard(String),
    Io(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Guard(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<nhuncc_core::params::ParamError> for CliError {
    fn from(e: nhuncc_core::params::ParamError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<nhuncc_core::codebook::CodebookError> for CliError {
    fn from(e: nhuncc_core::codebook::CodebookError) -> Self {
        CliError::Guard(e.to_string())
    }
}

impl From<nhuncc_core::secmeter::SecMeterError> for CliError {
    fn from(e: nhuncc_core::secmeter::SecMeterError) -> Self {
        match e {
            secmeter::SecMeterError::TooLarge { .. } => CliError::Guard(e.to_string()),
            secmeter::SecMeterError::Domain(_) => CliError::Config(e.to_string()),
        }
    }
}

impl From<nhuncc_core::pipeline::PipelineError> for CliError {
    fn from(e: nhuncc_core::pipeline::PipelineError) -> Self {
        use nhuncc_core::grandec::DecodeError;
        use nhuncc_core::pipeline::PipelineError;
        match &e {
            PipelineError::Decode(DecodeError::PatternGuard { .. })
            | PipelineError::Decode(DecodeError::OracleGuard { .. }) => {
                CliError::Guard(e.to_string())
            }
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl From<nhuncc_core::exponent::ExponentError> for CliError {
    fn from(e: nhuncc_core::exponent::ExponentError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<codebook_io::CodebookFileError> for CliError {
    fn from(e: codebook_io::CodebookFileError) -> Self {
        CliError::Io(e.to_string())
    }
}

/// Flags mirroring the config keys; any flag overrides the file value.
#[derive(Args, Debug, Default)]
struct Common {
    /// Flat key=value config file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    num_links: Option<u32>,
    #[arg(long)]
    flip_prob: Option<f64>,
    #[arg(long)]
    eve_links: Option<u32>,
    #[arg(long)]
    msg_bits: Option<u32>,
    #[arg(long)]
    eps_bits: Option<u32>,
    #[arg(long)]
    cipher_rand_bits: Option<u32>,
    #[arg(long)]
    cipher_expand_bits: Option<u32>,
    #[arg(long)]
    codebook_seed: Option<u64>,
    #[arg(long)]
    channel_seed: Option<u64>,
    #[arg(long)]
    nonce_seed: Option<u64>,
    #[arg(long)]
    message_seed: Option<u64>,
    #[arg(long)]
    game_seed: Option<u64>,
    /// 32 hex chars, or `identity` for the broken fixture.
    #[arg(long)]
    cipher_key: Option<String>,
    #[arg(long)]
    trials: Option<u64>,
    /// GRAND query budget; 0 picks the default for the dimensions.
    #[arg(long)]
    budget: Option<u64>,
}

impl Common {
    fn resolve(&self) -> Result<RunConfig, CliError> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::from_file(path)?,
            None => RunConfig::default(),
        };
        macro_rules! over {
            ($($field:ident),*) => {
                $(if let Some(v) = &self.$field { cfg.$field = v.clone().into(); })*
            };
        }
        over!(
            num_links,
            flip_prob,
            eve_links,
            eps_bits,
            cipher_rand_bits,
            cipher_expand_bits,
            codebook_seed,
            channel_seed,
            nonce_seed,
            message_seed,
            game_seed,
            cipher_key,
            trials,
            budget
        );
        if let Some(k) = self.msg_bits {
            cfg.msg_bits = Some(k);
        }
        Ok(cfg)
    }
}

#[derive(Parser, Debug)]
#[command(name = "nhuncc", version, about = "Secure multipath coding simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Resolve and print scheme parameters with the rate check.
    Params {
        #[command(flatten)]
        common: Common,
    },
    /// Generate, export, import, or dump a codebook.
    Codebook {
        #[command(flatten)]
        common: Common,
        /// Write a binary codebook file.
        #[arg(long)]
        export: Option<PathBuf>,
        /// Read and verify a binary codebook file (ignores other params).
        #[arg(long)]
        import: Option<PathBuf>,
        /// Print a textual hex dump to stdout.
        #[arg(long)]
        hex: bool,
    },
    /// Encode, transmit, decode; per-trial telemetry to CSV.
    Roundtrip {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "roundtrip")]
        output: PathBuf,
        /// Include per-column applied-flip counts in the CSV.
        #[arg(long)]
        verbose: bool,
    },
    /// Block-error-rate sweep over block length or flip probability.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// `n` sweeps wire length at fixed rate, `p` sweeps flip prob.
        #[arg(long, value_parser = ["n", "p"])]
        over: String,
        /// Comma-separated sweep values.
        #[arg(long)]
        values: String,
        /// For `n` sweeps: code rate as a multiple of channel capacity.
        #[arg(long, default_value_t = 0.7)]
        rate_factor: f64,
        #[arg(long, default_value = "sweep")]
        output: PathBuf,
    },
    /// Error-exponent theory profile and optional empirical fit.
    Exponent {
        #[command(flatten)]
        common: Common,
        /// Code rate for the empirical fit.
        #[arg(long, default_value_t = 0.5)]
        rate: f64,
        /// Comma-separated block lengths; empty skips the empirical fit.
        #[arg(long, default_value = "")]
        fit_lengths: String,
        /// Theory-curve grid points over (0, capacity).
        #[arg(long, default_value_t = 20)]
        grid: u32,
        #[arg(long, default_value = "exponent")]
        output: PathBuf,
    },
    /// Exact leakage of message indices through the unencrypted rows.
    Leakage {
        #[command(flatten)]
        common: Common,
        /// Number of codebook seeds to average over.
        #[arg(long, default_value_t = 10)]
        seeds: u64,
        #[arg(long, default_value = "leakage")]
        output: PathBuf,
    },
    /// Bin-count identities and concentration statistics.
    Bins {
        #[command(flatten)]
        common: Common,
        /// Relative concentration band around the expected count.
        #[arg(long, default_value_t = 0.5)]
        epsilon_prime: f64,
        #[arg(long, default_value = "bins")]
        output: PathBuf,
    },
    /// Indistinguishability game harnesses.
    Game {
        #[command(flatten)]
        common: Common,
        /// `cipher` plays against the column cipher, `individual`
        /// against the full scheme.
        #[arg(long, value_parser = ["cipher", "individual"])]
        game: String,
        #[arg(long, default_value = "random")]
        adversary: String,
        /// Scheme wiring for the individual game.
        #[arg(long, default_value = "reference", value_parser = ["reference", "nothing-encrypted"])]
        mode: String,
        /// Target message index for the individual game.
        #[arg(long, default_value_t = 0)]
        target: u32,
        #[arg(long, default_value = "game")]
        output: PathBuf,
    },
}

fn params_json(params: &SystemParams) -> serde_json::Value {
    let rc = params.check_rate_condition();
    json!({
        "num_links": params.num_links,
        "flip_prob": params.flip_prob,
        "eve_links": params.eve_links,
        "msg_bits": params.msg_bits,
        "secure_bits": params.secure_bits,
        "eps_bits": params.eps_bits,
        "encrypted_links": params.encrypted_links,
        "cipher_rand_bits": params.cipher_rand_bits,
        "cipher_expand_bits": params.cipher_expand_bits,
        "bin_index_bits": params.bin_index_bits(),
        "position_bits": params.position_bits(),
        "num_bins": params.num_bins(),
        "delta": params.delta(),
        "wire_bits": params.wire_bits(),
        "noise_rate": params.noise_rate,
        "feasible": params.is_feasible(),
        "rate_check": {
            "satisfied": rc.satisfied,
            "lhs": rc.lhs,
            "capacity": rc.capacity,
            "effective_rate": rc.effective_rate,
        },
    })
}

fn cmd_params(common: &Common) -> Result<(), CliError> {
    let cfg = common.resolve()?;
    let params = cfg.resolve_params()?;
    println!("{}", serde_json::to_string_pretty(&params_json(&params))?);
    Ok(())
}

fn cmd_codebook(
    common: &Common,
    export: Option<&PathBuf>,
    import: Option<&PathBuf>,
    hex: bool,
) -> Result<(), CliError> {
    let codebook = match import {
        Some(path) => codebook_io::import(path)?,
        None => {
            let cfg = common.resolve()?;
            let params = cfg.resolve_params()?;
            Codebook::generate(&params, cfg.codebook_seed)?
        }
    };
    if let Some(path) = export {
        codebook_io::export(&codebook, path)?;
    }
    if hex {
        print!("{}", codebook_io::hex_dump(&codebook));
    } else {
        let params = codebook.params();
        println!(
            "{}",
            serde_json::to_string_pretty(&json!({
                "seed": codebook.seed(),
                "num_bins": params.num_bins(),
                "delta": params.delta(),
                "codewords": params.num_bins() * params.delta(),
                "collisions": codebook.collision_count(),
                "params": params_json(params),
            }))?
        );
    }
    Ok(())
}

fn cmd_roundtrip(common: &Common, output: &PathBuf, verbose: bool) -> Result<(), CliError> {
    let cfg = common.resolve()?;
    let params = cfg.resolve_params()?;
    let key = cfg.resolve_key()?;
    let budget = cfg.resolve_budget(&params);
    let codebook = Codebook::generate(&params, cfg.codebook_seed)?;
    let started = Instant::now();
    let report = pipeline::run_roundtrip(&codebook, &key, &cfg.seeds(), cfg.trials, budget)?;
    let elapsed = started.elapsed().as_secs_f64();

    let mut header = vec!["trial", "block_error", "abandoned", "total_queries", "max_noise_weight"];
    if verbose {
        header.push("flips_per_column");
    }
    let rows: Vec<Vec<String>> = report
        .records
        .iter()
        .map(|r| {
            let mut row = vec![
                r.trial.to_string(),
                (r.block_error as u8).to_string(),
                (r.any_abandoned as u8).to_string(),
                r.column_queries.iter().sum::<u64>().to_string(),
                r.noise_weights.iter().max().copied().unwrap_or(0).to_string(),
            ];
            if verbose {
                let flips: Vec<String> =
                    r.flips_applied.iter().map(|f| f.to_string()).collect();
                row.push(flips.join(";"));
            }
            row
        })
        .collect();
    let out = write_report(
        output,
        "roundtrip",
        &cfg,
        &header,
        &rows,
        json!({
            "trials": report.trials,
            "block_errors": report.block_errors,
            "bler": report.bler(),
            "abandoned_trials": report.abandoned_trials,
            "total_queries": report.total_queries,
            "budget": budget,
            "elapsed_seconds": elapsed,
        }),
    )?;
    eprintln!("wrote {} and {}", out.csv_path.display(), out.json_path.display());
    Ok(())
}

fn parse_values<T: core::str::FromStr>(s: &str) -> Result<Vec<T>, CliError> {
    s.split(',')
        .map(str::trim)
        .filter(|v| !v.is_empty())
        .map(|v| v.parse().map_err(|_| CliError::Config(format!("bad sweep value: {}", v))))
        .collect()
}

/// Single-column configuration at wire length `n` and rate `R = k_u / n`:
/// no eavesdropper tail, no slack, no cipher expansion, so `n` alone sets
/// the block length.
fn rate_point(n: u32, rate: f64, p: f64) -> Result<SystemParams, CliError> {
    let k_u = (rate * n as f64).round() as u32;
    if k_u == 0 || k_u >= n {
        return Err(CliError::Config(format!("rate {} infeasible at n = {}", rate, n)));
    }
    Ok(SystemParams::new(n, p, 0, k_u, 0, 0, 0)?)
}

fn cmd_sweep(
    common: &Common,
    over: &str,
    values: &str,
    rate_factor: f64,
    output: &PathBuf,
) -> Result<(), CliError> {
    let cfg = common.resolve()?;
    let key = cfg.resolve_key()?;
    let started = Instant::now();
    let header = ["sweep", "value", "msg_bits", "wire_bits", "rate", "trials", "errors", "bler"];
    let mut rows = Vec::new();
    match over {
        "n" => {
            let p = cfg.flip_prob;
            let capacity = 1.0 - nhuncc_core::params::binary_entropy(p)?;
            let rate = rate_factor * capacity;
            for n in parse_values::<u32>(values)? {
                let params = rate_point(n, rate, p)?;
                let codebook = Codebook::generate(&params, cfg.codebook_seed)?;
                let budget = cfg.resolve_budget(&params);
                let (errors, trials) = pipeline::column_error_rate(
                    &codebook,
                    &key,
                    &cfg.seeds(),
                    cfg.trials,
                    budget,
                )?;
                rows.push(vec![
                    "n".into(),
                    n.to_string(),
                    params.msg_bits.to_string(),
                    params.wire_bits().to_string(),
                    f64_cell(params.msg_bits as f64 / params.wire_bits() as f64),
                    trials.to_string(),
                    errors.to_string(),
                    f64_cell(errors as f64 / trials as f64),
                ]);
            }
        }
        "p" => {
            for p in parse_values::<f64>(values)? {
                let mut point = cfg.clone();
                point.flip_prob = p;
                let params = point.resolve_params()?;
                let codebook = Codebook::generate(&params, point.codebook_seed)?;
                let budget = point.resolve_budget(&params);
                let (errors, trials) = pipeline::column_error_rate(
                    &codebook,
                    &key,
                    &point.seeds(),
                    point.trials,
                    budget,
                )?;
                rows.push(vec![
                    "p".into(),
                    f64_cell(p),
                    params.msg_bits.to_string(),
                    params.wire_bits().to_string(),
                    f64_cell(params.msg_bits as f64 / params.wire_bits() as f64),
                    trials.to_string(),
                    errors.to_string(),
                    f64_cell(errors as f64 / trials as f64),
                ]);
            }
        }
        other => return Err(CliError::Config(format!("unknown sweep axis: {}", other))),
    }
    let elapsed = started.elapsed().as_secs_f64();
    let out = write_report(
        output,
        "sweep",
        &cfg,
        &header,
        &rows,
        json!({ "axis": over, "rate_factor": rate_factor, "elapsed_seconds": elapsed }),
    )?;
    eprintln!("wrote {} and {}", out.csv_path.display(), out.json_path.display());
    Ok(())
}

fn cmd_exponent(
    common: &Common,
    rate: f64,
    fit_lengths: &str,
    grid: u32,
    output: &PathBuf,
) -> Result<(), CliError> {
    let cfg = common.resolve()?;
    let p = cfg.flip_prob;
    let numeric = NumericConfig::default();
    let prof = exponent::profile(p, &numeric)?;
    let header = ["row", "rate", "eps_theory", "n", "trials", "errors", "bler", "slope", "slope_stderr"];
    let mut rows = Vec::new();
    if grid < 2 {
        return Err(CliError::Config("grid needs at least 2 points".into()));
    }
    for i in 1..grid {
        let r = prof.capacity * i as f64 / grid as f64;
        let eps = exponent::error_exponent(r, p, &numeric)?;
        rows.push(vec![
            "theory".into(),
            f64_cell(r),
            f64_cell(eps),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
        ]);
    }
    let mut fit_summary = json!(null);
    let lengths = parse_values::<u32>(fit_lengths)?;
    if !lengths.is_empty() {
        let fit = exponent::empirical_exponent(
            rate,
            p,
            &lengths,
            cfg.trials.max(1000),
            cfg.channel_seed,
            &numeric,
        )?;
        for row in &fit.rows {
            rows.push(vec![
                "empirical".into(),
                f64_cell(rate),
                f64_cell(fit.theory),
                row.n.to_string(),
                row.trials.to_string(),
                row.error_events.to_string(),
                f64_cell(row.bler),
                f64_cell(fit.slope),
                f64_cell(fit.slope_stderr),
            ]);
        }
        fit_summary = json!({
            "rate": rate,
            "slope": fit.slope,
            "slope_stderr": fit.slope_stderr,
            "theory": fit.theory,
            "sparse_errors": fit.sparse_errors,
        });
    }
    let out = write_report(
        output,
        "exponent",
        &cfg,
        &header,
        &rows,
        json!({
            "p": p,
            "capacity": prof.capacity,
            "x_star": prof.x_star,
            "shannon": prof.shannon,
            "renyi_half": prof.renyi_half,
            "min_entropy": prof.min_entropy,
            "fit": fit_summary,
        }),
    )?;
    eprintln!("wrote {} and {}", out.csv_path.display(), out.json_path.display());
    Ok(())
}

fn cmd_leakage(common: &Common, seeds: u64, output: &PathBuf) -> Result<(), CliError> {
    let cfg = common.resolve()?;
    let params = cfg.resolve_params()?;
    let header = ["seed", "target", "mutual_information_bits", "observation_entropy_bits"];
    let mut rows = Vec::new();
    let mut per_index_total = vec![0.0f64; params.msg_bits as usize];
    let mut full_total = 0.0f64;
    for i in 0..seeds {
        let seed = cfg.codebook_seed + i;
        let codebook = Codebook::generate(&params, seed)?;
        let omega = secmeter::unencrypted_rows(&params);
        for target in 0..params.msg_bits {
            let rep = secmeter::exact_leakage(&codebook, &omega, &[target])?;
            per_index_total[target as usize] += rep.mutual_information;
            rows.push(vec![
                seed.to_string(),
                target.to_string(),
                f64_cell(rep.mutual_information),
                f64_cell(rep.observation_entropy),
            ]);
        }
        let all: Vec<u32> = (0..params.msg_bits).collect();
        let rep = secmeter::exact_leakage(&codebook, &omega, &all)?;
        full_total += rep.mutual_information;
        rows.push(vec![
            seed.to_string(),
            "all".into(),
            f64_cell(rep.mutual_information),
            f64_cell(rep.observation_entropy),
        ]);
    }
    let per_index_mean: Vec<f64> =
        per_index_total.iter().map(|t| t / seeds as f64).collect();
    let worst = per_index_mean.iter().cloned().fold(0.0, f64::max);
    let out = write_report(
        output,
        "leakage",
        &cfg,
        &header,
        &rows,
        json!({
            "seeds": seeds,
            "per_index_mean_bits": per_index_mean,
            "worst_index_mean_bits": worst,
            "full_message_mean_bits": full_total / seeds as f64,
            "secure_bits": params.secure_bits,
        }),
    )?;
    eprintln!("wrote {} and {}", out.csv_path.display(), out.json_path.display());
    Ok(())
}

fn cmd_bins(common: &Common, epsilon_prime: f64, output: &PathBuf) -> Result<(), CliError> {
    let cfg = common.resolve()?;
    let params = cfg.resolve_params()?;
    let codebook = Codebook::generate(&params, cfg.codebook_seed)?;
    let stats = secmeter::bin_concentration(&codebook, epsilon_prime);
    let header = ["bin", "suffix", "count"];
    let mut rows = Vec::new();
    for (bin, counts) in stats.counts.iter().enumerate() {
        for (suffix, &count) in counts.iter().enumerate() {
            rows.push(vec![bin.to_string(), suffix.to_string(), count.to_string()]);
        }
    }
    let bound = secmeter::advantage_bound(
        params.msg_bits.max(2),
        2,
        (params.msg_bits.max(4) as f64).log2().max(2.0),
    )?;
    let out = write_report(
        output,
        "bins",
        &cfg,
        &header,
        &rows,
        json!({
            "mean": stats.mean,
            "min": stats.min,
            "max": stats.max,
            "epsilon_prime": stats.epsilon_prime,
            "concentration_pass_fraction": stats.concentration_pass_fraction,
            "advantage_bound": {
                "k_u": bound.k_u,
                "d": bound.d,
                "t": bound.t,
                "b1": bound.b1,
                "b2": bound.b2,
                "ratio": bound.ratio,
                "p_c": bound.p_c,
                "eps_c": bound.eps_c,
                "bound": bound.bound,
            },
        }),
    )?;
    eprintln!("wrote {} and {}", out.csv_path.display(), out.json_path.display());
    Ok(())
}

fn cmd_game(
    common: &Common,
    game: &str,
    adversary: &str,
    mode: &str,
    target: u32,
    output: &PathBuf,
) -> Result<(), CliError> {
    let cfg = common.resolve()?;
    let params = cfg.resolve_params()?;
    let key = cfg.resolve_key()?;
    let scheme_mode = match mode {
        "reference" => SchemeMode::Reference,
        "nothing-encrypted" => SchemeMode::NothingEncrypted,
        other => return Err(CliError::Config(format!("unknown mode: {}", other))),
    };
    let transcript = match game {
        "cipher" => {
            let mut adv: Box<dyn secmeter::CipherAdversary> = match adversary {
                "random" => Box::new(RandomGuesser),
                "first-bit" => Box::new(FirstBitCorrelator),
                "histogram" => Box::new(HistogramDistinguisher),
                other => {
                    return Err(CliError::Config(format!("unknown cipher adversary: {}", other)))
                }
            };
            secmeter::run_ind_cca1_game(&params, &key, adv.as_mut(), cfg.trials, cfg.game_seed)
        }
        "individual" => {
            if target >= params.msg_bits {
                return Err(CliError::Config(format!(
                    "target {} out of range for {} message bits",
                    target, params.msg_bits
                )));
            }
            let codebook = Codebook::generate(&params, cfg.codebook_seed)?;
            let mut adv: Box<dyn secmeter::SchemeAdversary> = match adversary {
                "random" => Box::new(SchemeRandomGuesser { target }),
                "suffix" => Box::new(SuffixReader::new(&codebook, target)),
                "codebook" => {
                    Box::new(CodebookReader { codebook: &codebook, target, mode: scheme_mode })
                }
                other => {
                    return Err(CliError::Config(format!(
                        "unknown individual adversary: {}",
                        other
                    )))
                }
            };
            secmeter::run_individual_game(
                &codebook,
                &key,
                scheme_mode,
                adv.as_mut(),
                cfg.trials,
                cfg.game_seed,
            )
        }
        other => return Err(CliError::Config(format!("unknown game: {}", other))),
    };
    let (ci_lo, ci_hi) = transcript.wilson_interval();
    let header = ["game", "adversary", "mode", "target", "trials", "wins", "advantage", "ci_lo", "ci_hi"];
    let rows = vec![vec![
        game.to_string(),
        adversary.to_string(),
        mode.to_string(),
        transcript.challenge_index.map(|t| t.to_string()).unwrap_or_default(),
        transcript.trials.to_string(),
        transcript.wins.to_string(),
        f64_cell(transcript.advantage()),
        f64_cell(ci_lo),
        f64_cell(ci_hi),
    ]];
    let out = write_report(
        output,
        "game",
        &cfg,
        &header,
        &rows,
        json!({
            "game": game,
            "adversary": adversary,
            "mode": mode,
            "trials": transcript.trials,
            "wins": transcript.wins,
            "advantage": transcript.advantage(),
            "wilson_95": [ci_lo, ci_hi],
        }),
    )?;
    eprintln!("wrote {} and {}", out.csv_path.display(), out.json_path.display());
    Ok(())
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Params { common } => cmd_params(common),
        Command::Codebook { common, export, import, hex } => {
            cmd_codebook(common, export.as_ref(), import.as_ref(), *hex)
        }
        Command::Roundtrip { common, output, verbose } => cmd_roundtrip(common, output, *verbose),
        Command::Sweep { common, over, values, rate_factor, output } => {
            cmd_sweep(common, over, values, *rate_factor, output)
        }
        Command::Exponent { common, rate, fit_lengths, grid, output } => {
            cmd_exponent(common, *rate, fit_lengths, *grid, output)
        }
        Command::Leakage { common, seeds, output } => cmd_leakage(common, *seeds, output),
        Command::Bins { common, epsilon_prime, output } => {
            cmd_bins(common, *epsilon_prime, output)
        }
        Command::Game { common, game, adversary, mode, target, output } => {
            cmd_game(common, game, adversary, mode, *target, output)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let label = match &e {
                CliError::Config(m) => format!("config error: {}", m),
                CliError::Guard(m) => format!("guard violation: {}", m),
                CliError::Io(m) => format!("io error: {}", m),
            };
            eprintln!("error: {}", label);
            ExitCode::from(e.exit_code())
        }
    }
}
