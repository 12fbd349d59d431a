use std::collections::HashSet;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use mimo_covariance::harness::{
    compute_baseline, default_baseline_kind, emit_outputs, run_experiment, BaselineKind, ExperimentConfig,
    OutputSpec, RunOutput,
};
use mimo_covariance::linalg::ComplexMatrix;
use mimo_covariance::solvers::{psd_cap_project_full, waterfill_penalized};
use mimo_covariance::validate::{format_table, run_validation, ValidationOptions};
use mimo_covariance::{Error, Result};

#[derive(Parser)]
#[command(name = "mimocov", version, about = "MIMO transmit covariance simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one or more experiments (TOML files or preset names) in parallel.
    Run {
        #[arg(required = true)]
        configs: Vec<String>,
        /// Directory for outputs of configs that name none.
        #[arg(long, default_value = "out")]
        out_dir: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        horizon: Option<u64>,
    },
    /// Precompute a baseline policy and store it as JSON.
    Baseline {
        config: String,
        /// cdi-optimal, constant, empirical-csit or empirical-no-csit.
        #[arg(long, value_parser = parse_kind)]
        policy: Option<BaselineKind>,
        /// Training draws for the empirical policies.
        #[arg(long, default_value_t = 100)]
        samples: usize,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Optimal covariance of the penalized per-slot problem for a channel matrix.
    SolveWaterfill {
        /// Matrix JSON file, or `-` for stdin.
        #[arg(long)]
        matrix: String,
        #[arg(long)]
        z_over_v: f64,
        #[arg(long)]
        cap: f64,
        /// Also print the water level and eigenvalues.
        #[arg(long)]
        full: bool,
    },
    /// Projection of a Hermitian matrix onto {Q PSD, tr Q <= cap}.
    Project {
        #[arg(long)]
        matrix: String,
        #[arg(long)]
        cap: f64,
        #[arg(long)]
        full: bool,
    },
    /// Run the randomized invariant suite and print a pass/fail table.
    Validate {
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        draws: usize,
    },
}

fn parse_kind(s: &str) -> std::result::Result<BaselineKind, String> {
    serde_json::from_value(serde_json::Value::String(s.to_owned())).map_err(|e| e.to_string())
}

fn read_matrix(src: &str) -> Result<ComplexMatrix> {
    let text = if src == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Error::Usage(format!("reading stdin: {e}")))?;
        s
    } else {
        std::fs::read_to_string(src).map_err(|e| Error::Usage(format!("{src}: {e}")))?
    };
    Ok(serde_json::from_str(&text)?)
}

/// Like `println!`, but a closed pipe is not an error.
fn emit(text: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn print_json<T: serde::Serialize>(v: &T) -> Result<()> {
    emit(&serde_json::to_string_pretty(v)?);
    Ok(())
}

fn prepare(spec: &str, out_dir: &Path, seed: Option<u64>, horizon: Option<u64>) -> Result<(ExperimentConfig, OutputSpec)> {
    let mut cfg = ExperimentConfig::load(spec)?;
    if let Some(s) = seed {
        cfg.seed = s;
    }
    if let Some(h) = horizon {
        cfg.horizon = h;
    }
    let outputs = if cfg.output == OutputSpec::default() {
        OutputSpec::in_dir(out_dir, &cfg.name)
    } else {
        cfg.output.clone()
    };
    Ok((cfg, outputs))
}

/// Refuses batches in which two runs would write the same file.
fn check_distinct(batch: &[(ExperimentConfig, OutputSpec)]) -> Result<()> {
    let mut seen = HashSet::new();
    for (_, o) in batch {
        for p in [&o.csv, &o.summary, &o.svg].into_iter().flatten() {
            if !seen.insert(p.clone()) {
                return Err(Error::Usage(format!(
                    "two runs in the batch write {}; give them distinct names or outputs",
                    p.display()
                )));
            }
        }
    }
    Ok(())
}

fn run_one(cfg: &ExperimentConfig, outputs: &OutputSpec) -> Result<RunOutput> {
    let out = run_experiment(cfg)?;
    emit_outputs(&out.records, &out.summary, outputs)?;
    Ok(out)
}

fn print_summary(spec: &str, out: &RunOutput) {
    let s = &out.summary;
    println!(
        "== {} ({}, csit {}, {} slots, seed {})",
        s.name, s.controller, s.csit, s.horizon, s.seed
    );
    println!(
        "   avg utility {:.6} nats, avg power {:.6}{}",
        s.final_avg_utility,
        s.final_avg_power,
        s.reference
            .as_ref()
            .map(|r| format!(", reference {:.6}", r.r_opt))
            .unwrap_or_default()
    );
    for c in &s.certificates {
        println!(
            "   {:<4} {:<14} {:<32} margin {:.3e}",
            if c.passed { "PASS" } else { "FAIL" },
            format!("[{:?}]", c.kind).to_lowercase(),
            c.name,
            c.worst_margin
        );
    }
    if !s.all_hard_passed() {
        eprintln!("{spec}: {} hard certificate(s) failed", s.hard_failures);
    }
}

fn cmd_run(configs: &[String], out_dir: &Path, seed: Option<u64>, horizon: Option<u64>) -> Result<bool> {
    let batch = configs
        .iter()
        .map(|c| prepare(c, out_dir, seed, horizon).map_err(|e| Error::Usage(format!("{c}: {e}"))))
        .collect::<Result<Vec<_>>>()?;
    check_distinct(&batch)?;
    let results: Vec<_> = std::thread::scope(|scope| {
        let handles: Vec<_> = batch
            .iter()
            .map(|(cfg, outputs)| scope.spawn(move || run_one(cfg, outputs)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().unwrap_or_else(|_| Err(Error::Internal("run panicked".into()))))
            .collect()
    });
    let mut ok = true;
    for (spec, res) in configs.iter().zip(results) {
        match res {
            Ok(out) => {
                print_summary(spec, &out);
                ok &= out.summary.all_hard_passed();
            }
            Err(e) => {
                eprintln!("{spec}: {e}");
                ok = false;
            }
        }
    }
    Ok(ok)
}

fn dispatch(cmd: Command) -> Result<bool> {
    match cmd {
        Command::Run {
            configs,
            out_dir,
            seed,
            horizon,
        } => cmd_run(&configs, &out_dir, seed, horizon),
        Command::Baseline {
            config,
            policy,
            samples,
            out,
        } => {
            let cfg = ExperimentConfig::load(&config)?;
            let kind = policy.unwrap_or_else(|| default_baseline_kind(&cfg));
            let pol = compute_baseline(&cfg, kind, samples)?;
            let text = serde_json::to_string_pretty(&pol)?;
            match out {
                Some(p) => std::fs::write(&p, text + "\n").map_err(|e| Error::Usage(format!("{}: {e}", p.display())))?,
                None => emit(&text),
            }
            Ok(true)
        }
        Command::SolveWaterfill {
            matrix,
            z_over_v,
            cap,
            full,
        } => {
            let h = read_matrix(&matrix)?;
            let res = waterfill_penalized(&h, z_over_v, cap)?;
            if full {
                print_json(&res)?;
            } else {
                print_json(&res.q)?;
            }
            Ok(true)
        }
        Command::Project { matrix, cap, full } => {
            let x = read_matrix(&matrix)?;
            let res = psd_cap_project_full(&x, cap)?;
            if full {
                print_json(&res)?;
            } else {
                print_json(&res.q)?;
            }
            Ok(true)
        }
        Command::Validate { seed, draws } => {
            let outcomes = run_validation(ValidationOptions { seed, draws })?;
            print!("{}", format_table(&outcomes));
            Ok(outcomes.iter().all(|o| o.passed))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
