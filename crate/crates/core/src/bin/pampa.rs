//! Command-line driver: `run`, `converge` and `selftest`.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};

use pampa_mhd::io::{execute, RunConfig};
use pampa_mhd::problems::{convergence, ProblemSpec};
use pampa_mhd::scheme::SchemeOptions;
use pampa_mhd::selftest::{run_all, SelftestConfig};
use pampa_mhd::{Error, QForm};

#[derive(Parser)]
#[command(name = "pampa", version, about = "Third-order positivity-preserving PAMPA solver for 2D ideal MHD")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct Ablation {
    /// Disable the divergence-free projection of the traces.
    #[arg(long)]
    no_ddf: bool,
    /// Disable the positivity limiter (voids the positivity guarantee).
    #[arg(long)]
    no_pp: bool,
    /// Disable convex oscillation elimination.
    #[arg(long)]
    no_coe: bool,
}

impl Ablation {
    fn overrides(self) -> Vec<String> {
        [(self.no_ddf, "ddf=false"), (self.no_pp, "pp=false"), (self.no_coe, "coe=false")]
            .into_iter()
            .filter(|(on, _)| *on)
            .map(|(_, s)| s.to_string())
            .collect()
    }

    fn apply(self, opts: &mut SchemeOptions) {
        opts.ddf &= !self.no_ddf;
        opts.pp &= !self.no_pp;
        opts.coe &= !self.no_coe;
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run a configuration file; trailing `key=value` pairs override it.
    Run {
        config: PathBuf,
        overrides: Vec<String>,
        #[command(flatten)]
        ablation: Ablation,
        /// Print a step line every this many steps (0 disables).
        #[arg(long, default_value_t = 100)]
        log_every: usize,
    },
    /// Convergence study of a problem with an exact solution.
    Converge {
        problem: String,
        #[arg(long, num_args = 1.., default_values_t = [20usize, 40, 80])]
        meshes: Vec<usize>,
        /// Also write the table as CSV to this path.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long, default_value = "softplus")]
        q_form: QForm,
        #[command(flatten)]
        ablation: Ablation,
    },
    /// Run the randomized property suites.
    Selftest {
        #[arg(long)]
        seed: Option<u64>,
        /// Use reduced sample counts.
        #[arg(long)]
        quick: bool,
    },
}

fn main() -> ExitCode {
    match real_main() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            let invariant = e.chain().any(|c| matches!(c.downcast_ref::<Error>(), Some(Error::Invariant(_))));
            ExitCode::from(if invariant { 3 } else { 2 })
        }
    }
}

fn real_main() -> anyhow::Result<ExitCode> {
    match Cli::parse().command {
        Command::Run { config, mut overrides, ablation, log_every } => {
            let text = fs::read_to_string(&config).with_context(|| format!("reading {}", config.display()))?;
            overrides.extend(ablation.overrides());
            let cfg = RunConfig::parse(&text, &overrides)?;
            for w in cfg.warnings() {
                eprintln!("{w}");
            }
            print!("{}", cfg.echo());
            println!("{}", pampa_mhd::scheme::StepLog::HEADER);
            let summary = execute(&cfg, |l| {
                if log_every > 0 && l.step % log_every == 0 {
                    println!("{}", l.csv_line());
                }
            })?;
            println!("completed {} steps, t = {:e}", summary.steps, summary.t);
            for p in summary.snapshots.iter().chain(std::iter::once(&summary.manifest)) {
                println!("wrote {}", p.display());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Converge { problem, meshes, csv, q_form, ablation } => {
            let spec = ProblemSpec::by_name(&problem)?;
            if !spec.has_exact() {
                bail!("problem '{problem}' has no exact solution; use alfven or vortex");
            }
            let mut opts = SchemeOptions::default();
            ablation.apply(&mut opts);
            let table = convergence(&spec, opts, q_form, &meshes)?;
            print!("{}", table.to_text());
            if let Some(path) = csv {
                fs::write(&path, table.to_csv()).with_context(|| format!("writing {}", path.display()))?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Selftest { seed, quick } => {
            let mut cfg = if quick {
                SelftestConfig { gql_samples: 10_000, euler_fields: 100, coe_fields: 3, evolution_steps: 3, ..Default::default() }
            } else {
                SelftestConfig::default()
            };
            if let Some(s) = seed {
                cfg.seed = s;
            }
            let checks = run_all(&cfg);
            for c in &checks {
                println!("{}", c.line());
            }
            Ok(if checks.iter().all(|c| c.passed) { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
    }
}
