use clap::{Args, Parser, Subcommand};
use smflow_workbench::config::parse_config;
use smflow_workbench::error::{exit, WorkbenchError};
use smflow_workbench::experiments;
use smflow_workbench::report::summary_table;
use std::path::PathBuf;
use std::process::ExitCode;

/// Numerical lab for Schrödinger map flows into conformal surfaces.
#[derive(Parser)]
#[command(name = "smflow", version = env!("SMFLOW_BUILD_ID"))]
struct Cli {
    /// Configuration file of key=value lines.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Override any configuration key; repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE", global = true, value_parser = parse_pair)]
    set: Vec<(String, String)>,
    /// Output directory for artifacts and report.json.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Print the full report as JSON instead of a table.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Default)]
struct Common {
    /// Target metric, e.g. sphere, hyperbolic, remark11:0.5,0,0,0.25.
    #[arg(long)]
    metric: Option<String>,
}

#[derive(Args, Default)]
struct Evolution {
    /// Initial datum, e.g. gaussian:0.05,1.
    #[arg(long)]
    initial: Option<String>,
    #[arg(long)]
    t_end: Option<String>,
    #[arg(long)]
    dt: Option<String>,
    /// Grid half-length.
    #[arg(long)]
    half_length: Option<String>,
    /// Grid points (power of two).
    #[arg(long)]
    n: Option<String>,
    /// ifrk4 or strang.
    #[arg(long)]
    integrator: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Jet, curvature and normal-form coefficients of a metric.
    AnalyzeMetric {
        #[command(flatten)]
        common: Common,
    },
    /// Forward evolution with decay and scattering diagnostics.
    Simulate {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        evo: Evolution,
    },
    /// Final-state profile residuals and backward wave-operator runs.
    FinalState {
        #[command(flatten)]
        common: Common,
        /// gaussian:σ,amplitude or a file of `y re im` lines.
        #[arg(long)]
        psi: Option<String>,
        /// Final time of the backward runs.
        #[arg(long = "N")]
        n_final: Option<String>,
        /// Earliest recorded time.
        #[arg(long = "N0")]
        n0: Option<String>,
        /// Comma list of v1, v2, v3, v4, tail to switch off, or none.
        #[arg(long)]
        ablate: Option<String>,
        /// consistent or printed.
        #[arg(long)]
        correction: Option<String>,
    },
    /// Qualitative rigidity probe (no acceptance criterion).
    RigidityProbe {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        evo: Evolution,
    },
    /// Locate intrinsic vanishing points in a region.
    ScanVanishing {
        #[command(flatten)]
        common: Common,
        /// xmin,xmax,ymin,ymax.
        #[arg(long)]
        region: Option<String>,
        #[arg(long)]
        resolution: Option<String>,
    },
    /// Full acceptance suite.
    ReproduceAll {
        /// Reduced horizons for a fast pass.
        #[arg(long)]
        quick: bool,
        #[arg(long)]
        seed: Option<String>,
    },
}

fn parse_pair(s: &str) -> Result<(String, String), String> {
    s.split_once('=').map(|(k, v)| (k.trim().to_string(), v.trim().to_string())).ok_or_else(|| format!("expected KEY=VALUE, got '{s}'"))
}

fn push(flags: &mut Vec<(String, String)>, key: &str, v: &Option<String>) {
    if let Some(v) = v {
        flags.push((key.to_string(), v.clone()));
    }
}

fn flags(cli: &Cli) -> Vec<(String, String)> {
    let mut f = cli.set.clone();
    let experiment = match &cli.command {
        Command::AnalyzeMetric { .. } => "analyze-metric",
        Command::Simulate { .. } => "simulate",
        Command::FinalState { .. } => "final-state",
        Command::RigidityProbe { .. } => "rigidity-probe",
        Command::ScanVanishing { .. } => "scan-vanishing",
        Command::ReproduceAll { .. } => "reproduce-all",
    };
    f.retain(|(k, _)| k != "experiment");
    f.insert(0, ("experiment".into(), experiment.into()));
    let evolution = |f: &mut Vec<(String, String)>, e: &Evolution| {
        push(f, "initial", &e.initial);
        push(f, "t_end", &e.t_end);
        push(f, "dt", &e.dt);
        push(f, "half_length", &e.half_length);
        push(f, "n", &e.n);
        push(f, "integrator", &e.integrator);
    };
    match &cli.command {
        Command::AnalyzeMetric { common } => push(&mut f, "metric", &common.metric),
        Command::Simulate { common, evo } | Command::RigidityProbe { common, evo } => {
            push(&mut f, "metric", &common.metric);
            evolution(&mut f, evo);
        }
        Command::FinalState { common, psi, n_final, n0, ablate, correction } => {
            push(&mut f, "metric", &common.metric);
            push(&mut f, "psi", psi);
            push(&mut f, "n_final", n_final);
            push(&mut f, "n0", n0);
            push(&mut f, "ablate", ablate);
            push(&mut f, "correction", correction);
        }
        Command::ScanVanishing { common, region, resolution } => {
            push(&mut f, "metric", &common.metric);
            push(&mut f, "scan_region", region);
            push(&mut f, "scan_resolution", resolution);
        }
        Command::ReproduceAll { quick, seed } => {
            if *quick {
                f.push(("quick".into(), "true".into()));
            }
            push(&mut f, "seed", seed);
        }
    }
    if let Some(out) = &cli.out {
        f.push(("out_dir".into(), out.display().to_string()));
    }
    // later flags override earlier ones; keep the last value per key
    let mut seen = std::collections::HashSet::new();
    let mut dedup: Vec<_> = f.into_iter().rev().filter(|(k, _)| seen.insert(k.clone())).collect();
    dedup.reverse();
    dedup
}

fn threads_from_env() {
    #[cfg(feature = "parallel")]
    if let Some(n) = std::env::var("SMFLOW_THREADS").ok().and_then(|v| v.parse::<usize>().ok()).filter(|&n| n > 0) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    threads_from_env();
    let parsed = match parse_config(cli.config.as_deref(), &flags(&cli)) {
        Ok(p) => p,
        Err(e) => {
            eprintln!("smflow: configuration error: {e}");
            return ExitCode::from(exit::USAGE as u8);
        }
    };
    match experiments::run(&parsed) {
        Ok(report) => {
            if cli.json {
                println!("{}", report.to_json());
            } else {
                println!("{} ({})", parsed.config.experiment, report.build_id);
                if !report.criteria.is_empty() {
                    print!("{}", summary_table(&report.criteria));
                }
                for a in &report.artifacts {
                    println!("wrote {}", a.display());
                }
            }
            ExitCode::from(if report.passed() { exit::PASS } else { exit::ACCEPTANCE_FAILURE } as u8)
        }
        Err(e) => {
            eprintln!("smflow: {e}");
            if let WorkbenchError::Numeric { source, .. } = &e {
                eprintln!("  cause: {source:?}");
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
