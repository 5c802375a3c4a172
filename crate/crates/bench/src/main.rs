use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use fpd_bench::{
    cmd_metrics, cmd_run, front_dump, list_problems, write_front_dump, DimFilter,
    ExperimentConfig, MetricsOptions,
};

#[derive(Parser)]
#[command(name = "fpd-bench", version, about = "Front projected descent experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every problem x dimension x solver cell of a config.
    Run(RunArgs),
    /// Compute metrics and performance profiles from run artifacts.
    Metrics {
        /// Directory written by `run`.
        dir: PathBuf,
        /// Dimension filter such as `n>30` or `n>=5,n<=10`.
        #[arg(long)]
        dims: Option<DimFilter>,
        /// Output directory for the CSV files (default: DIR).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print the kept images of X^k and C^k of one cell as CSV.
    FrontDump {
        /// Cell directory, e.g. runs/ZDT_1_n5/FPD_NMT.
        cell: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// List the shipped problems.
    ListProblems,
}

#[derive(clap::Args)]
struct RunArgs {
    /// Flat `key = value` config file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Problem names; repeat or separate with commas.
    #[arg(long)]
    problem: Vec<String>,
    /// FPD, FPD_NMT or FPD_NMT:M.
    #[arg(long)]
    solver: Vec<String>,
    /// Dimensions.
    #[arg(long)]
    n: Vec<String>,
    /// Memory window for FPD_NMT.
    #[arg(long = "M")]
    memory: Option<usize>,
    #[arg(long)]
    max_iters: Option<usize>,
    /// `geometric` or a constant threshold.
    #[arg(long)]
    sigma: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Any other config key, as `key=value`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

impl RunArgs {
    fn config(&self) -> Result<ExperimentConfig> {
        let mut c = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .with_context(|| format!("reading {}", path.display()))?;
                ExperimentConfig::from_text(&text)
                    .with_context(|| format!("parsing {}", path.display()))?
            }
            None => ExperimentConfig::default(),
        };
        let mut overrides: Vec<(String, String)> = Vec::new();
        for (key, values) in [("problems", &self.problem), ("solvers", &self.solver), ("dims", &self.n)] {
            if !values.is_empty() {
                overrides.push((key.into(), values.join(",")));
            }
        }
        if let Some(m) = self.memory {
            overrides.push(("memory".into(), m.to_string()));
        }
        if let Some(k) = self.max_iters {
            overrides.push(("max_iterations".into(), k.to_string()));
        }
        if let Some(s) = &self.sigma {
            overrides.push(("sigma".into(), s.clone()));
        }
        if let Some(o) = &self.out {
            overrides.push(("output_dir".into(), o.display().to_string()));
        }
        for kv in &self.set {
            let (k, v) = kv
                .split_once('=')
                .with_context(|| format!("--set expects key=value, got `{kv}`"))?;
            overrides.push((k.trim().into(), v.trim().into()));
        }
        for (k, v) in overrides {
            c.set(&k, &v)?;
        }
        Ok(c)
    }
}

fn execute(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Run(args) => {
            let config = args.config()?;
            let report = cmd_run(&config)?;
            for cell in &report.cells {
                match &cell.result {
                    Ok(s) => println!(
                        "ok    {}  iterations={} |X|={} stop={:?}",
                        cell.id, s.iterations, s.front_size, s.stop_reason
                    ),
                    Err(e) => println!("FAIL  {}  {e}", cell.id),
                }
            }
            println!("artifacts in {}", config.output_dir.display());
            Ok(if report.all_succeeded() { ExitCode::SUCCESS } else { ExitCode::from(2) })
        }
        Command::Metrics { dir, dims, out } => {
            let report = cmd_metrics(&MetricsOptions {
                artifact_dir: dir,
                out_dir: out,
                dims,
            })?;
            for f in &report.files {
                println!("{}", f.display());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::FrontDump { cell, k } => {
            let dump = front_dump(&cell, k)?;
            write_front_dump(&dump, std::io::stdout().lock())?;
            Ok(ExitCode::SUCCESS)
        }
        Command::ListProblems => {
            for line in list_problems() {
                println!("{line}");
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
