//! Thin CLI over the ddcl library: `ingest`, `curriculum`, `run`, `report`.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ddcl::commands::{
    cmd_curriculum, cmd_ingest, cmd_report, cmd_run, exit_code, scenarios_for_filter,
    CurriculumDumpOptions, RunConfig, ScoringArg,
};

#[derive(Parser)]
#[command(name = "ddcl", version, about = "Data distribution-based curriculum learning")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Load and validate a dataset, printing a summary.
    Ingest {
        /// Registry dataset name (see data/ directory).
        #[arg(long, conflicts_with = "path")]
        dataset: Option<String>,
        /// Explicit CSV file instead of a registry name.
        #[arg(long)]
        path: Option<PathBuf>,
        /// Label column name or zero-based index (defaults to the last
        /// column when --path is used).
        #[arg(long)]
        label_col: Option<String>,
    },
    /// Build a curriculum and dump ordering.csv plus per-class KDE files.
    Curriculum {
        #[arg(long)]
        dataset: String,
        /// density or point.
        #[arg(long)]
        scoring: ScoringArg,
        #[arg(long, default_value_t = 6)]
        quantiles: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Execute the experiment protocol and write results files.
    Run {
        /// JSON config file; flags override file values.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Dataset name; repeatable. Defaults to every bundled dataset.
        #[arg(long)]
        dataset: Vec<String>,
        /// Restrict scenarios: none, density, point or all.
        #[arg(long)]
        scoring: Option<String>,
        #[arg(long)]
        quantiles: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        runs: Option<usize>,
        /// Worker threads for parallel runs.
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Train the neural net with full-batch gradient descent.
        #[arg(long)]
        full_batch: bool,
        #[arg(long)]
        include_diabetes130: bool,
    },
    /// Render report.md and SVG plots from a results directory.
    Report {
        /// Directory holding results.csv and friends.
        #[arg(long)]
        results: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Ingest {
            dataset,
            path,
            label_col,
        } => match cmd_ingest(dataset.as_deref(), path.as_deref(), label_col.as_deref()) {
            Ok(summary) => {
                println!("{}: {} rows, {} features", summary.source, summary.rows, summary.features);
                for (name, count) in &summary.classes {
                    println!("  class {name}: {count}");
                }
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(exit_code("ingest", &e))
            }
        },
        Command::Curriculum {
            dataset,
            scoring,
            quantiles,
            seed,
            out,
        } => {
            let opts = CurriculumDumpOptions {
                dataset,
                scoring: scoring.0,
                quantiles,
                seed,
                out_dir: out,
            };
            match cmd_curriculum(&opts) {
                Ok(path) => {
                    println!("wrote {}", path.display());
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(exit_code("curriculum", &e))
                }
            }
        }
        Command::Run {
            config,
            dataset,
            scoring,
            quantiles,
            seed,
            runs,
            jobs,
            out,
            full_batch,
            include_diabetes130,
        } => {
            let mut cfg = match config {
                Some(path) => match RunConfig::from_json_file(&path) {
                    Ok(cfg) => cfg,
                    Err(e) => {
                        eprintln!("error: {e}");
                        return ExitCode::from(exit_code("run", &e));
                    }
                },
                None => RunConfig::default(),
            };
            if !dataset.is_empty() {
                cfg.datasets = dataset;
            }
            if let Some(filter) = scoring {
                match scenarios_for_filter(&filter) {
                    Ok(s) => cfg.scenarios = s,
                    Err(e) => {
                        eprintln!("error: {e}");
                        return ExitCode::from(exit_code("run", &e));
                    }
                }
            }
            if let Some(q) = quantiles {
                cfg.quantiles = q;
            }
            if let Some(s) = seed {
                cfg.master_seed = s;
            }
            if let Some(r) = runs {
                cfg.runs = r;
            }
            if let Some(j) = jobs {
                cfg.jobs = j;
            }
            if let Some(o) = out {
                cfg.out_dir = o;
            }
            if full_batch {
                cfg.full_batch = true;
            }
            if include_diabetes130 {
                cfg.include_diabetes130 = true;
            }
            match cmd_run(&cfg) {
                Ok(manifest) => {
                    println!(
                        "completed {} plan(s); results under {}",
                        manifest.completed.len(),
                        cfg.out_dir.display()
                    );
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(exit_code("run", &e))
                }
            }
        }
        Command::Report { results, out } => {
            let out_dir = out.unwrap_or_else(|| results.join("report"));
            match cmd_report(&results, &out_dir) {
                Ok(()) => {
                    println!("wrote {}", out_dir.join("report.md").display());
                    ExitCode::SUCCESS
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(exit_code("report", &e))
                }
            }
        }
    }
}
