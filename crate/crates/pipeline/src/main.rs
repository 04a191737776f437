use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use vru_core::synth::{default_profiles, generate_dataset, write_labels, write_log};
use vru_pipeline::config::PipelineConfig;
use vru_pipeline::{report, stages, Result, StageError};

#[derive(Parser)]
#[command(
    name = "vru",
    version,
    about = "Transport-mode detection from 9-channel smartphone inertial logs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ConfigArgs {
    /// TOML run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Root seed; overrides `seed` in the config.
    #[arg(long)]
    seed: Option<u64>,
}

impl ConfigArgs {
    fn load(&self) -> Result<PipelineConfig> {
        let mut cfg = PipelineConfig::load(&self.config)?;
        if let Some(seed) = self.seed {
            cfg.seed = Some(seed);
        }
        Ok(cfg)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Scan AMI and FNN curves and report per-channel delay and dimension.
    Calibrate {
        #[command(flatten)]
        args: ConfigArgs,
        /// Directory for calibration.csv and the scan curves.
        #[arg(long, default_value = "reports")]
        out: PathBuf,
    },
    /// Build the feature table and write it as CSV.
    Features {
        #[command(flatten)]
        args: ConfigArgs,
        /// Output CSV path.
        #[arg(long, default_value = "features.csv")]
        out: PathBuf,
    },
    /// Rank all features with mRMR and write the ranking as CSV.
    Rank {
        #[command(flatten)]
        args: ConfigArgs,
        /// Output CSV path.
        #[arg(long, default_value = "ranking.csv")]
        out: PathBuf,
    },
    /// Cross-validate accuracy curves over ranked feature prefixes.
    Evaluate {
        #[command(flatten)]
        args: ConfigArgs,
        /// Directory for the curve and confusion reports.
        #[arg(long, default_value = "reports")]
        out: PathBuf,
    },
    /// Sweep the recurrence threshold per channel and report CV accuracy.
    SweepThreshold {
        #[command(flatten)]
        args: ConfigArgs,
        /// Output CSV path.
        #[arg(long, default_value = "sweep.csv")]
        out: PathBuf,
    },
    /// Generate a synthetic labeled recording in the ingest formats.
    Synth {
        /// Seed for the generator noise.
        #[arg(long)]
        seed: u64,
        /// Epochs (seconds) generated per transport mode.
        #[arg(long, default_value_t = 40)]
        epochs_per_mode: usize,
        /// Sample rate of the rendered log.
        #[arg(long, default_value_t = 100.0)]
        rate_hz: f64,
        /// Directory for synth.log, synth.labels and run.toml.
        #[arg(long, default_value = "data")]
        out: PathBuf,
    },
    /// Run every stage and write all reports.
    RunAll {
        #[command(flatten)]
        args: ConfigArgs,
        /// Directory for the reports.
        #[arg(long, default_value = "reports")]
        out: PathBuf,
    },
}

fn main() {
    env_logger::init();
    if let Err(e) = dispatch(Cli::parse()) {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Calibrate { args, out } => {
            let mut cfg = args.load()?;
            cfg.embedding.calibrate = true;
            let ds = stages::load_dataset(&cfg)?;
            let embedding = stages::resolve_embedding(&ds, &cfg)?;
            std::fs::create_dir_all(&out).map_err(|e| {
                StageError::new("report", format!("cannot create {}: {e}", out.display()))
            })?;
            let mut files = Vec::new();
            report::write_file(
                &out,
                "calibration.csv",
                &report::calibration_csv(&embedding, &cfg),
                &mut files,
            )?;
            if let Some(csv) = report::ami_curves_csv(&embedding) {
                report::write_file(&out, "ami_curves.csv", &csv, &mut files)?;
            }
            if let Some(csv) = report::fnn_curves_csv(&embedding) {
                report::write_file(&out, "fnn_curves.csv", &csv, &mut files)?;
            }
            for (channel, p) in &embedding.params {
                println!(
                    "{channel}: delay={} dimension={} threshold={}",
                    p.delay, p.dimension, p.threshold
                );
            }
            print_files(&files);
        }
        Command::Features { args, out } => {
            let cfg = args.load()?;
            let ds = stages::load_dataset(&cfg)?;
            let embedding = stages::resolve_embedding(&ds, &cfg)?;
            let (table, stats) = stages::build_table(&ds, &embedding.params, &cfg)?;
            write_to(&out, &report::table_csv(&table))?;
            println!(
                "{} epochs x {} features ({} dropped, {} labels unused) -> {}",
                table.n_rows(),
                table.n_features(),
                stats.epochs_dropped,
                stats.labels_unused,
                out.display()
            );
        }
        Command::Rank { args, out } => {
            let cfg = args.load()?;
            let ds = stages::load_dataset(&cfg)?;
            let embedding = stages::resolve_embedding(&ds, &cfg)?;
            let (table, _) = stages::build_table(&ds, &embedding.params, &cfg)?;
            let ranking = stages::rank_features(&table, &cfg)?;
            write_to(&out, &report::ranking_csv(&ranking, &table.feature_names))?;
            println!("top features:");
            for &idx in ranking.ordered_indices.iter().take(10) {
                println!("  {}", table.feature_names[idx]);
            }
            println!("full ranking -> {}", out.display());
        }
        Command::Evaluate { args, out } => {
            let cfg = args.load()?;
            let seed = cfg.resolved_seed()?;
            let ds = stages::load_dataset(&cfg)?;
            let embedding = stages::resolve_embedding(&ds, &cfg)?;
            let (table, _) = stages::build_table(&ds, &embedding.params, &cfg)?;
            let ranking = stages::rank_features(&table, &cfg)?;
            std::fs::create_dir_all(&out).map_err(|e| {
                StageError::new("report", format!("cannot create {}: {e}", out.display()))
            })?;
            let mut files = Vec::new();
            for &scheme in &cfg.schemes {
                let (curve, full) = stages::accuracy_curve(&table, &ranking, scheme, &cfg, seed)?;
                println!("{scheme}: full-width accuracy {}", full.mean_accuracy);
                report::write_file(
                    &out,
                    &format!("curve_{scheme}.csv"),
                    &report::curve_csv(&curve),
                    &mut files,
                )?;
                report::write_file(
                    &out,
                    &format!("confusion_{scheme}.csv"),
                    &report::confusion_csv(&full),
                    &mut files,
                )?;
            }
            print_files(&files);
        }
        Command::SweepThreshold { args, out } => {
            let cfg = args.load()?;
            let seed = cfg.resolved_seed()?;
            let ds = stages::load_dataset(&cfg)?;
            let embedding = stages::resolve_embedding(&ds, &cfg)?;
            let entries = stages::threshold_sweep(&ds, &embedding.params, &cfg, seed)?;
            write_to(&out, &report::sweep_csv(&entries))?;
            for entry in &entries {
                println!("{}: best threshold {}", entry.channel, entry.chosen);
            }
            println!("sweep -> {}", out.display());
        }
        Command::Synth {
            seed,
            epochs_per_mode,
            rate_hz,
            out,
        } => {
            let recording = generate_dataset(&default_profiles(), epochs_per_mode, rate_hz, seed)
                .map_err(|e| StageError::new("synth", e.to_string()))?;
            std::fs::create_dir_all(&out).map_err(|e| {
                StageError::new("synth", format!("cannot create {}: {e}", out.display()))
            })?;
            let log_path = out.join("synth.log");
            let labels_path = out.join("synth.labels");
            write_to(&log_path, &write_log(&recording))?;
            write_to(&labels_path, &write_labels(&recording))?;
            let mut cfg = PipelineConfig::default();
            cfg.rate_hz = rate_hz;
            cfg.seed = Some(seed);
            cfg.inputs.log = log_path.clone();
            cfg.inputs.labels = labels_path.clone();
            write_to(&out.join("run.toml"), &cfg.to_toml())?;
            println!(
                "wrote {}, {} and {}",
                log_path.display(),
                labels_path.display(),
                out.join("run.toml").display()
            );
        }
        Command::RunAll { args, out } => {
            let cfg = args.load()?;
            let output = stages::run(&cfg, &out)?;
            println!(
                "{} epochs kept ({} dropped), {} features",
                output.stats.epochs_kept,
                output.stats.epochs_dropped,
                output.feature_names.len()
            );
            for (scheme, _, full) in &output.curves {
                println!("{scheme}: full-width accuracy {}", full.mean_accuracy);
            }
            print_files(&output.files);
        }
    }
    Ok(())
}

fn write_to(path: &std::path::Path, content: &str) -> Result<()> {
    std::fs::write(path, content)
        .map_err(|e| StageError::new("report", format!("cannot write {}: {e}", path.display())))
}

fn print_files(files: &[PathBuf]) {
    for f in files {
        println!("wrote {}", f.display());
    }
}
