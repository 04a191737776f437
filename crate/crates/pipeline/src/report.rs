//! Delimited-text reports.
//!
//! Every writer is a pure function to a `String`; floats go through
//! `Display`, which round-trips f64 exactly, so a rerun with the same seed
//! reproduces every report byte for byte.

use std::path::{Path, PathBuf};

use vru_core::forest::CvResult;
use vru_core::select::MrmrRanking;
use vru_core::table::{FeatureTable, LabelScheme};

use crate::config::PipelineConfig;
use crate::stages::{CurvePoint, Embedding, SweepEntry};
use crate::{Result, StageError};

/// The resolved config plus tool versions, as TOML.
pub fn manifest_toml(cfg: &PipelineConfig, seed: u64) -> String {
    let mut resolved = cfg.clone();
    resolved.seed = Some(seed);
    format!(
        "{}\n[versions]\ntoolkit = {:?}\n",
        resolved.to_toml(),
        env!("CARGO_PKG_VERSION")
    )
}

/// Per-channel embedding parameters and where each came from.
pub fn calibration_csv(embedding: &Embedding, cfg: &PipelineConfig) -> String {
    let mut out = String::from("channel,delay,dimension,threshold,source,dim_converged\n");
    for (channel, p) in &embedding.params {
        let overridden = cfg.embedding.channels.contains_key(channel.name());
        let scan = embedding
            .calibration
            .as_ref()
            .and_then(|scans| scans.get(channel));
        let (source, converged) = if overridden {
            ("override", String::new())
        } else if let Some(scan) = scan {
            ("calibrated", scan.dim_converged.to_string())
        } else {
            ("default", String::new())
        };
        out.push_str(&format!(
            "{channel},{},{},{},{source},{converged}\n",
            p.delay, p.dimension, p.threshold
        ));
    }
    out
}

/// Long-form AMI scan: one row per channel and lag.
pub fn ami_curves_csv(embedding: &Embedding) -> Option<String> {
    let scans = embedding.calibration.as_ref()?;
    let mut out = String::from("channel,lag,ami_bits\n");
    for (channel, scan) in scans {
        for (i, ami) in scan.ami_curve.iter().enumerate() {
            out.push_str(&format!("{channel},{},{ami}\n", i + 1));
        }
    }
    Some(out)
}

/// Long-form FNN scan: one row per channel and dimension.
pub fn fnn_curves_csv(embedding: &Embedding) -> Option<String> {
    let scans = embedding.calibration.as_ref()?;
    let mut out = String::from("channel,dimension,fnn_fraction\n");
    for (channel, scan) in scans {
        for (i, f) in scan.fnn_fractions.iter().enumerate() {
            out.push_str(&format!("{channel},{},{f}\n", i + 1));
        }
    }
    Some(out)
}

/// The full mRMR ranking, best first.
pub fn ranking_csv(ranking: &MrmrRanking, feature_names: &[String]) -> String {
    let mut out = String::from("rank,feature_index,feature_name,score\n");
    for (pos, (&idx, &score)) in ranking
        .ordered_indices
        .iter()
        .zip(&ranking.scores)
        .enumerate()
    {
        out.push_str(&format!(
            "{},{idx},{},{score}\n",
            pos + 1,
            feature_names[idx]
        ));
    }
    out
}

/// Accuracy against feature count.
pub fn curve_csv(curve: &[CurvePoint]) -> String {
    let mut out = String::from("feature_count,mean_accuracy\n");
    for point in curve {
        out.push_str(&format!("{},{}\n", point.k, point.accuracy));
    }
    out
}

/// Aggregated confusion matrix; rows are true classes.
pub fn confusion_csv(cv: &CvResult) -> String {
    let mut out = String::from("true_class");
    for name in &cv.class_names {
        out.push_str(&format!(",{name}"));
    }
    out.push('\n');
    for (name, row) in cv.class_names.iter().zip(&cv.confusion) {
        out.push_str(name);
        for &count in row {
            out.push_str(&format!(",{count}"));
        }
        out.push('\n');
    }
    out
}

/// Threshold sweep results, grid order per channel.
pub fn sweep_csv(entries: &[SweepEntry]) -> String {
    let mut out = String::from("channel,threshold,mean_accuracy,chosen\n");
    for entry in entries {
        for &(threshold, accuracy) in &entry.points {
            out.push_str(&format!(
                "{},{threshold},{accuracy},{}\n",
                entry.channel,
                threshold == entry.chosen
            ));
        }
    }
    out
}

/// The feature table itself, one row per kept epoch.
pub fn table_csv(table: &FeatureTable) -> String {
    let mut out = String::from("epoch");
    for name in &table.feature_names {
        out.push_str(&format!(",{name}"));
    }
    out.push_str(",mode\n");
    for (epoch, (row, &label)) in table.rows.iter().zip(&table.labels).enumerate() {
        out.push_str(&format!("{epoch}"));
        for v in row {
            out.push_str(&format!(",{v}"));
        }
        out.push_str(&format!(",{}\n", table.class_names[label]));
    }
    out
}

/// Writes `content` under `dir`, recording the path.
pub fn write_file(dir: &Path, name: &str, content: &str, files: &mut Vec<PathBuf>) -> Result<()> {
    let path = dir.join(name);
    std::fs::write(&path, content)
        .map_err(|e| StageError::new("report", format!("cannot write {}: {e}", path.display())))?;
    files.push(path);
    Ok(())
}

/// Writes every report for a full run and returns the paths.
pub fn write_all(
    out_dir: &Path,
    cfg: &PipelineConfig,
    seed: u64,
    embedding: &Embedding,
    feature_names: &[String],
    ranking: &MrmrRanking,
    curves: &[(LabelScheme, Vec<CurvePoint>, CvResult)],
) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(out_dir).map_err(|e| {
        StageError::new(
            "report",
            format!("cannot create {}: {e}", out_dir.display()),
        )
    })?;
    let mut files = Vec::new();
    write_file(out_dir, "manifest.toml", &manifest_toml(cfg, seed), &mut files)?;
    write_file(
        out_dir,
        "calibration.csv",
        &calibration_csv(embedding, cfg),
        &mut files,
    )?;
    if let Some(csv) = ami_curves_csv(embedding) {
        write_file(out_dir, "ami_curves.csv", &csv, &mut files)?;
    }
    if let Some(csv) = fnn_curves_csv(embedding) {
        write_file(out_dir, "fnn_curves.csv", &csv, &mut files)?;
    }
    write_file(
        out_dir,
        "ranking.csv",
        &ranking_csv(ranking, feature_names),
        &mut files,
    )?;
    for (scheme, curve, full) in curves {
        write_file(
            out_dir,
            &format!("curve_{scheme}.csv"),
            &curve_csv(curve),
            &mut files,
        )?;
        write_file(
            out_dir,
            &format!("confusion_{scheme}.csv"),
            &confusion_csv(full),
            &mut files,
        )?;
    }
    Ok(files)
}
