//! Pipeline stages, each tagging its failures with its own name.
//!
//! Stage order: load, calibrate, features, rank, evaluate, report. The
//! threshold sweep is a side branch off the loaded dataset.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use log::{info, warn};
use vru_core::channel::{ChannelId, Mode};
use vru_core::embed::{calibrate, CalibrateConfig, ChannelCalibration, EmbeddingParams};
use vru_core::forest::{cross_validate, cross_validate_scheme, CvResult};
use vru_core::ingest::{cut_windows, parse_labels, parse_log, resample_linear, RawSample, Window};
use vru_core::rqa::{rqa_block, rqa_feature_names};
use vru_core::select::{mrmr_rank, MrmrRanking};
use vru_core::table::{FeatureTable, LabelScheme};
use vru_core::timefeat::{assemble_time_block, time_feature_names};

use crate::config::{FeatureSet, PipelineConfig};
use crate::{at_stage, Result, StageError};

/// Windows per channel plus the epoch labels, straight off disk.
#[derive(Debug)]
pub struct Dataset {
    pub windows: BTreeMap<ChannelId, Vec<Window<f64>>>,
    pub labels: BTreeMap<usize, Mode>,
}

/// Reads, resamples and windows the sensor log, and reads the label sidecar.
pub fn load_dataset(cfg: &PipelineConfig) -> Result<Dataset> {
    let log_path = &cfg.inputs.log;
    if log_path.as_os_str().is_empty() {
        return Err(StageError::new("load", "inputs.log is not set"));
    }
    let labels_path = &cfg.inputs.labels;
    if labels_path.as_os_str().is_empty() {
        return Err(StageError::new("load", "inputs.labels is not set"));
    }
    let log_text = fs::read_to_string(log_path).map_err(|e| {
        StageError::new(
            "load",
            format!("cannot read sensor log {}: {e}", log_path.display()),
        )
    })?;
    let raw: BTreeMap<ChannelId, Vec<RawSample<f64>>> =
        parse_log(log_text.as_bytes()).map_err(at_stage("load"))?;

    let mut windows = BTreeMap::new();
    for channel in ChannelId::all() {
        let samples = raw.get(&channel).ok_or_else(|| {
            StageError::new(
                "load",
                format!("sensor log {} has no rows for {channel}", log_path.display()),
            )
        })?;
        let series = resample_linear(channel, samples, cfg.rate_hz).map_err(at_stage("load"))?;
        let cut = cut_windows(&series, cfg.window_seconds).map_err(at_stage("load"))?;
        windows.insert(channel, cut);
    }

    let labels_text = fs::read_to_string(labels_path).map_err(|e| {
        StageError::new(
            "load",
            format!("cannot read labels {}: {e}", labels_path.display()),
        )
    })?;
    let labels = parse_labels(labels_text.as_bytes()).map_err(at_stage("load"))?;
    Ok(Dataset { windows, labels })
}

/// Resolved embedding parameters plus the raw calibration scans when the
/// config asked for them.
#[derive(Debug)]
pub struct Embedding {
    pub params: BTreeMap<ChannelId, EmbeddingParams>,
    pub calibration: Option<BTreeMap<ChannelId, ChannelCalibration>>,
}

/// Settles delay and dimension per channel: sensor defaults, then AMI/FNN
/// calibration when enabled, then explicit overrides on top of everything.
pub fn resolve_embedding(ds: &Dataset, cfg: &PipelineConfig) -> Result<Embedding> {
    let mut params = cfg.base_params()?;
    if !cfg.embedding.calibrate {
        return Ok(Embedding {
            params,
            calibration: None,
        });
    }
    let ccfg = CalibrateConfig {
        max_lag: cfg.embedding.max_lag,
        max_dim: cfg.embedding.max_dim,
        ..CalibrateConfig::default()
    };
    let scans = calibrate(&ds.windows, &ccfg).map_err(at_stage("calibrate"))?;
    for (channel, scan) in &scans {
        if cfg.embedding.channels.contains_key(channel.name()) {
            continue;
        }
        if !scan.dim_converged {
            warn!(
                "{channel}: false-neighbor scan did not converge by dimension {}, using it anyway",
                scan.dimension
            );
        }
        let threshold = params[channel].threshold;
        params.insert(
            *channel,
            EmbeddingParams::new(scan.delay, scan.dimension, threshold)
                .map_err(at_stage("calibrate"))?,
        );
    }
    Ok(Embedding {
        params,
        calibration: Some(scans),
    })
}

/// Epoch bookkeeping from feature assembly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BuildStats {
    /// Epochs present on every channel (windows are cut consecutively from
    /// zero, so this is the shortest channel's count).
    pub epochs_kept: usize,
    /// Epochs some but not all channels reached.
    pub epochs_dropped: usize,
    /// Labels without a kept epoch.
    pub labels_unused: usize,
}

/// Column names for a feature set, in table order.
pub fn feature_names(set: FeatureSet) -> Vec<String> {
    match set {
        FeatureSet::TimeOnly => time_feature_names(),
        FeatureSet::RqaOnly => rqa_feature_names(),
        FeatureSet::Pooled => {
            let mut names = time_feature_names();
            names.extend(rqa_feature_names());
            names
        }
    }
}

/// Builds the feature table: one row per epoch seen by all nine channels,
/// labeled five-class. A kept epoch without a label is an error; labels for
/// dropped epochs are counted and logged, not errors.
pub fn build_table(
    ds: &Dataset,
    params: &BTreeMap<ChannelId, EmbeddingParams>,
    cfg: &PipelineConfig,
) -> Result<(FeatureTable, BuildStats)> {
    let kept = ds
        .windows
        .values()
        .map(Vec::len)
        .min()
        .unwrap_or(0);
    let longest = ds.windows.values().map(Vec::len).max().unwrap_or(0);
    if kept == 0 {
        return Err(StageError::new(
            "features",
            "no epoch is covered by all nine channels",
        ));
    }
    let stats = BuildStats {
        epochs_kept: kept,
        epochs_dropped: longest - kept,
        labels_unused: ds.labels.keys().filter(|&&e| e >= kept).count(),
    };
    if stats.epochs_dropped > 0 {
        info!(
            "dropped {} trailing epoch(s) not covered by every channel",
            stats.epochs_dropped
        );
    }
    if stats.labels_unused > 0 {
        info!("{} label(s) have no kept epoch", stats.labels_unused);
    }

    let rqa_cfg = cfg.rqa_config();
    let mut rows = Vec::with_capacity(kept);
    let mut labels = Vec::with_capacity(kept);
    for epoch in 0..kept {
        let mode = *ds.labels.get(&epoch).ok_or_else(|| {
            StageError::new("features", format!("epoch {epoch} has no label"))
        })?;
        let windows: BTreeMap<ChannelId, Window<f64>> = ds
            .windows
            .iter()
            .map(|(&ch, w)| (ch, w[epoch].clone()))
            .collect();
        let mut row = Vec::new();
        if cfg.features != FeatureSet::RqaOnly {
            row.extend(assemble_time_block(&windows, cfg.rate_hz).map_err(at_stage("features"))?);
        }
        if cfg.features != FeatureSet::TimeOnly {
            row.extend(rqa_block(&windows, params, &rqa_cfg).map_err(at_stage("features"))?);
        }
        rows.push(row);
        labels.push(LabelScheme::FiveClass.label_of(mode));
    }

    let table = FeatureTable::new(
        feature_names(cfg.features),
        LabelScheme::FiveClass.class_names(),
        rows,
        labels,
    )
    .map_err(at_stage("features"))?;
    Ok((table, stats))
}

/// Ranks every column of the table.
pub fn rank_features(table: &FeatureTable, cfg: &PipelineConfig) -> Result<MrmrRanking> {
    mrmr_rank(table, table.n_features(), cfg.selection.bins).map_err(at_stage("rank"))
}

/// One channel's threshold sweep: cross-validated accuracy of the
/// recurrence-only table as that channel's threshold walks the grid.
#[derive(Debug)]
pub struct SweepEntry {
    pub channel: ChannelId,
    pub chosen: f64,
    /// (threshold, mean accuracy) in grid order.
    pub points: Vec<(f64, f64)>,
}

/// Sweeps the recurrence threshold one channel at a time, holding the other
/// channels at their resolved values. The chosen threshold maximizes mean
/// five-class CV accuracy; ties keep the smaller threshold.
pub fn threshold_sweep(
    ds: &Dataset,
    params: &BTreeMap<ChannelId, EmbeddingParams>,
    cfg: &PipelineConfig,
    seed: u64,
) -> Result<Vec<SweepEntry>> {
    let mut grid = cfg.rqa.sweep_grid.clone();
    grid.sort_by(|a, b| a.partial_cmp(b).expect("grid validated finite"));
    grid.dedup();
    if grid.is_empty() {
        return Err(StageError::new("sweep", "rqa.sweep_grid is empty"));
    }
    let mut sweep_cfg = cfg.clone();
    sweep_cfg.features = FeatureSet::RqaOnly;
    let forest_cfg = cfg.forest_config(seed);

    let mut entries = Vec::new();
    for channel in ChannelId::all() {
        let mut points = Vec::with_capacity(grid.len());
        let mut best = (grid[0], f64::NEG_INFINITY);
        for &threshold in &grid {
            let mut swept = params.clone();
            swept.get_mut(&channel).expect("all channels resolved").threshold = threshold;
            let (table, _) = build_table(ds, &swept, &sweep_cfg)?;
            let cv = cross_validate(&table, &forest_cfg, cfg.forest.folds)
                .map_err(at_stage("sweep"))?;
            points.push((threshold, cv.mean_accuracy));
            if cv.mean_accuracy > best.1 {
                best = (threshold, cv.mean_accuracy);
            }
        }
        info!("{channel}: best threshold {} (accuracy {})", best.0, best.1);
        entries.push(SweepEntry {
            channel,
            chosen: best.0,
            points,
        });
    }
    Ok(entries)
}

/// One point on an accuracy curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub k: usize,
    pub accuracy: f64,
}

/// Feature counts to evaluate: multiples of ten below the width, then the
/// full width.
pub fn default_k_grid(p: usize) -> Vec<usize> {
    let mut grid: Vec<usize> = (1..)
        .map(|i| i * 10)
        .take_while(|&k| k < p)
        .collect();
    grid.push(p);
    grid
}

/// Cross-validated accuracy over top-k prefixes of the ranking, under one
/// label scheme. The curve always ends at the full width; that last fit is
/// returned whole for the confusion report.
pub fn accuracy_curve(
    table: &FeatureTable,
    ranking: &MrmrRanking,
    scheme: LabelScheme,
    cfg: &PipelineConfig,
    seed: u64,
) -> Result<(Vec<CurvePoint>, CvResult)> {
    let p = table.n_features();
    let mut grid = if cfg.selection.k_grid.is_empty() {
        default_k_grid(p)
    } else {
        cfg.selection.k_grid.clone()
    };
    grid.sort_unstable();
    grid.dedup();
    if let Some(&k) = grid.iter().find(|&&k| k > p) {
        return Err(StageError::new(
            "evaluate",
            format!("selection.k_grid entry {k} exceeds the table width {p}"),
        ));
    }
    if *grid.last().unwrap() != p {
        grid.push(p);
    }

    let forest_cfg = cfg.forest_config(seed);
    let mut curve = Vec::with_capacity(grid.len());
    let mut full = None;
    for &k in &grid {
        // Column order must not depend on the ranking, so the k = p table
        // matches the original table exactly.
        let mut indices = ranking.ordered_indices[..k].to_vec();
        indices.sort_unstable();
        let sub = table.select_columns(&indices).map_err(at_stage("evaluate"))?;
        let cv = cross_validate_scheme(&sub, scheme, &forest_cfg, cfg.forest.folds)
            .map_err(at_stage("evaluate"))?;
        curve.push(CurvePoint {
            k,
            accuracy: cv.mean_accuracy,
        });
        if k == p {
            full = Some(cv);
        }
    }
    Ok((curve, full.expect("grid ends at full width")))
}

/// Everything `run` produced, for callers that want to print a summary.
#[derive(Debug)]
pub struct RunOutput {
    pub stats: BuildStats,
    pub embedding: Embedding,
    pub ranking: MrmrRanking,
    pub feature_names: Vec<String>,
    pub curves: Vec<(LabelScheme, Vec<CurvePoint>, CvResult)>,
    pub files: Vec<std::path::PathBuf>,
}

/// Runs every stage and writes the reports under `out_dir`.
pub fn run(cfg: &PipelineConfig, out_dir: &Path) -> Result<RunOutput> {
    let seed = cfg.resolved_seed()?;
    let ds = load_dataset(cfg)?;
    let embedding = resolve_embedding(&ds, cfg)?;
    let (table, stats) = build_table(&ds, &embedding.params, cfg)?;
    info!(
        "feature table: {} epochs x {} features",
        table.n_rows(),
        table.n_features()
    );
    let ranking = rank_features(&table, cfg)?;
    let mut curves = Vec::new();
    for &scheme in &cfg.schemes {
        let (curve, full) = accuracy_curve(&table, &ranking, scheme, cfg, seed)?;
        info!("{scheme}: full-width accuracy {}", full.mean_accuracy);
        curves.push((scheme, curve, full));
    }

    let files = crate::report::write_all(
        out_dir,
        cfg,
        seed,
        &embedding,
        &table.feature_names,
        &ranking,
        &curves,
    )?;
    Ok(RunOutput {
        stats,
        embedding,
        ranking,
        feature_names: table.feature_names.clone(),
        curves,
        files,
    })
}
