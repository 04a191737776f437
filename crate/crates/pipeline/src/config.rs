//! Run configuration.
//!
//! One TOML document drives every stage. All knobs have defaults except the
//! seed and the input paths: runs refuse to start without an explicit seed,
//! and there is no wall-clock fallback anywhere.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use vru_core::channel::ChannelId;
use vru_core::embed::EmbeddingParams;
use vru_core::forest::ForestConfig;
use vru_core::rqa::{RqaConfig, ThresholdMode};
use vru_core::table::LabelScheme;

use crate::{Result, StageError};

/// Which feature block(s) the table carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureSet {
    /// Time-domain block then recurrence block, 180 columns.
    Pooled,
    /// Time-domain block only, 126 columns.
    TimeOnly,
    /// Recurrence block only, 54 columns.
    RqaOnly,
}

impl FeatureSet {
    pub fn as_str(self) -> &'static str {
        match self {
            FeatureSet::Pooled => "pooled",
            FeatureSet::TimeOnly => "time_only",
            FeatureSet::RqaOnly => "rqa_only",
        }
    }
}

/// Input file locations.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InputsConfig {
    /// Sensor log, `<channel>,<timestamp_ms>,<value>` rows.
    pub log: PathBuf,
    /// Label sidecar, `<epoch_index>,<mode>` rows.
    pub labels: PathBuf,
}

/// Delay and dimension selection.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EmbeddingSection {
    /// When true, delay and dimension come from the AMI and FNN scans
    /// instead of the per-sensor defaults. Thresholds are never calibrated.
    pub calibrate: bool,
    pub max_lag: usize,
    pub max_dim: usize,
    /// Full per-channel overrides keyed by channel name, e.g. "acc_x".
    /// Overrides win over both the defaults and calibration.
    pub channels: BTreeMap<String, EmbeddingParams>,
}

impl Default for EmbeddingSection {
    fn default() -> Self {
        EmbeddingSection {
            calibrate: false,
            max_lag: 40,
            max_dim: 6,
            channels: BTreeMap::new(),
        }
    }
}

/// Recurrence extraction knobs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RqaSection {
    pub lmin: usize,
    pub vmin: usize,
    pub threshold_mode: ThresholdMode,
    /// Candidate thresholds for the per-channel sweep, interpreted under
    /// `threshold_mode`. Sorted and deduplicated before use.
    pub sweep_grid: Vec<f64>,
}

impl Default for RqaSection {
    fn default() -> Self {
        RqaSection {
            lmin: 2,
            vmin: 2,
            threshold_mode: ThresholdMode::Absolute,
            sweep_grid: vec![0.005, 0.01, 0.05, 0.2, 0.5, 0.9, 1.5],
        }
    }
}

/// Feature ranking knobs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SelectionSection {
    /// Equal-frequency bins used to discretize features for ranking.
    pub bins: usize,
    /// Feature counts evaluated on the accuracy curve. Empty means
    /// 10, 20, ... up to the table width, with the full width appended.
    pub k_grid: Vec<usize>,
}

impl Default for SelectionSection {
    fn default() -> Self {
        SelectionSection {
            bins: 8,
            k_grid: Vec::new(),
        }
    }
}

/// Classifier and cross-validation knobs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ForestSection {
    pub n_trees: usize,
    pub min_leaf: usize,
    pub folds: usize,
    /// Features sampled per split; unset picks floor(sqrt(width)).
    pub features_per_split: Option<usize>,
}

impl Default for ForestSection {
    fn default() -> Self {
        ForestSection {
            n_trees: 100,
            min_leaf: 1,
            folds: 5,
            features_per_split: None,
        }
    }
}

/// The whole run configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub rate_hz: f64,
    pub window_seconds: f64,
    pub features: FeatureSet,
    /// Label schemes evaluated, each producing its own curve and confusion.
    pub schemes: Vec<LabelScheme>,
    /// Root seed for everything random. Mandatory before a run starts;
    /// `--seed` on the command line overrides it.
    pub seed: Option<u64>,
    pub inputs: InputsConfig,
    pub embedding: EmbeddingSection,
    pub rqa: RqaSection,
    pub selection: SelectionSection,
    pub forest: ForestSection,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            rate_hz: 100.0,
            window_seconds: 1.0,
            features: FeatureSet::Pooled,
            schemes: LabelScheme::all().to_vec(),
            seed: None,
            inputs: InputsConfig::default(),
            embedding: EmbeddingSection::default(),
            rqa: RqaSection::default(),
            selection: SelectionSection::default(),
            forest: ForestSection::default(),
        }
    }
}

impl PipelineConfig {
    /// Reads and validates a TOML config file.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| {
            StageError::new("config", format!("cannot read {}: {e}", path.display()))
        })?;
        let cfg: PipelineConfig = toml::from_str(&text)
            .map_err(|e| StageError::new("config", format!("{}: {e}", path.display())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let err = |msg: String| Err(StageError::new("config", msg));
        if !(self.rate_hz > 0.0 && self.rate_hz.is_finite()) {
            return err(format!("rate_hz must be positive, got {}", self.rate_hz));
        }
        if !(self.window_seconds > 0.0 && self.window_seconds.is_finite()) {
            return err(format!(
                "window_seconds must be positive, got {}",
                self.window_seconds
            ));
        }
        if self.schemes.is_empty() {
            return err("schemes must not be empty".to_string());
        }
        if self.embedding.max_lag == 0 {
            return err("embedding.max_lag must be positive".to_string());
        }
        if self.embedding.max_dim == 0 {
            return err("embedding.max_dim must be positive".to_string());
        }
        for (name, p) in &self.embedding.channels {
            if name.parse::<ChannelId>().is_err() {
                return err(format!("unknown channel {name:?} in embedding.channels"));
            }
            if let Err(e) = EmbeddingParams::new(p.delay, p.dimension, p.threshold) {
                return err(format!("embedding.channels.{name}: {e}"));
            }
        }
        for &t in &self.rqa.sweep_grid {
            if !(t > 0.0 && t.is_finite()) {
                return err(format!("rqa.sweep_grid entries must be positive, got {t}"));
            }
        }
        if self.selection.bins < 2 {
            return err(format!(
                "selection.bins must be at least 2, got {}",
                self.selection.bins
            ));
        }
        if self.selection.k_grid.iter().any(|&k| k == 0) {
            return err("selection.k_grid entries must be positive".to_string());
        }
        if self.forest.n_trees == 0 {
            return err("forest.n_trees must be positive".to_string());
        }
        if self.forest.min_leaf == 0 {
            return err("forest.min_leaf must be positive".to_string());
        }
        if self.forest.folds < 2 {
            return err(format!(
                "forest.folds must be at least 2, got {}",
                self.forest.folds
            ));
        }
        Ok(())
    }

    /// Per-channel embedding parameters from the sensor defaults plus any
    /// explicit overrides. Calibration, when enabled, is applied on top of
    /// this map by the calibrate stage (overridden channels stay fixed).
    pub fn base_params(&self) -> Result<BTreeMap<ChannelId, EmbeddingParams>> {
        let mut map = BTreeMap::new();
        for ch in ChannelId::all() {
            map.insert(ch, EmbeddingParams::default_for(ch.sensor));
        }
        for (name, p) in &self.embedding.channels {
            let ch: ChannelId = name
                .parse()
                .map_err(|e| StageError::new("config", format!("{e}")))?;
            map.insert(ch, *p);
        }
        Ok(map)
    }

    /// The seed every stage derives its randomness from.
    pub fn resolved_seed(&self) -> Result<u64> {
        self.seed.ok_or_else(|| {
            StageError::new(
                "config",
                "seed is required; set `seed` in the config or pass --seed",
            )
        })
    }

    pub fn forest_config(&self, seed: u64) -> ForestConfig {
        ForestConfig {
            n_trees: self.forest.n_trees,
            n_features_per_split: self.forest.features_per_split,
            min_leaf: self.forest.min_leaf,
            seed,
        }
    }

    pub fn rqa_config(&self) -> RqaConfig {
        RqaConfig {
            lmin: self.rqa.lmin,
            vmin: self.rqa.vmin,
            threshold_mode: self.rqa.threshold_mode,
        }
    }

    /// The config as TOML, used verbatim in the run manifest.
    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes to TOML")
    }
}
