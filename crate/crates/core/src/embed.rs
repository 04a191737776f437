//! Time-delay embedding and its calibration.
//!
//! The delay is taken from the first local minimum of the average mutual
//! information (AMI) between a series and its lagged copy; the dimension
//! from the false-nearest-neighbor (FNN) test. `embed` then reconstructs
//! the trajectory with lagged coordinates per Takens' theorem.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::channel::{ChannelId, Sensor};
use crate::error::{Error, Result};
use crate::ingest::Window;
use crate::Real;

/// Histogram bins used by the AMI estimator unless configured otherwise.
pub const DEFAULT_AMI_BINS: usize = 16;

/// Delay, dimension and recurrence threshold for one channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingParams {
    pub delay: usize,
    pub dimension: usize,
    pub threshold: f64,
}

impl EmbeddingParams {
    pub fn new(delay: usize, dimension: usize, threshold: f64) -> Result<Self> {
        if delay == 0 || dimension == 0 {
            return Err(Error::InvalidInput(format!(
                "delay and dimension must be positive, got ({delay}, {dimension})"
            )));
        }
        if !(threshold > 0.0 && threshold.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "threshold must be a positive finite distance, got {threshold}"
            )));
        }
        Ok(EmbeddingParams {
            delay,
            dimension,
            threshold,
        })
    }

    /// Defaults used when calibration is skipped; per-sensor values from the
    /// original study's calibration (see README), overridable in config.
    pub fn default_for(sensor: Sensor) -> Self {
        match sensor {
            Sensor::Accelerometer | Sensor::Gyroscope => EmbeddingParams {
                delay: 10,
                dimension: 4,
                threshold: 0.9,
            },
            Sensor::RotationVector => EmbeddingParams {
                delay: 30,
                dimension: 3,
                threshold: 0.01,
            },
        }
    }

    /// Samples consumed by one embedded point beyond its start index.
    pub fn span(&self) -> usize {
        (self.dimension - 1) * self.delay
    }
}

/// Sequence of `dimension`-length lagged-coordinate vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddedTrajectory<T> {
    dimension: usize,
    source_len: usize,
    coords: Vec<T>,
}

impl<T: Real> EmbeddedTrajectory<T> {
    pub fn len(&self) -> usize {
        self.coords.len() / self.dimension
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn source_len(&self) -> usize {
        self.source_len
    }

    pub fn point(&self, k: usize) -> &[T] {
        &self.coords[k * self.dimension..(k + 1) * self.dimension]
    }

    pub fn points(&self) -> std::slice::ChunksExact<'_, T> {
        self.coords.chunks_exact(self.dimension)
    }
}

/// Delay-embeds a series: point k = (x[k], x[k+delay], ..., x[k+(m-1)delay]).
///
/// Point count is N - (m-1)*delay and must come out >= 2.
pub fn embed<T: Real>(series: &[T], params: &EmbeddingParams) -> Result<EmbeddedTrajectory<T>> {
    let n = series.len();
    let span = params.span();
    if n < span + 2 {
        return Err(Error::InsufficientData(format!(
            "series of {n} samples embeds to fewer than 2 points at dimension {} delay {}",
            params.dimension, params.delay
        )));
    }
    let count = n - span;
    let mut coords = Vec::with_capacity(count * params.dimension);
    for k in 0..count {
        for c in 0..params.dimension {
            coords.push(series[k + c * params.delay]);
        }
    }
    Ok(EmbeddedTrajectory {
        dimension: params.dimension,
        source_len: n,
        coords,
    })
}

fn bin_of(v: f64, min: f64, max: f64, bins: usize) -> usize {
    (((v - min) / (max - min) * bins as f64) as usize).min(bins - 1)
}

/// Average mutual information between x_t and x_{t+lag}, in bits.
///
/// Both coordinates are binned with `bins` equal-width bins spanning the
/// whole series' min..max. Terms are accumulated in a transpose-invariant
/// order, so reversing the pairing gives the bit-identical result.
pub fn ami<T: Real>(series: &[T], lag: usize, bins: usize) -> Result<f64> {
    if bins == 0 {
        return Err(Error::InvalidInput("ami needs at least 1 bin".into()));
    }
    let n = series.len();
    if lag + 1 >= n {
        return Err(Error::InsufficientData(format!(
            "lag {lag} needs more than {} samples, got {n}",
            lag + 1
        )));
    }
    let vals: Vec<f64> = series.iter().map(|v| v.as_f64()).collect();
    if vals.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("non-finite sample in ami input".into()));
    }
    let min = vals.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if min == max {
        return Err(Error::DegenerateInput(
            "constant series has no equal-width binning".into(),
        ));
    }
    let pairs = n - lag;
    let mut joint = vec![0u64; bins * bins];
    for i in 0..pairs {
        let a = bin_of(vals[i], min, max, bins);
        let b = bin_of(vals[i + lag], min, max, bins);
        joint[a * bins + b] += 1;
    }
    let mut row = vec![0u64; bins];
    let mut col = vec![0u64; bins];
    for a in 0..bins {
        for b in 0..bins {
            row[a] += joint[a * bins + b];
            col[b] += joint[a * bins + b];
        }
    }

    // Counts stay far below 2^53, so the integer products inside the log
    // are exact and independent cells contribute exactly zero.
    let m = pairs as f64;
    let term = |a: usize, b: usize| -> f64 {
        let c = joint[a * bins + b];
        if c == 0 {
            return 0.0;
        }
        let ratio = (c as f64 * m) / (row[a] as f64 * col[b] as f64);
        (c as f64 / m) * ratio.log2()
    };
    let mut mi = 0.0;
    for a in 0..bins {
        mi += term(a, a);
        for b in a + 1..bins {
            mi += term(a, b) + term(b, a);
        }
    }
    Ok(mi)
}

/// AMI at lags 1..=max_lag; index k holds lag k+1.
pub fn ami_curve<T: Real>(series: &[T], max_lag: usize, bins: usize) -> Result<Vec<f64>> {
    if max_lag == 0 {
        return Err(Error::InvalidInput("ami curve needs max_lag >= 1".into()));
    }
    (1..=max_lag).map(|lag| ami(series, lag, bins)).collect()
}

/// Lag of the first strict local minimum of an AMI curve (curve[0] is lag 1);
/// falls back to the global minimum, ties toward the smaller lag.
pub fn select_delay(curve: &[f64]) -> Result<usize> {
    if curve.is_empty() {
        return Err(Error::InvalidInput("empty ami curve".into()));
    }
    for i in 1..curve.len().saturating_sub(1) {
        if curve[i] < curve[i - 1] && curve[i] < curve[i + 1] {
            return Ok(i + 1);
        }
    }
    let mut best = 0;
    for (i, &v) in curve.iter().enumerate() {
        if v < curve[best] {
            best = i;
        }
    }
    Ok(best + 1)
}

/// Thresholds of the false-nearest-neighbor test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FnnConfig {
    /// Ratio test: new-coordinate growth relative to the old distance.
    pub r_tol: f64,
    /// Size test: extended distance relative to the series deviation.
    pub a_tol: f64,
    /// A dimension is accepted once the false fraction drops below this.
    pub acceptance: f64,
}

impl Default for FnnConfig {
    fn default() -> Self {
        FnnConfig {
            r_tol: 10.0,
            a_tol: 2.0,
            acceptance: 0.05,
        }
    }
}

/// FNN fraction with default thresholds.
pub fn fnn_fraction<T: Real>(series: &[T], dimension: usize, delay: usize) -> Result<f64> {
    fnn_fraction_with(series, dimension, delay, &FnnConfig::default())
}

/// Fraction of points whose nearest neighbor at `dimension` separates when
/// the embedding is extended to `dimension`+1.
///
/// The series is z-scored first so the size test is scale-free. Both the
/// tested points and their neighbor candidates are restricted to indices
/// that can be extended by one more lagged coordinate, which is what makes
/// the comparison at dimension+1 well defined.
pub fn fnn_fraction_with<T: Real>(
    series: &[T],
    dimension: usize,
    delay: usize,
    cfg: &FnnConfig,
) -> Result<f64> {
    if dimension == 0 || delay == 0 {
        return Err(Error::InvalidInput(format!(
            "dimension and delay must be positive, got ({dimension}, {delay})"
        )));
    }
    let n = series.len();
    let span = dimension * delay;
    if n < span + 2 {
        return Err(Error::InsufficientData(format!(
            "false-neighbor test at dimension {dimension} delay {delay} needs \
             {} samples for 2 extendable points, got {n}",
            span + 2
        )));
    }
    let count = n - span;

    let mut mean = 0.0;
    for v in series {
        mean += v.as_f64();
    }
    mean /= n as f64;
    let mut ss = 0.0;
    for v in series {
        let d = v.as_f64() - mean;
        ss += d * d;
    }
    let sd = (ss / (n as f64 - 1.0)).sqrt();
    if sd == 0.0 {
        return Err(Error::DegenerateInput(
            "constant series has no neighbor geometry".into(),
        ));
    }
    let x: Vec<f64> = series.iter().map(|v| (v.as_f64() - mean) / sd).collect();

    let d2 = |i: usize, j: usize| -> f64 {
        let mut acc = 0.0;
        for c in 0..dimension {
            let d = x[i + c * delay] - x[j + c * delay];
            acc += d * d;
        }
        acc
    };

    let mut false_count = 0usize;
    let mut evaluated = 0usize;
    for i in 0..count {
        let mut nn = usize::MAX;
        let mut nn_d2 = f64::INFINITY;
        for j in 0..count {
            if j == i {
                continue;
            }
            let d = d2(i, j);
            // A coincident point carries no geometry; the nearest distinct
            // point serves as the neighbor instead.
            if d == 0.0 {
                continue;
            }
            if d < nn_d2 {
                nn_d2 = d;
                nn = j;
            }
        }
        if nn == usize::MAX {
            continue;
        }
        let delta = x[i + span] - x[nn + span];
        let delta2 = delta * delta;
        // Series deviation is 1 after z-scoring.
        let false_by_ratio = delta2 > cfg.r_tol * cfg.r_tol * nn_d2;
        let false_by_size = nn_d2 + delta2 > cfg.a_tol * cfg.a_tol;
        evaluated += 1;
        if false_by_ratio || false_by_size {
            false_count += 1;
        }
    }
    if evaluated == 0 {
        return Err(Error::DegenerateInput(
            "all nearest-neighbor pairs are at zero distance".into(),
        ));
    }
    Ok(false_count as f64 / evaluated as f64)
}

/// Outcome of the FNN dimension scan.
#[derive(Debug, Clone, PartialEq)]
pub struct DimensionSelection {
    pub dimension: usize,
    /// False when no dimension up to max_dim passed the acceptance test.
    pub converged: bool,
    /// False fraction per evaluated dimension, starting at 1.
    pub fnn_fractions: Vec<f64>,
}

/// Smallest dimension whose FNN fraction is below the acceptance threshold;
/// max_dim with `converged = false` when none qualifies.
pub fn select_dimension<T: Real>(
    series: &[T],
    delay: usize,
    max_dim: usize,
) -> Result<DimensionSelection> {
    select_dimension_with(series, delay, max_dim, &FnnConfig::default())
}

pub fn select_dimension_with<T: Real>(
    series: &[T],
    delay: usize,
    max_dim: usize,
    cfg: &FnnConfig,
) -> Result<DimensionSelection> {
    if max_dim == 0 {
        return Err(Error::InvalidInput("max_dim must be >= 1".into()));
    }
    let mut fractions = Vec::with_capacity(max_dim);
    let mut selected = None;
    for m in 1..=max_dim {
        match fnn_fraction_with(series, m, delay, cfg) {
            Ok(f) => {
                fractions.push(f);
                if selected.is_none() && f < cfg.acceptance {
                    selected = Some(m);
                }
            }
            // Past convergence the remaining curve is reporting only; a
            // series too short for higher dimensions just truncates it.
            Err(e) => {
                if selected.is_some() {
                    break;
                }
                return Err(e);
            }
        }
    }
    Ok(match selected {
        Some(dimension) => DimensionSelection {
            dimension,
            converged: true,
            fnn_fractions: fractions,
        },
        None => DimensionSelection {
            dimension: max_dim,
            converged: false,
            fnn_fractions: fractions,
        },
    })
}

/// Settings for per-channel calibration.
#[derive(Debug, Clone, PartialEq)]
pub struct CalibrateConfig {
    pub max_lag: usize,
    pub max_dim: usize,
    pub ami_bins: usize,
    pub fnn: FnnConfig,
    /// The neighbor search is quadratic; the concatenated calibration signal
    /// is truncated to this many samples before the dimension scan.
    pub fnn_max_samples: usize,
}

impl Default for CalibrateConfig {
    fn default() -> Self {
        CalibrateConfig {
            max_lag: 40,
            max_dim: 6,
            ami_bins: DEFAULT_AMI_BINS,
            fnn: FnnConfig::default(),
            fnn_max_samples: 2000,
        }
    }
}

/// Calibration outcome for one channel, including the report curves.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelCalibration {
    pub delay: usize,
    pub dimension: usize,
    pub dim_converged: bool,
    /// AMI averaged pointwise over all windows, lags 1..=max_lag.
    pub ami_curve: Vec<f64>,
    /// FNN fraction per dimension, starting at 1.
    pub fnn_fractions: Vec<f64>,
}

/// Calibrates delay and dimension per channel.
///
/// Delay: AMI curves are computed per window and averaged pointwise over
/// all windows regardless of label, then the minimum rule picks the lag.
/// Dimension: the FNN scan runs on the windows concatenated in epoch order
/// (truncated to `fnn_max_samples`).
pub fn calibrate<T: Real>(
    windows: &BTreeMap<ChannelId, Vec<Window<T>>>,
    cfg: &CalibrateConfig,
) -> Result<BTreeMap<ChannelId, ChannelCalibration>> {
    use rayon::prelude::*;

    let mut out = BTreeMap::new();
    for (&channel, wins) in windows {
        if wins.is_empty() {
            return Err(Error::InsufficientData(format!(
                "no calibration windows for {channel}"
            )));
        }
        let curves: Vec<Vec<f64>> = wins
            .par_iter()
            .map(|w| ami_curve(&w.samples, cfg.max_lag, cfg.ami_bins))
            .collect::<Result<_>>()?;
        // Sequential pointwise average keeps the reduction order fixed.
        let mut avg = vec![0.0; cfg.max_lag];
        for curve in &curves {
            for (acc, v) in avg.iter_mut().zip(curve) {
                *acc += v;
            }
        }
        for v in &mut avg {
            *v /= curves.len() as f64;
        }
        let delay = select_delay(&avg)?;

        let mut concat: Vec<T> = Vec::new();
        for w in wins {
            if concat.len() >= cfg.fnn_max_samples {
                break;
            }
            concat.extend_from_slice(&w.samples);
        }
        concat.truncate(cfg.fnn_max_samples);
        let dim = select_dimension_with(&concat, delay, cfg.max_dim, &cfg.fnn)?;

        out.insert(
            channel,
            ChannelCalibration {
                delay,
                dimension: dim.dimension,
                dim_converged: dim.converged,
                ami_curve: avg,
                fnn_fractions: dim.fnn_fractions,
            },
        );
    }
    Ok(out)
}
