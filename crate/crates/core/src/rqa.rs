//! Recurrence plots and the six recurrence quantification measures.
//!
//! A recurrence plot marks trajectory point pairs whose Euclidean distance
//! is at or below a threshold. The measures follow the standard
//! conventions: the line of identity (LOI, the main diagonal) is excluded
//! from diagonal statistics but counts toward the recurrence rate and
//! vertical runs; line histograms keep runs of length >= lmin (vmin);
//! entropy is in bits.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::channel::ChannelId;
use crate::embed::{embed, EmbeddingParams};
use crate::error::{Error, Result};
use crate::ingest::Window;
use crate::Real;

/// Measure names in output order.
pub const MEASURE_NAMES: [&str; 6] = ["rr", "det", "lmax", "ent", "lam", "tt"];

/// Feature names for the full 54-wide block, registry order.
pub fn rqa_feature_names() -> Vec<String> {
    let mut names = Vec::with_capacity(9 * 6);
    for channel in ChannelId::all() {
        for measure in MEASURE_NAMES {
            names.push(format!("{channel}.{measure}"));
        }
    }
    names
}

/// Symmetric boolean matrix of thresholded pairwise distances.
#[derive(Debug, Clone, PartialEq)]
pub struct RecurrencePlot {
    n: usize,
    cells: Vec<bool>,
}

impl RecurrencePlot {
    /// Builds from explicit rows, enforcing squareness, symmetry and the LOI.
    pub fn from_rows(rows: Vec<Vec<bool>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInput("recurrence plot must be square".into()));
        }
        for i in 0..n {
            if !rows[i][i] {
                return Err(Error::InvalidInput(format!(
                    "main diagonal must be recurrent, cell ({i},{i}) is not"
                )));
            }
            for j in 0..i {
                if rows[i][j] != rows[j][i] {
                    return Err(Error::InvalidInput(format!(
                        "recurrence plot must be symmetric, cells ({i},{j})/({j},{i}) differ"
                    )));
                }
            }
        }
        Ok(RecurrencePlot {
            n,
            cells: rows.into_iter().flatten().collect(),
        })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.cells[i * self.n + j]
    }

    pub fn true_cells(&self) -> usize {
        self.cells.iter().filter(|&&c| c).count()
    }

    /// Dump format: one line per row, `1` recurrent, `0` not.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(self.n * (self.n + 1));
        for i in 0..self.n {
            for j in 0..self.n {
                out.push(if self.get(i, j) { '1' } else { '0' });
            }
            let _ = writeln!(out);
        }
        out
    }
}

/// How the configured threshold is interpreted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdMode {
    /// Threshold is an absolute Euclidean distance.
    Absolute,
    /// Threshold is a fraction of the maximum pairwise distance.
    MaxFraction,
}

/// Thresholds the pairwise distances of a trajectory (absolute mode).
pub fn recurrence_plot<T: Real>(
    traj: &crate::embed::EmbeddedTrajectory<T>,
    threshold: f64,
) -> Result<RecurrencePlot> {
    recurrence_plot_with(traj, threshold, ThresholdMode::Absolute)
}

pub fn recurrence_plot_with<T: Real>(
    traj: &crate::embed::EmbeddedTrajectory<T>,
    threshold: f64,
    mode: ThresholdMode,
) -> Result<RecurrencePlot> {
    let n = traj.len();
    if n < 2 {
        return Err(Error::InsufficientData(format!(
            "recurrence plot needs >= 2 trajectory points, got {n}"
        )));
    }
    if !(threshold > 0.0 && threshold.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "threshold must be positive and finite, got {threshold}"
        )));
    }
    // Distances are evaluated in f64 regardless of the trajectory scalar so
    // thresholds mean the same thing for f32 and f64 inputs.
    let dim = traj.dimension();
    let mut pts = Vec::with_capacity(n * dim);
    for p in traj.points() {
        for &c in p {
            if !c.is_finite() {
                return Err(Error::InvalidInput(
                    "non-finite coordinate in trajectory".into(),
                ));
            }
            pts.push(c.as_f64());
        }
    }
    let dist = |i: usize, j: usize| -> f64 {
        let mut acc = 0.0;
        for c in 0..dim {
            let d = pts[i * dim + c] - pts[j * dim + c];
            acc += d * d;
        }
        acc.sqrt()
    };
    let t_eff = match mode {
        ThresholdMode::Absolute => threshold,
        ThresholdMode::MaxFraction => {
            let mut dmax = 0.0f64;
            for i in 0..n {
                for j in i + 1..n {
                    dmax = dmax.max(dist(i, j));
                }
            }
            threshold * dmax
        }
    };
    let mut cells = vec![false; n * n];
    for i in 0..n {
        cells[i * n + i] = true;
        for j in i + 1..n {
            let hit = dist(i, j) <= t_eff;
            cells[i * n + j] = hit;
            cells[j * n + i] = hit;
        }
    }
    Ok(RecurrencePlot { n, cells })
}

fn add_runs(hist: &mut BTreeMap<usize, usize>, cells: impl IntoIterator<Item = bool>, min_len: usize) {
    let mut run = 0usize;
    for cell in cells {
        if cell {
            run += 1;
        } else {
            if run >= min_len {
                *hist.entry(run).or_insert(0) += 1;
            }
            run = 0;
        }
    }
    if run >= min_len {
        *hist.entry(run).or_insert(0) += 1;
    }
}

/// Histogram of maximal diagonal run lengths >= lmin, LOI excluded.
pub fn diagonal_lines(rp: &RecurrencePlot, lmin: usize) -> BTreeMap<usize, usize> {
    let n = rp.size();
    let mut hist = BTreeMap::new();
    for off in 1..n {
        add_runs(&mut hist, (0..n - off).map(|i| rp.get(i, i + off)), lmin);
        add_runs(&mut hist, (0..n - off).map(|i| rp.get(i + off, i)), lmin);
    }
    hist
}

/// Histogram of maximal vertical run lengths >= vmin; LOI cells participate.
pub fn vertical_lines(rp: &RecurrencePlot, vmin: usize) -> BTreeMap<usize, usize> {
    let n = rp.size();
    let mut hist = BTreeMap::new();
    for j in 0..n {
        add_runs(&mut hist, (0..n).map(|i| rp.get(i, j)), vmin);
    }
    hist
}

/// The six recurrence measures of one plot.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RqaFeatureVector {
    /// Fraction of recurrent cells, LOI included.
    pub rr: f64,
    /// Fraction of off-LOI recurrent cells on diagonal lines >= lmin.
    pub det: f64,
    /// Longest diagonal line, LOI excluded; 0 when none reaches lmin.
    pub lmax: f64,
    /// Shannon entropy of the diagonal length distribution, bits.
    pub ent: f64,
    /// Fraction of recurrent cells on vertical lines >= vmin.
    pub lam: f64,
    /// Mean vertical line length; 0 when no line reaches vmin.
    pub tt: f64,
}

impl RqaFeatureVector {
    pub fn as_array(&self) -> [f64; 6] {
        [self.rr, self.det, self.lmax, self.ent, self.lam, self.tt]
    }
}

pub fn rqa_features(rp: &RecurrencePlot, lmin: usize, vmin: usize) -> RqaFeatureVector {
    let n = rp.size();
    let total = rp.true_cells();
    let rr = total as f64 / (n * n) as f64;

    let diag = diagonal_lines(rp, lmin);
    let diag_points: usize = diag.iter().map(|(l, c)| l * c).sum();
    let diag_lines: usize = diag.values().sum();
    let off_loi = total - n;
    let det = if off_loi > 0 {
        diag_points as f64 / off_loi as f64
    } else {
        0.0
    };
    let lmax = diag.keys().next_back().copied().unwrap_or(0) as f64;
    let ent = if diag_lines > 0 {
        let mut h = 0.0;
        for &c in diag.values() {
            let p = c as f64 / diag_lines as f64;
            h -= p * p.log2();
        }
        h
    } else {
        0.0
    };

    let vert = vertical_lines(rp, vmin);
    let vert_points: usize = vert.iter().map(|(l, c)| l * c).sum();
    let vert_lines: usize = vert.values().sum();
    let lam = vert_points as f64 / total as f64;
    let tt = if vert_lines > 0 {
        vert_points as f64 / vert_lines as f64
    } else {
        0.0
    };

    RqaFeatureVector {
        rr,
        det,
        lmax,
        ent,
        lam,
        tt,
    }
}

/// Line-length filters and threshold interpretation for feature extraction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RqaConfig {
    pub lmin: usize,
    pub vmin: usize,
    pub threshold_mode: ThresholdMode,
}

impl Default for RqaConfig {
    fn default() -> Self {
        RqaConfig {
            lmin: 2,
            vmin: 2,
            threshold_mode: ThresholdMode::Absolute,
        }
    }
}

/// Concatenates the six measures of each channel's window into the 54-wide
/// block, channel-major in registry order.
pub fn rqa_block<T: Real>(
    windows: &BTreeMap<ChannelId, Window<T>>,
    params: &BTreeMap<ChannelId, EmbeddingParams>,
    cfg: &RqaConfig,
) -> Result<Vec<f64>> {
    let mut block = Vec::with_capacity(9 * 6);
    for channel in ChannelId::all() {
        let window = windows
            .get(&channel)
            .ok_or(Error::MissingChannel(channel))?;
        let p = params.get(&channel).ok_or_else(|| {
            Error::InvalidInput(format!("no embedding parameters for {channel}"))
        })?;
        let traj = embed(&window.samples, p)?;
        let rp = recurrence_plot_with(&traj, p.threshold, cfg.threshold_mode)?;
        block.extend_from_slice(&rqa_features(&rp, cfg.lmin, cfg.vmin).as_array());
    }
    Ok(block)
}
