//! Minimum-redundancy maximum-relevance feature ranking.
//!
//! Features are discretized into equal-frequency bins, mutual information
//! is the plug-in contingency-table estimate in bits, and selection is
//! greedy under the difference criterion: relevance to the class minus mean
//! redundancy against the already-selected set.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::table::FeatureTable;

/// Equal-frequency bins used for feature discretization unless configured.
pub const DEFAULT_BINS: usize = 8;

/// Maps a column into `bins` equal-frequency buckets.
///
/// Values are ranked by a stable sort (ties keep their original order), so
/// tied values at a quantile boundary split deterministically. A constant
/// column collapses to bucket 0. Needs bins >= 2.
pub fn discretize(column: &[f64], bins: usize) -> Vec<usize> {
    assert!(bins >= 2, "discretize needs at least 2 bins");
    let n = column.len();
    if n == 0 {
        return Vec::new();
    }
    let min = column.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = column.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if min == max {
        return vec![0; n];
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| column[i].total_cmp(&column[j]).then(i.cmp(&j)));
    let mut out = vec![0; n];
    for (rank, &i) in order.iter().enumerate() {
        out[i] = rank * bins / n;
    }
    out
}

/// Plug-in mutual information between two integer sequences, in bits.
///
/// Terms are computed from exact integer counts and summed in value order,
/// so swapping the arguments returns the bit-identical result and exactly
/// independent tables come out exactly zero.
pub fn mutual_information(a: &[usize], b: &[usize]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::InvalidInput(format!(
            "mutual information needs equal lengths, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    if a.is_empty() {
        return Err(Error::InvalidInput(
            "mutual information needs at least one observation".into(),
        ));
    }
    let ka = a.iter().max().unwrap() + 1;
    let kb = b.iter().max().unwrap() + 1;
    let mut joint = vec![0u64; ka * kb];
    for (&x, &y) in a.iter().zip(b) {
        joint[x * kb + y] += 1;
    }
    let mut row = vec![0u64; ka];
    let mut col = vec![0u64; kb];
    for x in 0..ka {
        for y in 0..kb {
            row[x] += joint[x * kb + y];
            col[y] += joint[x * kb + y];
        }
    }
    let n = a.len() as f64;
    let mut terms = Vec::new();
    for x in 0..ka {
        for y in 0..kb {
            let c = joint[x * kb + y];
            if c == 0 {
                continue;
            }
            // Counts are far below 2^53: the products are exact, so the
            // ratio is exactly 1 for product-form cells.
            let ratio = (c as f64 * n) / (row[x] as f64 * col[y] as f64);
            terms.push((c as f64 / n) * ratio.log2());
        }
    }
    terms.sort_by(f64::total_cmp);
    // Mathematically >= 0; the clamp drops a rounding residue only.
    Ok(terms.into_iter().sum::<f64>().max(0.0))
}

/// Greedy mRMR ranking result.
#[derive(Debug, Clone, PartialEq)]
pub struct MrmrRanking {
    /// Feature indices in selection order; a prefix of a permutation.
    pub ordered_indices: Vec<usize>,
    /// Selection score at each step (relevance minus mean redundancy).
    pub scores: Vec<f64>,
}

/// Ranks the top `k` features of a table.
///
/// Step 1 takes the feature with maximum class relevance; step j takes the
/// remaining feature maximizing I(f; class) - mean over selected s of
/// I(f; s). Ties break toward the lower feature index.
pub fn mrmr_rank(table: &FeatureTable, k: usize, bins: usize) -> Result<MrmrRanking> {
    let p = table.n_features();
    if k == 0 || k > p {
        return Err(Error::InvalidInput(format!(
            "k must be in 1..={p}, got {k}"
        )));
    }
    if table.n_rows() == 0 {
        return Err(Error::InsufficientData("empty feature table".into()));
    }
    {
        let first = table.labels[0];
        if table.labels.iter().all(|&l| l == first) {
            return Err(Error::DegenerateLabels);
        }
    }

    let cols: Vec<Vec<usize>> = (0..p)
        .into_par_iter()
        .map(|j| discretize(&table.column(j), bins))
        .collect();
    let relevance: Vec<f64> = cols
        .par_iter()
        .map(|c| mutual_information(c, &table.labels))
        .collect::<Result<_>>()?;

    let mut ordered = Vec::with_capacity(k);
    let mut scores = Vec::with_capacity(k);
    let mut in_set = vec![false; p];
    let mut redundancy_sum = vec![0.0; p];
    for step in 0..k {
        let mut best: Option<(f64, usize)> = None;
        for f in 0..p {
            if in_set[f] {
                continue;
            }
            let score = if step == 0 {
                relevance[f]
            } else {
                relevance[f] - redundancy_sum[f] / step as f64
            };
            if best.map_or(true, |(s, _)| score > s) {
                best = Some((score, f));
            }
        }
        let (score, pick) = best.expect("k <= p leaves a candidate");
        ordered.push(pick);
        scores.push(score);
        in_set[pick] = true;

        if step + 1 < k {
            let updates: Vec<(usize, f64)> = (0..p)
                .into_par_iter()
                .filter(|&f| !in_set[f])
                .map(|f| Ok((f, mutual_information(&cols[f], &cols[pick])?)))
                .collect::<Result<_>>()?;
            for (f, mi) in updates {
                redundancy_sum[f] += mi;
            }
        }
    }
    Ok(MrmrRanking {
        ordered_indices: ordered,
        scores,
    })
}
