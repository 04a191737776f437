//! Raw sensor log parsing, signal reconstruction, and windowing.
//!
//! Sensor logs are delimited text, one sample per row:
//!
//! ```text
//! # comment
//! acc_x,0,0.12
//! gyr_z,40,-0.03
//! ```
//!
//! Channels are unsynchronized and irregularly sampled, so each channel is
//! rebuilt as a continuous signal by linear interpolation, resampled on a
//! uniform grid, and cut into non-overlapping fixed-width windows.

use std::collections::BTreeMap;
use std::io::BufRead;
use std::str::FromStr;

use crate::channel::{ChannelId, Mode};
use crate::error::{Error, Result};
use crate::Real;

/// One raw sensor reading: milliseconds since stream start plus the value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RawSample<T> {
    pub timestamp_ms: u64,
    pub value: T,
}

/// A uniformly sampled single-channel signal.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries<T> {
    pub channel: ChannelId,
    pub rate_hz: f64,
    pub values: Vec<T>,
}

impl<T: Real> TimeSeries<T> {
    /// Builds a series, enforcing the invariants: at least two samples,
    /// positive rate, all values finite.
    pub fn new(channel: ChannelId, rate_hz: f64, values: Vec<T>) -> Result<Self> {
        if !(rate_hz > 0.0) {
            return Err(Error::InvalidInput(format!(
                "rate_hz must be positive, got {rate_hz}"
            )));
        }
        if values.len() < 2 {
            return Err(Error::InsufficientData(format!(
                "time series needs >= 2 samples, got {}",
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "non-finite value in {channel} series"
            )));
        }
        Ok(TimeSeries {
            channel,
            rate_hz,
            values,
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// One fixed-width slice of a channel: the classification unit.
#[derive(Debug, Clone, PartialEq)]
pub struct Window<T> {
    pub channel: ChannelId,
    pub epoch_index: usize,
    pub samples: Vec<T>,
}

impl<T> Window<T> {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// Parses a sensor log into per-channel sample lists.
///
/// Rows are `<channel>,<timestamp_ms>,<value>`; lines starting with `#` and
/// blank lines are skipped. Output lists are sorted by timestamp; rows that
/// share a timestamp collapse to the value seen last in the input.
pub fn parse_log<T: Real, R: BufRead>(reader: R) -> Result<BTreeMap<ChannelId, Vec<RawSample<T>>>> {
    let mut channels: BTreeMap<ChannelId, Vec<RawSample<T>>> = BTreeMap::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let row = line.trim();
        if row.is_empty() || row.starts_with('#') {
            continue;
        }
        let mut fields = row.split(',');
        let (Some(ch), Some(ts), Some(val), None) =
            (fields.next(), fields.next(), fields.next(), fields.next())
        else {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected <channel>,<timestamp_ms>,<value>, got {row:?}"),
            });
        };
        let channel = ChannelId::from_str(ch.trim()).map_err(|e| Error::Parse {
            line: line_no,
            message: e.to_string(),
        })?;
        let timestamp_ms: u64 = ts.trim().parse().map_err(|_| Error::Parse {
            line: line_no,
            message: format!("bad timestamp {ts:?}"),
        })?;
        let value: f64 = val.trim().parse().map_err(|_| Error::Parse {
            line: line_no,
            message: format!("bad value {val:?}"),
        })?;
        channels.entry(channel).or_default().push(RawSample {
            timestamp_ms,
            value: T::of_f64(value),
        });
    }
    for samples in channels.values_mut() {
        // Stable sort keeps input order among equal timestamps, so keeping
        // the last entry of each run implements the last-seen rule.
        samples.sort_by_key(|s| s.timestamp_ms);
        dedup_keep_last(samples);
    }
    Ok(channels)
}

fn dedup_keep_last<T: Copy>(samples: &mut Vec<RawSample<T>>) {
    let mut write = 0;
    for read in 0..samples.len() {
        if read + 1 < samples.len()
            && samples[read + 1].timestamp_ms == samples[read].timestamp_ms
        {
            continue;
        }
        samples[write] = samples[read];
        write += 1;
    }
    samples.truncate(write);
}

/// Parses the label sidecar: `<epoch_index>,<mode>` per row, `#` comments.
pub fn parse_labels<R: BufRead>(reader: R) -> Result<BTreeMap<usize, Mode>> {
    let mut labels = BTreeMap::new();
    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let row = line.trim();
        if row.is_empty() || row.starts_with('#') {
            continue;
        }
        let mut fields = row.split(',');
        let (Some(epoch), Some(mode), None) = (fields.next(), fields.next(), fields.next())
        else {
            return Err(Error::Parse {
                line: line_no,
                message: format!("expected <epoch_index>,<mode>, got {row:?}"),
            });
        };
        let epoch: usize = epoch.trim().parse().map_err(|_| Error::Parse {
            line: line_no,
            message: format!("bad epoch index {epoch:?}"),
        })?;
        let mode = Mode::from_str(mode.trim()).map_err(|e| Error::Parse {
            line: line_no,
            message: e.to_string(),
        })?;
        if labels.insert(epoch, mode).is_some() {
            return Err(Error::Parse {
                line: line_no,
                message: format!("duplicate label for epoch {epoch}"),
            });
        }
    }
    Ok(labels)
}

/// Rebuilds a uniform signal from irregular samples by linear interpolation.
///
/// The output grid is the multiples of `1/rate_hz` that fall inside the
/// sampled span; the grid never extends past the data, so no value is ever
/// extrapolated. Grid points that coincide with an input timestamp reproduce
/// that input value exactly.
pub fn resample_linear<T: Real>(
    channel: ChannelId,
    samples: &[RawSample<T>],
    rate_hz: f64,
) -> Result<TimeSeries<T>> {
    if !(rate_hz > 0.0) {
        return Err(Error::InvalidInput(format!(
            "rate_hz must be positive, got {rate_hz}"
        )));
    }
    if samples.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "resampling {channel} needs >= 2 samples, got {}",
            samples.len()
        )));
    }
    if samples.windows(2).any(|w| w[0].timestamp_ms >= w[1].timestamp_ms) {
        return Err(Error::InvalidInput(format!(
            "{channel} samples must be strictly increasing in time"
        )));
    }
    let first_ms = samples[0].timestamp_ms as f64;
    let last_ms = samples[samples.len() - 1].timestamp_ms as f64;
    let period_ms = 1000.0 / rate_hz;
    // Guard band absorbs roundoff when a timestamp sits exactly on the grid.
    let k_min = (first_ms / period_ms - 1e-9).ceil().max(0.0) as u64;
    let k_max = (last_ms / period_ms + 1e-9).floor() as u64;
    if k_max < k_min || k_max - k_min < 1 {
        return Err(Error::InsufficientData(format!(
            "{channel} span shorter than one output period at {rate_hz} Hz"
        )));
    }

    let mut values = Vec::with_capacity((k_max - k_min + 1) as usize);
    let mut seg = 0usize;
    for k in k_min..=k_max {
        let t = k as f64 * period_ms;
        while seg + 2 < samples.len() && (samples[seg + 1].timestamp_ms as f64) < t {
            seg += 1;
        }
        let lo = samples[seg];
        let hi = samples[seg + 1];
        let t0 = lo.timestamp_ms as f64;
        let t1 = hi.timestamp_ms as f64;
        let alpha = ((t - t0) / (t1 - t0)).clamp(0.0, 1.0);
        // Lerp in this form is exact at both endpoints.
        let a = T::of_f64(alpha);
        let v = lo.value * (T::one() - a) + hi.value * a;
        values.push(v);
    }
    TimeSeries::new(channel, rate_hz, values)
}

/// Cuts a series into consecutive non-overlapping windows of
/// `round(rate_hz * window_seconds)` samples; the trailing remainder is
/// discarded. A series shorter than one window yields an empty list.
pub fn cut_windows<T: Real>(series: &TimeSeries<T>, window_seconds: f64) -> Result<Vec<Window<T>>> {
    if !(window_seconds > 0.0) {
        return Err(Error::InvalidInput(format!(
            "window_seconds must be positive, got {window_seconds}"
        )));
    }
    let len = (series.rate_hz * window_seconds).round() as usize;
    if len == 0 {
        return Err(Error::InvalidInput(format!(
            "window of {window_seconds} s holds no samples at {} Hz",
            series.rate_hz
        )));
    }
    let count = series.values.len() / len;
    let mut windows = Vec::with_capacity(count);
    for epoch_index in 0..count {
        windows.push(Window {
            channel: series.channel,
            epoch_index,
            samples: series.values[epoch_index * len..(epoch_index + 1) * len].to_vec(),
        });
    }
    Ok(windows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{Axis, Sensor};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};
    use std::io::Cursor;

    fn acc_x() -> ChannelId {
        ChannelId::new(Sensor::Accelerometer, Axis::X)
    }

    fn raw(ts: u64, v: f64) -> RawSample<f64> {
        RawSample {
            timestamp_ms: ts,
            value: v,
        }
    }

    #[test]
    fn parses_simple_rows() {
        let parsed = parse_log::<f64, _>(Cursor::new("acc_x,0,1.0\nacc_x,40,2.0")).unwrap();
        assert_eq!(parsed.len(), 1);
        assert_eq!(parsed[&acc_x()], vec![raw(0, 1.0), raw(40, 2.0)]);
    }

    #[test]
    fn empty_stream_is_empty_map() {
        let parsed = parse_log::<f64, _>(Cursor::new("")).unwrap();
        assert!(parsed.is_empty());
    }

    #[test]
    fn skips_comments_and_blank_lines() {
        let text = "# header\n\nacc_y,10,0.5\n  # indented comment\n";
        let parsed = parse_log::<f64, _>(Cursor::new(text)).unwrap();
        let ch = ChannelId::new(Sensor::Accelerometer, Axis::Y);
        assert_eq!(parsed[&ch], vec![raw(10, 0.5)]);
    }

    #[test]
    fn out_of_order_rows_match_sorted_input() {
        // Oracle: parse the pre-sorted text and compare.
        let shuffled = "gyr_z,80,3.0\ngyr_z,0,1.0\ngyr_z,40,2.0";
        let sorted = "gyr_z,0,1.0\ngyr_z,40,2.0\ngyr_z,80,3.0";
        let a = parse_log::<f64, _>(Cursor::new(shuffled)).unwrap();
        let b = parse_log::<f64, _>(Cursor::new(sorted)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn parse_is_permutation_invariant() {
        let mut rng = StdRng::seed_from_u64(7);
        let mut rows: Vec<String> = (0..50)
            .map(|i| format!("rot_y,{},{}", i * 13 % 997, i as f64 * 0.25))
            .collect();
        let baseline = parse_log::<f64, _>(Cursor::new(rows.join("\n"))).unwrap();
        for _ in 0..5 {
            for i in (1..rows.len()).rev() {
                rows.swap(i, rng.gen_range(0..=i));
            }
            let parsed = parse_log::<f64, _>(Cursor::new(rows.join("\n"))).unwrap();
            assert_eq!(parsed, baseline);
        }
    }

    #[test]
    fn duplicate_timestamp_keeps_last_seen() {
        let parsed =
            parse_log::<f64, _>(Cursor::new("acc_x,40,1.0\nacc_x,0,9.0\nacc_x,40,5.0")).unwrap();
        assert_eq!(parsed[&acc_x()], vec![raw(0, 9.0), raw(40, 5.0)]);
    }

    #[test]
    fn malformed_row_reports_line_number() {
        let err = parse_log::<f64, _>(Cursor::new("acc_x,0,1.0\nacc_x,nope")).unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_channel_is_a_parse_error() {
        let err = parse_log::<f64, _>(Cursor::new("gps_x,0,1.0")).unwrap_err();
        match err {
            Error::Parse { line, message } => {
                assert_eq!(line, 1);
                assert!(message.contains("gps_x"));
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn parses_label_sidecar() {
        let labels = parse_labels(Cursor::new("# epoch,mode\n0,walk\n1,car\n2,bike")).unwrap();
        assert_eq!(labels[&0], Mode::Walk);
        assert_eq!(labels[&1], Mode::Car);
        assert_eq!(labels[&2], Mode::Bike);
        assert!(parse_labels(Cursor::new("0,walk\n0,car")).is_err());
        assert!(parse_labels(Cursor::new("0,teleport")).is_err());
    }

    #[test]
    fn resample_line_segment_at_100hz() {
        let samples = [raw(0, 0.0), raw(20, 2.0)];
        let series = resample_linear(acc_x(), &samples, 100.0).unwrap();
        assert_eq!(series.values, vec![0.0, 1.0, 2.0]);
    }

    #[test]
    fn resample_on_grid_is_identity() {
        let samples: Vec<_> = (0..10).map(|k| raw(k * 10, (k as f64).sin())).collect();
        let series = resample_linear(acc_x(), &samples, 100.0).unwrap();
        let expected: Vec<f64> = samples.iter().map(|s| s.value).collect();
        assert_eq!(series.values, expected);
    }

    #[test]
    fn resample_irregular_matches_piecewise_oracle() {
        // Independent oracle: direct piecewise-linear evaluation of the polyline.
        let samples = [raw(0, 0.0), raw(15, 3.0), raw(40, 8.0)];
        let oracle = |t_ms: f64| -> f64 {
            if t_ms <= 15.0 {
                3.0 * t_ms / 15.0
            } else {
                3.0 + (8.0 - 3.0) * (t_ms - 15.0) / 25.0
            }
        };
        let series = resample_linear(acc_x(), &samples, 100.0).unwrap();
        assert_eq!(series.values.len(), 5);
        for (k, v) in series.values.iter().enumerate() {
            let t = k as f64 * 10.0;
            assert!((v - oracle(t)).abs() < 1e-12, "t={t} got {v}");
        }
    }

    #[test]
    fn resample_rejects_single_sample() {
        let err = resample_linear(acc_x(), &[raw(0, 1.0)], 100.0).unwrap_err();
        assert!(matches!(err, Error::InsufficientData(_)));
    }

    #[test]
    fn resample_reproduces_linear_signals() {
        // Invariant: an exactly linear signal is reproduced to 1e-12 relative
        // error at every grid point, for irregular input spacing.
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..20 {
            let slope: f64 = rng.gen_range(-5.0..5.0);
            let intercept: f64 = rng.gen_range(-10.0..10.0);
            let mut ts = 0u64;
            let samples: Vec<_> = (0..40)
                .map(|_| {
                    ts += rng.gen_range(1..60);
                    raw(ts, slope * ts as f64 / 1000.0 + intercept)
                })
                .collect();
            let series = resample_linear(acc_x(), &samples, 100.0).unwrap();
            let k0 = (samples[0].timestamp_ms as f64 / 10.0).ceil() as usize;
            for (i, v) in series.values.iter().enumerate() {
                let t_s = (k0 + i) as f64 * 10.0 / 1000.0;
                let want = slope * t_s + intercept;
                let tol = 1e-12 * want.abs().max(1.0);
                assert!((v - want).abs() <= tol, "t={t_s} got {v} want {want}");
            }
        }
    }

    #[test]
    fn resample_grid_stays_inside_data_span() {
        // First sample at 25 ms: the 100 Hz grid starts at 30 ms, ends at 90 ms.
        let samples = [raw(25, 0.0), raw(95, 7.0)];
        let series = resample_linear(acc_x(), &samples, 100.0).unwrap();
        assert_eq!(series.values.len(), 7);
        let oracle = |t: f64| 7.0 * (t - 25.0) / 70.0;
        for (i, v) in series.values.iter().enumerate() {
            let t = (3 + i) as f64 * 10.0;
            assert!((v - oracle(t)).abs() < 1e-12);
        }
    }

    #[test]
    fn cut_windows_discards_remainder() {
        let values: Vec<f64> = (0..250).map(|i| i as f64).collect();
        let series = TimeSeries::new(acc_x(), 100.0, values).unwrap();
        let windows = cut_windows(&series, 1.0).unwrap();
        assert_eq!(windows.len(), 2);
        assert_eq!(windows[0].samples[0], 0.0);
        assert_eq!(windows[0].samples[99], 99.0);
        assert_eq!(windows[1].samples[0], 100.0);
        assert_eq!(windows[1].samples[99], 199.0);
        assert_eq!(windows[0].epoch_index, 0);
        assert_eq!(windows[1].epoch_index, 1);
    }

    #[test]
    fn cut_windows_exact_fit_and_short_series() {
        let series =
            TimeSeries::new(acc_x(), 100.0, (0..100).map(|i| i as f64).collect()).unwrap();
        assert_eq!(cut_windows(&series, 1.0).unwrap().len(), 1);
        let series =
            TimeSeries::new(acc_x(), 100.0, (0..99).map(|i| i as f64).collect()).unwrap();
        assert_eq!(cut_windows(&series, 1.0).unwrap().len(), 0);
    }

    #[test]
    fn window_concatenation_reproduces_prefix() {
        let values: Vec<f64> = (0..517).map(|i| (i as f64 * 0.37).sin()).collect();
        let series = TimeSeries::new(acc_x(), 100.0, values.clone()).unwrap();
        let windows = cut_windows(&series, 1.0).unwrap();
        let rebuilt: Vec<f64> = windows.iter().flat_map(|w| w.samples.clone()).collect();
        assert_eq!(rebuilt.as_slice(), &values[..rebuilt.len()]);
    }

    #[test]
    fn series_invariants_enforced() {
        assert!(TimeSeries::new(acc_x(), 0.0, vec![1.0, 2.0]).is_err());
        assert!(TimeSeries::new(acc_x(), 100.0, vec![1.0]).is_err());
        assert!(TimeSeries::new(acc_x(), 100.0, vec![1.0, f64::NAN]).is_err());
    }

    #[test]
    fn works_with_f32_scalars() {
        let samples = [
            RawSample {
                timestamp_ms: 0,
                value: 0.0f32,
            },
            RawSample {
                timestamp_ms: 20,
                value: 2.0f32,
            },
        ];
        let series = resample_linear(acc_x(), &samples, 100.0).unwrap();
        assert_eq!(series.values, vec![0.0f32, 1.0, 2.0]);
    }
}
