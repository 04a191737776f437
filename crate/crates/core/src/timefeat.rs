//! Time-domain window features.
//!
//! Seven summary measures of the window samples plus the same seven measures
//! of the window's first derivative: mean, max, min, variance, standard
//! deviation, range, interquartile range. 14 values per channel, 126 per
//! nine-channel epoch.
//!
//! Conventions (fixed so oracles are exact): variance divides by N-1, the
//! derivative is the forward difference scaled by the sample rate, and
//! quartiles use linear interpolation at positions (N-1)/4 and 3(N-1)/4.

use std::collections::BTreeMap;

use crate::channel::ChannelId;
use crate::error::{Error, Result};
use crate::ingest::Window;
use crate::Real;

/// Number of measures per channel.
pub const MEASURES_PER_CHANNEL: usize = 14;

/// Measure names in output order; `d_` marks the derivative block.
pub const MEASURE_NAMES: [&str; MEASURES_PER_CHANNEL] = [
    "mean",
    "max",
    "min",
    "variance",
    "stddev",
    "range",
    "iqr",
    "d_mean",
    "d_max",
    "d_min",
    "d_variance",
    "d_stddev",
    "d_range",
    "d_iqr",
];

/// Feature names for the full 126-wide time block, registry order.
pub fn time_feature_names() -> Vec<String> {
    let mut names = Vec::with_capacity(9 * MEASURES_PER_CHANNEL);
    for channel in ChannelId::all() {
        for measure in MEASURE_NAMES {
            names.push(format!("{channel}.{measure}"));
        }
    }
    names
}

/// The 14 time-domain measures of one window.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeFeatureVector<T> {
    pub channel: ChannelId,
    pub epoch_index: usize,
    pub values: [T; MEASURES_PER_CHANNEL],
}

/// Forward first difference scaled by the sample rate; length N-1.
pub fn derivative<T: Real>(samples: &[T], rate_hz: f64) -> Result<Vec<T>> {
    if samples.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "derivative needs >= 2 samples, got {}",
            samples.len()
        )));
    }
    let rate = T::of_f64(rate_hz);
    Ok(samples
        .windows(2)
        .map(|pair| (pair[1] - pair[0]) * rate)
        .collect())
}

/// Computes the 14 measures of a window: rows 1-7 on the samples, rows 8-14
/// on the forward-difference derivative.
pub fn time_features<T: Real>(window: &Window<T>, rate_hz: f64) -> Result<TimeFeatureVector<T>> {
    if window.len() < 4 {
        return Err(Error::InsufficientData(format!(
            "time features need >= 4 samples, got {}",
            window.len()
        )));
    }
    if window.samples.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput(format!(
            "non-finite sample in {} window {}",
            window.channel, window.epoch_index
        )));
    }
    let base = summarize(&window.samples);
    let deriv = summarize(&derivative(&window.samples, rate_hz)?);
    let mut values = [T::zero(); MEASURES_PER_CHANNEL];
    values[..7].copy_from_slice(&base);
    values[7..].copy_from_slice(&deriv);
    Ok(TimeFeatureVector {
        channel: window.channel,
        epoch_index: window.epoch_index,
        values,
    })
}

/// [mean, max, min, variance, stddev, range, iqr] of a non-empty slice.
fn summarize<T: Real>(values: &[T]) -> [T; 7] {
    let n = T::of_f64(values.len() as f64);
    let mut sum = T::zero();
    let mut max = values[0];
    let mut min = values[0];
    for &v in values {
        sum = sum + v;
        if v > max {
            max = v;
        }
        if v < min {
            min = v;
        }
    }
    let mean = sum / n;
    let variance = if values.len() < 2 {
        T::zero()
    } else {
        let mut ss = T::zero();
        for &v in values {
            let d = v - mean;
            ss = ss + d * d;
        }
        ss / (n - T::one())
    };
    let stddev = variance.sqrt();
    let range = max - min;

    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite values"));
    let iqr = quantile(&sorted, 0.75) - quantile(&sorted, 0.25);

    [mean, max, min, variance, stddev, range, iqr]
}

/// Linear-interpolation quantile of pre-sorted data at position (N-1)*q.
fn quantile<T: Real>(sorted: &[T], q: f64) -> T {
    let pos = (sorted.len() - 1) as f64 * q;
    let lo = pos.floor() as usize;
    if lo + 1 >= sorted.len() {
        return sorted[sorted.len() - 1];
    }
    let frac = T::of_f64(pos - lo as f64);
    sorted[lo] * (T::one() - frac) + sorted[lo + 1] * frac
}

/// Concatenates the per-channel 14-measure vectors of one epoch into the
/// 126-wide time block, channel-major in registry order.
pub fn assemble_time_block<T: Real>(
    windows: &BTreeMap<ChannelId, Window<T>>,
    rate_hz: f64,
) -> Result<Vec<T>> {
    let mut block = Vec::with_capacity(9 * MEASURES_PER_CHANNEL);
    for channel in ChannelId::all() {
        let window = windows
            .get(&channel)
            .ok_or(Error::MissingChannel(channel))?;
        block.extend_from_slice(&time_features(window, rate_hz)?.values);
    }
    Ok(block)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{Axis, Sensor};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};
    use rand_distr::{Distribution, Normal};

    fn window(samples: Vec<f64>) -> Window<f64> {
        Window {
            channel: ChannelId::new(Sensor::Accelerometer, Axis::X),
            epoch_index: 0,
            samples,
        }
    }

    fn assert_close(got: f64, want: f64, tol: f64) {
        assert!(
            (got - want).abs() <= tol * want.abs().max(1.0),
            "got {got}, want {want}"
        );
    }

    #[test]
    fn derivative_of_ramp_is_constant_slope() {
        assert_eq!(
            derivative(&[0.0, 1.0, 2.0, 3.0], 100.0).unwrap(),
            vec![100.0, 100.0, 100.0]
        );
    }

    #[test]
    fn derivative_of_constant_is_zero() {
        assert_eq!(derivative(&[5.0; 6], 100.0).unwrap(), vec![0.0; 5]);
    }

    #[test]
    fn derivative_direct_arithmetic() {
        assert_eq!(derivative(&[1.0, 4.0, 2.0], 100.0).unwrap(), vec![300.0, -200.0]);
        assert!(matches!(
            derivative::<f64>(&[1.0], 100.0),
            Err(Error::InsufficientData(_))
        ));
    }

    #[test]
    fn constant_window_degenerates_cleanly() {
        let f = time_features(&window(vec![3.5; 100]), 100.0).unwrap();
        let [mean, max, min, var, sd, range, iqr] = f.values[..7].try_into().unwrap();
        assert_eq!((mean, max, min), (3.5, 3.5, 3.5));
        assert_eq!((var, sd, range, iqr), (0.0, 0.0, 0.0, 0.0));
        assert_eq!(&f.values[7..], &[0.0; 7]);
    }

    #[test]
    fn four_sample_window_matches_hand_computed_conventions() {
        // Sample variance of [1,2,3,4] is 5/3; quartiles interpolate at
        // positions 0.75 and 2.25, so IQR = 3.25 - 1.75 = 1.5.
        let f = time_features(&window(vec![1.0, 2.0, 3.0, 4.0]), 100.0).unwrap();
        assert_close(f.values[0], 2.5, 1e-15);
        assert_eq!(f.values[1], 4.0);
        assert_eq!(f.values[2], 1.0);
        assert_close(f.values[3], 5.0 / 3.0, 1e-15);
        assert_close(f.values[4], (5.0f64 / 3.0).sqrt(), 1e-15);
        assert_eq!(f.values[5], 3.0);
        assert_close(f.values[6], 1.5, 1e-15);
        // Derivative is [100, 100, 100].
        assert_close(f.values[7], 100.0, 1e-15);
        assert_eq!(f.values[8], 100.0);
        assert_eq!(f.values[9], 100.0);
        assert_eq!(f.values[10], 0.0);
        assert_eq!(f.values[11], 0.0);
        assert_eq!(f.values[12], 0.0);
        assert_eq!(f.values[13], 0.0);
    }

    #[test]
    fn white_noise_variance_tracks_generator_variance() {
        // Monte Carlo oracle: the mean of 1000 sample variances of N=100
        // windows estimates the generator variance to well within 10%.
        let sigma2 = 2.25;
        let normal = Normal::new(0.0, (sigma2 as f64).sqrt()).unwrap();
        let mut rng = StdRng::seed_from_u64(42);
        let mut mean_var = 0.0;
        for _ in 0..1000 {
            let w = window((0..100).map(|_| normal.sample(&mut rng)).collect());
            mean_var += time_features(&w, 100.0).unwrap().values[3];
        }
        mean_var /= 1000.0;
        assert!(
            (mean_var - sigma2).abs() < 0.1 * sigma2,
            "mean variance {mean_var} vs generator {sigma2}"
        );
    }

    #[test]
    fn rejects_non_finite_samples() {
        let err = time_features(&window(vec![1.0, 2.0, f64::INFINITY, 4.0]), 100.0).unwrap_err();
        assert!(matches!(err, Error::InvalidInput(_)));
    }

    #[test]
    fn scale_and_shift_equivariance() {
        let mut rng = StdRng::seed_from_u64(3);
        for _ in 0..100 {
            let samples: Vec<f64> = (0..100).map(|_| rng.gen_range(-4.0..4.0)).collect();
            let a: f64 = rng.gen_range(0.1..5.0);
            let b: f64 = rng.gen_range(-3.0..3.0);
            let base = time_features(&window(samples.clone()), 100.0).unwrap().values;

            let scaled = time_features(
                &window(samples.iter().map(|v| a * v).collect()),
                100.0,
            )
            .unwrap()
            .values;
            for i in 0..14 {
                let want = if i == 3 || i == 10 { base[i] * a * a } else { base[i] * a };
                assert_close(scaled[i], want, 1e-10);
            }

            let shifted = time_features(
                &window(samples.iter().map(|v| v + b).collect()),
                100.0,
            )
            .unwrap()
            .values;
            for i in 0..14 {
                let want = if i < 3 { base[i] + b } else { base[i] };
                assert_close(shifted[i], want, 1e-10);
            }
        }
    }

    #[test]
    fn ordering_invariants_hold_on_random_windows() {
        let mut rng = StdRng::seed_from_u64(5);
        for _ in 0..50 {
            let samples: Vec<f64> = (0..100).map(|_| rng.gen_range(-9.0..9.0)).collect();
            let v = time_features(&window(samples), 100.0).unwrap().values;
            for block in [0, 7] {
                let (mean, max, min) = (v[block], v[block + 1], v[block + 2]);
                assert!(min <= mean && mean <= max);
                assert!(v[block + 3] >= 0.0);
                assert_close(v[block + 4], v[block + 3].sqrt(), 1e-12);
                assert_close(v[block + 5], max - min, 1e-12);
                assert!(v[block + 5] >= 0.0 && v[block + 6] >= 0.0);
            }
        }
    }

    fn epoch_windows(values: impl Fn(ChannelId) -> Vec<f64>) -> BTreeMap<ChannelId, Window<f64>> {
        ChannelId::all()
            .into_iter()
            .map(|channel| {
                (
                    channel,
                    Window {
                        channel,
                        epoch_index: 0,
                        samples: values(channel),
                    },
                )
            })
            .collect()
    }

    #[test]
    fn constant_epoch_produces_expected_pattern() {
        let block = assemble_time_block(&epoch_windows(|_| vec![2.0; 100]), 100.0).unwrap();
        assert_eq!(block.len(), 126);
        for ch in 0..9 {
            let v = &block[ch * 14..(ch + 1) * 14];
            assert_eq!(&v[..3], &[2.0, 2.0, 2.0]);
            assert_eq!(&v[3..], &[0.0; 11]);
        }
    }

    #[test]
    fn distinct_constants_are_distinguishable_by_channel() {
        let block = assemble_time_block(
            &epoch_windows(|c| vec![c.index() as f64; 100]),
            100.0,
        )
        .unwrap();
        for ch in 0..9 {
            assert_eq!(block[ch * 14], ch as f64);
        }
    }

    #[test]
    fn block_equals_concatenation_of_per_channel_vectors() {
        let mut rng = StdRng::seed_from_u64(9);
        let mut raw = BTreeMap::new();
        for channel in ChannelId::all() {
            raw.insert(channel, (0..100).map(|_| rng.gen_range(-1.0..1.0)).collect::<Vec<f64>>());
        }
        let windows = epoch_windows(|c| raw[&c].clone());
        let block = assemble_time_block(&windows, 100.0).unwrap();
        let concat: Vec<f64> = ChannelId::all()
            .into_iter()
            .flat_map(|c| time_features(&windows[&c], 100.0).unwrap().values)
            .collect();
        assert_eq!(block, concat);
    }

    #[test]
    fn missing_channel_is_reported_by_name() {
        let mut windows = epoch_windows(|_| vec![0.0; 100]);
        let gone = ChannelId::new(Sensor::Gyroscope, Axis::Y);
        windows.remove(&gone);
        match assemble_time_block(&windows, 100.0).unwrap_err() {
            Error::MissingChannel(c) => assert_eq!(c, gone),
            other => panic!("expected missing channel, got {other:?}"),
        }
    }

    #[test]
    fn registry_names_are_stable() {
        let names = time_feature_names();
        assert_eq!(names.len(), 126);
        assert_eq!(names[0], "acc_x.mean");
        assert_eq!(names[13], "acc_x.d_iqr");
        assert_eq!(names[14], "acc_y.mean");
        assert_eq!(names[125], "rot_z.d_iqr");
    }
}
