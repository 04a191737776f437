//! Deterministic synthetic sensor recordings.
//!
//! Each mode gets a per-channel spectral recipe: a stack of harmonics on a
//! mode-specific fundamental, plus Gaussian noise and a slow sinusoidal
//! drift. Harmonic phases are fixed by (mode, channel, harmonic) alone, so
//! changing the seed changes the noise realization but never the underlying
//! structure. The emitted text matches the ingest log format, letting
//! synthetic data flow through the production parsing path.

use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::channel::{Axis, ChannelId, Mode, Sensor};
use crate::error::{Error, Result};

/// Frequency of the slow drift component, shared by all recipes.
pub const DRIFT_FREQ_HZ: f64 = 0.12;

/// Spectral recipe for one channel: harmonic k has amplitude
/// `harmonics[k]` at frequency `(k + 1) * base_freq_hz`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRecipe {
    pub base_freq_hz: f64,
    pub harmonics: Vec<f64>,
    pub noise_sd: f64,
    pub drift_amp: f64,
}

impl ChannelRecipe {
    fn validate(&self, channel: ChannelId) -> Result<()> {
        let finite = self.base_freq_hz.is_finite()
            && self.noise_sd.is_finite()
            && self.drift_amp.is_finite()
            && self.harmonics.iter().all(|a| a.is_finite());
        if !finite || self.base_freq_hz <= 0.0 || self.noise_sd < 0.0 || self.drift_amp < 0.0 {
            return Err(Error::InvalidInput(format!(
                "invalid recipe for {channel}: base frequency must be positive, \
                 noise sd and drift amplitude non-negative, all values finite"
            )));
        }
        Ok(())
    }
}

/// One transport mode's full 9-channel recipe set.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeProfile {
    pub mode: Mode,
    pub channels: BTreeMap<ChannelId, ChannelRecipe>,
}

impl ModeProfile {
    fn validate(&self, rate_hz: f64) -> Result<()> {
        for channel in ChannelId::all() {
            let recipe = self.channels.get(&channel).ok_or_else(|| {
                Error::InvalidInput(format!("profile for {} lacks channel {channel}", self.mode))
            })?;
            recipe.validate(channel)?;
            if recipe.base_freq_hz >= rate_hz / 2.0 {
                return Err(Error::InvalidInput(format!(
                    "{channel} base frequency {} exceeds the Nyquist limit at {rate_hz} Hz",
                    recipe.base_freq_hz
                )));
            }
        }
        Ok(())
    }
}

/// A generated multi-channel recording with one label per 1-second epoch.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthRecording {
    pub rate_hz: f64,
    pub channels: BTreeMap<ChannelId, Vec<f64>>,
    pub labels: Vec<Mode>,
}

/// Deterministic phase in [0, tau) fixed by identity, not by seed.
fn phase(mode: Mode, channel: ChannelId, k: u64) -> f64 {
    let mut h = (mode as u64 + 1)
        .wrapping_mul(0x9E37_79B9_7F4A_7C15)
        .wrapping_add((channel.index() as u64) << 8)
        .wrapping_add(k);
    h ^= h >> 30;
    h = h.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    h ^= h >> 27;
    h = h.wrapping_mul(0x94D0_49BB_1331_11EB);
    h ^= h >> 31;
    (h >> 11) as f64 / (1u64 << 53) as f64 * TAU
}

/// Generates one mode's recording. Samples are truncated to whole epochs
/// so the labels cover everything emitted.
pub fn generate(
    profile: &ModeProfile,
    duration_s: f64,
    rate_hz: f64,
    seed: u64,
) -> Result<SynthRecording> {
    if !(rate_hz > 0.0) {
        return Err(Error::InvalidInput(format!(
            "rate_hz must be positive, got {rate_hz}"
        )));
    }
    if !(duration_s >= 1.0) {
        return Err(Error::InvalidInput(format!(
            "duration must cover at least one 1-second epoch, got {duration_s}"
        )));
    }
    profile.validate(rate_hz)?;

    let epoch_len = (rate_hz * 1.0).round() as usize;
    let n_epochs = ((duration_s * rate_hz).round() as usize) / epoch_len;
    let n = n_epochs * epoch_len;

    let mut channels = BTreeMap::new();
    for channel in ChannelId::all() {
        let recipe = &profile.channels[&channel];
        // One counter-mode stream per (mode, channel): seeds reshuffle the
        // noise while modes and channels stay mutually independent.
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream((profile.mode as u64) * 16 + channel.index() as u64);
        let normal = Normal::new(0.0, recipe.noise_sd)
            .map_err(|e| Error::InvalidInput(format!("noise sd: {e}")))?;

        let drift_phase = phase(profile.mode, channel, 977);
        let mut values = Vec::with_capacity(n);
        for i in 0..n {
            let t = i as f64 / rate_hz;
            let mut x = 0.0;
            for (k, &amp) in recipe.harmonics.iter().enumerate() {
                let f = recipe.base_freq_hz * (k + 1) as f64;
                x += amp * (TAU * f * t + phase(profile.mode, channel, k as u64)).sin();
            }
            x += recipe.drift_amp * (TAU * DRIFT_FREQ_HZ * t + drift_phase).sin();
            if recipe.noise_sd > 0.0 {
                x += normal.sample(&mut rng);
            }
            values.push(x);
        }
        channels.insert(channel, values);
    }

    Ok(SynthRecording {
        rate_hz,
        channels,
        labels: vec![profile.mode; n_epochs],
    })
}

/// Concatenates one recording per profile into a single labeled dataset.
pub fn generate_dataset(
    profiles: &[ModeProfile],
    epochs_per_mode: usize,
    rate_hz: f64,
    seed: u64,
) -> Result<SynthRecording> {
    if profiles.is_empty() || epochs_per_mode == 0 {
        return Err(Error::InvalidInput(
            "dataset needs at least one profile and one epoch per mode".into(),
        ));
    }
    let mut channels: BTreeMap<ChannelId, Vec<f64>> =
        ChannelId::all().into_iter().map(|c| (c, Vec::new())).collect();
    let mut labels = Vec::new();
    for profile in profiles {
        let part = generate(profile, epochs_per_mode as f64, rate_hz, seed)?;
        for (channel, mut values) in part.channels {
            channels.get_mut(&channel).unwrap().append(&mut values);
        }
        labels.extend(part.labels);
    }
    Ok(SynthRecording {
        rate_hz,
        channels,
        labels,
    })
}

/// Renders the recording in the ingest log format, channel-major.
/// Timestamps land on exact milliseconds when 1000 is a multiple of the
/// rate, which holds for the 100 Hz default.
pub fn write_log(recording: &SynthRecording) -> String {
    let period_ms = 1000.0 / recording.rate_hz;
    let mut out = String::from("# channel,timestamp_ms,value\n");
    for (channel, values) in &recording.channels {
        for (i, v) in values.iter().enumerate() {
            let ms = (i as f64 * period_ms).round() as u64;
            writeln!(out, "{channel},{ms},{v}").unwrap();
        }
    }
    out
}

/// Renders the per-epoch labels in the ingest sidecar format.
pub fn write_labels(recording: &SynthRecording) -> String {
    let mut out = String::from("# epoch_index,mode\n");
    for (epoch, mode) in recording.labels.iter().enumerate() {
        writeln!(out, "{epoch},{mode}").unwrap();
    }
    out
}

fn recipe(base: f64, harmonics: &[f64], scale: f64, noise_sd: f64, drift_amp: f64) -> ChannelRecipe {
    ChannelRecipe {
        base_freq_hz: base,
        harmonics: harmonics.iter().map(|a| a * scale).collect(),
        noise_sd,
        drift_amp,
    }
}

/// Built-in profiles for all five modes.
///
/// Locomotion modes are harmonic-rich at gait-like fundamentals; bus and
/// car are broadband noise plus drift, deliberately similar to each other.
/// All constants are fixture tuning, not measurements.
pub fn default_profiles() -> Vec<ModeProfile> {
    Mode::ALL
        .into_iter()
        .map(|mode| {
            let mut channels = BTreeMap::new();
            for channel in ChannelId::all() {
                let ax = match channel.axis {
                    Axis::X => 1.0,
                    Axis::Y => 0.8,
                    Axis::Z => 0.65,
                };
                let r = match (mode, channel.sensor) {
                    (Mode::Bike, Sensor::Accelerometer) => {
                        recipe(1.45, &[0.75, 0.10], ax, 0.09, 0.06)
                    }
                    (Mode::Bike, Sensor::Gyroscope) => recipe(1.45, &[0.50, 0.06], ax, 0.07, 0.05),
                    (Mode::Bike, Sensor::RotationVector) => {
                        recipe(1.45, &[0.015], ax, 0.002, 0.006)
                    }
                    (Mode::Walk, Sensor::Accelerometer) => {
                        recipe(1.9, &[1.0, 0.50, 0.22], ax, 0.12, 0.05)
                    }
                    (Mode::Walk, Sensor::Gyroscope) => recipe(1.9, &[0.70, 0.28], ax, 0.10, 0.04),
                    (Mode::Walk, Sensor::RotationVector) => {
                        recipe(1.9, &[0.02, 0.006], ax, 0.0025, 0.004)
                    }
                    (Mode::Run, Sensor::Accelerometer) => {
                        recipe(2.9, &[1.9, 0.85, 0.40], ax, 0.22, 0.07)
                    }
                    (Mode::Run, Sensor::Gyroscope) => recipe(2.9, &[1.15, 0.50], ax, 0.16, 0.05),
                    (Mode::Run, Sensor::RotationVector) => {
                        recipe(2.9, &[0.03, 0.01], ax, 0.003, 0.005)
                    }
                    (Mode::Bus, Sensor::Accelerometer) => recipe(0.30, &[0.06], ax, 0.26, 0.30),
                    (Mode::Bus, Sensor::Gyroscope) => recipe(0.30, &[0.04], ax, 0.20, 0.22),
                    (Mode::Bus, Sensor::RotationVector) => {
                        recipe(0.30, &[0.004], ax, 0.0045, 0.012)
                    }
                    // Car differs from bus only slightly on every channel,
                    // so telling them apart takes many weak features rather
                    // than one strong one.
                    (Mode::Car, Sensor::Accelerometer) => {
                        recipe(0.33, &[0.063], ax, 0.266, 0.285)
                    }
                    (Mode::Car, Sensor::Gyroscope) => recipe(0.33, &[0.041], ax, 0.205, 0.21),
                    (Mode::Car, Sensor::RotationVector) => {
                        recipe(0.33, &[0.0041], ax, 0.0046, 0.0115)
                    }
                };
                channels.insert(channel, r);
            }
            ModeProfile { mode, channels }
        })
        .collect()
}
