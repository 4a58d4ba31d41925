//! Coherence metrics from recorded trajectories: oscillation counts,
//! two-sided exponential envelope fits and single-exponential fits.

use alloc::format;
use alloc::vec::Vec;

// Unused when another crate links std and brings inherent float methods.
#[allow(unused_imports)]
use num_traits::Float;

use crate::engine::TrajectoryRecord;
use crate::error::{Error, Result};
use crate::linalg::Mat4;
use crate::state::basis;

/// Default noise band for zero-crossing detection.
pub const DEFAULT_HYSTERESIS: f64 = 1e-4;

/// Peak amplitudes whose relative spread is below this form a flat envelope.
const FLAT_ENVELOPE: f64 = 1e-6;

/// `P_gn`, `P_em`, `D = P_em - P_gn` and `S = P_em + P_gn` per record.
#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ObservableSeries {
    pub p_gn: Vec<f64>,
    pub p_em: Vec<f64>,
    pub d: Vec<f64>,
    pub s: Vec<f64>,
}

impl ObservableSeries {
    pub fn with_capacity(n: usize) -> Self {
        Self {
            p_gn: Vec::with_capacity(n),
            p_em: Vec::with_capacity(n),
            d: Vec::with_capacity(n),
            s: Vec::with_capacity(n),
        }
    }

    pub fn push(&mut self, rho: &Mat4) {
        let gn = rho[(basis::GN, basis::GN)].re;
        let em = rho[(basis::EM, basis::EM)].re;
        self.p_gn.push(gn);
        self.p_em.push(em);
        self.d.push(em - gn);
        self.s.push(em + gn);
    }

    pub fn len(&self) -> usize {
        self.p_gn.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p_gn.is_empty()
    }
}

/// Recomputes the observables from the stored snapshots.
pub fn extract_observables(tr: &TrajectoryRecord) -> Result<ObservableSeries> {
    if tr.states.is_empty() {
        return Err(Error::EmptyInput("trajectory"));
    }
    let mut out = ObservableSeries::with_capacity(tr.states.len());
    for rho in &tr.states {
        out.push(rho.matrix());
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OscillationCount {
    pub zero_crossings: usize,
    pub oscillation_count: usize,
}

/// Counts sign changes with a Schmitt trigger: the sign is only updated once
/// the series leaves the band `[-hysteresis, hysteresis]`.
pub fn count_oscillations(times: &[f64], series: &[f64], hysteresis: f64) -> Result<OscillationCount> {
    check_lengths(times, series)?;
    if !(hysteresis.is_finite() && hysteresis >= 0.0) {
        return Err(Error::Input(format!("hysteresis must be non-negative, got {hysteresis}")));
    }
    let crossings = crossing_indices(series, hysteresis).len();
    Ok(OscillationCount {
        zero_crossings: crossings,
        oscillation_count: crossings / 2,
    })
}

fn check_lengths(times: &[f64], series: &[f64]) -> Result<()> {
    if times.len() != series.len() {
        return Err(Error::Input(format!(
            "times and series lengths differ ({} vs {})",
            times.len(),
            series.len()
        )));
    }
    if times.len() < 2 {
        return Err(Error::Input("at least two samples are required".into()));
    }
    Ok(())
}

/// Indices at which the trigger flips.
fn crossing_indices(series: &[f64], hysteresis: f64) -> Vec<usize> {
    let mut state = 0i8;
    let mut out = Vec::new();
    for (i, &x) in series.iter().enumerate() {
        let s = if x > hysteresis {
            1
        } else if x < -hysteresis {
            -1
        } else {
            continue;
        };
        if state != 0 && s != state {
            out.push(i);
        }
        state = s;
    }
    out
}

/// Log-linear least squares `ln y = ln A - rate·t`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ExponentialFit {
    /// Positive for decay.
    pub rate: f64,
    /// Value of the fitted curve at t = 0.
    pub amplitude: f64,
    pub r_squared: f64,
    pub points: usize,
}

/// Ordinary least squares on centred data; returns slope, intercept, r².
fn line_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let (dx, dy) = (a - mx, b - my);
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let ss_res: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| {
            let r = b - (intercept + slope * a);
            r * r
        })
        .sum();
    // Relative to the data scale, a residual this small is an exact fit.
    let exact = ss_res <= 1e-24 * y.iter().map(|v| v * v).sum::<f64>().max(1.0);
    let r2 = if syy == 0.0 || exact {
        1.0
    } else {
        (1.0 - ss_res / syy).clamp(0.0, 1.0)
    };
    (slope, intercept, r2)
}

fn log_fit(t: &[f64], y: &[f64]) -> ExponentialFit {
    let ln: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let (slope, intercept, r2) = line_fit(t, &ln);
    ExponentialFit {
        rate: -slope,
        amplitude: intercept.exp(),
        r_squared: r2,
        points: t.len(),
    }
}

/// Fits `A·e^{-rate·t}` to a strictly positive series.
pub fn fit_single_exponential(times: &[f64], series: &[f64]) -> Result<ExponentialFit> {
    check_lengths(times, series)?;
    if let Some(i) = series.iter().position(|&v| !(v > 0.0 && v.is_finite())) {
        return Err(Error::Domain(format!(
            "sample {i} is {} but a single-exponential fit needs positive data; \
             use the envelope fit for oscillating series",
            series[i]
        )));
    }
    Ok(log_fit(times, series))
}

/// One side of a two-regime envelope.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EnvelopeSide {
    /// Positive for decay on the descending side and for growth on the
    /// ascending side.
    pub rate: f64,
    pub amplitude: f64,
    pub r_squared: f64,
    pub peaks: usize,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EnvelopeFit {
    pub descending: Option<EnvelopeSide>,
    pub ascending: Option<EnvelopeSide>,
    /// Time of the smallest peak.
    pub split_time: f64,
    pub peak_times: Vec<f64>,
    pub peak_values: Vec<f64>,
    /// Peaks dropped from the log fits for being non-positive.
    pub excluded_peaks: usize,
    /// All peaks have the same amplitude; the split is placed mid-sequence.
    pub degenerate: bool,
}

impl EnvelopeFit {
    pub fn descending_rate(&self) -> Option<f64> {
        self.descending.map(|s| s.rate)
    }

    pub fn ascending_rate(&self) -> Option<f64> {
        self.ascending.map(|s| s.rate)
    }
}

/// Strict 3-point maxima of `|series|`. Peaks closer than half the mean
/// zero-crossing spacing are merged, keeping the larger one.
pub fn find_envelope_peaks(times: &[f64], series: &[f64]) -> Vec<usize> {
    let a: Vec<f64> = series.iter().map(|v| v.abs()).collect();
    let raw: Vec<usize> = (1..a.len().saturating_sub(1))
        .filter(|&i| a[i] > a[i - 1] && a[i] > a[i + 1])
        .collect();
    let crossings = crossing_indices(series, 0.0);
    if crossings.len() < 2 {
        return raw;
    }
    let first = times[crossings[0]];
    let last = times[*crossings.last().unwrap()];
    let min_sep = 0.5 * (last - first) / (crossings.len() - 1) as f64;
    let mut kept: Vec<usize> = Vec::with_capacity(raw.len());
    for i in raw {
        match kept.last_mut() {
            Some(prev) if times[i] - times[*prev] < min_sep => {
                if a[i] > a[*prev] {
                    *prev = i;
                }
            }
            _ => kept.push(i),
        }
    }
    kept
}

/// Two-regime exponential fit to the peaks of `|series|`.
///
/// The peak sequence is split at its smallest amplitude. The peaks before it
/// give the descending rate and the peaks after it the ascending rate; the
/// split peak itself belongs to neither side. A side with fewer than two
/// usable peaks is reported as absent.
pub fn fit_exponential_envelope(times: &[f64], series: &[f64]) -> Result<EnvelopeFit> {
    check_lengths(times, series)?;
    let peaks = find_envelope_peaks(times, series);
    if peaks.len() < 2 {
        return Err(Error::Input(format!(
            "envelope fit needs at least two peaks of |series|, found {}",
            peaks.len()
        )));
    }
    let peak_times: Vec<f64> = peaks.iter().map(|&i| times[i]).collect();
    let peak_values: Vec<f64> = peaks.iter().map(|&i| series[i].abs()).collect();

    let max = peak_values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min = peak_values.iter().cloned().fold(f64::INFINITY, f64::min);
    let degenerate = max > 0.0 && (max - min) <= FLAT_ENVELOPE * max;
    let (desc_range, asc_range, split) = if degenerate {
        let mid = peaks.len() / 2;
        (0..mid, mid..peaks.len(), mid)
    } else {
        let m = peak_values
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .map(|(i, _)| i)
            .unwrap_or(0);
        (0..m, m + 1..peaks.len(), m)
    };

    let mut excluded = 0;
    let mut side = |range: core::ops::Range<usize>, sign: f64| {
        let (t, y): (Vec<f64>, Vec<f64>) = range
            .map(|i| (peak_times[i], peak_values[i]))
            .filter(|&(_, y)| {
                let ok = y > 0.0 && y.is_finite();
                if !ok {
                    excluded += 1;
                }
                ok
            })
            .unzip();
        (t.len() >= 2).then(|| {
            let f = log_fit(&t, &y);
            EnvelopeSide {
                rate: sign * f.rate,
                amplitude: f.amplitude,
                r_squared: f.r_squared,
                peaks: t.len(),
            }
        })
    };
    let descending = side(desc_range, 1.0);
    let ascending = side(asc_range, -1.0);
    Ok(EnvelopeFit {
        descending,
        ascending,
        split_time: peak_times[split.min(peaks.len() - 1)],
        peak_times,
        peak_values,
        excluded_peaks: excluded,
        degenerate,
    })
}

/// Summary metrics of one trajectory.
#[derive(Debug, Clone, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CoherenceReport {
    pub oscillation_count: usize,
    pub zero_crossings: usize,
    pub descending_rate: Option<f64>,
    pub ascending_rate: Option<f64>,
    pub split_time: Option<f64>,
    pub sum_decay_rate: Option<f64>,
    pub sum_amplitude: Option<f64>,
    pub r_squared_desc: Option<f64>,
    pub r_squared_asc: Option<f64>,
    pub r_squared_sum: Option<f64>,
    pub peak_times: Vec<f64>,
    pub excluded_peaks: usize,
    pub envelope_degenerate: bool,
    pub hysteresis: f64,
}

/// Oscillations and envelope of `D`, single-exponential fit of `S`. Fits
/// that cannot be performed leave their fields empty.
pub fn coherence_report(times: &[f64], obs: &ObservableSeries, hysteresis: f64) -> Result<CoherenceReport> {
    if times.is_empty() || obs.is_empty() {
        return Err(Error::EmptyInput("observable series"));
    }
    let osc = count_oscillations(times, &obs.d, hysteresis)?;
    let mut report = CoherenceReport {
        oscillation_count: osc.oscillation_count,
        zero_crossings: osc.zero_crossings,
        hysteresis,
        ..Default::default()
    };
    if let Ok(env) = fit_exponential_envelope(times, &obs.d) {
        report.descending_rate = env.descending_rate();
        report.ascending_rate = env.ascending_rate();
        report.r_squared_desc = env.descending.map(|s| s.r_squared);
        report.r_squared_asc = env.ascending.map(|s| s.r_squared);
        report.split_time = Some(env.split_time);
        report.peak_times = env.peak_times;
        report.excluded_peaks = env.excluded_peaks;
        report.envelope_degenerate = env.degenerate;
    }
    if let Ok(fit) = fit_single_exponential(times, &obs.s) {
        report.sum_decay_rate = Some(fit.rate);
        report.sum_amplitude = Some(fit.amplitude);
        report.r_squared_sum = Some(fit.r_squared);
    }
    Ok(report)
}

pub fn trajectory_report(tr: &TrajectoryRecord, hysteresis: f64) -> Result<CoherenceReport> {
    coherence_report(&tr.times, &tr.observables, hysteresis)
}
