use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sde::{analysis_window, Trajectory};
use crate::signal::{amplitude, detect_peaks, gaussian_smooth, phase, Series, SpikeTrain};

/// Knobs of the per-trial analysis pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MetricOptions {
    /// Gaussian smoothing window (samples) applied to x3 before peak
    /// detection.
    pub filter_window: usize,
    /// Relative part of the peak-prominence gate: this factor times the
    /// mean |filtered x3| of the trial.
    pub prominence_factor: f64,
    /// Absolute part of the peak-prominence gate. The effective gate is the
    /// larger of the relative and absolute parts.
    pub prominence_floor: f64,
    /// When set, the spread and phase-coherence measures also receive
    /// filtered inputs (by default only peak detection does).
    pub filter_measure_inputs: bool,
    /// Nodes whose time-averaged radius falls below this are treated as
    /// quiescent; the spread measure is then undefined for the trial.
    pub amplitude_epsilon: f64,
}

impl Default for MetricOptions {
    /// The default gate is a small absolute floor with no relative part:
    /// every resolved cycle of an active trajectory counts as a spike,
    /// while the sub-1e-4 numerical ringing of decayed trajectories is
    /// rejected. A purely relative gate cannot draw that line because it
    /// scales away together with the signal.
    fn default() -> Self {
        MetricOptions {
            filter_window: 100,
            prominence_factor: 0.0,
            prominence_floor: 1e-4,
            filter_measure_inputs: false,
            amplitude_epsilon: 1e-6,
        }
    }
}

impl MetricOptions {
    pub fn validate(&self) -> Result<()> {
        if self.filter_window < 1 {
            return Err(Error::invalid("filter_window must be at least 1".to_string()));
        }
        for (name, v) in [
            ("prominence_factor", self.prominence_factor),
            ("prominence_floor", self.prominence_floor),
            ("amplitude_epsilon", self.amplitude_epsilon),
        ] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::invalid(format!(
                    "{name} must be finite and non-negative, got {v}"
                )));
            }
        }
        Ok(())
    }
}

/// Per-trial bundle of the three coherence statistics and the node
/// amplitudes they are normalized by.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoherenceMetrics {
    /// Time-averaged oscillation radius of each node over the analysis
    /// window.
    pub amplitudes: [f64; 3],
    /// Root-mean-square deviation of the amplitude-normalized x-signals;
    /// None when some node is quiescent (normalization undefined).
    pub sigma: Option<f64>,
    /// Mean phase coherence of the node-1/node-3 phase difference, in [0, 1].
    pub gamma_pc: f64,
    /// Coefficient of variation of node 3's inter-spike intervals; None when
    /// fewer than three spikes were detected.
    pub r_cv: Option<f64>,
    /// Number of detected spikes of node 3.
    pub spike_count: usize,
}

/// Root-mean-square deviation of amplitude-normalized signals.
///
/// Per sample, sigma_t is the population standard deviation of
/// { x_i(t)/A_i : i = 1..3 }; the result is the time average of sigma_t over
/// the series. The variance is evaluated as the mean squared deviation from
/// the sample mean, which is algebraically the textbook
/// mean-square-minus-squared-mean but does not cancel catastrophically when
/// the three signals coincide.
pub fn rms_deviation(xs: &[Series; 3], amplitudes: &[f64; 3]) -> Result<f64> {
    for (i, a) in amplitudes.iter().enumerate() {
        if !a.is_finite() || *a <= 0.0 {
            return Err(Error::degenerate(format!(
                "amplitude of node {} is {a}; normalization undefined",
                i + 1
            )));
        }
    }
    let n = xs[0].len();
    if xs.iter().any(|s| s.len() != n) || n == 0 {
        return Err(Error::invalid(
            "spread inputs must be non-empty series of equal length".to_string(),
        ));
    }
    let inv = [
        1.0 / amplitudes[0],
        1.0 / amplitudes[1],
        1.0 / amplitudes[2],
    ];
    let mut acc = 0.0;
    for k in 0..n {
        let u = [
            xs[0].values[k] * inv[0],
            xs[1].values[k] * inv[1],
            xs[2].values[k] * inv[2],
        ];
        let mean = (u[0] + u[1] + u[2]) / 3.0;
        let d = [u[0] - mean, u[1] - mean, u[2] - mean];
        let var = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]) / 3.0;
        acc += var.sqrt();
    }
    Ok(acc / n as f64)
}

/// Mean phase coherence of the phase difference phi1 - phi3: the resultant
/// length of the unit vectors at each sample's phase difference. 1 means
/// locked, 0 means incoherent.
pub fn mean_phase_coherence(phi1: &Series, phi3: &Series) -> Result<f64> {
    if phi1.len() != phi3.len() || phi1.is_empty() {
        return Err(Error::invalid(
            "phase series must be non-empty and of equal length".to_string(),
        ));
    }
    let n = phi1.len() as f64;
    let mut sum_sin = 0.0;
    let mut sum_cos = 0.0;
    for (&a, &b) in phi1.values.iter().zip(&phi3.values) {
        let (s, c) = (a - b).sin_cos();
        sum_sin += s;
        sum_cos += c;
    }
    let gamma = ((sum_sin / n).powi(2) + (sum_cos / n).powi(2)).sqrt();
    Ok(gamma.clamp(0.0, 1.0))
}

/// Coefficient of variation of the inter-spike intervals.
///
/// Both moments use 1/(K-1) weights over the K-1 intervals of a K-spike
/// train: R = sqrt(mean(ISI^2) - mean(ISI)^2) / mean(ISI). Returns None for
/// fewer than two intervals.
pub fn cv_isi(train: &SpikeTrain) -> Option<f64> {
    let isis = &train.isis;
    if isis.len() < 2 {
        return None;
    }
    let n = isis.len() as f64;
    let mean = isis.iter().sum::<f64>() / n;
    let mean_sq = isis.iter().map(|v| v * v).sum::<f64>() / n;
    let var = (mean_sq - mean * mean).max(0.0);
    Some(var.sqrt() / mean)
}

/// Smooths node 3's x-signal and extracts its spike train using the
/// prominence gate from `opts`.
pub fn trial_spike_train(window: &Trajectory, opts: &MetricOptions) -> Result<SpikeTrain> {
    let x3 = window.x_series(2);
    let filtered = gaussian_smooth(&x3, opts.filter_window)?;
    let gate = (opts.prominence_factor * amplitude(&filtered)).max(opts.prominence_floor);
    Ok(detect_peaks(&filtered, gate))
}

/// Evaluates all coherence statistics for one trajectory over its analysis
/// window.
pub fn trial_metrics(traj: &Trajectory, opts: &MetricOptions) -> Result<CoherenceMetrics> {
    opts.validate()?;
    let win = analysis_window(traj)?;

    let amplitudes = [
        series_mean(&win.radius_series(0)),
        series_mean(&win.radius_series(1)),
        series_mean(&win.radius_series(2)),
    ];

    let maybe_filter = |s: Series| -> Result<Series> {
        if opts.filter_measure_inputs {
            gaussian_smooth(&s, opts.filter_window)
        } else {
            Ok(s)
        }
    };

    let sigma = if amplitudes.iter().any(|a| *a <= opts.amplitude_epsilon) {
        None
    } else {
        let xs = [
            maybe_filter(win.x_series(0))?,
            maybe_filter(win.x_series(1))?,
            maybe_filter(win.x_series(2))?,
        ];
        Some(rms_deviation(&xs, &amplitudes)?)
    };

    let phi1 = phase(
        &maybe_filter(win.x_series(0))?,
        &maybe_filter(win.y_series(0))?,
    )?;
    let phi3 = phase(
        &maybe_filter(win.x_series(2))?,
        &maybe_filter(win.y_series(2))?,
    )?;
    let gamma_pc = mean_phase_coherence(&phi1, &phi3)?;

    let train = trial_spike_train(&win, opts)?;
    let r_cv = cv_isi(&train);

    Ok(CoherenceMetrics {
        amplitudes,
        sigma,
        gamma_pc,
        r_cv,
        spike_count: train.spike_count(),
    })
}

fn series_mean(s: &Series) -> f64 {
    s.values.iter().sum::<f64>() / s.len() as f64
}
