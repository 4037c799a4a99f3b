use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::{trial_metrics, trial_spike_train, CoherenceMetrics, MetricOptions};
use crate::model::{build_motif, MotifKind, NetworkConfig};
use crate::rng::trial_seed;
use crate::sde::{analysis_window, simulate, SimParams};

/// Mean, standard error, and the number of trials the metric was defined in.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricStat {
    pub mean: f64,
    pub stderr: f64,
    pub n_defined: usize,
}

/// Ensemble-averaged metrics at one parameter point. Metrics that were
/// undefined in every trial are None; partially defined metrics average the
/// defined trials and report the count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnsembleMetrics {
    pub n_trials: usize,
    pub amplitudes: [MetricStat; 3],
    pub sigma: Option<MetricStat>,
    pub gamma_pc: Option<MetricStat>,
    pub r_cv: Option<MetricStat>,
    pub mean_spike_count: f64,
}

fn stat_of(values: &[f64]) -> Option<MetricStat> {
    if values.is_empty() {
        return None;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let stderr = if values.len() < 2 {
        0.0
    } else {
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
        (var / n).sqrt()
    };
    Some(MetricStat {
        mean,
        stderr,
        n_defined: values.len(),
    })
}

/// Reduces per-trial bundles in trial order; the result is independent of
/// how the trials were scheduled.
pub fn ensemble_stats(trials: &[CoherenceMetrics]) -> EnsembleMetrics {
    let collect_amp = |i: usize| -> Vec<f64> { trials.iter().map(|m| m.amplitudes[i]).collect() };
    let amplitudes = [
        stat_of(&collect_amp(0)).expect("non-empty ensemble"),
        stat_of(&collect_amp(1)).expect("non-empty ensemble"),
        stat_of(&collect_amp(2)).expect("non-empty ensemble"),
    ];
    let sigmas: Vec<f64> = trials.iter().filter_map(|m| m.sigma).collect();
    let gammas: Vec<f64> = trials.iter().map(|m| m.gamma_pc).collect();
    let rs: Vec<f64> = trials.iter().filter_map(|m| m.r_cv).collect();
    let mean_spike_count =
        trials.iter().map(|m| m.spike_count as f64).sum::<f64>() / trials.len() as f64;
    EnsembleMetrics {
        n_trials: trials.len(),
        amplitudes,
        sigma: stat_of(&sigmas),
        gamma_pc: stat_of(&gammas),
        r_cv: stat_of(&rs),
        mean_spike_count,
    }
}

/// Runs the trials of one contiguous index range in parallel.
///
/// Trial `t` uses the seed derived from (base_seed, t), so disjoint ranges
/// produce independent streams and concatenating range results equals one
/// big run: pooling trials 0..100 and 100..200 is bit-identical to 0..200.
pub fn collect_trials(
    cfg: &NetworkConfig,
    sp: &SimParams,
    trials: std::ops::Range<u64>,
    base_seed: u64,
    opts: &MetricOptions,
) -> Result<Vec<CoherenceMetrics>> {
    let outcomes: Vec<Result<CoherenceMetrics>> = trials
        .into_par_iter()
        .map(|t| {
            let sp_t = SimParams {
                seed: trial_seed(base_seed, t),
                ..*sp
            };
            let traj = simulate(cfg, &sp_t)?;
            trial_metrics(&traj, opts)
        })
        .collect();
    // Surface the lowest-indexed failure so errors are deterministic too.
    outcomes.into_iter().collect()
}

/// Ensemble mean and standard error of every metric at one parameter point.
pub fn ensemble_average(
    cfg: &NetworkConfig,
    sp: &SimParams,
    n_trials: usize,
    base_seed: u64,
    opts: &MetricOptions,
) -> Result<EnsembleMetrics> {
    if n_trials < 1 {
        return Err(Error::invalid("n_trials must be at least 1".to_string()));
    }
    let trials = collect_trials(cfg, sp, 0..n_trials as u64, base_seed, opts)?;
    Ok(ensemble_stats(&trials))
}

/// Which scalar parameter a sweep axis varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    Delta1,
    CouplingD,
    Lambda0,
}

impl SweepParameter {
    pub fn as_str(&self) -> &'static str {
        match self {
            SweepParameter::Delta1 => "delta1",
            SweepParameter::CouplingD => "coupling_d",
            SweepParameter::Lambda0 => "lambda0",
        }
    }
}

/// Grid definition: an explicit list or a generated linear/log range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum GridSpec {
    Explicit { points: Vec<f64> },
    Linear { lo: f64, hi: f64, n: usize },
    Log { lo: f64, hi: f64, n: usize },
}

impl GridSpec {
    pub fn points(&self) -> Result<Vec<f64>> {
        let pts = match self {
            GridSpec::Explicit { points } => points.clone(),
            GridSpec::Linear { lo, hi, n } => {
                check_range(*lo, *hi, *n)?;
                if *n == 1 {
                    vec![*lo]
                } else {
                    (0..*n)
                        .map(|k| lo + (hi - lo) * k as f64 / (*n as f64 - 1.0))
                        .collect()
                }
            }
            GridSpec::Log { lo, hi, n } => {
                check_range(*lo, *hi, *n)?;
                if *lo <= 0.0 {
                    return Err(Error::invalid(format!(
                        "log grid requires a positive lower bound, got {lo}"
                    )));
                }
                if *n == 1 {
                    vec![*lo]
                } else {
                    let ratio = (hi / lo).ln();
                    (0..*n)
                        .map(|k| lo * (ratio * k as f64 / (*n as f64 - 1.0)).exp())
                        .collect()
                }
            }
        };
        if pts.is_empty() {
            return Err(Error::invalid("grid must be non-empty".to_string()));
        }
        if pts.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("grid points must be finite".to_string()));
        }
        if pts.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::invalid(
                "grid points must be strictly increasing".to_string(),
            ));
        }
        Ok(pts)
    }
}

fn check_range(lo: f64, hi: f64, n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::invalid("grid point count must be positive".to_string()));
    }
    if !lo.is_finite() || !hi.is_finite() || (n > 1 && hi <= lo) {
        return Err(Error::invalid(format!(
            "grid bounds must be finite with hi > lo, got [{lo}, {hi}]"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepAxis {
    pub parameter: SweepParameter,
    pub grid: GridSpec,
}

/// Full description of a one- or two-axis ensemble sweep.
///
/// The per-trial seeds depend only on (base_seed, trial index), so every
/// grid point sees the same noise realizations: curves at different points
/// (and for different motifs run with the same base_seed) can be compared
/// with common random numbers. `sim.seed` is ignored here.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub network: NetworkConfig,
    pub sim: SimParams,
    /// Required when an axis varies coupling_d: the motif rebuilt at each
    /// grid value.
    pub motif: Option<MotifKind>,
    /// One axis, or two with the inner (second) axis varying delta1.
    pub axes: Vec<SweepAxis>,
    pub n_trials: usize,
    pub base_seed: u64,
    pub options: MetricOptions,
    /// Apply a 3-point moving median before locating optima.
    pub smooth_optima: bool,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        self.network.validate()?;
        self.sim.validate()?;
        self.options.validate()?;
        if self.n_trials < 1 {
            return Err(Error::invalid("n_trials must be at least 1".to_string()));
        }
        if self.axes.is_empty() || self.axes.len() > 2 {
            return Err(Error::invalid(format!(
                "sweeps take one or two axes, got {}",
                self.axes.len()
            )));
        }
        if self.axes.len() == 2 {
            if self.axes[0].parameter == self.axes[1].parameter {
                return Err(Error::invalid("sweep axes must vary distinct parameters".to_string()));
            }
            if self.axes[1].parameter != SweepParameter::Delta1 {
                return Err(Error::invalid(
                    "two-axis sweeps vary delta1 on the inner (second) axis".to_string(),
                ));
            }
        }
        if self
            .axes
            .iter()
            .any(|a| a.parameter == SweepParameter::CouplingD)
            && self.motif.is_none()
        {
            return Err(Error::invalid(
                "sweeping coupling_d requires a motif kind to rebuild the network".to_string(),
            ));
        }
        for axis in &self.axes {
            axis.grid.points()?;
        }
        Ok(())
    }

    fn config_at(&self, assignments: &[(SweepParameter, f64)]) -> Result<NetworkConfig> {
        let mut cfg = self.network;
        for (param, value) in assignments {
            match param {
                SweepParameter::Delta1 => {
                    if !value.is_finite() || *value < 0.0 {
                        return Err(Error::invalid(format!(
                            "delta1 must be non-negative, got {value}"
                        )));
                    }
                    cfg.noise_intensities[0] = *value;
                }
                SweepParameter::CouplingD => {
                    let kind = self.motif.ok_or_else(|| {
                        Error::invalid("sweeping coupling_d requires a motif kind".to_string())
                    })?;
                    cfg.coupling = build_motif(kind, *value)?;
                }
                SweepParameter::Lambda0 => {
                    cfg.oscillator.lambda0 = *value;
                }
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Metrics optima are located for, with their optimization sense.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricKind {
    Sigma,
    GammaPc,
    RCv,
}

impl MetricKind {
    pub const ALL: [MetricKind; 3] = [MetricKind::Sigma, MetricKind::GammaPc, MetricKind::RCv];

    pub fn as_str(&self) -> &'static str {
        match self {
            MetricKind::Sigma => "sigma",
            MetricKind::GammaPc => "gamma_pc",
            MetricKind::RCv => "r_cv",
        }
    }

    pub fn sense(&self) -> OptimumSense {
        match self {
            MetricKind::Sigma | MetricKind::RCv => OptimumSense::Minimize,
            MetricKind::GammaPc => OptimumSense::Maximize,
        }
    }

    fn extract(&self, m: &EnsembleMetrics) -> Option<f64> {
        match self {
            MetricKind::Sigma => m.sigma.map(|s| s.mean),
            MetricKind::GammaPc => m.gamma_pc.map(|s| s.mean),
            MetricKind::RCv => m.r_cv.map(|s| s.mean),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OptimumSense {
    Minimize,
    Maximize,
}

/// Location and raw ensemble-mean value of one located optimum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Optimum {
    pub x: f64,
    pub value: f64,
}

/// Optimum of one metric along the delta1 axis, for one slice of the outer
/// axis (slice is None for one-axis sweeps). The optimum itself is None
/// when the metric was undefined across the whole curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimumRecord {
    pub metric: MetricKind,
    pub slice: Option<f64>,
    pub optimum: Option<Optimum>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub parameter: SweepParameter,
    pub values: Vec<f64>,
}

/// Grid of ensemble averages plus located optima. Points are stored
/// row-major with the first axis outermost.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub axes: Vec<Axis>,
    pub points: Vec<EnsembleMetrics>,
    pub optima: Vec<OptimumRecord>,
}

impl SweepResult {
    /// Point at (outer index i, inner index j) of a two-axis sweep.
    pub fn point(&self, i: usize, j: usize) -> &EnsembleMetrics {
        assert_eq!(self.axes.len(), 2);
        &self.points[i * self.axes[1].values.len() + j]
    }

    /// Ensemble-mean curve of one metric along the only axis (1D sweeps).
    pub fn metric_curve(&self, metric: MetricKind) -> Vec<Option<f64>> {
        assert_eq!(self.axes.len(), 1);
        self.points.iter().map(|p| metric.extract(p)).collect()
    }
}

fn median3(a: f64, b: f64, c: f64) -> f64 {
    a.min(b).max(a.max(b).min(c))
}

/// Locates the extreme value of a curve over its grid.
///
/// Undefined points are skipped. With `smooth` set (the default in sweeps),
/// a 3-point moving median over the defined points suppresses Monte-Carlo
/// jitter before the scan; the reported value is the raw curve value at the
/// located grid point. Ties break toward the smaller x.
pub fn find_optimum(
    xs: &[f64],
    ys: &[Option<f64>],
    sense: OptimumSense,
    smooth: bool,
) -> Result<Optimum> {
    if xs.len() != ys.len() {
        return Err(Error::invalid(
            "optimum curve coordinates must have equal length".to_string(),
        ));
    }
    let defined: Vec<(f64, f64)> = xs
        .iter()
        .zip(ys)
        .filter_map(|(x, y)| y.map(|v| (*x, v)))
        .collect();
    if defined.is_empty() {
        return Err(Error::NoOptimum(
            "metric undefined at every grid point".to_string(),
        ));
    }
    let raw: Vec<f64> = defined.iter().map(|(_, v)| *v).collect();
    let scan: Vec<f64> = if smooth && raw.len() >= 3 {
        let mut s = raw.clone();
        for k in 1..raw.len() - 1 {
            s[k] = median3(raw[k - 1], raw[k], raw[k + 1]);
        }
        s
    } else {
        raw.clone()
    };
    let mut best = 0;
    for k in 1..scan.len() {
        let better = match sense {
            OptimumSense::Minimize => scan[k] < scan[best],
            OptimumSense::Maximize => scan[k] > scan[best],
        };
        if better {
            best = k;
        }
    }
    Ok(Optimum {
        x: defined[best].0,
        value: raw[best],
    })
}

fn optima_for_curve(
    xs: &[f64],
    points: &[EnsembleMetrics],
    slice: Option<f64>,
    smooth: bool,
) -> Vec<OptimumRecord> {
    MetricKind::ALL
        .iter()
        .map(|metric| {
            let ys: Vec<Option<f64>> = points.iter().map(|p| metric.extract(p)).collect();
            let optimum = match find_optimum(xs, &ys, metric.sense(), smooth) {
                Ok(opt) => Some(opt),
                Err(Error::NoOptimum(_)) => None,
                Err(e) => unreachable!("optimum scan cannot fail otherwise: {e}"),
            };
            OptimumRecord {
                metric: *metric,
                slice,
                optimum,
            }
        })
        .collect()
}

fn run_grid(spec: &SweepSpec, configs: &[NetworkConfig]) -> Result<Vec<EnsembleMetrics>> {
    let per_point: Vec<Result<Vec<CoherenceMetrics>>> = configs
        .par_iter()
        .map(|cfg| {
            collect_trials(
                cfg,
                &spec.sim,
                0..spec.n_trials as u64,
                spec.base_seed,
                &spec.options,
            )
        })
        .collect();
    per_point
        .into_iter()
        .map(|r| r.map(|trials| ensemble_stats(&trials)))
        .collect()
}

/// Sweeps one parameter axis, attaching per-metric optima.
pub fn sweep_1d(spec: &SweepSpec) -> Result<SweepResult> {
    spec.validate()?;
    if spec.axes.len() != 1 {
        return Err(Error::invalid("sweep_1d takes exactly one axis".to_string()));
    }
    let param = spec.axes[0].parameter;
    let xs = spec.axes[0].grid.points()?;
    let configs: Vec<NetworkConfig> = xs
        .iter()
        .map(|x| spec.config_at(&[(param, *x)]))
        .collect::<Result<_>>()?;
    let points = run_grid(spec, &configs)?;
    let optima = optima_for_curve(&xs, &points, None, spec.smooth_optima);
    Ok(SweepResult {
        axes: vec![Axis {
            parameter: param,
            values: xs,
        }],
        points,
        optima,
    })
}

/// Sweeps an outer parameter against the delta1 axis, locating per-slice
/// optima along delta1 (the curves behind contour maps and optimum-vs-d
/// plots).
pub fn sweep_2d(spec: &SweepSpec) -> Result<SweepResult> {
    spec.validate()?;
    if spec.axes.len() != 2 {
        return Err(Error::invalid("sweep_2d takes exactly two axes".to_string()));
    }
    let outer_param = spec.axes[0].parameter;
    let inner_param = spec.axes[1].parameter;
    let outer = spec.axes[0].grid.points()?;
    let inner = spec.axes[1].grid.points()?;
    let mut configs = Vec::with_capacity(outer.len() * inner.len());
    for o in &outer {
        for i in &inner {
            configs.push(spec.config_at(&[(outer_param, *o), (inner_param, *i)])?);
        }
    }
    let points = run_grid(spec, &configs)?;
    let mut optima = Vec::with_capacity(outer.len() * MetricKind::ALL.len());
    for (oi, o) in outer.iter().enumerate() {
        let slice = &points[oi * inner.len()..(oi + 1) * inner.len()];
        optima.extend(optima_for_curve(&inner, slice, Some(*o), spec.smooth_optima));
    }
    Ok(SweepResult {
        axes: vec![
            Axis {
                parameter: outer_param,
                values: outer,
            },
            Axis {
                parameter: inner_param,
                values: inner,
            },
        ],
        points,
        optima,
    })
}

/// Noise-averaged summary of one lambda0 slice: the metric means across the
/// delta1 grid and the located optima.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LambdaSummary {
    pub lambda0: f64,
    pub sigma_noise_avg: Option<f64>,
    pub sigma_points: usize,
    pub r_noise_avg: Option<f64>,
    pub r_points: usize,
    pub sigma_opt: Option<Optimum>,
    pub r_opt: Option<Optimum>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LambdaSweepResult {
    pub sweep: SweepResult,
    pub summary: Vec<LambdaSummary>,
}

/// Sweeps lambda0 against delta1 and reduces each lambda0 slice to its
/// noise-averaged sigma and R plus their optima over the delta1 grid.
pub fn sweep_lambda(spec: &SweepSpec) -> Result<LambdaSweepResult> {
    spec.validate()?;
    if spec.axes.len() != 2
        || spec.axes[0].parameter != SweepParameter::Lambda0
        || spec.axes[1].parameter != SweepParameter::Delta1
    {
        return Err(Error::invalid(
            "lambda sweeps take axes (lambda0, delta1)".to_string(),
        ));
    }
    if spec.axes[0].grid.points()?.iter().any(|l| *l >= 0.0) {
        return Err(Error::invalid(
            "lambda0 grid must be strictly negative (excitable regime)".to_string(),
        ));
    }
    let sweep = sweep_2d(spec)?;
    let lambdas = sweep.axes[0].values.clone();
    let deltas = sweep.axes[1].values.clone();
    let mut summary = Vec::with_capacity(lambdas.len());
    for (li, lambda0) in lambdas.iter().enumerate() {
        let slice = &sweep.points[li * deltas.len()..(li + 1) * deltas.len()];
        let sigmas: Vec<f64> = slice.iter().filter_map(|p| p.sigma.map(|s| s.mean)).collect();
        let rs: Vec<f64> = slice.iter().filter_map(|p| p.r_cv.map(|s| s.mean)).collect();
        let find = |metric: MetricKind| -> Option<Optimum> {
            let ys: Vec<Option<f64>> = slice.iter().map(|p| metric.extract(p)).collect();
            find_optimum(&deltas, &ys, metric.sense(), spec.smooth_optima).ok()
        };
        summary.push(LambdaSummary {
            lambda0: *lambda0,
            sigma_noise_avg: (!sigmas.is_empty())
                .then(|| sigmas.iter().sum::<f64>() / sigmas.len() as f64),
            sigma_points: sigmas.len(),
            r_noise_avg: (!rs.is_empty()).then(|| rs.iter().sum::<f64>() / rs.len() as f64),
            r_points: rs.len(),
            sigma_opt: find(MetricKind::Sigma),
            r_opt: find(MetricKind::RCv),
        });
    }
    Ok(LambdaSweepResult { sweep, summary })
}

/// Histogram bin layout: a bin count over an explicit range, or over the
/// pooled data range when none is given.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BinSpec {
    pub count: usize,
    pub range: Option<(f64, f64)>,
}

impl BinSpec {
    pub fn validate(&self) -> Result<()> {
        if self.count < 2 {
            return Err(Error::invalid("density needs at least 2 bins".to_string()));
        }
        if let Some((lo, hi)) = self.range {
            if !lo.is_finite() || !hi.is_finite() || hi <= lo {
                return Err(Error::invalid(format!(
                    "density range must be finite with hi > lo, got [{lo}, {hi}]"
                )));
            }
        }
        Ok(())
    }
}

/// Normalized histogram of pooled inter-spike intervals at one parameter
/// point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsiDensity {
    pub bin_edges: Vec<f64>,
    pub densities: Vec<f64>,
    /// Total ISIs pooled across trials.
    pub pooled_isis: usize,
    /// ISIs inside the histogram range (the normalization population).
    pub binned_isis: usize,
}

impl IsiDensity {
    /// Largest single-bin probability mass (density times bin width).
    pub fn modal_mass(&self) -> f64 {
        self.densities
            .iter()
            .zip(self.bin_edges.windows(2))
            .map(|(d, e)| d * (e[1] - e[0]))
            .fold(0.0, f64::max)
    }
}

/// Histograms a pooled ISI sample into a unit-integral density.
///
/// With an explicit range, intervals outside it are dropped and the density
/// normalizes over the retained ones.
pub fn density_from_isis(isis: &[f64], bins: &BinSpec) -> Result<IsiDensity> {
    bins.validate()?;
    if isis.is_empty() {
        return Err(Error::NoSpikes);
    }
    let (mut lo, mut hi) = bins.range.unwrap_or_else(|| {
        let lo = isis.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = isis.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        (lo, hi)
    });
    if lo == hi {
        // All intervals identical; widen so one interior bin holds them.
        lo -= 0.5;
        hi += 0.5;
    }
    let n = bins.count;
    let width = (hi - lo) / n as f64;
    let mut counts = vec![0usize; n];
    let mut retained = 0usize;
    for &isi in isis {
        if isi < lo || isi > hi {
            continue;
        }
        let k = (((isi - lo) / width) as usize).min(n - 1);
        counts[k] += 1;
        retained += 1;
    }
    if retained == 0 {
        return Err(Error::NoSpikes);
    }
    let densities = counts
        .iter()
        .map(|c| *c as f64 / (retained as f64 * width))
        .collect();
    let bin_edges = (0..=n).map(|k| lo + width * k as f64).collect();
    Ok(IsiDensity {
        bin_edges,
        densities,
        pooled_isis: isis.len(),
        binned_isis: retained,
    })
}

/// Pools node-3 ISIs across an ensemble and histograms them.
pub fn isi_density(
    cfg: &NetworkConfig,
    sp: &SimParams,
    n_trials: usize,
    base_seed: u64,
    opts: &MetricOptions,
    bins: &BinSpec,
) -> Result<IsiDensity> {
    if n_trials < 1 {
        return Err(Error::invalid("n_trials must be at least 1".to_string()));
    }
    opts.validate()?;
    bins.validate()?;
    let per_trial: Vec<Result<Vec<f64>>> = (0..n_trials as u64)
        .into_par_iter()
        .map(|t| {
            let sp_t = SimParams {
                seed: trial_seed(base_seed, t),
                ..*sp
            };
            let traj = simulate(cfg, &sp_t)?;
            let win = analysis_window(&traj)?;
            Ok(trial_spike_train(&win, opts)?.isis)
        })
        .collect();
    let mut pooled = Vec::new();
    for isis in per_trial {
        pooled.extend(isis?);
    }
    density_from_isis(&pooled, bins)
}
