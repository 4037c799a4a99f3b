use crate::error::{Error, Result};

/// Uniformly sampled scalar signal.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub values: Vec<f64>,
    pub dt: f64,
}

impl Series {
    pub fn new(values: Vec<f64>, dt: f64) -> Result<Self> {
        let s = Series { values, dt };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.values.is_empty() {
            return Err(Error::invalid("series must be non-empty".to_string()));
        }
        if !self.dt.is_finite() || self.dt <= 0.0 {
            return Err(Error::invalid(format!(
                "series dt must be positive, got {}",
                self.dt
            )));
        }
        if let Some(index) = self.values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite {
                context: "series values",
                index,
            });
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Ordered peak times of one signal and the inter-spike intervals between
/// them. Times are measured from the start of the analyzed series.
#[derive(Debug, Clone, PartialEq)]
pub struct SpikeTrain {
    pub peak_times: Vec<f64>,
    pub isis: Vec<f64>,
}

impl SpikeTrain {
    pub fn from_peak_times(peak_times: Vec<f64>) -> Result<Self> {
        for w in peak_times.windows(2) {
            if !(w[1] > w[0]) {
                return Err(Error::invalid(
                    "peak times must be strictly increasing".to_string(),
                ));
            }
        }
        let isis = peak_times.windows(2).map(|w| w[1] - w[0]).collect();
        Ok(SpikeTrain { peak_times, isis })
    }

    pub fn spike_count(&self) -> usize {
        self.peak_times.len()
    }
}

/// Gaussian-weighted moving average over a window of `window` samples.
///
/// The kernel standard deviation is (window - 1)/5 samples; even window
/// sizes are rounded up to the next odd integer so the kernel is symmetric.
/// At the boundaries the kernel is truncated and renormalized, so constants
/// are preserved everywhere and the output length equals the input length.
pub fn gaussian_smooth(s: &Series, window: usize) -> Result<Series> {
    s.validate()?;
    if window < 1 {
        return Err(Error::invalid("window must be at least 1".to_string()));
    }
    let effective = if window % 2 == 0 { window + 1 } else { window };
    let n = s.len();
    if effective > n {
        return Err(Error::invalid(format!(
            "window of {effective} samples exceeds series length {n}"
        )));
    }
    if effective == 1 {
        return Ok(s.clone());
    }

    let half = effective / 2;
    let sigma = (effective - 1) as f64 / 5.0;
    let kernel: Vec<f64> = (0..effective)
        .map(|j| {
            let z = (j as f64 - half as f64) / sigma;
            (-0.5 * z * z).exp()
        })
        .collect();
    let full_sum: f64 = kernel.iter().sum();

    let v = &s.values;
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        if k >= half && k + half < n {
            let seg = &v[k - half..=k + half];
            let dot: f64 = kernel.iter().zip(seg).map(|(w, x)| w * x).sum();
            out.push(dot / full_sum);
        } else {
            // Truncated boundary window, renormalized over the valid part.
            let lo = k.saturating_sub(half);
            let hi = (k + half).min(n - 1);
            let mut dot = 0.0;
            let mut wsum = 0.0;
            for idx in lo..=hi {
                let w = kernel[idx + half - k];
                dot += w * v[idx];
                wsum += w;
            }
            out.push(dot / wsum);
        }
    }
    Ok(Series {
        values: out,
        dt: s.dt,
    })
}

/// Mean absolute value of the series: the time-averaged |signal| as a
/// rectangle-rule integral divided by the window length.
pub fn amplitude(s: &Series) -> f64 {
    s.values.iter().map(|v| v.abs()).sum::<f64>() / s.len() as f64
}

/// Strict local maxima whose topographic prominence is at least
/// `min_prominence`, returned in time order.
///
/// The prominence of a peak is its height above the higher of the two
/// minima separating it from the nearest taller samples on each side (or
/// from the series ends where no taller sample exists).
pub fn detect_peaks(s: &Series, min_prominence: f64) -> SpikeTrain {
    let v = &s.values;
    let n = v.len();
    let mut peak_times = Vec::new();
    if n >= 3 {
        for k in 1..n - 1 {
            if v[k - 1] < v[k] && v[k] > v[k + 1] && prominence_at(v, k) >= min_prominence {
                peak_times.push(k as f64 * s.dt);
            }
        }
    }
    let isis = peak_times.windows(2).map(|w| w[1] - w[0]).collect();
    SpikeTrain { peak_times, isis }
}

/// Topographic prominence of the local maximum at index k.
fn prominence_at(v: &[f64], k: usize) -> f64 {
    let peak = v[k];
    let mut left_min = peak;
    let mut i = k;
    while i > 0 {
        i -= 1;
        if v[i] > peak {
            break;
        }
        if v[i] < left_min {
            left_min = v[i];
        }
    }
    let mut right_min = peak;
    let mut j = k;
    while j + 1 < v.len() {
        j += 1;
        if v[j] > peak {
            break;
        }
        if v[j] < right_min {
            right_min = v[j];
        }
    }
    peak - left_min.max(right_min)
}

/// Four-quadrant phase atan2(y, x) per sample.
///
/// Samples where x and y are both exactly zero carry the previous sample's
/// phase forward (zero at the start of the series).
pub fn phase(x: &Series, y: &Series) -> Result<Series> {
    if x.len() != y.len() {
        return Err(Error::invalid(format!(
            "phase inputs must have equal length ({} vs {})",
            x.len(),
            y.len()
        )));
    }
    if x.dt != y.dt {
        return Err(Error::invalid(
            "phase inputs must share the sample spacing".to_string(),
        ));
    }
    let mut out = Vec::with_capacity(x.len());
    let mut prev = 0.0;
    for (&xv, &yv) in x.values.iter().zip(&y.values) {
        let phi = if xv == 0.0 && yv == 0.0 {
            prev
        } else {
            yv.atan2(xv)
        };
        out.push(phi);
        prev = phi;
    }
    Ok(Series {
        values: out,
        dt: x.dt,
    })
}
