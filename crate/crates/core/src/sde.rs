use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{drift_unchecked, NetworkConfig, State, N_NODES};
use crate::rng::{standard_normal, STREAM_INIT, STREAM_NOISE};
use crate::signal::Series;

/// Integration and windowing parameters for one trial.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimParams {
    /// Time step of the Euler-Maruyama scheme.
    pub dt: f64,
    /// Total simulated time; the trajectory covers [0, t_end].
    pub t_end: f64,
    /// Measures are evaluated on [t_analysis_start, t_end] to discard the
    /// transient.
    pub t_analysis_start: f64,
    /// Standard deviation of the Gaussian initial condition per coordinate.
    pub init_std: f64,
    /// Seed for this trial; all noise is a pure function of it.
    pub seed: u64,
}

impl Default for SimParams {
    fn default() -> Self {
        SimParams {
            dt: 0.01,
            t_end: 200.0,
            t_analysis_start: 50.0,
            init_std: 0.008,
            seed: 42,
        }
    }
}

impl SimParams {
    pub fn validate(&self) -> Result<()> {
        if !self.dt.is_finite() || self.dt <= 0.0 {
            return Err(Error::invalid(format!("dt must be positive, got {}", self.dt)));
        }
        if !self.t_end.is_finite() || self.t_end <= 0.0 {
            return Err(Error::invalid(format!(
                "t_end must be positive, got {}",
                self.t_end
            )));
        }
        if !self.t_analysis_start.is_finite()
            || self.t_analysis_start < 0.0
            || self.t_analysis_start >= self.t_end
        {
            return Err(Error::invalid(format!(
                "t_analysis_start must lie in [0, t_end), got {}",
                self.t_analysis_start
            )));
        }
        if !self.init_std.is_finite() || self.init_std < 0.0 {
            return Err(Error::invalid(format!(
                "init_std must be non-negative, got {}",
                self.init_std
            )));
        }
        if self.n_steps() < 1 {
            return Err(Error::invalid("t_end shorter than one time step".to_string()));
        }
        Ok(())
    }

    /// Number of Euler-Maruyama steps; the grid covers [0, n_steps * dt].
    pub fn n_steps(&self) -> usize {
        (self.t_end / self.dt + 1e-9).floor() as usize
    }
}

/// Uniformly sampled solution of one trial, with the exact configuration
/// that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<State>,
    pub config: NetworkConfig,
    pub sim: SimParams,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// x-component samples of one node (0-based) as a series.
    pub fn x_series(&self, node: usize) -> Series {
        assert!(node < N_NODES);
        Series {
            values: self.states.iter().map(|s| s[2 * node]).collect(),
            dt: self.sim.dt,
        }
    }

    /// y-component samples of one node (0-based) as a series.
    pub fn y_series(&self, node: usize) -> Series {
        assert!(node < N_NODES);
        Series {
            values: self.states.iter().map(|s| s[2 * node + 1]).collect(),
            dt: self.sim.dt,
        }
    }

    /// Instantaneous oscillation radius r = sqrt(x^2 + y^2) of one node.
    pub fn radius_series(&self, node: usize) -> Series {
        assert!(node < N_NODES);
        Series {
            values: self
                .states
                .iter()
                .map(|s| s[2 * node].hypot(s[2 * node + 1]))
                .collect(),
            dt: self.sim.dt,
        }
    }
}

/// One Euler-Maruyama update. Noise enters the x-components only:
/// x' = x + drift_x dt + delta_i sqrt(dt) g_i, y' = y + drift_y dt.
pub fn em_step(
    state: &State,
    cfg: &NetworkConfig,
    dt: f64,
    gaussians: &[f64; N_NODES],
) -> Result<State> {
    if dt <= 0.0 || !dt.is_finite() {
        return Err(Error::invalid(format!("dt must be positive, got {dt}")));
    }
    for (index, v) in state.iter().enumerate() {
        if !v.is_finite() {
            return Err(Error::NonFinite {
                context: "em_step state",
                index,
            });
        }
    }
    let mut next = [0.0; 2 * N_NODES];
    em_step_unchecked(state, cfg, dt, dt.sqrt(), gaussians, &mut next);
    for (index, v) in next.iter().enumerate() {
        if !v.is_finite() {
            return Err(Error::NonFinite {
                context: "em_step output",
                index,
            });
        }
    }
    Ok(next)
}

#[inline]
fn em_step_unchecked(
    state: &State,
    cfg: &NetworkConfig,
    dt: f64,
    sqrt_dt: f64,
    gaussians: &[f64; N_NODES],
    next: &mut State,
) {
    let mut deriv = [0.0; 2 * N_NODES];
    drift_unchecked(state, cfg, &mut deriv);
    for i in 0..N_NODES {
        let delta = cfg.noise_intensities[i];
        let mut x = state[2 * i] + deriv[2 * i] * dt;
        // Exact explicit-Euler reduction when a node is noiseless.
        if delta != 0.0 {
            x += delta * sqrt_dt * gaussians[i];
        }
        next[2 * i] = x;
        next[2 * i + 1] = state[2 * i + 1] + deriv[2 * i + 1] * dt;
    }
}

/// Integrates one trial over [0, t_end].
///
/// The initial state is N(0, init_std^2) per coordinate and every Wiener
/// increment is keyed by (seed, step, node), so identical inputs produce
/// bit-identical trajectories regardless of scheduling.
pub fn simulate(cfg: &NetworkConfig, sp: &SimParams) -> Result<Trajectory> {
    cfg.validate()?;
    sp.validate()?;

    let n_steps = sp.n_steps();
    let dt = sp.dt;
    let sqrt_dt = dt.sqrt();

    let mut state = [0.0; 2 * N_NODES];
    for (c, v) in state.iter_mut().enumerate() {
        *v = sp.init_std * standard_normal(sp.seed, STREAM_INIT, c as u64);
    }

    let mut times = Vec::with_capacity(n_steps + 1);
    let mut states = Vec::with_capacity(n_steps + 1);
    times.push(0.0);
    states.push(state);

    let mut next = [0.0; 2 * N_NODES];
    for step in 0..n_steps {
        let gaussians = [
            standard_normal(sp.seed, STREAM_NOISE, (step * N_NODES) as u64),
            standard_normal(sp.seed, STREAM_NOISE, (step * N_NODES + 1) as u64),
            standard_normal(sp.seed, STREAM_NOISE, (step * N_NODES + 2) as u64),
        ];
        em_step_unchecked(&state, cfg, dt, sqrt_dt, &gaussians, &mut next);
        for (component, v) in next.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::Divergence {
                    step: step + 1,
                    component,
                });
            }
        }
        state = next;
        times.push((step + 1) as f64 * dt);
        states.push(state);
    }

    Ok(Trajectory {
        times,
        states,
        config: *cfg,
        sim: *sp,
    })
}

/// Restricts a trajectory to [t_analysis_start, t_end], preserving metadata.
///
/// The window must contain at least two samples; single-sample windows carry
/// no time-average information.
pub fn analysis_window(traj: &Trajectory) -> Result<Trajectory> {
    if traj.is_empty() {
        return Err(Error::invalid("empty trajectory".to_string()));
    }
    let t0 = traj.times[0];
    let dt = traj.sim.dt;
    let start = traj.sim.t_analysis_start;
    let first = if start <= t0 {
        0
    } else {
        ((start - t0) / dt - 1e-9).ceil() as usize
    };
    if traj.len().saturating_sub(first) < 2 {
        return Err(Error::invalid(format!(
            "analysis window [{start}, ..] contains fewer than two samples"
        )));
    }
    Ok(Trajectory {
        times: traj.times[first..].to_vec(),
        states: traj.states[first..].to_vec(),
        config: traj.config,
        sim: traj.sim,
    })
}
