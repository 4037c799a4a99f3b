use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of oscillators in a feed-forward loop.
pub const N_NODES: usize = 3;

/// Flat state vector (x1, y1, x2, y2, x3, y3).
pub type State = [f64; 2 * N_NODES];

/// Parameters of one lambda-omega unit, shared by all three nodes.
///
/// `lambda(r) = lambda0 + alpha r^2 + gamma_quintic r^4` controls radial
/// growth or decay, `omega(r) = omega0 + omega1 r^2` the rotation rate.
/// `gamma_quintic` is named after the r^5 term it produces in the radial
/// equation, and to keep "gamma" free for the phase-coherence measure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OscillatorParams {
    pub lambda0: f64,
    pub alpha: f64,
    pub gamma_quintic: f64,
    pub omega0: f64,
    pub omega1: f64,
}

impl Default for OscillatorParams {
    fn default() -> Self {
        OscillatorParams {
            lambda0: -0.1,
            alpha: -0.2,
            gamma_quintic: -0.2,
            omega0: 2.0,
            omega1: 0.0,
        }
    }
}

impl OscillatorParams {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("lambda0", self.lambda0),
            ("alpha", self.alpha),
            ("gamma_quintic", self.gamma_quintic),
            ("omega0", self.omega0),
            ("omega1", self.omega1),
        ];
        for (name, v) in fields {
            if !v.is_finite() {
                return Err(Error::invalid(format!("oscillator.{name} must be finite")));
            }
        }
        Ok(())
    }

    /// Non-fatal observations about unusual parameter regimes.
    ///
    /// The studied regime has `alpha < 0` and `gamma_quintic < 0` so that the
    /// amplitude equation saturates; other signs are permitted but can make
    /// trajectories grow without bound under strong noise.
    pub fn regime_warnings(&self) -> Vec<String> {
        let mut warnings = Vec::new();
        if self.alpha >= 0.0 {
            warnings.push(format!(
                "alpha = {} is non-negative; amplitude damping is not guaranteed",
                self.alpha
            ));
        }
        if self.gamma_quintic >= 0.0 {
            warnings.push(format!(
                "gamma_quintic = {} is non-negative; amplitude damping is not guaranteed",
                self.gamma_quintic
            ));
        }
        warnings
    }
}

/// Radial growth rate lambda(r) = lambda0 + alpha r^2 + gamma_quintic r^4.
pub fn lambda_fn(r: f64, p: &OscillatorParams) -> Result<f64> {
    if !r.is_finite() || r < 0.0 {
        return Err(Error::invalid(format!(
            "amplitude must be finite and non-negative, got {r}"
        )));
    }
    Ok(lambda_raw(r * r, p))
}

/// Angular frequency omega(r) = omega0 + omega1 r^2.
pub fn omega_fn(r: f64, p: &OscillatorParams) -> Result<f64> {
    if !r.is_finite() || r < 0.0 {
        return Err(Error::invalid(format!(
            "amplitude must be finite and non-negative, got {r}"
        )));
    }
    Ok(omega_raw(r * r, p))
}

#[inline(always)]
fn lambda_raw(r_sq: f64, p: &OscillatorParams) -> f64 {
    p.lambda0 + p.alpha * r_sq + p.gamma_quintic * r_sq * r_sq
}

#[inline(always)]
fn omega_raw(r_sq: f64, p: &OscillatorParams) -> f64 {
    p.omega0 + p.omega1 * r_sq
}

/// Which feed-forward-loop variant to build: T1 is all-excitatory, T2
/// inverts the 2 -> 3 edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum MotifKind {
    T1,
    T2,
}

impl std::fmt::Display for MotifKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MotifKind::T1 => write!(f, "T1"),
            MotifKind::T2 => write!(f, "T2"),
        }
    }
}

impl std::str::FromStr for MotifKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "T1" | "t1" => Ok(MotifKind::T1),
            "T2" | "t2" => Ok(MotifKind::T2),
            other => Err(Error::invalid(format!("unknown motif kind '{other}'"))),
        }
    }
}

/// Directed coupling weights; `weights[j][i]` is the strength of the edge
/// from node j into node i (zero means no edge).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CouplingMatrix {
    weights: [[f64; N_NODES]; N_NODES],
}

impl CouplingMatrix {
    /// Validates finiteness and the zero diagonal (no self-coupling).
    pub fn new(weights: [[f64; N_NODES]; N_NODES]) -> Result<Self> {
        for (j, row) in weights.iter().enumerate() {
            for (i, w) in row.iter().enumerate() {
                if !w.is_finite() {
                    return Err(Error::invalid(format!(
                        "coupling weight ({j},{i}) must be finite"
                    )));
                }
            }
            if weights[j][j] != 0.0 {
                return Err(Error::invalid(format!(
                    "coupling diagonal entry ({j},{j}) must be zero"
                )));
            }
        }
        Ok(CouplingMatrix { weights })
    }

    pub fn zero() -> Self {
        CouplingMatrix {
            weights: [[0.0; N_NODES]; N_NODES],
        }
    }

    /// Weight of the directed edge source -> target (0-based node indices).
    pub fn weight(&self, source: usize, target: usize) -> f64 {
        self.weights[source][target]
    }

    pub fn weights(&self) -> &[[f64; N_NODES]; N_NODES] {
        &self.weights
    }

    /// True when node 1 receives no input and node 3 sends no output.
    pub fn is_feed_forward(&self) -> bool {
        (0..N_NODES).all(|j| self.weights[j][0] == 0.0)
            && (0..N_NODES).all(|i| self.weights[N_NODES - 1][i] == 0.0)
    }

    pub fn validate(&self) -> Result<()> {
        Self::new(self.weights).map(|_| ())
    }
}

/// Builds the feed-forward loop 1 -> 2, 1 -> 3, 2 -> 3 with edge magnitude
/// `d`; T2 makes the 2 -> 3 edge inhibitory.
pub fn build_motif(kind: MotifKind, d: f64) -> Result<CouplingMatrix> {
    if !d.is_finite() || d <= 0.0 {
        return Err(Error::invalid(format!(
            "motif coupling magnitude must be positive, got {d}"
        )));
    }
    let mut weights = [[0.0; N_NODES]; N_NODES];
    weights[0][1] = d;
    weights[0][2] = d;
    weights[1][2] = match kind {
        MotifKind::T1 => d,
        MotifKind::T2 => -d,
    };
    Ok(CouplingMatrix { weights })
}

/// Complete definition of one stochastic network experiment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NetworkConfig {
    pub oscillator: OscillatorParams,
    pub coupling: CouplingMatrix,
    /// Per-node white-noise intensities (delta_1, delta_2, delta_3); noise
    /// enters the x-component only.
    pub noise_intensities: [f64; N_NODES],
}

impl NetworkConfig {
    pub fn validate(&self) -> Result<()> {
        self.oscillator.validate()?;
        self.coupling.validate()?;
        for (i, d) in self.noise_intensities.iter().enumerate() {
            if !d.is_finite() || *d < 0.0 {
                return Err(Error::invalid(format!(
                    "noise intensity delta_{} must be finite and non-negative, got {d}",
                    i + 1
                )));
            }
        }
        Ok(())
    }
}

/// Instantaneous deterministic part of the dynamics for the full 6-D state.
///
/// For node i: dx = lambda(r_i) x_i - omega(r_i) y_i + sum_j w_ji (x_j - x_i),
/// dy = omega(r_i) x_i + lambda(r_i) y_i + sum_j w_ji (y_j - y_i).
pub fn drift(state: &State, cfg: &NetworkConfig) -> Result<State> {
    for (index, v) in state.iter().enumerate() {
        if !v.is_finite() {
            return Err(Error::NonFinite {
                context: "drift state",
                index,
            });
        }
    }
    let mut out = [0.0; 2 * N_NODES];
    drift_unchecked(state, cfg, &mut out);
    Ok(out)
}

/// Drift without finiteness checks; the integrator validates states once per
/// step instead of once per evaluation.
#[inline]
pub(crate) fn drift_unchecked(state: &State, cfg: &NetworkConfig, out: &mut State) {
    let p = &cfg.oscillator;
    let w = &cfg.coupling.weights;
    for i in 0..N_NODES {
        let x = state[2 * i];
        let y = state[2 * i + 1];
        let r_sq = x * x + y * y;
        let lam = lambda_raw(r_sq, p);
        let om = omega_raw(r_sq, p);
        let mut cx = 0.0;
        let mut cy = 0.0;
        for j in 0..N_NODES {
            if j != i {
                let wji = w[j][i];
                cx += wji * (state[2 * j] - x);
                cy += wji * (state[2 * j + 1] - y);
            }
        }
        out[2 * i] = lam * x - om * y + cx;
        out[2 * i + 1] = om * x + lam * y + cy;
    }
}
