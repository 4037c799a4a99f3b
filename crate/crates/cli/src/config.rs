//! Experiment files: strict TOML documents that resolve into the domain
//! types. Unknown keys are rejected and every referenced invariant is
//! re-validated on load.

use serde::{Deserialize, Serialize};

use ffl_core::measures::MetricOptions;
use ffl_core::model::{
    build_motif, CouplingMatrix, MotifKind, NetworkConfig, OscillatorParams,
};
use ffl_core::sde::SimParams;
use ffl_core::sweep::{BinSpec, GridSpec, SweepAxis, SweepParameter, SweepSpec};

use crate::error::{CliError, Result};

/// One experiment document. The subcommand picks which sections it needs;
/// defaults fill everything except the network.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentFile {
    pub network: NetworkSection,
    #[serde(default)]
    pub sim: SimSection,
    #[serde(default)]
    pub metrics: MetricOptions,
    #[serde(default)]
    pub ensemble: EnsembleSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub isi_density: Option<DensitySection>,
}

/// Oscillator, coupling, and noise description. The coupling comes either
/// from a named motif with a magnitude or from an explicit matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub motif: Option<MotifKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coupling_d: Option<f64>,
    /// Row-major weights, `coupling[source][target]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coupling: Option<[[f64; 3]; 3]>,
    #[serde(default = "defaults::lambda0")]
    pub lambda0: f64,
    #[serde(default = "defaults::alpha")]
    pub alpha: f64,
    #[serde(default = "defaults::gamma_quintic")]
    pub gamma_quintic: f64,
    #[serde(default = "defaults::omega0")]
    pub omega0: f64,
    #[serde(default = "defaults::omega1")]
    pub omega1: f64,
    #[serde(default = "defaults::noise")]
    pub noise: [f64; 3],
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SimSection {
    pub dt: f64,
    pub t_end: f64,
    pub t_analysis_start: f64,
    pub init_std: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EnsembleSection {
    pub n_trials: usize,
    pub base_seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    /// Run the sweep once per listed motif. Requires the motif/coupling_d
    /// network form and an unset network.motif.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub motifs: Option<Vec<MotifKind>>,
    #[serde(default = "defaults::yes")]
    pub smooth_optima: bool,
    #[serde(rename = "axis")]
    pub axes: Vec<AxisSection>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisSection {
    pub parameter: SweepParameter,
    pub grid: GridSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensitySection {
    /// Driving-noise intensities to histogram, one output per point.
    #[serde(default = "defaults::density_points")]
    pub delta1_points: Vec<f64>,
    #[serde(default = "defaults::bins")]
    pub bins: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub range: Option<(f64, f64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub motifs: Option<Vec<MotifKind>>,
}

mod defaults {
    pub fn lambda0() -> f64 {
        -0.1
    }
    pub fn alpha() -> f64 {
        -0.2
    }
    pub fn gamma_quintic() -> f64 {
        -0.2
    }
    pub fn omega0() -> f64 {
        2.0
    }
    pub fn omega1() -> f64 {
        0.0
    }
    pub fn noise() -> [f64; 3] {
        [0.01, 0.01, 0.01]
    }
    pub fn yes() -> bool {
        true
    }
    pub fn density_points() -> Vec<f64> {
        vec![0.0023, 0.16, 1.35]
    }
    pub fn bins() -> usize {
        100
    }
}

impl Default for SimSection {
    fn default() -> Self {
        let sp = SimParams::default();
        SimSection {
            dt: sp.dt,
            t_end: sp.t_end,
            t_analysis_start: sp.t_analysis_start,
            init_std: sp.init_std,
            seed: sp.seed,
        }
    }
}

impl Default for EnsembleSection {
    fn default() -> Self {
        EnsembleSection {
            n_trials: 200,
            base_seed: 42,
        }
    }
}

impl NetworkSection {
    pub fn oscillator(&self) -> OscillatorParams {
        OscillatorParams {
            lambda0: self.lambda0,
            alpha: self.alpha,
            gamma_quintic: self.gamma_quintic,
            omega0: self.omega0,
            omega1: self.omega1,
        }
    }

    fn coupling_magnitude(&self) -> Result<f64> {
        let d = self.coupling_d.ok_or_else(|| {
            CliError::validation("network.coupling_d is required for motif-based runs")
        })?;
        if !(d > 0.0) || !d.is_finite() {
            return Err(CliError::validation(format!(
                "network.coupling_d must be positive (the sign of each edge is set \
                 by the motif kind), got {d}"
            )));
        }
        Ok(d)
    }

    /// Network with the coupling rebuilt for one motif kind.
    pub fn resolve_as(&self, kind: MotifKind) -> Result<NetworkConfig> {
        let coupling = build_motif(kind, self.coupling_magnitude()?)?;
        self.finish(coupling)
    }

    /// Network as written: motif + magnitude, or the explicit matrix.
    pub fn resolve(&self) -> Result<(NetworkConfig, Option<MotifKind>)> {
        match (self.motif, &self.coupling) {
            (Some(kind), None) => Ok((self.resolve_as(kind)?, Some(kind))),
            (None, Some(rows)) => {
                if self.coupling_d.is_some() {
                    return Err(CliError::validation(
                        "network.coupling_d conflicts with an explicit network.coupling matrix",
                    ));
                }
                Ok((self.finish(CouplingMatrix::new(*rows)?)?, None))
            }
            (Some(_), Some(_)) => Err(CliError::validation(
                "network.motif conflicts with an explicit network.coupling matrix",
            )),
            (None, None) => Err(CliError::validation(
                "network needs either motif with coupling_d or an explicit coupling matrix",
            )),
        }
    }

    fn finish(&self, coupling: CouplingMatrix) -> Result<NetworkConfig> {
        let cfg = NetworkConfig {
            oscillator: self.oscillator(),
            coupling,
            noise_intensities: self.noise,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

impl SimSection {
    pub fn params(&self) -> SimParams {
        SimParams {
            dt: self.dt,
            t_end: self.t_end,
            t_analysis_start: self.t_analysis_start,
            init_std: self.init_std,
            seed: self.seed,
        }
    }
}

impl DensitySection {
    pub fn bin_spec(&self) -> BinSpec {
        BinSpec {
            count: self.bins,
            range: self.range,
        }
    }
}

impl ExperimentFile {
    /// Which motifs a multi-motif section expands to: the listed ones, or
    /// the single network as written.
    pub fn motif_runs(&self, motifs: &Option<Vec<MotifKind>>) -> Result<Vec<RunTarget>> {
        match motifs {
            Some(kinds) => kinds
                .iter()
                .map(|kind| {
                    Ok(RunTarget {
                        motif: Some(*kind),
                        network: self.network.resolve_as(*kind)?,
                    })
                })
                .collect(),
            None => {
                let (network, motif) = self.network.resolve()?;
                Ok(vec![RunTarget { motif, network }])
            }
        }
    }

    pub fn sweep_spec(&self, target: &RunTarget) -> Result<SweepSpec> {
        let section = self
            .sweep
            .as_ref()
            .ok_or_else(|| CliError::validation("config has no [sweep] section"))?;
        Ok(SweepSpec {
            network: target.network.clone(),
            sim: self.sim.params(),
            motif: target.motif,
            axes: section
                .axes
                .iter()
                .map(|a| SweepAxis {
                    parameter: a.parameter,
                    grid: a.grid.clone(),
                })
                .collect(),
            n_trials: self.ensemble.n_trials,
            base_seed: self.ensemble.base_seed,
            options: self.metrics,
            smooth_optima: section.smooth_optima,
        })
    }

    /// Semantic validation beyond what deserialization checks; leaves the
    /// config fully resolved or names the violated invariant.
    pub fn validate(&self) -> Result<()> {
        self.sim.params().validate()?;
        self.metrics.validate()?;
        if let Some(sweep) = &self.sweep {
            if sweep.axes.is_empty() {
                return Err(CliError::validation("[sweep] needs at least one [[sweep.axis]]"));
            }
            for axis in &sweep.axes {
                axis.grid.points()?;
            }
            self.check_motif_list(&sweep.motifs)?;
        }
        if let Some(density) = &self.isi_density {
            density.bin_spec().validate()?;
            if density.delta1_points.is_empty() {
                return Err(CliError::validation(
                    "isi_density.delta1_points must not be empty",
                ));
            }
            for &p in &density.delta1_points {
                if !p.is_finite() || p < 0.0 {
                    return Err(CliError::validation(format!(
                        "isi_density.delta1_points must be finite and non-negative, got {p}"
                    )));
                }
            }
            self.check_motif_list(&density.motifs)?;
        }
        // The network itself must resolve under at least one interpretation.
        if self.uses_motif_list() {
            self.network.coupling_magnitude()?;
            if self.network.coupling.is_some() {
                return Err(CliError::validation(
                    "a motifs list requires the motif/coupling_d network form",
                ));
            }
        } else {
            self.network.resolve()?;
        }
        Ok(())
    }

    fn uses_motif_list(&self) -> bool {
        self.sweep.as_ref().is_some_and(|s| s.motifs.is_some())
            || self.isi_density.as_ref().is_some_and(|d| d.motifs.is_some())
    }

    fn check_motif_list(&self, motifs: &Option<Vec<MotifKind>>) -> Result<()> {
        if let Some(kinds) = motifs {
            if kinds.is_empty() {
                return Err(CliError::validation("motifs list must not be empty"));
            }
            if self.network.motif.is_some() {
                return Err(CliError::validation(
                    "network.motif conflicts with a motifs list; set one or the other",
                ));
            }
        }
        Ok(())
    }
}

/// One network instantiation a command runs against, labeled by motif when
/// there is one.
#[derive(Debug, Clone)]
pub struct RunTarget {
    pub motif: Option<MotifKind>,
    pub network: NetworkConfig,
}

impl RunTarget {
    /// Label used in output rows and file names.
    pub fn label(&self) -> String {
        match self.motif {
            Some(kind) => kind.to_string(),
            None => "custom".to_string(),
        }
    }
}

/// Parses and fully validates one experiment document.
pub fn parse_experiment(text: &str) -> Result<ExperimentFile> {
    let file: ExperimentFile = toml::from_str(text).map_err(CliError::parse)?;
    file.validate()?;
    Ok(file)
}
