//! Experiment configuration, read from TOML.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::channel::{presets, ChannelModel, CsitErrorModel, DelayModel};
use crate::controllers::StepPolicy;
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

/// Names accepted by [`ExperimentConfig::preset`].
pub const PRESET_NAMES: [&str; 2] = ["paper-two-state", "paper-continuous"];

const TWO_STATE_TOML: &str = include_str!("../../configs/paper-two-state.toml");
const CONTINUOUS_TOML: &str = include_str!("../../configs/paper-continuous.toml");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub name: String,
    pub horizon: u64,
    pub seed: u64,
    /// Per-slot power cap.
    pub p: f64,
    /// Long-term power budget.
    pub p_bar: f64,
    pub channel: ChannelSpec,
    #[serde(default)]
    pub csit: CsitSpec,
    /// Defaults to instantaneous CSIT for the queue controller and baselines,
    /// one-slot delay for the gradient controller.
    #[serde(default)]
    pub delay: Option<DelayModel>,
    pub controller: ControllerSpec,
    #[serde(default)]
    pub rate_adapt: Option<RateAdaptSpec>,
    #[serde(default)]
    pub output: OutputSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ChannelSpec {
    /// `two-state` or `continuous`.
    Preset { name: String },
    Discrete {
        states: Vec<ComplexMatrix>,
        probs: Vec<f64>,
    },
    ContinuousProduct { n_r: usize, n_t: usize, v_max: f64 },
}

impl ChannelSpec {
    pub fn resolve(&self) -> Result<ChannelModel> {
        let model = match self {
            ChannelSpec::Preset { name } => match name.as_str() {
                "two-state" => presets::two_state(),
                "continuous" => presets::continuous(),
                other => {
                    return Err(Error::Config(format!(
                        "unknown channel preset {other:?} (expected \"two-state\" or \"continuous\")"
                    )))
                }
            },
            ChannelSpec::Discrete { states, probs } => ChannelModel::Discrete {
                states: states.clone(),
                probs: probs.clone(),
            },
            ChannelSpec::ContinuousProduct { n_r, n_t, v_max } => ChannelModel::ContinuousProduct {
                n_r: *n_r,
                n_t: *n_t,
                v_max: *v_max,
            },
        };
        model.validate()?;
        Ok(model)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum CsitSpec {
    #[default]
    Exact,
    /// Printed phase-rounded observations of the two-state channel.
    #[serde(rename = "error-case-1")]
    ErrorCase1,
    /// Printed magnitude-and-phase-rounded observations of the two-state channel.
    #[serde(rename = "error-case-2")]
    ErrorCase2,
    PhaseQuantize { step: f64 },
    MagPhaseQuantize { mag_step: f64, phase_step: f64 },
    BoundedBall { delta: f64 },
}

impl CsitSpec {
    pub fn resolve(&self) -> Result<CsitErrorModel> {
        let err = match self {
            CsitSpec::Exact => CsitErrorModel::Exact,
            CsitSpec::ErrorCase1 => presets::error_case_1_model(),
            CsitSpec::ErrorCase2 => presets::error_case_2_model(),
            CsitSpec::PhaseQuantize { step } => CsitErrorModel::PhaseQuantize { step: *step },
            CsitSpec::MagPhaseQuantize {
                mag_step,
                phase_step,
            } => CsitErrorModel::MagPhaseQuantize {
                mag_step: *mag_step,
                phase_step: *phase_step,
            },
            CsitSpec::BoundedBall { delta } => CsitErrorModel::BoundedBall { delta: *delta },
        };
        err.validate()?;
        Ok(err)
    }

    pub fn label(&self) -> &'static str {
        match self {
            CsitSpec::Exact => "exact",
            CsitSpec::ErrorCase1 => "error-case-1",
            CsitSpec::ErrorCase2 => "error-case-2",
            CsitSpec::PhaseQuantize { .. } => "phase-quantize",
            CsitSpec::MagPhaseQuantize { .. } => "mag-phase-quantize",
            CsitSpec::BoundedBall { .. } => "bounded-ball",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ControllerSpec {
    Dpp {
        v: f64,
        #[serde(default)]
        z0: f64,
    },
    Ogd {
        /// Constant step size; mutually exclusive with `inverse_sqrt`.
        #[serde(default)]
        gamma: Option<f64>,
        #[serde(default)]
        inverse_sqrt: bool,
    },
    Baseline {
        policy: BaselineKind,
        /// Channel samples used by the empirical policies.
        #[serde(default = "default_training_samples")]
        samples: usize,
        /// Replay a policy stored by `mimocov baseline` instead of recomputing it.
        #[serde(default)]
        file: Option<PathBuf>,
    },
}

fn default_training_samples() -> usize {
    100
}

impl ControllerSpec {
    pub fn label(&self) -> &'static str {
        match self {
            ControllerSpec::Dpp { .. } => "dpp",
            ControllerSpec::Ogd { .. } => "ogd",
            ControllerSpec::Baseline { .. } => "baseline",
        }
    }

    pub fn step_policy(&self) -> Result<Option<StepPolicy>> {
        match self {
            ControllerSpec::Ogd {
                gamma,
                inverse_sqrt,
            } => match (gamma, inverse_sqrt) {
                (Some(g), false) => {
                    let s = StepPolicy::Constant { gamma: *g };
                    s.validate()?;
                    Ok(Some(s))
                }
                (None, true) => Ok(Some(StepPolicy::InverseSqrt)),
                _ => Err(Error::Config(
                    "ogd controller needs exactly one of `gamma` or `inverse_sqrt = true`".into(),
                )),
            },
            _ => Ok(None),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BaselineKind {
    /// Per-state optimum computed from the true channel law.
    CdiOptimal,
    /// Best constant covariance for the true channel law.
    Constant,
    /// Per-state optimum for the empirical law of accurate training samples.
    EmpiricalCsit,
    /// Best constant covariance for the empirical law of training samples.
    EmpiricalNoCsit,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RateAdaptSpec {
    /// Block size, in nats.
    pub n_total: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub csv: Option<PathBuf>,
    pub summary: Option<PathBuf>,
    pub svg: Option<PathBuf>,
}

impl OutputSpec {
    /// `<dir>/<name>.csv`, `.json` and `.svg`.
    pub fn in_dir(dir: &Path, name: &str) -> Self {
        Self {
            csv: Some(dir.join(format!("{name}.csv"))),
            summary: Some(dir.join(format!("{name}.json"))),
            svg: Some(dir.join(format!("{name}.svg"))),
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml_str(s: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(s).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    /// Loads a built-in preset by name.
    pub fn preset(name: &str) -> Result<Self> {
        match name {
            "paper-two-state" => Self::from_toml_str(TWO_STATE_TOML),
            "paper-continuous" => Self::from_toml_str(CONTINUOUS_TOML),
            other => Err(Error::Config(format!(
                "unknown preset {other:?}; available: {}",
                PRESET_NAMES.join(", ")
            ))),
        }
    }

    /// A preset name or a path to a TOML file.
    pub fn load(name_or_path: &str) -> Result<Self> {
        if PRESET_NAMES.contains(&name_or_path) {
            Self::preset(name_or_path)
        } else {
            Self::from_path(Path::new(name_or_path))
        }
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn delay_model(&self) -> DelayModel {
        self.delay.unwrap_or(match self.controller {
            ControllerSpec::Ogd { .. } => DelayModel::Delayed { t_slots: 1 },
            _ => DelayModel::Instantaneous,
        })
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p_bar > 0.0) || !(self.p >= self.p_bar) || !self.p.is_finite() {
            return Err(Error::Config(format!(
                "need p >= p_bar > 0, got p = {}, p_bar = {}",
                self.p, self.p_bar
            )));
        }
        if self.horizon == 0 {
            return Err(Error::Config("horizon must be at least 1".into()));
        }
        let model = self.channel.resolve()?;
        let err = self.csit.resolve()?;
        if matches!(self.csit, CsitSpec::ErrorCase1 | CsitSpec::ErrorCase2)
            && model != presets::two_state()
        {
            return Err(Error::Config(format!(
                "csit {} is only defined for the two-state channel",
                self.csit.label()
            )));
        }
        if let CsitErrorModel::Table { truth, .. } = &err {
            if truth[0].rows() != model.dims().0 || truth[0].cols() != model.dims().1 {
                return Err(Error::Config("CSIT table does not match channel dimensions".into()));
            }
        }
        let delay = self.delay_model();
        delay.validate()?;
        match (&self.controller, delay) {
            (ControllerSpec::Dpp { v, z0 }, DelayModel::Instantaneous) => {
                if !(*v > 0.0) || !(*z0 >= 0.0) {
                    return Err(Error::Config("dpp needs v > 0 and z0 >= 0".into()));
                }
            }
            (ControllerSpec::Dpp { .. }, _) => {
                return Err(Error::Config("the dpp controller needs instantaneous CSIT".into()))
            }
            (ControllerSpec::Ogd { .. }, DelayModel::Delayed { .. }) => {
                self.controller.step_policy()?;
            }
            (ControllerSpec::Ogd { .. }, _) => {
                return Err(Error::Config("the ogd controller needs delayed CSIT".into()))
            }
            (ControllerSpec::Baseline { policy, samples, file }, delay) => {
                if delay != DelayModel::Instantaneous {
                    return Err(Error::Config("baseline replay uses instantaneous CSIT".into()));
                }
                let needs_discrete = matches!(policy, BaselineKind::CdiOptimal | BaselineKind::Constant);
                if needs_discrete && file.is_none() && !matches!(model, ChannelModel::Discrete { .. }) {
                    return Err(Error::Config(format!(
                        "baseline {policy:?} needs a discrete channel model"
                    )));
                }
                if *samples == 0 {
                    return Err(Error::Config("baseline needs at least one training sample".into()));
                }
            }
        }
        if let Some(ra) = &self.rate_adapt {
            if !(ra.n_total > 0.0) {
                return Err(Error::Config("rate_adapt.n_total must be positive".into()));
            }
        }
        Ok(())
    }
}
