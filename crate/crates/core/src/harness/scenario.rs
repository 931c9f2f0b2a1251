use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::detector::DetectorConfig;
use crate::error::{Error, Result};
use crate::mfc::ControllerConfig;
use crate::patient::{PatientParams, PerturbationProfile};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScenarioKind {
    OpenLoop,
    ClosedLoop,
    Chirp,
}

/// Which state combination the controller regulates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputSignal {
    Y1,
    #[default]
    Ym,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum ReferenceSpec {
    /// Constant set-point. `null` uses the mean of the crisis-free trace.
    Constant {
        #[serde(default)]
        value: Option<f64>,
    },
    /// The run's crisis-free counterfactual: same patient, same noise
    /// realization, pulse density held at baseline, no stimulation.
    Recorded,
}

impl Default for ReferenceSpec {
    fn default() -> Self {
        ReferenceSpec::Constant { value: None }
    }
}

/// Synthetic chirp `sin(2πt²) + offset` on `[0, duration]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ChirpSpec {
    pub noise_sd: f64,
    pub offset: f64,
}

impl Default for ChirpSpec {
    fn default() -> Self {
        Self { noise_sd: 0.1, offset: 5.0 }
    }
}

fn default_fs() -> f64 {
    512.0
}

fn default_warmup() -> f64 {
    0.0
}

fn default_c_scale() -> f64 {
    1.0
}

/// Full description of one run. `scenario` and `duration` are required;
/// everything else has a default.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSpec {
    pub scenario: ScenarioKind,
    /// Recorded duration (s), excluding warm-up.
    pub duration: f64,
    #[serde(default = "default_fs")]
    pub fs: f64,
    #[serde(default)]
    pub seed: u64,
    /// Discarded settling time before `t = 0` (s).
    #[serde(default = "default_warmup")]
    pub warmup: f64,
    #[serde(default)]
    pub patient: PatientParams,
    /// Multiplies every connectivity constant of `patient`.
    #[serde(default = "default_c_scale")]
    pub c_scale: f64,
    #[serde(default)]
    pub perturbation: PerturbationProfile,
    #[serde(default)]
    pub detector: DetectorConfig,
    #[serde(default)]
    pub controller: ControllerConfig,
    #[serde(default)]
    pub reference: ReferenceSpec,
    #[serde(default)]
    pub output_signal: OutputSignal,
    #[serde(default)]
    pub measurement_noise_sd: f64,
    #[serde(default)]
    pub chirp: ChirpSpec,
}

impl ScenarioSpec {
    /// Defaults for everything except the two required keys.
    pub fn new(scenario: ScenarioKind, duration: f64) -> Self {
        Self {
            scenario,
            duration,
            fs: default_fs(),
            seed: 0,
            warmup: default_warmup(),
            patient: PatientParams::default(),
            c_scale: 1.0,
            perturbation: PerturbationProfile::default(),
            detector: DetectorConfig::default(),
            controller: ControllerConfig::default(),
            reference: ReferenceSpec::default(),
            output_signal: OutputSignal::default(),
            measurement_noise_sd: 0.0,
            chirp: ChirpSpec::default(),
        }
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let spec: ScenarioSpec = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            Error::Config { path, message: e.into_inner().to_string() }
        })?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let cfg = |path: &str, message: String| Error::Config { path: path.into(), message };
        if !(self.duration > 0.0 && self.duration.is_finite()) {
            return Err(cfg("duration", format!("must be positive, got {}", self.duration)));
        }
        if !(self.fs > 0.0 && self.fs.is_finite()) {
            return Err(cfg("fs", format!("must be positive, got {}", self.fs)));
        }
        if !(self.warmup >= 0.0 && self.warmup.is_finite()) {
            return Err(cfg("warmup", "must be non-negative".into()));
        }
        if !(self.c_scale > 0.0 && self.c_scale.is_finite()) {
            return Err(cfg("c_scale", "must be positive".into()));
        }
        if !(self.measurement_noise_sd >= 0.0 && self.measurement_noise_sd.is_finite()) {
            return Err(cfg("measurement_noise_sd", "must be non-negative".into()));
        }
        if !(self.chirp.noise_sd >= 0.0 && self.chirp.noise_sd.is_finite()) {
            return Err(cfg("chirp.noise_sd", "must be non-negative".into()));
        }
        if let ReferenceSpec::Constant { value: Some(v) } = self.reference {
            if !v.is_finite() {
                return Err(cfg("reference.value", "must be finite".into()));
            }
        }
        // the remaining checks carry their own messages
        self.patient.validate()?;
        self.perturbation.validate()?;
        self.detector.validate()?;
        self.controller.validate()?;
        Ok(())
    }

    /// The patient actually simulated.
    pub fn patient_params(&self) -> Result<PatientParams> {
        self.patient.make_patient_variant(self.c_scale)
    }

    pub fn samples(&self) -> usize {
        (self.duration * self.fs).round() as usize
    }
}

/// Reads and validates a JSON scenario file.
pub fn parse_config(path: impl AsRef<Path>) -> Result<ScenarioSpec> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    ScenarioSpec::from_json_str(&text)
}
