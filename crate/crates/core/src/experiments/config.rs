//! Scenario configuration: JSON file layer, CLI overrides and validation.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use super::ExperimentError;
use crate::gates::PureState;
use crate::hamiltonians::{CouplingConfig, PulseParams};
use crate::linalg::Complex;
use crate::lindblad::{DecoherenceRates, LoweringConvention};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ScenarioKind {
    HadamardBloch,
    SingleQubitSweep,
    CphaseSweep,
    ConcurrenceMap,
    GateTable,
}

impl ScenarioKind {
    pub fn name(self) -> &'static str {
        match self {
            ScenarioKind::HadamardBloch => "hadamard-bloch",
            ScenarioKind::SingleQubitSweep => "single-qubit-sweep",
            ScenarioKind::CphaseSweep => "cphase-sweep",
            ScenarioKind::ConcurrenceMap => "concurrence-map",
            ScenarioKind::GateTable => "gate-table",
        }
    }

    fn is_two_qubit(self) -> bool {
        matches!(
            self,
            ScenarioKind::CphaseSweep | ScenarioKind::ConcurrenceMap
        )
    }
}

/// Which decoherence channel a one-dimensional sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Channel {
    Dephasing,
    Relaxation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    Linear,
    Log,
}

/// Rate axis. With `Log` spacing `min` must be positive; `include_zero`
/// prepends a `0` point (counted in `count`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepAxis {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub spacing: Spacing,
    #[serde(default)]
    pub include_zero: bool,
}

impl SweepAxis {
    pub fn linear(min: f64, max: f64, count: usize) -> Self {
        Self {
            min,
            max,
            count,
            spacing: Spacing::Linear,
            include_zero: false,
        }
    }

    /// Zero followed by `count − 1` log-spaced points in `[min, max]`.
    pub fn log_with_zero(min: f64, max: f64, count: usize) -> Self {
        Self {
            min,
            max,
            count,
            spacing: Spacing::Log,
            include_zero: true,
        }
    }

    pub fn validate(&self, name: &str) -> Result<(), ExperimentError> {
        let err = |msg: String| Err(ExperimentError::Config(format!("{name}: {msg}")));
        if self.count < 2 {
            return err(format!("count must be ≥ 2, got {}", self.count));
        }
        if !(self.min >= 0.0) || !self.max.is_finite() || self.max < self.min {
            return err(format!("invalid range [{}, {}]", self.min, self.max));
        }
        if self.spacing == Spacing::Log {
            if self.min <= 0.0 {
                return err("log spacing needs min > 0 (use include_zero for a 0 point)".into());
            }
            if self.include_zero && self.count < 3 {
                return err("log spacing with include_zero needs count ≥ 3".into());
            }
        }
        Ok(())
    }

    pub fn points(&self) -> Vec<f64> {
        let zero = usize::from(self.include_zero && self.spacing == Spacing::Log);
        let n = self.count - zero;
        let mut pts = vec![0.0; zero];
        let last = (n - 1).max(1) as f64;
        for k in 0..n {
            let f = k as f64 / last;
            let v = match self.spacing {
                Spacing::Linear => self.min + (self.max - self.min) * f,
                Spacing::Log => self.min * (self.max / self.min).powf(f),
            };
            pts.push(v);
        }
        // Pin the endpoint exactly.
        if let Some(p) = pts.last_mut() {
            *p = self.max;
        }
        pts
    }
}

/// Initial state: a single-qubit label (`"0"`, `"1"`, `"cw"`, `"acw"`), a
/// pair of labels for a two-qubit product, or explicit `[re, im]` amplitudes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum InitialState {
    Label(String),
    Product([String; 2]),
    Amplitudes(Vec<[f64; 2]>),
}

fn label_state(label: &str) -> Result<PureState, ExperimentError> {
    match label.to_ascii_lowercase().as_str() {
        "0" | "zero" | "px" => Ok(PureState::zero()),
        "1" | "one" | "py" => Ok(PureState::one()),
        "cw" | "clockwise" => Ok(PureState::clockwise()),
        "acw" | "anticlockwise" => Ok(PureState::anticlockwise()),
        other => Err(ExperimentError::Config(format!(
            "unknown state label `{other}`"
        ))),
    }
}

impl InitialState {
    pub fn to_state(&self) -> Result<PureState, ExperimentError> {
        let state = match self {
            InitialState::Label(label) => {
                // "cw,acw" is accepted as shorthand for a product.
                if let Some((a, b)) = label.split_once(',') {
                    PureState::product(&label_state(a.trim())?, &label_state(b.trim())?)
                } else {
                    return label_state(label);
                }
            }
            InitialState::Product([a, b]) => PureState::product(&label_state(a)?, &label_state(b)?),
            InitialState::Amplitudes(amps) => {
                PureState::normalized(amps.iter().map(|[re, im]| Complex::new(*re, *im)).collect())
            }
        };
        state.map_err(|e| ExperimentError::Config(format!("initial_state: {e}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    /// `None` selects `τ/2000`.
    pub dt: Option<f64>,
    pub sample_every: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputSpec {
    /// `None` writes to stdout.
    pub path: Option<PathBuf>,
    pub format: OutputFormat,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub scenario: ScenarioKind,
    pub initial_state: InitialState,
    pub rates: DecoherenceRates,
    pub sweep: SweepAxis,
    pub sweep_channel: Channel,
    pub map_gamma_d: SweepAxis,
    pub map_gamma_r: SweepAxis,
    pub pulse: PulseParams,
    pub coupling: CouplingConfig,
    pub residual_drive: [f64; 2],
    pub integrator: IntegratorConfig,
    pub lowering_convention: LoweringConvention,
    pub output: OutputSpec,
}

impl ScenarioConfig {
    pub fn default_for(scenario: ScenarioKind) -> Self {
        let initial_state = match scenario {
            ScenarioKind::HadamardBloch => InitialState::Label("0".into()),
            ScenarioKind::SingleQubitSweep => InitialState::Label("1".into()),
            _ => InitialState::Product(["cw".into(), "acw".into()]),
        };
        let sample_every = match scenario {
            ScenarioKind::HadamardBloch => 20,
            _ => FINAL_ONLY,
        };
        Self {
            scenario,
            initial_state,
            rates: DecoherenceRates::default(),
            sweep: SweepAxis::log_with_zero(1e-3, 0.4, 25),
            sweep_channel: Channel::Dephasing,
            map_gamma_d: SweepAxis::linear(0.0, 0.4, 41),
            map_gamma_r: SweepAxis::linear(0.0, 0.4, 41),
            pulse: PulseParams::hadamard(),
            coupling: CouplingConfig::ising(1.0),
            residual_drive: [0.0, 0.0],
            integrator: IntegratorConfig {
                dt: None,
                sample_every,
            },
            lowering_convention: LoweringConvention::default(),
            output: OutputSpec {
                path: None,
                format: if scenario == ScenarioKind::GateTable {
                    OutputFormat::Json
                } else {
                    OutputFormat::Csv
                },
            },
        }
    }

    /// Overlays fields present in a JSON document onto the scenario defaults.
    /// A `scenario` field in the document is used only when `scenario` is
    /// `None`.
    pub fn from_json(doc: &str, scenario: Option<ScenarioKind>) -> Result<Self, ExperimentError> {
        let value: serde_json::Value = serde_json::from_str(doc)
            .map_err(|e| ExperimentError::Config(format!("config JSON: {e}")))?;
        let obj = value
            .as_object()
            .ok_or_else(|| ExperimentError::Config("config must be a JSON object".into()))?;
        let kind = match scenario {
            Some(k) => k,
            None => {
                let v = obj
                    .get("scenario")
                    .ok_or_else(|| ExperimentError::Config("config lacks `scenario`".into()))?;
                serde_json::from_value(v.clone())
                    .map_err(|e| ExperimentError::Config(format!("scenario: {e}")))?
            }
        };
        let mut base = serde_json::to_value(Self::default_for(kind)).expect("config serializes");
        merge(&mut base, &value);
        base["scenario"] = serde_json::to_value(kind).expect("kind serializes");
        serde_json::from_value(base).map_err(|e| ExperimentError::Config(format!("config: {e}")))
    }

    /// Gate duration τ for the scenario.
    pub fn gate_time(&self) -> f64 {
        if self.scenario.is_two_qubit() {
            FRAC_PI_4 / self.coupling.jz
        } else {
            self.pulse.tau
        }
    }

    pub fn dt(&self) -> f64 {
        self.integrator
            .dt
            .unwrap_or(self.gate_time() / crate::lindblad::IntegratorSettings::DEFAULT_STEPS as f64)
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        let cfg_err = |m: String| Err(ExperimentError::Config(m));
        if self.scenario == ScenarioKind::GateTable {
            return Ok(());
        }
        self.rates
            .validate()
            .map_err(|e| ExperimentError::Config(e.to_string()))?;
        if let Some(dt) = self.integrator.dt {
            if !(dt > 0.0) || !dt.is_finite() {
                return cfg_err(format!("integrator.dt must be > 0, got {dt}"));
            }
        }
        if self.integrator.sample_every == 0 {
            return cfg_err("integrator.sample_every must be ≥ 1".into());
        }
        let dim = self.initial_state.to_state()?.dim();
        let want_dim = if self.scenario.is_two_qubit() { 4 } else { 2 };
        if dim != want_dim {
            return cfg_err(format!(
                "{} needs a {}-qubit initial state",
                self.scenario.name(),
                want_dim / 2
            ));
        }
        if self.residual_drive.iter().any(|x| !x.is_finite()) {
            return cfg_err("residual_drive must be finite".into());
        }
        match self.scenario {
            ScenarioKind::HadamardBloch => {
                let p = &self.pulse;
                let ok = p.theta.abs() < 1e-9
                    && (p.phi() - FRAC_PI_4).abs() < 1e-9
                    && (p.p_norm() * p.tau - FRAC_PI_2).abs() < 1e-9;
                if !ok {
                    return cfg_err("hadamard-bloch requires θ = 0, φ = π/4, 𝒫τ = π/2".into());
                }
            }
            ScenarioKind::SingleQubitSweep => {
                self.sweep.validate("sweep")?;
                if !(self.pulse.tau >= 0.0) || self.pulse.p_norm() == 0.0 {
                    return cfg_err("pulse needs τ ≥ 0 and a non-zero drive".into());
                }
            }
            ScenarioKind::CphaseSweep | ScenarioKind::ConcurrenceMap => {
                let c = &self.coupling;
                if c.jx != 0.0 || c.jy != 0.0 || !(c.jz > 0.0) || !c.jz.is_finite() {
                    return cfg_err("CPHASE scenarios need an Ising coupling with jz > 0".into());
                }
                if self.scenario == ScenarioKind::CphaseSweep {
                    self.sweep.validate("sweep")?;
                } else {
                    self.map_gamma_d.validate("map_gamma_d")?;
                    self.map_gamma_r.validate("map_gamma_r")?;
                }
            }
            ScenarioKind::GateTable => {}
        }
        Ok(())
    }
}

/// `sample_every` value that records only the initial and final states.
pub const FINAL_ONLY: usize = usize::MAX;

fn merge(base: &mut serde_json::Value, overlay: &serde_json::Value) {
    match (base, overlay) {
        (serde_json::Value::Object(b), serde_json::Value::Object(o)) => {
            for (k, v) in o {
                match b.get_mut(k) {
                    Some(slot) if slot.is_object() && v.is_object() => merge(slot, v),
                    _ => {
                        b.insert(k.clone(), v.clone());
                    }
                }
            }
        }
        (b, o) => *b = o.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_points() {
        let lin = SweepAxis::linear(0.0, 0.4, 5).points();
        assert_eq!(lin.len(), 5);
        assert!((lin[1] - 0.1).abs() < 1e-15);
        assert_eq!(lin[4], 0.4);

        let log = SweepAxis::log_with_zero(1e-3, 0.4, 6).points();
        assert_eq!(log.len(), 6);
        assert_eq!(log[0], 0.0);
        assert!((log[1] - 1e-3).abs() < 1e-18);
        assert_eq!(log[5], 0.4);
        assert!(log.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn sweep_validation() {
        assert!(SweepAxis::linear(0.0, 0.4, 1).validate("s").is_err());
        assert!(SweepAxis::linear(-0.1, 0.4, 3).validate("s").is_err());
        assert!(SweepAxis::linear(0.5, 0.4, 3).validate("s").is_err());
        let mut log = SweepAxis::log_with_zero(0.0, 0.4, 5);
        assert!(log.validate("s").is_err());
        log.min = 1e-3;
        assert!(log.validate("s").is_ok());
    }

    #[test]
    fn state_labels() {
        assert_eq!(
            InitialState::Label("1".into()).to_state().unwrap(),
            PureState::one()
        );
        let pair = InitialState::Label("cw, acw".into()).to_state().unwrap();
        assert_eq!(pair.dim(), 4);
        assert!(InitialState::Label("up".into()).to_state().is_err());
        let amps = InitialState::Amplitudes(vec![[3.0, 0.0], [0.0, 4.0]])
            .to_state()
            .unwrap();
        assert!((amps.amplitudes()[1].im - 0.8).abs() < 1e-15);
    }

    #[test]
    fn json_overlay() {
        let cfg = ScenarioConfig::from_json(
            r#"{"scenario": "CPHASE_SWEEP", "rates": {"gamma_r": 0.1}, "sweep_channel": "relaxation"}"#,
            None,
        )
        .unwrap();
        assert_eq!(cfg.scenario, ScenarioKind::CphaseSweep);
        assert_eq!(cfg.rates, DecoherenceRates::new(0.1, 0.0));
        assert_eq!(cfg.sweep_channel, Channel::Relaxation);
        assert_eq!(cfg.coupling, CouplingConfig::ising(1.0));
        cfg.validate().unwrap();

        let cfg = ScenarioConfig::from_json(
            r#"{"scenario": "CPHASE_SWEEP"}"#,
            Some(ScenarioKind::GateTable),
        )
        .unwrap();
        assert_eq!(cfg.scenario, ScenarioKind::GateTable);

        assert!(ScenarioConfig::from_json("{}", None).is_err());
        assert!(ScenarioConfig::from_json("[1]", Some(ScenarioKind::GateTable)).is_err());
        assert!(
            ScenarioConfig::from_json(r#"{"rates": 3}"#, Some(ScenarioKind::GateTable)).is_err()
        );
    }

    #[test]
    fn scenario_preconditions() {
        let mut cfg = ScenarioConfig::default_for(ScenarioKind::HadamardBloch);
        cfg.validate().unwrap();
        cfg.pulse.tau = 1.0;
        assert!(cfg.validate().is_err());

        let mut cfg = ScenarioConfig::default_for(ScenarioKind::CphaseSweep);
        cfg.validate().unwrap();
        cfg.initial_state = InitialState::Label("0".into());
        assert!(cfg.validate().is_err());

        let mut cfg = ScenarioConfig::default_for(ScenarioKind::ConcurrenceMap);
        cfg.coupling = CouplingConfig::xy(1.0);
        assert!(cfg.validate().is_err());

        let mut cfg = ScenarioConfig::default_for(ScenarioKind::SingleQubitSweep);
        cfg.integrator.dt = Some(0.0);
        assert!(cfg.validate().is_err());
        cfg.integrator.dt = None;
        cfg.rates.gamma_d = -1.0;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn default_dt_is_gate_time_over_2000() {
        let cfg = ScenarioConfig::default_for(ScenarioKind::CphaseSweep);
        assert!((cfg.dt() - FRAC_PI_4 / 2000.0).abs() < 1e-18);
        let cfg = ScenarioConfig::default_for(ScenarioKind::HadamardBloch);
        assert!((cfg.dt() - FRAC_PI_2 / 2000.0).abs() < 1e-18);
    }
}
