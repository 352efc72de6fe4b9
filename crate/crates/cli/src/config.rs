//! Experiment configuration: a TOML subset with every default filled in.
//!
//! Grammar: top-level `kind`, `seed`, `out`, then the tables `[grid]`,
//! `[physics]`, `[decay]`, `[partition]`, `[linear]`, `[run]`, `[init]` and
//! `[ineq]`. Values are strings, numbers, booleans or arrays of numbers.
//! Lengths (`L`) accept a number or a multiple of π written `"2pi"`, `"64π"`
//! or `"pi"`. Unknown keys are errors.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize};

use nsp_decay_core::decay::{check_lebesgue_exponent, DecayParams};
use nsp_decay_core::physics::{PhysicalParams, ViscosityModel};

use crate::error::LabError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    LinearDecay,
    Simulate,
    Ineq,
    PartitionCheck,
}

impl Kind {
    pub fn as_str(&self) -> &'static str {
        match self {
            Kind::LinearDecay => "linear-decay",
            Kind::Simulate => "simulate",
            Kind::Ineq => "ineq",
            Kind::PartitionCheck => "partition-check",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Parses `"2pi"`, `"64π"`, `"pi"`, `"2*pi"` or a plain decimal.
pub fn parse_length(text: &str) -> Result<f64, String> {
    let t = text.trim();
    let stripped = t
        .strip_suffix("pi")
        .or_else(|| t.strip_suffix('π'))
        .map(|s| s.trim().trim_end_matches('*').trim());
    let value = match stripped {
        Some("") => std::f64::consts::PI,
        Some(k) => k.parse::<f64>().map_err(|_| format!("cannot read length {text:?}"))? * std::f64::consts::PI,
        None => t.parse::<f64>().map_err(|_| format!("cannot read length {text:?}"))?,
    };
    Ok(value)
}

fn length<'de, D: Deserializer<'de>>(de: D) -> Result<f64, D::Error> {
    struct Length;
    impl Visitor<'_> for Length {
        type Value = f64;
        fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
            f.write_str("a number or a multiple of pi such as \"2pi\"")
        }
        fn visit_f64<E: de::Error>(self, v: f64) -> Result<f64, E> {
            Ok(v)
        }
        fn visit_i64<E: de::Error>(self, v: i64) -> Result<f64, E> {
            Ok(v as f64)
        }
        fn visit_u64<E: de::Error>(self, v: u64) -> Result<f64, E> {
            Ok(v as f64)
        }
        fn visit_str<E: de::Error>(self, v: &str) -> Result<f64, E> {
            parse_length(v).map_err(E::custom)
        }
    }
    de.deserialize_any(Length)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridBlock {
    pub d: usize,
    pub n: usize,
    #[serde(rename = "L", deserialize_with = "length")]
    pub side: f64,
}

impl Default for GridBlock {
    fn default() -> Self {
        GridBlock {
            d: 2,
            n: 64,
            side: std::f64::consts::TAU,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Viscosity {
    Constant,
    PowerLaw,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PhysicsBlock {
    pub mu_inf: f64,
    pub lambda_inf: f64,
    pub gamma: f64,
    pub poisson: bool,
    pub viscosity: Viscosity,
    /// `β` in `μ(ϱ) = μ∞ ϱ^β`; only read for `viscosity = "power-law"`.
    pub viscosity_exponent: f64,
}

impl Default for PhysicsBlock {
    fn default() -> Self {
        PhysicsBlock {
            mu_inf: 0.25,
            lambda_inf: 0.5,
            gamma: 1.4,
            poisson: true,
            viscosity: Viscosity::Constant,
            viscosity_exponent: 0.0,
        }
    }
}

impl PhysicsBlock {
    pub fn params(&self) -> PhysicalParams<f64> {
        PhysicalParams {
            mu_inf: self.mu_inf,
            lambda_inf: self.lambda_inf,
            gamma: self.gamma,
            viscosity: match self.viscosity {
                Viscosity::Constant => ViscosityModel::Constant,
                Viscosity::PowerLaw => ViscosityModel::PowerLaw {
                    exponent: self.viscosity_exponent,
                },
            },
            poisson: self.poisson,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DecayBlock {
    pub p: f64,
    /// Defaults to the endpoint `s₀ = 2d/p − d/2`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s1: Option<f64>,
    pub epsilon: f64,
    pub j0: i32,
    /// Defaults to `{ε − s₁, 0, d/2 − 1, d/2, d/2 + 1}` within range.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s_samples: Option<Vec<f64>>,
    pub fit_window: [f64; 2],
}

impl Default for DecayBlock {
    fn default() -> Self {
        DecayBlock {
            p: 2.0,
            s1: None,
            epsilon: 0.01,
            j0: 0,
            s_samples: None,
            fit_window: [10.0, 1000.0],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PartitionBlock {
    /// Random fields used for the orthogonality, reconstruction and
    /// `Ḃ⁰_{2,2}` checks.
    pub fields: usize,
}

impl Default for PartitionBlock {
    fn default() -> Self {
        PartitionBlock { fields: 100 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RadialData {
    /// `â₀ = 0`, `ω̂₀ = 1_{r ≤ 1}`.
    PotentialIndicator,
    /// `(â₀, ω̂₀, |P̂u₀|) = weights·e^{-r²/(2 width²)}`.
    Gaussian,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct LinearBlock {
    pub profile: RadialData,
    pub width: f64,
    pub weights: [f64; 3],
    pub t_start: f64,
    pub t_end: f64,
    pub samples: usize,
    /// Regularity `s` of the fitted `‖Λ^s ·‖_{L²}`.
    pub s: f64,
    pub tolerance: f64,
    pub semigroup: bool,
    pub scan_r_max: f64,
    pub scan_t_max: f64,
    pub scan_samples: usize,
    pub c0: f64,
    pub bound: f64,
}

impl Default for LinearBlock {
    fn default() -> Self {
        LinearBlock {
            profile: RadialData::PotentialIndicator,
            width: 1.0,
            weights: [0.0, 1.0, 0.0],
            t_start: 1.0,
            t_end: 1000.0,
            samples: 100,
            s: 0.0,
            tolerance: 0.05,
            semigroup: true,
            scan_r_max: 1.0,
            scan_t_max: 100.0,
            scan_samples: 200,
            c0: 0.4,
            bound: 3.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DynamicsChoice {
    Full,
    LinearOnly,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunBlock {
    pub horizon: f64,
    pub cadence: f64,
    pub dt: f64,
    pub dynamics: DynamicsChoice,
    pub divergence_factor: f64,
    /// Bound on `‖a₀‖_{Ḃ^{d/p}_{p,1}}`; `0` disables the check.
    pub smallness: f64,
    /// Write a checkpoint every this many outputs (the first and last are
    /// always written); `0` writes only those two.
    pub checkpoint_every: usize,
}

impl Default for RunBlock {
    fn default() -> Self {
        RunBlock {
            horizon: 100.0,
            cadence: 1.0,
            dt: 0.1,
            dynamics: DynamicsChoice::Full,
            divergence_factor: 10.0,
            smallness: 0.05,
            checkpoint_every: 10,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitShape {
    Bump,
    Random,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct InitBlock {
    pub profile: InitShape,
    /// Depth of the density well: `min a₀ = −amplitude`.
    pub amplitude: f64,
    pub width: f64,
    pub radius: f64,
}

impl Default for InitBlock {
    fn default() -> Self {
        InitBlock {
            profile: InitShape::Bump,
            amplitude: 0.01,
            width: 2.0,
            radius: 2.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct IneqBlock {
    pub d: usize,
    #[serde(rename = "L", deserialize_with = "length")]
    pub side: f64,
    pub grids: Vec<usize>,
    pub trials: usize,
}

impl Default for IneqBlock {
    fn default() -> Self {
        IneqBlock {
            d: 2,
            side: std::f64::consts::TAU,
            grids: vec![64, 128, 256],
            trials: 20,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<Kind>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub grid: GridBlock,
    #[serde(default)]
    pub physics: PhysicsBlock,
    #[serde(default)]
    pub decay: DecayBlock,
    #[serde(default)]
    pub partition: PartitionBlock,
    #[serde(default)]
    pub linear: LinearBlock,
    #[serde(default)]
    pub run: RunBlock,
    #[serde(default)]
    pub init: InitBlock,
    #[serde(default)]
    pub ineq: IneqBlock,
}

fn config_err(msg: impl Into<String>) -> LabError {
    LabError::Config(msg.into())
}

fn positive(name: &str, v: f64) -> Result<(), LabError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(config_err(format!("{name} > 0 violated ({name} = {v})")))
    }
}

impl ExperimentConfig {
    /// Parses `text`; `kind` (from the command line) must agree with a
    /// `kind` key in the file when both are present.
    pub fn parse(text: &str, kind: Option<Kind>) -> Result<Self, LabError> {
        let mut cfg: ExperimentConfig = toml::from_str(text).map_err(|e| config_err(e.to_string().trim_end()))?;
        match (cfg.kind, kind) {
            (Some(a), Some(b)) if a != b => {
                return Err(config_err(format!("config declares kind `{a}` but `{b}` was requested")))
            }
            (None, None) => return Err(config_err("no experiment kind given")),
            (None, Some(b)) => cfg.kind = Some(b),
            _ => {}
        }
        cfg.resolve()?;
        Ok(cfg)
    }

    pub fn kind(&self) -> Kind {
        self.kind.expect("kind is set by parse")
    }

    /// Fills the derived defaults and re-validates every block.
    pub fn resolve(&mut self) -> Result<(), LabError> {
        let g = &self.grid;
        if !(2..=3).contains(&g.d) {
            return Err(config_err(format!("d ∈ {{2, 3}} violated (d = {})", g.d)));
        }
        if g.n < 4 || !g.n.is_multiple_of(2) {
            return Err(config_err(format!("n even and ≥ 4 violated (n = {})", g.n)));
        }
        positive("L", g.side)?;
        self.physics.params().validate()?;
        if self.physics.viscosity == Viscosity::Constant && self.physics.viscosity_exponent != 0.0 {
            return Err(config_err("viscosity_exponent requires viscosity = \"power-law\""));
        }
        let dec = &mut self.decay;
        check_lebesgue_exponent(g.d, dec.p)?;
        let s0 = 2.0 * g.d as f64 / dec.p - g.d as f64 / 2.0;
        let s1 = *dec.s1.get_or_insert(s0);
        let mut params = DecayParams::new(g.d, dec.p, s1)?;
        params.epsilon = dec.epsilon;
        params.j0 = dec.j0;
        let samples = dec.s_samples.get_or_insert_with(|| params.default_s_grid()).clone();
        params.s_samples = samples;
        params.validate()?;
        let [ta, tb] = dec.fit_window;
        if !(ta > 0.0 && tb > ta && tb.is_finite()) {
            return Err(config_err(format!("0 < fit_window[0] < fit_window[1] violated ({ta}, {tb})")));
        }
        if self.partition.fields == 0 {
            return Err(config_err("partition.fields ≥ 1 violated"));
        }
        let lin = &self.linear;
        positive("linear.width", lin.width)?;
        positive("linear.t_start", lin.t_start)?;
        if !(lin.t_end > lin.t_start && lin.t_end.is_finite()) {
            return Err(config_err("linear.t_start < linear.t_end violated"));
        }
        if lin.samples < 2 {
            return Err(config_err("linear.samples ≥ 2 violated"));
        }
        if !lin.s.is_finite() {
            return Err(config_err("linear.s must be finite"));
        }
        positive("linear.tolerance", lin.tolerance)?;
        positive("linear.scan_r_max", lin.scan_r_max)?;
        positive("linear.scan_t_max", lin.scan_t_max)?;
        positive("linear.bound", lin.bound)?;
        if !(lin.c0 >= 0.0 && lin.c0.is_finite()) {
            return Err(config_err(format!("linear.c0 ≥ 0 violated (c0 = {})", lin.c0)));
        }
        if lin.scan_samples < 2 {
            return Err(config_err("linear.scan_samples ≥ 2 violated"));
        }
        let run = &self.run;
        positive("run.horizon", run.horizon)?;
        positive("run.cadence", run.cadence)?;
        positive("run.dt", run.dt)?;
        if run.cadence > run.horizon {
            return Err(config_err("run.cadence ≤ run.horizon violated"));
        }
        if !(run.divergence_factor > 1.0 && run.divergence_factor.is_finite()) {
            return Err(config_err("run.divergence_factor > 1 violated"));
        }
        if !(run.smallness >= 0.0 && run.smallness.is_finite()) {
            return Err(config_err("run.smallness ≥ 0 violated"));
        }
        let init = &self.init;
        if !(init.amplitude >= 0.0 && init.amplitude.is_finite()) {
            return Err(config_err("init.amplitude ≥ 0 violated"));
        }
        positive("init.width", init.width)?;
        positive("init.radius", init.radius)?;
        let iq = &self.ineq;
        if !(2..=3).contains(&iq.d) {
            return Err(config_err(format!("ineq.d ∈ {{2, 3}} violated (d = {})", iq.d)));
        }
        positive("ineq.L", iq.side)?;
        if iq.grids.is_empty() || iq.trials == 0 {
            return Err(config_err("ineq needs at least one grid and one trial"));
        }
        Ok(())
    }

    /// Decay parameters of the resolved config.
    pub fn decay_params(&self) -> Result<DecayParams, LabError> {
        let d = &self.decay;
        let mut params = DecayParams::new(self.grid.d, d.p, d.s1.expect("resolved"))?;
        params.epsilon = d.epsilon;
        params.j0 = d.j0;
        params.s_samples = d.s_samples.clone().expect("resolved");
        params.validate()?;
        Ok(params)
    }

    /// The resolved config as TOML, loadable with [`load_config`].
    pub fn to_toml(&self) -> Result<String, LabError> {
        toml::to_string(self).map_err(|e| LabError::Internal(format!("cannot serialise config: {e}")))
    }
}

pub fn load_config(path: &Path, kind: Option<Kind>) -> Result<ExperimentConfig, LabError> {
    let text = std::fs::read_to_string(path).map_err(|e| LabError::io(path, e))?;
    ExperimentConfig::parse(&text, kind)
}
