//! JSON configuration documents and the built-in presets.
//!
//! A scenario document looks like
//!
//! ```json
//! {
//!   "n": 300,
//!   "seed": 7,
//!   "horizon": 50,
//!   "topology": { "kind": "small_world", "k": 6, "p": 0.8 },
//!   "opinion_init": [0.0, 1.0],
//!   "openness": 0.25,
//!   "commitment": [0.7, 0.8],
//!   "minority": { "fraction": 0.2, "openness": 0.0, "commitment": 1.0, "opinion": 1.0 },
//!   "convergence_tol": 0.0
//! }
//! ```
//!
//! `openness` and `commitment` are required; the rest default to a complete
//! graph, `horizon = 50`, opinions uniform on `[0, 1]`, no minority, seed 0
//! and no early stopping. A document with a top-level `base` key is a sweep:
//!
//! ```json
//! {
//!   "seed": 1,
//!   "runs_per_cell": 10,
//!   "epsilon": { "start": 0.0, "stop": 0.5, "step": 0.05 },
//!   "phi": { "start": 0.0, "stop": 1.0, "step": 0.05 },
//!   "base": { "n": 300 }
//! }
//! ```
//!
//! Unknown keys are rejected everywhere.

use std::io::Read;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::engine::{
    Interval, MinoritySize, MinoritySpec, ScenarioConfig, Topology, TraitSpec, DEFAULT_HORIZON,
};
use crate::error::{Error, Result};
use crate::sweep::{GridAxis, SweepSpec};

/// Raw scenario document before validation.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioDoc {
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub horizon: Option<usize>,
    pub topology: Option<Topology>,
    pub opinion_init: Option<Interval>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub openness: Option<TraitSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub commitment: Option<TraitSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub minority: Option<MinorityDoc>,
    pub convergence_tol: Option<f64>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MinorityDoc {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fraction: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    pub openness: Option<f64>,
    pub commitment: Option<f64>,
    pub opinion: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepDoc {
    pub seed: Option<u64>,
    pub runs_per_cell: Option<usize>,
    pub epsilon: Option<GridAxis>,
    pub phi: Option<GridAxis>,
    pub base: ScenarioDoc,
}

fn missing(field: &str) -> Error {
    Error::config(format!("{field} missing"))
}

impl MinorityDoc {
    fn into_spec(self) -> Result<MinoritySpec> {
        let size = match (self.fraction, self.count) {
            (Some(f), None) => MinoritySize::Fraction(f),
            (None, Some(c)) => MinoritySize::Count(c),
            (None, None) => return Err(missing("minority.fraction or minority.count")),
            (Some(_), Some(_)) => {
                return Err(Error::config("minority: give either fraction or count, not both"))
            }
        };
        Ok(MinoritySpec {
            size,
            openness: self.openness.ok_or_else(|| missing("minority.openness"))?,
            commitment: self.commitment.ok_or_else(|| missing("minority.commitment"))?,
            opinion: self.opinion.ok_or_else(|| missing("minority.opinion"))?,
        })
    }
}

impl From<MinoritySpec> for MinorityDoc {
    fn from(m: MinoritySpec) -> Self {
        let (fraction, count) = match m.size {
            MinoritySize::Fraction(f) => (Some(f), None),
            MinoritySize::Count(c) => (None, Some(c)),
        };
        MinorityDoc {
            fraction,
            count,
            openness: Some(m.openness),
            commitment: Some(m.commitment),
            opinion: Some(m.opinion),
        }
    }
}

impl ScenarioDoc {
    /// Applies defaults and validates. Sweep templates may omit the traits,
    /// which are overwritten per grid cell anyway.
    fn into_config(self, traits_required: bool) -> Result<ScenarioConfig> {
        let trait_or = |spec: Option<TraitSpec>, name: &str| match spec {
            Some(s) => Ok(s),
            None if traits_required => Err(missing(name)),
            None => Ok(TraitSpec::Fixed(0.0)),
        };
        let config = ScenarioConfig {
            n: self.n.ok_or_else(|| missing("n"))?,
            horizon: self.horizon.unwrap_or(DEFAULT_HORIZON),
            seed: self.seed.unwrap_or(0),
            topology: self.topology.unwrap_or(Topology::Complete),
            opinion_init: self.opinion_init.unwrap_or(Interval { low: 0.0, high: 1.0 }),
            openness: trait_or(self.openness, "openness")?,
            commitment: trait_or(self.commitment, "commitment")?,
            minority: self.minority.map(MinorityDoc::into_spec).transpose()?,
            convergence_tol: self.convergence_tol.unwrap_or(0.0),
        };
        config.validate()?;
        Ok(config)
    }
}

impl From<ScenarioConfig> for ScenarioDoc {
    fn from(c: ScenarioConfig) -> Self {
        ScenarioDoc {
            n: Some(c.n),
            seed: Some(c.seed),
            horizon: Some(c.horizon),
            topology: Some(c.topology),
            opinion_init: Some(c.opinion_init),
            openness: Some(c.openness),
            commitment: Some(c.commitment),
            minority: c.minority.map(MinorityDoc::from),
            convergence_tol: Some(c.convergence_tol),
        }
    }
}

impl From<SweepSpec> for SweepDoc {
    fn from(s: SweepSpec) -> Self {
        let mut base = ScenarioDoc::from(s.base);
        // Per-cell values; the template's own are meaningless.
        base.openness = None;
        base.commitment = None;
        base.seed = None;
        SweepDoc {
            seed: Some(s.seed),
            runs_per_cell: Some(s.runs_per_cell),
            epsilon: Some(s.epsilon),
            phi: Some(s.phi),
            base,
        }
    }
}

impl SweepDoc {
    fn into_spec(self) -> Result<SweepSpec> {
        let spec = SweepSpec {
            epsilon: self.epsilon.ok_or_else(|| missing("epsilon"))?,
            phi: self.phi.ok_or_else(|| missing("phi"))?,
            runs_per_cell: self.runs_per_cell.ok_or_else(|| missing("runs_per_cell"))?,
            base: self.base.into_config(false)?,
            seed: self.seed.unwrap_or(0),
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// A parsed configuration: one run or a whole sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum ConfigDocument {
    Scenario(ScenarioConfig),
    Sweep(SweepSpec),
}

impl ConfigDocument {
    /// Overrides the master seed.
    pub fn with_seed(mut self, seed: u64) -> Self {
        match &mut self {
            ConfigDocument::Scenario(c) => c.seed = seed,
            ConfigDocument::Sweep(s) => s.seed = seed,
        }
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("configuration serializes")
    }
}

/// Parses and validates a JSON configuration document.
pub fn parse_config<R: Read>(source: R) -> Result<ConfigDocument> {
    let value: Value = serde_json::from_reader(source).map_err(|e| Error::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let Value::Object(map) = &value else {
        return Err(Error::config("document must be a JSON object"));
    };
    let semantic = |e: serde_json::Error| Error::config(e.to_string());
    if map.contains_key("base") {
        let doc = SweepDoc::deserialize(value).map_err(semantic)?;
        Ok(ConfigDocument::Sweep(doc.into_spec()?))
    } else {
        let doc = ScenarioDoc::deserialize(value).map_err(semantic)?;
        Ok(ConfigDocument::Scenario(doc.into_config(true)?))
    }
}

pub fn parse_config_str(text: &str) -> Result<ConfigDocument> {
    parse_config(text.as_bytes())
}

/// Names accepted by [`preset`].
pub const PRESET_NAMES: &[&str] = &[
    "fig3", "fig4", "fig5", "fig6", "fig8", "fig9", "fig10", "fig11", "fig12", "sweep", "sweep-desk",
];

/// Population size used by every single-run preset.
pub const PRESET_POPULATION: usize = 300;

fn homogeneous(openness: f64, commitment: f64, seed: u64) -> ScenarioConfig {
    ScenarioConfig::homogeneous(PRESET_POPULATION, openness, commitment, seed)
}

/// 20% innovators at opinion = action = 1, flexible agents starting in `[0, 0.5]`.
fn minority(openness: (f64, f64), commitment: (f64, f64), seed: u64) -> ScenarioConfig {
    let mut c = homogeneous(0.0, 0.0, seed);
    c.minority = Some(MinoritySpec::innovators(0.2));
    c.opinion_init = Interval { low: 0.0, high: 0.5 };
    c.openness = TraitSpec::Uniform(Interval { low: openness.0, high: openness.1 });
    c.commitment = TraitSpec::Uniform(Interval { low: commitment.0, high: commitment.1 });
    c
}

fn grid_sweep(n: usize, step: f64, runs_per_cell: usize, seed: u64) -> SweepSpec {
    SweepSpec {
        epsilon: GridAxis::new(0.0, 0.5, step),
        phi: GridAxis::new(0.0, 1.0, step),
        runs_per_cell,
        base: ScenarioConfig::homogeneous(n, 0.0, 0.0, 0),
        seed,
    }
}

/// Expands a named preset with the given seed.
pub fn preset(name: &str, seed: u64) -> Option<ConfigDocument> {
    let scenario = |c| Some(ConfigDocument::Scenario(c));
    match name {
        "fig3" => scenario(homogeneous(0.1, 0.3, seed)),
        "fig4" => scenario(homogeneous(0.1, 0.7, seed)),
        "fig5" => scenario(homogeneous(0.25, 0.3, seed)),
        "fig6" => scenario(homogeneous(0.25, 0.7, seed)),
        "fig8" => {
            let mut c = homogeneous(0.25, 0.7, seed);
            c.topology = Topology::SmallWorld { k: 6, p: 0.8 };
            scenario(c)
        }
        "fig9" => {
            let mut c = homogeneous(0.25, 0.7, seed);
            c.topology = Topology::ScaleFree { m0: 9, m: 6 };
            scenario(c)
        }
        "fig10" => scenario(minority((0.25, 0.3), (0.7, 0.8), seed)),
        "fig11" => scenario(minority((0.05, 0.1), (0.7, 0.8), seed)),
        "fig12" => scenario(minority((0.05, 0.1), (0.1, 0.2), seed)),
        "sweep" => Some(ConfigDocument::Sweep(grid_sweep(PRESET_POPULATION, 0.05, 10, seed))),
        "sweep-desk" => Some(ConfigDocument::Sweep(grid_sweep(100, 0.1, 5, seed))),
        _ => None,
    }
}
