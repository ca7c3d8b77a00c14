//! Repeated runs over an (openness, commitment) grid.
//!
//! Every replicate draws from its own seed, derived from the sweep seed and
//! the replicate's grid coordinates, so results do not depend on how the
//! work is scheduled across threads.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::SweepDoc;
use crate::engine::{self, derive_seed, ScenarioConfig, TraitSpec};
use crate::error::{Error, Result};
use crate::metrics::group_discrepancy;

/// Slack used when evaluating the boundary rule on decimal grid values.
const RULE_SLACK: f64 = 1e-9;

/// Inclusive, evenly spaced axis `start, start + step, ..., stop`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridAxis {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl GridAxis {
    pub fn new(start: f64, stop: f64, step: f64) -> Self {
        GridAxis { start, stop, step }
    }

    pub(crate) fn validate(&self, field: &str) -> Result<()> {
        if !(0.0..=1.0).contains(&self.start) || !(0.0..=1.0).contains(&self.stop) {
            return Err(Error::config(format!("{field}: range must lie in [0, 1]")));
        }
        if self.start > self.stop {
            return Err(Error::config(format!("{field}: range bounds out of order")));
        }
        if !(self.step > 0.0) {
            return Err(Error::config(format!("{field}: step must be positive")));
        }
        let intervals = (self.stop - self.start) / self.step;
        if (intervals - intervals.round()).abs() > 1e-6 {
            return Err(Error::config(format!("{field}: step must divide the range evenly")));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        ((self.stop - self.start) / self.step).round() as usize + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Grid values, snapped to 12 decimals so that e.g. `3 * 0.1` reads as `0.3`.
    pub fn points(&self) -> Vec<f64> {
        (0..self.len())
            .map(|i| {
                let v = self.start + i as f64 * self.step;
                ((v * 1e12).round() / 1e12).clamp(self.start, self.stop)
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(into = "SweepDoc")]
pub struct SweepSpec {
    pub epsilon: GridAxis,
    pub phi: GridAxis,
    pub runs_per_cell: usize,
    /// Template run; openness, commitment and seed are set per replicate.
    pub base: ScenarioConfig,
    pub seed: u64,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        self.epsilon.validate("epsilon")?;
        self.phi.validate("phi")?;
        if self.runs_per_cell == 0 {
            return Err(Error::config("runs_per_cell: must be at least 1"));
        }
        self.base.validate()
    }

    /// Configuration of replicate `rep` of grid cell (`ei`, `pi`).
    pub fn replicate_config(&self, ei: usize, pi: usize, rep: usize) -> ScenarioConfig {
        let mut cfg = self.base.clone();
        cfg.openness = TraitSpec::Fixed(self.epsilon.points()[ei]);
        cfg.commitment = TraitSpec::Fixed(self.phi.points()[pi]);
        cfg.seed = derive_seed(self.seed, "sweep-replicate", &[ei as u64, pi as u64, rep as u64]);
        cfg
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellResult {
    pub epsilon: f64,
    pub phi: f64,
    pub mean_d: f64,
    /// Sample standard deviation (zero for a single replicate).
    pub std_d: f64,
    pub runs: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub spec: SweepSpec,
    /// Row-major: epsilon outer, phi inner.
    pub cells: Vec<CellResult>,
}

impl SweepResult {
    pub fn cell(&self, ei: usize, pi: usize) -> &CellResult {
        &self.cells[ei * self.spec.phi.len() + pi]
    }

    /// Cell whose grid values match within `1e-9`.
    pub fn find(&self, epsilon: f64, phi: f64) -> Option<&CellResult> {
        self.cells
            .iter()
            .find(|c| (c.epsilon - epsilon).abs() < 1e-9 && (c.phi - phi).abs() < 1e-9)
    }
}

/// Runs every replicate of every cell on `parallelism` worker threads.
pub fn run_sweep(spec: &SweepSpec, parallelism: usize) -> Result<SweepResult> {
    spec.validate()?;
    let eps = spec.epsilon.points();
    let phi = spec.phi.points();
    let runs = spec.runs_per_cell;
    let jobs: Vec<(usize, usize, usize)> = (0..eps.len())
        .flat_map(|ei| (0..phi.len()).flat_map(move |pi| (0..runs).map(move |r| (ei, pi, r))))
        .collect();

    let simulate = |&(ei, pi, r): &(usize, usize, usize)| -> Result<f64> {
        let t = engine::run(&spec.replicate_config(ei, pi, r))?;
        group_discrepancy(t.final_opinions(), t.final_actions())
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallelism.max(1))
        .build()
        .map_err(|e| Error::config(format!("cannot start worker pool: {e}")))?;
    // par_iter().collect() preserves job order.
    let values: Vec<f64> = pool.install(|| jobs.par_iter().map(simulate).collect::<Result<_>>())?;

    let cells = values
        .chunks(runs)
        .enumerate()
        .map(|(c, ds)| {
            let (mean_d, std_d) = mean_std(ds);
            CellResult {
                epsilon: eps[c / phi.len()],
                phi: phi[c % phi.len()],
                mean_d,
                std_d,
                runs: ds.len(),
            }
        })
        .collect();
    Ok(SweepResult {
        spec: spec.clone(),
        cells,
    })
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// `10 ε + 3 φ`; cells at or above 3.5 are expected to align fully.
pub fn boundary_score(epsilon: f64, phi: f64) -> f64 {
    10.0 * epsilon + 3.0 * phi
}

pub fn above_boundary(epsilon: f64, phi: f64) -> bool {
    boundary_score(epsilon, phi) >= 3.5 - RULE_SLACK
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassStats {
    pub cells: usize,
    pub mean_of_mean_d: f64,
    pub min_mean_d: f64,
    pub max_mean_d: f64,
    /// Cells whose mean D falls on the side the rule predicts.
    pub consistent: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryReport {
    pub rule: String,
    pub threshold: f64,
    pub above: ClassStats,
    pub below: ClassStats,
    /// Cells above the line with `mean_D > threshold`.
    pub misclassified_above: usize,
    /// Cells below the line with `mean_D <= threshold`.
    pub misclassified_below: usize,
    pub consistency_fraction: f64,
    /// Soft check: adjacent epsilon steps (phi fixed) where mean D rises by more than `threshold`.
    pub monotonicity_violations: usize,
}

/// Classifies cells by the linear boundary rule and counts disagreements
/// with the observed mean discrepancy at `threshold`.
pub fn boundary_report(result: &SweepResult, threshold: f64) -> BoundaryReport {
    let (above, below): (Vec<&CellResult>, Vec<&CellResult>) =
        result.cells.iter().partition(|c| above_boundary(c.epsilon, c.phi));

    let stats = |cells: &[&CellResult], aligned: bool| {
        let ds: Vec<f64> = cells.iter().map(|c| c.mean_d).collect();
        let consistent = ds.iter().filter(|&&d| (d <= threshold) == aligned).count();
        if ds.is_empty() {
            return ClassStats { cells: 0, mean_of_mean_d: 0.0, min_mean_d: 0.0, max_mean_d: 0.0, consistent };
        }
        ClassStats {
            cells: ds.len(),
            mean_of_mean_d: ds.iter().sum::<f64>() / ds.len() as f64,
            min_mean_d: ds.iter().copied().fold(f64::INFINITY, f64::min),
            max_mean_d: ds.iter().copied().fold(0.0, f64::max),
            consistent,
        }
    };
    let above = stats(&above, true);
    let below = stats(&below, false);
    let misclassified_above = above.cells - above.consistent;
    let misclassified_below = below.cells - below.consistent;
    let total = result.cells.len().max(1);

    let phis = result.spec.phi.len();
    let epss = result.spec.epsilon.len();
    let monotonicity_violations = (0..phis)
        .flat_map(|pi| (1..epss).map(move |ei| (ei, pi)))
        .filter(|&(ei, pi)| result.cell(ei, pi).mean_d > result.cell(ei - 1, pi).mean_d + threshold)
        .count();

    BoundaryReport {
        rule: "10*epsilon + 3*phi >= 3.5".into(),
        threshold,
        consistency_fraction: (above.consistent + below.consistent) as f64 / total as f64,
        above,
        below,
        misclassified_above,
        misclassified_below,
        monotonicity_violations,
    }
}
