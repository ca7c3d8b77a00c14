//! Summary statistics of a finished run.

use serde::Serialize;

use crate::engine::Trajectory;
use crate::error::{Error, Result};

/// Gap above which two sorted values are assigned to different clusters.
pub const DEFAULT_CLUSTER_GAP: f64 = 0.01;

/// Mean absolute opinion–action gap, `(1/n) Σ |x_i - y_i|`.
pub fn group_discrepancy(opinions: &[f64], actions: &[f64]) -> Result<f64> {
    check_lengths(opinions, actions)?;
    let total: f64 = opinions.iter().zip(actions).map(|(x, y)| (x - y).abs()).sum();
    Ok(total / opinions.len() as f64)
}

/// Number of clusters found by sorting and splitting wherever consecutive
/// values differ by more than `gap_threshold`.
pub fn count_clusters(values: &[f64], gap_threshold: f64) -> Result<usize> {
    if values.is_empty() {
        return Err(Error::contract("cannot count clusters of an empty sequence"));
    }
    if !(gap_threshold > 0.0) {
        return Err(Error::contract("cluster gap threshold must be positive"));
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(1 + sorted.windows(2).filter(|w| w[1] - w[0] > gap_threshold).count())
}

fn check_lengths(opinions: &[f64], actions: &[f64]) -> Result<()> {
    if opinions.len() != actions.len() {
        return Err(Error::contract(format!(
            "{} opinions but {} actions",
            opinions.len(),
            actions.len()
        )));
    }
    if opinions.is_empty() {
        return Err(Error::contract("need at least one agent"));
    }
    Ok(())
}

/// Discrepancy and cluster statistics over a set of agents.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupStats {
    pub agent_count: usize,
    pub group_discrepancy: f64,
    pub max_discrepancy: f64,
    pub opinion_cluster_count: usize,
    pub action_cluster_count: usize,
    pub mean_opinion: f64,
    pub mean_action: f64,
}

impl GroupStats {
    pub fn compute(opinions: &[f64], actions: &[f64], gap_threshold: f64) -> Result<Self> {
        let group_discrepancy = group_discrepancy(opinions, actions)?;
        let max_discrepancy = opinions
            .iter()
            .zip(actions)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        let n = opinions.len() as f64;
        Ok(GroupStats {
            agent_count: opinions.len(),
            group_discrepancy,
            max_discrepancy,
            opinion_cluster_count: count_clusters(opinions, gap_threshold)?,
            action_cluster_count: count_clusters(actions, gap_threshold)?,
            mean_opinion: opinions.iter().sum::<f64>() / n,
            mean_action: actions.iter().sum::<f64>() / n,
        })
    }
}

/// Statistics of the final snapshot of a run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    #[serde(flatten)]
    pub overall: GroupStats,
    pub opinion_values: Vec<f64>,
    pub action_values: Vec<f64>,
    /// Present for runs with a minority block; `true` marks flexible agents.
    pub flexible_agent_mask: Option<Vec<bool>>,
    /// The same statistics restricted to flexible agents.
    pub flexible: Option<GroupStats>,
}

impl RunSummary {
    pub fn group_discrepancy(&self) -> f64 {
        self.overall.group_discrepancy
    }

    pub fn max_discrepancy(&self) -> f64 {
        self.overall.max_discrepancy
    }

    pub fn opinion_cluster_count(&self) -> usize {
        self.overall.opinion_cluster_count
    }

    pub fn action_cluster_count(&self) -> usize {
        self.overall.action_cluster_count
    }

    /// Final opinions and actions of flexible agents (all agents when there is no minority).
    pub fn flexible_values(&self) -> (Vec<f64>, Vec<f64>) {
        match &self.flexible_agent_mask {
            None => (self.opinion_values.clone(), self.action_values.clone()),
            Some(mask) => {
                let pick = |v: &[f64]| v.iter().zip(mask).filter(|(_, &m)| m).map(|(&x, _)| x).collect();
                (pick(&self.opinion_values), pick(&self.action_values))
            }
        }
    }

    /// One-line digest for terminal output.
    pub fn digest(&self) -> String {
        let mut line = format!(
            "D={:.6} max_d={:.6} opinion_clusters={} action_clusters={}",
            self.overall.group_discrepancy,
            self.overall.max_discrepancy,
            self.overall.opinion_cluster_count,
            self.overall.action_cluster_count,
        );
        if let Some(flex) = &self.flexible {
            line.push_str(&format!(
                " | flexible: n={} D={:.6} mean_opinion={:.4} mean_action={:.4}",
                flex.agent_count, flex.group_discrepancy, flex.mean_opinion, flex.mean_action
            ));
        }
        line
    }
}

/// Summarises the final snapshot of `trajectory`.
pub fn summarize(trajectory: &Trajectory, gap_threshold: f64) -> Result<RunSummary> {
    if trajectory.is_empty() {
        return Err(Error::contract("empty trajectory"));
    }
    let opinions = trajectory.final_opinions();
    let actions = trajectory.final_actions();
    let overall = GroupStats::compute(opinions, actions, gap_threshold)?;

    let (flexible_agent_mask, flexible) = if trajectory.metadata.innovator_count > 0 {
        let mask = trajectory.flexible_mask();
        let pick = |v: &[f64]| -> Vec<f64> {
            v.iter().zip(&mask).filter(|(_, &m)| m).map(|(&x, _)| x).collect()
        };
        let stats = GroupStats::compute(&pick(opinions), &pick(actions), gap_threshold)?;
        (Some(mask), Some(stats))
    } else {
        (None, None)
    };

    Ok(RunSummary {
        overall,
        opinion_values: opinions.to_vec(),
        action_values: actions.to_vec(),
        flexible_agent_mask,
        flexible,
    })
}
