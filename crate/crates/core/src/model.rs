//! Agent state and the per-agent update rules.
//!
//! One time step consists of two phases. First every agent collects the
//! agents whose *actions* lie within its openness radius of its own opinion
//! and averages those actions together with its own opinion. Then it picks
//! the action that maximises a quadratic utility trading off distance to its
//! new opinion against distance to the population's mean action.

use crate::error::{Error, Result};
use crate::graph::Graph;

/// State of a single agent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AgentState {
    /// Private opinion in `[0, 1]`.
    pub opinion: f64,
    /// Public action in `[0, 1]`.
    pub action: f64,
    /// Confidence radius in `[0, 1]`. Fixed for a run.
    pub openness: f64,
    /// Weight on acting according to one's own opinion, in `[0, 1]`. Fixed for a run.
    pub commitment: f64,
}

impl AgentState {
    /// New agent whose initial action equals its opinion.
    pub fn new(opinion: f64, openness: f64, commitment: f64) -> Self {
        AgentState {
            opinion,
            action: opinion,
            openness,
            commitment,
        }
    }

    fn validate(&self, index: usize) -> Result<()> {
        let fields = [
            ("opinion", self.opinion),
            ("action", self.action),
            ("openness", self.openness),
            ("commitment", self.commitment),
        ];
        for (name, value) in fields {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::config(format!(
                    "agent {index}: {name} = {value} is outside [0, 1]"
                )));
            }
        }
        Ok(())
    }
}

/// Agents indexed `0..n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Population {
    agents: Vec<AgentState>,
}

impl Population {
    pub fn new(agents: Vec<AgentState>) -> Result<Self> {
        if agents.is_empty() {
            return Err(Error::config("population must contain at least one agent"));
        }
        for (i, agent) in agents.iter().enumerate() {
            agent.validate(i)?;
        }
        Ok(Population { agents })
    }

    /// Homogeneous population with `action = opinion` for every agent.
    pub fn homogeneous(opinions: &[f64], openness: f64, commitment: f64) -> Result<Self> {
        Population::new(
            opinions
                .iter()
                .map(|&x| AgentState::new(x, openness, commitment))
                .collect(),
        )
    }

    pub(crate) fn from_agents_unchecked(agents: Vec<AgentState>) -> Self {
        Population { agents }
    }

    pub fn len(&self) -> usize {
        self.agents.len()
    }

    /// Always false; a population has at least one agent.
    pub fn is_empty(&self) -> bool {
        self.agents.is_empty()
    }

    pub fn agents(&self) -> &[AgentState] {
        &self.agents
    }

    pub fn agent(&self, i: usize) -> Result<&AgentState> {
        self.agents
            .get(i)
            .ok_or_else(|| Error::contract(format!("agent index {i} out of range for {} agents", self.len())))
    }

    pub fn opinions(&self) -> Vec<f64> {
        self.agents.iter().map(|a| a.opinion).collect()
    }

    pub fn actions(&self) -> Vec<f64> {
        self.agents.iter().map(|a| a.action).collect()
    }

    /// The subjective norm: mean action over the whole population.
    pub fn mean_action(&self) -> f64 {
        shifted_mean(self.agents.iter().map(|a| a.action))
    }
}

/// Inputs to an agent's utility at one step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UtilityTerms {
    /// The agent's opinion after this step's opinion update.
    pub updated_opinion: f64,
    /// Population mean action before this step.
    pub norm: f64,
    pub commitment: f64,
}

/// Agents `j != i`, adjacent to `i`, whose action is within `openness` of
/// agent `i`'s opinion (inclusive). Returned in ascending index order.
pub fn neighbor_set(i: usize, population: &Population, graph: &Graph, openness: f64) -> Result<Vec<usize>> {
    check_graph(population, graph)?;
    let focal = population.agent(i)?.opinion;
    let agents = population.agents();
    Ok(graph
        .neighbors(i)
        .iter()
        .copied()
        .filter(|&j| within(focal, agents[j].action, openness))
        .collect())
}

/// Average of the neighbors' actions together with agent `i`'s own opinion.
/// An empty neighbor set leaves the opinion unchanged.
pub fn update_opinion(i: usize, population: &Population, neighbors: &[usize]) -> Result<f64> {
    let own = population.agent(i)?.opinion;
    let mut shift = 0.0;
    for &j in neighbors {
        shift += population.agent(j)?.action - own;
    }
    Ok(fuse(own, shift, neighbors.len()))
}

/// `-φ (y - x')² - (1 - φ) (y - ȳ)²`.
pub fn evaluate_utility(candidate_action: f64, terms: &UtilityTerms) -> f64 {
    let own = candidate_action - terms.updated_opinion;
    let social = candidate_action - terms.norm;
    -terms.commitment * own * own - (1.0 - terms.commitment) * social * social
}

/// The maximiser of [`evaluate_utility`]: `φ x' + (1 - φ) ȳ`.
///
/// Equal opinion and norm are returned unchanged, so consensus states are
/// exact fixed points.
pub fn update_action(terms: &UtilityTerms) -> f64 {
    if terms.updated_opinion == terms.norm {
        return terms.norm;
    }
    terms.commitment * terms.updated_opinion + (1.0 - terms.commitment) * terms.norm
}

/// One synchronous step of the classical bounded-confidence model, where each
/// opinion moves to the mean of all opinions (its own included) within
/// `epsilon` among itself and its graph neighbors.
pub fn classical_hk_step(opinions: &[f64], epsilon: f64, graph: &Graph) -> Result<Vec<f64>> {
    if opinions.len() != graph.node_count() {
        return Err(Error::config(format!(
            "graph has {} nodes but there are {} opinions",
            graph.node_count(),
            opinions.len()
        )));
    }
    Ok((0..opinions.len())
        .map(|i| {
            let xi = opinions[i];
            shifted_mean(
                opinions
                    .iter()
                    .enumerate()
                    .filter(|&(j, &xj)| (j == i || graph.has_edge(i, j)) && within(xi, xj, epsilon))
                    .map(|(_, &xj)| xj),
            )
        })
        .collect())
}

/// Absolute slack on the confidence-radius comparison. Radii and states are
/// usually decimal literals (0.1, 0.25, ...), and differences such as
/// `0.8 - 0.5` round to just above `0.3`.
pub const BOUNDARY_SLACK: f64 = 1e-12;

/// `|opinion - action| <= openness`, boundary included.
///
/// The slack never exceeds the radius, so a zero radius admits only exact
/// equality.
#[inline]
pub fn within(opinion: f64, action: f64, openness: f64) -> bool {
    (opinion - action).abs() <= openness + BOUNDARY_SLACK.min(openness)
}

/// `(Σ neighbor actions + own opinion) / (count + 1)`, evaluated as
/// `own + Σ (action - own) / (count + 1)` so that equal inputs are a fixed point.
#[inline]
pub(crate) fn fuse(own_opinion: f64, neighbor_shift: f64, neighbor_count: usize) -> f64 {
    own_opinion + neighbor_shift / (neighbor_count + 1) as f64
}

/// Arithmetic mean computed relative to the first value; exact for constant input.
pub(crate) fn shifted_mean<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut iter = values.into_iter();
    let Some(first) = iter.next() else {
        return f64::NAN;
    };
    let (shift, count) = iter.fold((0.0, 1usize), |(s, c), v| (s + (v - first), c + 1));
    first + shift / count as f64
}

pub(crate) fn check_graph(population: &Population, graph: &Graph) -> Result<()> {
    if population.len() != graph.node_count() {
        return Err(Error::config(format!(
            "graph has {} nodes but population has {} agents",
            graph.node_count(),
            population.len()
        )));
    }
    Ok(())
}
