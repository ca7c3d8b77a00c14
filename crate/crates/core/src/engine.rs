//! Scenario construction and the synchronous run loop.

use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::{MinorityDoc, ScenarioDoc};
use crate::error::{Error, Result};
use crate::graph::{self, Graph};
use crate::model::{check_graph, fuse, update_action, within, AgentState, Population, UtilityTerms};

/// Default horizon when a configuration omits it.
pub const DEFAULT_HORIZON: usize = 50;

/// Closed interval `[low, high]` inside `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "[f64; 2]", from = "[f64; 2]")]
pub struct Interval {
    pub low: f64,
    pub high: f64,
}

impl Interval {
    pub fn new(low: f64, high: f64) -> Result<Self> {
        let iv = Interval { low, high };
        iv.validate("interval")?;
        Ok(iv)
    }

    pub fn point(value: f64) -> Self {
        Interval { low: value, high: value }
    }

    pub(crate) fn validate(&self, field: &str) -> Result<()> {
        if !(0.0..=1.0).contains(&self.low) || !(0.0..=1.0).contains(&self.high) {
            return Err(Error::config(format!("{field}: interval bounds must lie in [0, 1]")));
        }
        if self.low > self.high {
            return Err(Error::config(format!("{field}: interval bounds out of order")));
        }
        Ok(())
    }

    /// Uniform draw; a degenerate interval returns its bound exactly.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        if self.low == self.high {
            return self.low;
        }
        let u: f64 = rng.gen();
        (self.low + (self.high - self.low) * u).min(self.high)
    }
}

impl From<[f64; 2]> for Interval {
    fn from([low, high]: [f64; 2]) -> Self {
        Interval { low, high }
    }
}

impl From<Interval> for [f64; 2] {
    fn from(iv: Interval) -> Self {
        [iv.low, iv.high]
    }
}

/// A per-agent trait: either one value for everyone or a uniform draw.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TraitSpec {
    Fixed(f64),
    Uniform(Interval),
}

impl TraitSpec {
    pub(crate) fn validate(&self, field: &str) -> Result<()> {
        match self {
            TraitSpec::Fixed(v) if !(0.0..=1.0).contains(v) => {
                Err(Error::config(format!("{field}: value {v} is outside [0, 1]")))
            }
            TraitSpec::Fixed(_) => Ok(()),
            TraitSpec::Uniform(iv) => iv.validate(field),
        }
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            TraitSpec::Fixed(v) => *v,
            TraitSpec::Uniform(iv) => iv.sample(rng),
        }
    }
}

/// Interaction topology.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Topology {
    Complete,
    /// Watts–Strogatz with mean degree `k` and rewiring probability `p`.
    SmallWorld { k: usize, p: f64 },
    /// Barabási–Albert grown from K_{m0} with `m` links per new node.
    ScaleFree { m0: usize, m: usize },
    /// Graph read from an edge-list file.
    EdgeList { path: PathBuf },
}

impl Topology {
    pub fn build(&self, n: usize, seed: u64) -> Result<Graph> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        match self {
            Topology::Complete => graph::complete_graph(n),
            Topology::SmallWorld { k, p } => graph::watts_strogatz(n, *k, *p, &mut rng),
            Topology::ScaleFree { m0, m } => graph::barabasi_albert(n, *m0, *m, &mut rng),
            Topology::EdgeList { path } => {
                let file = File::open(path)?;
                let g = graph::read_edge_list(BufReader::new(file))?;
                if g.node_count() != n {
                    return Err(Error::config(format!(
                        "topology: edge list {} has {} nodes, expected {n}",
                        path.display(),
                        g.node_count()
                    )));
                }
                Ok(g)
            }
        }
    }

    pub fn is_complete(&self) -> bool {
        matches!(self, Topology::Complete)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MinoritySize {
    /// Share of the population; rounded down.
    Fraction(f64),
    Count(usize),
}

/// Block of committed agents placed at the lowest indices.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(into = "MinorityDoc")]
pub struct MinoritySpec {
    pub size: MinoritySize,
    pub openness: f64,
    pub commitment: f64,
    pub opinion: f64,
}

impl MinoritySpec {
    /// Innovators fixed at opinion = action = 1.
    pub fn innovators(fraction: f64) -> Self {
        MinoritySpec {
            size: MinoritySize::Fraction(fraction),
            openness: 0.0,
            commitment: 1.0,
            opinion: 1.0,
        }
    }

    pub fn count(&self, n: usize) -> usize {
        match self.size {
            // The small offset keeps products like 0.2 * 300 from landing just below an integer.
            MinoritySize::Fraction(f) => (f * n as f64 + 1e-9).floor() as usize,
            MinoritySize::Count(c) => c,
        }
    }
}

/// Everything needed to reproduce one run.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(into = "ScenarioDoc")]
pub struct ScenarioConfig {
    pub n: usize,
    pub horizon: usize,
    pub seed: u64,
    pub topology: Topology,
    /// Initial opinions of non-minority agents.
    pub opinion_init: Interval,
    pub openness: TraitSpec,
    pub commitment: TraitSpec,
    pub minority: Option<MinoritySpec>,
    /// Stop once no value moves by this much in a step; 0 disables.
    pub convergence_tol: f64,
}

impl ScenarioConfig {
    /// Homogeneous population on the complete graph with uniform opinions on `[0, 1]`.
    pub fn homogeneous(n: usize, openness: f64, commitment: f64, seed: u64) -> Self {
        ScenarioConfig {
            n,
            horizon: DEFAULT_HORIZON,
            seed,
            topology: Topology::Complete,
            opinion_init: Interval { low: 0.0, high: 1.0 },
            openness: TraitSpec::Fixed(openness),
            commitment: TraitSpec::Fixed(commitment),
            minority: None,
            convergence_tol: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::config("n: must be positive"));
        }
        self.opinion_init.validate("opinion_init")?;
        self.openness.validate("openness")?;
        self.commitment.validate("commitment")?;
        if !(self.convergence_tol >= 0.0 && self.convergence_tol.is_finite()) {
            return Err(Error::config("convergence_tol: must be a finite nonnegative number"));
        }
        match &self.topology {
            Topology::SmallWorld { k, p } => {
                if *k < 2 || k % 2 != 0 {
                    return Err(Error::config("topology: k must be even and at least 2"));
                }
                if self.n <= *k {
                    return Err(Error::config("topology: n must exceed k"));
                }
                if !(0.0..=1.0).contains(p) {
                    return Err(Error::config("topology: p must lie in [0, 1]"));
                }
            }
            Topology::ScaleFree { m0, m } => {
                if *m == 0 || m0 < m || self.n < *m0 {
                    return Err(Error::config("topology: scale-free requires n >= m0 >= m >= 1"));
                }
            }
            Topology::Complete | Topology::EdgeList { .. } => {}
        }
        if let Some(minority) = &self.minority {
            if let MinoritySize::Fraction(f) = minority.size {
                if !(0.0..1.0).contains(&f) {
                    return Err(Error::config("minority.fraction: must lie in [0, 1)"));
                }
            }
            for (name, v) in [
                ("minority.openness", minority.openness),
                ("minority.commitment", minority.commitment),
                ("minority.opinion", minority.opinion),
            ] {
                if !(0.0..=1.0).contains(&v) {
                    return Err(Error::config(format!("{name}: value {v} is outside [0, 1]")));
                }
            }
            if minority.count(self.n) >= self.n {
                return Err(Error::config("minority: count must be smaller than n"));
            }
        }
        Ok(())
    }

    pub fn innovator_count(&self) -> usize {
        self.minority.map_or(0, |m| m.count(self.n))
    }
}

/// Child seed for one consumer of randomness, keyed by a fixed label and
/// optional indices. Adding labels never changes existing streams.
pub fn derive_seed(master: u64, label: &str, indices: &[u64]) -> u64 {
    let mut hasher = Sha256::new();
    hasher.update(master.to_le_bytes());
    hasher.update((label.len() as u64).to_le_bytes());
    hasher.update(label.as_bytes());
    for i in indices {
        hasher.update(i.to_le_bytes());
    }
    let digest = hasher.finalize();
    let mut bytes = [0u8; 8];
    bytes.copy_from_slice(&digest[..8]);
    u64::from_le_bytes(bytes)
}

/// A built population together with its interaction graph.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub population: Population,
    pub graph: Graph,
    /// Agents `0..innovator_count` belong to the minority block.
    pub innovator_count: usize,
}

/// Draws the initial population and builds the topology for `config`.
///
/// Minority agents occupy the lowest indices. Remaining agents draw opinion,
/// openness and commitment in that order, agent by agent, from a stream
/// seeded by `derive_seed(seed, "population")`; the topology uses
/// `derive_seed(seed, "topology")`.
pub fn build_population(config: &ScenarioConfig) -> Result<Scenario> {
    config.validate()?;
    let n = config.n;
    let innovators = config.innovator_count();
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(config.seed, "population", &[]));

    let mut agents = Vec::with_capacity(n);
    if let Some(m) = &config.minority {
        agents.extend((0..innovators).map(|_| AgentState::new(m.opinion, m.openness, m.commitment)));
    }
    for _ in innovators..n {
        let opinion = config.opinion_init.sample(&mut rng);
        let openness = config.openness.sample(&mut rng);
        let commitment = config.commitment.sample(&mut rng);
        agents.push(AgentState::new(opinion, openness, commitment));
    }
    let population = Population::new(agents)?;
    let graph = config.topology.build(n, derive_seed(config.seed, "topology", &[]))?;
    Ok(Scenario {
        population,
        graph,
        innovator_count: innovators,
    })
}

/// Advances the population by one synchronous step.
///
/// All new opinions are computed from the time-t opinions and actions; all
/// new actions then use the new opinions and the time-t mean action.
pub fn step(population: &Population, graph: &Graph) -> Result<Population> {
    check_graph(population, graph)?;
    Ok(step_unchecked(population, graph))
}

fn step_unchecked(population: &Population, graph: &Graph) -> Population {
    let agents = population.agents();
    let norm = population.mean_action();

    let opinions: Vec<f64> = agents
        .iter()
        .enumerate()
        .map(|(i, agent)| {
            let (shift, count) = graph
                .neighbors(i)
                .iter()
                .map(|&j| agents[j].action)
                .filter(|&y| within(agent.opinion, y, agent.openness))
                .fold((0.0, 0usize), |(s, c), y| (s + (y - agent.opinion), c + 1));
            fuse(agent.opinion, shift, count)
        })
        .collect();

    let next = agents
        .iter()
        .zip(opinions)
        .map(|(agent, opinion)| AgentState {
            opinion,
            action: update_action(&UtilityTerms {
                updated_opinion: opinion,
                norm,
                commitment: agent.commitment,
            }),
            openness: agent.openness,
            commitment: agent.commitment,
        })
        .collect();
    Population::from_agents_unchecked(next)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum StopReason {
    Horizon,
    Converged { step: usize },
}

#[derive(Debug, Clone, Serialize)]
pub struct RunMetadata {
    pub config: Option<ScenarioConfig>,
    pub seed: Option<u64>,
    pub stop_reason: StopReason,
    /// Number of steps actually taken.
    pub steps: usize,
    pub node_count: usize,
    pub edge_count: usize,
    pub component_count: usize,
    pub innovator_count: usize,
}

/// Recorded history of a run; index `t` holds the state at time `t`.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub opinions: Vec<Vec<f64>>,
    pub actions: Vec<Vec<f64>>,
    /// Mean action at each recorded time.
    pub norms: Vec<f64>,
    /// `|opinion - action|` per agent at each recorded time.
    pub discrepancies: Vec<Vec<f64>>,
    pub metadata: RunMetadata,
}

impl Trajectory {
    /// Number of recorded snapshots (steps taken + 1).
    pub fn len(&self) -> usize {
        self.opinions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.opinions.is_empty()
    }

    pub fn final_opinions(&self) -> &[f64] {
        self.opinions.last().expect("trajectory has an initial snapshot")
    }

    pub fn final_actions(&self) -> &[f64] {
        self.actions.last().expect("trajectory has an initial snapshot")
    }

    /// `true` for agents outside the minority block.
    pub fn flexible_mask(&self) -> Vec<bool> {
        let n = self.metadata.node_count;
        (0..n).map(|i| i >= self.metadata.innovator_count).collect()
    }

    fn record(&mut self, population: &Population) {
        let x = population.opinions();
        let y = population.actions();
        self.discrepancies
            .push(x.iter().zip(&y).map(|(a, b)| (a - b).abs()).collect());
        self.norms.push(population.mean_action());
        self.opinions.push(x);
        self.actions.push(y);
    }
}

/// Builds the scenario for `config` and runs it.
pub fn run(config: &ScenarioConfig) -> Result<Trajectory> {
    let scenario = build_population(config)?;
    let mut trajectory = run_scenario(&scenario, config.horizon, config.convergence_tol)?;
    trajectory.metadata.config = Some(config.clone());
    trajectory.metadata.seed = Some(config.seed);
    Ok(trajectory)
}

/// Runs an already-built scenario for up to `horizon` steps.
///
/// With `convergence_tol > 0` the run stops after the first step in which no
/// opinion or action moved by `convergence_tol` or more.
pub fn run_scenario(scenario: &Scenario, horizon: usize, convergence_tol: f64) -> Result<Trajectory> {
    check_graph(&scenario.population, &scenario.graph)?;
    let graph = &scenario.graph;
    let mut trajectory = Trajectory {
        opinions: Vec::with_capacity(horizon + 1),
        actions: Vec::with_capacity(horizon + 1),
        norms: Vec::with_capacity(horizon + 1),
        discrepancies: Vec::with_capacity(horizon + 1),
        metadata: RunMetadata {
            config: None,
            seed: None,
            stop_reason: StopReason::Horizon,
            steps: 0,
            node_count: graph.node_count(),
            edge_count: graph.edge_count(),
            component_count: graph.component_count(),
            innovator_count: scenario.innovator_count,
        },
    };

    let mut current = scenario.population.clone();
    trajectory.record(&current);
    for t in 1..=horizon {
        let next = step_unchecked(&current, graph);
        let change = max_change(&current, &next);
        trajectory.record(&next);
        trajectory.metadata.steps = t;
        current = next;
        if convergence_tol > 0.0 && change < convergence_tol {
            trajectory.metadata.stop_reason = StopReason::Converged { step: t };
            break;
        }
    }
    Ok(trajectory)
}

/// Largest absolute change of any opinion or action between two states.
pub fn max_change(before: &Population, after: &Population) -> f64 {
    before
        .agents()
        .iter()
        .zip(after.agents())
        .map(|(a, b)| (a.opinion - b.opinion).abs().max((a.action - b.action).abs()))
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::complete_graph;
    use crate::model::classical_hk_step;
    use proptest::prelude::{prop_assert, proptest, ProptestConfig};

    #[test]
    fn identical_agents_are_a_fixed_point() {
        for &c in &[0.0, 0.1, 0.3, 0.4, 0.7, 1.0] {
            let p = Population::homogeneous(&[c; 300], 0.2, 0.4).unwrap();
            let next = step(&p, &complete_graph(300).unwrap()).unwrap();
            assert_eq!(next, p, "c = {c}");
        }
    }

    #[test]
    fn two_agent_step_by_hand() {
        let p = Population::homogeneous(&[0.0, 1.0], 0.5, 0.5).unwrap();
        let next = step(&p, &complete_graph(2).unwrap()).unwrap();
        assert_eq!(next.opinions(), vec![0.0, 1.0]);
        assert_eq!(next.actions(), vec![0.25, 0.75]);
    }

    #[test]
    fn innovator_stays_at_one() {
        let mut agents = vec![AgentState::new(1.0, 0.0, 1.0)];
        agents.extend([0.95, 0.2, 1.0, 0.6].iter().map(|&x| AgentState::new(x, 0.3, 0.4)));
        let mut p = Population::new(agents).unwrap();
        let g = complete_graph(5).unwrap();
        for _ in 0..20 {
            p = step(&p, &g).unwrap();
            assert_eq!(p.agents()[0].opinion, 1.0);
            assert_eq!(p.agents()[0].action, 1.0);
        }
    }

    #[test]
    fn step_rejects_mismatched_graph() {
        let p = Population::homogeneous(&[0.1, 0.2], 0.2, 0.4).unwrap();
        assert!(step(&p, &complete_graph(3).unwrap()).is_err());
    }

    #[test]
    fn zero_horizon_records_initial_state_only() {
        let mut cfg = ScenarioConfig::homogeneous(10, 0.2, 0.5, 3);
        cfg.horizon = 0;
        let t = run(&cfg).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t.opinions[0], t.actions[0]);
        assert_eq!(t.metadata.steps, 0);
    }

    #[test]
    fn trajectory_shapes() {
        let t = run(&ScenarioConfig::homogeneous(20, 0.2, 0.5, 3)).unwrap();
        assert_eq!(t.len(), 51);
        assert_eq!(t.norms.len(), 51);
        assert_eq!(t.discrepancies.len(), 51);
        for s in 0..t.len() {
            for i in 0..20 {
                assert_eq!(t.discrepancies[s][i], (t.opinions[s][i] - t.actions[s][i]).abs());
            }
        }
        assert_eq!(t.metadata.stop_reason, StopReason::Horizon);
        assert_eq!(t.metadata.component_count, 1);
    }

    #[test]
    fn hk_reduction_matches_classical_iteration() {
        let cfg = ScenarioConfig::homogeneous(40, 0.2, 1.0, 5);
        let t = run(&cfg).unwrap();
        let g = complete_graph(40).unwrap();
        let mut x = t.opinions[0].clone();
        for s in 0..t.len() {
            for (i, xi) in x.iter().enumerate() {
                assert!((t.opinions[s][i] - xi).abs() <= 1e-12);
                assert_eq!(t.opinions[s][i], t.actions[s][i]);
            }
            x = classical_hk_step(&x, 0.2, &g).unwrap();
        }
    }

    #[test]
    fn build_with_minority() {
        let mut cfg = ScenarioConfig::homogeneous(300, 0.25, 0.7, 1);
        cfg.minority = Some(MinoritySpec::innovators(0.2));
        cfg.opinion_init = Interval::new(0.0, 0.5).unwrap();
        cfg.openness = TraitSpec::Uniform(Interval::new(0.25, 0.3).unwrap());
        let s = build_population(&cfg).unwrap();
        assert_eq!(s.innovator_count, 60);
        for (i, a) in s.population.agents().iter().enumerate() {
            if i < 60 {
                assert_eq!((a.opinion, a.action, a.openness, a.commitment), (1.0, 1.0, 0.0, 1.0));
            } else {
                assert!(a.opinion <= 0.5);
                assert_eq!(a.action, a.opinion);
                assert!((0.25..=0.3).contains(&a.openness));
            }
        }
    }

    #[test]
    fn degenerate_opinion_interval() {
        let mut cfg = ScenarioConfig::homogeneous(30, 0.25, 0.7, 1);
        cfg.opinion_init = Interval::point(0.3);
        let s = build_population(&cfg).unwrap();
        assert!(s.population.agents().iter().all(|a| a.opinion == 0.3));
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let mut cfg = ScenarioConfig::homogeneous(30, 0.25, 0.7, 1);
        cfg.minority = Some(MinoritySpec {
            size: MinoritySize::Count(30),
            ..MinoritySpec::innovators(0.0)
        });
        assert!(build_population(&cfg).is_err());

        let mut cfg = ScenarioConfig::homogeneous(30, 0.25, 0.7, 1);
        cfg.opinion_init = Interval { low: 0.6, high: 0.2 };
        let err = build_population(&cfg).unwrap_err().to_string();
        assert!(err.contains("out of order"), "{err}");

        let mut cfg = ScenarioConfig::homogeneous(30, 0.25, 0.7, 1);
        cfg.topology = Topology::SmallWorld { k: 5, p: 0.1 };
        assert!(build_population(&cfg).is_err());

        assert!(build_population(&ScenarioConfig::homogeneous(0, 0.2, 0.2, 1)).is_err());
    }

    #[test]
    fn seeds_are_label_separated() {
        assert_ne!(derive_seed(1, "population", &[]), derive_seed(1, "topology", &[]));
        assert_ne!(derive_seed(1, "cell", &[0, 1]), derive_seed(1, "cell", &[1, 0]));
        assert_eq!(derive_seed(9, "x", &[2]), derive_seed(9, "x", &[2]));
    }

    #[test]
    fn runs_are_deterministic() {
        let mut cfg = ScenarioConfig::homogeneous(60, 0.15, 0.4, 77);
        cfg.topology = Topology::SmallWorld { k: 6, p: 0.5 };
        let a = run(&cfg).unwrap();
        let b = run(&cfg).unwrap();
        assert_eq!(a.opinions, b.opinions);
        assert_eq!(a.actions, b.actions);
    }

    #[test]
    fn early_stop_is_sound() {
        let mut cfg = ScenarioConfig::homogeneous(50, 0.3, 0.6, 2);
        cfg.convergence_tol = 1e-8;
        cfg.horizon = 500;
        let t = run(&cfg).unwrap();
        let StopReason::Converged { step: stop } = t.metadata.stop_reason else {
            panic!("expected convergence, got {:?}", t.metadata.stop_reason);
        };
        assert_eq!(t.len(), stop + 1);

        let last = Population::new(
            t.final_opinions()
                .iter()
                .zip(t.final_actions())
                .map(|(&x, &y)| AgentState { opinion: x, action: y, openness: 0.3, commitment: 0.6 })
                .collect(),
        )
        .unwrap();
        let next = step(&last, &complete_graph(50).unwrap()).unwrap();
        assert!(max_change(&last, &next) < 1e-8);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn permuting_agents_permutes_the_trajectory(
            seed in 0u64..1000,
            eps in 0.0f64..0.5,
            phi in 0.0f64..=1.0,
            perm_seed in 0u64..1000,
        ) {
            let n = 24;
            let mut cfg = ScenarioConfig::homogeneous(n, eps, phi, seed);
            cfg.topology = Topology::SmallWorld { k: 4, p: 0.4 };
            cfg.horizon = 10;
            let base = build_population(&cfg).unwrap();

            let mut perm: Vec<usize> = (0..n).collect();
            let mut rng = ChaCha8Rng::seed_from_u64(perm_seed);
            for i in (1..n).rev() {
                perm.swap(i, rng.gen_range(0..=i));
            }
            let mut agents = base.population.agents().to_vec();
            for (old, &new) in perm.iter().enumerate() {
                agents[new] = base.population.agents()[old];
            }
            let permuted = Scenario {
                population: Population::new(agents).unwrap(),
                graph: base.graph.permuted(&perm).unwrap(),
                innovator_count: 0,
            };

            let a = run_scenario(&base, cfg.horizon, 0.0).unwrap();
            let b = run_scenario(&permuted, cfg.horizon, 0.0).unwrap();
            for t in 0..a.len() {
                for (old, &new) in perm.iter().enumerate() {
                    prop_assert!((a.opinions[t][old] - b.opinions[t][new]).abs() < 1e-9);
                    prop_assert!((a.actions[t][old] - b.actions[t][new]).abs() < 1e-9);
                }
            }
        }

        #[test]
        fn trajectories_stay_in_range(seed in 0u64..10_000, eps in 0.0f64..=1.0, phi in 0.0f64..=1.0) {
            let mut cfg = ScenarioConfig::homogeneous(30, eps, phi, seed);
            cfg.horizon = 15;
            let t = run(&cfg).unwrap();
            for s in 0..t.len() {
                prop_assert!(t.opinions[s].iter().chain(&t.actions[s]).all(|v| (0.0..=1.0).contains(v)));
            }
        }
    }

    #[test]
    fn innovators_fixed_through_whole_run() {
        let mut cfg = ScenarioConfig::homogeneous(100, 0.0, 0.0, 4);
        cfg.minority = Some(MinoritySpec::innovators(0.2));
        cfg.opinion_init = Interval::new(0.0, 0.5).unwrap();
        cfg.openness = TraitSpec::Uniform(Interval::new(0.05, 0.1).unwrap());
        cfg.commitment = TraitSpec::Uniform(Interval::new(0.1, 0.2).unwrap());
        let t = run(&cfg).unwrap();
        for s in 0..t.len() {
            for i in 0..20 {
                assert_eq!(t.opinions[s][i], 1.0);
                assert_eq!(t.actions[s][i], 1.0);
            }
        }
    }
}
