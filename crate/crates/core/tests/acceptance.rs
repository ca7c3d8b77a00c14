//! Acceptance suite: runs every primary criterion and prints one PASS/FAIL
//! line per criterion. Exits non-zero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use normdyn::cli::{write_sweep_csv, write_trajectory_csv};
use normdyn::config::{preset, ConfigDocument};
use normdyn::engine::{run, ScenarioConfig, Topology, Trajectory};
use normdyn::graph::{barabasi_albert, watts_strogatz};
use normdyn::metrics::{summarize, RunSummary, DEFAULT_CLUSTER_GAP};
use normdyn::model::{evaluate_utility, update_action, UtilityTerms};
use normdyn::sweep::{boundary_score, run_sweep, SweepSpec};

const SEEDS: u64 = 10;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: String) -> Self {
        Outcome { pass, detail }
    }
}

fn scenario(name: &str, seed: u64) -> ScenarioConfig {
    match preset(name, seed) {
        Some(ConfigDocument::Scenario(c)) => c,
        _ => panic!("{name} is not a scenario preset"),
    }
}

fn sweep_spec(name: &str, seed: u64) -> SweepSpec {
    match preset(name, seed) {
        Some(ConfigDocument::Sweep(s)) => s,
        _ => panic!("{name} is not a sweep preset"),
    }
}

fn run_preset(name: &str, seed: u64) -> (Trajectory, RunSummary) {
    let t = run(&scenario(name, seed)).expect("run");
    let s = summarize(&t, DEFAULT_CLUSTER_GAP).expect("summary");
    (t, s)
}

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

fn population_std(v: &[f64]) -> f64 {
    let m = mean(v);
    (v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / v.len() as f64).sqrt()
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

fn fraction(hits: usize, total: usize) -> f64 {
    hits as f64 / total as f64
}

/// Plain classical bounded-confidence step: each agent moves to the mean of
/// all opinions (its own included) within `eps`.
fn reference_hk(x: &[f64], eps: f64) -> Vec<f64> {
    x.iter()
        .map(|&xi| {
            let close: Vec<f64> = x.iter().copied().filter(|&xj| (xi - xj).abs() <= eps).collect();
            close.iter().sum::<f64>() / close.len() as f64
        })
        .collect()
}

fn hk_reduction() -> Outcome {
    let mut worst = 0.0f64;
    let mut max_d = 0.0f64;
    for (k, &eps) in [0.1, 0.25, 0.6].iter().enumerate() {
        let mut cfg = ScenarioConfig::homogeneous(50, eps, 1.0, 100 + k as u64);
        cfg.horizon = 50;
        let t = run(&cfg).expect("run");
        let mut x = t.opinions[0].clone();
        for step in 0..t.len() {
            if step > 0 {
                x = reference_hk(&x, eps);
            }
            for (a, b) in t.opinions[step].iter().zip(&x) {
                worst = worst.max((a - b).abs());
            }
            for d in &t.discrepancies[step] {
                max_d = max_d.max(*d);
            }
        }
    }
    Outcome::new(
        worst <= 1e-12 && max_d == 0.0,
        format!("max |engine - reference HK| = {worst:.3e}, max discrepancy = {max_d:e}"),
    )
}

fn argmax_oracle() -> Outcome {
    const GRID: usize = 100_001;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let terms = UtilityTerms {
            updated_opinion: rng.gen(),
            norm: rng.gen(),
            commitment: rng.gen(),
        };
        let mut best = (f64::NEG_INFINITY, 0.0);
        for g in 0..GRID {
            let y = g as f64 / (GRID - 1) as f64;
            let u = evaluate_utility(y, &terms);
            if u > best.0 {
                best = (u, y);
            }
        }
        worst = worst.max((update_action(&terms) - best.1).abs());
    }
    Outcome::new(worst <= 1e-5, format!("max |closed form - grid argmax| = {worst:.3e} over 1000 triples"))
}

fn fig6_consensus() -> Outcome {
    let good = (0..SEEDS)
        .filter(|&seed| {
            let (_, s) = run_preset("fig6", seed);
            s.opinion_cluster_count() == 1 && s.action_cluster_count() == 1 && s.group_discrepancy() < 1e-3
        })
        .count();
    Outcome::new(good >= 9, format!("{good}/{SEEDS} runs reach one cluster with D < 1e-3"))
}

fn fig3_pluralistic() -> Outcome {
    let mut max_ds = Vec::new();
    let mut min_clusters = usize::MAX;
    let mut concentrated = 0;
    for seed in 0..SEEDS {
        let (t, s) = run_preset("fig3", seed);
        max_ds.push(s.max_discrepancy());
        min_clusters = min_clusters.min(s.opinion_cluster_count());
        if population_std(t.final_actions()) < 0.5 * population_std(t.final_opinions()) {
            concentrated += 1;
        }
    }
    let med = median(max_ds);
    Outcome::new(
        (0.2..=0.4).contains(&med) && min_clusters >= 3 && concentrated == SEEDS as usize,
        format!(
            "median max_d = {med:.4}, min opinion clusters = {min_clusters}, action std < opinion std / 2 in {concentrated}/{SEEDS}"
        ),
    )
}

fn fig4_clusters() -> Outcome {
    let good = (0..SEEDS)
        .filter(|&seed| {
            let (_, s) = run_preset("fig4", seed);
            s.max_discrepancy() < 0.15 && s.opinion_cluster_count() >= 2
        })
        .count();
    Outcome::new(good >= 8, format!("{good}/{SEEDS} runs with every d < 0.15 and at least 2 clusters"))
}

fn boundary_law() -> Outcome {
    let spec = sweep_spec("sweep-desk", 0);
    let started = Instant::now();
    let result = run_sweep(&spec, 1).expect("sweep");
    let elapsed = started.elapsed();
    let above: Vec<_> = result
        .cells
        .iter()
        .filter(|c| boundary_score(c.epsilon, c.phi) >= 3.5 - 1e-9)
        .collect();
    let above_bad = above.iter().filter(|c| c.mean_d >= 0.01 || c.mean_d.is_nan()).count();
    let below: Vec<_> = result
        .cells
        .iter()
        .filter(|c| boundary_score(c.epsilon, c.phi) <= 3.0 + 1e-9)
        .collect();
    let below_good = below.iter().filter(|c| c.mean_d > 0.01).count();
    let below_frac = fraction(below_good, below.len());
    Outcome::new(
        above_bad == 0 && below_frac >= 0.9 && elapsed.as_secs() < 600,
        format!(
            "{}/{} cells above the line with mean_D < 0.01, {below_good}/{} cells at score <= 3.0 with mean_D > 0.01 ({:.1}%), {:.1}s single-threaded",
            above.len() - above_bad,
            above.len(),
            below.len(),
            100.0 * below_frac,
            elapsed.as_secs_f64()
        ),
    )
}

/// Final flexible opinions and actions pooled over seeds.
fn flexible_pool(name: &str) -> Vec<(Vec<f64>, Vec<f64>)> {
    (0..SEEDS).map(|seed| run_preset(name, seed).1.flexible_values()).collect()
}

fn minority_outcomes() -> Outcome {
    let fig10 = flexible_pool("fig10");
    let (adopted, total10) = fig10.iter().fold((0, 0), |(h, n), (x, y)| {
        (h + x.iter().zip(y).filter(|(&x, &y)| x > 0.9 && y > 0.9).count(), n + x.len())
    });
    let f10 = fraction(adopted, total10);

    let fig11 = flexible_pool("fig11");
    let (kept, total11) = fig11.iter().fold((0, 0), |(h, n), (x, y)| {
        (h + x.iter().zip(y).filter(|(&x, &y)| x <= 0.5 && y <= 0.55).count(), n + x.len())
    });
    let f11 = fraction(kept, total11);

    let fig12 = flexible_pool("fig12");
    let actions12: Vec<f64> = fig12.iter().flat_map(|(_, y)| y.iter().copied()).collect();
    let opinions12: Vec<f64> = fig12.iter().flat_map(|(x, _)| x.iter().copied()).collect();
    let mean_action12 = mean(&actions12);
    let f12 = fraction(opinions12.iter().filter(|&&x| x <= 0.5).count(), opinions12.len());

    let pass10 = f10 >= 0.95;
    let pass11 = f11 >= 0.90;
    let pass12 = (0.55..=0.80).contains(&mean_action12) && f12 >= 0.80;
    let tag = |p: bool| if p { "ok" } else { "FAIL" };
    Outcome::new(
        pass10 && pass11 && pass12,
        format!(
            "fig10 adopted {:.1}% [{}]; fig11 kept opinion <= 0.5 and action <= 0.55 {:.1}% [{}]; fig12 mean action {mean_action12:.3}, opinions <= 0.5 {:.1}% [{}]",
            100.0 * f10,
            tag(pass10),
            100.0 * f11,
            tag(pass11),
            100.0 * f12,
            tag(pass12)
        ),
    )
}

fn network_effect() -> Outcome {
    let stats = |name: &str| {
        let runs: Vec<RunSummary> = (0..SEEDS).map(|seed| run_preset(name, seed).1).collect();
        let d = mean(&runs.iter().map(|s| s.group_discrepancy()).collect::<Vec<_>>());
        let c = mean(&runs.iter().map(|s| s.opinion_cluster_count() as f64).collect::<Vec<_>>());
        (d, c)
    };
    let (sw_d, sw_c) = stats("fig8");
    let (sf_d, sf_c) = stats("fig9");
    let soft = if sw_c >= sf_c { "holds" } else { "does not hold" };
    Outcome::new(
        sw_d > 0.0 && sf_d > 0.0 && sw_c > 1.0 && sf_c > 1.0 && sw_c >= sf_c - 1.0,
        format!(
            "SW mean D = {sw_d:.4e}, clusters = {sw_c:.1}; SF mean D = {sf_d:.4e}, clusters = {sf_c:.1}; SW >= SF {soft}"
        ),
    )
}

fn generator_invariants() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for (k, &p) in [0.0, 0.5, 1.0].iter().enumerate() {
        let g = watts_strogatz(300, 6, p, &mut ChaCha8Rng::seed_from_u64(k as u64)).expect("ws");
        ok &= g.edge_count() == 900;
        if p == 0.0 {
            ok &= (0..300).all(|u| g.degree(u) == 6);
        }
        notes.push(format!("WS p={p}: {}", g.edge_count()));
    }
    let ba = barabasi_albert(300, 9, 6, &mut ChaCha8Rng::seed_from_u64(0)).expect("ba");
    ok &= ba.edge_count() == 1782;
    notes.push(format!("BA: {}", ba.edge_count()));

    let (mut ws_max, mut ba_max) = (0.0, 0.0);
    for seed in 0..20u64 {
        let sw = Topology::SmallWorld { k: 6, p: 0.8 }.build(300, seed).expect("ws");
        let sf = Topology::ScaleFree { m0: 9, m: 6 }.build(300, seed).expect("ba");
        ws_max += sw.max_degree() as f64 / 20.0;
        ba_max += sf.max_degree() as f64 / 20.0;
    }
    ok &= ba_max > ws_max;
    Outcome::new(
        ok,
        format!("{} edges; mean max degree BA {ba_max:.1} vs WS {ws_max:.1}", notes.join(", ")),
    )
}

fn trajectory_bytes(t: &Trajectory) -> Vec<u8> {
    let mut buf = Vec::new();
    write_trajectory_csv(t, &mut buf).expect("csv");
    buf
}

fn determinism() -> Outcome {
    let mut identical = true;
    for name in ["fig3", "fig8", "fig11"] {
        let a = trajectory_bytes(&run(&scenario(name, 42)).expect("run"));
        let b = trajectory_bytes(&run(&scenario(name, 42)).expect("run"));
        identical &= a == b;
    }

    let spec = sweep_spec("sweep-desk", 3);
    let mut serial = Vec::new();
    let mut parallel = Vec::new();
    write_sweep_csv(&run_sweep(&spec, 1).expect("sweep"), &mut serial).expect("csv");
    write_sweep_csv(&run_sweep(&spec, 8).expect("sweep"), &mut parallel).expect("csv");
    let sweep_same = serial == parallel;

    let mut innovators_fixed = true;
    for name in ["fig10", "fig11", "fig12"] {
        for seed in 0..3 {
            let t = run(&scenario(name, seed)).expect("run");
            let k = t.metadata.innovator_count;
            innovators_fixed &= k > 0
                && t.opinions.iter().zip(&t.actions).all(|(x, y)| {
                    x[..k].iter().chain(&y[..k]).all(|&v| v == 1.0)
                });
        }
    }
    Outcome::new(
        identical && sweep_same && innovators_fixed,
        format!(
            "repeat runs byte-identical: {identical}; sweep -j1 == -j8: {sweep_same}; innovators exactly 1.0: {innovators_fixed}"
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("HK reduction", hk_reduction),
        ("argmax oracle", argmax_oracle),
        ("fig6 consensus", fig6_consensus),
        ("fig3 divergence", fig3_pluralistic),
        ("fig4 clustering", fig4_clusters),
        ("boundary law", boundary_law),
        ("minority outcomes", minority_outcomes),
        ("network effect", network_effect),
        ("generator invariants", generator_invariants),
        ("determinism and parallelism", determinism),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let outcome = check();
        let verdict = if outcome.pass { "PASS" } else { "FAIL" };
        println!(
            "criterion {:>2} {verdict} {name}: {} ({:.1}s)",
            i + 1,
            outcome.detail,
            started.elapsed().as_secs_f64()
        );
        if !outcome.pass {
            failed += 1;
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
