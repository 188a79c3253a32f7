//! Method comparison against the reference planner on candidate lattices.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use nalgebra::Point3;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::planner::{ground_truth_reachable, rrt_connect_reachable, PlannerConfig};
use crate::reach::{batch_check, BatchConfig, CandidateLattice, SwingSetup};
use crate::robot::RobotModel;
use crate::scene::{scene_sdf, Scenario, SceneKind};
use crate::swing::{fec_check, FecConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    KcfrcKey,
    KcfrcConv,
    Fec,
    Rrt1ms,
    Rrt50us,
}

impl Method {
    pub const ALL: [Method; 5] = [Method::KcfrcKey, Method::KcfrcConv, Method::Fec, Method::Rrt1ms, Method::Rrt50us];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::KcfrcKey => "kcfrc_key",
            Method::KcfrcConv => "kcfrc_conv",
            Method::Fec => "fec",
            Method::Rrt1ms => "rrt_1ms",
            Method::Rrt50us => "rrt_50us",
        }
    }

    /// Comma-separated method names.
    pub fn parse_list(s: &str) -> Result<Vec<Method>> {
        let mut out: Vec<Method> = Vec::new();
        for name in s.split(',').map(str::trim).filter(|n| !n.is_empty()) {
            let m = name.parse()?;
            if !out.contains(&m) {
                out.push(m);
            }
        }
        if out.is_empty() {
            return Err(invalid("no methods given"));
        }
        Ok(out)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL.into_iter().find(|m| m.as_str() == s).ok_or_else(|| {
            invalid(format!("unknown method '{s}' (expected kcfrc_key, kcfrc_conv, fec, rrt_1ms or rrt_50us)"))
        })
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Confusion {
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    pub tn: usize,
}

/// A ratio whose denominator may be zero; `0/0` is reported as 1 and flagged.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rate {
    pub value: f64,
    pub undefined: bool,
}

impl Rate {
    fn of(num: usize, den: usize) -> Self {
        if den == 0 {
            Rate { value: 1.0, undefined: true }
        } else {
            Rate { value: num as f64 / den as f64, undefined: false }
        }
    }
}

impl Confusion {
    pub fn add(&mut self, predicted: bool, actual: bool) {
        match (predicted, actual) {
            (true, true) => self.tp += 1,
            (true, false) => self.fp += 1,
            (false, true) => self.fn_ += 1,
            (false, false) => self.tn += 1,
        }
    }

    pub fn merge(&mut self, other: &Confusion) {
        self.tp += other.tp;
        self.fp += other.fp;
        self.fn_ += other.fn_;
        self.tn += other.tn;
    }

    pub fn total(&self) -> usize {
        self.tp + self.fp + self.fn_ + self.tn
    }

    pub fn accuracy(&self) -> Rate {
        Rate::of(self.tp + self.tn, self.total())
    }

    pub fn precision(&self) -> Rate {
        Rate::of(self.tp, self.tp + self.fp)
    }

    pub fn recall(&self) -> Rate {
        Rate::of(self.tp, self.tp + self.fn_)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BenchConfig {
    pub seed: u64,
    /// Timed repetitions per method and swing; the median is reported.
    pub repetitions: usize,
    /// Run every method once untimed before the timed repetitions.
    pub warmup: bool,
    /// Keep every `step`-th lattice row and column starting at `offset`;
    /// `None` evaluates the full lattice.
    pub subsample: Option<(usize, usize)>,
    pub key: BatchConfig,
    pub conv: BatchConfig,
    pub fec: FecConfig,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            repetitions: 3,
            warmup: true,
            subsample: None,
            key: BatchConfig::keypoint(),
            conv: BatchConfig::conv(),
            fec: FecConfig::default(),
        }
    }
}

impl BenchConfig {
    pub fn cells(&self, lattice: &CandidateLattice) -> Vec<(usize, usize)> {
        match self.subsample {
            Some((step, offset)) => lattice.subsample(step.max(1), offset),
            None => (0..lattice.rows).flat_map(|r| (0..lattice.cols).map(move |c| (r, c))).collect(),
        }
    }
}

/// Seed of the planner run for one candidate.
pub fn candidate_seed(base: u64, index: usize) -> u64 {
    base ^ index as u64
}

/// Reference seeds are kept apart from the baseline planner's.
const GROUND_TRUTH_SALT: u64 = 0x6A09_E667_F3BC_C908;

/// Reference verdicts for the selected cells, computed in parallel.
pub fn ground_truth_verdicts(
    setup: &SwingSetup<'_>,
    lattice: &CandidateLattice,
    cells: &[(usize, usize)],
    seed: u64,
) -> Result<Vec<bool>> {
    let footholds = lattice.footholds(setup.map);
    cells
        .par_iter()
        .map(|&(r, c)| {
            let k = r * lattice.cols + c;
            match footholds[k] {
                Some(q) => ground_truth_reachable(setup, &q, &PlannerConfig::ground_truth(candidate_seed(seed ^ GROUND_TRUTH_SALT, k))),
                None => Ok(false),
            }
        })
        .collect()
}

/// Verdicts of one method for the selected cells, in cell order, and the
/// wall-clock time of the whole batch.
pub fn run_method(
    method: Method,
    setup: &SwingSetup<'_>,
    lattice: &CandidateLattice,
    cells: &[(usize, usize)],
    config: &BenchConfig,
) -> Result<(Vec<bool>, u64)> {
    let started = Instant::now();
    let verdicts = match method {
        Method::KcfrcKey | Method::KcfrcConv => {
            let cfg = if method == Method::KcfrcKey { &config.key } else { &config.conv };
            let m = batch_check(setup, lattice, Some(cells), cfg)?;
            cells.iter().map(|&(r, c)| m.get(r, c)).collect()
        }
        Method::Fec | Method::Rrt1ms | Method::Rrt50us => {
            let footholds = lattice.footholds(setup.map);
            let mut out = Vec::with_capacity(cells.len());
            for &(r, c) in cells {
                let k = r * lattice.cols + c;
                let Some(q) = footholds[k] else {
                    out.push(false);
                    continue;
                };
                out.push(per_candidate(method, setup, &q, candidate_seed(config.seed, k), config)?);
            }
            out
        }
    };
    Ok((verdicts, started.elapsed().as_nanos() as u64))
}

fn per_candidate(method: Method, setup: &SwingSetup<'_>, q: &Point3<f64>, seed: u64, config: &BenchConfig) -> Result<bool> {
    Ok(match method {
        Method::Fec => fec_check(setup, q, &config.fec),
        Method::Rrt1ms => rrt_connect_reachable(setup, q, &PlannerConfig::rrt_1ms(seed))?.reachable,
        Method::Rrt50us => rrt_connect_reachable(setup, q, &PlannerConfig::rrt_50us(seed))?.reachable,
        Method::KcfrcKey | Method::KcfrcConv => unreachable!("batch methods are not run per candidate"),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodSwing {
    pub method: Method,
    pub confusion: Confusion,
    /// Median batch time over the timed repetitions.
    pub batch_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SwingReport {
    pub transition: usize,
    pub swing: usize,
    pub leg_index: usize,
    pub candidates: usize,
    pub reachable: usize,
    pub methods: Vec<MethodSwing>,
}

/// Evaluates `methods` on one swing. Verdicts come from the first timed
/// repetition.
pub fn bench_swing(
    setup: &SwingSetup<'_>,
    lattice: &CandidateLattice,
    methods: &[Method],
    config: &BenchConfig,
) -> Result<(Vec<bool>, Vec<MethodSwing>)> {
    let cells = config.cells(lattice);
    let truth = ground_truth_verdicts(setup, lattice, &cells, config.seed)?;
    let mut out = Vec::with_capacity(methods.len());
    for &method in methods {
        if config.warmup {
            run_method(method, setup, lattice, &cells, config)?;
        }
        let mut verdicts = None;
        let mut times = Vec::with_capacity(config.repetitions.max(1));
        for _ in 0..config.repetitions.max(1) {
            let (v, ns) = run_method(method, setup, lattice, &cells, config)?;
            verdicts.get_or_insert(v);
            times.push(ns);
        }
        let verdicts = verdicts.expect("at least one repetition");
        let mut confusion = Confusion::default();
        for (p, a) in verdicts.iter().zip(&truth) {
            confusion.add(*p, *a);
        }
        out.push(MethodSwing { method, confusion, batch_ms: median(&mut times) as f64 * 1e-6 });
    }
    Ok((truth, out))
}

fn median(v: &mut [u64]) -> u64 {
    v.sort_unstable();
    v[v.len() / 2]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodSummary {
    pub method: Method,
    pub confusion: Confusion,
    pub accuracy: Rate,
    pub precision: Rate,
    pub recall: Rate,
    /// Mean and worst batch time over swings.
    pub avg_time_ms: f64,
    pub max_time_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    pub cpu: String,
    pub threads: usize,
    pub optimized: bool,
    pub debug_assertions: bool,
}

impl Environment {
    pub fn detect() -> Self {
        let cpu = std::fs::read_to_string("/proc/cpuinfo")
            .ok()
            .and_then(|s| s.lines().find(|l| l.starts_with("model name")).and_then(|l| l.split(':').nth(1)).map(|s| s.trim().to_string()))
            .unwrap_or_else(|| std::env::consts::ARCH.to_string());
        Self {
            cpu,
            threads: rayon::current_num_threads(),
            optimized: !cfg!(debug_assertions),
            debug_assertions: cfg!(debug_assertions),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkReport {
    pub kind: SceneKind,
    pub scene_seed: u64,
    pub robot: String,
    pub seed: u64,
    pub candidates_per_swing: usize,
    pub methods: Vec<MethodSummary>,
    pub swings: Vec<SwingReport>,
    pub environment: Environment,
}

impl BenchmarkReport {
    pub fn method(&self, m: Method) -> Option<&MethodSummary> {
        self.methods.iter().find(|s| s.method == m)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// One row per method.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "method,tp,fp,fn,tn,accuracy,precision,recall,precision_undefined,recall_undefined,avg_time_ms,max_time_ms\n",
        );
        for s in &self.methods {
            let c = &s.confusion;
            out.push_str(&format!(
                "{},{},{},{},{},{:.6},{:.6},{:.6},{},{},{:.6},{:.6}\n",
                s.method,
                c.tp,
                c.fp,
                c.fn_,
                c.tn,
                s.accuracy.value,
                s.precision.value,
                s.recall.value,
                s.precision.undefined,
                s.recall.undefined,
                s.avg_time_ms,
                s.max_time_ms
            ));
        }
        out
    }
}

/// Runs every swing of `scenario` through `methods`.
pub fn bench_scenario(scenario: &Scenario, robot: &RobotModel, methods: &[Method], config: &BenchConfig) -> Result<BenchmarkReport> {
    if scenario.states.robot != robot.name {
        return Err(invalid(format!("scenario was generated for {}, not {}", scenario.states.robot, robot.name)));
    }
    let sdf = scene_sdf(&scenario.map, robot)?;
    let mut swings = Vec::new();
    let mut candidates_per_swing = 0;
    for (k, s) in scenario.swings() {
        let setup = scenario.setup(robot, &sdf, k, s)?;
        let lattice = scenario.lattice(k, s)?;
        candidates_per_swing = config.cells(&lattice).len();
        let (truth, results) = bench_swing(&setup, &lattice, methods, config)?;
        swings.push(SwingReport {
            transition: k,
            swing: s,
            leg_index: setup.leg_index,
            candidates: truth.len(),
            reachable: truth.iter().filter(|v| **v).count(),
            methods: results,
        });
    }
    let summaries = methods
        .iter()
        .map(|&m| {
            let mut confusion = Confusion::default();
            let mut times = Vec::new();
            for sw in &swings {
                let r = sw.methods.iter().find(|r| r.method == m).expect("every swing runs every method");
                confusion.merge(&r.confusion);
                times.push(r.batch_ms);
            }
            let avg = if times.is_empty() { 0.0 } else { times.iter().sum::<f64>() / times.len() as f64 };
            MethodSummary {
                method: m,
                confusion,
                accuracy: confusion.accuracy(),
                precision: confusion.precision(),
                recall: confusion.recall(),
                avg_time_ms: avg,
                max_time_ms: times.iter().copied().fold(0.0, f64::max),
            }
        })
        .collect();
    Ok(BenchmarkReport {
        kind: scenario.states.kind,
        scene_seed: scenario.states.seed,
        robot: robot.name.clone(),
        seed: config.seed,
        candidates_per_swing,
        methods: summaries,
        swings,
        environment: Environment::detect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::robot::elspider_air;
    use crate::scene::SceneConfig;

    #[test]
    fn rates_flag_empty_denominators() {
        let c = Confusion { tp: 0, fp: 0, fn_: 0, tn: 5 };
        assert_eq!(c.precision(), Rate { value: 1.0, undefined: true });
        assert_eq!(c.recall(), Rate { value: 1.0, undefined: true });
        assert_eq!(c.accuracy(), Rate { value: 1.0, undefined: false });
        let c = Confusion { tp: 3, fp: 1, fn_: 2, tn: 4 };
        assert_eq!(c.precision().value, 0.75);
        assert_eq!(c.recall().value, 0.6);
        assert_eq!(c.accuracy().value, 0.7);
    }

    #[test]
    fn method_names_parse() {
        assert_eq!(Method::parse_list("kcfrc_key, fec,kcfrc_key").unwrap(), vec![Method::KcfrcKey, Method::Fec]);
        assert!(Method::parse_list("kcfrc_key,stomp").is_err());
        assert!(Method::parse_list("").is_err());
        for m in Method::ALL {
            assert_eq!(m.as_str().parse::<Method>().unwrap(), m);
        }
    }

    #[test]
    fn confusion_totals_match_candidates() {
        let robot = elspider_air();
        let cfg = SceneConfig { transitions: 2, ..SceneConfig::desk() };
        let scenario = Scenario::generate(SceneKind::Sparse, 4, &robot, &cfg).unwrap();
        let bench = BenchConfig { repetitions: 1, warmup: false, subsample: Some((6, 2)), ..Default::default() };
        let report = bench_scenario(&scenario, &robot, &[Method::KcfrcKey, Method::Fec], &bench).unwrap();
        let swings = scenario.swings().count();
        assert_eq!(report.swings.len(), swings);
        for m in &report.methods {
            assert_eq!(m.confusion.total(), swings * report.candidates_per_swing);
        }
        assert_eq!(report.to_csv().lines().count(), 3);
    }
}
