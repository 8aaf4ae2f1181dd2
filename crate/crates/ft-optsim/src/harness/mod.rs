//! Command-line front end: scenario parsing, experiment execution, analysis
//! orchestration, batch sweeps, and machine-readable outputs.
//!
//! Every output file is a pure function of the configuration: identical
//! configs produce byte-identical trace, sidecar, and summary files.
//! Wall-clock timing is logged to stderr only.

mod scenario_file;

pub use scenario_file::parse_scenario;

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::{self, Algorithm, ExecutionTrace, Scenario};
use crate::ergodic::{
    build_chain, certify_rate_byzantine, certify_rate_crash, crash_certifying_reduced_graph,
    find_certifying_reduced_graph, reconstruction_residual, satisfies_reduced_bound,
    CertifyOptions, ErgodicError, RateParams, RateReport,
};
use crate::netgraph::{
    self, byzantine_min_source, count_reduced_byzantine, crash_min_source, parse_graph_text,
    FaultMode, FeasibilityReport, GraphError, DEFAULT_ENUMERATION_BUDGET,
};
use crate::objective::{ConstraintInterval, CostFamily, ObjectiveError};
use crate::oracle::{
    guarantee_params, membership, optimum_interval, GuaranteeReport, OptimumInterval, OracleError,
    ValidFamilyParams,
};

pub const TRACE_SCHEMA: &str = "# ft-optsim trace v1";
pub const MATRIX_SCHEMA: &str = "# ft-optsim matrices v1";

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Objective(#[from] ObjectiveError),
    #[error(transparent)]
    Engine(#[from] engine::EngineError),
    #[error(transparent)]
    Ergodic(#[from] ErgodicError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

impl From<std::io::Error> for HarnessError {
    fn from(e: std::io::Error) -> Self {
        HarnessError::Io(e.to_string())
    }
}

/// Which artifacts `cmd_run` writes.
#[derive(Debug, Clone, Copy)]
pub struct EmitFlags {
    pub trace_csv: bool,
    pub sidecar: bool,
    pub matrices: bool,
}

impl Default for EmitFlags {
    fn default() -> Self {
        EmitFlags { trace_csv: true, sidecar: true, matrices: false }
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub scenario_path: PathBuf,
    pub out_dir: PathBuf,
    pub emit: EmitFlags,
    pub seed_override: Option<u64>,
    pub membership_tol: f64,
    pub budget: u64,
}

impl RunConfig {
    pub fn new(scenario_path: impl Into<PathBuf>, out_dir: impl Into<PathBuf>) -> Self {
        RunConfig {
            scenario_path: scenario_path.into(),
            out_dir: out_dir.into(),
            emit: EmitFlags::default(),
            seed_override: None,
            membership_tol: 1e-3,
            budget: DEFAULT_ENUMERATION_BUDGET,
        }
    }
}

/// Cheap per-round invariants tallied while summarizing a trace.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantTallies {
    pub rounds_checked: usize,
    pub projection_bound_violations: usize,
    pub feasibility_violations: usize,
    pub aggregate_containment_violations: usize,
    pub retained_arithmetic_violations: usize,
    pub crash_silence_violations: usize,
}

/// One experiment summary; every serialized field is reproducible from the
/// trace and oracle outputs alone.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRecord {
    pub scenario_id: String,
    pub algorithm: Algorithm,
    pub rounds: usize,
    pub seed: u64,
    pub final_spread: f64,
    pub consensus_value: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OptimumInterval>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub guarantee: Option<GuaranteeReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub membership: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distance: Option<f64>,
    pub invariants: InvariantTallies,
    #[serde(skip)]
    pub wall_clock_ms: u128,
}

fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100_0000_01b3);
    }
    h
}

/// Stable content hash of a scenario.
pub fn scenario_id(scenario: &Scenario) -> String {
    let json = serde_json::to_string(scenario).expect("scenario serializes");
    format!("{:016x}", fnv1a(json.as_bytes()))
}

/// Per-round invariant sweep over a finished trace.
pub fn tally_invariants(trace: &ExecutionTrace) -> InvariantTallies {
    let sc = &trace.scenario;
    let g = &sc.graph;
    let f = sc.f;
    let nf = trace.non_faulty();
    let mut t = InvariantTallies { rounds_checked: trace.final_round(), ..Default::default() };
    for (k, rec) in trace.rounds.iter().enumerate() {
        let lambda = sc.schedule.at(k);
        let prev = trace.estimates_at(k);
        let prev_max = nf.iter().map(|&a| prev[a - 1]).fold(f64::NEG_INFINITY, f64::max);
        let prev_min = nf.iter().map(|&a| prev[a - 1]).fold(f64::INFINITY, f64::min);
        for i in g.vertices() {
            let idx = i - 1;
            if !rec.updated[idx] {
                continue;
            }
            if rec.projection_error[idx].abs() > lambda * trace.lipschitz + 1e-12 {
                t.projection_bound_violations += 1;
            }
            if sc.algorithm.projects() && !sc.constraint.contains(rec.estimates[idx]) {
                t.feasibility_violations += 1;
            }
            if sc.algorithm.is_byzantine() {
                let v = rec.aggregate[idx];
                if v < prev_min - 1e-9 || v > prev_max + 1e-9 {
                    t.aggregate_containment_violations += 1;
                }
                let d_in = g.in_degree(i);
                let want = d_in - 2 * f;
                if rec.retained[idx].len() != want {
                    t.retained_arithmetic_violations += 1;
                }
                if sc.algorithm == Algorithm::A2 && rec.retained_grad[idx].len() != d_in + 1 - 2 * f
                {
                    t.retained_arithmetic_violations += 1;
                }
            }
            // Crash silence: no message from an agent past its crash round.
            for msg in &rec.received[idx] {
                if let Some(tc) = sc.crash_round(msg.sender) {
                    if rec.round > tc {
                        t.crash_silence_violations += 1;
                    }
                }
            }
        }
    }
    t
}

/// Theorem parameters and oracle interval for the scenario's algorithm
/// (None for the pure consensus algorithms).
pub fn scenario_oracle(
    scenario: &Scenario,
    budget: u64,
) -> Result<Option<(GuaranteeReport, Option<OptimumInterval>)>, HarnessError> {
    if !matches!(
        scenario.algorithm,
        Algorithm::A1 | Algorithm::A2 | Algorithm::A5 | Algorithm::A6
    ) {
        return Ok(None);
    }
    let guarantee = guarantee_params(
        &scenario.graph,
        &scenario.faulty(),
        scenario.f,
        scenario.algorithm,
        budget,
    )?;
    let params = ValidFamilyParams {
        beta: guarantee.beta,
        gamma: guarantee.gamma,
        mode: guarantee.mode,
    };
    let interval = match optimum_interval(
        &scenario.costs,
        &scenario.non_faulty(),
        &params,
        Some(&scenario.constraint),
    ) {
        Ok(iv) => Some(iv),
        Err(OracleError::CurvatureUnsupported) => None,
        Err(e) => return Err(e.into()),
    };
    Ok(Some((guarantee, interval)))
}

/// Summarize a finished trace against its oracle.
pub fn summarize(
    trace: &ExecutionTrace,
    membership_tol: f64,
    budget: u64,
) -> Result<SummaryRecord, HarnessError> {
    let consensus = trace.consensus_value();
    let (guarantee, oracle) = match scenario_oracle(&trace.scenario, budget)? {
        Some((g, iv)) => (Some(g), iv),
        None => (None, None),
    };
    let (member, distance) = match &oracle {
        Some(iv) => (Some(membership(consensus, iv, membership_tol)), Some(iv.distance(consensus))),
        None => (None, None),
    };
    Ok(SummaryRecord {
        scenario_id: scenario_id(&trace.scenario),
        algorithm: trace.scenario.algorithm,
        rounds: trace.final_round(),
        seed: trace.scenario.seed,
        final_spread: trace.final_spread(),
        consensus_value: consensus,
        oracle,
        guarantee,
        membership: member,
        distance,
        invariants: tally_invariants(trace),
        wall_clock_ms: 0,
    })
}

/// Trace CSV: one row per agent per round (round 0 carries the initial
/// states). Byzantine agents hold no estimate and are omitted.
pub fn trace_csv(trace: &ExecutionTrace) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{TRACE_SCHEMA}");
    let _ = writeln!(out, "round,agent,estimate,gradient_used,projection_error");
    let byz: BTreeSet<usize> = trace.scenario.byzantine.keys().copied().collect();
    for i in trace.scenario.graph.vertices() {
        if byz.contains(&i) {
            continue;
        }
        let _ = writeln!(out, "0,{i},{},0,0", trace.initial[i - 1]);
    }
    for rec in &trace.rounds {
        for i in trace.scenario.graph.vertices() {
            if byz.contains(&i) {
                continue;
            }
            let idx = i - 1;
            let _ = writeln!(
                out,
                "{},{i},{},{},{}",
                rec.round, rec.estimates[idx], rec.gradient_used[idx], rec.projection_error[idx]
            );
        }
    }
    out
}

/// Matrix dumps: per-round row-major CSV blocks with a round header.
pub fn matrices_csv(trace: &ExecutionTrace) -> Result<String, HarnessError> {
    let chain = build_chain(trace)?;
    let mut out = String::new();
    let _ = writeln!(out, "{MATRIX_SCHEMA}");
    for round in chain.first_round()..=chain.last_round() {
        let m = chain.matrix(round);
        let agents: Vec<String> = m.agents.iter().map(|a| a.to_string()).collect();
        let _ = writeln!(out, "# round {round} agents {}", agents.join(","));
        for i in 0..m.dim() {
            let row: Vec<String> = (0..m.dim()).map(|j| format!("{}", m.get(i, j))).collect();
            let _ = writeln!(out, "{}", row.join(","));
        }
    }
    Ok(out)
}

/// Execute one scenario file and write its artifacts.
pub fn cmd_run(config: &RunConfig) -> Result<SummaryRecord, HarnessError> {
    let started = Instant::now();
    let text = std::fs::read_to_string(&config.scenario_path)
        .map_err(|e| HarnessError::Io(format!("{}: {e}", config.scenario_path.display())))?;
    let base = config.scenario_path.parent().unwrap_or(Path::new("."));
    let mut scenario = parse_scenario(&text, base)?;
    if let Some(seed) = config.seed_override {
        scenario.seed = seed;
    }
    let trace = engine::run(&scenario)?;
    let mut summary = summarize(&trace, config.membership_tol, config.budget)?;

    std::fs::create_dir_all(&config.out_dir)?;
    if config.emit.trace_csv {
        std::fs::write(config.out_dir.join("trace.csv"), trace_csv(&trace))?;
    }
    if config.emit.sidecar {
        let json = serde_json::to_string_pretty(&trace).expect("trace serializes");
        std::fs::write(config.out_dir.join("trace_sidecar.json"), json)?;
    }
    if config.emit.matrices {
        std::fs::write(config.out_dir.join("matrices.csv"), matrices_csv(&trace)?)?;
    }
    summary.wall_clock_ms = started.elapsed().as_millis();
    let json = serde_json::to_string_pretty(&summary).expect("summary serializes");
    std::fs::write(config.out_dir.join("summary.json"), json)?;
    eprintln!(
        "run {}: {} rounds in {} ms",
        summary.scenario_id, summary.rounds, summary.wall_clock_ms
    );
    Ok(summary)
}

/// Output of `cmd_check`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckOutput {
    pub report: FeasibilityReport,
    /// Guarantee formulas for the applicable algorithms, evaluated for the
    /// empty fault realization.
    pub guarantees: Vec<GuaranteeReport>,
}

/// Feasibility check of a graph file under one fault mode.
pub fn cmd_check(
    graph_path: &Path,
    f: usize,
    mode: FaultMode,
    budget: u64,
) -> Result<CheckOutput, HarnessError> {
    let text = std::fs::read_to_string(graph_path)
        .map_err(|e| HarnessError::Io(format!("{}: {e}", graph_path.display())))?;
    let g = parse_graph_text(&text)?;
    let (report, algorithms) = match mode {
        FaultMode::Byzantine => (
            netgraph::check_assumption_byzantine(&g, f, budget)?,
            vec![Algorithm::A1, Algorithm::A2],
        ),
        FaultMode::Crash => (
            netgraph::check_assumption_crash(&g, f, budget)?,
            vec![Algorithm::A5, Algorithm::A6],
        ),
    };
    let mut guarantees = Vec::new();
    for alg in algorithms {
        match guarantee_params(&g, &BTreeSet::new(), f, alg, budget) {
            Ok(rep) => guarantees.push(rep),
            Err(OracleError::InvalidParams(_)) => {}
            Err(e) => return Err(e.into()),
        }
    }
    Ok(CheckOutput { report, guarantees })
}

/// Output of `cmd_analyze`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AnalyzeOutput {
    pub mode: FaultMode,
    pub rounds: usize,
    pub pass: bool,
    /// Largest reconstruction residual across all rounds (Byzantine mode).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_reconstruction_residual: Option<f64>,
    /// Rounds with a certifying reduced graph found / total rounds.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificates_found: Option<(usize, usize)>,
    /// Metropolis matrices doubly stochastic within 1e-12 (A4 traces).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub doubly_stochastic: Option<bool>,
    pub reports: Vec<RateReport>,
}

/// Rebuild matrices from a sidecar trace and certify the rate bounds.
pub fn cmd_analyze(trace_path: &Path, budget: u64) -> Result<AnalyzeOutput, HarnessError> {
    let text = std::fs::read_to_string(trace_path)
        .map_err(|e| HarnessError::Io(format!("{}: {e}", trace_path.display())))?;
    let trace: ExecutionTrace =
        serde_json::from_str(&text).map_err(|e| HarnessError::Parse(e.to_string()))?;
    analyze_trace(&trace, budget)
}

/// Analysis entry point shared by the CLI and tests.
pub fn analyze_trace(trace: &ExecutionTrace, budget: u64) -> Result<AnalyzeOutput, HarnessError> {
    let scenario = &trace.scenario;
    let g = &scenario.graph;
    let chain = build_chain(trace)?;
    let opts = CertifyOptions { seed: scenario.seed, ..CertifyOptions::default() };
    let mut pass = true;

    if scenario.algorithm.is_byzantine() {
        let faulty = scenario.faulty();
        let tau_b = count_reduced_byzantine(g, &faulty, scenario.f);
        let gamma = byzantine_min_source(g, &faulty, scenario.f, budget)?;
        let params = RateParams::byzantine(g, scenario.f, faulty.len(), tau_b, gamma);
        let xi = match params {
            RateParams::Byzantine { xi, .. } => xi,
            _ => unreachable!(),
        };
        let mut max_residual: f64 = 0.0;
        let mut found = 0usize;
        for s in 0..trace.final_round() {
            let m = chain.matrix(s);
            max_residual = max_residual.max(reconstruction_residual(trace, s, m));
            if find_certifying_reduced_graph(trace, m, xi, 1e-12).is_ok() {
                found += 1;
            }
        }
        pass &= max_residual <= 1e-9 && found == trace.final_round();
        let mut reports = Vec::new();
        for r in anchor_rounds(0, trace.final_round() - 1) {
            let rep = certify_rate_byzantine(&chain, &params, r, &opts)?;
            pass &= rep.pass;
            reports.push(rep);
        }
        Ok(AnalyzeOutput {
            mode: FaultMode::Byzantine,
            rounds: trace.final_round(),
            pass,
            max_reconstruction_residual: Some(max_residual),
            certificates_found: Some((found, trace.final_round())),
            doubly_stochastic: None,
            reports,
        })
    } else {
        let gamma = crash_min_source(g, &scenario.faulty());
        let params = RateParams::crash(g, scenario.f, gamma);
        let zeta = match params {
            RateParams::Crash { zeta, .. } => zeta,
            _ => unreachable!(),
        };
        let mut doubly = None;
        if scenario.algorithm == Algorithm::A4 {
            doubly = Some(
                (1..=trace.final_round())
                    .all(|t| chain.matrix(t).is_doubly_stochastic(1e-12)),
            );
            pass &= doubly == Some(true);
        }
        // Per-round reduced-graph lower bound (constructive certificate).
        for t in 1..=trace.final_round() {
            let h = crash_certifying_reduced_graph(trace, t);
            pass &= satisfies_reduced_bound(chain.matrix(t), &h, zeta, 1e-12);
        }
        let rep = certify_rate_crash(trace, &chain, &params, &opts)?;
        pass &= rep.pass;
        Ok(AnalyzeOutput {
            mode: FaultMode::Crash,
            rounds: trace.final_round(),
            pass,
            max_reconstruction_residual: None,
            certificates_found: None,
            doubly_stochastic: doubly,
            reports: vec![rep],
        })
    }
}

fn anchor_rounds(first: usize, last: usize) -> Vec<usize> {
    let span = last - first;
    let mut rs = vec![first];
    if span >= 4 {
        rs.push(first + span / 4);
        rs.push(first + span / 2);
    }
    rs
}

/// Oracle query parameters for `cmd_oracle`.
#[derive(Debug, Clone)]
pub struct OracleQuery {
    pub centers: Vec<f64>,
    pub faulty: BTreeSet<usize>,
    pub beta: f64,
    pub gamma: usize,
    pub mode: FaultMode,
    pub constraint: Option<ConstraintInterval>,
}

pub fn cmd_oracle(query: &OracleQuery) -> Result<OptimumInterval, HarnessError> {
    let costs = CostFamily::from_centers(&query.centers);
    let nf: BTreeSet<usize> =
        (1..=query.centers.len()).filter(|i| !query.faulty.contains(i)).collect();
    let params = ValidFamilyParams { beta: query.beta, gamma: query.gamma, mode: query.mode };
    Ok(optimum_interval(&costs, &nf, &params, query.constraint.as_ref())?)
}

/// Sweep description: a base scenario crossed with seed and algorithm lists.
#[derive(Debug, Deserialize)]
pub struct SweepFile {
    pub scenario: String,
    pub sweep: SweepSection,
}

#[derive(Debug, Deserialize)]
pub struct SweepSection {
    pub seeds: Vec<u64>,
    #[serde(default)]
    pub algorithms: Vec<String>,
}

/// One sweep cell result, serialized as a CSV row.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub cell: usize,
    pub algorithm: String,
    pub seed: u64,
    pub status: Result<SummaryRecord, String>,
}

/// Run every (algorithm, seed) combination of a sweep file; cells run
/// concurrently and the output order is deterministic.
pub fn cmd_sweep(sweep_path: &Path, out_dir: &Path) -> Result<PathBuf, HarnessError> {
    let text = std::fs::read_to_string(sweep_path)
        .map_err(|e| HarnessError::Io(format!("{}: {e}", sweep_path.display())))?;
    let sweep: SweepFile = toml::from_str(&text).map_err(|e| HarnessError::Parse(e.to_string()))?;
    if sweep.sweep.seeds.is_empty() {
        return Err(HarnessError::Parse("[sweep] seed list is empty".into()));
    }
    let base_dir = sweep_path.parent().unwrap_or(Path::new("."));
    let scenario_path = base_dir.join(&sweep.scenario);
    let scenario_text = std::fs::read_to_string(&scenario_path)
        .map_err(|e| HarnessError::Io(format!("{}: {e}", scenario_path.display())))?;
    let scenario_dir = scenario_path.parent().unwrap_or(Path::new(".")).to_path_buf();

    let algorithms: Vec<Option<String>> = if sweep.sweep.algorithms.is_empty() {
        vec![None]
    } else {
        sweep.sweep.algorithms.iter().cloned().map(Some).collect()
    };
    let cells: Vec<(usize, Option<String>, u64)> = algorithms
        .iter()
        .flat_map(|alg| sweep.sweep.seeds.iter().map(move |&s| (alg.clone(), s)))
        .enumerate()
        .map(|(k, (alg, s))| (k, alg, s))
        .collect();

    let run_cell = |alg: &Option<String>, seed: u64| -> Result<SummaryRecord, String> {
        let mut scenario =
            parse_scenario(&scenario_text, &scenario_dir).map_err(|e| e.to_string())?;
        scenario.seed = seed;
        if let Some(alg) = alg {
            scenario.algorithm = alg.parse::<Algorithm>().map_err(|e| e.to_string())?;
            scenario.validate().map_err(|e| e.to_string())?;
        }
        let trace = engine::run(&scenario).map_err(|e| e.to_string())?;
        summarize(&trace, 1e-3, DEFAULT_ENUMERATION_BUDGET).map_err(|e| e.to_string())
    };

    let mut rows: Vec<SweepRow> = Vec::with_capacity(cells.len());
    std::thread::scope(|scope| {
        let handles: Vec<_> = cells
            .iter()
            .map(|(k, alg, seed)| {
                let run_cell = &run_cell;
                scope.spawn(move || SweepRow {
                    cell: *k,
                    algorithm: alg.clone().unwrap_or_else(|| "base".into()),
                    seed: *seed,
                    status: run_cell(alg, *seed),
                })
            })
            .collect();
        for h in handles {
            rows.push(h.join().expect("sweep cell panicked"));
        }
    });
    rows.sort_by_key(|r| r.cell);

    let mut csv = String::new();
    let _ = writeln!(csv, "# ft-optsim sweep v1");
    let _ = writeln!(
        csv,
        "cell,algorithm,seed,status,final_spread,consensus_value,oracle_lo,oracle_hi,membership,distance"
    );
    let mut member_true = 0usize;
    let mut member_total = 0usize;
    for row in &rows {
        match &row.status {
            Ok(s) => {
                let (lo, hi) = s.oracle.map(|iv| (iv.lo, iv.hi)).unwrap_or((f64::NAN, f64::NAN));
                let member = match s.membership {
                    Some(m) => {
                        member_total += 1;
                        member_true += m as usize;
                        m.to_string()
                    }
                    None => String::new(),
                };
                let _ = writeln!(
                    csv,
                    "{},{},{},ok,{},{},{lo},{hi},{member},{}",
                    row.cell,
                    row.algorithm,
                    row.seed,
                    s.final_spread,
                    s.consensus_value,
                    s.distance.unwrap_or(f64::NAN)
                );
            }
            Err(e) => {
                let _ = writeln!(
                    csv,
                    "{},{},{},error: {},,,,,,",
                    row.cell,
                    row.algorithm,
                    row.seed,
                    e.replace(',', ";")
                );
            }
        }
    }
    if member_total > 0 {
        let _ = writeln!(csv, "# membership_rate {}", member_true as f64 / member_total as f64);
    }
    std::fs::create_dir_all(out_dir)?;
    let out_path = out_dir.join("sweep.csv");
    std::fs::write(&out_path, csv)?;
    Ok(out_path)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn anchor_rounds_are_sane() {
        assert_eq!(anchor_rounds(0, 2), vec![0]);
        assert_eq!(anchor_rounds(0, 100), vec![0, 25, 50]);
        assert_eq!(anchor_rounds(1, 9), vec![1, 3, 5]);
    }

    #[test]
    fn scenario_id_is_stable() {
        let sc = Scenario {
            graph: crate::netgraph::DirectedGraph::complete(3),
            f: 0,
            byzantine: Default::default(),
            crashes: Default::default(),
            costs: CostFamily::from_centers(&[0.0, 1.0, 2.0]),
            constraint: ConstraintInterval::new(-1.0, 1.0).unwrap(),
            schedule: Default::default(),
            algorithm: Algorithm::A3,
            rounds: 5,
            seed: 1,
            initial: vec![0.0, 0.5, 1.0],
        };
        assert_eq!(scenario_id(&sc), scenario_id(&sc.clone()));
    }
}
