//! Reconstruction of the per-round row-stochastic update matrices from
//! execution traces, backward products, Hajnal coefficients of ergodicity,
//! limiting weight vectors, and the rate-bound certifiers.
//!
//! Index conventions follow the update equations: Byzantine matrices satisfy
//! x[s+1] = M[s] x[s] - lambda[s] d[s] + e[s] (matrix index one below the
//! round index), crash matrices satisfy x[t] = P[t] x[t-1] - lambda[t-1]
//! d[t-1] + e[t-1] (same index as the round).

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::engine::{Algorithm, ExecutionTrace};
use crate::netgraph::DirectedGraph;

#[derive(Debug, Error)]
pub enum ErgodicError {
    #[error("trace mismatch: {0}")]
    TraceMismatch(String),
    #[error("product index out of range: Phi({t}, {r}) over rounds {first}..={last}")]
    IndexOutOfRange { t: usize, r: usize, first: usize, last: usize },
    #[error("backward product not converged: residual delta {residual} > {threshold}")]
    NotConverged { residual: f64, threshold: f64 },
    #[error("matrix reconstruction failed: {0}")]
    ReconstructionFailed(String),
}

/// A square row-stochastic matrix indexed by agent labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StochasticMatrix {
    pub round: usize,
    pub agents: Vec<usize>,
    data: Vec<f64>,
}

impl StochasticMatrix {
    pub fn zeros(round: usize, agents: Vec<usize>) -> Self {
        let n = agents.len();
        StochasticMatrix { round, agents, data: vec![0.0; n * n] }
    }

    pub fn identity(round: usize, agents: Vec<usize>) -> Self {
        let n = agents.len();
        let mut m = Self::zeros(round, agents);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.agents.len()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim() + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let n = self.dim();
        self.data[i * n + j] = v;
    }

    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let n = self.dim();
        self.data[i * n + j] += v;
    }

    /// Position of an agent label in the row/column order.
    pub fn pos(&self, agent: usize) -> Option<usize> {
        self.agents.binary_search(&agent).ok()
    }

    pub fn by_label(&self, a: usize, b: usize) -> f64 {
        self.get(self.pos(a).expect("row agent"), self.pos(b).expect("column agent"))
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| (0..self.dim()).map(|j| self.get(i, j)).sum()).collect()
    }

    pub fn col_sums(&self) -> Vec<f64> {
        (0..self.dim()).map(|j| (0..self.dim()).map(|i| self.get(i, j)).sum()).collect()
    }

    pub fn is_row_stochastic(&self, tol: f64) -> bool {
        self.data.iter().all(|&v| v >= -tol)
            && self.row_sums().iter().all(|s| (s - 1.0).abs() <= tol)
    }

    pub fn is_doubly_stochastic(&self, tol: f64) -> bool {
        self.is_row_stochastic(tol) && self.col_sums().iter().all(|s| (s - 1.0).abs() <= tol)
    }

    /// `left * self` (one backward-product step).
    pub fn left_multiplied(&self, left: &StochasticMatrix) -> StochasticMatrix {
        assert_eq!(self.agents, left.agents);
        let n = self.dim();
        let mut out = StochasticMatrix::zeros(left.round, self.agents.clone());
        for i in 0..n {
            for k in 0..n {
                let l = left.get(i, k);
                if l == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += l * self.get(k, j);
                }
            }
        }
        out
    }
}

/// Ordered per-round matrices with backward-product queries
/// Phi(t, r) = M[t] M[t-1] ... M[r], Phi(t, t) = M[t], Phi(t, t+1) = I.
#[derive(Debug, Clone)]
pub struct ProductChain {
    mats: Vec<StochasticMatrix>,
    first: usize,
}

impl ProductChain {
    pub fn new(mats: Vec<StochasticMatrix>, first: usize) -> Self {
        assert!(!mats.is_empty());
        ProductChain { mats, first }
    }

    pub fn first_round(&self) -> usize {
        self.first
    }

    pub fn last_round(&self) -> usize {
        self.first + self.mats.len() - 1
    }

    pub fn len(&self) -> usize {
        self.mats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mats.is_empty()
    }

    pub fn matrix(&self, round: usize) -> &StochasticMatrix {
        &self.mats[round - self.first]
    }

    pub fn agents(&self) -> &[usize] {
        &self.mats[0].agents
    }

    /// Backward product Phi(t, r).
    pub fn product(&self, t: usize, r: usize) -> Result<StochasticMatrix, ErgodicError> {
        let out_of_range = || ErgodicError::IndexOutOfRange {
            t,
            r,
            first: self.first,
            last: self.last_round(),
        };
        if r > t + 1 {
            return Err(out_of_range());
        }
        if r == t + 1 {
            return Ok(StochasticMatrix::identity(t, self.agents().to_vec()));
        }
        if r < self.first || t > self.last_round() {
            return Err(out_of_range());
        }
        let mut acc = self.matrix(r).clone();
        for s in r + 1..=t {
            acc = acc.left_multiplied(self.matrix(s));
        }
        acc.round = t;
        Ok(acc)
    }
}

/// Parameters of the convergence-rate machinery.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum RateParams {
    Byzantine {
        /// xi = 1 / (2 (d_max + 1 - 2f)).
        xi: f64,
        /// tau_b: number of reduced graphs for the realized fault set.
        tau_b: u64,
        /// nu = tau_b (n - phi).
        nu: u64,
        /// theta = 1 - xi^nu (rounds to 1.0 when xi^nu underflows).
        theta: f64,
        /// Minimum source-component size across the reduced-graph family.
        gamma: usize,
    },
    Crash {
        /// zeta = 1 / (d_max + 1).
        zeta: f64,
        n: usize,
        f: usize,
        /// Minimum source size of the live part over subsets of the realized
        /// fault set.
        gamma: usize,
    },
}

impl RateParams {
    pub fn byzantine(graph: &DirectedGraph, f: usize, phi: usize, tau_b: u64, gamma: usize) -> Self {
        let d_max = graph.max_in_degree();
        let xi = 1.0 / (2.0 * (d_max + 1 - 2 * f) as f64);
        debug_assert!(xi >= 1.0 / (2.0 * graph.n() as f64) && xi < 1.0);
        let nu = tau_b * (graph.n() - phi) as u64;
        let theta = 1.0 - xi.powf(nu as f64);
        RateParams::Byzantine { xi, tau_b, nu, theta, gamma }
    }

    pub fn crash(graph: &DirectedGraph, f: usize, gamma: usize) -> Self {
        let zeta = 1.0 / (graph.max_in_degree() + 1) as f64;
        debug_assert!(zeta > 0.0 && (graph.edge_count() == 0 || zeta <= 0.5));
        RateParams::Crash { zeta, n: graph.n(), f, gamma }
    }
}

/// Build the crash update matrix P[t] (or the doubly-stochastic bookkeeping
/// matrix of the Metropolis algorithm) from the trace.
pub fn build_crash_matrix(
    trace: &ExecutionTrace,
    t: usize,
) -> Result<StochasticMatrix, ErgodicError> {
    let alg = trace.scenario.algorithm;
    if !alg.is_crash() {
        return Err(ErgodicError::TraceMismatch(format!("{alg:?} trace has no crash matrices")));
    }
    if t == 0 || t > trace.final_round() {
        return Err(ErgodicError::TraceMismatch(format!(
            "round {t} outside trace rounds 1..={}",
            trace.final_round()
        )));
    }
    let rec = &trace.rounds[t - 1];
    let g = &trace.scenario.graph;
    let n = g.n();
    let agents: Vec<usize> = (1..=n).collect();
    let mut m = StochasticMatrix::zeros(t, agents);

    for i in 1..=n {
        let idx = i - 1;
        if rec.updated[idx] {
            match alg {
                Algorithm::A3 | Algorithm::A5 | Algorithm::A6 => {
                    let w = 1.0 / (rec.received[idx].len() + 1) as f64;
                    m.add(idx, idx, w);
                    for msg in &rec.received[idx] {
                        m.add(idx, msg.sender - 1, w);
                    }
                }
                Algorithm::A4 => {
                    let mut self_weight = 1.0;
                    for msg in &rec.received[idx] {
                        let w = 1.0 / (g.in_degree(i).max(g.in_degree(msg.sender)) + 1) as f64;
                        self_weight -= w;
                        m.add(idx, msg.sender - 1, w);
                    }
                    m.add(idx, idx, self_weight);
                }
                _ => unreachable!(),
            }
        } else if alg == Algorithm::A4 {
            // Virtual bookkeeping row of a crashed agent: mirror the weights
            // of the receivers of its final partial transmission so that the
            // matrix stays doubly stochastic.
            let mut self_weight = 1.0;
            for j in 1..=n {
                if !rec.updated[j - 1] {
                    continue;
                }
                if rec.received[j - 1].iter().any(|msg| msg.sender == i) {
                    let w = 1.0 / (g.in_degree(i).max(g.in_degree(j)) + 1) as f64;
                    self_weight -= w;
                    m.add(idx, j - 1, w);
                }
            }
            m.add(idx, idx, self_weight);
        } else {
            m.add(idx, idx, 1.0);
        }
    }
    debug_assert!(m.is_row_stochastic(1e-12));
    Ok(m)
}

/// Build the Byzantine update matrix M[s] (satisfying
/// x[s+1] = M[s] x[s] - lambda[s] d[s] + e[s]) from round record s+1.
///
/// Rows assign weight 1/(d_i^- + 1 - 2f) to the agent itself and to each
/// retained sender. A retained faulty sender's weight is split between two
/// bracketing non-faulty values: a retained non-faulty sender with exactly
/// equal value when one exists, otherwise a pair taken from the eliminated
/// sets (one below, one above, distinct pairs across the row's faulty
/// senders) with convex coefficients reproducing the faulty value exactly.
pub fn build_byzantine_matrix(
    trace: &ExecutionTrace,
    s: usize,
) -> Result<StochasticMatrix, ErgodicError> {
    let alg = trace.scenario.algorithm;
    if !alg.is_byzantine() {
        return Err(ErgodicError::TraceMismatch(format!(
            "{alg:?} trace has no Byzantine matrices"
        )));
    }
    if s + 1 > trace.final_round() {
        return Err(ErgodicError::TraceMismatch(format!(
            "matrix index {s} outside trace rounds 1..={}",
            trace.final_round()
        )));
    }
    let rec = &trace.rounds[s];
    let g = &trace.scenario.graph;
    let f = trace.scenario.f;
    let faulty = trace.scenario.faulty();
    let nf: Vec<usize> = trace.non_faulty().into_iter().collect();
    let mut m = StochasticMatrix::zeros(s, nf.clone());

    for (row, &i) in nf.iter().enumerate() {
        let idx = i - 1;
        let d_in = g.in_degree(i);
        let w0 = 1.0 / (d_in + 1 - 2 * f) as f64;
        m.add(row, row, w0);

        let value_of = |sender: usize| -> f64 {
            rec.received[idx]
                .iter()
                .find(|msg| msg.sender == sender)
                .expect("retained sender must appear in received")
                .value
        };
        let retained_nf: Vec<(usize, f64)> = rec.retained[idx]
            .iter()
            .filter(|sdr| !faulty.contains(sdr))
            .map(|&sdr| (sdr, value_of(sdr)))
            .collect();
        for &(sdr, _) in &retained_nf {
            let col = m.pos(sdr).expect("non-faulty sender");
            m.add(row, col, w0);
        }

        let mut faulty_retained: Vec<(usize, f64)> = rec.retained[idx]
            .iter()
            .filter(|sdr| faulty.contains(sdr))
            .map(|&sdr| (sdr, value_of(sdr)))
            .collect();
        if faulty_retained.is_empty() {
            continue;
        }
        faulty_retained.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap().then(a.0.cmp(&b.0)));

        // Non-faulty eliminated values available as brackets. Every value
        // eliminated as small is <= every retained value (symmetrically for
        // the large side), so any assignment brackets correctly; distinct
        // pairs keep the reduced-graph certificate intact.
        let mut elim_small_nf: Vec<(usize, f64)> = rec.trimmed_low[idx]
            .iter()
            .filter(|sdr| !faulty.contains(sdr))
            .map(|&sdr| (sdr, value_of(sdr)))
            .collect();
        elim_small_nf.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
        let mut elim_large_nf: Vec<(usize, f64)> = rec.trimmed_high[idx]
            .iter()
            .filter(|sdr| !faulty.contains(sdr))
            .map(|&sdr| (sdr, value_of(sdr)))
            .collect();
        elim_large_nf.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap().then(a.0.cmp(&b.0)));

        let mut next_bracket = 0usize;
        for (_, w) in faulty_retained {
            // Degenerate bracket: an exactly equal retained non-faulty value
            // absorbs the whole weight.
            if let Some(&(sdr, _)) = retained_nf.iter().find(|&&(_, v)| v == w) {
                let col = m.pos(sdr).expect("non-faulty sender");
                m.add(row, col, w0);
                continue;
            }
            let (a_sdr, a) = *elim_small_nf.get(next_bracket).ok_or_else(|| {
                ErgodicError::ReconstructionFailed(format!(
                    "no non-faulty lower bracket for agent {i} at matrix index {s}"
                ))
            })?;
            let (b_sdr, b) = *elim_large_nf.get(next_bracket).ok_or_else(|| {
                ErgodicError::ReconstructionFailed(format!(
                    "no non-faulty upper bracket for agent {i} at matrix index {s}"
                ))
            })?;
            next_bracket += 1;
            if !(a <= w && w <= b) {
                return Err(ErgodicError::ReconstructionFailed(format!(
                    "bracket [{a}, {b}] does not contain faulty value {w}"
                )));
            }
            let theta = if b > a { (b - w) / (b - a) } else { 1.0 };
            let a_col = m.pos(a_sdr).expect("bracket sender");
            let b_col = m.pos(b_sdr).expect("bracket sender");
            m.add(row, a_col, theta * w0);
            m.add(row, b_col, (1.0 - theta) * w0);
        }
    }
    debug_assert!(m.is_row_stochastic(1e-12));
    Ok(m)
}

/// Largest componentwise residual of the reconstruction
/// x[s+1] - (M[s] x[s] - lambda[s] d[s] + e[s]) over non-faulty agents.
pub fn reconstruction_residual(trace: &ExecutionTrace, s: usize, m: &StochasticMatrix) -> f64 {
    let rec = &trace.rounds[s];
    let lambda = trace.scenario.schedule.at(s);
    let x_prev = trace.estimates_at(s);
    let mut worst: f64 = 0.0;
    for (row, &i) in m.agents.iter().enumerate() {
        let idx = i - 1;
        let mut acc = 0.0;
        for (col, &j) in m.agents.iter().enumerate() {
            acc += m.get(row, col) * x_prev[j - 1];
        }
        let predicted = acc - lambda * rec.gradient_used[idx] + rec.projection_error[idx];
        worst = worst.max((rec.estimates[idx] - predicted).abs());
    }
    worst
}

/// Search for a reduced graph H with M >= xi * H entrywise (unit diagonal
/// included). Keeps, per row, exactly the in-edges whose matrix entry clears
/// xi; a valid family member exists iff that removes at most f in-edges per
/// row.
pub fn find_certifying_reduced_graph(
    trace: &ExecutionTrace,
    m: &StochasticMatrix,
    xi: f64,
    tol: f64,
) -> Result<DirectedGraph, ErgodicError> {
    let g = &trace.scenario.graph;
    let faulty = trace.scenario.faulty();
    let mut h = DirectedGraph::new(g.n());
    for (row, &i) in m.agents.iter().enumerate() {
        if m.get(row, row) < xi - tol {
            return Err(ErgodicError::ReconstructionFailed(format!(
                "diagonal entry of agent {i} below xi"
            )));
        }
        let mut removed = 0usize;
        for &j in g.in_neighbors(i) {
            if faulty.contains(&j) {
                continue;
            }
            let col = m.pos(j).expect("non-faulty column");
            if m.get(row, col) >= xi - tol {
                h.add_edge(j, i).unwrap();
            } else {
                removed += 1;
            }
        }
        if removed > trace.scenario.f {
            return Err(ErgodicError::ReconstructionFailed(format!(
                "no certifying reduced graph: row {i} would need {removed} > f removals"
            )));
        }
    }
    Ok(h)
}

/// Constructive crash certificate: the reduced graph removing edges incident
/// to every agent crashed by the end of round `t` satisfies
/// P[t] >= zeta * H[t] (unit diagonal included).
pub fn crash_certifying_reduced_graph(trace: &ExecutionTrace, t: usize) -> DirectedGraph {
    let crashed: BTreeSet<usize> = trace
        .scenario
        .graph
        .vertices()
        .filter(|&a| trace.scenario.crash_round(a).map_or(false, |tc| tc <= t))
        .collect();
    trace.scenario.graph.remove_incident_edges(&crashed)
}

/// Entrywise check M >= c * H with unit diagonal on H.
pub fn satisfies_reduced_bound(m: &StochasticMatrix, h: &DirectedGraph, c: f64, tol: f64) -> bool {
    for (row, &i) in m.agents.iter().enumerate() {
        if m.get(row, row) < c - tol {
            return false;
        }
        for (col, &j) in m.agents.iter().enumerate() {
            if row != col && h.has_edge(j, i) && m.get(row, col) < c - tol {
                return false;
            }
        }
    }
    true
}

/// Build the full per-round chain for a trace (Byzantine: M[0..=T-1] indexed
/// from 0; crash: P[1..=T] indexed from 1).
pub fn build_chain(trace: &ExecutionTrace) -> Result<ProductChain, ErgodicError> {
    if trace.final_round() == 0 {
        return Err(ErgodicError::TraceMismatch("empty trace".into()));
    }
    if trace.scenario.algorithm.is_byzantine() {
        let mats: Result<Vec<_>, _> =
            (0..trace.final_round()).map(|s| build_byzantine_matrix(trace, s)).collect();
        Ok(ProductChain::new(mats?, 0))
    } else {
        let mats: Result<Vec<_>, _> =
            (1..=trace.final_round()).map(|t| build_crash_matrix(trace, t)).collect();
        Ok(ProductChain::new(mats?, 1))
    }
}

/// delta_r and eta_r of a matrix with respect to a live agent set
/// (column-discrepancy and overlapping-mass coefficients of ergodicity).
pub fn ergodic_coefficients(m: &StochasticMatrix, live: &BTreeSet<usize>) -> (f64, f64) {
    let idx: Vec<usize> = live.iter().filter_map(|&a| m.pos(a)).collect();
    assert!(!idx.is_empty(), "live set must be nonempty");
    let mut delta: f64 = 0.0;
    let mut eta: f64 = f64::INFINITY;
    for &a in &idx {
        for &b in &idx {
            let mut overlap = 0.0;
            for &c in &idx {
                let (x, y) = (m.get(a, c), m.get(b, c));
                delta = delta.max((x - y).abs());
                overlap += x.min(y);
            }
            eta = eta.min(overlap);
        }
    }
    (delta, eta)
}

/// Estimated limiting weight vector of a backward product.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LimitingWeights {
    pub r: usize,
    pub horizon: usize,
    /// Weight per chain agent, aligned with `agents`.
    pub agents: Vec<usize>,
    pub weights: Vec<f64>,
    /// Residual delta of the product over the live rows.
    pub residual: f64,
}

/// Estimate pi(r) from Phi(horizon, r): rows restricted to `live` are
/// averaged and the residual delta is reported. Fails with `NotConverged`
/// when the residual exceeds the threshold.
pub fn limiting_weights(
    chain: &ProductChain,
    r: usize,
    horizon: usize,
    live: &BTreeSet<usize>,
    threshold: f64,
) -> Result<LimitingWeights, ErgodicError> {
    let prod = chain.product(horizon, r)?;
    let (residual, _) = ergodic_coefficients(&prod, live);
    if residual > threshold {
        return Err(ErgodicError::NotConverged { residual, threshold });
    }
    let rows: Vec<usize> = live.iter().filter_map(|&a| prod.pos(a)).collect();
    let n = prod.dim();
    let weights: Vec<f64> = (0..n)
        .map(|j| rows.iter().map(|&i| prod.get(i, j)).sum::<f64>() / rows.len() as f64)
        .collect();
    Ok(LimitingWeights { r, horizon, agents: prod.agents.clone(), weights, residual })
}

/// One verified inequality inside a certification report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub bound: f64,
    pub observed: f64,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RateReport {
    pub mode: String,
    pub pass: bool,
    pub checks: Vec<CheckRecord>,
}

impl RateReport {
    fn push(&mut self, name: impl Into<String>, observed: f64, bound: f64, detail: String) {
        let pass = observed <= bound;
        self.pass &= pass;
        self.checks.push(CheckRecord { name: name.into(), bound, observed, pass, detail });
    }

    fn push_at_least(&mut self, name: impl Into<String>, observed: f64, bound: f64, detail: String) {
        let pass = observed >= bound;
        self.pass &= pass;
        self.checks.push(CheckRecord { name: name.into(), bound, observed, pass, detail });
    }

    pub fn tally(&self) -> (usize, usize) {
        let passed = self.checks.iter().filter(|c| c.pass).count();
        (passed, self.checks.len())
    }
}

/// Options shared by the certifiers.
#[derive(Debug, Clone, Copy)]
pub struct CertifyOptions {
    /// Residual threshold for limiting-weight estimation.
    pub residual_threshold: f64,
    /// Exhaustive index sampling below this many pairs, seeded samples above.
    pub sample_cap: usize,
    pub seed: u64,
    pub slack: f64,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions { residual_threshold: 1e-6, sample_cap: 10_000, seed: 0, slack: 1e-12 }
    }
}

/// Verify the Byzantine rate bound and the column/weight lower bounds at
/// anchor round r: |Phi_ij(t, r) - pi_j(r)| <= theta^ceil((t-r+1)/nu) plus
/// the pi residual, at least gamma columns of Phi(r+nu-1, r) >= xi^nu, and
/// at least gamma entries of pi(r) >= xi^nu.
pub fn certify_rate_byzantine(
    chain: &ProductChain,
    params: &RateParams,
    r: usize,
    opts: &CertifyOptions,
) -> Result<RateReport, ErgodicError> {
    let (xi, nu, theta, gamma) = match params {
        RateParams::Byzantine { xi, nu, theta, gamma, .. } => (*xi, *nu, *theta, *gamma),
        RateParams::Crash { .. } => {
            return Err(ErgodicError::TraceMismatch("crash params for byzantine certify".into()))
        }
    };
    let mut report = RateReport { mode: "byzantine".into(), pass: true, checks: Vec::new() };
    let horizon = chain.last_round();
    let live: BTreeSet<usize> = chain.agents().iter().copied().collect();
    let pi = limiting_weights(chain, r, horizon, &live, opts.residual_threshold)?;
    let n = chain.agents().len();

    // Incremental sweep of Phi(t, r) for the theta bound.
    let mut acc = chain.matrix(r).clone();
    let mut t = r;
    let mut worst_margin = f64::NEG_INFINITY;
    let mut worst_at = r;
    loop {
        let exponent = ((t - r + 1) as f64 / nu as f64).ceil();
        let bound = theta.powf(exponent) + pi.residual + opts.slack;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                worst = worst.max((acc.get(i, j) - pi.weights[j]).abs());
            }
        }
        if worst - bound > worst_margin {
            worst_margin = worst - bound;
            worst_at = t;
        }
        if t == horizon {
            break;
        }
        t += 1;
        acc = acc.left_multiplied(chain.matrix(t));
    }
    report.push(
        format!("theta_bound r={r}"),
        worst_margin,
        0.0,
        format!("worst margin over t in {r}..={horizon} at t={worst_at}"),
    );

    // Column lower bound of the window product Phi(r+nu-1, r).
    if nu as usize >= 1 && r + (nu as usize) - 1 <= horizon {
        let window = chain.product(r + nu as usize - 1, r)?;
        let xi_nu = xi.powf(nu as f64);
        let cols = (0..n)
            .filter(|&j| (0..n).all(|i| window.get(i, j) >= xi_nu - opts.slack))
            .count();
        report.push_at_least(
            format!("column_lower_bound r={r}"),
            cols as f64,
            gamma as f64,
            format!("columns >= xi^nu = {xi_nu:e}"),
        );
    }

    // Limiting-weight entries lower bound.
    let xi_nu = xi.powf(nu as f64);
    let entries = pi.weights.iter().filter(|&&w| w >= xi_nu - pi.residual - opts.slack).count();
    report.push_at_least(
        format!("pi_lower_bound r={r}"),
        entries as f64,
        gamma as f64,
        format!("entries >= xi^nu = {xi_nu:e}, residual {:e}", pi.residual),
    );
    Ok(report)
}

/// Verify the crash ergodicity lemmas on a chain: delta <= 1 - eta, live-set
/// monotonicity of delta, split sub-multiplicativity, the block-product
/// bound (1 - zeta^n)^(k-f), exact zero columns for crashed agents, and the
/// gamma column/weight lower bounds.
pub fn certify_rate_crash(
    trace: &ExecutionTrace,
    chain: &ProductChain,
    params: &RateParams,
    opts: &CertifyOptions,
) -> Result<RateReport, ErgodicError> {
    let (zeta, n, f, gamma) = match params {
        RateParams::Crash { zeta, n, f, gamma } => (*zeta, *n, *f, *gamma),
        RateParams::Byzantine { .. } => {
            return Err(ErgodicError::TraceMismatch("byzantine params for crash certify".into()))
        }
    };
    let mut report = RateReport { mode: "crash".into(), pass: true, checks: Vec::new() };
    let last = chain.last_round();
    let total_pairs = (last * (last + 1)) / 2;
    let exhaustive = n <= 6 && last <= 200 && total_pairs <= opts.sample_cap;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);

    let pairs: Vec<(usize, usize)> = if exhaustive {
        (1..=last).flat_map(|t| (t..=last).map(move |tp| (t, tp))).collect()
    } else {
        (0..opts.sample_cap.min(2000))
            .map(|_| {
                let t = rng.gen_range(1..=last);
                let tp = rng.gen_range(t..=last);
                (t, tp)
            })
            .collect()
    };

    let mut worst_excess = f64::NEG_INFINITY;
    let mut mono_excess = f64::NEG_INFINITY;
    let mut p3_worst: f64 = 0.0;
    // Group by t so each sweep reuses an incremental product.
    let mut by_t: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for &(t, tp) in &pairs {
        by_t.entry(t).or_default().push(tp);
    }
    for (&t, tps) in &by_t {
        let live_t = trace.live_begin(t);
        let live_r = trace.live_begin(1 + (t - 1) / 2);
        let max_tp = *tps.iter().max().unwrap();
        let want: BTreeSet<usize> = tps.iter().copied().collect();
        let mut acc = chain.matrix(t).clone();
        for tp in t..=max_tp {
            if tp > t {
                acc = acc.left_multiplied(chain.matrix(tp));
            }
            if !want.contains(&tp) {
                continue;
            }
            let (delta, eta) = ergodic_coefficients(&acc, &live_t);
            worst_excess = worst_excess.max(delta - (1.0 - eta));
            let (delta_r, _) = ergodic_coefficients(&acc, &live_r);
            mono_excess = mono_excess.max(delta - delta_r);
            for (col, &j) in acc.agents.iter().enumerate() {
                if !live_t.contains(&j) {
                    for (row, &i) in acc.agents.iter().enumerate() {
                        if live_t.contains(&i) {
                            p3_worst = p3_worst.max(acc.get(row, col).abs());
                        }
                    }
                }
            }
        }
    }
    report.push(
        "delta_le_one_minus_eta",
        worst_excess,
        opts.slack,
        format!("{} (t, t') pairs", pairs.len()),
    );
    report.push("delta_live_monotone", mono_excess, opts.slack, String::new());
    report.push("p3_zero_columns", p3_worst, 0.0, "exact zeros".into());

    // Split sub-multiplicativity on seeded t0 <= t1 < t2 triples.
    if last >= 2 {
        let splits = 200.min(opts.sample_cap);
        let mut split_excess = f64::NEG_INFINITY;
        for _ in 0..splits {
            let t2 = rng.gen_range(2..=last);
            let t1 = rng.gen_range(1..t2);
            let t0 = rng.gen_range(1..=t1);
            let whole = chain.product(t2, t0)?;
            let left = chain.product(t2, t1 + 1)?;
            let right = chain.product(t1, t0)?;
            let live = trace.live_begin(t1 + 1);
            let (d_whole, _) = ergodic_coefficients(&whole, &live);
            let (_, eta_left) = ergodic_coefficients(&left, &live);
            let (d_right, _) = ergodic_coefficients(&right, &live);
            split_excess = split_excess.max(d_whole - (1.0 - eta_left) * d_right);
        }
        report.push("split_submultiplicative", split_excess, opts.slack, format!("{splits} splits"));
    }

    // Block bound: delta_{(k-1)n+1}(Psi(kn, 1)) <= (1 - zeta^n)^(k-f).
    let kmax = last / n;
    let mut block_margin = f64::NEG_INFINITY;
    let mut blocks = 0usize;
    for k in f.max(1)..=kmax {
        let psi = chain.product(k * n, 1)?;
        let live = trace.live_begin((k - 1) * n + 1);
        let (delta, _) = ergodic_coefficients(&psi, &live);
        let bound = (1.0 - zeta.powi(n as i32)).powi((k - f) as i32);
        block_margin = block_margin.max(delta - bound);
        blocks += 1;
    }
    if blocks > 0 {
        report.push(
            "block_bound",
            block_margin,
            opts.slack,
            format!("k in {}..={kmax}", f.max(1)),
        );
    }

    // Column and limiting-weight lower bounds over the non-faulty agents.
    let nf = trace.non_faulty();
    let zeta_n = zeta.powi(n as i32);
    if last >= n {
        let anchors: Vec<usize> = (1..=last - n + 1).step_by(n).collect();
        for &r in &anchors {
            let window = chain.product(r + n - 1, r)?;
            let cols = nf
                .iter()
                .filter(|&&j| {
                    let col = window.pos(j).unwrap();
                    nf.iter()
                        .all(|&i| window.get(window.pos(i).unwrap(), col) >= zeta_n - opts.slack)
                })
                .count();
            report.push_at_least(
                format!("column_lower_bound r={r}"),
                cols as f64,
                gamma as f64,
                format!("columns of [Psi(r+n-1, r)]_N >= zeta^n = {zeta_n:e}"),
            );
        }
    }
    match limiting_weights(chain, 1, last, &nf, opts.residual_threshold) {
        Ok(pi) => {
            let entries = pi
                .agents
                .iter()
                .zip(&pi.weights)
                .filter(|(a, &w)| nf.contains(a) && w >= zeta_n - pi.residual - opts.slack)
                .count();
            report.push_at_least(
                "pi_lower_bound r=1",
                entries as f64,
                gamma as f64,
                format!("entries >= zeta^n = {zeta_n:e}, residual {:e}", pi.residual),
            );
        }
        Err(ErgodicError::NotConverged { residual, threshold }) => {
            report.push(
                "pi_lower_bound r=1",
                residual,
                threshold,
                "limiting weights did not converge".into(),
            );
        }
        Err(e) => return Err(e),
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{run, Scenario};
    use crate::netgraph::DirectedGraph;
    use crate::objective::{ConstraintInterval, CostFamily, StepSchedule};
    use std::collections::BTreeMap;

    fn crash_scenario(alg: Algorithm) -> Scenario {
        Scenario {
            graph: DirectedGraph::complete(3),
            f: 0,
            byzantine: BTreeMap::new(),
            crashes: BTreeMap::new(),
            costs: CostFamily::from_centers(&[0.0, 1.0, 2.0]),
            constraint: ConstraintInterval::new(-10.0, 10.0).unwrap(),
            schedule: StepSchedule::default(),
            algorithm: alg,
            rounds: 4,
            seed: 3,
            initial: vec![0.0, 1.0, 2.0],
        }
    }

    #[test]
    fn crash_matrix_rows_uniform() {
        let tr = run(&crash_scenario(Algorithm::A3)).unwrap();
        let m = build_crash_matrix(&tr, 1).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert!((m.get(i, j) - 1.0 / 3.0).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn a4_triangle_metropolis_matrix() {
        let tr = run(&crash_scenario(Algorithm::A4)).unwrap();
        let m = build_crash_matrix(&tr, 1).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert!((m.get(i, j) - 1.0 / 3.0).abs() < 1e-15);
            }
        }
        assert!(m.is_doubly_stochastic(1e-12));
    }

    #[test]
    fn crashed_agent_row_is_unit() {
        use crate::engine::{CrashEvent, DeliveredSubset};
        let mut sc = crash_scenario(Algorithm::A3);
        sc.f = 1;
        sc.crashes.insert(
            3,
            CrashEvent { agent: 3, round: 0, delivered: DeliveredSubset::Explicit([].into()) },
        );
        let tr = run(&sc).unwrap();
        let m = build_crash_matrix(&tr, 2).unwrap();
        assert_eq!(m.by_label(3, 3), 1.0);
        assert_eq!(m.by_label(3, 1), 0.0);
        assert_eq!(m.by_label(1, 3), 0.0);
    }

    #[test]
    fn product_conventions() {
        let tr = run(&crash_scenario(Algorithm::A3)).unwrap();
        let chain = build_chain(&tr).unwrap();
        let ident = chain.product(2, 3).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(ident.get(i, j), if i == j { 1.0 } else { 0.0 });
            }
        }
        assert_eq!(chain.product(2, 2).unwrap(), *chain.matrix(2));
        assert!(chain.product(2, 6).is_err());

        // Uniform matrices are idempotent under multiplication.
        let p21 = chain.product(2, 1).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                assert!((p21.get(i, j) - 1.0 / 3.0).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn coefficients_examples() {
        let live: BTreeSet<usize> = [1, 2].into();
        let ident = StochasticMatrix::identity(0, vec![1, 2]);
        assert_eq!(ergodic_coefficients(&ident, &live), (1.0, 0.0));

        let mut rank1 = StochasticMatrix::zeros(0, vec![1, 2]);
        for i in 0..2 {
            rank1.set(i, 0, 0.3);
            rank1.set(i, 1, 0.7);
        }
        assert_eq!(ergodic_coefficients(&rank1, &live), (0.0, 1.0));

        let mut m = StochasticMatrix::zeros(0, vec![1, 2]);
        m.set(0, 0, 0.5);
        m.set(0, 1, 0.5);
        m.set(1, 0, 0.25);
        m.set(1, 1, 0.75);
        let (delta, eta) = ergodic_coefficients(&m, &live);
        assert!((delta - 0.25).abs() < 1e-15);
        assert!((eta - 0.75).abs() < 1e-15);
    }

    #[test]
    fn limiting_weights_uniform_for_metropolis() {
        let mut sc = crash_scenario(Algorithm::A4);
        sc.rounds = 60;
        let tr = run(&sc).unwrap();
        let chain = build_chain(&tr).unwrap();
        let live = tr.non_faulty();
        let pi = limiting_weights(&chain, 1, 60, &live, 1e-9).unwrap();
        for w in &pi.weights {
            assert!((w - 1.0 / 3.0).abs() < 1e-9);
        }
    }

    #[test]
    fn bracket_coefficient_example() {
        // theta * 2 + (1 - theta) * 8 = 4 gives theta = 2/3.
        let (a, b, w) = (2.0f64, 8.0f64, 4.0f64);
        let theta = (b - w) / (b - a);
        assert!((theta - 2.0 / 3.0).abs() < 1e-15);
        assert!(((theta * a + (1.0 - theta) * b) - w).abs() < 1e-15);
    }

    #[test]
    fn empty_trace_is_mismatch() {
        let mut sc = crash_scenario(Algorithm::A3);
        sc.rounds = 0;
        let tr = run(&sc).unwrap();
        assert!(matches!(build_chain(&tr), Err(ErgodicError::TraceMismatch(_))));
    }
}
