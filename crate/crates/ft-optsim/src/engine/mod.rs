//! Synchronous round-based execution of the six algorithms with pluggable
//! Byzantine behaviors and crash schedules.
//!
//! Round `t` (t >= 1) uses step size lambda[t-1] and the states x[t-1]; the
//! produced trace records, per round and per updating agent, the received
//! messages, trim outcome, pre-gradient aggregate v, applied gradient, and
//! projection error.

mod faults;
mod trace;

pub use faults::{
    byzantine_gradient_outbox, byzantine_outbox, substream, ByzantineStrategy, CrashEvent,
    DeliveredSubset, Endpoint,
};
pub use trace::{ExecutionTrace, Msg, RoundRecord};

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::netgraph::DirectedGraph;
use crate::objective::{ConstraintInterval, CostFamily, StepSchedule};

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("incompatible scenario: {0}")]
    IncompatibleScenario(String),
    #[error("agent {agent} received {got} values, needs at least {need} (in-degree too small for f)")]
    TooFewValues { agent: usize, got: usize, need: usize },
}

/// The six algorithms. A1/A2 tolerate Byzantine faults; A3-A6 tolerate
/// crash faults (A4 additionally requires a symmetric edge set).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Algorithm {
    /// Trimmed-mean consensus on estimates plus own projected gradient step.
    A1,
    /// Trimmed estimates plus midpoint of trimmed gradient extremes.
    A2,
    /// Unconstrained crash consensus by equal-weight averaging.
    A3,
    /// Average crash consensus with Metropolis weights (undirected graphs).
    A4,
    /// A3 averaging plus own projected gradient step.
    A5,
    /// Equal-weight averaging of received (estimate - step * gradient) pairs.
    A6,
}

impl Algorithm {
    pub fn is_byzantine(&self) -> bool {
        matches!(self, Algorithm::A1 | Algorithm::A2)
    }

    pub fn is_crash(&self) -> bool {
        !self.is_byzantine()
    }

    /// Whether messages carry (estimate, gradient) pairs.
    pub fn exchanges_gradients(&self) -> bool {
        matches!(self, Algorithm::A2 | Algorithm::A6)
    }

    pub fn projects(&self) -> bool {
        matches!(self, Algorithm::A1 | Algorithm::A2 | Algorithm::A5 | Algorithm::A6)
    }
}

impl std::str::FromStr for Algorithm {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "A1" => Ok(Algorithm::A1),
            "A2" => Ok(Algorithm::A2),
            "A3" => Ok(Algorithm::A3),
            "A4" => Ok(Algorithm::A4),
            "A5" => Ok(Algorithm::A5),
            "A6" => Ok(Algorithm::A6),
            other => Err(format!("unknown algorithm `{other}`")),
        }
    }
}

/// One complete experiment description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub graph: DirectedGraph,
    /// Fault budget f.
    pub f: usize,
    /// Byzantine agents and their behaviors (A1/A2 only).
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub byzantine: BTreeMap<usize, ByzantineStrategy>,
    /// Crash schedule (A3-A6 only).
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub crashes: BTreeMap<usize, CrashEvent>,
    pub costs: CostFamily,
    pub constraint: ConstraintInterval,
    pub schedule: StepSchedule,
    pub algorithm: Algorithm,
    pub rounds: usize,
    pub seed: u64,
    /// Initial states x_i[0]; may lie outside the constraint interval
    /// (projection first applies at t = 1).
    pub initial: Vec<f64>,
}

impl Scenario {
    /// The concrete faulty set F (Byzantine agents plus crash-scheduled
    /// agents).
    pub fn faulty(&self) -> BTreeSet<usize> {
        self.byzantine.keys().chain(self.crashes.keys()).copied().collect()
    }

    pub fn non_faulty(&self) -> BTreeSet<usize> {
        let faulty = self.faulty();
        self.graph.vertices().filter(|v| !faulty.contains(v)).collect()
    }

    /// Crash round of an agent, when scheduled.
    pub fn crash_round(&self, agent: usize) -> Option<usize> {
        self.crashes.get(&agent).map(|e| e.round)
    }

    pub fn validate(&self) -> Result<(), EngineError> {
        let n = self.graph.n();
        let bad = |m: String| Err(EngineError::IncompatibleScenario(m));
        if self.initial.len() != n {
            return bad(format!("{} initial states for {n} agents", self.initial.len()));
        }
        if self.costs.len() != n {
            return bad(format!("{} costs for {n} agents", self.costs.len()));
        }
        for &a in self.byzantine.keys().chain(self.crashes.keys()) {
            if a == 0 || a > n {
                return bad(format!("faulty agent {a} out of range"));
            }
        }
        for (&a, ev) in &self.crashes {
            if ev.agent != a {
                return bad(format!("crash event agent {} under key {a}", ev.agent));
            }
        }
        if self.byzantine.keys().any(|a| self.crashes.contains_key(a)) {
            return bad("an agent cannot be both Byzantine and crash-faulty".into());
        }
        let phi = self.faulty().len();
        if phi > self.f {
            return bad(format!("|F| = {phi} exceeds fault budget f = {}", self.f));
        }
        if self.algorithm.is_byzantine() && !self.crashes.is_empty() {
            return bad(format!("{:?} admits Byzantine faults only", self.algorithm));
        }
        if self.algorithm.is_crash() && !self.byzantine.is_empty() {
            return bad(format!("{:?} admits crash faults only", self.algorithm));
        }
        if self.algorithm == Algorithm::A4 && !self.graph.is_symmetric() {
            return bad("A4 requires an undirected (symmetric-edge) graph".into());
        }
        Ok(())
    }
}

/// Sort by value ascending, ties broken by ascending sender id, and remove
/// the first f and last f entries. Sender identities are preserved.
pub fn trim_extremes(
    values: &[(usize, f64)],
    f: usize,
) -> Result<Vec<(usize, f64)>, EngineError> {
    if values.len() < 2 * f + 1 {
        return Err(EngineError::TooFewValues {
            agent: 0,
            got: values.len(),
            need: 2 * f + 1,
        });
    }
    let mut sorted: Vec<(usize, f64)> = values.to_vec();
    sorted.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap().then(a.0.cmp(&b.0)));
    Ok(sorted[f..sorted.len() - f].to_vec())
}

/// Gradient trim: remove the f smallest and f largest (same tie rule), then
/// take the midpoint of the surviving extremes.
/// Returns (retained sender ids, g_hat, g_check, g_tilde).
pub fn trim_gradients_mid_extremes(
    values: &[(usize, f64)],
    f: usize,
) -> Result<(Vec<usize>, f64, f64, f64), EngineError> {
    let retained = trim_extremes(values, f)?;
    let g_check = retained.first().unwrap().1;
    let g_hat = retained.last().unwrap().1;
    let g_tilde = 0.5 * (g_hat + g_check);
    Ok((retained.into_iter().map(|(s, _)| s).collect(), g_hat, g_check, g_tilde))
}

struct Delivery {
    value: f64,
    gradient: Option<f64>,
}

/// Execute the scenario for `rounds` synchronous rounds.
pub fn run(scenario: &Scenario) -> Result<ExecutionTrace, EngineError> {
    scenario.validate()?;
    let g = &scenario.graph;
    let n = g.n();
    let alg = scenario.algorithm;
    let f = scenario.f;
    let lipschitz = scenario.costs.lipschitz_bound(&scenario.constraint);
    let non_faulty = scenario.non_faulty();

    let mut x: Vec<f64> = scenario.initial.clone();
    let mut rounds: Vec<RoundRecord> = Vec::with_capacity(scenario.rounds);

    for t in 1..=scenario.rounds {
        let lambda = scenario.schedule.at(t - 1);
        let prev_max = non_faulty.iter().map(|&a| x[a - 1]).fold(f64::NEG_INFINITY, f64::max);
        let prev_min = non_faulty.iter().map(|&a| x[a - 1]).fold(f64::INFINITY, f64::min);

        // Transmit step: inbox[i-1] collects deliveries to agent i.
        let mut inbox: Vec<BTreeMap<usize, Delivery>> = (0..n).map(|_| BTreeMap::new()).collect();
        for s in g.vertices() {
            if let Some(strategy) = scenario.byzantine.get(&s) {
                let outs = g.out_neighbors(s);
                let vals = byzantine_outbox(strategy, s, t, outs, &scenario.constraint, scenario.seed);
                let grads = if alg.exchanges_gradients() {
                    Some(byzantine_gradient_outbox(
                        strategy,
                        s,
                        t,
                        outs,
                        &scenario.constraint,
                        scenario.seed,
                    ))
                } else {
                    None
                };
                for (&j, &v) in &vals {
                    let gv = grads.as_ref().and_then(|m| m[&j]);
                    if let Some(v) = v {
                        // A withheld gradient with a present value is treated
                        // as a fully withheld tuple for pair algorithms.
                        if alg.exchanges_gradients() && gv.is_none() {
                            continue;
                        }
                        inbox[j - 1].insert(s, Delivery { value: v, gradient: gv });
                    }
                }
                continue;
            }
            let receivers: BTreeSet<usize> = match scenario.crashes.get(&s) {
                Some(ev) if ev.round < t => BTreeSet::new(),
                Some(ev) if ev.round == t => ev.delivered_set(g.out_neighbors(s), scenario.seed),
                _ => g.out_neighbors(s).clone(),
            };
            let gradient = if alg.exchanges_gradients() {
                Some(scenario.costs.cost(s).gradient(x[s - 1]))
            } else {
                None
            };
            for &j in &receivers {
                inbox[j - 1].insert(s, Delivery { value: x[s - 1], gradient });
            }
        }

        // Receive + update step.
        let mut rec = RoundRecord {
            round: t,
            estimates: x.clone(),
            received: vec![Vec::new(); n],
            retained: vec![Vec::new(); n],
            retained_grad: vec![Vec::new(); n],
            trimmed_low: vec![Vec::new(); n],
            trimmed_high: vec![Vec::new(); n],
            aggregate: x.clone(),
            gradient_used: vec![0.0; n],
            projection_error: vec![0.0; n],
            updated: vec![false; n],
        };

        for i in g.vertices() {
            let updates = if alg.is_byzantine() {
                non_faulty.contains(&i)
            } else {
                scenario.crash_round(i).map_or(true, |tc| tc > t)
            };
            if !updates {
                continue;
            }
            let idx = i - 1;
            let own = x[idx];
            let d_in = g.in_degree(i);

            // Assemble the received multiset; Byzantine mode substitutes the
            // receiver's own previous estimate (and gradient) for withheld
            // messages so that exactly d_i^- values arrive.
            let mut msgs: Vec<Msg> = Vec::with_capacity(d_in);
            if alg.is_byzantine() {
                for &s in g.in_neighbors(i) {
                    match inbox[idx].get(&s) {
                        Some(d) => msgs.push(Msg {
                            sender: s,
                            value: d.value,
                            gradient: d.gradient,
                            defaulted: false,
                        }),
                        None => msgs.push(Msg {
                            sender: s,
                            value: own,
                            gradient: if alg.exchanges_gradients() {
                                Some(scenario.costs.cost(i).gradient(own))
                            } else {
                                None
                            },
                            defaulted: true,
                        }),
                    }
                }
            } else {
                for (&s, d) in &inbox[idx] {
                    msgs.push(Msg { sender: s, value: d.value, gradient: d.gradient, defaulted: false });
                }
            }

            let (aggregate, grad_used, retained, retained_grad, trimmed_low, trimmed_high) =
                match alg {
                    Algorithm::A1 | Algorithm::A2 => {
                        let pairs: Vec<(usize, f64)> =
                            msgs.iter().map(|m| (m.sender, m.value)).collect();
                        let kept = trim_extremes(&pairs, f).map_err(|e| match e {
                            EngineError::TooFewValues { got, need, .. } => {
                                EngineError::TooFewValues { agent: i, got, need }
                            }
                            other => other,
                        })?;
                        let kept_ids: BTreeSet<usize> = kept.iter().map(|&(s, _)| s).collect();
                        let mut sorted = pairs.clone();
                        sorted.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap().then(a.0.cmp(&b.0)));
                        let low: Vec<usize> = sorted[..f].iter().map(|&(s, _)| s).collect();
                        let high: Vec<usize> =
                            sorted[sorted.len() - f..].iter().map(|&(s, _)| s).collect();
                        debug_assert_eq!(kept.len(), d_in - 2 * f);
                        let sum: f64 = own + kept.iter().map(|&(_, v)| v).sum::<f64>();
                        let v = sum / (d_in + 1 - 2 * f) as f64;
                        let (grad, retained_grad) = if alg == Algorithm::A2 {
                            let mut gpairs: Vec<(usize, f64)> = msgs
                                .iter()
                                .map(|m| (m.sender, m.gradient.expect("pair message")))
                                .collect();
                            gpairs.push((i, scenario.costs.cost(i).gradient(own)));
                            let (ids, _ghat, _gcheck, gtilde) =
                                trim_gradients_mid_extremes(&gpairs, f).map_err(|e| match e {
                                    EngineError::TooFewValues { got, need, .. } => {
                                        EngineError::TooFewValues { agent: i, got, need }
                                    }
                                    other => other,
                                })?;
                            debug_assert_eq!(ids.len(), d_in + 1 - 2 * f);
                            (gtilde, ids)
                        } else {
                            (scenario.costs.cost(i).gradient(own), Vec::new())
                        };
                        (v, grad, kept_ids.into_iter().collect::<Vec<_>>(), retained_grad, low, high)
                    }
                    Algorithm::A3 | Algorithm::A5 => {
                        let ell = msgs.len();
                        let sum: f64 = own + msgs.iter().map(|m| m.value).sum::<f64>();
                        let v = sum / (ell + 1) as f64;
                        let grad = if alg == Algorithm::A5 {
                            scenario.costs.cost(i).gradient(own)
                        } else {
                            0.0
                        };
                        let ids: Vec<usize> = msgs.iter().map(|m| m.sender).collect();
                        (v, grad, ids, Vec::new(), Vec::new(), Vec::new())
                    }
                    Algorithm::A4 => {
                        let mut self_weight = 1.0;
                        let mut acc = 0.0;
                        for m in &msgs {
                            let w = 1.0 / (d_in.max(g.in_degree(m.sender)) + 1) as f64;
                            self_weight -= w;
                            acc += w * m.value;
                        }
                        let v = acc + self_weight * own;
                        let ids: Vec<usize> = msgs.iter().map(|m| m.sender).collect();
                        (v, 0.0, ids, Vec::new(), Vec::new(), Vec::new())
                    }
                    Algorithm::A6 => {
                        let ell = msgs.len();
                        let mut vsum = own;
                        let mut gsum = scenario.costs.cost(i).gradient(own);
                        for m in &msgs {
                            vsum += m.value;
                            gsum += m.gradient.expect("pair message");
                        }
                        let v = vsum / (ell + 1) as f64;
                        let grad = gsum / (ell + 1) as f64;
                        let ids: Vec<usize> = msgs.iter().map(|m| m.sender).collect();
                        (v, grad, ids, Vec::new(), Vec::new(), Vec::new())
                    }
                };

            let (next, err) = if alg.projects() {
                let arg = aggregate - lambda * grad_used;
                let proj = scenario.constraint.project(arg);
                (proj, proj - arg)
            } else {
                (aggregate, 0.0)
            };

            debug_assert!(
                err.abs() <= lambda * lipschitz + 1e-12,
                "projection error bound violated at round {t}, agent {i}"
            );
            if alg.is_byzantine() {
                debug_assert!(
                    aggregate >= prev_min - 1e-9 && aggregate <= prev_max + 1e-9,
                    "trimmed aggregate escaped the non-faulty hull at round {t}, agent {i}"
                );
            }

            rec.estimates[idx] = next;
            rec.received[idx] = msgs;
            rec.retained[idx] = retained;
            rec.retained_grad[idx] = retained_grad;
            rec.trimmed_low[idx] = trimmed_low;
            rec.trimmed_high[idx] = trimmed_high;
            rec.aggregate[idx] = aggregate;
            rec.gradient_used[idx] = grad_used;
            rec.projection_error[idx] = err;
            rec.updated[idx] = true;
        }

        x = rec.estimates.clone();
        rounds.push(rec);
    }

    Ok(ExecutionTrace {
        scenario: scenario.clone(),
        lipschitz,
        initial: scenario.initial.clone(),
        rounds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objective::QuadraticCost;

    fn base_scenario(g: DirectedGraph, alg: Algorithm, initial: Vec<f64>) -> Scenario {
        let n = g.n();
        Scenario {
            graph: g,
            f: 0,
            byzantine: BTreeMap::new(),
            crashes: BTreeMap::new(),
            costs: CostFamily::from_centers(&vec![0.0; n]),
            constraint: ConstraintInterval::new(-10.0, 10.0).unwrap(),
            schedule: StepSchedule::default(),
            algorithm: alg,
            rounds: 1,
            seed: 7,
            initial,
        }
    }

    #[test]
    fn trim_extremes_examples() {
        // Senders a..e as 1..5.
        let vals = [(1, 1.0), (2, 1.0), (3, 2.0), (4, 5.0), (5, 9.0)];
        let kept = trim_extremes(&vals, 1).unwrap();
        assert_eq!(kept, vec![(2, 1.0), (3, 2.0), (4, 5.0)]);

        let kept = trim_extremes(&vals, 0).unwrap();
        assert_eq!(kept.len(), 5);

        let vals = [(1, 3.0), (2, 1.0), (3, 2.0), (4, 5.0), (5, 9.0)];
        let kept = trim_extremes(&vals, 2).unwrap();
        assert_eq!(kept, vec![(1, 3.0)]);

        assert!(trim_extremes(&vals[..2], 1).is_err());
    }

    #[test]
    fn trim_gradients_examples() {
        let vals = [(1, -2.0), (2, 0.0), (3, 1.0), (4, 4.0), (5, 7.0)];
        let (ids, ghat, gcheck, gtilde) = trim_gradients_mid_extremes(&vals, 1).unwrap();
        assert_eq!(ids, vec![2, 3, 4]);
        assert_eq!((ghat, gcheck), (4.0, 0.0));
        assert_eq!(gtilde, 2.0);

        let vals = [(1, 5.0), (2, 5.0), (3, 5.0)];
        let (_, _, _, gtilde) = trim_gradients_mid_extremes(&vals, 1).unwrap();
        assert_eq!(gtilde, 5.0);

        let vals = [(1, 0.0), (2, 10.0)];
        let (_, _, _, gtilde) = trim_gradients_mid_extremes(&vals, 0).unwrap();
        assert_eq!(gtilde, 5.0);
    }

    #[test]
    fn a3_two_agents_average_in_one_round() {
        let g = DirectedGraph::from_edges(2, &[(1, 2), (2, 1)]).unwrap();
        let sc = base_scenario(g, Algorithm::A3, vec![0.0, 2.0]);
        let tr = run(&sc).unwrap();
        assert_eq!(tr.rounds[0].estimates, vec![1.0, 1.0]);
    }

    #[test]
    fn a4_triangle_converges_to_mean() {
        let g = DirectedGraph::from_edges(3, &[(1, 2), (2, 1), (2, 3), (3, 2), (1, 3), (3, 1)])
            .unwrap();
        let mut sc = base_scenario(g, Algorithm::A4, vec![0.0, 3.0, 6.0]);
        sc.rounds = 200;
        let tr = run(&sc).unwrap();
        for &v in tr.estimates_at(200) {
            assert!((v - 3.0).abs() < 1e-6);
        }
    }

    #[test]
    fn a1_trims_outlier_every_round() {
        let g = DirectedGraph::complete(4);
        let mut sc = base_scenario(g, Algorithm::A1, vec![0.0, 5.0, 10.0, 0.0]);
        sc.f = 1;
        sc.byzantine.insert(4, ByzantineStrategy::Constant { value: 100.0 });
        sc.costs = CostFamily::new(vec![
            QuadraticCost::new(5.0, 1.0).unwrap(),
            QuadraticCost::new(5.0, 1.0).unwrap(),
            QuadraticCost::new(5.0, 1.0).unwrap(),
            QuadraticCost::new(5.0, 1.0).unwrap(),
        ]);
        sc.constraint = ConstraintInterval::new(0.0, 10.0).unwrap();
        sc.rounds = 50;
        let tr = run(&sc).unwrap();
        for rec in &tr.rounds {
            for i in [1usize, 2, 3] {
                assert!(
                    !rec.retained[i - 1].contains(&4),
                    "outlier retained at round {}",
                    rec.round
                );
                assert!(rec.trimmed_high[i - 1].contains(&4));
                // |N_i^*[t]| = d_i^- - 2f = 3 - 2 = 1 on K4.
                assert_eq!(rec.retained[i - 1].len(), 1);
            }
        }
    }

    #[test]
    fn crash_silence_and_freeze() {
        let g = DirectedGraph::complete(3);
        let mut sc = base_scenario(g, Algorithm::A3, vec![0.0, 9.0, 3.0]);
        sc.f = 1;
        sc.crashes.insert(
            2,
            CrashEvent { agent: 2, round: 2, delivered: DeliveredSubset::Explicit([3].into()) },
        );
        sc.rounds = 5;
        let tr = run(&sc).unwrap();
        // Round 2: agent 2 delivers only to 3 and does not update.
        let r2 = &tr.rounds[1];
        assert!(r2.received[0].iter().all(|m| m.sender != 2));
        assert!(r2.received[2].iter().any(|m| m.sender == 2));
        assert!(!r2.updated[1]);
        // After round 2: silent everywhere, state frozen.
        for rec in &tr.rounds[2..] {
            assert!(rec.received.iter().flatten().all(|m| m.sender != 2));
            assert_eq!(rec.estimates[1], tr.rounds[1].estimates[1]);
        }
    }

    #[test]
    fn byzantine_withholding_uses_own_default() {
        let g = DirectedGraph::complete(4);
        let mut sc = base_scenario(g, Algorithm::A1, vec![1.0, 2.0, 3.0, 0.0]);
        sc.f = 1;
        // Explicit split map that never sends to agent 1.
        let mut map = BTreeMap::new();
        map.insert(2, 50.0);
        map.insert(3, -50.0);
        sc.byzantine.insert(
            4,
            ByzantineStrategy::PerNeighborSplit { values: Some(map), lo: 0.0, hi: 0.0 },
        );
        sc.rounds = 1;
        let tr = run(&sc).unwrap();
        let msg = tr.rounds[0].received[0].iter().find(|m| m.sender == 4).unwrap();
        assert!(msg.defaulted);
        assert_eq!(msg.value, 1.0); // receiver 1's own previous estimate
        // Different neighbors saw different values.
        let m2 = tr.rounds[0].received[1].iter().find(|m| m.sender == 4).unwrap();
        let m3 = tr.rounds[0].received[2].iter().find(|m| m.sender == 4).unwrap();
        assert_eq!(m2.value, 50.0);
        assert_eq!(m3.value, -50.0);
    }

    #[test]
    fn determinism_bitwise() {
        let g = DirectedGraph::complete(5);
        let mut sc = base_scenario(g, Algorithm::A2, vec![0.0, 1.0, 2.0, 3.0, 0.0]);
        sc.f = 1;
        sc.byzantine
            .insert(5, ByzantineStrategy::UniformRandom { lo: -10.0, hi: 10.0 });
        sc.costs = CostFamily::from_centers(&[0.0, 1.0, 2.0, 3.0, 0.0]);
        sc.rounds = 120;
        let a = run(&sc).unwrap();
        let b = run(&sc).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn incompatibilities_rejected() {
        let g = DirectedGraph::from_edges(3, &[(1, 2), (2, 3), (3, 1)]).unwrap();
        let mut sc = base_scenario(g.clone(), Algorithm::A4, vec![0.0; 3]);
        assert!(matches!(run(&sc), Err(EngineError::IncompatibleScenario(_))));

        sc = base_scenario(g.clone(), Algorithm::A1, vec![0.0; 3]);
        sc.f = 1;
        sc.crashes.insert(
            1,
            CrashEvent { agent: 1, round: 1, delivered: DeliveredSubset::Seeded },
        );
        assert!(matches!(run(&sc), Err(EngineError::IncompatibleScenario(_))));

        // A1 on a 3-cycle: in-degree 1 < 2f+1 surfaces TooFewValues.
        sc = base_scenario(g, Algorithm::A1, vec![0.0; 3]);
        sc.f = 1;
        assert!(matches!(run(&sc), Err(EngineError::TooFewValues { .. })));
    }

    #[test]
    fn zero_rounds_trace_has_only_initials() {
        let g = DirectedGraph::complete(3);
        let mut sc = base_scenario(g, Algorithm::A3, vec![0.0, 1.0, 2.0]);
        sc.rounds = 0;
        let tr = run(&sc).unwrap();
        assert_eq!(tr.final_round(), 0);
        assert_eq!(tr.final_spread(), 2.0);
    }
}
