//! Per-round execution records: the single source for matrix reconstruction
//! and every metric check.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::Scenario;

/// One message as seen by its receiver.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Msg {
    pub sender: usize,
    pub value: f64,
    /// Gradient component for pair-exchanging algorithms.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gradient: Option<f64>,
    /// True when the sender withheld the message and the receiver substituted
    /// its default (own previous estimate and gradient).
    #[serde(default)]
    pub defaulted: bool,
}

/// Everything recorded for one synchronous round. All per-agent vectors are
/// indexed by `agent - 1` and have length n; entries of agents that did not
/// update this round are frozen or empty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub round: usize,
    /// x_i[t] after the update step (frozen for crashed/Byzantine agents).
    pub estimates: Vec<f64>,
    /// Messages received, per updating agent.
    pub received: Vec<Vec<Msg>>,
    /// Senders retained by the estimate trim (or the full received set for
    /// crash algorithms), per updating agent.
    pub retained: Vec<Vec<usize>>,
    /// Senders retained by the gradient trim (gradient-pair algorithm only;
    /// includes the agent's own id).
    pub retained_grad: Vec<Vec<usize>>,
    /// Senders trimmed away as the f smallest estimate values.
    pub trimmed_low: Vec<Vec<usize>>,
    /// Senders trimmed away as the f largest estimate values.
    pub trimmed_high: Vec<Vec<usize>>,
    /// Pre-gradient aggregate v_i[t-1].
    pub aggregate: Vec<f64>,
    /// Gradient (or combined gradient) actually applied; 0 when none.
    pub gradient_used: Vec<f64>,
    /// Projection error e_i[t-1].
    pub projection_error: Vec<f64>,
    /// Whether the agent completed the update step this round.
    pub updated: Vec<bool>,
}

/// Complete record of one execution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExecutionTrace {
    pub scenario: Scenario,
    /// Gradient bound L = max_i max_{x in X} |h_i'(x)|.
    pub lipschitz: f64,
    pub initial: Vec<f64>,
    pub rounds: Vec<RoundRecord>,
}

impl ExecutionTrace {
    pub fn n(&self) -> usize {
        self.scenario.graph.n()
    }

    /// Estimates at the end of round `t` (t = 0 gives the initial states).
    pub fn estimates_at(&self, t: usize) -> &[f64] {
        if t == 0 {
            &self.initial
        } else {
            &self.rounds[t - 1].estimates
        }
    }

    /// Agents that have not crashed by the beginning of round `t` (N[t]).
    pub fn live_begin(&self, t: usize) -> BTreeSet<usize> {
        self.scenario
            .graph
            .vertices()
            .filter(|&a| self.scenario.crash_round(a).map_or(true, |tc| tc >= t))
            .collect()
    }

    /// Agents that have not crashed by the end of round `t` (N-bar[t]).
    pub fn live_end(&self, t: usize) -> BTreeSet<usize> {
        self.scenario
            .graph
            .vertices()
            .filter(|&a| self.scenario.crash_round(a).map_or(true, |tc| tc > t))
            .collect()
    }

    /// Non-faulty agents N = V \ F.
    pub fn non_faulty(&self) -> BTreeSet<usize> {
        self.scenario.non_faulty()
    }

    /// Max estimate over non-faulty agents at the end of round `t`.
    pub fn max_estimate(&self, t: usize) -> f64 {
        let xs = self.estimates_at(t);
        self.non_faulty()
            .iter()
            .map(|&a| xs[a - 1])
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Min estimate over non-faulty agents at the end of round `t`.
    pub fn min_estimate(&self, t: usize) -> f64 {
        let xs = self.estimates_at(t);
        self.non_faulty()
            .iter()
            .map(|&a| xs[a - 1])
            .fold(f64::INFINITY, f64::min)
    }

    /// Spread M[t] - m[t] over non-faulty agents.
    pub fn spread(&self, t: usize) -> f64 {
        self.max_estimate(t) - self.min_estimate(t)
    }

    pub fn final_round(&self) -> usize {
        self.rounds.len()
    }

    pub fn final_spread(&self) -> f64 {
        self.spread(self.final_round())
    }

    /// Mean of the final non-faulty estimates.
    pub fn consensus_value(&self) -> f64 {
        let xs = self.estimates_at(self.final_round());
        let nf = self.non_faulty();
        let sum: f64 = nf.iter().map(|&a| xs[a - 1]).sum();
        sum / nf.len() as f64
    }
}
