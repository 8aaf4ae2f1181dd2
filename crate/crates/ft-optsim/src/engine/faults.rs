//! Byzantine behaviors and crash schedules. All randomness is derived from
//! the scenario seed through per-(agent, round) substreams so replay is
//! independent of evaluation order.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::objective::ConstraintInterval;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Deterministic substream for one (agent, round, salt) triple.
pub fn substream(seed: u64, agent: usize, round: usize, salt: u64) -> ChaCha8Rng {
    let mixed = splitmix64(seed ^ splitmix64((agent as u64) << 32 ^ round as u64) ^ salt);
    ChaCha8Rng::seed_from_u64(mixed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Endpoint {
    Lo,
    Hi,
}

/// What a Byzantine agent sends. Point-to-point: a faulty agent may send
/// different values to different outgoing neighbors, or withhold a message
/// entirely (an explicit split map with a missing neighbor).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ByzantineStrategy {
    /// Send the same fixed value to everyone.
    Constant { value: f64 },
    /// One uniform draw per round, sent to everyone.
    UniformRandom { lo: f64, hi: f64 },
    /// Different values per neighbor: explicit map (missing neighbors get no
    /// message) or independent seeded draws from [lo, hi].
    PerNeighborSplit {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        values: Option<BTreeMap<usize, f64>>,
        #[serde(default = "default_split_lo")]
        lo: f64,
        #[serde(default = "default_split_hi")]
        hi: f64,
    },
    /// Send one endpoint of the constraint interval to everyone.
    PushExtreme { which: Endpoint },
}

fn default_split_lo() -> f64 {
    -1.0
}
fn default_split_hi() -> f64 {
    1.0
}

/// Per-neighbor outbox of a Byzantine agent for one round. `None` means the
/// message is withheld and the receiver substitutes its default.
pub fn byzantine_outbox(
    strategy: &ByzantineStrategy,
    agent: usize,
    round: usize,
    out_neighbors: &BTreeSet<usize>,
    constraint: &ConstraintInterval,
    seed: u64,
) -> BTreeMap<usize, Option<f64>> {
    outbox_with_salt(strategy, agent, round, out_neighbors, constraint, seed, 0xB17)
}

/// Outbox for the gradient component of pair messages. Fixed strategies send
/// the same value as the estimate component; randomized ones draw an
/// independent substream.
pub fn byzantine_gradient_outbox(
    strategy: &ByzantineStrategy,
    agent: usize,
    round: usize,
    out_neighbors: &BTreeSet<usize>,
    constraint: &ConstraintInterval,
    seed: u64,
) -> BTreeMap<usize, Option<f64>> {
    outbox_with_salt(strategy, agent, round, out_neighbors, constraint, seed, 0x6AD)
}

fn outbox_with_salt(
    strategy: &ByzantineStrategy,
    agent: usize,
    round: usize,
    out_neighbors: &BTreeSet<usize>,
    constraint: &ConstraintInterval,
    seed: u64,
    salt: u64,
) -> BTreeMap<usize, Option<f64>> {
    let mut rng = substream(seed, agent, round, salt);
    let mut out = BTreeMap::new();
    match strategy {
        ByzantineStrategy::Constant { value } => {
            for &j in out_neighbors {
                out.insert(j, Some(*value));
            }
        }
        ByzantineStrategy::UniformRandom { lo, hi } => {
            let v = rng.gen_range(*lo..=*hi);
            for &j in out_neighbors {
                out.insert(j, Some(v));
            }
        }
        ByzantineStrategy::PerNeighborSplit { values, lo, hi } => match values {
            Some(map) => {
                for &j in out_neighbors {
                    out.insert(j, map.get(&j).copied());
                }
            }
            None => {
                for &j in out_neighbors {
                    out.insert(j, Some(rng.gen_range(*lo..=*hi)));
                }
            }
        },
        ByzantineStrategy::PushExtreme { which } => {
            let v = match which {
                Endpoint::Lo => constraint.lo,
                Endpoint::Hi => constraint.hi,
            };
            for &j in out_neighbors {
                out.insert(j, Some(v));
            }
        }
    }
    out
}

/// Which out-neighbors receive the final transmission of a crashing agent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeliveredSubset {
    /// Explicit receiver set.
    Explicit(BTreeSet<usize>),
    /// Seeded random subset (each out-neighbor kept with probability 1/2).
    Seeded,
}

/// A crash fault: the agent behaves correctly before `round`, transmits only
/// to `delivered` during `round`, and never updates or transmits afterwards.
/// An agent that completes its update in a round is considered to crash in
/// the next one; `round = 0` means the agent is silent from the start.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CrashEvent {
    pub agent: usize,
    pub round: usize,
    pub delivered: DeliveredSubset,
}

impl CrashEvent {
    /// The receivers of the final partial transmission.
    pub fn delivered_set(&self, out_neighbors: &BTreeSet<usize>, seed: u64) -> BTreeSet<usize> {
        match &self.delivered {
            DeliveredSubset::Explicit(s) => s.intersection(out_neighbors).copied().collect(),
            DeliveredSubset::Seeded => {
                let mut rng = substream(seed, self.agent, self.round, 0xC4A5);
                out_neighbors
                    .iter()
                    .copied()
                    .filter(|_| rng.gen_bool(0.5))
                    .collect()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nbrs(vs: &[usize]) -> BTreeSet<usize> {
        vs.iter().copied().collect()
    }

    #[test]
    fn constant_outbox() {
        let x = ConstraintInterval::new(0.0, 1.0).unwrap();
        let out = byzantine_outbox(
            &ByzantineStrategy::Constant { value: 7.0 },
            9,
            3,
            &nbrs(&[1, 2, 3]),
            &x,
            42,
        );
        assert_eq!(out.len(), 3);
        assert!(out.values().all(|v| *v == Some(7.0)));
    }

    #[test]
    fn push_extreme_outbox() {
        let x = ConstraintInterval::new(0.0, 1.0).unwrap();
        let out = byzantine_outbox(
            &ByzantineStrategy::PushExtreme { which: Endpoint::Hi },
            9,
            1,
            &nbrs(&[1, 2]),
            &x,
            42,
        );
        assert!(out.values().all(|v| *v == Some(1.0)));
    }

    #[test]
    fn split_is_deterministic_and_can_withhold() {
        let x = ConstraintInterval::new(0.0, 1.0).unwrap();
        let strat = ByzantineStrategy::PerNeighborSplit { values: None, lo: -2.0, hi: 2.0 };
        let a = byzantine_outbox(&strat, 5, 7, &nbrs(&[1, 2, 3]), &x, 99);
        let b = byzantine_outbox(&strat, 5, 7, &nbrs(&[1, 2, 3]), &x, 99);
        assert_eq!(a, b);
        let c = byzantine_outbox(&strat, 5, 8, &nbrs(&[1, 2, 3]), &x, 99);
        assert_ne!(a, c);

        let mut map = BTreeMap::new();
        map.insert(1, 0.25);
        let strat = ByzantineStrategy::PerNeighborSplit { values: Some(map), lo: 0.0, hi: 0.0 };
        let out = byzantine_outbox(&strat, 5, 7, &nbrs(&[1, 2]), &x, 99);
        assert_eq!(out[&1], Some(0.25));
        assert_eq!(out[&2], None);
    }

    #[test]
    fn seeded_delivery_is_deterministic() {
        let ev = CrashEvent { agent: 2, round: 4, delivered: DeliveredSubset::Seeded };
        let a = ev.delivered_set(&nbrs(&[1, 3, 4, 5]), 7);
        let b = ev.delivered_set(&nbrs(&[1, 3, 4, 5]), 7);
        assert_eq!(a, b);
    }
}
