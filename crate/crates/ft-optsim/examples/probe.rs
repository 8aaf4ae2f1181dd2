//! Scratch probe for acceptance-criterion calibration (not part of the test
//! suite).

use std::collections::BTreeMap;

use ft_optsim::engine::{run, Algorithm, ByzantineStrategy, Endpoint, Scenario};
use ft_optsim::netgraph::DirectedGraph;
use ft_optsim::objective::{ConstraintInterval, CostFamily, StepSchedule};

fn main() {
    let strategies: Vec<(&str, ByzantineStrategy)> = vec![
        ("constant100", ByzantineStrategy::Constant { value: 100.0 }),
        ("push_hi", ByzantineStrategy::PushExtreme { which: Endpoint::Hi }),
        ("uniform", ByzantineStrategy::UniformRandom { lo: -10.0, hi: 10.0 }),
        ("split", ByzantineStrategy::PerNeighborSplit { values: None, lo: -10.0, hi: 10.0 }),
    ];
    for alg in [Algorithm::A1, Algorithm::A2] {
        for (name, strat) in &strategies {
            let mut worst_spread = 0.0f64;
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for seed in 0..5u64 {
                let mut byz = BTreeMap::new();
                byz.insert(5, strat.clone());
                let sc = Scenario {
                    graph: DirectedGraph::complete(5),
                    f: 1,
                    byzantine: byz,
                    crashes: BTreeMap::new(),
                    costs: CostFamily::from_centers(&[0.0, 1.0, 2.0, 3.0, 0.0]),
                    constraint: ConstraintInterval::new(-10.0, 10.0).unwrap(),
                    schedule: StepSchedule::new(1.0, 1.0).unwrap(),
                    algorithm: alg,
                    rounds: 10_000,
                    seed,
                    initial: vec![0.0, 1.0, 2.0, 3.0, 0.0],
                };
                let tr = run(&sc).unwrap();
                worst_spread = worst_spread.max(tr.final_spread());
                lo = lo.min(tr.consensus_value());
                hi = hi.max(tr.consensus_value());
            }
            println!(
                "{alg:?} {name:12} worst_spread {worst_spread:.3e}  consensus in [{lo:.4}, {hi:.4}]"
            );
        }
    }
}
