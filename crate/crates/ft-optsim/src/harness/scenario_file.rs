//! TOML scenario files: sections [graph], [faults], [costs], [constraint],
//! [schedule], [run].

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;

use crate::engine::{Algorithm, ByzantineStrategy, CrashEvent, DeliveredSubset, Scenario};
use crate::netgraph::{parse_graph_text, DirectedGraph};
use crate::objective::{ConstraintInterval, CostFamily, QuadraticCost, StepSchedule};

use super::HarnessError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    graph: GraphSection,
    #[serde(default)]
    faults: FaultsSection,
    costs: CostsSection,
    constraint: ConstraintSection,
    #[serde(default)]
    schedule: ScheduleSection,
    run: RunSection,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct GraphSection {
    /// Vertex count when `edges` is inline.
    n: Option<usize>,
    /// Inline edges: "i j" per entry.
    edges: Option<Vec<String>>,
    /// Path to an edge-list file (relative to the scenario file).
    path: Option<String>,
    /// Shortcut: complete graph on this many vertices.
    complete: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FaultsSection {
    #[serde(default)]
    f: usize,
    #[serde(default)]
    byzantine: Vec<ByzEntry>,
    #[serde(default)]
    crash: Vec<CrashEntry>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ByzEntry {
    agent: usize,
    strategy: ByzantineStrategy,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CrashEntry {
    agent: usize,
    round: usize,
    deliver: DeliveredSubset,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CostsSection {
    centers: Vec<f64>,
    curvatures: Option<Vec<f64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConstraintSection {
    lo: f64,
    hi: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScheduleSection {
    lambda0: f64,
    p: f64,
}

impl Default for ScheduleSection {
    fn default() -> Self {
        ScheduleSection { lambda0: 1.0, p: 1.0 }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RunSection {
    algorithm: String,
    rounds: usize,
    seed: u64,
    initial: Vec<f64>,
}

fn build_graph(section: &GraphSection, base_dir: &Path) -> Result<DirectedGraph, HarnessError> {
    if let Some(n) = section.complete {
        return Ok(DirectedGraph::complete(n));
    }
    if let Some(path) = &section.path {
        let full = base_dir.join(path);
        let text = std::fs::read_to_string(&full)
            .map_err(|e| HarnessError::Io(format!("{}: {e}", full.display())))?;
        return Ok(parse_graph_text(&text)?);
    }
    let n = section
        .n
        .ok_or_else(|| HarnessError::Parse("[graph] needs n with inline edges".into()))?;
    let mut g = DirectedGraph::new(n);
    for (k, entry) in section.edges.iter().flatten().enumerate() {
        let fields: Vec<&str> = entry.split_whitespace().collect();
        let bad =
            || HarnessError::Parse(format!("[graph] edge entry {} malformed: `{entry}`", k + 1));
        if fields.len() != 2 {
            return Err(bad());
        }
        let i: usize = fields[0].parse().map_err(|_| bad())?;
        let j: usize = fields[1].parse().map_err(|_| bad())?;
        g.add_edge(i, j)?;
    }
    Ok(g)
}

/// Parse a scenario file. `base_dir` resolves relative graph paths.
pub fn parse_scenario(text: &str, base_dir: &Path) -> Result<Scenario, HarnessError> {
    let file: ScenarioFile =
        toml::from_str(text).map_err(|e| HarnessError::Parse(e.to_string()))?;
    let graph = build_graph(&file.graph, base_dir)?;

    let mut byzantine = BTreeMap::new();
    for entry in file.faults.byzantine {
        byzantine.insert(entry.agent, entry.strategy);
    }
    let mut crashes = BTreeMap::new();
    for entry in file.faults.crash {
        crashes.insert(
            entry.agent,
            CrashEvent { agent: entry.agent, round: entry.round, delivered: entry.deliver },
        );
    }

    let costs = match file.costs.curvatures {
        None => CostFamily::from_centers(&file.costs.centers),
        Some(curvatures) => {
            if curvatures.len() != file.costs.centers.len() {
                return Err(HarnessError::Parse(format!(
                    "[costs] {} curvatures for {} centers",
                    curvatures.len(),
                    file.costs.centers.len()
                )));
            }
            let costs: Result<Vec<QuadraticCost>, _> = file
                .costs
                .centers
                .iter()
                .zip(&curvatures)
                .map(|(&c, &a)| QuadraticCost::new(c, a))
                .collect();
            CostFamily::new(costs?)
        }
    };

    let algorithm: Algorithm =
        file.run.algorithm.parse().map_err(HarnessError::Parse)?;
    let scenario = Scenario {
        graph,
        f: file.faults.f,
        byzantine,
        crashes,
        costs,
        constraint: ConstraintInterval::new(file.constraint.lo, file.constraint.hi)?,
        schedule: StepSchedule::new(file.schedule.lambda0, file.schedule.p)?,
        algorithm,
        rounds: file.run.rounds,
        seed: file.run.seed,
        initial: file.run.initial,
    };
    scenario.validate()?;
    Ok(scenario)
}

#[cfg(test)]
mod tests {
    use super::*;

    const EXAMPLE: &str = r#"
[graph]
complete = 5

[faults]
f = 1

[[faults.byzantine]]
agent = 5
strategy = { kind = "constant", value = 100.0 }

[costs]
centers = [0.0, 1.0, 2.0, 3.0, 0.0]

[constraint]
lo = -10.0
hi = 10.0

[schedule]
lambda0 = 1.0
p = 1.0

[run]
algorithm = "A1"
rounds = 100
seed = 42
initial = [0.0, 1.0, 2.0, 3.0, 0.0]
"#;

    #[test]
    fn parses_full_example() {
        let sc = parse_scenario(EXAMPLE, Path::new(".")).unwrap();
        assert_eq!(sc.graph.n(), 5);
        assert_eq!(sc.f, 1);
        assert!(matches!(
            sc.byzantine.get(&5),
            Some(ByzantineStrategy::Constant { value }) if *value == 100.0
        ));
        assert_eq!(sc.algorithm, Algorithm::A1);
    }

    #[test]
    fn crash_entries_and_inline_edges() {
        let text = r#"
[graph]
n = 3
edges = ["1 2", "2 1", "2 3", "3 2", "1 3", "3 1"]

[faults]
f = 1

[[faults.crash]]
agent = 2
round = 3
deliver = { explicit = [1] }

[costs]
centers = [0.0, 1.0, 2.0]

[constraint]
lo = -1.0
hi = 1.0

[run]
algorithm = "A3"
rounds = 10
seed = 1
initial = [0.0, 0.5, 1.0]
"#;
        let sc = parse_scenario(text, Path::new(".")).unwrap();
        assert_eq!(sc.crashes[&2].round, 3);
        assert_eq!(sc.graph.edge_count(), 6);

        let seeded = text.replace("{ explicit = [1] }", "\"seeded\"");
        let sc = parse_scenario(&seeded, Path::new(".")).unwrap();
        assert!(matches!(sc.crashes[&2].delivered, DeliveredSubset::Seeded));
    }

    #[test]
    fn malformed_inputs_error() {
        assert!(parse_scenario("not toml at all [", Path::new(".")).is_err());
        let bad_edge = r#"
[graph]
n = 2
edges = ["1-2"]
[costs]
centers = [0.0, 0.0]
[constraint]
lo = 0.0
hi = 1.0
[run]
algorithm = "A3"
rounds = 1
seed = 0
initial = [0.0, 0.0]
"#;
        assert!(matches!(
            parse_scenario(bad_edge, Path::new(".")),
            Err(HarnessError::Parse(_))
        ));
    }
}
