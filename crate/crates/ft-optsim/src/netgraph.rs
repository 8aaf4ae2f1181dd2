//! Directed communication graphs, source components, reduced-graph
//! enumeration under Byzantine and crash fault models, and the feasibility
//! checkers that decide whether iterative consensus is solvable at all.
//!
//! Vertices are labeled `1..=n`. Self-loops are excluded from the edge set;
//! agents always use their own value implicitly during updates.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default cap on the number of reduced graphs visited by an enumeration.
pub const DEFAULT_ENUMERATION_BUDGET: u64 = 1_000_000;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("self-loop ({0},{0}) is not allowed")]
    SelfLoop(usize),
    #[error("vertex {0} out of range 1..={1}")]
    VertexOutOfRange(usize, usize),
    #[error("graph file parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("fault set {got} exceeds budget f = {budget}")]
    FaultSetTooLarge { got: usize, budget: usize },
    #[error("fault budget f = {f} leaves no non-faulty agents (n = {n})")]
    AllAgentsFaulty { f: usize, n: usize },
    #[error("enumeration budget exceeded: {needed} reduced graphs > cap {cap}")]
    EnumerationBudgetExceeded { needed: u64, cap: u64 },
}

/// A simple directed graph on vertices `1..=n` without self-loops.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DirectedGraph {
    n: usize,
    out_nbrs: Vec<BTreeSet<usize>>,
    in_nbrs: Vec<BTreeSet<usize>>,
}

impl DirectedGraph {
    pub fn new(n: usize) -> Self {
        DirectedGraph {
            n,
            out_nbrs: vec![BTreeSet::new(); n + 1],
            in_nbrs: vec![BTreeSet::new(); n + 1],
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = DirectedGraph::new(n);
        for &(i, j) in edges {
            g.add_edge(i, j)?;
        }
        Ok(g)
    }

    /// Complete graph: every ordered pair (i, j), i != j.
    pub fn complete(n: usize) -> Self {
        let mut g = DirectedGraph::new(n);
        for i in 1..=n {
            for j in 1..=n {
                if i != j {
                    g.add_edge(i, j).unwrap();
                }
            }
        }
        g
    }

    pub fn add_edge(&mut self, i: usize, j: usize) -> Result<(), GraphError> {
        if i == j {
            return Err(GraphError::SelfLoop(i));
        }
        for v in [i, j] {
            if v == 0 || v > self.n {
                return Err(GraphError::VertexOutOfRange(v, self.n));
            }
        }
        self.out_nbrs[i].insert(j);
        self.in_nbrs[j].insert(i);
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> {
        1..=self.n
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        i >= 1 && i <= self.n && self.out_nbrs[i].contains(&j)
    }

    pub fn out_neighbors(&self, i: usize) -> &BTreeSet<usize> {
        &self.out_nbrs[i]
    }

    pub fn in_neighbors(&self, i: usize) -> &BTreeSet<usize> {
        &self.in_nbrs[i]
    }

    pub fn in_degree(&self, i: usize) -> usize {
        self.in_nbrs[i].len()
    }

    pub fn out_degree(&self, i: usize) -> usize {
        self.out_nbrs[i].len()
    }

    /// d_max = max_i d_i^- over all vertices.
    pub fn max_in_degree(&self) -> usize {
        (1..=self.n).map(|i| self.in_degree(i)).max().unwrap_or(0)
    }

    pub fn edge_count(&self) -> usize {
        (1..=self.n).map(|i| self.out_degree(i)).sum()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut es = Vec::with_capacity(self.edge_count());
        for i in 1..=self.n {
            for &j in &self.out_nbrs[i] {
                es.push((i, j));
            }
        }
        es
    }

    /// True when the edge set is symmetric (undirected as required by the
    /// Metropolis-weight algorithm).
    pub fn is_symmetric(&self) -> bool {
        self.edges().iter().all(|&(i, j)| self.has_edge(j, i))
    }

    /// Subgraph induced by `keep`, preserving the original vertex labels.
    pub fn induced(&self, keep: &BTreeSet<usize>) -> DirectedGraph {
        let mut g = DirectedGraph::new(self.n);
        for &i in keep {
            for &j in &self.out_nbrs[i] {
                if keep.contains(&j) {
                    g.add_edge(i, j).unwrap();
                }
            }
        }
        // Vertices outside `keep` stay present but isolated; the reachability
        // helpers below are given the live set explicitly.
        g
    }

    /// Copy of the graph with every edge incident to a vertex of `s` removed.
    /// The vertex set is unchanged (crash-reduced graph).
    pub fn remove_incident_edges(&self, s: &BTreeSet<usize>) -> DirectedGraph {
        let mut g = DirectedGraph::new(self.n);
        for i in 1..=self.n {
            if s.contains(&i) {
                continue;
            }
            for &j in &self.out_nbrs[i] {
                if !s.contains(&j) {
                    g.add_edge(i, j).unwrap();
                }
            }
        }
        g
    }

    /// Vertices reachable from `start` along directed edges, restricted to
    /// `live` (which must contain `start`).
    fn reachable_within(&self, start: usize, live: &BTreeSet<usize>) -> BTreeSet<usize> {
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::new();
        seen.insert(start);
        queue.push_back(start);
        while let Some(u) = queue.pop_front() {
            for &w in &self.out_nbrs[u] {
                if live.contains(&w) && seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
        seen
    }

    /// The source component: all vertices that have a directed path to every
    /// other vertex. Empty when no such vertex exists.
    ///
    /// Computed via the condensation: a vertex reaches everything iff its
    /// strongly connected component is the unique SCC with condensation
    /// in-degree zero.
    pub fn source_component(&self) -> BTreeSet<usize> {
        let all: BTreeSet<usize> = (1..=self.n).collect();
        self.source_component_within(&all)
    }

    /// Source component of the subgraph induced by `live`.
    pub fn source_component_within(&self, live: &BTreeSet<usize>) -> BTreeSet<usize> {
        if live.is_empty() {
            return BTreeSet::new();
        }
        let sccs = self.sccs_within(live);
        let mut comp_of = BTreeMap::new();
        for (cid, comp) in sccs.iter().enumerate() {
            for &v in comp {
                comp_of.insert(v, cid);
            }
        }
        let mut has_in = vec![false; sccs.len()];
        for &u in live {
            for &w in &self.out_nbrs[u] {
                if live.contains(&w) && comp_of[&u] != comp_of[&w] {
                    has_in[comp_of[&w]] = true;
                }
            }
        }
        let roots: Vec<usize> = (0..sccs.len()).filter(|&c| !has_in[c]).collect();
        if roots.len() == 1 {
            sccs[roots[0]].iter().copied().collect()
        } else {
            BTreeSet::new()
        }
    }

    /// Tarjan SCCs of the subgraph induced by `live` (iterative, stack-safe).
    fn sccs_within(&self, live: &BTreeSet<usize>) -> Vec<Vec<usize>> {
        #[derive(Clone)]
        struct NodeState {
            index: Option<usize>,
            low: usize,
            on_stack: bool,
        }
        let mut st: BTreeMap<usize, NodeState> = live
            .iter()
            .map(|&v| {
                (
                    v,
                    NodeState {
                        index: None,
                        low: 0,
                        on_stack: false,
                    },
                )
            })
            .collect();
        let mut next_index = 0usize;
        let mut stack: Vec<usize> = Vec::new();
        let mut comps: Vec<Vec<usize>> = Vec::new();

        for &root in live {
            if st[&root].index.is_some() {
                continue;
            }
            // Explicit DFS stack: (vertex, iterator position over out-neighbors).
            let mut call: Vec<(usize, Vec<usize>, usize)> = Vec::new();
            let nbrs: Vec<usize> = self.out_nbrs[root]
                .iter()
                .copied()
                .filter(|w| live.contains(w))
                .collect();
            st.get_mut(&root).unwrap().index = Some(next_index);
            st.get_mut(&root).unwrap().low = next_index;
            st.get_mut(&root).unwrap().on_stack = true;
            stack.push(root);
            next_index += 1;
            call.push((root, nbrs, 0));

            while let Some((v, nbrs, pos)) = call.pop() {
                if pos < nbrs.len() {
                    let w = nbrs[pos];
                    call.push((v, nbrs, pos + 1));
                    if st[&w].index.is_none() {
                        let wn: Vec<usize> = self.out_nbrs[w]
                            .iter()
                            .copied()
                            .filter(|x| live.contains(x))
                            .collect();
                        st.get_mut(&w).unwrap().index = Some(next_index);
                        st.get_mut(&w).unwrap().low = next_index;
                        st.get_mut(&w).unwrap().on_stack = true;
                        stack.push(w);
                        next_index += 1;
                        call.push((w, wn, 0));
                    } else if st[&w].on_stack {
                        let wl = st[&w].index.unwrap();
                        let e = st.get_mut(&v).unwrap();
                        e.low = e.low.min(wl);
                    }
                } else {
                    if st[&v].low == st[&v].index.unwrap() {
                        let mut comp = Vec::new();
                        loop {
                            let w = stack.pop().expect("tarjan stack underflow");
                            st.get_mut(&w).unwrap().on_stack = false;
                            comp.push(w);
                            if w == v {
                                break;
                            }
                        }
                        comps.push(comp);
                    }
                    if let Some(&(p, _, _)) = call.last() {
                        let vl = st[&v].low;
                        let e = st.get_mut(&p).unwrap();
                        e.low = e.low.min(vl);
                    }
                }
            }
        }
        comps
    }

    /// Weakly connected components over the full vertex set, as sorted sets.
    pub fn weakly_connected_components(&self) -> Vec<BTreeSet<usize>> {
        let mut seen = vec![false; self.n + 1];
        let mut comps = Vec::new();
        for s in 1..=self.n {
            if seen[s] {
                continue;
            }
            let mut comp = BTreeSet::new();
            let mut queue = VecDeque::new();
            seen[s] = true;
            queue.push_back(s);
            while let Some(u) = queue.pop_front() {
                comp.insert(u);
                for &w in self.out_nbrs[u].iter().chain(self.in_nbrs[u].iter()) {
                    if !seen[w] {
                        seen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
            comps.push(comp);
        }
        comps
    }

    /// Brute-force cross-check for `source_component`: per-vertex BFS.
    pub fn source_component_bfs(&self) -> BTreeSet<usize> {
        let all: BTreeSet<usize> = (1..=self.n).collect();
        all.iter()
            .copied()
            .filter(|&v| self.reachable_within(v, &all).len() == self.n)
            .collect()
    }
}

/// Parse the plain-text edge-list format: first non-comment line `n <count>`,
/// then `i j` lines (edge i -> j, 1-based). Lines starting with `#` are
/// comments.
pub fn parse_graph_text(text: &str) -> Result<DirectedGraph, GraphError> {
    let mut g: Option<DirectedGraph> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        match &mut g {
            None => {
                if fields.len() != 2 || fields[0] != "n" {
                    return Err(GraphError::Parse {
                        line: line_no,
                        reason: format!("expected header `n <count>`, got `{line}`"),
                    });
                }
                let n: usize = fields[1].parse().map_err(|_| GraphError::Parse {
                    line: line_no,
                    reason: format!("bad vertex count `{}`", fields[1]),
                })?;
                g = Some(DirectedGraph::new(n));
            }
            Some(g) => {
                if fields.len() != 2 {
                    return Err(GraphError::Parse {
                        line: line_no,
                        reason: format!("expected `i j`, got `{line}`"),
                    });
                }
                let parse = |s: &str| -> Result<usize, GraphError> {
                    s.parse().map_err(|_| GraphError::Parse {
                        line: line_no,
                        reason: format!("bad vertex label `{s}`"),
                    })
                };
                let (i, j) = (parse(fields[0])?, parse(fields[1])?);
                g.add_edge(i, j).map_err(|e| GraphError::Parse {
                    line: line_no,
                    reason: e.to_string(),
                })?;
            }
        }
    }
    g.ok_or(GraphError::Parse {
        line: 0,
        reason: "empty graph file".into(),
    })
}

/// Fault budget and the concrete faulty set of one execution.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaultSetSpec {
    pub f: usize,
    pub faulty: BTreeSet<usize>,
}

impl FaultSetSpec {
    pub fn new(f: usize, faulty: BTreeSet<usize>) -> Result<Self, GraphError> {
        if faulty.len() > f {
            return Err(GraphError::FaultSetTooLarge {
                got: faulty.len(),
                budget: f,
            });
        }
        Ok(FaultSetSpec { f, faulty })
    }

    /// phi = |F|, the realized number of faulty agents.
    pub fn phi(&self) -> usize {
        self.faulty.len()
    }

    /// phi_i = |N_i^- ∩ F| for one agent.
    pub fn phi_i(&self, g: &DirectedGraph, i: usize) -> usize {
        g.in_neighbors(i)
            .iter()
            .filter(|j| self.faulty.contains(j))
            .count()
    }

    /// N = V \ F.
    pub fn non_faulty(&self, g: &DirectedGraph) -> BTreeSet<usize> {
        g.vertices().filter(|v| !self.faulty.contains(v)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FaultMode {
    Byzantine,
    Crash,
}

/// An enumerated family of reduced graphs.
#[derive(Debug, Clone)]
pub struct ReducedGraphFamily {
    pub mode: FaultMode,
    pub graphs: Vec<DirectedGraph>,
    /// Count of all reduced graphs of the family (exact closed form).
    pub tau: u64,
    /// Whether `tau` counts the full family (false only when a maximal-only
    /// enumeration was used as a lower bound).
    pub tau_exact: bool,
    /// Smallest source-component cardinality across the enumerated members
    /// (0 when some member has an empty source component).
    pub min_source_size: usize,
}

fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u64 / (i + 1) as u64;
    }
    acc
}

/// Exact count of Byzantine reduced graphs for a fixed faulty set: the
/// per-vertex removal choices compose independently, so
/// tau_b = prod_i sum_{k=0}^{min(f, r_i)} C(r_i, k) with r_i the surviving
/// in-degree of vertex i.
pub fn count_reduced_byzantine(g: &DirectedGraph, faulty: &BTreeSet<usize>, f: usize) -> u64 {
    let mut total: u64 = 1;
    for i in g.vertices().filter(|v| !faulty.contains(v)) {
        let r = g
            .in_neighbors(i)
            .iter()
            .filter(|j| !faulty.contains(j))
            .count();
        let choices: u64 = (0..=f.min(r)).map(|k| binomial(r, k)).sum();
        total = total.saturating_mul(choices);
    }
    total
}

/// Count of maximal-removal Byzantine reduced graphs (exactly min(f, r_i)
/// in-edges removed per vertex).
pub fn count_reduced_byzantine_maximal(
    g: &DirectedGraph,
    faulty: &BTreeSet<usize>,
    f: usize,
) -> u64 {
    let mut total: u64 = 1;
    for i in g.vertices().filter(|v| !faulty.contains(v)) {
        let r = g
            .in_neighbors(i)
            .iter()
            .filter(|j| !faulty.contains(j))
            .count();
        total = total.saturating_mul(binomial(r, f.min(r)));
    }
    total
}

/// Subsets of `items` of size `k`, in lexicographic order.
fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if k > items.len() {
        return out;
    }
    loop {
        out.push(idx.iter().map(|&i| items[i]).collect());
        // advance
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + items.len() - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Subsets of `items` with size in `0..=max_k`, ordered by size then
/// lexicographically. This is the canonical enumeration order for fault sets
/// and removal sets.
fn subsets_up_to(items: &[usize], max_k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for k in 0..=max_k.min(items.len()) {
        out.extend(combinations(items, k));
    }
    out
}

/// Visit every Byzantine reduced graph for fixed `faulty`, in deterministic
/// order (per-vertex removal choices ordered by size then lexicographically,
/// composed as a mixed-radix counter with vertex 1 the slowest digit).
fn visit_reduced_byzantine<Fv: FnMut(&DirectedGraph) -> bool>(
    g: &DirectedGraph,
    faulty: &BTreeSet<usize>,
    f: usize,
    maximal_only: bool,
    mut visit: Fv,
) {
    let survivors: Vec<usize> = g.vertices().filter(|v| !faulty.contains(v)).collect();
    let base = {
        let keep: BTreeSet<usize> = survivors.iter().copied().collect();
        g.induced(&keep)
    };
    // Per-vertex removal choices.
    let per_vertex: Vec<Vec<Vec<usize>>> = survivors
        .iter()
        .map(|&i| {
            let ins: Vec<usize> = base.in_neighbors(i).iter().copied().collect();
            if maximal_only {
                combinations(&ins, f.min(ins.len()))
            } else {
                subsets_up_to(&ins, f)
            }
        })
        .collect();
    let mut counter = vec![0usize; survivors.len()];
    loop {
        let mut h = base.clone();
        let mut rebuilt = DirectedGraph::new(g.n());
        for (slot, &i) in survivors.iter().enumerate() {
            let removed: BTreeSet<usize> = per_vertex[slot][counter[slot]].iter().copied().collect();
            for &j in h.in_neighbors(i) {
                if !removed.contains(&j) {
                    rebuilt.add_edge(j, i).unwrap();
                }
            }
        }
        h = rebuilt;
        if !visit(&h) {
            return;
        }
        // Increment mixed-radix counter, last vertex fastest.
        let mut pos = survivors.len();
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            counter[pos] += 1;
            if counter[pos] < per_vertex[pos].len() {
                break;
            }
            counter[pos] = 0;
            if pos == 0 {
                return;
            }
        }
    }
}

/// Enumerate the Byzantine reduced-graph family for a fixed faulty set F:
/// remove F and its edges, then per surviving vertex remove a subset of at
/// most `f` incoming edges (`maximal_only` restricts to exactly
/// min(f, in-degree) removals, which is sufficient for assumption checking
/// because source components only grow under edge additions).
pub fn enumerate_reduced_byzantine(
    g: &DirectedGraph,
    faulty: &BTreeSet<usize>,
    f: usize,
    maximal_only: bool,
    budget: u64,
) -> Result<ReducedGraphFamily, GraphError> {
    if faulty.len() > f {
        return Err(GraphError::FaultSetTooLarge {
            got: faulty.len(),
            budget: f,
        });
    }
    let tau = count_reduced_byzantine(g, faulty, f);
    let member_count = if maximal_only {
        count_reduced_byzantine_maximal(g, faulty, f)
    } else {
        tau
    };
    if member_count > budget {
        return Err(GraphError::EnumerationBudgetExceeded {
            needed: member_count,
            cap: budget,
        });
    }
    let mut graphs = Vec::with_capacity(member_count as usize);
    let mut min_source = usize::MAX;
    let live: BTreeSet<usize> = g.vertices().filter(|v| !faulty.contains(v)).collect();
    visit_reduced_byzantine(g, faulty, f, maximal_only, |h| {
        min_source = min_source.min(h.source_component_within(&live).len());
        graphs.push(h.clone());
        true
    });
    if graphs.is_empty() {
        min_source = 0;
    }
    Ok(ReducedGraphFamily {
        mode: FaultMode::Byzantine,
        graphs,
        tau,
        tau_exact: true,
        min_source_size: min_source,
    })
}

/// Enumerate the crash reduced-graph family: one member per subset F' of V
/// with |F'| <= f, formed by deleting every edge incident to F' (the vertex
/// set is unchanged). Members follow the canonical subset order.
pub fn enumerate_reduced_crash(
    g: &DirectedGraph,
    f: usize,
    budget: u64,
) -> Result<ReducedGraphFamily, GraphError> {
    let n = g.n();
    let tau: u64 = (0..=f.min(n)).map(|k| binomial(n, k)).sum();
    if tau > budget {
        return Err(GraphError::EnumerationBudgetExceeded {
            needed: tau,
            cap: budget,
        });
    }
    let verts: Vec<usize> = g.vertices().collect();
    let mut graphs = Vec::with_capacity(tau as usize);
    let mut min_source = usize::MAX;
    for subset in subsets_up_to(&verts, f.min(n)) {
        let removed: BTreeSet<usize> = subset.into_iter().collect();
        let h = g.remove_incident_edges(&removed);
        let live: BTreeSet<usize> = g.vertices().filter(|v| !removed.contains(v)).collect();
        min_source = min_source.min(h.source_component_within(&live).len());
        graphs.push(h);
    }
    if graphs.is_empty() {
        min_source = 0;
    }
    Ok(ReducedGraphFamily {
        mode: FaultMode::Crash,
        graphs,
        tau,
        tau_exact: true,
        min_source_size: min_source,
    })
}

/// A concrete counterexample produced by a failed feasibility check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Witness {
    /// The fault set realizing the failure.
    pub faulty: Vec<usize>,
    /// Edges removed beyond the fault set (Byzantine mode only).
    pub removed_edges: Vec<(usize, usize)>,
    /// Edge list of the failing reduced graph.
    pub reduced_edges: Vec<(usize, usize)>,
    /// Human-readable failure reason.
    pub reason: String,
}

/// Output of the assumption checkers.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FeasibilityReport {
    pub mode: FaultMode,
    pub n: usize,
    pub f: usize,
    pub holds: bool,
    /// Minimum source-component size across the family (present when holds).
    pub gamma: Option<usize>,
    /// Total number of reduced graphs across all admissible fault sets.
    pub tau: u64,
    pub tau_exact: bool,
    pub witness: Option<Witness>,
}

/// Check the Byzantine solvability condition: for every F with |F| <= f and
/// every reduced graph, the source component is nonempty. Only
/// maximal-removal reduced graphs are visited; source components are
/// monotone under edge addition, so this is equivalent and also yields the
/// exact minimum source size.
pub fn check_assumption_byzantine(
    g: &DirectedGraph,
    f: usize,
    budget: u64,
) -> Result<FeasibilityReport, GraphError> {
    let n = g.n();
    if f >= n {
        return Err(GraphError::AllAgentsFaulty { f, n });
    }
    let verts: Vec<usize> = g.vertices().collect();
    let fault_sets = subsets_up_to(&verts, f);

    // Budget accounting over the whole family union.
    let mut visited: u64 = 0;
    let mut tau_total: u64 = 0;
    let mut min_gamma = usize::MAX;
    let mut witness: Option<Witness> = None;

    for fs in &fault_sets {
        let faulty: BTreeSet<usize> = fs.iter().copied().collect();
        tau_total = tau_total.saturating_add(count_reduced_byzantine(g, &faulty, f));
        let maximal = count_reduced_byzantine_maximal(g, &faulty, f);
        visited = visited.saturating_add(maximal);
        if visited > budget {
            return Err(GraphError::EnumerationBudgetExceeded {
                needed: visited,
                cap: budget,
            });
        }
        let live: BTreeSet<usize> = g.vertices().filter(|v| !faulty.contains(v)).collect();
        let base = g.induced(&live);
        visit_reduced_byzantine(g, &faulty, f, true, |h| {
            let s = h.source_component_within(&live);
            if s.is_empty() && witness.is_none() {
                let removed: Vec<(usize, usize)> = base
                    .edges()
                    .into_iter()
                    .filter(|&(i, j)| !h.has_edge(i, j))
                    .collect();
                witness = Some(Witness {
                    faulty: fs.clone(),
                    removed_edges: removed,
                    reduced_edges: h.edges(),
                    reason: "reduced graph has an empty source component".into(),
                });
                return false;
            }
            min_gamma = min_gamma.min(s.len());
            true
        });
        if witness.is_some() {
            break;
        }
    }
    let holds = witness.is_none();
    Ok(FeasibilityReport {
        mode: FaultMode::Byzantine,
        n,
        f,
        holds,
        gamma: if holds { Some(min_gamma) } else { None },
        tau: tau_total,
        tau_exact: true,
        witness,
    })
}

/// Check the crash solvability condition: every crash-reduced graph contains
/// a unique non-trivial weakly-connected component whose induced subgraph has
/// a nonempty source component.
pub fn check_assumption_crash(
    g: &DirectedGraph,
    f: usize,
    budget: u64,
) -> Result<FeasibilityReport, GraphError> {
    let n = g.n();
    if f >= n {
        return Err(GraphError::AllAgentsFaulty { f, n });
    }
    let family = enumerate_reduced_crash(g, f, budget)?;
    let verts: Vec<usize> = g.vertices().collect();
    let subsets = subsets_up_to(&verts, f.min(n));
    debug_assert_eq!(subsets.len(), family.graphs.len());

    let mut min_gamma = usize::MAX;
    let mut witness = None;
    for (fs, h) in subsets.iter().zip(family.graphs.iter()) {
        let nontrivial: Vec<BTreeSet<usize>> = h
            .weakly_connected_components()
            .into_iter()
            .filter(|c| c.len() >= 2)
            .collect();
        let reason = if nontrivial.is_empty() {
            Some("no non-trivial weakly-connected component".to_string())
        } else if nontrivial.len() > 1 {
            Some(format!(
                "{} non-trivial weakly-connected components",
                nontrivial.len()
            ))
        } else {
            let comp = &nontrivial[0];
            let s = h.source_component_within(comp);
            if s.is_empty() {
                Some("unique non-trivial component has no source".to_string())
            } else {
                min_gamma = min_gamma.min(s.len());
                None
            }
        };
        if let Some(reason) = reason {
            witness = Some(Witness {
                faulty: fs.clone(),
                removed_edges: Vec::new(),
                reduced_edges: h.edges(),
                reason,
            });
            break;
        }
    }
    let holds = witness.is_none();
    Ok(FeasibilityReport {
        mode: FaultMode::Crash,
        n,
        f,
        holds,
        gamma: if holds { Some(min_gamma) } else { None },
        tau: family.tau,
        tau_exact: true,
        witness,
    })
}

/// Minimum source-component size over the Byzantine reduced-graph family for
/// one fixed faulty set (the gamma of the trimmed-mean guarantee theorem).
pub fn byzantine_min_source(
    g: &DirectedGraph,
    faulty: &BTreeSet<usize>,
    f: usize,
    budget: u64,
) -> Result<usize, GraphError> {
    let count = count_reduced_byzantine_maximal(g, faulty, f);
    if count > budget {
        return Err(GraphError::EnumerationBudgetExceeded {
            needed: count,
            cap: budget,
        });
    }
    let live: BTreeSet<usize> = g.vertices().filter(|v| !faulty.contains(v)).collect();
    let mut min_source = usize::MAX;
    visit_reduced_byzantine(g, faulty, f, true, |h| {
        min_source = min_source.min(h.source_component_within(&live).len());
        true
    });
    Ok(if min_source == usize::MAX { 0 } else { min_source })
}

/// Minimum source-component size of the live part over crash-reduced graphs
/// for subsets of one fixed faulty set (the gamma of the crash guarantee
/// theorems).
pub fn crash_min_source(g: &DirectedGraph, faulty: &BTreeSet<usize>) -> usize {
    let members: Vec<usize> = faulty.iter().copied().collect();
    let mut min_source = usize::MAX;
    for subset in subsets_up_to(&members, members.len()) {
        let removed: BTreeSet<usize> = subset.into_iter().collect();
        let live: BTreeSet<usize> = g.vertices().filter(|v| !removed.contains(v)).collect();
        let s = g.source_component_within(&live);
        min_source = min_source.min(s.len());
    }
    min_source
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(vs: &[usize]) -> BTreeSet<usize> {
        vs.iter().copied().collect()
    }

    #[test]
    fn source_component_cycle_path_disconnected() {
        let cyc = DirectedGraph::from_edges(3, &[(1, 2), (2, 3), (3, 1)]).unwrap();
        assert_eq!(cyc.source_component(), set(&[1, 2, 3]));

        let path = DirectedGraph::from_edges(3, &[(1, 2), (2, 3)]).unwrap();
        assert_eq!(path.source_component(), set(&[1]));

        let none = DirectedGraph::new(2);
        assert!(none.source_component().is_empty());
    }

    #[test]
    fn source_component_matches_bfs_oracle() {
        // All graphs on 4 vertices with a seeded sample of edge sets.
        let pairs: Vec<(usize, usize)> = (1..=4)
            .flat_map(|i| (1..=4).filter(move |&j| j != i).map(move |j| (i, j)))
            .collect();
        for mask in (0..(1u32 << pairs.len())).step_by(97) {
            let edges: Vec<(usize, usize)> = pairs
                .iter()
                .enumerate()
                .filter(|(k, _)| mask & (1 << k) != 0)
                .map(|(_, &e)| e)
                .collect();
            let g = DirectedGraph::from_edges(4, &edges).unwrap();
            assert_eq!(g.source_component(), g.source_component_bfs());
        }
    }

    #[test]
    fn rejects_self_loop() {
        let mut g = DirectedGraph::new(3);
        assert!(matches!(g.add_edge(2, 2), Err(GraphError::SelfLoop(2))));
    }

    #[test]
    fn byzantine_family_k4_one_fault_maximal() {
        let g = DirectedGraph::complete(4);
        let fam = enumerate_reduced_byzantine(&g, &set(&[4]), 1, true, 1 << 20).unwrap();
        // K3 survivors, 2 in-edges each, exactly 1 removed: 2^3 members.
        assert_eq!(fam.graphs.len(), 8);
        // Full family count: 3 removal choices per vertex.
        assert_eq!(fam.tau, 27);
        assert!(fam.tau_exact);
    }

    #[test]
    fn byzantine_family_nothing_removable() {
        let g = DirectedGraph::from_edges(3, &[(1, 2), (2, 3), (3, 1)]).unwrap();
        let fam = enumerate_reduced_byzantine(&g, &BTreeSet::new(), 0, false, 1 << 20).unwrap();
        assert_eq!(fam.graphs.len(), 1);
        assert_eq!(fam.tau, 1);
        assert_eq!(fam.graphs[0], g);
    }

    #[test]
    fn byzantine_family_k3_one_fault_edgeless() {
        let g = DirectedGraph::complete(3);
        let fam = enumerate_reduced_byzantine(&g, &set(&[3]), 1, true, 1 << 20).unwrap();
        assert_eq!(fam.graphs.len(), 1);
        assert_eq!(fam.graphs[0].edge_count(), 0);
        assert_eq!(fam.min_source_size, 0);
    }

    #[test]
    fn crash_family_path() {
        let g = DirectedGraph::from_edges(3, &[(1, 2), (2, 3)]).unwrap();
        let fam = enumerate_reduced_crash(&g, 1, 1 << 20).unwrap();
        // F' in {{}, {1}, {2}, {3}}.
        assert_eq!(fam.graphs.len(), 4);
        // F' = {2} (index 2 in size-then-lex order) removes every edge.
        assert_eq!(fam.graphs[2].edge_count(), 0);
        let f0 = enumerate_reduced_crash(&g, 0, 1 << 20).unwrap();
        assert_eq!(f0.graphs.len(), 1);
        assert_eq!(f0.graphs[0], g);
    }

    #[test]
    fn crash_family_k3() {
        let g = DirectedGraph::complete(3);
        let fam = enumerate_reduced_crash(&g, 1, 1 << 20).unwrap();
        assert_eq!(fam.graphs.len(), 4);
        for h in &fam.graphs[1..] {
            // Single-removal members keep a 2-vertex complete core.
            assert_eq!(h.edge_count(), 2);
        }
    }

    #[test]
    fn assumption_byzantine_k4_holds_k3_fails() {
        let k4 = DirectedGraph::complete(4);
        let rep = check_assumption_byzantine(&k4, 1, 1 << 20).unwrap();
        assert!(rep.holds);
        assert_eq!(rep.gamma, Some(2));

        let k3 = DirectedGraph::complete(3);
        let rep = check_assumption_byzantine(&k3, 1, 1 << 20).unwrap();
        assert!(!rep.holds);
        let w = rep.witness.unwrap();
        assert!(w.reduced_edges.is_empty(), "witness must be edgeless");
    }

    #[test]
    fn assumption_byzantine_f0_is_source_existence() {
        let cyc = DirectedGraph::from_edges(3, &[(1, 2), (2, 3), (3, 1)]).unwrap();
        let rep = check_assumption_byzantine(&cyc, 0, 1 << 20).unwrap();
        assert!(rep.holds);
        assert_eq!(rep.gamma, Some(3));
    }

    #[test]
    fn degree_corollary_for_feasible_graphs() {
        // Assumption 1 implies d_i^- >= 2f+1 at every vertex.
        let k4 = DirectedGraph::complete(4);
        let rep = check_assumption_byzantine(&k4, 1, 1 << 20).unwrap();
        assert!(rep.holds);
        for v in k4.vertices() {
            assert!(k4.in_degree(v) >= 3);
        }
    }

    #[test]
    fn assumption_crash_examples() {
        let k4 = DirectedGraph::complete(4);
        let rep = check_assumption_crash(&k4, 1, 1 << 20).unwrap();
        assert!(rep.holds);
        assert_eq!(rep.gamma, Some(3));

        // Two disjoint 2-cycles, f = 0: two non-trivial components.
        let g = DirectedGraph::from_edges(4, &[(1, 2), (2, 1), (3, 4), (4, 3)]).unwrap();
        let rep = check_assumption_crash(&g, 0, 1 << 20).unwrap();
        assert!(!rep.holds);

        // Bidirectional star, f = 1: crashing the center isolates everyone.
        let star = DirectedGraph::from_edges(
            4,
            &[(1, 2), (2, 1), (1, 3), (3, 1), (1, 4), (4, 1)],
        )
        .unwrap();
        let rep = check_assumption_crash(&star, 1, 1 << 20).unwrap();
        assert!(!rep.holds);
        assert_eq!(rep.witness.unwrap().faulty, vec![1]);
    }

    #[test]
    fn budget_exceeded_surfaces() {
        let g = DirectedGraph::complete(6);
        let err = check_assumption_byzantine(&g, 2, 10).unwrap_err();
        assert!(matches!(err, GraphError::EnumerationBudgetExceeded { .. }));
    }

    #[test]
    fn parse_graph_roundtrip_and_errors() {
        let text = "# comment\nn 3\n1 2\n2 3\n";
        let g = parse_graph_text(text).unwrap();
        assert_eq!(g.edges(), vec![(1, 2), (2, 3)]);

        let bad = "n 3\n1 1\n";
        let err = parse_graph_text(bad).unwrap_err();
        match err {
            GraphError::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn counting_matches_enumeration() {
        let g = DirectedGraph::complete(4);
        for f in 0..=1 {
            for faulty in [vec![], vec![4]] {
                if faulty.len() > f {
                    continue;
                }
                let fa: BTreeSet<usize> = faulty.into_iter().collect();
                let fam = enumerate_reduced_byzantine(&g, &fa, f, false, 1 << 20).unwrap();
                assert_eq!(fam.tau, fam.graphs.len() as u64);
                // Members are pairwise distinct.
                for a in 0..fam.graphs.len() {
                    for b in a + 1..fam.graphs.len() {
                        assert_ne!(fam.graphs[a], fam.graphs[b]);
                    }
                }
            }
        }
    }

    #[test]
    fn byzantine_min_source_k5_one_fault() {
        let g = DirectedGraph::complete(5);
        let gamma = byzantine_min_source(&g, &set(&[5]), 1, 1 << 20).unwrap();
        assert_eq!(gamma, 3);
    }

    #[test]
    fn crash_min_source_k4() {
        let g = DirectedGraph::complete(4);
        assert_eq!(crash_min_source(&g, &set(&[4])), 3);
        assert_eq!(crash_min_source(&g, &BTreeSet::new()), 4);
    }
}
