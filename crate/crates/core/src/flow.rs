//! Unit-capacity flow machinery: maximum disjoint dipath systems, minimum
//! vertex separators, and fans.
//!
//! Everything runs on a vertex-split network (each vertex becomes an
//! in-copy and an out-copy joined by a unit edge), augmented one unit at a
//! time by depth-first search in adjacency order, so counts are exact
//! Menger values and returned witnesses are deterministic.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::digraph::{LevelledDigraph, VertexId};
use crate::error::{Error, Result};

const INF: i64 = 1 << 40;

/// Pairwise disjointness required of a dipath system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DisjointMode {
    VertexDisjoint,
    InternallyDisjoint,
    EdgeDisjoint,
}

/// A system of pairwise disjoint dipaths, tagged with its mode.
#[derive(Clone, Debug)]
pub struct PathSystem {
    pub mode: DisjointMode,
    pub paths: Vec<Vec<VertexId>>,
    /// Vertices the paths are allowed to share in internally-disjoint mode.
    pub terminals: BTreeSet<VertexId>,
}

impl PathSystem {
    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    /// Re-checks the type invariants against the host digraph.
    pub fn validate(&self, g: &LevelledDigraph) -> Result<()> {
        for p in &self.paths {
            if !g.is_dipath(p) {
                return Err(Error::MalformedDigraph(format!("not a dipath: {p:?}")));
            }
        }
        match self.mode {
            DisjointMode::VertexDisjoint => {
                let mut seen = BTreeSet::new();
                for p in &self.paths {
                    for v in p {
                        if !seen.insert(v.clone()) {
                            return Err(Error::MalformedDigraph(format!(
                                "vertex {v} shared between paths"
                            )));
                        }
                    }
                }
            }
            DisjointMode::InternallyDisjoint => {
                let mut seen: BTreeSet<VertexId> = BTreeSet::new();
                for p in &self.paths {
                    for (k, v) in p.iter().enumerate() {
                        let internal = k > 0 && k + 1 < p.len();
                        if internal && self.terminals.contains(v) {
                            return Err(Error::MalformedDigraph(format!(
                                "terminal {v} used internally"
                            )));
                        }
                        if seen.contains(v) && !self.terminals.contains(v) {
                            return Err(Error::MalformedDigraph(format!(
                                "non-terminal {v} shared between paths"
                            )));
                        }
                    }
                    seen.extend(p.iter().cloned());
                }
            }
            DisjointMode::EdgeDisjoint => {
                let mut seen = BTreeSet::new();
                for p in &self.paths {
                    for w in p.windows(2) {
                        if !seen.insert((w[0].clone(), w[1].clone())) {
                            return Err(Error::MalformedDigraph(format!(
                                "edge {} -> {} shared between paths",
                                w[0], w[1]
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

/// A minimum vertex separator together with the sides it separates and the
/// Menger flow value certifying minimality.
#[derive(Clone, Debug)]
pub struct SeparatorCertificate {
    pub separator: Vec<VertexId>,
    pub sources: Vec<VertexId>,
    pub targets: Vec<VertexId>,
    pub flow_value: u32,
}

impl SeparatorCertificate {
    /// Checks |S| = flow and that removing S kills every source-target dipath.
    pub fn revalidate(&self, g: &LevelledDigraph) -> Result<()> {
        if self.separator.len() != self.flow_value as usize {
            return Err(Error::MalformedDigraph(format!(
                "separator size {} != flow {}",
                self.separator.len(),
                self.flow_value
            )));
        }
        let removed: BTreeSet<VertexId> = self.separator.iter().cloned().collect();
        let h = g.without(&removed);
        let reached = reachable_set(&h, self.sources.iter().filter(|v| h.contains(v)));
        for t in &self.targets {
            if h.contains(t) && reached.contains(t) {
                return Err(Error::MalformedDigraph(format!(
                    "target {t} still reachable after removing separator"
                )));
            }
        }
        Ok(())
    }
}

/// Forward-reachable set from the given start vertices.
pub fn reachable_set<'a>(
    g: &LevelledDigraph,
    starts: impl Iterator<Item = &'a VertexId>,
) -> BTreeSet<VertexId> {
    let mut seen: Vec<bool> = vec![false; g.vertex_count()];
    let mut stack = Vec::new();
    for v in starts {
        if let Some(i) = g.idx(v) {
            if !seen[i] {
                seen[i] = true;
                stack.push(i);
            }
        }
    }
    let mut out = BTreeSet::new();
    while let Some(i) = stack.pop() {
        out.insert(g.id_at(i).clone());
        for &j in g.out_at(i) {
            if !seen[j] {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// the augmenting-path network
// ---------------------------------------------------------------------------

struct Network {
    adj: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<i64>,
    src: usize,
    snk: usize,
}

impl Network {
    fn new(nodes: usize) -> Self {
        Network {
            adj: vec![Vec::new(); nodes + 2],
            to: Vec::new(),
            cap: Vec::new(),
            src: nodes,
            snk: nodes + 1,
        }
    }

    fn add(&mut self, u: usize, v: usize, cap: i64) -> usize {
        let e = self.to.len();
        self.to.push(v);
        self.cap.push(cap);
        self.adj[u].push(e);
        self.to.push(u);
        self.cap.push(0);
        self.adj[v].push(e + 1);
        e
    }

    fn augment(&mut self) -> bool {
        // One unit along the first src-snk path in adjacency order.
        let mut visited = vec![false; self.adj.len()];
        let mut stack = vec![(self.src, 0usize)];
        let mut parent: Vec<Option<usize>> = vec![None; self.adj.len()];
        visited[self.src] = true;
        while let Some(&mut (u, ref mut k)) = stack.last_mut() {
            if u == self.snk {
                let mut x = self.snk;
                while x != self.src {
                    let e = parent[x].unwrap();
                    self.cap[e] -= 1;
                    self.cap[e ^ 1] += 1;
                    x = self.to[e ^ 1];
                }
                return true;
            }
            if *k < self.adj[u].len() {
                let e = self.adj[u][*k];
                *k += 1;
                let v = self.to[e];
                if self.cap[e] > 0 && !visited[v] {
                    visited[v] = true;
                    parent[v] = Some(e);
                    stack.push((v, 0));
                }
            } else {
                stack.pop();
            }
        }
        false
    }

    fn maxflow(&mut self, cap_limit: Option<u32>) -> u32 {
        let mut flow = 0;
        while cap_limit.is_none_or(|c| flow < c) && self.augment() {
            flow += 1;
        }
        flow
    }

    /// Residual reachability from the source after maxflow.
    fn residual_reach(&self) -> Vec<bool> {
        let mut seen = vec![false; self.adj.len()];
        let mut stack = vec![self.src];
        seen[self.src] = true;
        while let Some(u) = stack.pop() {
            for &e in &self.adj[u] {
                let v = self.to[e];
                if self.cap[e] > 0 && !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen
    }

    /// Nodes from which the sink is residually reachable after maxflow.
    fn residual_reaches_snk(&self) -> Vec<bool> {
        // walk residual edges backwards: e = u -> v is usable into v
        // whenever cap[e] > 0, so from v we may step back to u
        let mut seen = vec![false; self.adj.len()];
        let mut stack = vec![self.snk];
        seen[self.snk] = true;
        while let Some(v) = stack.pop() {
            for &e in &self.adj[v] {
                // adj[v] holds both forward edges from v and the reverse
                // twins of edges into v; the twin e^1 enters v, so cap of
                // e^1's usability into v is cap[e ^ 1] on edge (u -> v)
                let u = self.to[e];
                if self.cap[e ^ 1] > 0 && !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        seen
    }

    /// Walks the unit flow from the source, yielding node sequences. Each
    /// walk consumes the flow it traverses, so source edges carrying
    /// several units start several walks.
    fn decompose(&mut self) -> Vec<Vec<usize>> {
        let mut paths = Vec::new();
        loop {
            let first = self.adj[self.src]
                .iter()
                .copied()
                .find(|&e| e % 2 == 0 && self.cap[e ^ 1] > 0);
            let Some(first) = first else { break };
            let mut nodes = Vec::new();
            let mut e = first;
            loop {
                self.cap[e ^ 1] -= 1; // consume one unit
                let v = self.to[e];
                if v == self.snk {
                    break;
                }
                nodes.push(v);
                e = self.adj[v]
                    .iter()
                    .copied()
                    .find(|&f| f % 2 == 0 && self.cap[f ^ 1] > 0)
                    .expect("flow conservation");
            }
            paths.push(nodes);
        }
        paths
    }
}

fn dedupe(g: &LevelledDigraph, vs: &[VertexId]) -> Vec<VertexId> {
    let mut seen = BTreeSet::new();
    vs.iter()
        .filter(|v| g.contains(v) && seen.insert((*v).clone()))
        .cloned()
        .collect()
}

fn vin(i: usize) -> usize {
    2 * i
}

fn vout(i: usize) -> usize {
    2 * i + 1
}

/// Maximum system of A-B dipaths, pairwise disjoint per `mode`.
///
/// Internally-disjoint mode treats all of A and B as shareable terminals
/// that no path may cross internally. A vertex lying in both A and B
/// contributes a trivial one-vertex path.
pub fn max_disjoint_dipaths(
    g: &LevelledDigraph,
    sources: &[VertexId],
    targets: &[VertexId],
    mode: DisjointMode,
) -> PathSystem {
    max_disjoint_capped(g, sources, targets, mode, None)
}

/// As [`max_disjoint_dipaths`] with edge-disjoint mode.
pub fn max_edge_disjoint_dipaths(
    g: &LevelledDigraph,
    sources: &[VertexId],
    targets: &[VertexId],
) -> PathSystem {
    max_disjoint_capped(g, sources, targets, DisjointMode::EdgeDisjoint, None)
}

/// Thresholded variant: stops after `cap` augmentations, so a result of
/// size `cap` certifies "at least cap" only.
pub fn max_disjoint_capped(
    g: &LevelledDigraph,
    sources: &[VertexId],
    targets: &[VertexId],
    mode: DisjointMode,
    cap: Option<u32>,
) -> PathSystem {
    let a = dedupe(g, sources);
    let b = dedupe(g, targets);
    let n = g.vertex_count();
    let terminals: BTreeSet<VertexId> = match mode {
        DisjointMode::InternallyDisjoint => a.iter().chain(b.iter()).cloned().collect(),
        _ => BTreeSet::new(),
    };

    match mode {
        DisjointMode::VertexDisjoint => {
            let mut net = Network::new(2 * n);
            for i in 0..n {
                net.add(vin(i), vout(i), 1);
            }
            for i in 0..n {
                for &j in g.out_at(i) {
                    net.add(vout(i), vin(j), INF);
                }
            }
            for v in &a {
                net.add(net.src, vin(g.idx(v).unwrap()), 1);
            }
            for v in &b {
                net.add(vout(g.idx(v).unwrap()), net.snk, 1);
            }
            net.maxflow(cap);
            let paths = net
                .decompose()
                .into_iter()
                .map(|nodes| {
                    nodes
                        .iter()
                        .filter(|&&x| x % 2 == 1)
                        .map(|&x| g.id_at(x / 2).clone())
                        .collect()
                })
                .collect();
            PathSystem { mode, paths, terminals }
        }
        DisjointMode::InternallyDisjoint => {
            let term_idx: BTreeSet<usize> =
                terminals.iter().filter_map(|v| g.idx(v)).collect();
            let mut net = Network::new(2 * n);
            for i in 0..n {
                if !term_idx.contains(&i) {
                    net.add(vin(i), vout(i), 1);
                }
            }
            // unit edges: internally disjoint paths can never share an
            // edge, and direct terminal-to-terminal edges must not carry
            // more than one path
            for i in 0..n {
                for &j in g.out_at(i) {
                    net.add(vout(i), vin(j), 1);
                }
            }
            for v in &a {
                net.add(net.src, vout(g.idx(v).unwrap()), INF);
            }
            for v in &b {
                // shared vertices already count as trivial paths; attaching
                // them as sinks too would admit closed walks
                if !a.contains(v) {
                    net.add(vin(g.idx(v).unwrap()), net.snk, INF);
                }
            }
            net.maxflow(cap);
            let mut paths: Vec<Vec<VertexId>> = a
                .iter()
                .filter(|v| b.contains(v))
                .map(|v| vec![v.clone()])
                .collect();
            if let Some(c) = cap {
                paths.truncate(c as usize);
            }
            for nodes in net.decompose() {
                // nodes: a_out, x_in, x_out, ..., b_in
                let mut p = Vec::new();
                for (k, &x) in nodes.iter().enumerate() {
                    if x % 2 == 1 || k + 1 == nodes.len() {
                        p.push(g.id_at(x / 2).clone());
                    }
                }
                paths.push(p);
            }
            if let Some(c) = cap {
                paths.truncate(c as usize);
            }
            PathSystem { mode, paths, terminals }
        }
        DisjointMode::EdgeDisjoint => {
            let mut net = Network::new(n);
            for i in 0..n {
                for &j in g.out_at(i) {
                    net.add(i, j, 1);
                }
            }
            for v in &a {
                net.add(net.src, g.idx(v).unwrap(), INF);
            }
            for v in &b {
                if !a.contains(v) {
                    net.add(g.idx(v).unwrap(), net.snk, INF);
                }
            }
            net.maxflow(cap);
            let mut paths: Vec<Vec<VertexId>> = a
                .iter()
                .filter(|v| b.contains(v))
                .map(|v| vec![v.clone()])
                .collect();
            for nodes in net.decompose() {
                // loop-erase so each path is a simple dipath
                let mut p: Vec<VertexId> = Vec::new();
                for &x in &nodes {
                    let v = g.id_at(x).clone();
                    if let Some(pos) = p.iter().position(|u| *u == v) {
                        p.truncate(pos);
                    }
                    p.push(v);
                }
                paths.push(p);
            }
            if let Some(c) = cap {
                paths.truncate(c as usize);
            }
            PathSystem { mode, paths, terminals }
        }
    }
}

/// Minimum vertex set whose removal destroys every source-target dipath,
/// with protected vertices excluded from candidacy (they keep infinite
/// capacity and may still carry paths). Returns the unique minimum cut
/// closest to the target side.
///
/// By Menger duality the separator size equals the maximum number of
/// source-target dipaths that pairwise share protected vertices only; both
/// endpoints count as cuttable unless protected.
pub fn min_vertex_separator(
    g: &LevelledDigraph,
    sources: &[VertexId],
    targets: &[VertexId],
    protected: &[VertexId],
) -> Result<SeparatorCertificate> {
    separator_impl(g, sources, targets, protected, CutSide::Target)
}

/// As [`min_vertex_separator`] but extracting the cut closest to the
/// source side, which is what the graded-sequence marching wants.
pub(crate) fn min_vertex_separator_source_side(
    g: &LevelledDigraph,
    sources: &[VertexId],
    targets: &[VertexId],
    protected: &[VertexId],
) -> Result<SeparatorCertificate> {
    separator_impl(g, sources, targets, protected, CutSide::Source)
}

enum CutSide {
    Source,
    Target,
}

fn separator_impl(
    g: &LevelledDigraph,
    sources: &[VertexId],
    targets: &[VertexId],
    protected: &[VertexId],
    side: CutSide,
) -> Result<SeparatorCertificate> {
    let a = dedupe(g, sources);
    let b = dedupe(g, targets);
    let prot: BTreeSet<usize> = protected.iter().filter_map(|v| g.idx(v)).collect();

    // Infeasible exactly when some source-target dipath runs entirely
    // through protected vertices.
    let keep: BTreeSet<VertexId> = prot.iter().map(|&i| g.id_at(i).clone()).collect();
    let removed: BTreeSet<VertexId> = g
        .vertices()
        .filter(|v| !keep.contains(v))
        .cloned()
        .collect();
    let core = g.without(&removed);
    let reach = reachable_set(&core, a.iter().filter(|v| core.contains(v)));
    if b.iter().any(|t| reach.contains(t)) {
        return Err(Error::Infeasible {
            reason: "every separator would need a protected vertex".into(),
            separator: Vec::new(),
        });
    }

    let n = g.vertex_count();
    let mut net = Network::new(2 * n);
    for i in 0..n {
        let c = if prot.contains(&i) { INF } else { 1 };
        net.add(vin(i), vout(i), c);
    }
    for i in 0..n {
        for &j in g.out_at(i) {
            net.add(vout(i), vin(j), INF);
        }
    }
    for v in &a {
        net.add(net.src, vin(g.idx(v).unwrap()), INF);
    }
    for v in &b {
        net.add(vout(g.idx(v).unwrap()), net.snk, INF);
    }
    let flow = net.maxflow(None);
    let separator: Vec<VertexId> = match side {
        CutSide::Source => {
            let reach = net.residual_reach();
            (0..n)
                .filter(|&i| reach[vin(i)] && !reach[vout(i)])
                .map(|i| g.id_at(i).clone())
                .collect()
        }
        CutSide::Target => {
            let reach = net.residual_reaches_snk();
            (0..n)
                .filter(|&i| !reach[vin(i)] && reach[vout(i)])
                .map(|i| g.id_at(i).clone())
                .collect()
        }
    };
    debug_assert_eq!(separator.len(), flow as usize);
    Ok(SeparatorCertificate { separator, sources: a, targets: b, flow_value: flow })
}

/// Maximum system of `v`-target dipaths pairwise meeting only in `v`,
/// capped at `t`. A result below `t` certifies that no fan of size `t`
/// exists in this truncation.
pub fn fan(g: &LevelledDigraph, v: &VertexId, targets: &[VertexId], t: u32) -> PathSystem {
    let b: Vec<VertexId> = dedupe(g, targets)
        .into_iter()
        .filter(|w| w != v)
        .collect();
    let terminals: BTreeSet<VertexId> =
        b.iter().cloned().chain(std::iter::once(v.clone())).collect();
    let Some(vi) = g.idx(v) else {
        return PathSystem { mode: DisjointMode::InternallyDisjoint, paths: vec![], terminals };
    };
    let n = g.vertex_count();
    let b_idx: BTreeSet<usize> = b.iter().filter_map(|w| g.idx(w)).collect();
    let mut net = Network::new(2 * n);
    for i in 0..n {
        if i != vi && !b_idx.contains(&i) {
            net.add(vin(i), vout(i), 1);
        }
    }
    for i in 0..n {
        for &j in g.out_at(i) {
            net.add(vout(i), vin(j), INF);
        }
    }
    net.add(net.src, vout(vi), INF);
    for w in &b {
        net.add(vin(g.idx(w).unwrap()), net.snk, 1);
    }
    net.maxflow(Some(t));
    let paths = net
        .decompose()
        .into_iter()
        .map(|nodes| {
            let mut p = Vec::new();
            for (k, &x) in nodes.iter().enumerate() {
                if x % 2 == 1 || k + 1 == nodes.len() {
                    p.push(g.id_at(x / 2).clone());
                }
            }
            p
        })
        .collect();
    PathSystem { mode: DisjointMode::InternallyDisjoint, paths, terminals }
}
