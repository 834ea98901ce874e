//! Finite-scale semantics of rays, anti-rays, end equivalence, domination
//! and degrees.
//!
//! "Lies in the end" is approximated by two-way linkage: a vertex of the
//! top two frontier bands belongs to the end's consistency region when it
//! reaches, and is reached from, the end's declared anchor rays inside
//! those bands. Every estimate here is a threshold certificate: a value of
//! `>= t` at depth `n` says nothing beyond the window.

use std::collections::BTreeSet;

use crate::digraph::{LevelledDigraph, VertexId};
use crate::error::{Error, Result};
use crate::flow::{self, DisjointMode, PathSystem};
use crate::presentation::EndDescriptor;

/// A count that may have been cut off by the caller's threshold.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Estimate {
    /// The flow ran to completion below the threshold.
    Exact(u32),
    /// The search stopped at the threshold; the true value is at least this.
    AtLeast(u32),
}

impl serde::Serialize for Estimate {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = ser.serialize_struct("Estimate", 2)?;
        s.serialize_field("value", &self.value())?;
        s.serialize_field("exact", &self.is_exact())?;
        s.end()
    }
}

impl Estimate {
    pub fn value(&self) -> u32 {
        match *self {
            Estimate::Exact(v) | Estimate::AtLeast(v) => v,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Estimate::Exact(_))
    }

    pub fn add_exact(&self, k: u32) -> Estimate {
        match *self {
            Estimate::Exact(v) => Estimate::Exact(v + k),
            Estimate::AtLeast(v) => Estimate::AtLeast(v + k),
        }
    }
}

impl std::fmt::Display for Estimate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Estimate::Exact(v) => write!(f, "{v}"),
            Estimate::AtLeast(v) => write!(f, ">={v}"),
        }
    }
}

/// A finite stand-in for a ray or anti-ray: a dipath touching the frontier
/// with its far end.
#[derive(Clone, Debug, PartialEq)]
pub struct RayWitness {
    pub path: Vec<VertexId>,
    pub kind: WitnessKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WitnessKind {
    Ray,
    AntiRay,
}

impl RayWitness {
    pub fn validate(&self, g: &LevelledDigraph) -> Result<()> {
        if !g.is_dipath(&self.path) {
            return Err(Error::MalformedDigraph(format!("witness not a dipath: {:?}", self.path)));
        }
        let frontier: BTreeSet<VertexId> = g.frontier().into_iter().collect();
        let anchor = match self.kind {
            WitnessKind::Ray => self.path.last().unwrap(),
            WitnessKind::AntiRay => self.path.first().unwrap(),
        };
        if !frontier.contains(anchor) {
            return Err(Error::MalformedDigraph(format!(
                "witness endpoint {anchor} misses the frontier"
            )));
        }
        Ok(())
    }
}

/// Depth-first enumeration (adjacency order) of dipaths from `start` to
/// the frontier, up to `limit` of them. Deterministic.
pub fn ray_witnesses(g: &LevelledDigraph, start: &[VertexId], limit: usize) -> Vec<RayWitness> {
    enumerate_paths(g, start, limit, |p| p)
        .into_iter()
        .map(|path| RayWitness { path, kind: WitnessKind::Ray })
        .collect()
}

/// Anti-ray witnesses: ray witnesses of the reversed digraph, stored in
/// forward edge orientation so the frontier vertex comes first.
pub fn antiray_witnesses(
    g: &LevelledDigraph,
    start: &[VertexId],
    limit: usize,
) -> Vec<RayWitness> {
    let rev = g.reverse();
    enumerate_paths(&rev, start, limit, |mut p: Vec<VertexId>| {
        p.reverse();
        p
    })
    .into_iter()
    .map(|path| RayWitness { path, kind: WitnessKind::AntiRay })
    .collect()
}

fn enumerate_paths(
    g: &LevelledDigraph,
    start: &[VertexId],
    limit: usize,
    finish: impl Fn(Vec<VertexId>) -> Vec<VertexId>,
) -> Vec<Vec<VertexId>> {
    let frontier_lo = g.frontier_min_level();
    let mut out = Vec::new();
    let mut budget: usize = limit.saturating_mul(200).max(20_000);
    let mut seen_start = BTreeSet::new();
    for s in start {
        if out.len() >= limit || budget == 0 {
            break;
        }
        let Some(si) = g.idx(s) else { continue };
        if !seen_start.insert(si) {
            continue;
        }
        // iterative DFS over simple paths
        let mut on_path = vec![false; g.vertex_count()];
        let mut stack: Vec<(usize, usize)> = vec![(si, 0)];
        on_path[si] = true;
        let mut path = vec![si];
        if g.level_at(si) >= frontier_lo {
            out.push(finish(path.iter().map(|&i| g.id_at(i).clone()).collect()));
        }
        while let Some(&mut (u, ref mut k)) = stack.last_mut() {
            if out.len() >= limit || budget == 0 {
                break;
            }
            budget = budget.saturating_sub(1);
            if *k < g.out_at(u).len() {
                let v = g.out_at(u)[*k];
                *k += 1;
                if !on_path[v] {
                    on_path[v] = true;
                    path.push(v);
                    stack.push((v, 0));
                    if g.level_at(v) >= frontier_lo {
                        out.push(finish(path.iter().map(|&i| g.id_at(i).clone()).collect()));
                    }
                }
            } else {
                stack.pop();
                on_path[u] = false;
                path.pop();
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// end consistency and degree estimation
// ---------------------------------------------------------------------------

/// Everything the degree machinery derives from one truncation and one end.
pub(crate) struct EndScope {
    /// Vertices two-way linked to the end's anchors inside the top two
    /// frontier bands.
    pub region: BTreeSet<VertexId>,
    /// Frontier vertices inside the region: admissible witness endpoints.
    pub targets: Vec<VertexId>,
    /// Witness sources: the end's anchor starts followed by every
    /// vertex of the seed band.
    pub seeds: Vec<VertexId>,
}

fn effective_span(g: &LevelledDigraph) -> u32 {
    g.span().max(1)
}

/// Builds the consistency region for the given anchor vertices: two-way
/// reachability with the anchor set inside the induced top-two-band
/// subgraph.
pub(crate) fn end_scope(g: &LevelledDigraph, end: &EndDescriptor) -> EndScope {
    let span = effective_span(g);
    let h_floor = (g.depth() + 1).saturating_sub(2 * span);
    let anchors: Vec<VertexId> = end
        .ray_vertices(g)
        .into_iter()
        .chain(end.antiray_vertices(g))
        .filter(|v| g.level(v).is_some_and(|l| l >= h_floor))
        .collect();

    let in_band: Vec<usize> = (0..g.vertex_count())
        .filter(|&i| g.level_at(i) >= h_floor)
        .collect();
    let band: BTreeSet<usize> = in_band.iter().copied().collect();

    let forward = band_reach(g, &band, &anchors, false);
    let backward = band_reach(g, &band, &anchors, true);
    let region: BTreeSet<VertexId> = in_band
        .iter()
        .filter(|i| forward.contains(i) && backward.contains(i))
        .map(|&i| g.id_at(i).clone())
        .collect();

    let frontier_lo = g.frontier_min_level();
    let targets: Vec<VertexId> = g
        .vertices()
        .filter(|v| g.level(v).unwrap() >= frontier_lo && region.contains(*v))
        .cloned()
        .collect();

    let ray_first = (0..=g.depth())
        .find(|&l| end.canonical_ray(l).is_some_and(|v| g.contains(&v)))
        .unwrap_or(0);
    let seed_max = g.depth().saturating_sub(2 * span).max(ray_first);
    // the end's own anchor starts lead the seed band, so witness searches
    // and flows root themselves on the declared rays first
    let mut seeds: Vec<VertexId> = Vec::new();
    if let Some(v) = end.ray_vertices(g).into_iter().next() {
        seeds.push(v);
    }
    if let Some(v) = end.antiray_vertices(g).into_iter().next() {
        seeds.push(v);
    }
    seeds.extend(
        g.vertices()
            .filter(|v| g.level(v).unwrap() <= seed_max)
            .cloned(),
    );

    EndScope { region, targets, seeds }
}

/// Reachability to (`back = false`: from) the anchor set inside a band.
fn band_reach(
    g: &LevelledDigraph,
    band: &BTreeSet<usize>,
    anchors: &[VertexId],
    forward_of_anchors: bool,
) -> BTreeSet<usize> {
    // forward_of_anchors: vertices the anchors reach; otherwise vertices
    // reaching the anchors (search the reversed adjacency).
    let mut adj = vec![Vec::new(); g.vertex_count()];
    for &i in band {
        for &j in g.out_at(i) {
            if band.contains(&j) {
                if forward_of_anchors {
                    adj[i].push(j);
                } else {
                    adj[j].push(i);
                }
            }
        }
    }
    let mut seen = BTreeSet::new();
    let mut stack: Vec<usize> = anchors
        .iter()
        .filter_map(|v| g.idx(v))
        .filter(|i| band.contains(i))
        .collect();
    for &i in &stack {
        seen.insert(i);
    }
    while let Some(i) = stack.pop() {
        for &j in &adj[i] {
            if seen.insert(j) {
                stack.push(j);
            }
        }
    }
    seen
}

pub(crate) struct DegreeFlow {
    pub estimate: Estimate,
    pub witnesses: PathSystem,
    pub scope: EndScope,
}

pub(crate) fn in_degree_flow(
    g: &LevelledDigraph,
    end: &EndDescriptor,
    t: u32,
) -> Result<DegreeFlow> {
    let t = t.max(1);
    if !end.has_ray() || end.ray_vertices(g).is_empty() {
        return Ok(DegreeFlow {
            estimate: Estimate::Exact(0),
            witnesses: PathSystem {
                mode: DisjointMode::VertexDisjoint,
                paths: vec![],
                terminals: BTreeSet::new(),
            },
            scope: EndScope {
                region: BTreeSet::new(),
                targets: vec![],
                seeds: vec![],
            },
        });
    }
    let scope = end_scope(g, end);
    let sys = flow::max_disjoint_capped(
        g,
        &scope.seeds,
        &scope.targets,
        DisjointMode::VertexDisjoint,
        Some(t),
    );
    let n = sys.len() as u32;
    let estimate = if n >= t { Estimate::AtLeast(t) } else { Estimate::Exact(n) };
    Ok(DegreeFlow { estimate, witnesses: sys, scope })
}

/// Maximum number (capped at `t`) of pairwise vertex-disjoint,
/// end-consistent dipaths from the seed band to the frontier: the
/// truncation's estimate of the end's in-degree.
pub fn in_degree_estimate(g: &LevelledDigraph, end: &EndDescriptor, t: u32) -> Result<Estimate> {
    Ok(in_degree_flow(g, end, t)?.estimate)
}

/// In-degree of the reversed truncation at the reversed end: anti-ray
/// witnesses of `g`. Zero when the end declares no anti-ray.
pub fn out_degree_estimate(g: &LevelledDigraph, end: &EndDescriptor, t: u32) -> Result<Estimate> {
    in_degree_estimate(&g.reverse(), &end.reversed(), t)
}

/// Symmetric linkage degree of two dipaths: the smaller of the two maximum
/// disjoint connector counts, each capped at `t`. A value of `t` certifies
/// equivalence at this threshold and depth.
pub fn equivalence_degree(
    g: &LevelledDigraph,
    p: &[VertexId],
    q: &[VertexId],
    t: u32,
) -> u32 {
    let fwd = flow::max_disjoint_capped(g, p, q, DisjointMode::VertexDisjoint, Some(t));
    let bwd = flow::max_disjoint_capped(g, q, p, DisjointMode::VertexDisjoint, Some(t));
    (fwd.len() as u32).min(bwd.len() as u32)
}

/// `v` dominates the end at threshold `t` if a fan of `t` dipaths from `v`
/// to the canonical ray exists alongside a return dipath from the ray to
/// `v`. Positive answers are certificates; negative answers may flip at
/// greater depth.
pub fn dominates(g: &LevelledDigraph, v: &VertexId, end: &EndDescriptor, t: u32) -> Result<bool> {
    if !g.contains(v) {
        return Err(Error::Precondition(format!("vertex {v} not in digraph")));
    }
    let ray: Vec<VertexId> = end.ray_vertices(g);
    if ray.is_empty() {
        return Ok(false);
    }
    let fan = flow::fan(g, v, &ray, t);
    if (fan.len() as u32) < t {
        return Ok(false);
    }
    let reach = flow::reachable_set(g, ray.iter());
    Ok(reach.contains(v))
}

// ---------------------------------------------------------------------------
// star-comb dichotomy
// ---------------------------------------------------------------------------

/// Witness of the directed star-comb dichotomy rooted at a vertex.
#[derive(Clone, Debug)]
pub enum StarCombWitness {
    /// A subdivided out-star: `t` branches from the centre to distinct
    /// target vertices, pairwise meeting only at the centre.
    Star { centre: VertexId, branches: PathSystem, leaves: Vec<VertexId> },
    /// An out-comb: a spine dipath to the frontier with pairwise disjoint
    /// branches from distinct spine vertices into the target set.
    Comb { spine: Vec<VertexId>, branches: PathSystem, teeth: Vec<VertexId> },
}

impl StarCombWitness {
    pub fn validate(&self, g: &LevelledDigraph, targets: &[VertexId]) -> Result<()> {
        let tset: BTreeSet<&VertexId> = targets.iter().collect();
        match self {
            StarCombWitness::Star { centre, branches, leaves } => {
                branches.validate(g)?;
                for (b, leaf) in branches.paths.iter().zip(leaves) {
                    if b.first() != Some(centre) {
                        return Err(Error::MalformedDigraph("branch misses centre".into()));
                    }
                    if b.last() != Some(leaf) || !tset.contains(leaf) {
                        return Err(Error::MalformedDigraph("branch leaf not in target set".into()));
                    }
                }
                Ok(())
            }
            StarCombWitness::Comb { spine, branches, teeth } => {
                if !g.is_dipath(spine) {
                    return Err(Error::MalformedDigraph("spine not a dipath".into()));
                }
                let frontier: BTreeSet<VertexId> = g.frontier().into_iter().collect();
                if !frontier.contains(spine.last().unwrap()) {
                    return Err(Error::MalformedDigraph("spine misses the frontier".into()));
                }
                let spine_set: BTreeSet<&VertexId> = spine.iter().collect();
                let mut used: BTreeSet<&VertexId> = BTreeSet::new();
                let mut attach: BTreeSet<&VertexId> = BTreeSet::new();
                for (b, tooth) in branches.paths.iter().zip(teeth) {
                    if !g.is_dipath(b) {
                        return Err(Error::MalformedDigraph("branch not a dipath".into()));
                    }
                    if !spine_set.contains(&b[0]) || !attach.insert(&b[0]) {
                        return Err(Error::MalformedDigraph(
                            "branches must start at distinct spine vertices".into(),
                        ));
                    }
                    if b.last() != Some(tooth) || !tset.contains(tooth) {
                        return Err(Error::MalformedDigraph("tooth not in target set".into()));
                    }
                    for v in &b[1..] {
                        if spine_set.contains(v) {
                            return Err(Error::MalformedDigraph("branch re-enters spine".into()));
                        }
                    }
                    for v in b {
                        if !used.insert(v) {
                            return Err(Error::MalformedDigraph("branches overlap".into()));
                        }
                    }
                }
                Ok(())
            }
        }
    }

    pub fn tips(&self) -> &[VertexId] {
        match self {
            StarCombWitness::Star { leaves, .. } => leaves,
            StarCombWitness::Comb { teeth, .. } => teeth,
        }
    }
}

/// Runs the star-comb dichotomy from `x` against the target set `targets`:
/// grows a maximal out-arborescence depth-first in adjacency order, returns
/// a subdivided out-star if some vertex shoots `t` branches into the
/// targets, and otherwise extracts a spine to the frontier with `t`
/// branches from distinct spine vertices.
pub fn star_comb(
    g: &LevelledDigraph,
    x: &VertexId,
    targets: &[VertexId],
    t: u32,
) -> Result<StarCombWitness> {
    let t = t.max(1) as usize;
    let xi = g
        .idx(x)
        .ok_or_else(|| Error::Precondition(format!("root {x} not in digraph")))?;
    let tset: BTreeSet<usize> = targets.iter().filter_map(|v| g.idx(v)).collect();

    // depth-first spanning arborescence in adjacency order
    let n = g.vertex_count();
    let mut parent = vec![usize::MAX; n];
    let mut preorder = Vec::new();
    let mut visited = vec![false; n];
    let mut stack = vec![(xi, 0usize)];
    visited[xi] = true;
    preorder.push(xi);
    while let Some(&mut (u, ref mut k)) = stack.last_mut() {
        if *k < g.out_at(u).len() {
            let v = g.out_at(u)[*k];
            *k += 1;
            if !visited[v] {
                visited[v] = true;
                parent[v] = u;
                preorder.push(v);
                stack.push((v, 0));
            }
        } else {
            stack.pop();
        }
    }

    let reachable_targets = tset.iter().filter(|&&v| visited[v]).count();
    if reachable_targets < t {
        return Err(Error::InsufficientInput(format!(
            "only {reachable_targets} of the targets are reachable from {x}, need {t}"
        )));
    }

    // subtree target counts, children in adjacency order
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); n];
    for &v in &preorder {
        if parent[v] != usize::MAX {
            children[parent[v]].push(v);
        }
    }
    for c in &mut children {
        c.sort_by_key(|&v| preorder.iter().position(|&p| p == v));
    }
    let mut subtree_hits = vec![0usize; n];
    for &v in preorder.iter().rev() {
        if tset.contains(&v) {
            subtree_hits[v] += 1;
        }
        if parent[v] != usize::MAX {
            subtree_hits[parent[v]] += subtree_hits[v];
        }
    }

    // star: a vertex with t children subtrees hitting targets
    for &c in &preorder {
        let fertile: Vec<usize> = children[c]
            .iter()
            .copied()
            .filter(|&w| subtree_hits[w] > 0)
            .collect();
        if fertile.len() >= t {
            let mut branches = Vec::new();
            let mut leaves = Vec::new();
            for &w in fertile.iter().take(t) {
                let mut path = vec![c, w];
                let mut cur = w;
                while !tset.contains(&cur) {
                    cur = children[cur]
                        .iter()
                        .copied()
                        .find(|&z| subtree_hits[z] > 0)
                        .expect("fertile subtree contains a target");
                    path.push(cur);
                }
                leaves.push(g.id_at(cur).clone());
                branches.push(path.iter().map(|&i| g.id_at(i).clone()).collect());
            }
            let centre = g.id_at(c).clone();
            let terminals = std::iter::once(centre.clone()).collect();
            return Ok(StarCombWitness::Star {
                centre,
                branches: PathSystem {
                    mode: DisjointMode::InternallyDisjoint,
                    paths: branches,
                    terminals,
                },
                leaves,
            });
        }
    }

    // comb: spine to the first frontier vertex in preorder
    let frontier_lo = g.frontier_min_level();
    let spine_end = preorder
        .iter()
        .copied()
        .find(|&v| g.level_at(v) >= frontier_lo)
        .ok_or_else(|| {
            Error::InsufficientInput(format!("no frontier vertex reachable from {x}"))
        })?;
    let mut spine_idx = vec![spine_end];
    let mut cur = spine_end;
    while parent[cur] != usize::MAX {
        cur = parent[cur];
        spine_idx.push(cur);
    }
    spine_idx.reverse();
    let on_spine: BTreeSet<usize> = spine_idx.iter().copied().collect();

    let mut branches: Vec<Vec<VertexId>> = Vec::new();
    let mut teeth = Vec::new();
    for &v in &spine_idx {
        if branches.len() >= t {
            break;
        }
        if tset.contains(&v) {
            branches.push(vec![g.id_at(v).clone()]);
            teeth.push(g.id_at(v).clone());
            continue;
        }
        let side = children[v]
            .iter()
            .copied()
            .find(|w| !on_spine.contains(w) && subtree_hits[*w] > 0);
        if let Some(w) = side {
            let mut path = vec![v, w];
            let mut cur = w;
            while !tset.contains(&cur) {
                cur = children[cur]
                    .iter()
                    .copied()
                    .find(|&z| subtree_hits[z] > 0)
                    .expect("fertile subtree contains a target");
                path.push(cur);
            }
            teeth.push(g.id_at(cur).clone());
            branches.push(path.iter().map(|&i| g.id_at(i).clone()).collect());
        }
    }
    if branches.len() < t {
        return Err(Error::InsufficientInput(format!(
            "dichotomy found only {} comb branches at threshold {t}",
            branches.len()
        )));
    }
    Ok(StarCombWitness::Comb {
        spine: spine_idx.iter().map(|&i| g.id_at(i).clone()).collect(),
        branches: PathSystem {
            mode: DisjointMode::VertexDisjoint,
            paths: branches,
            terminals: BTreeSet::new(),
        },
        teeth,
    })
}
