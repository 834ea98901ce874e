//! The inductive step growing a family of n pairwise disjoint ray
//! prefixes to n+1, rerouting each prefix through a Menger system into a
//! fresh disjoint family and keeping connector generations to a reference
//! ray.

use std::collections::BTreeSet;

use crate::digraph::{LevelledDigraph, VertexId};
use crate::ends::RayWitness;
use crate::error::{Error, Result};
use crate::flow::{self, DisjointMode};

/// Growing family of disjoint ray prefixes. Each prefix ends at its
/// checkpoint; the connector generations record, round by round, the
/// dipaths linking the reference ray to and from the newly added
/// segments.
#[derive(Clone, Debug, Default)]
pub struct RayFamilyState {
    prefixes: Vec<Vec<VertexId>>,
    generations: Vec<Vec<Vec<VertexId>>>,
}

impl RayFamilyState {
    pub fn empty() -> Self {
        RayFamilyState::default()
    }

    pub fn len(&self) -> usize {
        self.prefixes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prefixes.is_empty()
    }

    pub fn prefixes(&self) -> &[Vec<VertexId>] {
        &self.prefixes
    }

    pub fn checkpoints(&self) -> Vec<&VertexId> {
        self.prefixes.iter().map(|p| p.last().unwrap()).collect()
    }

    pub fn generations(&self) -> &[Vec<Vec<VertexId>>] {
        &self.generations
    }

    /// Re-checks every invariant: prefixes are pairwise disjoint dipaths,
    /// and each connector generation avoids all earlier ones.
    pub fn validate(&self, g: &LevelledDigraph) -> Result<()> {
        let mut seen: BTreeSet<&VertexId> = BTreeSet::new();
        for p in &self.prefixes {
            if !g.is_dipath(p) {
                return Err(Error::MalformedDigraph(format!("prefix not a dipath: {p:?}")));
            }
            for v in p {
                if !seen.insert(v) {
                    return Err(Error::MalformedDigraph(format!("prefixes share {v}")));
                }
            }
        }
        let mut earlier: BTreeSet<&VertexId> = BTreeSet::new();
        for (round, generation) in self.generations.iter().enumerate() {
            for c in generation {
                if !g.is_dipath(c) {
                    return Err(Error::MalformedDigraph(format!(
                        "connector not a dipath: {c:?}"
                    )));
                }
                if let Some(v) = c.iter().find(|v| earlier.contains(*v)) {
                    return Err(Error::MalformedDigraph(format!(
                        "round-{} connector reuses {v} from an earlier generation",
                        round + 1
                    )));
                }
            }
            for c in generation {
                earlier.extend(c.iter());
            }
        }
        Ok(())
    }
}

/// Where on a fresh witness its checkpoint sits: a quarter of the way in,
/// leaving the rest of the witness as riding room for later rounds.
fn checkpoint_index(len: usize) -> usize {
    (len / 4).clamp(if len > 1 { 1 } else { 0 }, len - 1)
}

fn bfs_dipath(
    g: &LevelledDigraph,
    sources: &BTreeSet<VertexId>,
    targets: &BTreeSet<VertexId>,
    forbidden: &BTreeSet<VertexId>,
) -> Option<Vec<VertexId>> {
    let mut parent: Vec<Option<usize>> = vec![None; g.vertex_count()];
    let mut seen = vec![false; g.vertex_count()];
    let mut queue = std::collections::VecDeque::new();
    for v in g.vertices() {
        if sources.contains(v) && !forbidden.contains(v) {
            let i = g.idx(v).unwrap();
            seen[i] = true;
            queue.push_back(i);
        }
    }
    let mut hit = None;
    'outer: while let Some(i) = queue.pop_front() {
        if targets.contains(g.id_at(i)) {
            hit = Some(i);
            break 'outer;
        }
        for &j in g.out_at(i) {
            if !seen[j] && !forbidden.contains(g.id_at(j)) {
                seen[j] = true;
                parent[j] = Some(i);
                queue.push_back(j);
            }
        }
    }
    let mut i = hit?;
    let mut path = vec![g.id_at(i).clone()];
    while let Some(p) = parent[i] {
        path.push(g.id_at(p).clone());
        i = p;
    }
    path.reverse();
    Some(path)
}

/// One inductive round: given n disjoint prefixes, n+1 fresh disjoint
/// frontier witnesses and a reference ray, reroutes every prefix through a
/// Menger system of disjoint connectors into the fresh family and adopts
/// the leftover witness as the (n+1)-st prefix. Each old prefix becomes a
/// proper starting subdipath of its extension, and the new connector
/// generation avoids all earlier generations.
pub fn extend_ray_family(
    g: &LevelledDigraph,
    state: &RayFamilyState,
    fresh: &[RayWitness],
    reference_ray: &[VertexId],
) -> Result<RayFamilyState> {
    let n = state.len();
    if fresh.len() != n + 1 {
        return Err(Error::Precondition(format!(
            "need {} fresh witnesses for a family of {n}, got {}",
            n + 1,
            fresh.len()
        )));
    }
    state.validate(g)?;
    if !g.is_dipath(reference_ray) {
        return Err(Error::Precondition("reference ray is not a dipath".into()));
    }
    let prefix_vertices: BTreeSet<VertexId> =
        state.prefixes.iter().flatten().cloned().collect();
    let mut fresh_vertices: BTreeSet<VertexId> = BTreeSet::new();
    for w in fresh {
        w.validate(g)?;
        for v in &w.path {
            if prefix_vertices.contains(v) {
                return Err(Error::Precondition(format!(
                    "fresh witness touches the existing family at {v}"
                )));
            }
            if !fresh_vertices.insert(v.clone()) {
                return Err(Error::Precondition(format!("fresh witnesses share {v}")));
            }
        }
    }

    let checkpoints: Vec<VertexId> = state.checkpoints().into_iter().cloned().collect();
    let ys: Vec<VertexId> = fresh
        .iter()
        .map(|w| w.path[checkpoint_index(w.path.len())].clone())
        .collect();
    let y_set: BTreeSet<VertexId> = ys.iter().cloned().collect();

    let mut new_prefixes: Vec<Vec<VertexId>>;
    let leftover: usize;
    let mut reroute_used: BTreeSet<VertexId> = BTreeSet::new();
    if n == 0 {
        new_prefixes = Vec::new();
        leftover = 0;
    } else {
        // Menger network: drop prefix interiors and the fresh vertices
        // beyond the checkpoints; connectors may ride the early witness
        // segments but stop dead at the checkpoints, whose out-edges are
        // removed.
        let interior: BTreeSet<VertexId> = prefix_vertices
            .iter()
            .filter(|v| !checkpoints.contains(v))
            .cloned()
            .collect();
        let beyond: BTreeSet<VertexId> = fresh
            .iter()
            .flat_map(|w| w.path[checkpoint_index(w.path.len()) + 1..].iter())
            .cloned()
            .collect();
        let h = g.filtered(
            |v| !interior.contains(v) && !beyond.contains(v),
            |u, _| !y_set.contains(u),
        );
        let sys = flow::max_disjoint_dipaths(&h, &checkpoints, &ys, DisjointMode::VertexDisjoint);
        if sys.len() < n {
            let cert = flow::min_vertex_separator(&h, &checkpoints, &ys, &[])?;
            return Err(Error::Infeasible {
                reason: format!(
                    "only {} disjoint checkpoint-to-witness dipaths, need {n}",
                    sys.len()
                ),
                separator: cert.separator,
            });
        }
        let mut matched: Vec<Option<Vec<VertexId>>> = vec![None; n];
        let mut used_y: BTreeSet<VertexId> = BTreeSet::new();
        for p in &sys.paths {
            let i = checkpoints
                .iter()
                .position(|c| c == &p[0])
                .expect("path starts at a checkpoint");
            used_y.insert(p.last().unwrap().clone());
            matched[i] = Some(p.clone());
            reroute_used.extend(p.iter().cloned());
        }
        new_prefixes = Vec::with_capacity(n + 1);
        for (i, m) in matched.into_iter().enumerate() {
            let reroute = m.expect("flow saturates every checkpoint");
            let mut p = state.prefixes[i].clone();
            p.extend(reroute[1..].iter().cloned());
            new_prefixes.push(p);
        }
        leftover = ys
            .iter()
            .position(|y| !used_y.contains(y))
            .expect("one witness stays unmatched");
    }
    // the adopted witness is trimmed to the tail segment the reroutes left
    // untouched, ending at its checkpoint
    let w = &fresh[leftover];
    let y_idx = checkpoint_index(w.path.len());
    let start = (0..=y_idx)
        .rev()
        .find(|&s| reroute_used.contains(&w.path[s]))
        .map_or(0, |s| s + 1);
    new_prefixes.push(w.path[start..=y_idx].to_vec());

    // connectors to and from the reference ray for every new segment,
    // avoiding every earlier generation
    let forbidden: BTreeSet<VertexId> = state
        .generations
        .iter()
        .flatten()
        .flatten()
        .cloned()
        .collect();
    let reference: BTreeSet<VertexId> = reference_ray.iter().cloned().collect();
    let mut generation = Vec::new();
    for (i, p) in new_prefixes.iter().enumerate() {
        let old_len = if i < n { state.prefixes[i].len() } else { 0 };
        let segment: BTreeSet<VertexId> = p[old_len.saturating_sub(1)..].iter().cloned().collect();
        for (from, to) in [(&reference, &segment), (&segment, &reference)] {
            let c = bfs_dipath(g, from, to, &forbidden).ok_or_else(|| {
                Error::Precondition(format!(
                    "no connector between the reference ray and prefix {} avoiding \
                     earlier generations",
                    i + 1
                ))
            })?;
            generation.push(c);
        }
    }

    let mut generations = state.generations.clone();
    generations.push(generation);
    let out = RayFamilyState { prefixes: new_prefixes, generations };
    out.validate(g)?;
    for (i, old) in state.prefixes.iter().enumerate() {
        let new = &out.prefixes[i];
        if new.len() <= old.len() || new[..old.len()] != old[..] {
            return Err(Error::MalformedDigraph(format!(
                "prefix {} did not properly extend",
                i + 1
            )));
        }
    }
    Ok(out)
}
