//! Rotation systems and face tracing: verifying a claimed planar embedding
//! through the Euler relation V - E + F = 2.

use std::collections::BTreeMap;

use crate::digraph::{LevelledDigraph, VertexId};
use crate::error::{Error, Result};
use crate::families;

/// Combinatorial embedding: for every vertex, the counterclockwise cyclic
/// order of its neighbours along incident edges (direction ignored).
#[derive(Clone, Debug, Default)]
pub struct RotationSystem {
    order: BTreeMap<VertexId, Vec<VertexId>>,
}

impl RotationSystem {
    pub fn insert(&mut self, v: VertexId, neighbours: Vec<VertexId>) {
        self.order.insert(v, neighbours);
    }

    pub fn neighbours(&self, v: &VertexId) -> Option<&[VertexId]> {
        self.order.get(v).map(Vec::as_slice)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EulerReport {
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub connected: bool,
}

impl EulerReport {
    /// V - E + F = 2 on a connected embedding characterises genus zero.
    pub fn is_planar(&self) -> bool {
        self.connected
            && self.vertices as i64 - self.edges as i64 + self.faces as i64 == 2
    }
}

/// Traces the faces of the rotation system and evaluates the Euler
/// relation. The rotation must list every incident edge of every vertex
/// exactly once, and the underlying undirected graph must be simple.
pub fn euler_check(g: &LevelledDigraph, rot: &RotationSystem) -> Result<EulerReport> {
    // undirected dart table
    let mut darts: Vec<(VertexId, VertexId)> = Vec::new();
    let mut dart_index: BTreeMap<(VertexId, VertexId), usize> = BTreeMap::new();
    for (u, v) in g.edges() {
        if dart_index.contains_key(&(u.clone(), v.clone())) {
            return Err(Error::MalformedDigraph(format!(
                "undirected pair {u} - {v} doubled; rotation tracing needs a simple graph"
            )));
        }
        for (a, b) in [(u.clone(), v.clone()), (v.clone(), u.clone())] {
            dart_index.insert((a.clone(), b.clone()), darts.len());
            darts.push((a, b));
        }
    }
    // validate the rotation against the incidence lists
    let mut incident: BTreeMap<&VertexId, Vec<VertexId>> =
        g.vertices().map(|v| (v, Vec::new())).collect();
    for (a, b) in &darts {
        incident.get_mut(a).unwrap().push(b.clone());
    }
    for v in g.vertices() {
        let listed = rot
            .neighbours(v)
            .ok_or_else(|| Error::MalformedDigraph(format!("rotation misses vertex {v}")))?;
        let mut want = incident[v].clone();
        let mut have = listed.to_vec();
        want.sort();
        have.sort();
        if want != have {
            return Err(Error::MalformedDigraph(format!(
                "rotation at {v} lists {have:?}, incidence is {want:?}"
            )));
        }
    }

    // face tracing: the successor of dart (u -> v) is the dart from v to
    // the rotation successor of u around v
    let mut seen = vec![false; darts.len()];
    let mut faces = 0;
    for start in 0..darts.len() {
        if seen[start] {
            continue;
        }
        faces += 1;
        let mut d = start;
        while !seen[d] {
            seen[d] = true;
            let (u, v) = darts[d].clone();
            let around = rot.neighbours(&v).unwrap();
            let pos = around.iter().position(|w| *w == u).unwrap();
            let next = &around[(pos + 1) % around.len()];
            d = dart_index[&(v.clone(), next.clone())];
        }
    }
    Ok(EulerReport {
        vertices: g.vertex_count(),
        edges: g.edge_count(),
        faces,
        connected: g.is_weakly_connected(),
    })
}

/// The rotation system of the counterexample truncation, read off its
/// planar drawing: around every vertex, counterclockwise, the ray-out
/// edge, then the outgoing down or diagonal edge, then the ray-in edge,
/// then the incoming down or diagonal edge.
pub fn counterexample_rotation(g: &LevelledDigraph) -> RotationSystem {
    let parse = |v: &VertexId| -> (u32, u32) {
        let rest = v.tag().strip_prefix('x').unwrap();
        let (i, k) = rest.split_once('_').unwrap();
        (i.parse().unwrap(), k.parse().unwrap())
    };
    let rev = g.reverse();
    let mut rot = RotationSystem::default();
    for v in g.vertices() {
        let (i, k) = parse(v);
        let mut ray_out = None;
        let mut side_out = None;
        for w in g.out_neighbours(v) {
            let (wi, wk) = parse(w);
            if wi == i && wk == k + 1 {
                ray_out = Some(w.clone());
            } else {
                side_out = Some(w.clone());
            }
        }
        let mut ray_in = None;
        let mut side_in = None;
        for w in rev.out_neighbours(v) {
            let (wi, wk) = parse(w);
            if wi == i && wk + 1 == k {
                ray_in = Some(w.clone());
            } else {
                side_in = Some(w.clone());
            }
        }
        let order: Vec<VertexId> =
            [ray_out, side_out, ray_in, side_in].into_iter().flatten().collect();
        rot.insert(v.clone(), order);
    }
    rot
}

/// Convenience: Euler check of the counterexample at a given depth.
pub fn counterexample_euler(depth: u32) -> Result<EulerReport> {
    let g = crate::presentation::truncate(&families::counterexample(), depth)?;
    euler_check(&g, &counterexample_rotation(&g))
}
