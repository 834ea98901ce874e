//! Finite levelled digraphs: the desk-scale stand-in for an infinite digraph.
//!
//! A [`LevelledDigraph`] is a truncation of a presented infinite digraph to
//! the levels `0..=depth`. Vertices and adjacency lists keep the emission
//! order of the generating presentation, so every search in the crate is
//! reproducible.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::presentation::EndDescriptor;

/// Identity of a vertex: a unique tag plus optional drawing coordinates.
/// Equality, ordering and hashing go by the tag alone; coordinates are
/// layout hints.
#[derive(Clone)]
pub struct VertexId {
    tag: String,
    coord: Option<Vec<i64>>,
}

impl PartialEq for VertexId {
    fn eq(&self, other: &Self) -> bool {
        self.tag == other.tag
    }
}

impl Eq for VertexId {}

impl PartialOrd for VertexId {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for VertexId {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.tag.cmp(&other.tag)
    }
}

impl std::hash::Hash for VertexId {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.tag.hash(state);
    }
}

impl VertexId {
    pub fn new(tag: impl Into<String>) -> Self {
        VertexId { tag: tag.into(), coord: None }
    }

    pub fn with_coord(tag: impl Into<String>, coord: Vec<i64>) -> Self {
        VertexId { tag: tag.into(), coord: Some(coord) }
    }

    pub fn tag(&self) -> &str {
        &self.tag
    }

    pub fn coord(&self) -> Option<&[i64]> {
        self.coord.as_deref()
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tag)
    }
}

impl fmt::Debug for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tag)
    }
}

impl serde::Serialize for VertexId {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.serialize_str(&self.tag)
    }
}

impl From<&str> for VertexId {
    fn from(tag: &str) -> Self {
        VertexId::new(tag)
    }
}

#[derive(Clone, Debug, PartialEq)]
struct Vertex {
    id: VertexId,
    level: u32,
}

/// A finite truncation of an infinite digraph, with a level map.
///
/// Immutable after construction; all operations on it are pure functions.
#[derive(Clone)]
pub struct LevelledDigraph {
    name: String,
    depth: u32,
    span: u32,
    verts: Vec<Vertex>,
    index: BTreeMap<String, usize>,
    out: Vec<Vec<usize>>,
    ends: Vec<EndDescriptor>,
}

impl PartialEq for LevelledDigraph {
    fn eq(&self, other: &Self) -> bool {
        // Vertex sequences and edge sets are compared; adjacency order is
        // a representation detail (reverse cannot preserve it), and end
        // descriptors hold closures.
        let edge_set = |g: &LevelledDigraph| -> BTreeSet<(usize, usize)> {
            g.out
                .iter()
                .enumerate()
                .flat_map(|(i, outs)| outs.iter().map(move |&j| (i, j)))
                .collect()
        };
        self.name == other.name
            && self.depth == other.depth
            && self.span == other.span
            && self.verts == other.verts
            && edge_set(self) == edge_set(other)
    }
}

impl fmt::Debug for LevelledDigraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "LevelledDigraph({}, depth={}, span={}, |V|={}, |E|={})",
            self.name,
            self.depth,
            self.span,
            self.vertex_count(),
            self.edge_count()
        )
    }
}

impl LevelledDigraph {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    /// Maximum `|level(u) - level(v)|` over the edges present at build time.
    pub fn span(&self) -> u32 {
        self.span
    }

    pub fn vertex_count(&self) -> usize {
        self.verts.len()
    }

    pub fn edge_count(&self) -> usize {
        self.out.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.verts.is_empty()
    }

    pub fn vertices(&self) -> impl Iterator<Item = &VertexId> {
        self.verts.iter().map(|v| &v.id)
    }

    pub fn contains(&self, v: &VertexId) -> bool {
        self.index.contains_key(v.tag())
    }

    pub fn level(&self, v: &VertexId) -> Option<u32> {
        self.idx(v).map(|i| self.verts[i].level)
    }

    pub fn out_neighbours(&self, v: &VertexId) -> Vec<&VertexId> {
        match self.idx(v) {
            Some(i) => self.out[i].iter().map(|&j| &self.verts[j].id).collect(),
            None => Vec::new(),
        }
    }

    pub fn contains_edge(&self, u: &VertexId, v: &VertexId) -> bool {
        match (self.idx(u), self.idx(v)) {
            (Some(i), Some(j)) => self.out[i].contains(&j),
            _ => false,
        }
    }

    pub fn edges(&self) -> impl Iterator<Item = (&VertexId, &VertexId)> {
        self.out.iter().enumerate().flat_map(move |(i, outs)| {
            outs.iter().map(move |&j| (&self.verts[i].id, &self.verts[j].id))
        })
    }

    /// Checks that consecutive entries are edges and no vertex repeats.
    pub fn is_dipath(&self, path: &[VertexId]) -> bool {
        if path.is_empty() {
            return false;
        }
        let mut seen = BTreeSet::new();
        for v in path {
            if !self.contains(v) || !seen.insert(v.clone()) {
                return false;
            }
        }
        path.windows(2).all(|w| self.contains_edge(&w[0], &w[1]))
    }

    /// First level of the frontier band, `depth - span + 1`.
    pub fn frontier_min_level(&self) -> u32 {
        (self.depth + 1).saturating_sub(self.span)
    }

    /// The band of vertices through which every deeper continuation must
    /// pass: all `v` with `level(v) >= depth - span + 1`.
    pub fn frontier(&self) -> Vec<VertexId> {
        let lo = self.frontier_min_level();
        self.verts
            .iter()
            .filter(|v| v.level >= lo)
            .map(|v| v.id.clone())
            .collect()
    }

    /// Same vertices and levels, every edge turned around. Declared ends
    /// swap their ray and anti-ray roles. An involution.
    pub fn reverse(&self) -> LevelledDigraph {
        let mut out = vec![Vec::new(); self.verts.len()];
        for (i, outs) in self.out.iter().enumerate() {
            for &j in outs {
                out[j].push(i);
            }
        }
        LevelledDigraph {
            name: self.name.clone(),
            depth: self.depth,
            span: self.span,
            verts: self.verts.clone(),
            index: self.index.clone(),
            out,
            ends: self.ends.iter().map(EndDescriptor::reversed).collect(),
        }
    }

    /// Induced subdigraph on the levels `0..=max_level`, with depth and span
    /// recomputed. This is what truncation coherence compares against.
    pub fn restrict_to_levels(&self, max_level: u32) -> LevelledDigraph {
        let keep: Vec<usize> = (0..self.verts.len())
            .filter(|&i| self.verts[i].level <= max_level)
            .collect();
        let mut remap = BTreeMap::new();
        for (new, &old) in keep.iter().enumerate() {
            remap.insert(old, new);
        }
        let verts: Vec<Vertex> = keep.iter().map(|&i| self.verts[i].clone()).collect();
        let mut out = vec![Vec::new(); verts.len()];
        let mut span = 0;
        for (&old, &new) in &remap {
            for &j in &self.out[old] {
                if let Some(&nj) = remap.get(&j) {
                    out[new].push(nj);
                    span = span.max(self.verts[old].level.abs_diff(self.verts[j].level));
                }
            }
        }
        let index = verts
            .iter()
            .enumerate()
            .map(|(i, v)| (v.id.tag().to_owned(), i))
            .collect();
        LevelledDigraph {
            name: self.name.clone(),
            depth: max_level,
            span,
            verts,
            index,
            out,
            ends: self.ends.clone(),
        }
    }

    /// Copy with the given vertices (and incident edges) removed. Depth and
    /// span are inherited so the frontier bands stay where they were.
    pub fn without(&self, removed: &BTreeSet<VertexId>) -> LevelledDigraph {
        let keep: Vec<usize> = (0..self.verts.len())
            .filter(|&i| !removed.contains(&self.verts[i].id))
            .collect();
        let mut remap = BTreeMap::new();
        for (new, &old) in keep.iter().enumerate() {
            remap.insert(old, new);
        }
        let verts: Vec<Vertex> = keep.iter().map(|&i| self.verts[i].clone()).collect();
        let mut out = vec![Vec::new(); verts.len()];
        for (&old, &new) in &remap {
            for &j in &self.out[old] {
                if let Some(&nj) = remap.get(&j) {
                    out[new].push(nj);
                }
            }
        }
        let index = verts
            .iter()
            .enumerate()
            .map(|(i, v)| (v.id.tag().to_owned(), i))
            .collect();
        LevelledDigraph {
            name: self.name.clone(),
            depth: self.depth,
            span: self.span,
            verts,
            index,
            out,
            ends: self.ends.clone(),
        }
    }

    /// Copy keeping the vertices and edges the predicates accept. Depth
    /// and span are inherited.
    pub fn filtered(
        &self,
        keep_vertex: impl Fn(&VertexId) -> bool,
        keep_edge: impl Fn(&VertexId, &VertexId) -> bool,
    ) -> LevelledDigraph {
        let keep: Vec<usize> = (0..self.verts.len())
            .filter(|&i| keep_vertex(&self.verts[i].id))
            .collect();
        let mut remap = BTreeMap::new();
        for (new, &old) in keep.iter().enumerate() {
            remap.insert(old, new);
        }
        let verts: Vec<Vertex> = keep.iter().map(|&i| self.verts[i].clone()).collect();
        let mut out = vec![Vec::new(); verts.len()];
        for (&old, &new) in &remap {
            for &j in &self.out[old] {
                if let Some(&nj) = remap.get(&j) {
                    if keep_edge(&self.verts[old].id, &self.verts[j].id) {
                        out[new].push(nj);
                    }
                }
            }
        }
        let index = verts
            .iter()
            .enumerate()
            .map(|(i, v)| (v.id.tag().to_owned(), i))
            .collect();
        LevelledDigraph {
            name: self.name.clone(),
            depth: self.depth,
            span: self.span,
            verts,
            index,
            out,
            ends: self.ends.clone(),
        }
    }

    pub fn ends(&self) -> &[EndDescriptor] {
        &self.ends
    }

    pub fn end(&self, name: &str) -> Result<&EndDescriptor> {
        self.ends
            .iter()
            .find(|e| e.name() == name)
            .ok_or_else(|| Error::UnknownEnd(name.to_owned()))
    }

    /// True if the underlying undirected graph is connected (empty counts
    /// as connected).
    pub fn is_weakly_connected(&self) -> bool {
        if self.verts.is_empty() {
            return true;
        }
        let mut undirected = vec![Vec::new(); self.verts.len()];
        for (i, outs) in self.out.iter().enumerate() {
            for &j in outs {
                undirected[i].push(j);
                undirected[j].push(i);
            }
        }
        let mut seen = vec![false; self.verts.len()];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(i) = stack.pop() {
            for &j in &undirected[i] {
                if !seen[j] {
                    seen[j] = true;
                    count += 1;
                    stack.push(j);
                }
            }
        }
        count == self.verts.len()
    }

    // ---- index-level access for the flow and search machinery ----

    pub(crate) fn idx(&self, v: &VertexId) -> Option<usize> {
        self.index.get(v.tag()).copied()
    }

    pub(crate) fn id_at(&self, i: usize) -> &VertexId {
        &self.verts[i].id
    }

    pub(crate) fn level_at(&self, i: usize) -> u32 {
        self.verts[i].level
    }

    pub(crate) fn out_at(&self, i: usize) -> &[usize] {
        &self.out[i]
    }
}

/// Incremental construction with the validation every digraph must pass:
/// unique vertices, endpoints declared, no self-loops, no parallel edges,
/// levels within depth.
pub struct DigraphBuilder {
    name: String,
    depth: u32,
    verts: Vec<Vertex>,
    index: BTreeMap<String, usize>,
    out: Vec<Vec<usize>>,
    edge_set: BTreeSet<(usize, usize)>,
    ends: Vec<EndDescriptor>,
}

impl DigraphBuilder {
    pub fn new(name: impl Into<String>, depth: u32) -> Self {
        DigraphBuilder {
            name: name.into(),
            depth,
            verts: Vec::new(),
            index: BTreeMap::new(),
            out: Vec::new(),
            edge_set: BTreeSet::new(),
            ends: Vec::new(),
        }
    }

    pub fn add_vertex(&mut self, id: VertexId, level: u32) -> Result<()> {
        if level > self.depth {
            return Err(Error::LevelViolation(format!(
                "vertex {} has level {} above depth {}",
                id, level, self.depth
            )));
        }
        if self.index.contains_key(id.tag()) {
            return Err(Error::MalformedDigraph(format!("duplicate vertex {id}")));
        }
        self.index.insert(id.tag().to_owned(), self.verts.len());
        self.verts.push(Vertex { id, level });
        self.out.push(Vec::new());
        Ok(())
    }

    pub fn add_edge(&mut self, from: &VertexId, to: &VertexId) -> Result<()> {
        let i = self
            .index
            .get(from.tag())
            .copied()
            .ok_or_else(|| Error::DanglingEndpoint(format!("{from} -> {to}: {from} undeclared")))?;
        let j = self
            .index
            .get(to.tag())
            .copied()
            .ok_or_else(|| Error::DanglingEndpoint(format!("{from} -> {to}: {to} undeclared")))?;
        if i == j {
            return Err(Error::MalformedDigraph(format!("self-loop at {from}")));
        }
        if !self.edge_set.insert((i, j)) {
            return Err(Error::MalformedDigraph(format!("parallel edge {from} -> {to}")));
        }
        self.out[i].push(j);
        Ok(())
    }

    pub fn has_vertex(&self, id: &VertexId) -> bool {
        self.index.contains_key(id.tag())
    }

    pub fn set_ends(&mut self, ends: Vec<EndDescriptor>) {
        self.ends = ends;
    }

    pub fn finish(self) -> LevelledDigraph {
        let mut span = 0;
        for (i, outs) in self.out.iter().enumerate() {
            for &j in outs {
                span = span.max(self.verts[i].level.abs_diff(self.verts[j].level));
            }
        }
        LevelledDigraph {
            name: self.name,
            depth: self.depth,
            span,
            verts: self.verts,
            index: self.index,
            out: self.out,
            ends: self.ends,
        }
    }
}

/// Test/demo helper: vertices `v0..v{n-1}` all on level 0, plus the listed
/// edges. Level structure plays no role for the pure flow machinery.
pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> LevelledDigraph {
    let mut b = DigraphBuilder::new("adhoc", 0);
    for i in 0..n {
        b.add_vertex(VertexId::new(format!("v{i}")), 0).unwrap();
    }
    for &(u, v) in edges {
        b.add_edge(&VertexId::new(format!("v{u}")), &VertexId::new(format!("v{v}")))
            .unwrap();
    }
    b.finish()
}
