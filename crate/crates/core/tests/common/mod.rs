//! Shared brute-force oracles for the flow tests: exhaustive path-system
//! search and subset-enumeration separators, kept independent of the flow
//! implementation they check.

// each test binary compiles this module separately and uses its own slice
#![allow(dead_code)]
#![allow(clippy::too_many_arguments)]

use std::collections::BTreeSet;

use enddeg::digraph::{from_edges, DigraphBuilder, LevelledDigraph, VertexId};
use rand::rngs::StdRng;
use rand::Rng;

pub fn v(i: usize) -> VertexId {
    VertexId::new(format!("v{i}"))
}

/// Random simple digraph on up to `max_n` vertices with roughly `2.2`
/// edges per vertex.
pub fn random_digraph(rng: &mut StdRng, max_n: usize) -> (LevelledDigraph, usize) {
    let n = rng.gen_range(3..=max_n);
    let p = 2.2 / n as f64;
    let mut edges = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j && rng.gen_bool(p) {
                edges.push((i, j));
            }
        }
    }
    (from_edges(n, &edges), n)
}

/// Two disjoint non-empty vertex sets.
pub fn random_sides(rng: &mut StdRng, n: usize) -> (Vec<VertexId>, Vec<VertexId>) {
    loop {
        let mut a = Vec::new();
        let mut b = Vec::new();
        for i in 0..n {
            match rng.gen_range(0..4) {
                0 => a.push(v(i)),
                1 => b.push(v(i)),
                _ => {}
            }
        }
        if !a.is_empty() && !b.is_empty() {
            return (a, b);
        }
    }
}

/// All simple dipaths from `a` to `b`. With `internal_avoid` set, interior
/// vertices may not touch `a` or `b`.
pub fn all_paths(
    g: &LevelledDigraph,
    a: &[VertexId],
    b: &[VertexId],
    internal_avoid: bool,
) -> Vec<Vec<VertexId>> {
    let aset: BTreeSet<&VertexId> = a.iter().collect();
    let bset: BTreeSet<&VertexId> = b.iter().collect();
    let mut out = Vec::new();
    for s in a {
        if !g.contains(s) {
            continue;
        }
        let mut path = vec![s.clone()];
        let mut on = BTreeSet::from([s.clone()]);
        dfs(g, &aset, &bset, internal_avoid, &mut path, &mut on, &mut out);
    }
    out.sort();
    out.dedup();
    out
}

fn dfs(
    g: &LevelledDigraph,
    a: &BTreeSet<&VertexId>,
    b: &BTreeSet<&VertexId>,
    internal_avoid: bool,
    path: &mut Vec<VertexId>,
    on: &mut BTreeSet<VertexId>,
    out: &mut Vec<Vec<VertexId>>,
) {
    let cur = path.last().unwrap().clone();
    if b.contains(&cur) {
        out.push(path.clone());
    }
    if internal_avoid && path.len() > 1 && (a.contains(&cur) || b.contains(&cur)) {
        // may not be crossed internally, so stop extending here
        return;
    }
    for w in g.out_neighbours(&cur) {
        if !on.contains(w) {
            let w = w.clone();
            on.insert(w.clone());
            path.push(w.clone());
            dfs(g, a, b, internal_avoid, path, on, out);
            path.pop();
            on.remove(&w);
        }
    }
}

#[derive(Clone, Copy, PartialEq)]
pub enum OracleMode {
    Vertex,
    Internal,
    Edge,
}

/// Exhaustive maximum disjoint subsystem over an explicit path list.
pub fn brute_max_disjoint(
    paths: &[Vec<VertexId>],
    mode: OracleMode,
    terminals: &BTreeSet<VertexId>,
) -> usize {
    fn compatible(
        p: &[VertexId],
        used_v: &BTreeSet<VertexId>,
        used_e: &BTreeSet<(VertexId, VertexId)>,
        mode: OracleMode,
        terminals: &BTreeSet<VertexId>,
    ) -> bool {
        match mode {
            OracleMode::Vertex => p.iter().all(|x| !used_v.contains(x)),
            OracleMode::Internal => p
                .iter()
                .all(|x| !used_v.contains(x) || terminals.contains(x)),
            OracleMode::Edge => p
                .windows(2)
                .all(|w| !used_e.contains(&(w[0].clone(), w[1].clone()))),
        }
    }
    fn go(
        paths: &[Vec<VertexId>],
        i: usize,
        used_v: &mut BTreeSet<VertexId>,
        used_e: &mut BTreeSet<(VertexId, VertexId)>,
        mode: OracleMode,
        terminals: &BTreeSet<VertexId>,
        best: &mut usize,
        current: usize,
    ) {
        *best = (*best).max(current);
        if i >= paths.len() || current + (paths.len() - i) <= *best {
            return;
        }
        // take paths[i] when possible
        if compatible(&paths[i], used_v, used_e, mode, terminals) {
            let added_v: Vec<VertexId> = paths[i]
                .iter()
                .filter(|x| !used_v.contains(*x))
                .cloned()
                .collect();
            let added_e: Vec<(VertexId, VertexId)> = paths[i]
                .windows(2)
                .map(|w| (w[0].clone(), w[1].clone()))
                .collect();
            used_v.extend(added_v.iter().cloned());
            used_e.extend(added_e.iter().cloned());
            go(paths, i + 1, used_v, used_e, mode, terminals, best, current + 1);
            for x in &added_v {
                used_v.remove(x);
            }
            for e in &added_e {
                used_e.remove(e);
            }
        }
        go(paths, i + 1, used_v, used_e, mode, terminals, best, current);
    }
    let mut best = 0;
    go(
        paths,
        0,
        &mut BTreeSet::new(),
        &mut BTreeSet::new(),
        mode,
        terminals,
        &mut best,
        0,
    );
    best
}

/// Minimum separator by ascending subset enumeration: the smallest vertex
/// set, avoiding `protected`, whose removal leaves no a-b dipath.
pub fn brute_min_separator(
    g: &LevelledDigraph,
    a: &[VertexId],
    b: &[VertexId],
    protected: &[VertexId],
) -> Option<usize> {
    let verts: Vec<VertexId> = g
        .vertices()
        .filter(|x| !protected.contains(x))
        .cloned()
        .collect();
    let n = verts.len();
    let mut masks: Vec<u32> = (0..(1u32 << n)).collect();
    masks.sort_by_key(|m| m.count_ones());
    'outer: for m in masks {
        let removed: BTreeSet<VertexId> = (0..n)
            .filter(|i| m & (1 << i) != 0)
            .map(|i| verts[i].clone())
            .collect();
        let h = g.without(&removed);
        let reach = enddeg::flow::reachable_set(&h, a.iter().filter(|x| h.contains(x)));
        for t in b {
            if h.contains(t) && reach.contains(t) {
                continue 'outer;
            }
        }
        return Some(m.count_ones() as usize);
    }
    None
}

/// Vertex split of an arbitrary digraph, built independently: `u-` and
/// `u+` per vertex, `u- -> u+` per vertex, `u+ -> w-` per edge.
pub fn split_digraph(g: &LevelledDigraph) -> LevelledDigraph {
    let mut b = DigraphBuilder::new("split", g.depth());
    for x in g.vertices() {
        b.add_vertex(VertexId::new(format!("{}-", x.tag())), g.level(x).unwrap())
            .unwrap();
        b.add_vertex(VertexId::new(format!("{}+", x.tag())), g.level(x).unwrap())
            .unwrap();
    }
    for x in g.vertices() {
        b.add_edge(
            &VertexId::new(format!("{}-", x.tag())),
            &VertexId::new(format!("{}+", x.tag())),
        )
        .unwrap();
    }
    for (x, y) in g.edges() {
        b.add_edge(
            &VertexId::new(format!("{}+", x.tag())),
            &VertexId::new(format!("{}-", y.tag())),
        )
        .unwrap();
    }
    b.finish()
}
