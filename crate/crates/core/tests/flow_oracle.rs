//! Exhaustive cross-checks of the flow machinery against brute-force
//! oracles on seeded random digraphs.

mod common;

use std::collections::BTreeSet;

use common::{
    all_paths, brute_max_disjoint, brute_min_separator, random_digraph, random_sides,
    split_digraph, v, OracleMode,
};
use enddeg::digraph::VertexId;
use enddeg::flow::{
    fan, max_disjoint_dipaths, max_edge_disjoint_dipaths, min_vertex_separator, DisjointMode,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

#[test]
fn modes_match_brute_force_on_200_random_digraphs() {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    for instance in 0..200 {
        let (g, n) = random_digraph(&mut rng, 9);
        let (a, b) = random_sides(&mut rng, n);
        let terminals: BTreeSet<VertexId> = a.iter().chain(b.iter()).cloned().collect();

        let plain = all_paths(&g, &a, &b, false);
        let internal = all_paths(&g, &a, &b, true);

        let got = max_disjoint_dipaths(&g, &a, &b, DisjointMode::VertexDisjoint);
        got.validate(&g).unwrap();
        let want = brute_max_disjoint(&plain, OracleMode::Vertex, &terminals);
        assert_eq!(got.len(), want, "vertex mode, instance {instance}");

        let got = max_disjoint_dipaths(&g, &a, &b, DisjointMode::InternallyDisjoint);
        got.validate(&g).unwrap();
        let want = brute_max_disjoint(&internal, OracleMode::Internal, &terminals);
        assert_eq!(got.len(), want, "internal mode, instance {instance}");

        let got = max_edge_disjoint_dipaths(&g, &a, &b);
        got.validate(&g).unwrap();
        let want = brute_max_disjoint(&plain, OracleMode::Edge, &terminals);
        assert_eq!(got.len(), want, "edge mode, instance {instance}");

        // Menger duality: the separator certificate matches both the
        // subset-enumeration oracle and the fully disjoint path count
        let cert = min_vertex_separator(&g, &a, &b, &[]).unwrap();
        cert.revalidate(&g).unwrap();
        let want = brute_min_separator(&g, &a, &b, &[]).unwrap();
        assert_eq!(cert.separator.len(), want, "separator, instance {instance}");
        let vertex_count = max_disjoint_dipaths(&g, &a, &b, DisjointMode::VertexDisjoint).len();
        assert_eq!(cert.flow_value as usize, vertex_count, "duality, instance {instance}");
    }
}

#[test]
fn adding_an_edge_never_decreases_counts() {
    let mut rng = StdRng::seed_from_u64(0xadd);
    for _ in 0..60 {
        let (g, n) = random_digraph(&mut rng, 8);
        let (a, b) = random_sides(&mut rng, n);
        let before = [
            max_disjoint_dipaths(&g, &a, &b, DisjointMode::VertexDisjoint).len(),
            max_disjoint_dipaths(&g, &a, &b, DisjointMode::InternallyDisjoint).len(),
            max_edge_disjoint_dipaths(&g, &a, &b).len(),
        ];
        // add one random missing edge
        let mut fresh = None;
        for _ in 0..100 {
            let (x, y) = (rng.gen_range(0..n), rng.gen_range(0..n));
            if x != y && !g.contains_edge(&v(x), &v(y)) {
                fresh = Some((x, y));
                break;
            }
        }
        let Some((x, y)) = fresh else { continue };
        let mut edges: Vec<(usize, usize)> = Vec::new();
        for (p, q) in g.edges() {
            let pi: usize = p.tag()[1..].parse().unwrap();
            let qi: usize = q.tag()[1..].parse().unwrap();
            edges.push((pi, qi));
        }
        edges.push((x, y));
        let g2 = enddeg::digraph::from_edges(n, &edges);
        let after = [
            max_disjoint_dipaths(&g2, &a, &b, DisjointMode::VertexDisjoint).len(),
            max_disjoint_dipaths(&g2, &a, &b, DisjointMode::InternallyDisjoint).len(),
            max_edge_disjoint_dipaths(&g2, &a, &b).len(),
        ];
        for (x, y) in before.iter().zip(&after) {
            assert!(y >= x, "monotonicity: {before:?} -> {after:?}");
        }
    }
}

#[test]
fn split_edge_disjoint_equals_vertex_disjoint() {
    let mut rng = StdRng::seed_from_u64(0x5117);
    for instance in 0..100 {
        let (g, n) = random_digraph(&mut rng, 8);
        let (a, b) = random_sides(&mut rng, n);
        let vertex = max_disjoint_dipaths(&g, &a, &b, DisjointMode::VertexDisjoint).len();
        let split = split_digraph(&g);
        let a_minus: Vec<VertexId> =
            a.iter().map(|x| VertexId::new(format!("{}-", x.tag()))).collect();
        let b_plus: Vec<VertexId> =
            b.iter().map(|x| VertexId::new(format!("{}+", x.tag()))).collect();
        let edge = max_edge_disjoint_dipaths(&split, &a_minus, &b_plus);
        edge.validate(&split).unwrap();
        assert_eq!(edge.len(), vertex, "instance {instance}");
    }
}

#[test]
fn fan_is_internal_menger_at_the_apex() {
    // the fan out of a vertex equals the separator of the targets from it
    // with the apex protected
    let mut rng = StdRng::seed_from_u64(0xfa4);
    for _ in 0..60 {
        let (g, n) = random_digraph(&mut rng, 8);
        let apex = v(rng.gen_range(0..n));
        let targets: Vec<VertexId> = (0..n)
            .filter(|&i| v(i) != apex && rng.gen_bool(0.4))
            .map(v)
            .collect();
        if targets.is_empty() {
            continue;
        }
        let f = fan(&g, &apex, &targets, 50);
        f.validate(&g).unwrap();
        let cert = min_vertex_separator(&g, std::slice::from_ref(&apex), &targets, std::slice::from_ref(&apex));
        if let Ok(cert) = cert {
            assert_eq!(f.len(), cert.flow_value as usize);
        }
    }
}
