//! Infrastructure invariants on randomly generated table presentations:
//! truncation coherence, determinism, reverse involution, and the JSON
//! round trip.

use std::collections::BTreeMap;

use enddeg::digraph::VertexId;
use enddeg::families;
use enddeg::presentation::{EndDescriptor, Presentation};
use enddeg::{io, truncate};
use proptest::prelude::*;

/// A finite presentation given by explicit tables, standing in for user
/// presentations in the invariant tests.
#[derive(Clone, Debug)]
struct TablePresentation {
    levels: Vec<Vec<String>>,
    out: BTreeMap<String, Vec<String>>,
    level_of: BTreeMap<String, u32>,
    span: u32,
}

impl Presentation for TablePresentation {
    fn name(&self) -> &str {
        "table"
    }
    fn span_bound(&self, _depth: u32) -> u32 {
        self.span
    }
    fn vertices_at(&self, level: u32) -> Vec<VertexId> {
        self.levels
            .get(level as usize)
            .map(|vs| vs.iter().map(VertexId::new).collect())
            .unwrap_or_default()
    }
    fn out_edges(&self, v: &VertexId, max_level: u32) -> Vec<VertexId> {
        self.out
            .get(v.tag())
            .map(|ws| {
                ws.iter()
                    .filter(|w| self.level_of[*w] <= max_level)
                    .map(VertexId::new)
                    .collect()
            })
            .unwrap_or_default()
    }
    fn ends(&self) -> Vec<EndDescriptor> {
        Vec::new()
    }
}

fn arb_presentation() -> impl Strategy<Value = TablePresentation> {
    // sizes per level, then a set of candidate edges by index pairs
    (2usize..6, proptest::collection::vec(1usize..4, 2..7))
        .prop_flat_map(|(span, sizes)| {
            let total: Vec<(u32, usize)> = sizes
                .iter()
                .enumerate()
                .flat_map(|(l, &k)| (0..k).map(move |i| (l as u32, i)))
                .collect();
            let pairs = proptest::collection::btree_set(
                (0..total.len(), 0..total.len()),
                0..(total.len() * 2),
            );
            (Just(span), Just(sizes), Just(total), pairs)
        })
        .prop_map(|(span, sizes, total, pairs)| {
            let tag = |l: u32, i: usize| format!("n{l}_{i}");
            let mut levels: Vec<Vec<String>> = Vec::new();
            for (l, &k) in sizes.iter().enumerate() {
                levels.push((0..k).map(|i| tag(l as u32, i)).collect());
            }
            let mut out: BTreeMap<String, Vec<String>> = BTreeMap::new();
            let mut level_of = BTreeMap::new();
            for &(l, i) in &total {
                level_of.insert(tag(l, i), l);
            }
            for (x, y) in pairs {
                if x == y {
                    continue;
                }
                let (lx, ix) = total[x];
                let (ly, iy) = total[y];
                if lx.abs_diff(ly) > span as u32 {
                    continue;
                }
                let entry = out.entry(tag(lx, ix)).or_default();
                let t = tag(ly, iy);
                if !entry.contains(&t) {
                    entry.push(t);
                }
            }
            TablePresentation { levels, out, level_of, span: span as u32 }
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn truncation_coherent_and_deterministic(p in arb_presentation()) {
        let max = p.levels.len() as u32 - 1;
        let deep = truncate(&p, max).unwrap();
        for n in 0..=max {
            let g = truncate(&p, n).unwrap();
            prop_assert_eq!(&g, &truncate(&p, n).unwrap());
            prop_assert_eq!(&g, &deep.restrict_to_levels(n));
        }
    }

    #[test]
    fn reverse_is_involution(p in arb_presentation()) {
        let g = truncate(&p, p.levels.len() as u32 - 1).unwrap();
        prop_assert_eq!(&g.reverse().reverse(), &g);
        prop_assert_eq!(g.reverse().edge_count(), g.edge_count());
    }

    #[test]
    fn json_round_trip_identity(p in arb_presentation()) {
        let g = truncate(&p, p.levels.len() as u32 - 1).unwrap();
        let back = io::from_json(&io::to_json(&g)).unwrap();
        prop_assert_eq!(&back, &g);
    }

    #[test]
    fn frontier_matches_definition(p in arb_presentation()) {
        let g = truncate(&p, p.levels.len() as u32 - 1).unwrap();
        let lo = (g.depth() + 1).saturating_sub(g.span());
        let want: Vec<VertexId> = g
            .vertices()
            .filter(|v| g.level(v).unwrap() >= lo)
            .cloned()
            .collect();
        prop_assert_eq!(g.frontier(), want);
    }
}

#[test]
fn builtin_families_truncation_ladder() {
    let params = BTreeMap::new();
    for name in ["counterexample", "example52", "halfgrid", "ladder", "krays"] {
        let p = families::by_name(name, &params).unwrap();
        let deep = truncate(p.as_ref(), 25).unwrap();
        for depth in 0..=25 {
            let g = truncate(p.as_ref(), depth).unwrap();
            let again = truncate(p.as_ref(), depth).unwrap();
            assert_eq!(g, again, "{name} determinism");
            for v in g.vertices() {
                assert_eq!(
                    g.out_neighbours(v),
                    again.out_neighbours(v),
                    "{name} adjacency order at {v}"
                );
            }
            assert_eq!(g, deep.restrict_to_levels(depth), "{name} coherence at {depth}");
            assert_eq!(g.reverse().reverse(), g, "{name} reverse involution");
            let back = io::from_json(&io::to_json(&g)).unwrap();
            assert_eq!(back, g, "{name} round trip");
        }
    }
}

#[test]
fn exported_example52_reimports_equal() {
    let g = truncate(&families::example52(), 8).unwrap();
    let doc = io::to_json(&g);
    assert_eq!(io::from_json(&doc).unwrap(), g);
}
