//! Acceptance suite: one test per criterion, each printing a PASS/FAIL
//! line and holding a runtime budget. Run with `--nocapture` to see the
//! per-criterion lines.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{catch_unwind, resume_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::{
    all_paths, brute_max_disjoint, brute_min_separator, random_digraph, random_sides,
    split_digraph, OracleMode,
};
use enddeg::constructions::{
    check_witness, combined_in_degree, delta_minus, double_rays, extend_ray_family,
    verify_counterexample, verify_edge_counterexample, verify_exhausting, ExhaustingSequence,
    RayFamilyState, Verdict,
};
use enddeg::digraph::{LevelledDigraph, VertexId};
use enddeg::ends::{
    dominates, in_degree_estimate, out_degree_estimate, Estimate, RayWitness, WitnessKind,
};
use enddeg::flow::{
    self, fan, max_disjoint_dipaths, max_edge_disjoint_dipaths, min_vertex_separator,
    DisjointMode,
};
use enddeg::{families, io, truncate};
use rand::rngs::StdRng;
use rand::SeedableRng;

fn criterion(name: &str, budget: Duration, body: impl FnOnce()) {
    let t = Instant::now();
    let result = catch_unwind(AssertUnwindSafe(body));
    let elapsed = t.elapsed();
    match result {
        Ok(()) if elapsed <= budget => {
            println!("[PASS] {name} ({elapsed:?}, budget {budget:?})");
        }
        Ok(()) => {
            println!("[FAIL] {name}: exceeded budget, {elapsed:?} > {budget:?}");
            panic!("{name} exceeded its runtime budget");
        }
        Err(e) => {
            println!("[FAIL] {name} ({elapsed:?})");
            resume_unwind(e);
        }
    }
}

fn v(s: &str) -> VertexId {
    VertexId::new(s)
}

#[test]
fn criterion_1_example52_reproduction() {
    criterion(
        "criterion 1: example52 reproduction",
        Duration::from_secs(5),
        || {
            let g = truncate(&families::example52(), 12).unwrap();
            let end = g.end("omega").unwrap().clone();

            assert_eq!(in_degree_estimate(&g, &end, 5).unwrap(), Estimate::Exact(1));

            // no vertex dominates at threshold 5; the corner fan caps at 2
            for x in g.vertices() {
                assert!(!dominates(&g, x, &end, 5).unwrap(), "{x} should not dominate");
            }
            let corner_fan = fan(&g, &v("c0"), &end.ray_vertices(&g), 5);
            assert_eq!(corner_fan.len(), 2);

            let report = combined_in_degree(&g, &end, 5).unwrap();
            assert_eq!(report.delta_cap, Estimate::Exact(2));
            assert_eq!(report.separator, vec![v("c0")]);
            assert_eq!(report.delta_small, Estimate::Exact(2));
            assert_eq!(report.k_upper, Some(2));
            let (dsmall, plan) = delta_minus(&g, &end, 5).unwrap();
            assert_eq!(dsmall, Estimate::Exact(2));
            assert_eq!(plan.s, vec![v("c0")]);

            // the pair sequence passes with limit inferior 2
            let pair = ExhaustingSequence::from_lists(
                (1..=12)
                    .map(|i| vec![v(&format!("b{i}")), v(&format!("a{i}"))])
                    .collect(),
            );
            assert_eq!(pair.liminf_size(), 2);
            assert!(verify_exhausting(&g, &end, &pair, 200).unwrap().passed());

            // the singleton sequence is rejected with an explicit detour witness
            let singles = ExhaustingSequence::from_lists(
                (1..=12).map(|i| vec![v(&format!("b{i}"))]).collect(),
            );
            match verify_exhausting(&g, &end, &singles, 200).unwrap() {
                Verdict::Fail { witness, violated_index } => {
                    assert!(violated_index >= 1);
                    assert!(witness.contains(&v("c0")) && witness.contains(&v("a0")));
                    let w = RayWitness { path: witness, kind: WitnessKind::Ray };
                    w.validate(&g).unwrap();
                    let hits =
                        |i: usize| singles.set(i).unwrap().iter().any(|x| w.path.contains(x));
                    assert!(hits(violated_index) && !hits(violated_index + 1));
                    assert!(check_witness(&w, &singles).is_some());
                }
                other => panic!("singleton sequence accepted: {other:?}"),
            }
        },
    );
}

#[test]
fn criterion_2_equality_on_curated_families() {
    criterion(
        "criterion 2: delta_small = delta_cap = k_upper on curated families",
        Duration::from_secs(30),
        || {
            let mut cases: Vec<(Box<dyn enddeg::Presentation + Send + Sync>, u32)> =
                vec![(Box::new(families::example52()), 2)];
            for k in 1..=4 {
                cases.push((Box::new(families::krays(k, 0).unwrap()), k));
            }
            for k in 1..=2 {
                for m in 1..=2 {
                    cases.push((Box::new(families::krays(k, m).unwrap()), k + m));
                }
            }
            for (p, expected) in cases {
                let g = truncate(p.as_ref(), 20).unwrap();
                let end = g.end("omega").unwrap().clone();
                let r = combined_in_degree(&g, &end, 5).unwrap();
                assert_eq!(
                    r.delta_small,
                    Estimate::Exact(expected),
                    "{} delta_small",
                    g.name()
                );
                assert_eq!(r.delta_cap, Estimate::Exact(expected), "{} delta_cap", g.name());
                assert_eq!(r.k_upper, Some(expected as usize), "{} k_upper", g.name());
            }
        },
    );
}

#[test]
fn criterion_3_menger_oracle_equivalence() {
    criterion(
        "criterion 3: flow vs brute force on 200 random digraphs",
        Duration::from_secs(60),
        || {
            let mut rng = StdRng::seed_from_u64(0x5eed);
            for instance in 0..200 {
                let (g, n) = random_digraph(&mut rng, 9);
                let (a, b) = random_sides(&mut rng, n);
                let terminals: BTreeSet<VertexId> =
                    a.iter().chain(b.iter()).cloned().collect();
                let plain = all_paths(&g, &a, &b, false);
                let internal = all_paths(&g, &a, &b, true);

                let cases = [
                    (
                        max_disjoint_dipaths(&g, &a, &b, DisjointMode::VertexDisjoint),
                        brute_max_disjoint(&plain, OracleMode::Vertex, &terminals),
                        "vertex",
                    ),
                    (
                        max_disjoint_dipaths(&g, &a, &b, DisjointMode::InternallyDisjoint),
                        brute_max_disjoint(&internal, OracleMode::Internal, &terminals),
                        "internal",
                    ),
                    (
                        max_edge_disjoint_dipaths(&g, &a, &b),
                        brute_max_disjoint(&plain, OracleMode::Edge, &terminals),
                        "edge",
                    ),
                ];
                for (sys, want, mode) in cases {
                    sys.validate(&g).unwrap();
                    assert_eq!(sys.len(), want, "{mode} mode, instance {instance}");
                }
                let cert = min_vertex_separator(&g, &a, &b, &[]).unwrap();
                cert.revalidate(&g).unwrap();
                assert_eq!(
                    cert.separator.len(),
                    brute_min_separator(&g, &a, &b, &[]).unwrap(),
                    "separator, instance {instance}"
                );
                // Menger duality on every instance
                assert_eq!(
                    cert.flow_value as usize,
                    max_disjoint_dipaths(&g, &a, &b, DisjointMode::VertexDisjoint).len(),
                    "duality, instance {instance}"
                );
            }
        },
    );
}

#[test]
fn criterion_4_counterexample_structural_suite() {
    criterion(
        "criterion 4: counterexample structural checks and degree growth",
        Duration::from_secs(60),
        || {
            let report = verify_counterexample(20).unwrap();
            assert!(report.passed(), "{}", report.render_text());
            assert_eq!(report.checks.len(), 4);

            let mut last_in = 0;
            let mut last_out = 0;
            for depth in [12, 16, 20, 24, 28, 32, 36] {
                let g = truncate(&families::counterexample(), depth).unwrap();
                let end = g.end("omega").unwrap().clone();
                let din = in_degree_estimate(&g, &end, 5).unwrap().value();
                let dout = out_degree_estimate(&g, &end, 5).unwrap().value();
                assert!(din >= last_in, "in-degree dipped at depth {depth}");
                assert!(dout >= last_out, "out-degree dipped at depth {depth}");
                last_in = din;
                last_out = dout;
            }
            assert!(last_in >= 5, "in-degree estimate {last_in} < 5 at depth 36");
            assert!(last_out >= 3, "out-degree estimate {last_out} < 3 at depth 36");
        },
    );
}

#[test]
fn criterion_5_constructive_proof_steps() {
    criterion(
        "criterion 5: ray-family growth 1 to 5 and three double rays",
        Duration::from_secs(30),
        || {
            // iterated extension on the half-grid
            let depth = 56;
            let g = truncate(&families::halfgrid(), depth).unwrap();
            let hv = |r: u32, c: u32| v(&format!("h{r}_{c}"));
            let reference: Vec<VertexId> = (0..=depth).map(|c| hv(0, c)).collect();
            let mut state = RayFamilyState::empty();
            let mut next_row = 1;
            for round in 1..=5u32 {
                let from_col = state
                    .prefixes()
                    .iter()
                    .flatten()
                    .map(|x| {
                        let (_, c) = x.tag()[1..].split_once('_').unwrap();
                        c.parse::<u32>().unwrap()
                    })
                    .max()
                    .map_or(0, |m| m + 2);
                let fresh: Vec<RayWitness> = (0..round)
                    .map(|j| {
                        let r = next_row + j;
                        RayWitness {
                            path: (from_col..=depth - r).map(|c| hv(r, c)).collect(),
                            kind: WitnessKind::Ray,
                        }
                    })
                    .collect();
                next_row += round;
                let old = state.prefixes().to_vec();
                state = extend_ray_family(&g, &state, &fresh, &reference).unwrap();
                // proof conditions, checked per step
                state.validate(&g).unwrap();
                assert_eq!(state.len(), round as usize);
                for (i, prev) in old.iter().enumerate() {
                    let now = &state.prefixes()[i];
                    assert!(now.len() > prev.len(), "round {round}: prefix {i} not extended");
                    assert_eq!(&now[..prev.len()], &prev[..], "round {round}: not a prefix");
                }
            }
            assert_eq!(state.len(), 5);

            // three disjoint double rays on the ladder
            let g = truncate(&families::ladder(3), 10).unwrap();
            let rays: Vec<RayWitness> = (0..3)
                .map(|r| RayWitness {
                    path: (0..=10).map(|c| v(&format!("u{r}_{c}"))).collect(),
                    kind: WitnessKind::Ray,
                })
                .collect();
            let antis: Vec<RayWitness> = (0..3)
                .map(|r| RayWitness {
                    path: (0..=10).rev().map(|c| v(&format!("w{r}_{c}"))).collect(),
                    kind: WitnessKind::AntiRay,
                })
                .collect();
            let sys = double_rays(&g, &rays, &antis).unwrap();
            assert_eq!(sys.len(), 3);
            sys.validate(&g).unwrap();
            for (p, q) in sys.paths.iter().zip(&antis) {
                assert_eq!(&p[..q.path.len()], &q.path[..]);
            }
        },
    );
}

#[test]
fn criterion_6_edge_analogue() {
    criterion(
        "criterion 6: edge-disjoint split checks",
        Duration::from_secs(30),
        || {
            let report = verify_edge_counterexample(20).unwrap();
            assert!(report.passed(), "{}", report.render_text());

            let mut rng = StdRng::seed_from_u64(0x5117);
            for instance in 0..100 {
                let (g, n) = random_digraph(&mut rng, 8);
                let (a, b) = random_sides(&mut rng, n);
                let vertex =
                    max_disjoint_dipaths(&g, &a, &b, DisjointMode::VertexDisjoint).len();
                let split = split_digraph(&g);
                let a_minus: Vec<VertexId> =
                    a.iter().map(|x| v(&format!("{}-", x.tag()))).collect();
                let b_plus: Vec<VertexId> =
                    b.iter().map(|x| v(&format!("{}+", x.tag()))).collect();
                let edge = max_edge_disjoint_dipaths(&split, &a_minus, &b_plus).len();
                assert_eq!(edge, vertex, "instance {instance}");
            }
        },
    );
}

#[test]
fn criterion_7_infrastructure_properties() {
    criterion(
        "criterion 7: truncation coherence, round trips, involution",
        Duration::from_secs(30),
        || {
            let params = BTreeMap::new();
            for name in ["counterexample", "example52", "halfgrid", "ladder", "krays"] {
                let p = families::by_name(name, &params).unwrap();
                let deep = truncate(p.as_ref(), 25).unwrap();
                for depth in 0..=25 {
                    let g: LevelledDigraph = truncate(p.as_ref(), depth).unwrap();
                    assert_eq!(g, truncate(p.as_ref(), depth).unwrap(), "{name} determinism");
                    assert_eq!(g, deep.restrict_to_levels(depth), "{name} coherence");
                    assert_eq!(g.reverse().reverse(), g, "{name} involution");
                    assert_eq!(io::from_json(&io::to_json(&g)).unwrap(), g, "{name} round trip");
                }
            }
            // the reverse-duality bridge between the two degree estimators
            for name in ["counterexample", "example52", "halfgrid", "ladder", "krays"] {
                let p = families::by_name(name, &params).unwrap();
                let g = truncate(p.as_ref(), 16).unwrap();
                let end = g.end("omega").unwrap().clone();
                assert_eq!(
                    out_degree_estimate(&g, &end, 5).unwrap(),
                    in_degree_estimate(&g.reverse(), &end.reversed(), 5).unwrap(),
                    "{name} reverse duality"
                );
            }
            let _ = flow::reachable_set(
                &truncate(&families::example52(), 3).unwrap(),
                [v("b0")].iter(),
            );
        },
    );
}
