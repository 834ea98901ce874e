//! Welding n disjoint anti-ray witnesses to n disjoint ray witnesses into
//! n disjoint double-ray prefixes via a Menger system between the cut
//! points.

use std::collections::BTreeSet;

use crate::digraph::{LevelledDigraph, VertexId};
use crate::ends::{RayWitness, WitnessKind};
use crate::error::{Error, Result};
use crate::flow::{self, DisjointMode, PathSystem};

/// Builds n pairwise disjoint double-ray prefixes, each an anti-ray tail
/// plus a connector plus a ray tail. The connectors come from one Menger
/// application between the anti-ray end vertices and the ray starting
/// vertices on the digraph with all other witness vertices removed; per
/// pair, n disjoint linkage dipaths are certified by flow first.
pub fn double_rays(
    g: &LevelledDigraph,
    rays: &[RayWitness],
    antirays: &[RayWitness],
) -> Result<PathSystem> {
    let n = rays.len();
    if n == 0 || antirays.len() != n {
        return Err(Error::Precondition(format!(
            "need equally many rays and anti-rays, got {} and {}",
            rays.len(),
            antirays.len()
        )));
    }
    let mut seen: BTreeSet<&VertexId> = BTreeSet::new();
    for w in rays.iter().chain(antirays) {
        w.validate(g)?;
        for v in &w.path {
            if !seen.insert(v) {
                return Err(Error::Precondition(format!("witnesses share vertex {v}")));
            }
        }
    }
    if rays.iter().any(|w| w.kind != WitnessKind::Ray)
        || antirays.iter().any(|w| w.kind != WitnessKind::AntiRay)
    {
        return Err(Error::Precondition("witness kinds mixed up".into()));
    }

    // per-pair certificate: n disjoint anti-to-ray linkage dipaths in g
    for (i, q) in antirays.iter().enumerate() {
        for (j, r) in rays.iter().enumerate() {
            let sys = flow::max_disjoint_capped(
                g,
                &q.path,
                &r.path,
                DisjointMode::VertexDisjoint,
                Some(n as u32),
            );
            if sys.len() < n {
                let cert = flow::min_vertex_separator(g, &q.path, &r.path, &[])?;
                return Err(Error::Infeasible {
                    reason: format!(
                        "only {} disjoint linkage dipaths from anti-ray {} to ray {}, need {n}",
                        sys.len(),
                        i + 1,
                        j + 1
                    ),
                    separator: cert.separator,
                });
            }
        }
    }

    // cut points: the anti-ray end vertices and the ray starting vertices
    let xs: Vec<VertexId> = antirays.iter().map(|q| q.path.last().unwrap().clone()).collect();
    let ys: Vec<VertexId> = rays.iter().map(|r| r.path[0].clone()).collect();
    let keep: BTreeSet<&VertexId> = xs.iter().chain(ys.iter()).collect();
    let witness_interior: BTreeSet<VertexId> = rays
        .iter()
        .chain(antirays)
        .flat_map(|w| w.path.iter())
        .filter(|v| !keep.contains(v))
        .cloned()
        .collect();
    let h = g.filtered(|v| !witness_interior.contains(v), |_, _| true);
    let sys = flow::max_disjoint_dipaths(&h, &xs, &ys, DisjointMode::VertexDisjoint);
    if sys.len() < n {
        let cert = flow::min_vertex_separator(&h, &xs, &ys, &[])?;
        return Err(Error::Infeasible {
            reason: format!("Menger yields {} of {n} connectors", sys.len()),
            separator: cert.separator,
        });
    }

    let mut paths = Vec::with_capacity(n);
    for c in &sys.paths {
        let i = xs.iter().position(|x| x == &c[0]).expect("connector starts at a cut point");
        let j = ys.iter().position(|y| y == c.last().unwrap()).expect("connector ends at a start");
        let mut p = antirays[i].path.clone();
        p.extend(c[1..].iter().cloned());
        p.extend(rays[j].path[1..].iter().cloned());
        paths.push(p);
    }
    let out = PathSystem {
        mode: DisjointMode::VertexDisjoint,
        paths,
        terminals: BTreeSet::new(),
    };
    out.validate(g)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::ladder;
    use crate::presentation::truncate;

    fn v(s: String) -> VertexId {
        VertexId::new(s)
    }

    fn ladder_witnesses(
        g: &LevelledDigraph,
        n: u32,
        depth: u32,
    ) -> (Vec<RayWitness>, Vec<RayWitness>) {
        let rays: Vec<RayWitness> = (0..n)
            .map(|r| RayWitness {
                path: (0..=depth).map(|c| v(format!("u{r}_{c}"))).collect(),
                kind: WitnessKind::Ray,
            })
            .collect();
        let antis: Vec<RayWitness> = (0..n)
            .map(|r| RayWitness {
                path: (0..=depth).rev().map(|c| v(format!("w{r}_{c}"))).collect(),
                kind: WitnessKind::AntiRay,
            })
            .collect();
        for w in rays.iter().chain(&antis) {
            w.validate(g).unwrap();
        }
        (rays, antis)
    }

    #[test]
    fn single_pair_welds() {
        let g = truncate(&ladder(1), 8).unwrap();
        let (rays, antis) = ladder_witnesses(&g, 1, 8);
        let sys = double_rays(&g, &rays, &antis).unwrap();
        assert_eq!(sys.len(), 1);
        // anti-ray tail, one connector edge, ray tail
        assert_eq!(sys.paths[0].len(), 2 * 9);
    }

    #[test]
    fn three_disjoint_double_rays_on_the_ladder() {
        let g = truncate(&ladder(3), 10).unwrap();
        let (rays, antis) = ladder_witnesses(&g, 3, 10);
        let sys = double_rays(&g, &rays, &antis).unwrap();
        assert_eq!(sys.len(), 3);
        sys.validate(&g).unwrap();
        for (p, q) in sys.paths.iter().zip(&antis) {
            assert_eq!(&p[..q.path.len()], &q.path[..], "anti tail kept");
        }
    }

    #[test]
    fn intersecting_witnesses_rejected() {
        let g = truncate(&ladder(1), 6).unwrap();
        let (rays, mut antis) = ladder_witnesses(&g, 1, 6);
        // still a valid anti-ray witness, but it ends on the ray row
        antis[0].path.push(v("u0_0".into()));
        antis[0].validate(&g).unwrap();
        let r = double_rays(&g, &rays, &antis);
        assert!(matches!(r, Err(Error::Precondition(_))));
    }
}
