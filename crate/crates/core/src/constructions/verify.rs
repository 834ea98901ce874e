//! Structural verification of the counterexample digraph and of its
//! edge-disjoint split: backward-walk behaviour, diagonal bookkeeping, the
//! Euler face check of the drawn embedding, and the pairwise intersection
//! of the built-in eventually-periodic ray and anti-ray families.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::digraph::{LevelledDigraph, VertexId};
use crate::error::Result;
use crate::families::{self, cx_vertex, row_start, tri};
use crate::presentation::truncate;

use super::edge_split::edge_split;
use super::planar;

#[derive(Clone, Debug, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn pass(name: &'static str, detail: impl Into<String>) -> Self {
        CheckResult { name, passed: true, detail: detail.into() }
    }

    fn fail(name: &'static str, detail: impl Into<String>) -> Self {
        CheckResult { name, passed: false, detail: detail.into() }
    }
}

/// Outcome of a verification suite: one named result per sub-check.
#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub subject: String,
    pub depth: u32,
    pub checks: Vec<CheckResult>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn render_text(&self) -> String {
        let mut s = format!("{} at depth {}\n", self.subject, self.depth);
        for c in &self.checks {
            s.push_str(&format!(
                "  [{}] {}: {}\n",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.detail
            ));
        }
        s
    }
}

// ---------------------------------------------------------------------------
// eventually-periodic witness families of the counterexample
// ---------------------------------------------------------------------------

fn max_row(depth: u32) -> u32 {
    let mut i = 0;
    while row_start(i + 1) <= depth {
        i += 1;
    }
    i
}

/// Largest family index whose pairwise meetings all fit the window: ray
/// `i` and anti-ray `m` first share `x^i_{tri(j)+m}` at `j = max(i,m)-1`,
/// so every pair with indices `<= k` meets once `tri(k-1) + k <= depth`.
fn family_bound(depth: u32) -> u32 {
    let mut k = 1;
    while tri(k) + k < depth {
        k += 1;
    }
    k
}

/// The plain row rays within the window.
pub fn row_rays(depth: u32) -> Vec<Vec<VertexId>> {
    (1..=max_row(depth))
        .map(|i| (row_start(i)..=depth).map(|k| cx_vertex(i, k)).collect())
        .collect()
}

/// Rays that ride the first row to a diagonal and the target row from
/// there on.
pub fn jump_rays(depth: u32) -> Vec<Vec<VertexId>> {
    let mut out = Vec::new();
    for i in 2..=max_row(depth) {
        let jump_from = tri(i) + 1;
        if jump_from > depth {
            continue;
        }
        let mut p: Vec<VertexId> = (1..=jump_from).map(|k| cx_vertex(1, k)).collect();
        p.extend((row_start(i)..=depth).map(|k| cx_vertex(i, k)));
        out.push(p);
    }
    out
}

/// The weaving ray: rides the first row, jumps each first diagonal, rides
/// the target row two steps past the next diagonal column, and descends
/// back to the first row.
pub fn staircase_ray(depth: u32) -> Vec<VertexId> {
    let mut p = Vec::new();
    let mut k = 1;
    let mut i = 2;
    loop {
        let jump = tri(i) + 1; // diagonal source for row i
        if jump > depth {
            p.extend((k..=depth).map(|x| cx_vertex(1, x)));
            break;
        }
        p.extend((k..=jump).map(|x| cx_vertex(1, x)));
        let land = row_start(i); // diagonal target, the row origin
        let exit = tri(i) + 2; // column of the next descent
        if exit > depth {
            p.extend((land..=depth).map(|x| cx_vertex(i, x)));
            break;
        }
        p.extend((land..=exit).map(|x| cx_vertex(i, x)));
        for r in (1..i).rev() {
            p.push(cx_vertex(r, exit));
        }
        k = exit + 1;
        i += 1;
    }
    p
}

/// The colour-pattern anti-rays: anti-ray `m` descends the columns
/// `tri(j) + m` from their top row down to the first row, hopping between
/// columns along the `k' = m` diagonals, and ends at `x^1_{tri(m-1)+m}`.
pub fn colour_antirays(depth: u32) -> Vec<Vec<VertexId>> {
    let mut out = Vec::new();
    for m in 1.. {
        let j_min = (m - 1).max(1);
        if tri(j_min) + m > depth {
            break;
        }
        let mut cols: Vec<u32> = Vec::new();
        let mut j = j_min;
        while tri(j) + m <= depth {
            cols.push(tri(j) + m);
            j += 1;
        }
        cols.reverse();
        let mut p = Vec::new();
        for (idx, &c) in cols.iter().enumerate() {
            // column c = tri(j)+m spans rows 1..=j+1; entered from the top
            let j_here = j_min + (cols.len() - 1 - idx) as u32;
            for r in (1..=j_here + 1).rev() {
                p.push(cx_vertex(r, c));
            }
        }
        out.push(p);
        if m > depth {
            break;
        }
    }
    out
}

// ---------------------------------------------------------------------------
// sub-checks
// ---------------------------------------------------------------------------

/// Drops every level-decreasing edge (exactly the diagonals).
pub(crate) fn strip_diagonals(g: &LevelledDigraph) -> LevelledDigraph {
    g.filtered(|_| true, |u, v| g.level(u).unwrap() <= g.level(v).unwrap())
}

/// Longest walk following in-edges from every vertex; `None` when the
/// reversed digraph has a cycle.
fn longest_reverse_walks(g: &LevelledDigraph) -> Option<std::collections::BTreeMap<VertexId, u32>> {
    let rev = g.reverse();
    let mut memo: Vec<Option<u32>> = vec![None; g.vertex_count()];
    let mut state = vec![0u8; g.vertex_count()]; // 0 fresh, 1 active, 2 done
    for v in rev.vertices() {
        let start = rev.idx(v).unwrap();
        let mut stack = vec![(start, 0usize)];
        if state[start] == 2 {
            continue;
        }
        state[start] = 1;
        while let Some(&mut (u, ref mut k)) = stack.last_mut() {
            let outs = rev.out_at(u);
            if *k < outs.len() {
                let w = outs[*k];
                *k += 1;
                match state[w] {
                    1 => return None, // cycle
                    0 => {
                        state[w] = 1;
                        stack.push((w, 0));
                    }
                    _ => {}
                }
            } else {
                let best = outs
                    .iter()
                    .map(|&w| memo[w].unwrap() + 1)
                    .max()
                    .unwrap_or(0);
                memo[u] = Some(best);
                state[u] = 2;
                stack.pop();
            }
        }
    }
    Some(
        (0..g.vertex_count())
            .map(|i| (g.id_at(i).clone(), memo[i].unwrap()))
            .collect(),
    )
}

/// Backward-walk behaviour of the diagonal-free digraph: the reversed
/// digraph is acyclic, every maximal reverse walk ends at a ray origin,
/// and walk lengths from the low half agree with a deeper truncation.
pub fn reverse_walk_check(g: &LevelledDigraph, deeper: &LevelledDigraph) -> CheckResult {
    const NAME: &str = "reverse-walks";
    let core = strip_diagonals(g);
    let Some(walks) = longest_reverse_walks(&core) else {
        return CheckResult::fail(NAME, "reversed diagonal-free digraph has a cycle");
    };
    // sinks of the reversed digraph = in-degree-0 vertices = ray origins
    let rev = core.reverse();
    for v in core.vertices() {
        let indeg0 = rev.out_neighbours(v).is_empty();
        let is_origin = {
            let rest = v.tag().strip_prefix('x').unwrap();
            let (i, k) = rest.split_once('_').unwrap();
            let (i, k): (u32, u32) = (i.parse().unwrap(), k.parse().unwrap());
            k == row_start(i)
        };
        if indeg0 != is_origin {
            return CheckResult::fail(
                NAME,
                format!("maximal reverse walks end at {v}, which is not a ray origin"),
            );
        }
    }
    let deep_core = strip_diagonals(deeper);
    let Some(deep_walks) = longest_reverse_walks(&deep_core) else {
        return CheckResult::fail(NAME, "deeper reversed digraph has a cycle");
    };
    let half = g.depth() / 2;
    for v in core.vertices() {
        if core.level(v).unwrap() <= half && deep_walks.get(v) != walks.get(v) {
            return CheckResult::fail(
                NAME,
                format!("reverse walk length at {v} changed between depths"),
            );
        }
    }
    CheckResult::pass(NAME, "acyclic; walks end at ray origins; lengths stable in depth")
}

/// Diagonal bookkeeping: the diagonals present in the built digraph equal
/// the direct enumeration of the formula, and each row receives as many
/// as the enumeration predicts (exactly `i` once the row is fully fed).
pub fn diagonal_count_check(g: &LevelledDigraph) -> CheckResult {
    const NAME: &str = "diagonal-counts";
    let depth = g.depth();
    // enumeration oracle: walk (i, k') pairs directly
    let mut expected: BTreeSet<(VertexId, VertexId)> = BTreeSet::new();
    let mut per_row: std::collections::BTreeMap<u32, usize> = Default::default();
    let mut i = 2;
    while tri(i) < depth {
        for kp in 1..=i {
            if tri(i) + kp <= depth {
                expected.insert((cx_vertex(1, tri(i) + kp), cx_vertex(i, tri(i - 1) + kp)));
                *per_row.entry(i).or_default() += 1;
            }
        }
        i += 1;
    }
    let built: BTreeSet<(VertexId, VertexId)> = g
        .edges()
        .filter(|(u, v)| g.level(u).unwrap() > g.level(v).unwrap())
        .map(|(u, v)| (u.clone(), v.clone()))
        .collect();
    if built != expected {
        return CheckResult::fail(
            NAME,
            format!("built {} diagonals, enumeration gives {}", built.len(), expected.len()),
        );
    }
    for (row, count) in &per_row {
        if tri(*row) + row <= depth && *count != *row as usize {
            return CheckResult::fail(
                NAME,
                format!("row {row} receives {count} diagonals, expected {row}"),
            );
        }
    }
    CheckResult::pass(NAME, format!("{} diagonal edges match the enumeration", expected.len()))
}

/// Euler face check of the drawn rotation system.
pub fn euler_face_check(g: &LevelledDigraph) -> CheckResult {
    const NAME: &str = "euler-faces";
    match planar::euler_check(g, &planar::counterexample_rotation(g)) {
        Err(e) => CheckResult::fail(NAME, format!("rotation invalid: {e}")),
        Ok(r) if !r.is_planar() => CheckResult::fail(
            NAME,
            format!("V={} E={} F={} is not a sphere embedding", r.vertices, r.edges, r.faces),
        ),
        Ok(r) => CheckResult::pass(
            NAME,
            format!("V - E + F = {} - {} + {} = 2", r.vertices, r.edges, r.faces),
        ),
    }
}

/// All built-in ray prefixes are dipaths, all anti-ray suffixes are
/// dipaths, and every ray/anti-ray pair shares a vertex in the window.
/// Both families run up to the index bound within which the window is
/// guaranteed to contain every pairwise meeting.
pub fn intersection_check(g: &LevelledDigraph) -> CheckResult {
    const NAME: &str = "ray-antiray-intersections";
    let depth = g.depth();
    let bound = family_bound(depth) as usize;
    let mut rays = row_rays(depth);
    rays.truncate(bound);
    let mut jumps = jump_rays(depth);
    jumps.truncate(bound.saturating_sub(1));
    rays.extend(jumps);
    rays.push(staircase_ray(depth));
    let mut antis = colour_antirays(depth);
    antis.truncate(bound);
    for p in rays.iter().chain(antis.iter()) {
        if !g.is_dipath(p) {
            return CheckResult::fail(NAME, format!("family member is not a dipath: {p:?}"));
        }
    }
    for (ri, r) in rays.iter().enumerate() {
        let rset: BTreeSet<&VertexId> = r.iter().collect();
        for (ai, a) in antis.iter().enumerate() {
            if !a.iter().any(|v| rset.contains(v)) {
                return CheckResult::fail(
                    NAME,
                    format!("ray {} and anti-ray {} are disjoint in the window", ri + 1, ai + 1),
                );
            }
        }
    }
    CheckResult::pass(
        NAME,
        format!("{} rays x {} anti-rays all intersect", rays.len(), antis.len()),
    )
}

/// The four structural sub-checks of the counterexample at a depth.
pub fn verify_counterexample(depth: u32) -> Result<CheckReport> {
    let g = truncate(&families::counterexample(), depth)?;
    let deeper = truncate(&families::counterexample(), depth + 4)?;
    Ok(CheckReport {
        subject: "counterexample".into(),
        depth,
        checks: vec![
            reverse_walk_check(&g, &deeper),
            diagonal_count_check(&g),
            euler_face_check(&g),
            intersection_check(&g),
        ],
    })
}

fn split_image(path: &[VertexId]) -> Vec<VertexId> {
    path.iter()
        .flat_map(|v| {
            [
                VertexId::new(format!("{}-", v.tag())),
                VertexId::new(format!("{}+", v.tag())),
            ]
        })
        .collect()
}

/// The edge-disjoint analogue: in the split of the counterexample every
/// vertex has a unique out- or in-neighbour, the counts match the split
/// arithmetic, and the witness families, mapped into the split, pairwise
/// share an edge.
pub fn verify_edge_counterexample(depth: u32) -> Result<CheckReport> {
    let base = truncate(&families::counterexample(), depth)?;
    let g = truncate(&edge_split(families::counterexample()), depth)?;
    let mut checks = Vec::new();

    let rev = g.reverse();
    let unique = g.vertices().all(|v| {
        if v.tag().ends_with('-') {
            g.out_neighbours(v).len() == 1
        } else {
            rev.out_neighbours(v).len() == 1
        }
    });
    checks.push(if unique {
        CheckResult::pass("unique-neighbour", "every minus copy has out-degree 1, every plus copy in-degree 1")
    } else {
        CheckResult::fail("unique-neighbour", "a split vertex has ambiguous neighbours")
    });

    let counts_ok = g.vertex_count() == 2 * base.vertex_count()
        && g.edge_count() == base.edge_count() + base.vertex_count();
    checks.push(if counts_ok {
        CheckResult::pass(
            "split-counts",
            format!("|V'| = {} = 2|V|, |E'| = {} = |E| + |V|", g.vertex_count(), g.edge_count()),
        )
    } else {
        CheckResult::fail("split-counts", "split sizes do not match 2|V| and |E| + |V|")
    });

    let bound = family_bound(depth) as usize;
    let mut rays = row_rays(depth);
    rays.truncate(bound);
    let mut jumps = jump_rays(depth);
    jumps.truncate(bound.saturating_sub(1));
    rays.extend(jumps);
    rays.push(staircase_ray(depth));
    let mut antis = colour_antirays(depth);
    antis.truncate(bound);
    let mut shared = true;
    'outer: for r in &rays {
        let rp = split_image(r);
        if !g.is_dipath(&rp) {
            shared = false;
            break;
        }
        let redges: BTreeSet<(&VertexId, &VertexId)> =
            rp.windows(2).map(|w| (&w[0], &w[1])).collect();
        for a in &antis {
            let ap = split_image(a);
            if !g.is_dipath(&ap) || !ap.windows(2).any(|w| redges.contains(&(&w[0], &w[1]))) {
                shared = false;
                break 'outer;
            }
        }
    }
    checks.push(if shared {
        CheckResult::pass(
            "edge-sharing",
            format!("{} x {} split witness pairs share an edge", rays.len(), antis.len()),
        )
    } else {
        CheckResult::fail("edge-sharing", "a split witness pair is edge-disjoint")
    });

    Ok(CheckReport { subject: "edge-counterexample".into(), depth, checks })
}
