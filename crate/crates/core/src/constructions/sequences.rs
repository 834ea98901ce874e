//! Exhausting sequences: construction, verification, grading and the
//! partition-derived combination.

use std::collections::{BTreeMap, BTreeSet};

use crate::digraph::{LevelledDigraph, VertexId};
use crate::ends::{self, RayWitness};
use crate::error::{Error, Result};
use crate::flow;
use crate::presentation::EndDescriptor;

/// An indexed family of finite vertex sets `U_1, U_2, ...` together with
/// the limit inferior of their sizes over the represented range
/// (the minimum over the top half, since a finite window cannot see
/// further).
#[derive(Clone, Debug, PartialEq)]
pub struct ExhaustingSequence {
    sets: Vec<BTreeSet<VertexId>>,
    liminf_size: usize,
}

impl ExhaustingSequence {
    pub fn new(sets: Vec<BTreeSet<VertexId>>) -> Self {
        let from = sets.len() / 2;
        let liminf_size = sets[from..]
            .iter()
            .map(BTreeSet::len)
            .min()
            .unwrap_or(0);
        ExhaustingSequence { sets, liminf_size }
    }

    pub fn from_lists(lists: Vec<Vec<VertexId>>) -> Self {
        Self::new(lists.into_iter().map(|l| l.into_iter().collect()).collect())
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// 1-based accessor: `set(1)` is the first set.
    pub fn set(&self, i: usize) -> Option<&BTreeSet<VertexId>> {
        (i >= 1).then(|| self.sets.get(i - 1)).flatten()
    }

    pub fn sets(&self) -> &[BTreeSet<VertexId>] {
        &self.sets
    }

    pub fn liminf_size(&self) -> usize {
        self.liminf_size
    }

    /// Pointwise union with a fixed vertex set.
    pub fn union_each(&self, s: &BTreeSet<VertexId>) -> ExhaustingSequence {
        ExhaustingSequence::new(
            self.sets
                .iter()
                .map(|u| u.union(s).cloned().collect())
                .collect(),
        )
    }
}

/// Outcome of a finite-scale exhausting-sequence check. `Fail` is
/// conclusive for the window and carries a revalidating witness; `Pass` is
/// relative to the enumerated witness family.
#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    Pass { witnesses_checked: usize },
    /// `violated_index = 0`: the witness misses every set; `i >= 1`: it
    /// meets `U_i` but not `U_{i+1}`.
    Fail { witness: Vec<VertexId>, violated_index: usize },
}

impl Verdict {
    pub fn passed(&self) -> bool {
        matches!(self, Verdict::Pass { .. })
    }
}

/// The triangular cumulative sequence over a disjoint ray family: `V_i`
/// collects the `k`-th vertex of ray `j` whenever `j + k <= i` (rays
/// 1-indexed, positions 0-indexed). The sets are nested by construction.
pub fn diagonal_exhausting_sequence(rays: &[RayWitness]) -> Result<ExhaustingSequence> {
    if rays.is_empty() {
        return Err(Error::Precondition(
            "diagonal sequence needs at least one ray".into(),
        ));
    }
    let mut seen = BTreeSet::new();
    for r in rays {
        for v in &r.path {
            if !seen.insert(v.clone()) {
                return Err(Error::Precondition(format!("rays share vertex {v}")));
            }
        }
    }
    let max_i: usize = rays
        .iter()
        .enumerate()
        .map(|(j, r)| j + 1 + r.path.len() - 1)
        .max()
        .unwrap();
    let mut sets = Vec::new();
    for i in 1..=max_i {
        let mut u = BTreeSet::new();
        for (j0, r) in rays.iter().enumerate() {
            let j = j0 + 1;
            if i >= j {
                for k in 0..=(i - j).min(r.path.len() - 1) {
                    u.insert(r.path[k].clone());
                }
            }
        }
        sets.push(u);
    }
    Ok(ExhaustingSequence::new(sets))
}

/// Enumerates end-consistent ray witnesses, anchored first at the end's
/// own ray and anti-ray starts and then at the whole seed band.
pub(crate) fn consistent_witnesses(
    g: &LevelledDigraph,
    end: &EndDescriptor,
    limit: usize,
) -> Vec<RayWitness> {
    let scope = ends::end_scope(g, end);
    let mut starts: Vec<VertexId> = Vec::new();
    if let Some(v) = end.ray_vertices(g).into_iter().next() {
        starts.push(v);
    }
    if let Some(v) = end.antiray_vertices(g).into_iter().next() {
        starts.push(v);
    }
    starts.extend(scope.seeds.iter().cloned());
    // over-enumerate, then keep the consistent ones
    ends::ray_witnesses(g, &starts, limit.saturating_mul(4))
        .into_iter()
        .filter(|w| scope.region.contains(w.path.last().unwrap()))
        .take(limit)
        .collect()
}

/// Checks the exhausting property against up to `limit` enumerated
/// end-consistent witnesses: each must meet some `U_i`, and meeting `U_i`
/// forces meeting `U_{i+1}` whenever the window can still decide that.
/// When `U_{i+1}` reaches above the witness's final level, the witness ran
/// out of window before the set and the implication is not checked.
pub fn verify_exhausting(
    g: &LevelledDigraph,
    end: &EndDescriptor,
    seq: &ExhaustingSequence,
    limit: usize,
) -> Result<Verdict> {
    if seq.is_empty() {
        return Err(Error::Precondition("empty sequence".into()));
    }
    let witnesses = consistent_witnesses(g, end, limit);
    for w in &witnesses {
        let on_path: BTreeSet<&VertexId> = w.path.iter().collect();
        let end_level = g.level(w.path.last().unwrap()).unwrap_or(0);
        let mut met_any = false;
        for i in 1..=seq.len() {
            let met = seq.set(i).unwrap().iter().any(|v| on_path.contains(v));
            met_any |= met;
            if met && i < seq.len() {
                let next = seq.set(i + 1).unwrap();
                let decidable = next
                    .iter()
                    .all(|v| g.level(v).map_or(true, |l| l <= end_level));
                if decidable && !next.iter().any(|v| on_path.contains(v)) {
                    return Ok(Verdict::Fail { witness: w.path.clone(), violated_index: i });
                }
            }
        }
        if !met_any {
            return Ok(Verdict::Fail { witness: w.path.clone(), violated_index: 0 });
        }
    }
    Ok(Verdict::Pass { witnesses_checked: witnesses.len() })
}

/// Returns the first index at which the witness refutes the sequence
/// outright (meets a set, misses its successor), ignoring the window
/// caveat. Used to revalidate failure witnesses.
pub fn check_witness(w: &RayWitness, seq: &ExhaustingSequence) -> Option<usize> {
    let on_path: BTreeSet<&VertexId> = w.path.iter().collect();
    let mut met_any = false;
    for i in 1..=seq.len() {
        let met = seq.set(i).unwrap().iter().any(|v| on_path.contains(v));
        met_any |= met;
        if met && i < seq.len() {
            let next = seq.set(i + 1).unwrap();
            if !next.iter().any(|v| on_path.contains(v)) {
                return Some(i);
            }
        }
    }
    if !met_any {
        return Some(0);
    }
    None
}

/// The graded sequence of a degree bound: `U_1` holds the starting
/// vertices of `d` disjoint end-consistent witnesses in `g - S`, and each
/// `U_{i+1}` is the minimum vertex separator between `U_i` and the deep
/// consistent targets, computed in `g - S` with `U_i` protected. Every set
/// has size exactly `d`; a flow above `d` refutes the bound itself.
pub fn graded_sequence(
    g: &LevelledDigraph,
    end: &EndDescriptor,
    s: &BTreeSet<VertexId>,
    d: u32,
) -> Result<ExhaustingSequence> {
    if d == 0 {
        return Err(Error::Precondition("graded sequence needs d >= 1".into()));
    }
    let h = g.without(s);
    let df = ends::in_degree_flow(&h, end, d + 1)?;
    let found = df.witnesses.len() as u32;
    if found > d {
        return Err(Error::Contradiction { claimed: d, flow: found });
    }
    if found < d {
        return Err(Error::Precondition(format!(
            "only {found} disjoint end-consistent witnesses in g - S, need {d}"
        )));
    }
    let deep: Vec<VertexId> = df.scope.targets.clone();
    let deep_set: BTreeSet<&VertexId> = deep.iter().collect();
    let frontier_lo = h.frontier_min_level();

    let mut u1 = BTreeSet::new();
    for p in &df.witnesses.paths {
        u1.insert(p[0].clone());
    }
    let mut sets = vec![u1];
    for _ in 0..g.depth() {
        let current: Vec<VertexId> = sets.last().unwrap().iter().cloned().collect();
        if current.iter().any(|v| deep_set.contains(v)) {
            break;
        }
        let cert = flow::min_vertex_separator_source_side(&h, &current, &deep, &current)?;
        if cert.flow_value > d {
            return Err(Error::Contradiction { claimed: d, flow: cert.flow_value });
        }
        if cert.flow_value < d {
            return Err(Error::Precondition(format!(
                "separation between U_i and the deep band dropped to {}",
                cert.flow_value
            )));
        }
        let next: BTreeSet<VertexId> = cert.separator.into_iter().collect();
        if &next == sets.last().unwrap() {
            break;
        }
        let done = next.iter().all(|v| h.level(v).is_some_and(|l| l >= frontier_lo));
        sets.push(next);
        if done {
            break;
        }
    }
    Ok(ExhaustingSequence::new(sets))
}

/// Vertices present in every set of the top half of the window: the
/// finite surrogate for "contained in all but finitely many sets".
pub fn stable_core(seq: &ExhaustingSequence, window: usize) -> BTreeSet<VertexId> {
    let window = window.min(seq.len());
    if window == 0 {
        return BTreeSet::new();
    }
    let from = window / 2; // 0-based index of the first set in the top half
    let mut iter = seq.sets()[from..window].iter();
    let mut core = iter.next().cloned().unwrap_or_default();
    for s in iter {
        core = core.intersection(s).cloned().collect();
    }
    core
}

/// A partition of the declared strictly-smaller ends plus the end itself,
/// with the separator priced into the plan.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct PartitionPlan {
    /// Ends separated away (by S, together with the dominators).
    pub a: Vec<String>,
    /// Ends whose in-degrees are counted, ordered compatibly with the
    /// declared order, the analysed end last.
    pub b: Vec<String>,
    /// The separator realising the split.
    pub s: Vec<VertexId>,
}

/// Combines per-end graded sequences along a partition plan: `V_1` is `S`
/// with every first set, `V_i` keeps the first sets of all but the last
/// end and lets the last end's sequence run.
pub fn sequence_from_partition(
    g: &LevelledDigraph,
    plan: &PartitionPlan,
    per_end: &BTreeMap<String, ExhaustingSequence>,
) -> Result<ExhaustingSequence> {
    if plan.b.is_empty() {
        return Err(Error::Precondition("plan must keep at least the end itself".into()));
    }
    if plan.a.iter().any(|x| plan.b.contains(x)) {
        return Err(Error::Precondition("plan sides overlap".into()));
    }
    for name in &plan.b {
        if !per_end.contains_key(name) {
            return Err(Error::Precondition(format!("missing graded sequence for {name}")));
        }
        if g.end(name).is_err() {
            return Err(Error::UnknownEnd(name.clone()));
        }
    }
    let s: BTreeSet<VertexId> = plan.s.iter().cloned().collect();
    let last = plan.b.last().unwrap();
    let last_seq = &per_end[last];
    let mut fixed: BTreeSet<VertexId> = s.clone();
    for name in &plan.b[..plan.b.len() - 1] {
        if let Some(u1) = per_end[name].set(1) {
            fixed.extend(u1.iter().cloned());
        }
    }
    let mut sets = Vec::new();
    for i in 1..=last_seq.len() {
        let mut v: BTreeSet<VertexId> = fixed.clone();
        v.extend(last_seq.set(i).unwrap().iter().cloned());
        sets.push(v);
    }
    Ok(ExhaustingSequence::new(sets))
}
