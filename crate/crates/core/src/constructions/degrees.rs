//! Combined in-degree and its two dual descriptions: the partition
//! minimum over separators plus in-degrees, and the best verified
//! exhausting-sequence limit inferior.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::digraph::{LevelledDigraph, VertexId};
use crate::ends::{self, Estimate};
use crate::error::{Error, Result};
use crate::flow;
use crate::presentation::EndDescriptor;

use super::sequences::{
    self, graded_sequence, sequence_from_partition, verify_exhausting, ExhaustingSequence,
    PartitionPlan,
};

/// The estimated degree quantities of one end at one depth and threshold.
#[derive(Clone, Debug, Serialize)]
pub struct DegreeReport {
    pub end: String,
    pub depth: u32,
    pub threshold: u32,
    pub d_minus: Estimate,
    pub d_plus: Estimate,
    /// d_minus plus the minimum separator of the declared smaller ends and
    /// certified dominators from the end.
    pub delta_cap: Estimate,
    /// Partition form: min over plans of |S| + sum of in-degrees.
    pub delta_small: Estimate,
    /// Best verified exhausting-sequence liminf found by the schema search.
    pub k_upper: Option<usize>,
    pub plan: PartitionPlan,
    pub separator: Vec<VertexId>,
    pub certified_dominators: Vec<VertexId>,
    pub notes: Vec<String>,
}

fn sum_estimates(parts: &[Estimate]) -> Estimate {
    let total: u32 = parts.iter().map(Estimate::value).sum();
    if parts.iter().all(Estimate::is_exact) {
        Estimate::Exact(total)
    } else {
        Estimate::AtLeast(total)
    }
}

/// The end's canonical ray restricted to the deep half of the window: the
/// tail that separation statements quantify over.
fn tail_band(g: &LevelledDigraph, end: &EndDescriptor) -> Vec<VertexId> {
    let half = g.depth() / 2;
    end.ray_vertices(g)
        .into_iter()
        .filter(|v| g.level(v).is_some_and(|l| l >= half))
        .collect()
}

fn certified_dominators(
    g: &LevelledDigraph,
    end: &EndDescriptor,
    t: u32,
) -> Result<Vec<VertexId>> {
    let mut out = Vec::new();
    for v in end.dominating_candidates() {
        if g.contains(v) && ends::dominates(g, v, end, t)? {
            out.push(v.clone());
        }
    }
    Ok(out)
}

fn resolve_smaller<'g>(
    g: &'g LevelledDigraph,
    end: &EndDescriptor,
) -> Result<Vec<&'g EndDescriptor>> {
    end.smaller_ends().iter().map(|n| g.end(n)).collect()
}

/// Separator of the given ends (by their canonical rays) and the given
/// dominator vertices from the tails of the `kept` ends. Empty target side
/// means an empty separator.
///
/// Sources are tails and stay uncuttable (a deeper tail dodges any finite
/// set); ray representatives of the separated ends are uncuttable too,
/// since cutting a representative would not intercept the end's other
/// rays. Dominators are single vertices and may be cut directly.
fn separate(
    g: &LevelledDigraph,
    kept: &[&EndDescriptor],
    away: &[&EndDescriptor],
    dominators: &[VertexId],
) -> Result<Vec<VertexId>> {
    let mut reps: Vec<VertexId> = Vec::new();
    for e in away {
        reps.extend(e.ray_vertices(g));
    }
    let mut targets = reps.clone();
    targets.extend(dominators.iter().cloned());
    if targets.is_empty() {
        return Ok(Vec::new());
    }
    let mut protected: Vec<VertexId> = Vec::new();
    for e in kept {
        protected.extend(tail_band(g, e));
    }
    let sources = protected.clone();
    protected.extend(reps);
    let cert = flow::min_vertex_separator(g, &sources, &targets, &protected)?;
    Ok(cert.separator)
}

/// Minimum over all partitions `(A, B)` of the declared smaller ends with
/// the end itself kept in `B`: separator size plus the in-degree sum over
/// `B`. Ties prefer plans with smaller `B`, then lexicographic `B`.
pub fn delta_minus(
    g: &LevelledDigraph,
    end: &EndDescriptor,
    t: u32,
) -> Result<(Estimate, PartitionPlan)> {
    let smaller = resolve_smaller(g, end)?;
    if smaller.len() > 15 {
        return Err(Error::TooManyEnds(smaller.len()));
    }
    let dom = certified_dominators(g, end, t)?;

    let mut best: Option<(Estimate, PartitionPlan)> = None;
    for mask in 0u32..(1 << smaller.len()) {
        let mut b_ends: Vec<&EndDescriptor> = Vec::new();
        let mut a_ends: Vec<&EndDescriptor> = Vec::new();
        for (i, e) in smaller.iter().enumerate() {
            if mask & (1 << i) != 0 {
                b_ends.push(e);
            } else {
                a_ends.push(e);
            }
        }
        // order B compatibly with the declared partial order, the end last
        b_ends.sort_by(|x, y| {
            let key = |e: &&EndDescriptor| (e.smaller_ends().len(), e.name().to_owned());
            key(x).cmp(&key(y))
        });
        b_ends.push(end);

        let separator = match separate(g, &b_ends, &a_ends, &dom) {
            Ok(s) => s,
            Err(Error::Infeasible { .. }) => continue,
            Err(e) => return Err(e),
        };
        let mut parts = vec![Estimate::Exact(separator.len() as u32)];
        for e in &b_ends {
            parts.push(ends::in_degree_estimate(g, e, t)?);
        }
        let value = sum_estimates(&parts);
        let plan = PartitionPlan {
            a: a_ends.iter().map(|e| e.name().to_owned()).collect(),
            b: b_ends.iter().map(|e| e.name().to_owned()).collect(),
            s: separator,
        };
        let better = match &best {
            None => true,
            Some((bv, bp)) => {
                (value.value(), plan.b.len(), plan.b.clone())
                    < (bv.value(), bp.b.len(), bp.b.clone())
            }
        };
        if better {
            best = Some((value, plan));
        }
    }
    best.ok_or_else(|| Error::Infeasible {
        reason: "no feasible partition".into(),
        separator: Vec::new(),
    })
}

/// Builds the level-band cut sequence: `U_i` collects the vertices of the
/// `i`-th span-wide level band. A trivially exhausting baseline.
fn level_band_sequence(g: &LevelledDigraph) -> ExhaustingSequence {
    let s = g.span().max(1);
    let mut sets = Vec::new();
    let mut lo = 0;
    while lo <= g.depth() {
        let band: BTreeSet<VertexId> = g
            .vertices()
            .filter(|v| {
                let l = g.level(v).unwrap();
                l >= lo && l < lo + s
            })
            .cloned()
            .collect();
        if !band.is_empty() {
            sets.push(band);
        }
        lo += s;
    }
    if sets.is_empty() {
        sets.push(BTreeSet::new());
    }
    ExhaustingSequence::new(sets)
}

/// Runs the partition plan through per-end graded sequences.
fn partition_schema(
    g: &LevelledDigraph,
    plan: &PartitionPlan,
    t: u32,
) -> Result<ExhaustingSequence> {
    let s: BTreeSet<VertexId> = plan.s.iter().cloned().collect();
    let mut per_end = BTreeMap::new();
    let mut used: BTreeSet<VertexId> = s.clone();
    for name in &plan.b {
        let e = g.end(name)?.clone();
        let d = match ends::in_degree_estimate(g, &e, t)? {
            Estimate::Exact(d) => d,
            Estimate::AtLeast(_) => {
                return Err(Error::Precondition(format!(
                    "in-degree of {name} saturated the threshold"
                )))
            }
        };
        let seq = graded_sequence(g, &e, &used, d)?;
        if let Some(u1) = seq.set(1) {
            used.extend(u1.iter().cloned());
        }
        per_end.insert(name.clone(), seq);
    }
    sequence_from_partition(g, plan, &per_end)
}

/// Full degree report: both degrees, the separator form of the combined
/// in-degree, the partition minimum, and the best verified
/// exhausting-sequence liminf.
pub fn combined_in_degree(
    g: &LevelledDigraph,
    end: &EndDescriptor,
    t: u32,
) -> Result<DegreeReport> {
    let d_minus = ends::in_degree_estimate(g, end, t)?;
    let d_plus = ends::out_degree_estimate(g, end, t)?;
    let dom = certified_dominators(g, end, t)?;
    let smaller = resolve_smaller(g, end)?;

    let separator = separate(g, &[end], &smaller, &dom)?;
    let delta_cap = d_minus.add_exact(separator.len() as u32);
    let (delta_small, plan) = delta_minus(g, end, t)?;

    let mut notes = vec![
        "end membership approximated by two-way linkage in the top two frontier bands".into(),
    ];
    let mut k_upper: Option<usize> = None;
    let mut winner = "";
    let mut candidates: Vec<(&str, Result<ExhaustingSequence>)> = vec![
        ("level-bands", Ok(level_band_sequence(g))),
        (
            "graded-plus-separator",
            match d_minus {
                Estimate::Exact(d) if d >= 1 => {
                    let s: BTreeSet<VertexId> = separator.iter().cloned().collect();
                    graded_sequence(g, end, &s, d).map(|seq| seq.union_each(&s))
                }
                _ => Err(Error::Precondition("in-degree unusable for grading".into())),
            },
        ),
        ("partition", partition_schema(g, &plan, t)),
    ];
    for (name, cand) in candidates.drain(..) {
        match cand {
            Err(e) => notes.push(format!("schema {name} skipped: {e}")),
            Ok(seq) => match verify_exhausting(g, end, &seq, 200)? {
                sequences::Verdict::Pass { .. } => {
                    let lim = seq.liminf_size();
                    if k_upper.is_none_or(|k| lim < k) {
                        k_upper = Some(lim);
                        winner = name;
                    }
                }
                sequences::Verdict::Fail { violated_index, .. } => {
                    notes.push(format!("schema {name} rejected at index {violated_index}"));
                }
            },
        }
    }
    if !winner.is_empty() {
        notes.push(format!("k_upper attained by schema {winner}"));
    }

    Ok(DegreeReport {
        end: end.name().to_owned(),
        depth: g.depth(),
        threshold: t,
        d_minus,
        d_plus,
        delta_cap,
        delta_small,
        k_upper,
        plan,
        separator,
        certified_dominators: dom,
        notes,
    })
}

impl DegreeReport {
    /// Human-readable rendering mirrored one-to-one by the JSON form.
    pub fn render_text(&self) -> String {
        let mut s = String::new();
        s.push_str(&format!(
            "end {} at depth {} (threshold {})\n",
            self.end, self.depth, self.threshold
        ));
        s.push_str(&format!("  d_minus     = {}\n", self.d_minus));
        s.push_str(&format!("  d_plus      = {}\n", self.d_plus));
        s.push_str(&format!("  delta_cap   = {}\n", self.delta_cap));
        s.push_str(&format!("  delta_small = {}\n", self.delta_small));
        match self.k_upper {
            Some(k) => s.push_str(&format!("  k_upper     = {k}\n")),
            None => s.push_str("  k_upper     = (no verified sequence)\n"),
        }
        s.push_str(&format!(
            "  plan: A={:?} B={:?} S={:?}\n",
            self.plan.a, self.plan.b, self.plan.s
        ));
        s.push_str(&format!("  separator   = {:?}\n", self.separator));
        s.push_str(&format!("  dominators  = {:?}\n", self.certified_dominators));
        for n in &self.notes {
            s.push_str(&format!("  note: {n}\n"));
        }
        s
    }
}
