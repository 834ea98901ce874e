//! Vertex splitting: every vertex `u` becomes `u-` and `u+` joined by the
//! edge `u- -> u+`, every original edge `u -> v` becomes `u+ -> v-`. Edge
//! disjointness in the split digraph mirrors vertex disjointness in the
//! original.

use crate::digraph::VertexId;
use crate::presentation::{EndDescriptor, Presentation};

fn minus(v: &VertexId) -> VertexId {
    match v.coord() {
        Some(c) => VertexId::with_coord(format!("{}-", v.tag()), c.to_vec()),
        None => VertexId::new(format!("{}-", v.tag())),
    }
}

fn plus(v: &VertexId) -> VertexId {
    match v.coord() {
        Some(c) => VertexId::with_coord(format!("{}+", v.tag()), c.to_vec()),
        None => VertexId::new(format!("{}+", v.tag())),
    }
}

/// The split of a presentation. Levels are inherited (both copies sit at
/// the original's level); declared ends carry over through the image of
/// their canonical rays.
pub struct SplitPresentation<P> {
    base: P,
    name: String,
}

pub fn edge_split<P: Presentation>(base: P) -> SplitPresentation<P> {
    let name = format!("{}-split", base.name());
    SplitPresentation { base, name }
}

impl<P: Presentation> Presentation for SplitPresentation<P> {
    fn name(&self) -> &str {
        &self.name
    }

    fn span_bound(&self, depth: u32) -> u32 {
        self.base.span_bound(depth)
    }

    fn vertices_at(&self, level: u32) -> Vec<VertexId> {
        self.base
            .vertices_at(level)
            .iter()
            .flat_map(|v| [minus(v), plus(v)])
            .collect()
    }

    fn out_edges(&self, v: &VertexId, max_level: u32) -> Vec<VertexId> {
        let tag = v.tag();
        if let Some(orig) = tag.strip_suffix('-') {
            vec![plus(&VertexId::new(orig))]
        } else if let Some(orig) = tag.strip_suffix('+') {
            self.base
                .out_edges(&VertexId::new(orig), max_level)
                .iter()
                .map(minus)
                .collect()
        } else {
            Vec::new()
        }
    }

    fn ends(&self) -> Vec<EndDescriptor> {
        self.base
            .ends()
            .into_iter()
            .map(|e| {
                let ray_src = e.clone();
                let anti_src = e.clone();
                let mut out = EndDescriptor::new(e.name().to_owned())
                    .with_dominating_candidates(
                        e.dominating_candidates().iter().map(plus).collect(),
                    )
                    .with_smaller_ends(e.smaller_ends().to_vec());
                if e.has_ray() {
                    out = out.with_ray(move |l| ray_src.canonical_ray(l).map(|v| minus(&v)));
                }
                if e.has_antiray() {
                    out =
                        out.with_antiray(move |l| anti_src.canonical_antiray(l).map(|v| minus(&v)));
                }
                out
            })
            .collect()
    }
}
