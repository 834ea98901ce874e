//! Level-indexed finite presentations of infinite digraphs, their declared
//! ends, and truncation to [`LevelledDigraph`] values.
//!
//! Ends are declared, not discovered: a presentation names each end it
//! wants analysed and supplies a canonical ray (and, when one exists, a
//! canonical anti-ray) as a partial function from levels to vertices.

use std::fmt;
use std::sync::Arc;

use crate::digraph::{DigraphBuilder, LevelledDigraph, VertexId};
use crate::error::{Error, Result};

type LevelFn = Arc<dyn Fn(u32) -> Option<VertexId> + Send + Sync>;

/// A declared end: a name, anchor rays, dominating-vertex candidates and
/// the names of the declared ends strictly below it.
#[derive(Clone)]
pub struct EndDescriptor {
    name: String,
    ray: Option<LevelFn>,
    antiray: Option<LevelFn>,
    dominating_candidates: Vec<VertexId>,
    smaller_ends: Vec<String>,
}

impl fmt::Debug for EndDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EndDescriptor({})", self.name)
    }
}

impl EndDescriptor {
    pub fn new(name: impl Into<String>) -> Self {
        EndDescriptor {
            name: name.into(),
            ray: None,
            antiray: None,
            dominating_candidates: Vec::new(),
            smaller_ends: Vec::new(),
        }
    }

    pub fn with_ray<F>(mut self, f: F) -> Self
    where
        F: Fn(u32) -> Option<VertexId> + Send + Sync + 'static,
    {
        self.ray = Some(Arc::new(f));
        self
    }

    pub fn with_antiray<F>(mut self, f: F) -> Self
    where
        F: Fn(u32) -> Option<VertexId> + Send + Sync + 'static,
    {
        self.antiray = Some(Arc::new(f));
        self
    }

    pub fn with_dominating_candidates(mut self, cands: Vec<VertexId>) -> Self {
        self.dominating_candidates = cands;
        self
    }

    pub fn with_smaller_ends(mut self, names: Vec<String>) -> Self {
        self.smaller_ends = names;
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Canonical ray vertex at the given level, when defined.
    pub fn canonical_ray(&self, level: u32) -> Option<VertexId> {
        self.ray.as_ref().and_then(|f| f(level))
    }

    /// Canonical anti-ray anchor at the given level, when one is declared.
    pub fn canonical_antiray(&self, level: u32) -> Option<VertexId> {
        self.antiray.as_ref().and_then(|f| f(level))
    }

    pub fn has_ray(&self) -> bool {
        self.ray.is_some()
    }

    pub fn has_antiray(&self) -> bool {
        self.antiray.is_some()
    }

    pub fn dominating_candidates(&self) -> &[VertexId] {
        &self.dominating_candidates
    }

    pub fn smaller_ends(&self) -> &[String] {
        &self.smaller_ends
    }

    /// Anchor vertices of the canonical ray present in `g`, ascending level.
    pub fn ray_vertices(&self, g: &LevelledDigraph) -> Vec<VertexId> {
        (0..=g.depth())
            .filter_map(|l| self.canonical_ray(l))
            .filter(|v| g.contains(v))
            .collect()
    }

    pub fn antiray_vertices(&self, g: &LevelledDigraph) -> Vec<VertexId> {
        (0..=g.depth())
            .filter_map(|l| self.canonical_antiray(l))
            .filter(|v| g.contains(v))
            .collect()
    }

    /// The same end seen from the reversed digraph: ray and anti-ray
    /// anchors swap roles.
    pub fn reversed(&self) -> EndDescriptor {
        EndDescriptor {
            name: self.name.clone(),
            ray: self.antiray.clone(),
            antiray: self.ray.clone(),
            dominating_candidates: self.dominating_candidates.clone(),
            smaller_ends: self.smaller_ends.clone(),
        }
    }
}

/// Generator interface for an infinite digraph: finitely many vertices per
/// level, out-edges emitted in a fixed deterministic order.
pub trait Presentation {
    fn name(&self) -> &str;

    /// Upper bound on `|level(u) - level(v)|` over edges whose source lies
    /// at level `<= depth`. Built-in families with level-crossing shortcut
    /// edges grow this with depth; everything else returns a constant.
    fn span_bound(&self, depth: u32) -> u32;

    /// The (finitely many) vertices at a level, in emission order.
    fn vertices_at(&self, level: u32) -> Vec<VertexId>;

    /// Out-edges of `v` with target level `<= max_level`, in emission order.
    fn out_edges(&self, v: &VertexId, max_level: u32) -> Vec<VertexId>;

    fn ends(&self) -> Vec<EndDescriptor>;
}

/// Builds the finite truncation containing exactly the vertices of levels
/// `0..=depth` and all presented edges between them.
///
/// Deterministic: identical inputs give identical digraphs including edge
/// order. Edges leaving the level window are dropped with their targets.
pub fn truncate(p: &dyn Presentation, depth: u32) -> Result<LevelledDigraph> {
    let bound = p.span_bound(depth);
    let mut b = DigraphBuilder::new(p.name(), depth);
    let mut order = Vec::new();
    let mut levels = std::collections::BTreeMap::new();
    for level in 0..=depth {
        for v in p.vertices_at(level) {
            b.add_vertex(v.clone(), level)?;
            levels.insert(v.tag().to_owned(), level);
            order.push((v, level));
        }
    }
    for (v, level) in &order {
        for w in p.out_edges(v, depth) {
            let wl = *levels.get(w.tag()).ok_or_else(|| {
                Error::PresentationInvalid(format!("edge {v} -> {w} targets an unemitted vertex"))
            })?;
            if level.abs_diff(wl) > bound {
                return Err(Error::PresentationInvalid(format!(
                    "edge {v} -> {w} spans {} levels, above the bound {bound}",
                    level.abs_diff(wl)
                )));
            }
            b.add_edge(v, &w)?;
        }
    }
    b.set_ends(p.ends());
    Ok(b.finish())
}

#[cfg(test)]
mod tests {
    use super::*;

    struct SingleRay;

    impl Presentation for SingleRay {
        fn name(&self) -> &str {
            "singleray"
        }
        fn span_bound(&self, _depth: u32) -> u32 {
            1
        }
        fn vertices_at(&self, level: u32) -> Vec<VertexId> {
            vec![VertexId::new(format!("r{level}"))]
        }
        fn out_edges(&self, v: &VertexId, max_level: u32) -> Vec<VertexId> {
            let k: u32 = v.tag()[1..].parse().unwrap();
            if k < max_level {
                vec![VertexId::new(format!("r{}", k + 1))]
            } else {
                vec![]
            }
        }
        fn ends(&self) -> Vec<EndDescriptor> {
            vec![EndDescriptor::new("omega")
                .with_ray(|l| Some(VertexId::new(format!("r{l}"))))]
        }
    }

    #[test]
    fn truncate_single_ray() {
        let g = truncate(&SingleRay, 5).unwrap();
        assert_eq!(g.vertex_count(), 6);
        assert_eq!(g.edge_count(), 5);
        assert_eq!(g.span(), 1);
        assert_eq!(g.frontier(), vec![VertexId::new("r5")]);
    }

    #[test]
    fn truncate_deterministic_and_coherent() {
        let g5 = truncate(&SingleRay, 5).unwrap();
        let g5b = truncate(&SingleRay, 5).unwrap();
        assert_eq!(g5, g5b);
        let g9 = truncate(&SingleRay, 9).unwrap();
        assert_eq!(g9.restrict_to_levels(5), g5);
    }

    #[test]
    fn end_lookup() {
        let g = truncate(&SingleRay, 3).unwrap();
        assert!(g.end("omega").is_ok());
        assert!(matches!(g.end("nope"), Err(Error::UnknownEnd(_))));
    }

    struct LyingSpan;

    impl Presentation for LyingSpan {
        fn name(&self) -> &str {
            "lying"
        }
        fn span_bound(&self, _depth: u32) -> u32 {
            1
        }
        fn vertices_at(&self, level: u32) -> Vec<VertexId> {
            vec![VertexId::new(format!("r{level}"))]
        }
        fn out_edges(&self, v: &VertexId, max_level: u32) -> Vec<VertexId> {
            // jumps three levels, above its declared bound
            let k: u32 = v.tag()[1..].parse().unwrap();
            if k + 3 <= max_level { vec![VertexId::new(format!("r{}", k + 3))] } else { Default::default() }
        }
        fn ends(&self) -> Vec<EndDescriptor> {
            Vec::new()
        }
    }

    #[test]
    fn span_violations_are_rejected() {
        assert!(matches!(
            truncate(&LyingSpan, 5),
            Err(Error::PresentationInvalid(_))
        ));
    }

    #[test]
    fn digraphs_are_shareable_between_tasks() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<crate::digraph::LevelledDigraph>();
        assert_send_sync::<EndDescriptor>();
    }
}
