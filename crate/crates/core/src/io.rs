//! Serialization of truncations: a JSON document that round-trips exactly,
//! and a DOT rendering with `pos` layout hints taken from coordinates.

use serde::{Deserialize, Serialize};

use crate::digraph::{DigraphBuilder, LevelledDigraph, VertexId};
use crate::error::{Error, Result};

#[derive(Serialize, Deserialize)]
struct VertexDoc {
    id: String,
    level: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    coord: Option<Vec<i64>>,
}

#[derive(Serialize, Deserialize)]
struct DigraphDoc {
    name: String,
    depth: u32,
    span: u32,
    vertices: Vec<VertexDoc>,
    edges: Vec<[String; 2]>,
}

pub fn to_json(g: &LevelledDigraph) -> String {
    let doc = DigraphDoc {
        name: g.name().to_owned(),
        depth: g.depth(),
        span: g.span(),
        vertices: g
            .vertices()
            .map(|v| VertexDoc {
                id: v.tag().to_owned(),
                level: g.level(v).unwrap(),
                coord: v.coord().map(<[i64]>::to_vec),
            })
            .collect(),
        edges: g
            .edges()
            .map(|(u, v)| [u.tag().to_owned(), v.tag().to_owned()])
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("digraph document serializes")
}

/// Parses and validates a JSON digraph document. Imported digraphs carry
/// no end declarations.
pub fn from_json(text: &str) -> Result<LevelledDigraph> {
    let doc: DigraphDoc =
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let mut b = DigraphBuilder::new(doc.name, doc.depth);
    for v in doc.vertices {
        let id = match v.coord {
            Some(c) => VertexId::with_coord(v.id, c),
            None => VertexId::new(v.id),
        };
        b.add_vertex(id, v.level)?;
    }
    for [u, v] in &doc.edges {
        b.add_edge(&VertexId::new(u.as_str()), &VertexId::new(v.as_str()))?;
    }
    let g = b.finish();
    if g.span() != doc.span {
        return Err(Error::LevelViolation(format!(
            "declared span {} but edges span {}",
            doc.span,
            g.span()
        )));
    }
    Ok(g)
}

/// DOT rendering: one node per vertex named by its id, `pos` hints when the
/// vertex has coordinates. Coordinates `[a, b, ...]` map to `pos = (last, -first)`
/// so row-indexed families come out with row 0 on top.
pub fn to_dot(g: &LevelledDigraph) -> String {
    let mut s = String::new();
    s.push_str(&format!("digraph \"{}\" {{\n", g.name()));
    for v in g.vertices() {
        match v.coord() {
            Some(c) if c.len() >= 2 => {
                s.push_str(&format!(
                    "  \"{}\" [pos=\"{},{}!\"];\n",
                    v.tag(),
                    c[c.len() - 1],
                    -c[0]
                ));
            }
            _ => s.push_str(&format!("  \"{}\";\n", v.tag())),
        }
    }
    for (u, v) in g.edges() {
        s.push_str(&format!("  \"{}\" -> \"{}\";\n", u.tag(), v.tag()));
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph::from_edges;

    #[test]
    fn json_round_trip_is_identity() {
        let g = from_edges(3, &[(0, 1), (1, 2), (0, 2)]);
        let back = from_json(&to_json(&g)).unwrap();
        assert_eq!(g, back);
    }

    #[test]
    fn minimal_document() {
        let text = r#"{"name":"m","depth":1,"span":1,
            "vertices":[{"id":"a","level":0},{"id":"b","level":1}],
            "edges":[["a","b"]]}"#;
        let g = from_json(text).unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn dangling_edge_rejected() {
        let text = r#"{"name":"m","depth":0,"span":0,
            "vertices":[{"id":"a","level":0}],
            "edges":[["a","zz"]]}"#;
        assert!(matches!(from_json(text), Err(Error::DanglingEndpoint(_))));
    }

    #[test]
    fn level_violation_rejected() {
        let text = r#"{"name":"m","depth":0,"span":0,
            "vertices":[{"id":"a","level":3}],
            "edges":[]}"#;
        assert!(matches!(from_json(text), Err(Error::LevelViolation(_))));
    }

    #[test]
    fn garbage_rejected() {
        assert!(matches!(from_json("not json"), Err(Error::Parse(_))));
    }
}
