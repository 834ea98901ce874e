//! Built-in presentation families addressable by name.
//!
//! `counterexample` is the planar digraph with infinitely many disjoint
//! rays and anti-rays in which every ray meets every anti-ray; `example52`
//! is the three-row digraph whose end has in-degree 1 but combined
//! in-degree 2. `halfgrid`, `ladder` and `krays` are richly connected test
//! families for the constructive procedures.

use std::collections::BTreeMap;

use crate::digraph::VertexId;
use crate::error::{Error, Result};
use crate::presentation::{EndDescriptor, Presentation};

/// i-th triangular number, `0, 1, 3, 6, 10, ...`
pub(crate) fn tri(i: u32) -> u32 {
    i * (i + 1) / 2
}

/// First index of row `i >= 1`: `tri(i-1) + 1`.
pub(crate) fn row_start(i: u32) -> u32 {
    tri(i - 1) + 1
}

pub(crate) fn cx_vertex(i: u32, k: u32) -> VertexId {
    VertexId::with_coord(format!("x{i}_{k}"), vec![i as i64, k as i64])
}

fn parse_cx(tag: &str) -> Option<(u32, u32)> {
    let rest = tag.strip_prefix('x')?;
    let (i, k) = rest.split_once('_')?;
    Some((i.parse().ok()?, k.parse().ok()?))
}

/// Decomposes `k = tri(j) + k'` with `1 <= k' <= j`, the unique reading
/// under which `x^1_k` carries a diagonal edge. Triangular `k` itself has
/// no such reading.
pub(crate) fn diagonal_of(k: u32) -> Option<(u32, u32)> {
    if k < 2 {
        return None;
    }
    let mut j = 1;
    while tri(j + 1) < k {
        j += 1;
    }
    // tri(j) < k <= tri(j+1)
    let kp = k - tri(j);
    (kp <= j).then_some((j, kp))
}

/// The ray/anti-ray counterexample digraph: rays `R_i` on the vertices
/// `x^i_k` for `k >= tri(i-1)+1`, down edges `x^{i+1}_k -> x^i_k`, and
/// diagonal edges `x^1_{tri(i)+k'} -> x^i_{tri(i-1)+k'}` for `k'` in
/// `1..=i`. Levels are the indices `k`.
pub struct Counterexample {
    /// Include the `i = 1` instance of the diagonal formula, a backward
    /// edge inside `R_1` that the planar embedding leaves out.
    unit_diagonals: bool,
}

/// The counterexample with diagonals for `i >= 2` only, the variant whose
/// planar rotation system the verification suite checks.
pub fn counterexample() -> Counterexample {
    Counterexample { unit_diagonals: false }
}

/// Opt-in variant that instantiates the diagonal formula at `i = 1` too.
pub fn counterexample_with_unit_diagonals() -> Counterexample {
    Counterexample { unit_diagonals: true }
}

impl Counterexample {
    fn diagonal_target(&self, k: u32) -> Option<VertexId> {
        let (j, kp) = diagonal_of(k)?;
        if j == 1 && !self.unit_diagonals {
            return None;
        }
        Some(cx_vertex(j, tri(j - 1) + kp))
    }
}

impl Presentation for Counterexample {
    fn name(&self) -> &str {
        "counterexample"
    }

    fn span_bound(&self, depth: u32) -> u32 {
        let mut s = 1;
        let mut i = 2;
        while tri(i) < depth {
            s = i;
            i += 1;
        }
        s
    }

    fn vertices_at(&self, level: u32) -> Vec<VertexId> {
        if level == 0 {
            return Vec::new();
        }
        let mut vs = Vec::new();
        let mut i = 1;
        while row_start(i) <= level {
            vs.push(cx_vertex(i, level));
            i += 1;
        }
        vs
    }

    fn out_edges(&self, v: &VertexId, max_level: u32) -> Vec<VertexId> {
        let Some((i, k)) = parse_cx(v.tag()) else {
            return Vec::new();
        };
        let mut out = Vec::new();
        if k < max_level {
            out.push(cx_vertex(i, k + 1));
        }
        if i >= 2 {
            out.push(cx_vertex(i - 1, k));
        }
        if i == 1 {
            if let Some(w) = self.diagonal_target(k) {
                out.push(w);
            }
        }
        out
    }

    fn ends(&self) -> Vec<EndDescriptor> {
        vec![EndDescriptor::new("omega")
            .with_ray(|l| (l >= 1).then(|| cx_vertex(1, l)))
            .with_antiray(|l| {
                // anchors where the first colour anti-ray crosses R_1
                (l >= 2 && diagonal_of(l).map(|(_, kp)| kp) == Some(1)).then(|| cx_vertex(1, l))
            })]
    }
}

/// The three-row digraph of the combined-in-degree example: middle ray
/// `b`, top ray `a` feeding it at every column, bottom anti-ray `c` linked
/// to `b` with column-parity verticals, and the arc `c0 -> a0`.
pub struct Example52;

pub fn example52() -> Example52 {
    Example52
}

fn e52(row: char, j: u32) -> VertexId {
    let r = match row {
        'a' => 0,
        'b' => 1,
        _ => 2,
    };
    VertexId::with_coord(format!("{row}{j}"), vec![r, j as i64])
}

fn parse_e52(tag: &str) -> Option<(char, u32)> {
    let row = tag.chars().next()?;
    if !"abc".contains(row) {
        return None;
    }
    Some((row, tag[1..].parse().ok()?))
}

impl Presentation for Example52 {
    fn name(&self) -> &str {
        "example52"
    }

    fn span_bound(&self, _depth: u32) -> u32 {
        1
    }

    fn vertices_at(&self, level: u32) -> Vec<VertexId> {
        vec![e52('a', level), e52('b', level), e52('c', level)]
    }

    fn out_edges(&self, v: &VertexId, max_level: u32) -> Vec<VertexId> {
        let Some((row, j)) = parse_e52(v.tag()) else {
            return Vec::new();
        };
        let mut out = Vec::new();
        match row {
            'a' => {
                if j < max_level {
                    out.push(e52('a', j + 1));
                }
                out.push(e52('b', j));
            }
            'b' => {
                if j < max_level {
                    out.push(e52('b', j + 1));
                }
                if j % 2 == 1 {
                    out.push(e52('c', j));
                }
            }
            _ => {
                if j >= 1 {
                    out.push(e52('c', j - 1));
                }
                if j % 2 == 0 {
                    out.push(e52('b', j));
                }
                if j == 0 {
                    out.push(e52('a', 0));
                }
            }
        }
        out
    }

    fn ends(&self) -> Vec<EndDescriptor> {
        vec![
            EndDescriptor::new("omega")
                .with_ray(|l| Some(e52('b', l)))
                .with_antiray(|l| Some(e52('c', l)))
                .with_smaller_ends(vec!["eta".into()]),
            EndDescriptor::new("eta").with_ray(|l| Some(e52('a', l))),
        ]
    }
}

/// Directed half-grid: rows are rays, neighbouring rows joined by rungs in
/// both directions at every column, level of `(r, c)` is `r + c`. Its one
/// declared end has unbounded in-degree.
pub struct Halfgrid;

pub fn halfgrid() -> Halfgrid {
    Halfgrid
}

fn hg(r: u32, c: u32) -> VertexId {
    VertexId::with_coord(format!("h{r}_{c}"), vec![r as i64, c as i64])
}

fn parse_hg(tag: &str) -> Option<(u32, u32)> {
    let rest = tag.strip_prefix('h')?;
    let (r, c) = rest.split_once('_')?;
    Some((r.parse().ok()?, c.parse().ok()?))
}

impl Presentation for Halfgrid {
    fn name(&self) -> &str {
        "halfgrid"
    }

    fn span_bound(&self, _depth: u32) -> u32 {
        1
    }

    fn vertices_at(&self, level: u32) -> Vec<VertexId> {
        (0..=level).map(|r| hg(r, level - r)).collect()
    }

    fn out_edges(&self, v: &VertexId, max_level: u32) -> Vec<VertexId> {
        let Some((r, c)) = parse_hg(v.tag()) else {
            return Vec::new();
        };
        let mut out = Vec::new();
        if r + c < max_level {
            out.push(hg(r, c + 1));
            out.push(hg(r + 1, c));
        }
        if r >= 1 {
            out.push(hg(r - 1, c));
        }
        out
    }

    fn ends(&self) -> Vec<EndDescriptor> {
        vec![EndDescriptor::new("omega").with_ray(|l| Some(hg(0, l)))]
    }
}

/// Bidirected ladder with `rows` ray rails (`u`) and `rows` anti-ray rails
/// (`w`), rungs alternating by column parity so all rails share one end.
pub struct Ladder {
    rows: u32,
}

pub fn ladder(rows: u32) -> Ladder {
    Ladder { rows }
}

fn lad(kind: char, r: u32, c: u32) -> VertexId {
    let visual = 2 * r + u32::from(kind == 'w');
    VertexId::with_coord(format!("{kind}{r}_{c}"), vec![visual as i64, c as i64])
}

fn parse_lad(tag: &str) -> Option<(char, u32, u32)> {
    let kind = tag.chars().next()?;
    if kind != 'u' && kind != 'w' {
        return None;
    }
    let (r, c) = tag[1..].split_once('_')?;
    Some((kind, r.parse().ok()?, c.parse().ok()?))
}

impl Presentation for Ladder {
    fn name(&self) -> &str {
        "ladder"
    }

    fn span_bound(&self, _depth: u32) -> u32 {
        1
    }

    fn vertices_at(&self, level: u32) -> Vec<VertexId> {
        (0..self.rows)
            .flat_map(|r| [lad('u', r, level), lad('w', r, level)])
            .collect()
    }

    fn out_edges(&self, v: &VertexId, max_level: u32) -> Vec<VertexId> {
        let Some((kind, r, c)) = parse_lad(v.tag()) else {
            return Vec::new();
        };
        let mut out = Vec::new();
        if kind == 'u' {
            if c < max_level {
                out.push(lad('u', r, c + 1));
            }
            if c % 2 == 1 {
                out.push(lad('w', r, c));
            }
            if r >= 1 && c % 2 == 0 {
                out.push(lad('w', r - 1, c));
            }
        } else {
            if c >= 1 {
                out.push(lad('w', r, c - 1));
            }
            if c % 2 == 0 {
                out.push(lad('u', r, c));
            }
            if r + 1 < self.rows && c % 2 == 1 {
                out.push(lad('u', r + 1, c));
            }
        }
        out
    }

    fn ends(&self) -> Vec<EndDescriptor> {
        vec![EndDescriptor::new("omega")
            .with_ray(|l| Some(lad('u', 0, l)))
            .with_antiray(|l| Some(lad('w', 0, l)))]
    }
}

/// Width of the fan each dominating apex sends into row 0.
const FAN_WIDTH: u32 = 6;

/// `k` parallel rays joined by bidirectional rungs (one end of in-degree
/// exactly `k`) plus `m` dominating apexes. Each apex fans into the first
/// columns of row 0 and is reached back through its own descent chain
/// (`ret`), fed from row 0 at every column.
pub struct KRays {
    k: u32,
    m: u32,
}

pub fn krays(k: u32, m: u32) -> Result<KRays> {
    if k == 0 {
        return Err(Error::BadParameter("krays needs k >= 1".into()));
    }
    Ok(KRays { k, m })
}

fn kr(j: u32, c: u32) -> VertexId {
    VertexId::with_coord(format!("r{j}_{c}"), vec![j as i64, c as i64])
}

fn kr_dom(p: u32, k: u32) -> VertexId {
    VertexId::with_coord(format!("dom{p}"), vec![(k + p) as i64, -1])
}

fn kr_ret(p: u32, c: u32, k: u32) -> VertexId {
    VertexId::with_coord(format!("ret{p}_{c}"), vec![(k + p) as i64, c as i64])
}

impl Presentation for KRays {
    fn name(&self) -> &str {
        "krays"
    }

    fn span_bound(&self, _depth: u32) -> u32 {
        if self.m > 0 {
            FAN_WIDTH
        } else {
            1
        }
    }

    fn vertices_at(&self, level: u32) -> Vec<VertexId> {
        let mut vs: Vec<VertexId> = (0..self.k).map(|j| kr(j, level)).collect();
        if level == 0 {
            vs.extend((0..self.m).map(|p| kr_dom(p, self.k)));
        }
        vs.extend((0..self.m).map(|p| kr_ret(p, level, self.k)));
        vs
    }

    fn out_edges(&self, v: &VertexId, max_level: u32) -> Vec<VertexId> {
        let tag = v.tag();
        if let Some(rest) = tag.strip_prefix("dom") {
            let Ok(_p) = rest.parse::<u32>() else {
                return Vec::new();
            };
            return (1..=FAN_WIDTH.min(max_level)).map(|c| kr(0, c)).collect();
        }
        if let Some(rest) = tag.strip_prefix("ret") {
            let Some((p, c)) = rest
                .split_once('_')
                .and_then(|(p, c)| Some((p.parse().ok()?, c.parse::<u32>().ok()?)))
            else {
                return Vec::new();
            };
            return if c >= 1 {
                vec![kr_ret(p, c - 1, self.k)]
            } else {
                vec![kr_dom(p, self.k)]
            };
        }
        let Some((j, c)) = tag
            .strip_prefix('r')
            .and_then(|r| r.split_once('_'))
            .and_then(|(j, c)| Some((j.parse::<u32>().ok()?, c.parse::<u32>().ok()?)))
        else {
            return Vec::new();
        };
        let mut out = Vec::new();
        if c < max_level {
            out.push(kr(j, c + 1));
        }
        if j + 1 < self.k {
            out.push(kr(j + 1, c));
        }
        if j >= 1 {
            out.push(kr(j - 1, c));
        }
        if j == 0 {
            out.extend((0..self.m).map(|p| kr_ret(p, c, self.k)));
        }
        out
    }

    fn ends(&self) -> Vec<EndDescriptor> {
        let k = self.k;
        vec![EndDescriptor::new("omega")
            .with_ray(move |l| Some(kr(0, l)))
            .with_dominating_candidates((0..self.m).map(|p| kr_dom(p, k)).collect())]
    }
}

/// Looks a family up by its CLI name, applying `--param` style parameters.
pub fn by_name(
    name: &str,
    params: &BTreeMap<String, String>,
) -> Result<Box<dyn Presentation + Send + Sync>> {
    let get = |key: &str, default: u32| -> Result<u32> {
        match params.get(key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| Error::BadParameter(format!("{key}={v} is not a number"))),
        }
    };
    match name {
        "counterexample" => {
            if get("unit_diagonals", 0)? != 0 {
                Ok(Box::new(counterexample_with_unit_diagonals()))
            } else {
                Ok(Box::new(counterexample()))
            }
        }
        "example52" => Ok(Box::new(example52())),
        "halfgrid" => Ok(Box::new(halfgrid())),
        "ladder" => Ok(Box::new(ladder(get("rows", 3)?.max(1)))),
        "krays" => Ok(Box::new(krays(get("k", 2)?, get("m", 0)?)?)),
        other => Err(Error::UnknownFamily(other.to_owned())),
    }
}
