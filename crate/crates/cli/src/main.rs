//! `enddeg`: build truncations of the built-in infinite digraph families,
//! run Menger flows, estimate end degrees, and verify the structural
//! suites.
//!
//! Exit codes: 0 success / verified pass, 1 verified failure with a
//! witness, 2 usage or input errors.

#![forbid(unsafe_code)]

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use enddeg::constructions::{
    self, combined_in_degree, verify_counterexample, verify_edge_counterexample,
    ExhaustingSequence,
};
use enddeg::digraph::{LevelledDigraph, VertexId};
use enddeg::flow::{self, DisjointMode};
use enddeg::{families, io, truncate};

#[derive(Parser)]
#[command(name = "enddeg", version, about = "finite-scale end analysis of infinite digraphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Args)]
struct InputArgs {
    /// Built-in family name (counterexample, example52, halfgrid, ladder, krays).
    #[arg(long, conflicts_with = "input")]
    family: Option<String>,

    /// JSON digraph document to load instead of a family.
    #[arg(long)]
    input: Option<PathBuf>,

    /// Truncation depth for families.
    #[arg(long, default_value_t = 12)]
    depth: u32,

    /// Family parameters, repeatable: --param k=4
    #[arg(long = "param", value_parser = parse_param)]
    params: Vec<(String, String)>,
}

fn parse_param(s: &str) -> Result<(String, String), String> {
    s.split_once('=')
        .map(|(k, v)| (k.to_owned(), v.to_owned()))
        .ok_or_else(|| format!("expected key=value, got {s}"))
}

impl InputArgs {
    fn load(&self) -> Result<LevelledDigraph, enddeg::Error> {
        match (&self.family, &self.input) {
            (Some(name), None) => {
                let params: BTreeMap<String, String> = self.params.iter().cloned().collect();
                let p = families::by_name(name, &params)?;
                truncate(p.as_ref(), self.depth)
            }
            (None, Some(path)) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| enddeg::Error::Parse(format!("{}: {e}", path.display())))?;
                io::from_json(&text)
            }
            _ => Err(enddeg::Error::Parse(
                "exactly one of --family and --input is required".into(),
            )),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Truncate a family (or re-emit an input document) as JSON or DOT.
    Truncate {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Write to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Convert between digraph representations (alias of truncate).
    Export {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long, value_enum, default_value = "dot")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Maximum disjoint dipath systems and the dual separator.
    Menger {
        #[command(flatten)]
        input: InputArgs,
        /// Source selector: ids, `level>=N`, `level<=N`, `ray:END`, comma-separated.
        #[arg(long)]
        sources: String,
        #[arg(long)]
        targets: String,
        #[arg(long, value_enum, default_value = "vertex")]
        mode: MengerMode,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Degree report of a declared end.
    Degree {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        end: String,
        #[arg(long, short = 't', default_value_t = 5)]
        threshold: u32,
        /// Sweep depths `a..b` inclusive, evaluated concurrently.
        #[arg(long)]
        depths: Option<String>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Structural verification suites.
    Verify {
        /// counterexample | edge-counterexample | exhausting
        #[arg(long)]
        check: String,
        #[arg(long, default_value_t = 20)]
        depth: u32,
        /// Family for the exhausting check.
        #[arg(long)]
        family: Option<String>,
        #[arg(long = "param", value_parser = parse_param)]
        params: Vec<(String, String)>,
        #[arg(long, default_value = "omega")]
        end: String,
        /// Sequence file: JSON array of arrays of vertex ids.
        #[arg(long)]
        seq: Option<PathBuf>,
        #[arg(long, default_value_t = 200)]
        limit: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum MengerMode {
    Vertex,
    Internal,
    Edge,
}

fn parse_selector(g: &LevelledDigraph, sel: &str) -> Result<Vec<VertexId>, enddeg::Error> {
    let mut out = Vec::new();
    for atom in sel.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        if let Some(rest) = atom.strip_prefix("level>=") {
            let n: u32 = rest
                .parse()
                .map_err(|_| enddeg::Error::Parse(format!("bad selector {atom}")))?;
            out.extend(g.vertices().filter(|v| g.level(v).unwrap() >= n).cloned());
        } else if let Some(rest) = atom.strip_prefix("level<=") {
            let n: u32 = rest
                .parse()
                .map_err(|_| enddeg::Error::Parse(format!("bad selector {atom}")))?;
            out.extend(g.vertices().filter(|v| g.level(v).unwrap() <= n).cloned());
        } else if let Some(name) = atom.strip_prefix("ray:") {
            let (name, min) = match name.split_once(">=") {
                Some((n, m)) => (
                    n,
                    m.parse::<u32>()
                        .map_err(|_| enddeg::Error::Parse(format!("bad selector {atom}")))?,
                ),
                None => (name, 0),
            };
            let end = g.end(name)?.clone();
            out.extend(
                end.ray_vertices(g)
                    .into_iter()
                    .filter(|v| g.level(v).unwrap() >= min),
            );
        } else {
            let v = VertexId::new(atom);
            if !g.contains(&v) {
                return Err(enddeg::Error::Parse(format!("unknown vertex {atom}")));
            }
            out.push(v);
        }
    }
    Ok(out)
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<(), enddeg::Error> {
    match out {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(path) => std::fs::write(path, text)
            .map_err(|e| enddeg::Error::Parse(format!("{}: {e}", path.display()))),
    }
}

fn run() -> Result<ExitCode, enddeg::Error> {
    match Cli::parse().command {
        Command::Truncate { input, format, out } | Command::Export { input, format, out } => {
            let g = input.load()?;
            let text = match format {
                Format::Json => io::to_json(&g),
                Format::Dot => io::to_dot(&g),
                Format::Text => format!("{g:?}\n"),
            };
            emit(out.as_ref(), &text)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Menger { input, sources, targets, mode, format } => {
            let g = input.load()?;
            let a = parse_selector(&g, &sources)?;
            let b = parse_selector(&g, &targets)?;
            let sys = match mode {
                MengerMode::Vertex => {
                    flow::max_disjoint_dipaths(&g, &a, &b, DisjointMode::VertexDisjoint)
                }
                MengerMode::Internal => {
                    flow::max_disjoint_dipaths(&g, &a, &b, DisjointMode::InternallyDisjoint)
                }
                MengerMode::Edge => flow::max_edge_disjoint_dipaths(&g, &a, &b),
            };
            sys.validate(&g)?;
            // the dual separator may not cut the named sets themselves
            let protected: Vec<VertexId> = a.iter().chain(b.iter()).cloned().collect();
            let cert = flow::min_vertex_separator(&g, &a, &b, &protected)?;
            cert.revalidate(&g)?;
            match format {
                Format::Json => {
                    let doc = serde_json::json!({
                        "paths": sys.paths,
                        "count": sys.len(),
                        "separator": cert.separator,
                        "separator_size": cert.separator.len(),
                    });
                    println!("{}", serde_json::to_string_pretty(&doc).unwrap());
                }
                _ => {
                    let mut s = String::new();
                    writeln!(s, "{} disjoint dipaths", sys.len()).unwrap();
                    for p in &sys.paths {
                        writeln!(s, "  {}", render_path(p)).unwrap();
                    }
                    writeln!(s, "separator ({}): {:?}", cert.separator.len(), cert.separator)
                        .unwrap();
                    print!("{s}");
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Degree { input, end, threshold, depths, format } => {
            let depth_list: Vec<u32> = match &depths {
                None => vec![input.depth],
                Some(range) => {
                    let (a, b) = range
                        .split_once("..")
                        .ok_or_else(|| enddeg::Error::Parse(format!("bad range {range}")))?;
                    let (a, b): (u32, u32) = (
                        a.parse().map_err(|_| enddeg::Error::Parse(format!("bad range {range}")))?,
                        b.parse().map_err(|_| enddeg::Error::Parse(format!("bad range {range}")))?,
                    );
                    (a..=b).collect()
                }
            };
            let reports: Vec<_> = std::thread::scope(|scope| {
                let handles: Vec<_> = depth_list
                    .iter()
                    .map(|&d| {
                        let input = &input;
                        let end = &end;
                        scope.spawn(move || -> Result<_, enddeg::Error> {
                            let params: BTreeMap<String, String> =
                                input.params.iter().cloned().collect();
                            let g = match (&input.family, &input.input) {
                                (Some(name), None) => {
                                    truncate(families::by_name(name, &params)?.as_ref(), d)?
                                }
                                _ => input.load()?,
                            };
                            let e = g.end(end)?.clone();
                            combined_in_degree(&g, &e, threshold)
                        })
                    })
                    .collect();
                handles.into_iter().map(|h| h.join().unwrap()).collect()
            });
            for r in reports {
                let r = r?;
                match format {
                    Format::Json => println!("{}", serde_json::to_string_pretty(&r).unwrap()),
                    _ => print!("{}", r.render_text()),
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { check, depth, family, params, end, seq, limit, format } => {
            match check.as_str() {
                "counterexample" => {
                    let report = verify_counterexample(depth)?;
                    print_report(&report, format);
                    Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
                }
                "edge-counterexample" | "edge_counterexample" => {
                    let report = verify_edge_counterexample(depth)?;
                    print_report(&report, format);
                    Ok(if report.passed() { ExitCode::SUCCESS } else { ExitCode::from(1) })
                }
                "exhausting" => {
                    let name = family.as_deref().ok_or_else(|| {
                        enddeg::Error::Parse("--family required for the exhausting check".into())
                    })?;
                    let params: BTreeMap<String, String> = params.iter().cloned().collect();
                    let g = truncate(families::by_name(name, &params)?.as_ref(), depth)?;
                    let e = g.end(&end)?.clone();
                    let path = seq.ok_or_else(|| {
                        enddeg::Error::Parse("--seq required for the exhausting check".into())
                    })?;
                    let text = std::fs::read_to_string(&path)
                        .map_err(|e| enddeg::Error::Parse(format!("{}: {e}", path.display())))?;
                    let lists: Vec<Vec<String>> = serde_json::from_str(&text)
                        .map_err(|e| enddeg::Error::Parse(e.to_string()))?;
                    let seq = ExhaustingSequence::from_lists(
                        lists
                            .into_iter()
                            .map(|l| l.into_iter().map(VertexId::new).collect())
                            .collect(),
                    );
                    match constructions::verify_exhausting(&g, &e, &seq, limit)? {
                        constructions::Verdict::Pass { witnesses_checked } => {
                            println!("PASS: {witnesses_checked} witnesses checked");
                            Ok(ExitCode::SUCCESS)
                        }
                        constructions::Verdict::Fail { witness, violated_index } => {
                            println!(
                                "FAIL at index {violated_index}: witness {}",
                                render_path(&witness)
                            );
                            Ok(ExitCode::from(1))
                        }
                    }
                }
                other => Err(enddeg::Error::Parse(format!("unknown check {other}"))),
            }
        }
    }
}

fn render_path(p: &[VertexId]) -> String {
    p.iter().map(|v| v.tag().to_owned()).collect::<Vec<_>>().join(" -> ")
}

fn print_report(report: &constructions::CheckReport, format: Format) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(report).unwrap()),
        _ => print!("{}", report.render_text()),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
